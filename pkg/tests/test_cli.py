import json

import pytest

from totref import ten_vertex_graph
from totref.cli import main


def write_graph(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture()
def c4_file(tmp_path):
    return write_graph(
        tmp_path,
        "c4.json",
        {
            "vertices": ["x1", "x2", "y1", "y2"],
            "edges": [["x1", "y1"], ["x1", "y2"], ["x2", "y1"], ["x2", "y2"]],
            "bipartition": [["x1", "x2"], ["y1", "y2"]],
        },
    )


@pytest.fixture()
def ten_vertex_file(tmp_path):
    return write_graph(tmp_path, "ten_vertex.json", ten_vertex_graph().to_json())


@pytest.fixture()
def tree_file(tmp_path):
    return write_graph(
        tmp_path,
        "tree.json",
        {"vertices": ["x1", "y1", "x2", "y2"], "edges": [["x1", "y1"], ["y1", "x2"], ["x2", "y2"]]},
    )


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_analyze_c4(capsys, c4_file):
    code, rep = run_json(capsys, ["analyze", c4_file])
    assert code == 0
    assert rep["verdict"] == "admits (ezd witness)"
    assert rep["ezd"]["found"] and rep["ezd"]["pair"]["certified"]
    assert rep["kernel_system"]["dimension"] == 4
    assert rep["wlp"]["has_wlp"]


def test_analyze_tree(capsys, tree_file):
    code, rep = run_json(capsys, ["analyze", tree_file])
    assert code == 0
    assert rep["verdict"] == "no-non-free-TR"
    assert rep["ring_conditions"]["m2_zero"]


def test_analyze_ten_vertex(capsys, ten_vertex_file):
    code, rep = run_json(capsys, ["analyze", ten_vertex_file])
    assert code == 0
    assert rep["verdict"] == "admits (factory witness)"
    assert rep["no_ezd_certificate"]["disconnecting_pair"] == ["x5", "y5"]
    assert not rep["ezd"]["found"]
    assert not rep["wlp"]["has_wlp"]
    assert rep["kernel_system"]["dimension"] > 4
    assert rep["ideal_pair"]["intersection_dims"] == [0, 1]
    assert rep["factory"]["certified"]


def test_analyze_direct_sum_graph(capsys, tmp_path):
    path = write_graph(
        tmp_path,
        "ds.json",
        {
            "vertices": ["x1", "x2", "x3", "y1", "y2", "y3"],
            "edges": [
                ["x1", "y1"], ["x2", "y2"], ["x3", "y1"], ["x3", "y2"],
                ["x3", "y3"], ["y3", "x1"], ["y3", "x2"],
            ],
        },
    )
    code, rep = run_json(capsys, [ "analyze", path])
    assert code == 0
    assert rep["verdict"] == "no-non-free-TR"
    assert rep["ideal_pair"]["verdict"] == "no-non-free-TR"


def test_analyze_inconclusive_exit_code(capsys, tmp_path):
    # triangle-free, leaf-free, non-bipartite with e = 2n-4: no bipartite
    # shortcut applies and the random ezd search has nothing to certify
    g = {
        "vertices": ["1", "2", "3", "4", "5", "6", "7"],
        "edges": [
            ["1", "2"], ["2", "3"], ["3", "4"], ["4", "5"], ["5", "6"], ["6", "7"], ["7", "1"],
            ["1", "4"], ["2", "5"], ["3", "6"],
        ],
    }
    path = write_graph(tmp_path, "c7.json", g)
    code, rep = run_json(capsys, ["analyze", path])
    assert rep["verdict"] in ("inconclusive", "admits (ezd witness)", "no-non-free-TR")
    assert (code == 2) == (rep["verdict"] == "inconclusive")


def test_analyze_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["analyze", str(bad)]) == 1
    missing = tmp_path / "missing.json"
    assert main(["analyze", str(missing)]) == 1
    disconnected = write_graph(
        tmp_path, "disc.json", {"vertices": ["a", "b", "c", "d"], "edges": [["a", "b"], ["c", "d"]]}
    )
    assert main(["analyze", disconnected]) == 1


def test_build_ezd_and_verify_round_trip(capsys, c4_file, tmp_path):
    out = str(tmp_path / "w.json")
    code, rep = run_json(capsys, ["build", c4_file, "--mode", "ezd", "--out", out])
    assert code == 0 and rep["status"] == "certified"
    code, vrep = run_json(capsys, ["verify", out])
    assert code == 0 and vrep["certified"]
    # round trip: load -> save -> load is idempotent
    first = json.loads(open(out).read())
    from totref import FreeComplexWindow

    again = FreeComplexWindow.from_json(first).to_json()
    assert json.dumps(first, sort_keys=True) == json.dumps(again, sort_keys=True)


def test_build_ezd_tree_inconclusive(capsys, tree_file, tmp_path):
    code = main(["build", tree_file, "--mode", "ezd", "--out", str(tmp_path / "x.json"), "--json"])
    assert code == 2


def test_build_ten_vertex_canonical(capsys, tmp_path):
    out = str(tmp_path / "tvw.json")
    code, rep = run_json(
        capsys,
        ["build", "--section4", "--mode", "factory", "--canonical",
         "--forward", "3", "--backward", "3", "--out", out],
    )
    assert code == 0 and rep["status"] == "certified"
    obj = json.loads(open(out).read())
    assert obj["betti"] == [2] * 8
    assert obj["periodic"] == {"period": 2, "verified": True}
    code, vrep = run_json(capsys, ["verify", out])
    assert code == 0 and vrep["certified"] and vrep["periodic_verified"]


def test_factory_subcommand_seeded_determinism(capsys, tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["factory", "--seed", "9", "--forward", "1", "--backward", "1", "--out", a, "--json"]) == 0
    capsys.readouterr()
    assert main(["factory", "--seed", "9", "--forward", "1", "--backward", "1", "--out", b, "--json"]) == 0
    capsys.readouterr()
    assert open(a).read() == open(b).read()
    c = str(tmp_path / "c.json")
    assert main(["factory", "--seed", "10", "--forward", "1", "--backward", "1", "--out", c, "--json"]) == 0
    capsys.readouterr()
    assert open(a).read() != open(c).read()


def test_lift_cli_pipeline(capsys, c4_file, tmp_path):
    src = str(tmp_path / "src.json")
    lifted = str(tmp_path / "lifted.json")
    assert main(["build", c4_file, "--mode", "ezd", "--forward", "5", "--backward", "5",
                 "--out", src, "--json"]) == 0
    capsys.readouterr()
    code, rep = run_json(capsys, ["lift", src, "--out", lifted])
    assert code == 0 and rep["status"] == "certified"
    assert rep["final_betti"] == [4] * len(rep["final_betti"])
    code, vrep = run_json(capsys, ["verify", lifted])
    assert code == 0 and vrep["certified"]


def test_lift_one_step(capsys, c4_file, tmp_path):
    src = str(tmp_path / "src.json")
    out = str(tmp_path / "lift1.json")
    main(["build", c4_file, "--mode", "ezd", "--forward", "4", "--backward", "4", "--out", src])
    capsys.readouterr()
    code, rep = run_json(capsys, ["lift", src, "--steps", "1", "--out", out])
    assert code == 0
    assert rep["final_betti"] == [2] * len(rep["final_betti"])


def test_lift_requires_descriptor(capsys, c4_file, tmp_path):
    src = str(tmp_path / "src.json")
    main(["build", c4_file, "--mode", "ezd", "--out", src])
    capsys.readouterr()
    obj = json.loads(open(src).read())
    del obj["algebra"]["descriptor"]
    stripped = str(tmp_path / "stripped.json")
    open(stripped, "w").write(json.dumps(obj))
    assert main(["lift", stripped, "--out", str(tmp_path / "no.json")]) == 1


def test_verify_corrupted_entry_fails(capsys, c4_file, tmp_path):
    src = str(tmp_path / "src.json")
    main(["build", c4_file, "--mode", "ezd", "--out", src])
    capsys.readouterr()
    obj = json.loads(open(src).read())
    # push the entry off its line (a pure rescaling would stay certified)
    obj["differentials"][1][0][0][1] = (obj["differentials"][1][0][0][1] + 1) % 1073741789
    bad = str(tmp_path / "bad.json")
    open(bad, "w").write(json.dumps(obj))
    code, rep = run_json(capsys, ["verify", bad])
    assert code == 0
    assert not rep["certified"]


def test_verify_unit_entry_not_minimal(capsys, c4_file, tmp_path):
    src = str(tmp_path / "src.json")
    main(["build", c4_file, "--mode", "ezd", "--out", src])
    capsys.readouterr()
    obj = json.loads(open(src).read())
    obj["constants"] = [
        [[1 if (m == 0 and r == 0 and c == 0) else 0 for c in range(len(mat[0]))]
         for r, _ in enumerate(mat)]
        for m, mat in enumerate(obj["differentials"])
    ]
    nm = str(tmp_path / "nonminimal.json")
    open(nm, "w").write(json.dumps(obj))
    code, rep = run_json(capsys, ["verify", nm])
    assert code == 0
    assert rep["minimal"] is False and rep["certified"] is False


def test_verify_malformed_file(tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text(json.dumps({"format": "nope"}))
    assert main(["verify", str(bad)]) == 1


def test_text_report_renders(capsys, c4_file):
    code = main(["analyze", c4_file])
    out = capsys.readouterr().out
    assert code == 0
    assert "verdict: admits (ezd witness)" in out


def test_analyze_deterministic_given_seed(capsys, ten_vertex_file):
    code1 = main(["analyze", ten_vertex_file, "--json", "--seed", "4"])
    out1 = capsys.readouterr().out
    code2 = main(["analyze", ten_vertex_file, "--json", "--seed", "4"])
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2


def test_rational_mode_cli(capsys, c4_file):
    code, rep = run_json(capsys, ["analyze", c4_file, "--rational"])
    assert code == 0
    assert rep["verdict"] == "admits (ezd witness)"

def test_lift_rejects_field_mismatch(capsys, c4_file, tmp_path):
    src = str(tmp_path / "src.json")
    main(["build", c4_file, "--mode", "ezd", "--out", src])
    capsys.readouterr()
    assert main(["lift", src, "--prime", "97", "--out", str(tmp_path / "no.json")]) == 1
