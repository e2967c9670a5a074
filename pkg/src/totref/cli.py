"""Command-line front end: analyze graphs, build/lift/verify complex windows.

Exit codes: 0 = a verdict was produced (including negative verdicts),
2 = inconclusive, 1 = error.  All randomness flows from --seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from random import Random

from .algebra import AlgebraError, GradedAlgebra, reduction_chain
from .analysis import (
    find_ezd,
    ideal_pair_analysis,
    kernel_system,
    wlp_generic,
    necessary_ring_conditions,
)
from .complexes import ComplexError, FreeComplexWindow, ezd_complex, full_certification
from .factory import (
    FactoryError,
    SpecialRing,
    build_window,
    canonical_window,
    random_blocks,
    ten_vertex_graph,
)
from .fields import PrimeField, RationalField
from .graphs import Graph, GraphError, load_graph, necessary_conditions
from .lifting import LiftError, lift_through_sequence


@dataclass
class RunConfig:
    field: object
    degree_bound: int
    seed: int
    retries: int
    forward: int
    backward: int
    as_json: bool

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        if getattr(args, "rational", False):
            field = RationalField()
        else:
            field = PrimeField(args.prime)
        if args.degree_bound < 2:
            raise ValueError("--degree-bound must be at least 2")
        return cls(
            field=field,
            degree_bound=args.degree_bound,
            seed=args.seed,
            retries=args.retries,
            forward=args.forward,
            backward=args.backward,
            as_json=args.json,
        )


def _render_text(obj, indent=0, out=None):
    pad = "  " * indent
    lines = out if out is not None else []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _is_scalar_list(v):
                lines.append(f"{pad}{k}:")
                _render_text(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{k}: {_fmt_scalar(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                _render_text(item, indent + 1, lines)
            else:
                lines.append(f"{pad}- {_fmt_scalar(item)}")
    else:
        lines.append(f"{pad}{_fmt_scalar(obj)}")
    return lines


def _is_scalar_list(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _fmt_scalar(v):
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    return str(v)


def emit_report(report: dict, config: RunConfig, stream=None):
    stream = stream or sys.stdout
    if config.as_json:
        json.dump(report, stream, indent=2)
        stream.write("\n")
    else:
        stream.write("\n".join(_render_text(report)) + "\n")


def _vertex_image(chain, vertex):
    q1, q2 = chain.steps
    return q2.project(q1.project(chain.top.generator(vertex)))


def _partition_from_pair(graph: Graph, pair):
    """Vertex components after removing the disconnecting pair: first vs rest."""
    sub = graph.induced_without(pair)
    comps = []
    seen = set()
    for v in sub.vertices:
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        queue = [v]
        while queue:
            u = queue.pop()
            for w in sub.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(comp)
    first = [v for v in sub.vertices if v in set(comps[0])]
    rest = [v for v in sub.vertices if v not in set(comps[0])]
    return first, rest


def cmd_analyze(args) -> int:
    config = RunConfig.from_args(args)
    graph = load_graph(args.graph)
    if not graph.is_connected():
        raise GraphError("analysis requires a connected graph")
    rng = Random(config.seed)
    report = {"graph": {"n": graph.n, "e": graph.e, "bipartite": graph.is_bipartite()}}
    conditions = necessary_conditions(graph)
    report["conditions"] = conditions.to_json()

    mode = "canonical" if graph.is_bipartite() else "generic"
    chain = reduction_chain(
        graph, mode=mode, seed=config.seed, cutoff=3, field=config.field, retries=config.retries
    )
    R = chain.bottom
    expected = list(chain.expected_artinian_hilbert())
    report["reduction"] = {
        "mode": mode,
        "hilbert": list(R.dims),
        "expected": expected,
        "hilbert_ok": list(R.dims) == expected,
    }
    yr = necessary_ring_conditions(R)
    report["ring_conditions"] = yr.to_json()

    has_wlp, hits, witness = wlp_generic(R, rng, trials=8)
    report["wlp"] = {"trials": 8, "surjective_samples": hits, "has_wlp": has_wlp}

    if mode == "canonical":
        xs, ys = graph.bipartition
        l1c = [1 if v in set(xs) else 0 for v in graph.vertices]
        l2c = [1 if v in set(ys) else 0 for v in graph.vertices]
    else:
        l1c = [config.field.rand(rng) for _ in graph.vertices]
        l2c = [config.field.rand(rng) for _ in graph.vertices]
    lc = [config.field.rand(rng) for _ in graph.vertices]
    ks = kernel_system(graph, l1c, l2c, lc, config.field)
    report["kernel_system"] = dict(
        ks.to_json(), wlp_equivalence_applicable=conditions.edge_count_ok
    )

    if graph.is_bipartite():
        pair = find_ezd(
            R,
            "bipartite-canonical",
            trials=config.retries,
            rng=rng,
            x_labels=set(graph.bipartition[0]),
        )
    else:
        pair = find_ezd(R, "random", trials=config.retries, rng=rng)
    report["ezd"] = {"found": pair is not None}
    if pair is not None:
        report["ezd"]["pair"] = pair.to_json()

    no_ezd_cert = None
    if conditions.disconnecting_pair and conditions.edge_count_ok:
        no_ezd_cert = {"disconnecting_pair": list(conditions.disconnecting_pair)}
    report["no_ezd_certificate"] = no_ezd_cert

    ideal_report = None
    special = None
    if graph.is_bipartite() and conditions.disconnecting_pair:
        part_a, part_b = _partition_from_pair(graph, conditions.disconnecting_pair)
        gens_a = [_vertex_image(chain, v) for v in part_a]
        gens_b = [_vertex_image(chain, v) for v in part_b]
        ideal_report = ideal_pair_analysis(R, gens_a, gens_b)
        report["ideal_pair"] = dict(
            ideal_report.to_json(), partition=[part_a, part_b]
        )
        if pair is None and ideal_report.verdict != "no-non-free-TR":
            try:
                special = SpecialRing(chain, part_a, part_b)
            except FactoryError as exc:
                report["factory"] = {"attempted": True, "applicable": False, "reason": str(exc)}

    factory_ok = False
    if special is not None:
        try:
            start = random_blocks(special, rng, max_retries=config.retries)
            _, frep = build_window(special, start, forward=2, backward=2)
            factory_ok = frep.certified
            report["factory"] = {
                "attempted": True,
                "applicable": True,
                "certified": factory_ok,
                "ring": special.to_json(),
            }
        except FactoryError as exc:
            report["factory"] = {"attempted": True, "applicable": True, "certified": False, "reason": str(exc)}

    if yr.verdict == "no-non-free-TR":
        verdict = "no-non-free-TR"
    elif ideal_report is not None and ideal_report.verdict == "no-non-free-TR":
        verdict = "no-non-free-TR"
    elif pair is not None:
        verdict = "admits (ezd witness)"
    elif factory_ok:
        verdict = "admits (factory witness)"
    else:
        verdict = "inconclusive"
    report["verdict"] = verdict
    emit_report(report, config)
    return 2 if verdict == "inconclusive" else 0


def _write_complex(window: FreeComplexWindow, report: dict, args, config: RunConfig) -> None:
    payload = json.dumps(window.to_json(), indent=1)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
        emit_report(report, config)
    else:
        sys.stdout.write(payload + "\n")
        emit_report(report, config, stream=sys.stderr)


def _load_build_graph(args) -> Graph:
    if getattr(args, "section4", False):
        return ten_vertex_graph()
    if not args.graph:
        raise GraphError("provide a graph file or --section4")
    return load_graph(args.graph)


def cmd_build(args) -> int:
    config = RunConfig.from_args(args)
    graph = _load_build_graph(args)
    rng = Random(config.seed)
    if args.mode == "ezd":
        mode = "canonical" if graph.is_bipartite() else "generic"
        chain = reduction_chain(
            graph, mode=mode, seed=config.seed, cutoff=3, field=config.field, retries=config.retries
        )
        R = chain.bottom
        if graph.is_bipartite():
            pair = find_ezd(
                R, "bipartite-canonical", trials=config.retries, rng=rng,
                x_labels=set(graph.bipartition[0]),
            )
        else:
            pair = find_ezd(R, "random", trials=config.retries, rng=rng)
        if pair is None:
            emit_report({"mode": "ezd", "status": "no exact zero divisor found"}, config)
            return 2
        window = ezd_complex(R, pair, half_length=max(config.forward, config.backward))
        cert = full_certification(window)
        report = {
            "mode": "ezd",
            "pair": pair.to_json(),
            "certificate": cert.to_json(),
            "status": "certified" if cert.certified else "failed",
        }
        _write_complex(window, report, args, config)
        return 0 if cert.certified else 2
    # factory mode
    conditions = necessary_conditions(graph)
    if not (graph.is_bipartite() and conditions.disconnecting_pair):
        emit_report({"mode": "factory", "status": "graph has no disconnecting pair"}, config)
        return 2
    part_a, part_b = _partition_from_pair(graph, conditions.disconnecting_pair)
    chain = reduction_chain(
        graph, mode="canonical", seed=config.seed, cutoff=3, field=config.field,
        retries=config.retries,
    )
    special = SpecialRing(chain, part_a, part_b)
    if args.canonical:
        window, frep = canonical_window(special, config.forward, config.backward)
    else:
        start = random_blocks(special, rng, max_retries=config.retries)
        window, frep = build_window(special, start, config.forward, config.backward)
    from .complexes import indecomposability_certificate

    no_ezd_cert = {"disconnecting_pair": list(conditions.disconnecting_pair)}
    indec = indecomposability_certificate(special.ring, window, 0, no_ezd_cert)
    report = {
        "mode": "factory",
        "ring": special.to_json(),
        "report": frep.to_json(),
        "cokernel_indecomposability": indec.to_json(),
        "status": "certified" if frep.certified else "failed",
    }
    _write_complex(window, report, args, config)
    return 0 if frep.certified else 2


def cmd_factory(args) -> int:
    args.graph = None
    args.section4 = True
    args.mode = "factory"
    return cmd_build(args)


def _rebase_window(obj: dict, algebra: GradedAlgebra) -> FreeComplexWindow:
    """Attach a loaded window to a freshly rebuilt algebra, label-checked."""
    src = obj["algebra"]
    for d in (1, 2):
        if src["basis"][d] != algebra.basis[d]:
            raise ComplexError("complex file algebra does not match the rebuilt reduction")
    return FreeComplexWindow.from_json(obj, algebra=algebra)


def cmd_lift(args) -> int:
    config = RunConfig.from_args(args)
    with open(args.complex, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if obj.get("format") != "complex":
        raise ComplexError("input is not a complex file")
    desc = obj.get("algebra", {}).get("descriptor")
    if not desc or desc.get("kind") != "graph_reduction" or desc.get("level") != 2:
        raise ComplexError(
            "lifting needs a complex over a graph reduction (missing chain descriptor)"
        )
    from .fields import field_from_json

    file_field = field_from_json(obj["algebra"]["field"])
    if file_field != config.field:
        raise ComplexError(
            "complex file uses a different field; pass matching --prime/--rational"
        )
    from .graphs import parse_graph

    graph = parse_graph(desc["graph"])
    cutoff = max(config.degree_bound, 3)
    chain = reduction_chain(
        graph, mode=desc["mode"], seed=desc.get("seed", 0), cutoff=cutoff,
        field=config.field, retries=config.retries,
    )
    window = _rebase_window(obj, chain.bottom)
    steps = min(args.steps, 2)
    qmaps = [chain.steps[1], chain.steps[0]][:steps]
    lifted, step_reports = lift_through_sequence(window, qmaps)
    report = {
        "steps": [s.to_json() for s in step_reports],
        "final_betti": list(lifted.betti),
        "status": "certified" if all(s.certified for s in step_reports) else "failed",
    }
    _write_complex(lifted, report, args, config)
    return 0 if report["status"] == "certified" else 2


def _constants_nonzero(obj, field) -> bool:
    consts = obj.get("constants")
    if not consts:
        return False
    for mat in consts:
        for row in mat:
            for c in row:
                if not field.is_zero(field.decode(c)):
                    return True
    return False


def cmd_verify(args) -> int:
    config = RunConfig.from_args(args)
    with open(args.complex, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    window = FreeComplexWindow.from_json(obj)
    has_units = _constants_nonzero(obj, window.algebra.field)
    if has_units:
        # constant terms make the stored linear matrices a different complex;
        # report non-minimality instead of certifying anything
        report = {
            "minimal": False,
            "composes": "skipped (unit entries)",
            "exactness": "skipped (unit entries)",
            "certified": False,
        }
        emit_report(report, config)
        return 0
    cert = full_certification(window)
    report = cert.to_json()
    if window.periodic is not None:
        report["periodic_verified"] = window.periodic.verified
    emit_report(report, config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="totref",
        description="Exact certification of totally reflexive module witnesses "
        "over Artinian reductions of graph rings.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=PrimeField().p, help="prime for GF(p) mode")
    common.add_argument("--rational", action="store_true", help="use exact rationals instead of GF(p)")
    common.add_argument("--degree-bound", type=int, default=5, help="internal degree bound for exactness checks")
    common.add_argument("--seed", type=int, default=0, help="seed for all randomized choices")
    common.add_argument("--retries", type=int, default=64, help="resampling / search budget")
    common.add_argument("--forward", type=int, default=4, help="window extension steps forward")
    common.add_argument("--backward", type=int, default=4, help="window extension steps backward")
    common.add_argument("--json", action="store_true", help="emit reports as JSON")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="full condition report for a graph")
    p.add_argument("graph", help="graph JSON file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("build", parents=[common], help="build a certified window")
    p.add_argument("graph", nargs="?", help="graph JSON file")
    p.add_argument("--section4", action="store_true", help="use the built-in ten-vertex graph")
    p.add_argument("--mode", choices=("ezd", "factory"), default="ezd")
    p.add_argument("--canonical", action="store_true", help="use the explicit periodic blocks")
    p.add_argument("--out", help="output path for the complex JSON")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("factory", parents=[common], help="window over the built-in special ring")
    p.add_argument("--canonical", action="store_true")
    p.add_argument("--out", help="output path for the complex JSON")
    p.set_defaults(func=cmd_factory)

    p = sub.add_parser("lift", parents=[common], help="lift a window up its reduction chain")
    p.add_argument("complex", help="complex JSON file (with chain descriptor)")
    p.add_argument("--steps", type=int, default=2, help="how many chain steps to lift")
    p.add_argument("--out", help="output path for the lifted complex JSON")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("verify", parents=[common], help="re-verify a complex file")
    p.add_argument("complex", help="complex JSON file")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, AlgebraError, ComplexError, LiftError, FactoryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
