from random import Random

import pytest

from totref import (
    FreeComplexWindow,
    LiftError,
    assemble_epsilon,
    certify_regular,
    correction_matrix,
    ezd_complex,
    find_ezd,
    full_certification,
    lift_complex,
    lift_matrix,
    lift_through_sequence,
    reduction_chain,
)


@pytest.fixture(scope="module")
def c4_setup(c4_chain5):
    chain = c4_chain5
    R = chain.bottom
    pair = find_ezd(R, "bipartite-canonical", trials=32, rng=Random(1), x_labels={"x1", "x2"})
    w = ezd_complex(R, pair, half_length=5)
    return chain, R, pair, w


def test_regularity_certificates(c4_setup):
    chain, R, _, _ = c4_setup
    q1, q2 = chain.steps
    assert certify_regular(chain.top, q1.form)
    assert certify_regular(chain.mid, q2.form)
    # a zero divisor is not regular: x1 kills x1 in the top ring of the 4-cycle
    assert not certify_regular(chain.mid, chain.mid.zero(1))


def test_lift_matrix_section_round_trip(c4_setup):
    chain, R, pair, _ = c4_setup
    q2 = chain.steps[1]
    mat = [[pair.a, R.zero(1)], [pair.b, pair.a]]
    lifted = lift_matrix(mat, q2)
    for r in range(2):
        for c in range(2):
            assert q2.project(lifted[r][c]) == mat[r][c]
    zl = lift_matrix([[R.zero(1)]], q2)
    assert zl[0][0].is_zero()


def test_correction_matrix_properties(c4_setup):
    chain, R, pair, w = c4_setup
    q2 = chain.steps[1]
    S = chain.mid
    x = q2.form
    d1 = lift_matrix(w.diff(0), q2)
    d2 = lift_matrix(w.diff(1), q2)
    M = correction_matrix(d1, d2, x, S)
    # M entries are linear, hence non-units, and x*M reproduces the product
    prod = d1[0][0] * d2[0][0]
    assert (x * M[0][0] - prod).is_zero()
    assert M[0][0].degree == 1
    # a zero product gives a zero correction
    z = [[S.zero(1)]]
    M0 = correction_matrix(z, z, x, S)
    assert M0[0][0].is_zero()


def test_assemble_epsilon_shape_and_signs(c4_setup):
    chain, R, pair, w = c4_setup
    q2 = chain.steps[1]
    S = chain.mid
    x = q2.form
    d_i = lift_matrix(w.diff(1), q2)
    d_im1 = lift_matrix(w.diff(0), q2)
    M = correction_matrix(d_im1, d_i, x, S)
    even = assemble_epsilon(d_i, d_im1, M, x, 0)
    odd = assemble_epsilon(d_i, d_im1, M, x, 1)
    assert len(even) == 2 and len(even[0]) == 2
    assert even[0][1] == x and odd[0][1] == -x
    assert even[1][0] == M[0][0] and odd[1][0] == -M[0][0]
    assert even[0][0] == d_i[0][0] and even[1][1] == d_im1[0][0]


def test_lift_c4_betti_doubles(c4_setup):
    chain, R, pair, w = c4_setup
    q2, q1 = chain.steps[1], chain.steps[0]
    step1 = lift_complex(w, q2)
    assert set(step1.window.betti) == {2}
    assert step1.certified and step1.cancellation_ok
    step2 = lift_complex(step1.window, q1)
    assert set(step2.window.betti) == {4}
    assert step2.certified
    # reduction of the top-left block of epsilon recovers the source diff
    for i in step1.window.interior_indices():
        eps = step1.window.diff(i)
        src = w.diff(i)
        b = w.rank_of(i)
        for r in range(len(src)):
            for c in range(len(src[0])):
                assert q2.project(eps[r][c]) == src[r][c]


def test_lift_through_sequence_identity_and_chain(c4_setup):
    chain, R, pair, w = c4_setup
    final, steps = lift_through_sequence(w, [])
    assert final is w and steps == []
    final, steps = lift_through_sequence(w, [chain.steps[1], chain.steps[0]])
    assert [set(s.window.betti) for s in steps] == [{2}, {4}]
    assert all(s.certified for s in steps)
    cert = full_certification(final)
    assert cert.certified


def test_lift_rejects_non_complex_source(c4_setup):
    chain, R, pair, _ = c4_setup
    q2 = chain.steps[1]
    x, y = R.generators()
    bad = FreeComplexWindow(R, -2, 2, [1] * 5, [[[x]], [[y]], [[x]], [[y]]], base_twist=-2)
    assert not bad.compose_check()
    with pytest.raises(LiftError):
        lift_complex(bad, q2)


def test_lift_negative_control_non_exact_source(path4, gf):
    # the tree reduction has m^2 = 0: the x-multiplication window composes but
    # is not exact, and its lift must fail verification
    chain = reduction_chain(path4, cutoff=5, field=gf)
    R = chain.bottom
    assert list(R.dims)[:3] == [1, 2, 0]
    x = R.generators()[0]
    w = FreeComplexWindow(R, -3, 3, [1] * 7, [[[x]] for _ in range(6)], base_twist=-3)
    assert w.compose_check()
    assert not w.graded_exactness().exact
    with pytest.raises(LiftError):
        lift_complex(w, chain.steps[1])  # the exactness gate refuses
    step = lift_complex(w, chain.steps[1], check=False)
    assert not step.certificate.exactness.exact
    assert not step.certified


def test_lift_window_too_short(c4_setup):
    chain, R, pair, _ = c4_setup
    w = ezd_complex(R, pair, half_length=5)
    short = FreeComplexWindow(R, 0, 1, [1, 1], [w.diff(1)], base_twist=0)
    with pytest.raises(LiftError):
        lift_complex(short, chain.steps[1])
