import math

import pytest
from hypothesis import given, settings, strategies as st

from ym2d import oracle, tails
from ym2d.weights import CompositeWeight, casimir_u
from ym2d.yangmills import (
    SumReport,
    SurfaceSpec,
    TruncationPolicy,
    convergence_sweep,
    euler_phi,
    partition_function,
    plane_wilson,
    sphere_wilson,
    tail_bound,
    theta,
    wilson_expectation,
    wilson_second_moment,
    wilson_variance,
)

TORUS = SurfaceSpec(genus=1, total_area=2.0, loop_area=0.7)
GENUS2 = SurfaceSpec(genus=2, total_area=2.0, loop_area=0.7)
SMALL = TruncationPolicy(k_max=3, n_max=2)


# ---------------------------------------------------------------- targets


def test_theta_reference_value():
    assert theta(1.0) == pytest.approx(1.772637204826652, rel=1e-15)


def test_theta_against_mpmath():
    mp = pytest.importorskip("mpmath")
    for x in (0.3, 1.0, 2.0, 5.0):
        ref = float(mp.jtheta(3, 0, mp.exp(-x)))
        assert theta(x) == pytest.approx(ref, rel=1e-13)


def test_theta_limits():
    # large x: only n = 0 survives; small x: diverges like sqrt(pi/x)
    assert theta(50.0) == 1.0
    assert theta(0.01) == pytest.approx(math.sqrt(math.pi / 0.01), rel=1e-6)


@given(st.floats(min_value=0.2, max_value=20.0),
       st.floats(min_value=0.01, max_value=5.0))
@settings(max_examples=30, deadline=None)
def test_theta_monotone_decreasing(x, dx):
    assert theta(x + dx) < theta(x)
    assert theta(x) > 1.0


def test_euler_phi_against_mpmath():
    mp = pytest.importorskip("mpmath")
    for q in (0.1, math.exp(-1.0), 0.5, 0.9):
        ref = float(mp.qp(q))
        assert euler_phi(q) == pytest.approx(ref, rel=1e-12)


def test_euler_phi_reference_value():
    assert euler_phi(math.exp(-1.0)) == pytest.approx(0.5044286547259668, rel=1e-15)
    # the two limit targets quoted by `limits`
    assert 1.0 / euler_phi(math.exp(-1.0)) ** 2 == pytest.approx(3.9300719513839724, rel=1e-13)


# ---------------------------------------------------------------- plane


def test_plane_closed_form():
    for t in (0.5, 1.0, 2.0):
        assert plane_wilson(t) == math.exp(-0.5 * t)


def test_plane_defining_casimir_is_one():
    # the plane value rests on c2 of the defining representation being exactly 1
    for rank in (3, 7, 20):
        w = CompositeWeight((), (1,), 0, rank)
        assert casimir_u(w) == 1


def test_plane_rejects_bad_area():
    with pytest.raises(ValueError):
        plane_wilson(0.0)
    with pytest.raises(ValueError):
        plane_wilson(-1.0)


# ------------------------------------------------------- partition function


def test_su_flat_only_is_one():
    pol = TruncationPolicy(k_max=0, n_max=0)
    for g in (1, 2, 3):
        rep = partition_function("su", g, 2.0, 7, pol)
        assert rep.value == 1.0
        assert rep.term_count == 1


def test_u_flat_only_matches_gaussian_sum():
    pol = TruncationPolicy(k_max=0, n_max=8)
    rep = partition_function("u", 2, 2.0, 7, pol)
    ref = sum(math.exp(-1.0 * n * n) for n in range(-8, 9))
    assert rep.value == pytest.approx(ref, rel=1e-15)
    assert abs(rep.value - theta(1.0)) < 1e-6


def test_partition_function_frozen_values():
    pol = TruncationPolicy(k_max=14, n_max=12)
    zu = partition_function("u", 1, 2.0, 10, pol)
    assert zu.value == pytest.approx(7.999707411473389, rel=1e-13)
    zs = partition_function("su", 2, 2.0, 10, pol)
    assert zs.value == pytest.approx(1.0077129794088235, rel=1e-13)


def test_u_torus_approaches_theta_over_phi_squared():
    """Finite-rank values drift toward theta(T/2)/phi(q)^2 from above."""
    target = theta(1.0) / euler_phi(math.exp(-1.0)) ** 2
    pol = TruncationPolicy(k_max=14, n_max=12)
    errs = []
    for rank in (10, 20, 40):
        z = partition_function("u", 1, 2.0, rank, pol).value
        errs.append(abs(z - target))
    assert errs[0] > errs[1] > errs[2]
    # the 1/N^2 constant is large; desk-scale ranks close only coarsely
    assert errs[2] < 0.2


def test_genus2_limits_close_at_moderate_rank():
    pol = TruncationPolicy(k_max=10, n_max=8)
    zs = partition_function("su", 2, 2.0, 20, pol).value
    zu = partition_function("u", 2, 2.0, 20, pol).value
    assert abs(zs - 1.0) < 5e-3
    assert abs(zu - theta(1.0)) < 5e-3


def test_classes_partition_the_value():
    rep = partition_function("u", 1, 2.0, 9, TruncationPolicy(k_max=6, n_max=4))
    assert sum(rep.classes) == pytest.approx(rep.value, rel=1e-12)
    rep = wilson_expectation("su", TORUS, 9, TruncationPolicy(k_max=6, n_max=4))
    assert sum(rep.classes) == pytest.approx(rep.value, rel=1e-12)


def test_term_count_contract():
    # canonical pairs at k_max=2, rank 4: 4 alpha shapes x 3 beta shapes
    e_su = wilson_expectation("su", TORUS, 4, TruncationPolicy(k_max=2, n_max=2))
    e_u = wilson_expectation("u", TORUS, 4, TruncationPolicy(k_max=2, n_max=2))
    assert e_su.term_count == 12
    assert e_u.term_count == 12 * 5


# ------------------------------------------------------------- wilson sums


def test_flat_only_expectation_identity():
    """k_max = 0 reduces E*Z to the explicit flat subsum, two equivalent forms."""
    rank = 7
    T, t = 2.0, 0.7
    pol = TruncationPolicy(k_max=0, n_max=10)
    s = SurfaceSpec(genus=2, total_area=T, loop_area=t)
    e = wilson_expectation("u", s, rank, pol).value
    z = partition_function("u", 2, T, rank, pol).value
    direct = sum(math.exp(-0.5 * T * n * n - 0.5 * t - t * n / rank)
                 for n in range(-10, 11))
    square = (math.exp(-0.5 * t + t * t / (2.0 * T * rank * rank))
              * sum(math.exp(-0.5 * T * (n + t / (T * rank)) ** 2)
                    for n in range(-10, 11)))
    assert e * z == pytest.approx(direct, rel=1e-12)
    assert e * z == pytest.approx(square, rel=1e-12)


def test_flat_only_second_moment_closed_form():
    rank = 6
    t = 0.7
    pol = TruncationPolicy(k_max=0, n_max=6)
    ref = (1.0 + (rank * rank - 1.0) * math.exp(-t)) / (rank * rank)
    for grp in ("su", "u"):
        m = wilson_second_moment(grp, GENUS2, rank, pol).value
        if grp == "su":
            # exact single-correction factor on the off-diagonal term
            ref_su = (1.0 + (rank * rank - 1.0) * math.exp(-t)) / (rank * rank)
            assert m == pytest.approx(ref_su, rel=1e-14)
        else:
            assert m == pytest.approx(ref, rel=1e-14)


def test_flat_only_variance_scale():
    # large T pins the measure to flat weights; Var ~ (1 - e^-t)/N^2 scale
    rank = 8
    t = 0.7
    s = SurfaceSpec(genus=2, total_area=50.0, loop_area=t)
    v = wilson_variance("u", s, rank, TruncationPolicy(k_max=0, n_max=4)).value
    scale = (1.0 - math.exp(-t)) / (rank * rank)
    assert 0.2 * scale < v < 1.2 * scale


def test_shrinking_loop_degenerates():
    pol = TruncationPolicy(k_max=8, n_max=6)
    s = SurfaceSpec(genus=1, total_area=2.0, loop_area=1e-6)
    for grp in ("su", "u"):
        e = wilson_expectation(grp, s, 6, pol).value
        m = wilson_second_moment(grp, s, 6, pol).value
        v = wilson_variance(grp, s, 6, pol).value
        assert abs(e - 1.0) < 1e-5
        assert abs(m - 1.0) < 1e-5
        assert abs(v) < 1e-5


def test_variance_positive_and_shrinking():
    pol = TruncationPolicy(k_max=8, n_max=6)
    for grp in ("su", "u"):
        for s in (TORUS, GENUS2):
            vals = [wilson_variance(grp, s, rank, pol).value
                    for rank in (6, 10, 16)]
            assert all(v > 0 for v in vals)
            assert vals[0] > vals[1] > vals[2]


def test_second_moment_tracks_exponential_target():
    pol = TruncationPolicy(k_max=10, n_max=8)
    target = math.exp(-0.7)
    errs = [abs(wilson_second_moment("u", TORUS, rank, pol).value - target)
            for rank in (6, 10, 16)]
    assert errs[0] > errs[1] > errs[2]


def test_expectation_tracks_plane_target():
    pol = TruncationPolicy(k_max=10, n_max=8)
    target = math.exp(-0.35)
    for grp in ("su", "u"):
        errs = [abs(wilson_expectation(grp, TORUS, rank, pol).value - target)
                for rank in (6, 10, 16)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[-1] < 5e-2


# ---------------------------------------------------------------- oracle


@pytest.mark.parametrize("rank", [3, 4, 5])
@pytest.mark.parametrize("genus", [1, 2])
@pytest.mark.parametrize("group", ["su", "u"])
def test_sums_match_tuple_oracle(rank, genus, group):
    """Composite-coordinate fast path equals literal tuple enumeration."""
    T, t = 2.0, 0.7
    s = SurfaceSpec(genus=genus, total_area=T, loop_area=t)
    z = partition_function(group, genus, T, rank, SMALL).value
    e = wilson_expectation(group, s, rank, SMALL).value
    m = wilson_second_moment(group, s, rank, SMALL).value
    oz = oracle.oracle_partition_function(group, genus, T, rank, 3, 2)
    oe, om = oracle.oracle_wilson(group, genus, T, t, rank, 3, 2)
    assert z == pytest.approx(oz, rel=1e-12)
    assert e == pytest.approx(oe, rel=1e-12)
    assert m == pytest.approx(om, rel=1e-12)


@pytest.mark.parametrize("rank", [3, 4, 5])
def test_sphere_matches_tuple_oracle(rank):
    w = sphere_wilson(2.0, 0.7, rank, SMALL).value
    ow = oracle.oracle_sphere(2.0, 0.7, rank, 3, 2)
    assert w == pytest.approx(ow, rel=1e-12)


def test_flat_only_oracle_agreement():
    pol = TruncationPolicy(k_max=0, n_max=2)
    for grp in ("su", "u"):
        e = wilson_expectation(grp, TORUS, 4, pol).value
        m = wilson_second_moment(grp, TORUS, 4, pol).value
        oe, om = oracle.oracle_wilson(grp, 1, 2.0, 0.7, 4, 0, 2)
        assert e == pytest.approx(oe, rel=1e-12)
        assert m == pytest.approx(om, rel=1e-12)


# ---------------------------------------------------------------- sphere


def test_sphere_shrinking_loop_slope():
    # 1 - W(t) = t/2 + O(t^2) for the master-field-like small-loop regime
    pol = TruncationPolicy(k_max=14, n_max=10)
    w = sphere_wilson(2.0, 1e-4, 3, pol).value
    assert (1.0 - w) / 1e-4 == pytest.approx(0.5, abs=1e-3)


def test_sphere_loop_area_symmetry():
    """Swapping inside and outside areas fixes the value once converged."""
    pol = TruncationPolicy(k_max=14, n_max=10)
    a = sphere_wilson(2.0, 0.7, 3, pol).value
    b = sphere_wilson(2.0, 1.3, 3, pol).value
    assert a == pytest.approx(b, abs=1e-9)


def test_sphere_monotone_to_midpoint():
    pol = TruncationPolicy(k_max=12, n_max=8)
    vals = [sphere_wilson(2.0, t, 4, pol).value for t in (0.2, 0.5, 0.8, 1.0)]
    assert vals[0] > vals[1] > vals[2] > vals[3]
    assert all(0.0 < v < 1.0 for v in vals)


def test_sphere_rejects_bad_areas():
    with pytest.raises(ValueError):
        sphere_wilson(2.0, 2.0, 4, SMALL)
    with pytest.raises(ValueError):
        sphere_wilson(2.0, 0.0, 4, SMALL)
    with pytest.raises(ValueError):
        sphere_wilson(-1.0, 0.5, 4, SMALL)


# ------------------------------------------------------------- tail bounds


def test_partition_tail_is_sound():
    """Discarded mass never exceeds the reported bound."""
    T = 2.0
    for grp in ("su", "u"):
        lo = partition_function(grp, 2, T, 10, TruncationPolicy(k_max=8, n_max=10))
        hi = partition_function(grp, 2, T, 10, TruncationPolicy(k_max=20, n_max=24))
        assert abs(hi.value - lo.value) <= lo.tail_bound
        assert lo.tail_bound > 0


def test_partition_tail_small_at_large_area():
    pol = TruncationPolicy(k_max=14, n_max=12)
    assert tail_bound(pol, "su", 2, 8.0, 10) < 1e-6
    assert tail_bound(pol, "u", 2, 8.0, 10) < 1e-6


def test_partition_tail_decreases_in_kmax():
    bounds = [tail_bound(TruncationPolicy(k_max=k, n_max=10), "su", 2, 3.0, 10)
              for k in (6, 10, 14)]
    assert bounds[0] > bounds[1] > bounds[2]


def test_expectation_tail_sound_at_large_area():
    s = SurfaceSpec(genus=2, total_area=8.0, loop_area=1.0)
    lo = wilson_expectation("su", s, 10, TruncationPolicy(k_max=8, n_max=6))
    hi = wilson_expectation("su", s, 10, TruncationPolicy(k_max=16, n_max=12))
    assert abs(hi.value - lo.value) <= lo.tail_bound
    assert lo.tail_bound < 1e-2


def test_wilson_tail_precondition():
    # rank * T <= 8 t leaves no decay margin; the bound degrades to infinity
    e = wilson_expectation("u", TORUS, 2, TruncationPolicy(k_max=4, n_max=4))
    assert math.isinf(e.tail_bound)
    assert 0.0 < e.value < 1.0


def test_variance_tail_combination_rule():
    assert tails.variance_tail(1e-3, 1e-4, 0.7) == pytest.approx(
        1e-3 + 2 * 0.7 * 1e-4 + 1e-8)


def test_sphere_tail_finite():
    rep = sphere_wilson(2.0, 0.7, 3, TruncationPolicy(k_max=10, n_max=8))
    assert math.isfinite(rep.tail_bound)
    assert rep.tail_bound > 0


# ------------------------------------------------------------ determinism


def test_sweep_workers_do_not_change_bits():
    pol = TruncationPolicy(k_max=6, n_max=6)
    r1 = convergence_sweep("u", TORUS, [6, 9], pol, workers=1)
    r2 = convergence_sweep("u", TORUS, [6, 9], pol, workers=2)
    r3 = convergence_sweep("u", TORUS, [6, 9], pol, workers=5)
    for a, b, c in zip(r1, r2, r3):
        for key in ("expectation", "variance"):
            assert a[key].value == b[key].value == c[key].value
            assert a[key].classes == b[key].classes == c[key].classes


def test_sweep_row_contract():
    pol = TruncationPolicy(k_max=4, n_max=3)
    rows = convergence_sweep("su", GENUS2, [5, 7], pol, timing=False)
    assert [r["rank"] for r in rows] == [5, 7]
    for r in rows:
        assert isinstance(r["expectation"], SumReport)
        assert isinstance(r["variance"], SumReport)
        assert r["wall_ms"] == 0
    e = wilson_expectation("su", GENUS2, 5, pol)
    assert rows[0]["expectation"].value == e.value


# ------------------------------------------------------------- validation


def test_group_aliases_and_errors():
    pol = TruncationPolicy(k_max=2, n_max=2)
    a = partition_function("unitary", 1, 2.0, 5, pol).value
    b = partition_function("U", 1, 2.0, 5, pol).value
    assert a == b
    with pytest.raises(ValueError):
        partition_function("so", 1, 2.0, 5, pol)


def test_surface_validation():
    with pytest.raises(ValueError):
        SurfaceSpec(genus=0, total_area=2.0, loop_area=0.5)
    with pytest.raises(ValueError):
        SurfaceSpec(genus=1, total_area=2.0, loop_area=2.5)
    with pytest.raises(ValueError):
        SurfaceSpec(genus=1, total_area=-1.0, loop_area=0.5)
    with pytest.raises(ValueError):
        SurfaceSpec(genus=1.5, total_area=2.0, loop_area=0.5)


def test_policy_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(k_max=-1)
    with pytest.raises(ValueError):
        TruncationPolicy(gamma=0.34)
    with pytest.raises(ValueError):
        TruncationPolicy(gamma=0.0)
    with pytest.raises(ValueError):
        TruncationPolicy(tail_tol=0.0)
    d = TruncationPolicy()
    assert (d.k_max, d.n_max, d.gamma, d.tail_tol) == (14, 12, 0.3, 1e-6)


def test_rank_validation():
    with pytest.raises(ValueError):
        partition_function("u", 1, 2.0, 0, SMALL)
    with pytest.raises(ValueError):
        partition_function("u", 1, 2.0, True, SMALL)


@given(st.integers(min_value=3, max_value=9), st.integers(min_value=0, max_value=4))
@settings(max_examples=15, deadline=None)
def test_class_split_property(rank, k_max):
    rep = partition_function("u", 1, 2.0, rank,
                             TruncationPolicy(k_max=k_max, n_max=3))
    assert rep.value > 0
    assert sum(rep.classes) == pytest.approx(rep.value, rel=1e-12)
    assert rep.classes[0] > 0
