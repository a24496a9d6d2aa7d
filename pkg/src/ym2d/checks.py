"""Named invariant suites behind the ``verify`` subcommand.

Every check enumerates a finite family of cases and tests each one.  The
identity checks compare big integers or Fractions, so a pass means exact
equality; tolerances appear only where floating point is intrinsic (the
Schur evaluation oracle and the truncated-sum cross-checks).

A check returns a CheckResult carrying per-case pass/fail counts.  The CLI
sums failures over a suite and turns any nonzero total into exit status 1.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import oracle
from .partitions import (
    add_box,
    border_strips,
    hook_lengths,
    partitions_of,
    remove_box,
    sym_dim,
)
from .weights import (
    CompositeWeight,
    casimir_su,
    casimir_su_explicit,
    casimir_u,
    casimir_u_explicit,
    compose,
    decompose,
    dim,
    dim_explicit,
    is_canonical,
    schur_eval,
    shift,
    sim_neighbors,
    successors,
)
from .yangmills import (
    SurfaceSpec,
    TruncationPolicy,
    partition_function,
    plane_wilson,
    sphere_wilson,
    wilson_expectation,
    wilson_second_moment,
)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: int
    failed: int
    note: str = ""

    @property
    def ok(self) -> bool:
        # an empty enumeration is a bug, not a pass
        return self.failed == 0 and self.passed > 0


def _tally(suite, name, cases):
    passed = failed = 0
    note = ""
    for label, ok in cases:
        if ok:
            passed += 1
        else:
            failed += 1
            if not note:
                note = f"first failure at {label}"
    return CheckResult(suite, name, passed, failed, note)


def _shapes(size_cap, len_cap=None):
    out = []
    for k in range(size_cap + 1):
        for p in partitions_of(k):
            if len_cap is None or len(p) <= len_cap:
                out.append(p)
    return out


def _fitting_pairs(rank, size_cap):
    """All composite pairs with each side of size <= size_cap that the rank
    can hold; canonical or not."""
    shapes = _shapes(size_cap)
    return [
        (a, b) for a in shapes for b in shapes if len(a) + len(b) + 1 <= rank
    ]


def _canonical_total(rank, total_cap):
    """Canonical pairs with |alpha| + |beta| <= total_cap."""
    out = []
    for ka in range(total_cap + 1):
        for a in partitions_of(ka):
            for kb in range(total_cap - ka + 1):
                for b in partitions_of(kb):
                    if is_canonical(a, b, rank):
                        out.append((a, b))
    return out


def _su_normalized(alpha, beta, rank):
    parts = compose(alpha, beta, 0, rank)
    return shift(parts, -parts[-1])


# --- exact identities ---------------------------------------------------


def _id_round_trip():
    """decompose inverts compose exactly on canonical pairs, and always
    returns coordinates for the same explicit tuple."""

    def cases():
        for rank in range(2, 11):
            for a, b in _fitting_pairs(rank, 4):
                canon = is_canonical(a, b, rank)
                for n in (-2, 0, 3):
                    parts = compose(a, b, n, rank)
                    w = decompose(parts)
                    same = (w.alpha, w.beta, w.n) == (a, b, n)
                    ok = w.explicit() == parts and same == canon
                    yield ((a, b, n, rank), ok)

    return _tally("identities", "coordinate-round-trip", cases())


def _id_dimension_factorization():
    """The two-partition dimension product equals the rank-long Weyl
    product, for every plateau value."""

    def cases():
        for rank in range(2, 13):
            for a, b in _fitting_pairs(rank, 4):
                d = dim(CompositeWeight(a, b, 0, rank))
                for n in (-2, 0, 3):
                    ok = dim_explicit(compose(a, b, n, rank)) == d
                    yield ((a, b, n, rank), ok)

    return _tally("identities", "dimension-factorization", cases())


def _id_hook_content():
    """Weyl product vs the hook-content product for one-sided weights."""

    def cases():
        for rank in range(1, 9):
            for lam in _shapes(8, len_cap=rank):
                padded = lam + (0,) * (rank - len(lam))
                hooks = hook_lengths(lam)
                prod = Fraction(1)
                for i, row in enumerate(lam):
                    for j in range(row):
                        prod *= Fraction(rank + j - i, hooks[i][j])
                yield ((lam, rank), prod == dim_explicit(padded))

    return _tally("identities", "hook-content-dimension", cases())


def _id_casimir_closed_forms():
    """Composite-coordinate Casimir formulas vs the tuple formulas."""

    def cases():
        for rank in range(2, 13):
            for a, b in _fitting_pairs(rank, 4):
                lam = _su_normalized(a, b, rank)
                ok = casimir_su(a, b, rank) == casimir_su_explicit(lam)
                yield ((a, b, rank, "su"), ok)
                for n in (-2, 0, 3):
                    w = CompositeWeight(a, b, n, rank)
                    ok = casimir_u(w) == casimir_u_explicit(w.explicit())
                    yield ((a, b, n, rank, "u"), ok)

    return _tally("identities", "casimir-closed-forms", cases())


def _id_casimir_shift_law():
    """Translating a normalized weight by m shifts its Casimir number by
    exactly (m + |lambda|/N)^2."""

    def cases():
        for rank in range(2, 13):
            for a, b in _fitting_pairs(rank, 4):
                lam = _su_normalized(a, b, rank)
                c_su = casimir_su_explicit(lam)
                size = sum(lam)
                for m in (-2, 0, 3):
                    lhs = casimir_u_explicit(shift(lam, m))
                    rhs = c_su + (m + Fraction(size, rank)) ** 2
                    yield ((a, b, m, rank), lhs == rhs)

    return _tally("identities", "casimir-shift-law", cases())


def _id_single_box_steps():
    """Exact Casimir change across a one-box branching move.

    Growing alpha at row i (old value a_i) raises the Casimir number by
    1 + (2/N)(a_i + n + 1 - i); shrinking beta at row i (old value b_i)
    lowers it by 1 + (2/N)(b_i - n - i).
    """

    def cases():
        for rank in (3, 5, 8, 12):
            for a, b in _fitting_pairs(rank, 4):
                for n in (-2, 0, 3):
                    c0 = casimir_u(CompositeWeight(a, b, n, rank))
                    for i0 in range(1, len(a) + 2):
                        if i0 <= len(a):
                            old = a[i0 - 1]
                            if i0 > 1 and a[i0 - 2] == old:
                                continue
                            a2 = a[: i0 - 1] + (old + 1,) + a[i0:]
                        else:
                            old = 0
                            a2 = a + (1,)
                        if len(a2) + len(b) + 1 > rank:
                            continue
                        c2 = casimir_u(CompositeWeight(a2, b, n, rank))
                        step = -1 - Fraction(2 * (old + n + 1 - i0), rank)
                        yield ((a, b, n, rank, "a", i0), c0 - c2 == step)
                    for i0 in range(1, len(b) + 1):
                        bv = b[i0 - 1]
                        if i0 < len(b) and bv == b[i0]:
                            continue
                        b2 = b[: i0 - 1] + ((bv - 1,) if bv > 1 else ()) + b[i0:]
                        c2 = casimir_u(CompositeWeight(a, b2, n, rank))
                        step = 1 + Fraction(2 * (bv - n - i0), rank)
                        yield ((a, b, n, rank, "b", i0), c0 - c2 == step)

    return _tally("identities", "single-box-casimir-step", cases())


def _id_pieri_dimension_sum():
    """Dimensions of the covering weights sum to N times the dimension;
    tensoring with the defining representation, counted exactly."""

    def cases():
        for rank in range(2, 11):
            for a, b in _fitting_pairs(rank, 3):
                w = CompositeWeight(a, b, 0, rank)
                tot = sum(
                    dim(x) for x in successors(w, on_overflow="renormalize")
                )
                yield ((a, b, rank), tot == rank * dim(w))

    return _tally("identities", "pieri-dimension-sum", cases())


def _id_tableau_branching():
    """Standard tableau counts satisfy both symmetric-group branching sums:
    restriction preserves the count, induction scales it by |lambda|+1."""

    def cases():
        for lam in _shapes(8):
            size = sum(lam)
            up = sum(sym_dim(m) for m in add_box(lam))
            yield ((lam, "up"), up == (size + 1) * sym_dim(lam))
            if lam:
                down = sum(sym_dim(m) for m in remove_box(lam))
                yield ((lam, "down"), down == sym_dim(lam))

    return _tally("identities", "tableau-branching-sums", cases())


def _id_box_path_count():
    """Removing one box and adding one back reaches tableau mass
    |lambda| * d(lambda), summed over all two-step paths."""

    def cases():
        for lam in _shapes(8):
            tot = sum(
                sym_dim(m) for nu in remove_box(lam) for m in add_box(nu)
            )
            yield (lam, tot == sum(lam) * sym_dim(lam))

    return _tally("identities", "box-path-count", cases())


def _unit_points(rng, count):
    # well-separated points keep the alternant denominator sane
    while True:
        xs = [cmath.exp(2j * math.pi * rng.random()) for _ in range(count)]
        if all(
            abs(xs[i] - xs[j]) > 1e-3
            for i in range(count)
            for j in range(i + 1, count)
        ):
            return xs


def _id_schur_box_branching():
    """Multiplying a Schur polynomial by the trace splits it over the
    one-box extensions, at random points on the unit circle."""
    rng = random.Random(1543)

    def cases():
        for rank in (3, 4):
            shapes = _shapes(4, len_cap=rank)
            for trial in range(20):
                xs = _unit_points(rng, rank)
                memo = {}

                def sv(parts):
                    if parts not in memo:
                        memo[parts] = schur_eval(parts, xs)
                    return memo[parts]

                p1 = sum(xs)
                for lam in shapes:
                    lhs = p1 * sv(lam + (0,) * (rank - len(lam)))
                    rhs = 0j
                    for mu in add_box(lam):
                        if len(mu) <= rank:
                            rhs += sv(mu + (0,) * (rank - len(mu)))
                    ok = abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))
                    yield ((lam, rank, trial), ok)

    return _tally("identities", "schur-box-branching", cases())


def _id_schur_power_sum():
    """Power-sum times Schur equals the signed border-strip sum, at random
    points on the unit circle (strip heights set the signs)."""
    rng = random.Random(2741)

    def cases():
        for rank in (3, 4):
            shapes = _shapes(4, len_cap=rank)
            for trial in range(20):
                xs = _unit_points(rng, rank)
                memo = {}

                def sv(parts):
                    if parts not in memo:
                        memo[parts] = schur_eval(parts, xs)
                    return memo[parts]

                for lam in shapes:
                    s0 = sv(lam + (0,) * (rank - len(lam)))
                    for r in (1, 2, 3, 4):
                        lhs = sum(x**r for x in xs) * s0
                        rhs = 0j
                        for mu, height in border_strips(lam, r):
                            if len(mu) <= rank:
                                rhs += (-1) ** height * sv(
                                    mu + (0,) * (rank - len(mu))
                                )
                        ok = abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))
                        yield ((lam, r, rank, trial), ok)

    return _tally("identities", "schur-power-sum", cases())


# --- proved inequalities ------------------------------------------------


def _in_casimir_window():
    """The reduced Casimir number of a canonical weight of total size k
    lies in [k - k^2/N - k^2/N^2, k + k^2/N]; compared as exact rationals."""

    def cases():
        for rank in range(2, 31):
            for a, b in _canonical_total(rank, 10):
                k = sum(a) + sum(b)
                c = casimir_su(a, b, rank)
                lo = k - Fraction(k * k, rank) - Fraction(k * k, rank * rank)
                hi = k + Fraction(k * k, rank)
                yield ((a, b, rank), lo <= c <= hi)

    return _tally("inequalities", "casimir-window", cases())


def _in_casimir_half_floor():
    """Canonical weights keep at least half their size in the Casimir."""

    def cases():
        for rank in range(2, 31):
            for a, b in _canonical_total(rank, 10):
                k = sum(a) + sum(b)
                yield ((a, b, rank), casimir_su(a, b, rank) >= Fraction(k, 2))

    return _tally("inequalities", "casimir-half-floor", cases())


def _in_flat_casimir_gap():
    """Small weights have Casimir within 8 N^(2 gamma - 1) of their size."""
    gamma = 0.3

    def cases():
        for rank in (20, 50, 100):
            cut = int(rank**gamma)
            bound = 8 * rank ** (2 * gamma - 1)
            for a in _shapes(cut):
                for b in _shapes(cut):
                    if not is_canonical(a, b, rank):
                        continue
                    k = sum(a) + sum(b)
                    gap = abs(float(casimir_su(a, b, rank)) - k)
                    yield ((a, b, rank), gap <= bound)

    return _tally("inequalities", "flat-casimir-gap", cases())


def _in_move_exponent_decay():
    """Branching moves cannot beat the area decay: for T=2, t=0.7 the
    combined exponent of a one-box or box-move neighbor stays below
    -(T/8) k + t.  Exact rational arithmetic on both sides."""
    T = Fraction(2)
    t = Fraction(7, 10)

    def cases():
        for rank in (16, 64):
            for a, b in _canonical_total(rank, 8):
                w = CompositeWeight(a, b, 0, rank)
                c_mu = casimir_su(a, b, rank)
                rhs = -(T / 8) * (sum(a) + sum(b)) + t
                near = successors(w, "renormalize") + sim_neighbors(
                    w, "renormalize"
                )
                for lam in near:
                    c_lam = casimir_su(lam.alpha, lam.beta, rank)
                    lhs = -(T / 2) * c_mu + (t / 2) * (c_mu - c_lam)
                    yield ((a, b, rank, lam.alpha, lam.beta), lhs <= rhs)

    return _tally("inequalities", "move-exponent-decay", cases())


def _in_stretched_dim_sandwich():
    """One-sided dimensions track d(alpha) N^|alpha| / |alpha|! within a
    relative 2 N^(2 gamma - 1) window."""
    gamma = 0.3

    def cases():
        for rank in (50, 200):
            eps = 2 * rank ** (2 * gamma - 1)
            for a in _shapes(int(rank**gamma)):
                ka = sum(a)
                ref = Fraction(sym_dim(a) * rank**ka, factorial(ka))
                ratio = Fraction(dim(CompositeWeight(a, (), 0, rank))) / ref
                yield ((a, rank), abs(float(ratio) - 1.0) <= eps)

    return _tally("inequalities", "stretched-dimension-sandwich", cases())


def _in_composite_dim_sandwich():
    """Two-sided dimensions track the product reference within a relative
    24 N^(3 gamma - 1) window."""
    gamma = 0.3

    def cases():
        for rank in (50, 200):
            eps = 24 * rank ** (3 * gamma - 1)
            for a in _shapes(int(rank**gamma)):
                for b in _shapes(int(rank**gamma)):
                    ka, kb = sum(a), sum(b)
                    ref = Fraction(
                        sym_dim(a) * sym_dim(b) * rank ** (ka + kb),
                        factorial(ka) * factorial(kb),
                    )
                    val = dim(CompositeWeight(a, b, 0, rank))
                    ratio = Fraction(val) / ref
                    yield ((a, b, rank), abs(float(ratio) - 1.0) <= eps)

    return _tally("inequalities", "composite-dimension-sandwich", cases())


def _in_sim_ratio_cap():
    """Dimension mass of the box-move neighbors is at most N^2 - 1 times
    the weight's own dimension (adjoint tensor bound), exactly."""

    def cases():
        for rank in range(2, 11):
            for a, b in _fitting_pairs(rank, 3):
                w = CompositeWeight(a, b, 0, rank)
                tot = sum(
                    dim(x) for x in sim_neighbors(w, on_overflow="renormalize")
                )
                ok = Fraction(tot, dim(w)) <= rank * rank - 1
                yield ((a, b, rank), ok)

    return _tally("inequalities", "sim-ratio-cap", cases())


# --- truncated-sum cross-checks -----------------------------------------


def _sum_oracle_agreement():
    """Engine sums agree with direct tuple enumeration at small cutoffs."""

    def cases():
        pol = TruncationPolicy(k_max=2, n_max=1)
        T, t = 2.0, 0.7
        for rank in (3, 4):
            for genus in (1, 2):
                for group in ("u", "su"):
                    z = partition_function(group, genus, T, rank, pol).value
                    oz = oracle.oracle_partition_function(
                        group, genus, T, rank, 2, 1
                    )
                    yield ((group, genus, rank, "z"), abs(z - oz) <= 1e-12 * oz)
                    surf = SurfaceSpec(genus, T, t)
                    e = wilson_expectation(group, surf, rank, pol).value
                    m = wilson_second_moment(group, surf, rank, pol).value
                    oe, om = oracle.oracle_wilson(group, genus, T, t, rank, 2, 1)
                    yield ((group, genus, rank, "e"), abs(e - oe) <= 1e-12 * abs(oe))
                    yield ((group, genus, rank, "m"), abs(m - om) <= 1e-12 * abs(om))
        w = sphere_wilson(2.0, 0.7, 3, pol).value
        ow = oracle.oracle_sphere(2.0, 0.7, 3, 2, 1)
        yield (("sphere",), abs(w - ow) <= 1e-12 * abs(ow))

    return _tally("sums", "truncated-oracle-agreement", cases())


def _sum_loop_normalization():
    """A vanishing loop leaves the normalized trace at 1."""

    def cases():
        pol = TruncationPolicy(k_max=8, n_max=6)
        for group in ("u", "su"):
            for genus in (1, 2):
                surf = SurfaceSpec(genus, 2.0, 1e-8)
                e = wilson_expectation(group, surf, 6, pol).value
                yield ((group, genus), abs(e - 1.0) <= 1e-6)

    return _tally("sums", "shrinking-loop-normalization", cases())


def _sum_class_split():
    """The four class subtotals add up to the reported value."""

    def cases():
        pol = TruncationPolicy(k_max=6, n_max=4)
        rep = partition_function("u", 1, 2.0, 10, pol)
        yield ("z", abs(sum(rep.classes) - rep.value) <= 1e-12 * abs(rep.value))
        rep = wilson_expectation("su", SurfaceSpec(2, 2.0, 0.7), 8, pol)
        yield ("e", abs(sum(rep.classes) - rep.value) <= 1e-12 * abs(rep.value))
        rep = sphere_wilson(2.0, 0.7, 4, pol)
        yield ("sphere", abs(sum(rep.classes) - rep.value) <= 1e-12 * abs(rep.value))

    return _tally("sums", "class-split-additivity", cases())


def _sum_tail_dominates():
    """Refining the cutoffs moves a sum by less than its certificate."""

    def cases():
        coarse_pol = TruncationPolicy(k_max=8, n_max=8)
        fine_pol = TruncationPolicy(k_max=16, n_max=16)
        for group in ("u", "su"):
            coarse = partition_function(group, 1, 2.0, 10, coarse_pol)
            fine = partition_function(group, 1, 2.0, 10, fine_pol)
            gap = abs(fine.value - coarse.value)
            yield ((group, "z"), gap <= coarse.tail_bound)
        surf = SurfaceSpec(1, 8.0, 2.0)
        coarse = wilson_expectation("su", surf, 10, coarse_pol)
        fine = wilson_expectation("su", surf, 10, TruncationPolicy(k_max=14, n_max=8))
        yield (("su", "e"), abs(fine.value - coarse.value) <= coarse.tail_bound)

    return _tally("sums", "tail-dominates-refinement", cases())


def _sum_plane_value():
    """The plane loop is the heat factor of the defining weight, whose
    Casimir number is exactly 1 at every rank."""

    def cases():
        for rank in (3, 7, 20):
            c = casimir_u(CompositeWeight((1,), (), 0, rank))
            yield (("casimir", rank), c == 1)
        for t in (0.5, 1.0, 2.0):
            yield (("value", t), plane_wilson(t) == math.exp(-0.5 * t))

    return _tally("sums", "plane-heat-factor", cases())


def _sum_sphere_symmetry():
    """Complementary loop areas give the same sphere value once the sum
    has converged."""

    def cases():
        pol = TruncationPolicy(k_max=14, n_max=10)
        lo = sphere_wilson(2.0, 0.7, 3, pol).value
        hi = sphere_wilson(2.0, 1.3, 3, pol).value
        yield ((0.7, 1.3), abs(lo - hi) <= 1e-9)

    return _tally("sums", "sphere-area-symmetry", cases())


SUITES = {
    "identities": (
        _id_round_trip,
        _id_dimension_factorization,
        _id_hook_content,
        _id_casimir_closed_forms,
        _id_casimir_shift_law,
        _id_single_box_steps,
        _id_pieri_dimension_sum,
        _id_tableau_branching,
        _id_box_path_count,
        _id_schur_box_branching,
        _id_schur_power_sum,
    ),
    "inequalities": (
        _in_casimir_window,
        _in_casimir_half_floor,
        _in_flat_casimir_gap,
        _in_move_exponent_decay,
        _in_stretched_dim_sandwich,
        _in_composite_dim_sandwich,
        _in_sim_ratio_cap,
    ),
    "sums": (
        _sum_oracle_agreement,
        _sum_loop_normalization,
        _sum_class_split,
        _sum_tail_dominates,
        _sum_plane_value,
        _sum_sphere_symmetry,
    ),
}


def run_suite(name):
    """Run one suite; returns its CheckResults in registry order."""
    try:
        funcs = SUITES[name]
    except KeyError:
        raise ValueError(
            f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}"
        ) from None
    return [f() for f in funcs]


def run_suites(names=None):
    """Run the named suites (default: all) and return the flat result list."""
    if names is None:
        names = list(SUITES)
    out = []
    for name in names:
        out.extend(run_suite(name))
    return out
