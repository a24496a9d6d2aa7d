"""Partition functions and Wilson-loop moments on genus-g surfaces.

Values are truncated character sums over composite weights with |alpha| and
|beta| at most k_max (and, for the full unitary group, plateau offset |n| at
most n_max).  Every report carries a rigorous bound on the discarded mass and
per-class subtotals, where classes split weights by whether |alpha| and |beta|
stay below rank**gamma.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from . import engine, tails
from .tails import euler_phi, theta

__all__ = [
    "UNITARY", "SPECIAL_UNITARY", "SurfaceSpec", "TruncationPolicy",
    "SumReport", "theta", "euler_phi", "partition_function",
    "wilson_expectation", "wilson_second_moment", "wilson_variance",
    "plane_wilson", "sphere_wilson", "tail_bound", "convergence_sweep",
]

UNITARY = "u"
SPECIAL_UNITARY = "su"

_GROUP_ALIASES = {
    "u": "u", "unitary": "u",
    "su": "su", "special_unitary": "su", "special-unitary": "su",
}


def _norm_group(group: str) -> str:
    try:
        return _GROUP_ALIASES[str(group).lower()]
    except KeyError:
        raise ValueError(f"unknown group {group!r}; expected 'u' or 'su'") from None


def _check_rank(rank) -> int:
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise ValueError(f"rank must be a positive integer, got {rank!r}")
    return rank


def _check_workers(workers) -> int:
    if not isinstance(workers, int) or workers < 1:
        raise ValueError(f"workers must be a positive integer, got {workers!r}")
    return workers


@dataclass(frozen=True)
class SurfaceSpec:
    """Closed orientable surface of genus >= 1 with one simple loop on it."""

    genus: int
    total_area: float
    loop_area: float

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 1:
            raise ValueError("genus must be an integer >= 1; "
                             "use sphere_wilson for genus 0")
        if not self.total_area > 0:
            raise ValueError("total_area must be positive")
        if not 0 < self.loop_area < self.total_area:
            raise ValueError("loop_area must lie strictly between 0 and total_area")


@dataclass(frozen=True)
class TruncationPolicy:
    """Enumeration cutoffs plus the requested bound on discarded mass."""

    k_max: int = 14
    n_max: int = 12
    gamma: float = 0.3
    tail_tol: float = 1e-6

    def __post_init__(self):
        if not isinstance(self.k_max, int) or self.k_max < 0:
            raise ValueError("k_max must be an integer >= 0")
        if not isinstance(self.n_max, int) or self.n_max < 0:
            raise ValueError("n_max must be an integer >= 0")
        if not 0.0 < self.gamma < 1.0 / 3.0:
            raise ValueError("gamma must lie in (0, 1/3)")
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")


@dataclass(frozen=True)
class SumReport:
    """A truncated sum: its value, a tail certificate, and class subtotals."""

    value: float
    tail_bound: float
    term_count: int
    class1: float
    class2: float
    class3: float
    class4: float

    @property
    def classes(self) -> tuple[float, float, float, float]:
        return (self.class1, self.class2, self.class3, self.class4)


def _policy(policy) -> TruncationPolicy:
    return TruncationPolicy() if policy is None else policy


def _term_count(group: str, pairs: int, n_max: int) -> int:
    return pairs if group == "su" else pairs * (2 * n_max + 1)


def partition_function(group, genus, area, rank, policy=None, workers=1) -> SumReport:
    """Truncated heat-kernel partition sum on a closed genus-g surface."""
    group = _norm_group(group)
    rank = _check_rank(rank)
    workers = _check_workers(workers)
    pol = _policy(policy)
    if not isinstance(genus, int) or genus < 1:
        raise ValueError("genus must be an integer >= 1")
    if not area > 0:
        raise ValueError("area must be positive")
    res = engine.genus_sums(rank, pol.k_max, pol.n_max, pol.gamma, float(area),
                            0.0, (genus,), want_e=False, want_m=False,
                            workers=workers)
    tot, cls = res[(group, genus)]["z"]
    bound = tails.genus_tail(group, genus, float(area), rank, pol.k_max, pol.n_max)
    return SumReport(tot, bound, _term_count(group, res["pairs"], pol.n_max), *cls)


def _moment_reports(group, surface, rank, pol, workers, want_e, want_m):
    T = float(surface.total_area)
    t = float(surface.loop_area)
    g = surface.genus
    res = engine.genus_sums(rank, pol.k_max, pol.n_max, pol.gamma, T, t, (g,),
                            want_e=want_e or want_m, want_m=want_m,
                            workers=workers)
    sums = res[(group, g)]
    count = _term_count(group, res["pairs"], pol.n_max)
    z, _ = sums["z"]
    z_tail = tails.genus_tail(group, g, T, rank, pol.k_max, pol.n_max)
    nr = float(rank)

    e_rep = None
    if want_e:
        e_num, e_cls = sums["e"]
        value = e_num / (nr * z)
        d_num = tails.wilson_numerator_tail(group, g, T, t, rank,
                                            pol.k_max, pol.n_max, 1)
        bound = tails.ratio_tail(value, z, d_num, z_tail, nr)
        e_rep = SumReport(value, bound, count,
                          *(c / (nr * z) for c in e_cls))

    m_rep = None
    if want_m:
        m_num, m_cls = sums["m"]
        nn = nr * nr
        value = m_num / (nn * z)
        d_num = tails.wilson_numerator_tail(group, g, T, t, rank,
                                            pol.k_max, pol.n_max, 2)
        bound = tails.ratio_tail(value, z, d_num, z_tail, nn)
        m_rep = SumReport(value, bound, count,
                          *(mc / (nn * z) for mc in m_cls))
    return e_rep, m_rep


def wilson_expectation(group, surface: SurfaceSpec, rank, policy=None,
                       workers=1) -> SumReport:
    """Normalized-trace holonomy expectation for a simple contractible loop."""
    group = _norm_group(group)
    rank = _check_rank(rank)
    workers = _check_workers(workers)
    e_rep, _ = _moment_reports(group, surface, rank, _policy(policy), workers,
                               True, False)
    return e_rep


def wilson_second_moment(group, surface: SurfaceSpec, rank, policy=None,
                         workers=1) -> SumReport:
    """Second moment |tr|^2 of the normalized holonomy trace."""
    group = _norm_group(group)
    rank = _check_rank(rank)
    workers = _check_workers(workers)
    _, m_rep = _moment_reports(group, surface, rank, _policy(policy), workers,
                               False, True)
    return m_rep


def wilson_variance(group, surface: SurfaceSpec, rank, policy=None,
                    workers=1) -> SumReport:
    """Variance of the normalized trace; classes pair the moment splits."""
    group = _norm_group(group)
    rank = _check_rank(rank)
    workers = _check_workers(workers)
    e_rep, m_rep = _moment_reports(group, surface, rank, _policy(policy),
                                   workers, True, True)
    e = e_rep.value
    value = m_rep.value - e * e
    bound = tails.variance_tail(m_rep.tail_bound, e_rep.tail_bound, e)
    cls = tuple(mc - e * ec for mc, ec in zip(m_rep.classes, e_rep.classes))
    return SumReport(value, bound, m_rep.term_count, *cls)


def plane_wilson(loop_area) -> float:
    """Wilson loop on the plane; rank-independent single-weight value."""
    if not loop_area > 0:
        raise ValueError("loop_area must be positive")
    return math.exp(-0.5 * float(loop_area))


def sphere_wilson(total_area, loop_area, rank, policy=None, workers=1) -> SumReport:
    """Wilson loop on the sphere split into areas t and T - t."""
    rank = _check_rank(rank)
    workers = _check_workers(workers)
    T = float(total_area)
    t = float(loop_area)
    if not T > 0:
        raise ValueError("total_area must be positive")
    if not 0 < t < T:
        raise ValueError("loop_area must lie strictly between 0 and total_area")
    pol = _policy(policy)
    res = engine.sphere_sums(rank, pol.k_max, pol.n_max, pol.gamma, T, t,
                             workers=workers)
    z, _ = res["z"]
    num, num_cls = res["num"]
    nr = float(rank)
    value = num / (nr * z)
    ln_tail, lz_tail = tails.sphere_log_tails(T, t, rank, pol.k_max, pol.n_max)
    if math.isinf(ln_tail) or math.isinf(lz_tail) or not z > 0:
        bound = math.inf
    else:
        log_z = math.log(z) + res["log_shift"]
        bound = (abs(value) * math.exp(min(lz_tail - log_z, 700.0))
                 + math.exp(min(ln_tail - math.log(nr) - log_z, 700.0)))
    count = res["pairs"] * (2 * pol.n_max + 1)
    return SumReport(value, bound, count, *(c / (nr * z) for c in num_cls))


def tail_bound(policy, group, genus, area, rank) -> float:
    """Certified bound on the mass excluded by the policy's cutoffs."""
    group = _norm_group(group)
    rank = _check_rank(rank)
    pol = _policy(policy)
    if not isinstance(genus, int) or genus < 1:
        raise ValueError("genus must be an integer >= 1")
    if not area > 0:
        raise ValueError("area must be positive")
    return tails.genus_tail(group, genus, float(area), rank, pol.k_max, pol.n_max)


def convergence_sweep(group, surface: SurfaceSpec, ranks, policy=None,
                      workers=1, timing=False):
    """Expectation and variance reports per rank, in the given rank order."""
    group = _norm_group(group)
    workers = _check_workers(workers)
    pol = _policy(policy)
    rows = []
    for rank in ranks:
        rank = _check_rank(rank)
        start = time.perf_counter() if timing else None
        e_rep, m_rep = _moment_reports(group, surface, rank, pol, workers,
                                       True, True)
        e = e_rep.value
        var = m_rep.value - e * e
        v_bound = tails.variance_tail(m_rep.tail_bound, e_rep.tail_bound, e)
        v_cls = tuple(mc - e * ec for mc, ec in zip(m_rep.classes, e_rep.classes))
        v_rep = SumReport(var, v_bound, m_rep.term_count, *v_cls)
        wall = (time.perf_counter() - start) * 1e3 if timing else 0.0
        rows.append({"rank": rank, "expectation": e_rep, "variance": v_rep,
                     "wall_ms": wall})
    return rows
