"""Brute-force reference sums over explicit weight tuples.

Everything here works directly on nonincreasing integer N-tuples: dimensions
and Casimirs come from the explicit Weyl-product formulas, and branching is
literal coordinate bumping.  No composite-coordinate algebra, move-difference
formulas, cached n-sums, or compensated summation is shared with the engine,
so agreement at small rank certifies the fast path end to end.
"""

from __future__ import annotations

import math

from .partitions import partitions_of
from .weights import casimir_su_explicit, casimir_u_explicit, dim_explicit


def _canonical_pairs(rank, k_max):
    amax = rank // 2
    bmax = (rank - 1) // 2
    out = []
    for ka in range(k_max + 1):
        for alpha in partitions_of(ka):
            if len(alpha) > amax:
                continue
            for kb in range(k_max + 1):
                for beta in partitions_of(kb):
                    if len(beta) > bmax:
                        continue
                    out.append((alpha, beta))
    return out


def _u_tuple(alpha, beta, n, rank):
    plateau = rank - len(alpha) - len(beta)
    return (tuple(a + n for a in alpha) + (n,) * plateau
            + tuple(n - b for b in reversed(beta)))


def _su_tuple(alpha, beta, rank):
    raw = _u_tuple(alpha, beta, 0, rank)
    return tuple(p - raw[-1] for p in raw)


def u_tuples(rank, k_max, n_max):
    return [_u_tuple(a, b, n, rank)
            for (a, b) in _canonical_pairs(rank, k_max)
            for n in range(-n_max, n_max + 1)]


def su_tuples(rank, k_max):
    return [_su_tuple(a, b, rank) for (a, b) in _canonical_pairs(rank, k_max)]


def _normalize(parts):
    return tuple(p - parts[-1] for p in parts)


def covers(parts):
    out = []
    n = len(parts)
    for i in range(n):
        if i == 0 or parts[i - 1] > parts[i]:
            out.append(parts[:i] + (parts[i] + 1,) + parts[i + 1:])
    return out


def removes(parts):
    out = []
    n = len(parts)
    for j in range(n):
        if j == n - 1 or parts[j] > parts[j + 1]:
            out.append(parts[:j] + (parts[j] - 1,) + parts[j + 1:])
    return out


def sim_tuples(parts):
    out = []
    n = len(parts)
    for i in range(n):
        if not (i == 0 or parts[i - 1] > parts[i]):
            continue
        for j in range(n):
            if j == i:
                continue
            if not (j == n - 1 or parts[j] > parts[j + 1]):
                continue
            cand = list(parts)
            cand[i] += 1
            cand[j] -= 1
            if all(cand[m] >= cand[m + 1] for m in range(n - 1)):
                out.append(tuple(cand))
    return out


def oracle_partition_function(group, genus, area, rank, k_max, n_max):
    if group == "su":
        items = [(t_, float(casimir_su_explicit(t_))) for t_ in su_tuples(rank, k_max)]
    else:
        items = [(t_, float(casimir_u_explicit(t_))) for t_ in u_tuples(rank, k_max, n_max)]
    total = 0.0
    for parts, c2 in items:
        d = dim_explicit(parts)
        total += math.exp(-0.5 * area * c2) * float(d) ** (2 - 2 * genus)
    return total


def _casimir(group, parts):
    if group == "su":
        return float(casimir_su_explicit(_normalize(parts)))
    return float(casimir_u_explicit(parts))


def oracle_wilson(group, genus, area, loop_area, rank, k_max, n_max):
    """(expectation, second moment) by direct tuple enumeration."""
    if group == "su":
        base = su_tuples(rank, k_max)
    else:
        base = u_tuples(rank, k_max, n_max)
    z = 0.0
    e_num = 0.0
    m_num = 0.0
    for mu in base:
        c_mu = _casimir(group, mu)
        d_mu = dim_explicit(mu)
        w = math.exp(-0.5 * area * c_mu) * float(d_mu) ** (2 - 2 * genus)
        z += w
        for lam in covers(mu):
            c_lam = _casimir(group, lam)
            e_num += (w * (dim_explicit(lam) / d_mu)
                      * math.exp(0.5 * loop_area * (c_mu - c_lam)))
        # second moment walks up then down; the diagonal recurs once per
        # parent, off-diagonal neighbors have a unique parent in common
        for nu in covers(mu):
            for lam in removes(nu):
                c_lam = _casimir(group, lam)
                m_num += (w * (dim_explicit(lam) / d_mu)
                          * math.exp(0.5 * loop_area * (c_mu - c_lam)))
    nr = float(rank)
    return e_num / (nr * z), m_num / (nr * nr * z)


def oracle_sphere(total_area, loop_area, rank, k_max, n_max):
    z = 0.0
    num = 0.0
    for lam in u_tuples(rank, k_max, n_max):
        c_lam = float(casimir_u_explicit(lam))
        d_lam = dim_explicit(lam)
        z += float(d_lam) * d_lam * math.exp(-0.5 * total_area * c_lam)
        for mu in covers(lam):
            c_mu = float(casimir_u_explicit(mu))
            num += (float(d_lam) * dim_explicit(mu)
                    * math.exp(-0.5 * loop_area * c_lam
                               - 0.5 * (total_area - loop_area) * c_mu))
    return num / (rank * z)
