"""Special functions and rigorous truncation-tail bounds.

Every bound here majorizes the discarded positive terms of a truncated
character sum.  The size-k stratum of composite pairs is controlled by
c(k) = sum_j p(j) p(k-j) together with the Casimir floor c2' >= k/2 on
canonical pairs; strata beyond 4*k_max use the generating-function bound
c(k) <= x^{-k} / phi(x)^2 at x = e^{-rho/2}, which telescopes to a geometric
series.  Dimension factors for genus >= 2 are discounted by d >= N, the
minimal dimension of a nontrivial irreducible.
"""

from __future__ import annotations

import math

from .partitions import partition_count

INF = math.inf


def theta(x: float) -> float:
    """Gaussian lattice sum over all integers of exp(-x n^2), x > 0."""
    if not x > 0:
        raise ValueError("theta requires x > 0")
    s = 1.0
    n = 1
    while True:
        term = 2.0 * math.exp(-x * n * n)
        if term < 1e-16 * s:
            return s
        s += term
        n += 1


def euler_phi(s: float) -> float:
    """Euler product prod_{m>=1} (1 - s^m) for 0 < s < 1."""
    if not 0.0 < s < 1.0:
        raise ValueError("euler_phi requires 0 < s < 1")
    p = 1.0
    x = s
    while x >= 1e-16:
        p *= 1.0 - x
        x *= s
    return p


def pair_count(k: int) -> int:
    """Number of partition pairs with |alpha| + |beta| = k."""
    return sum(partition_count(j) * partition_count(k - j) for j in range(k + 1))


def _stratum_tail(k_max: int, rho: float) -> float:
    """Upper bound on sum_{k > k_max} c(k) e^{-rho k}; exact strata to 4 k_max."""
    if rho <= 0.0:
        return INF
    hi = 4 * k_max if k_max > 0 else 0
    s = 0.0
    for k in range(k_max + 1, hi + 1):
        s += pair_count(k) * math.exp(-rho * k)
    x = math.exp(-0.5 * rho)
    s += (x ** (hi + 1)) / ((1.0 - x) * euler_phi(x) ** 2)
    return s


def _enum_mass_bound(k_max: int, rho: float, scale: float) -> float:
    """Upper bound on the enumerated canonical-pair mass sum e^{-rho k}/d^{2g-2}."""
    if rho <= 0.0:
        return INF
    s = 1.0
    for k in range(1, k_max + 1):
        s += scale * pair_count(k) * math.exp(-rho * k)
    return s


def _gauss_tail(n_min: int, coeff: float, shift: int) -> float:
    """sum_{n >= n_min} exp(-coeff (n - shift)^2)."""
    s = 0.0
    n = n_min
    while True:
        term = math.exp(-coeff * (n - shift) * (n - shift))
        s += term
        if n > shift and term < 1e-300:
            return s
        n += 1


def _dim_scale(genus: int, rank: int) -> float:
    # nontrivial irreducibles have dimension >= rank
    return float(rank) ** (2 - 2 * genus) if genus >= 2 else 1.0


def genus_tail(group: str, genus: int, area: float, rank: int,
               k_max: int, n_max: int) -> float:
    """Bound on the discarded mass of the genus partition sum."""
    scale = _dim_scale(genus, rank)
    bk = scale * _stratum_tail(k_max, 0.25 * area)
    if group == "su":
        return bk
    th = theta(0.5 * area)
    shift = -(-k_max // rank)
    sn = _gauss_tail(n_max + 1, 0.5 * area, shift)
    menum = _enum_mass_bound(k_max, 0.25 * area, scale)
    return bk * th + 2.0 * sn * menum


def wilson_numerator_tail(group: str, genus: int, area: float, loop_area: float,
                          rank: int, k_max: int, n_max: int, moment: int) -> float:
    """Bound on discarded raw numerator terms of the moment sums.

    Uses the exponent-decay inequality for branching moves, valid only for
    rank > 8 * loop_area / area; returns inf outside that regime.
    """
    T = area
    t = loop_area
    if rank * T <= 8.0 * t:
        return INF
    ratio_sum = float(rank) if moment == 1 else float(rank) * rank
    scale = _dim_scale(genus, rank)
    nn = float(rank) * rank
    if group == "su":
        rho = 0.125 * T
        amp = math.exp(t)
        kpart = amp * ratio_sum * scale * _stratum_tail(k_max, rho)
        return kpart
    rho = 0.125 * T - t / nn
    if rho <= 0.0:
        return INF
    amp = math.exp(t + 0.5 * t * t / (T * nn)) * theta(0.5 * T)
    kpart = amp * ratio_sum * scale * _stratum_tail(k_max, rho)
    shift = math.ceil(k_max / rank + t / (T * rank))
    sn = _gauss_tail(n_max + 1, 0.5 * T, shift)
    amp_n = math.exp(t + t * k_max / nn + 0.5 * t * t / (T * nn))
    npart = 2.0 * sn * amp_n * ratio_sum * _enum_mass_bound(k_max, rho, scale)
    return kpart + npart


def ratio_tail(value: float, z_hat: float, num_tail: float, z_tail: float,
               norm: float) -> float:
    """|true - hat| for hat = num/(norm z) with positive one-sided deficits."""
    if not (z_hat > 0.0) or math.isinf(num_tail) or math.isinf(z_tail):
        return INF
    return abs(value) * z_tail / z_hat + num_tail / (norm * z_hat)


def variance_tail(m2_tail: float, e_tail: float, e_hat: float) -> float:
    return m2_tail + 2.0 * abs(e_hat) * e_tail + e_tail * e_tail


def _log_multiset(k: int, slots: float) -> float:
    # log C(slots + k - 1, k)
    return (math.lgamma(slots + k) - math.lgamma(k + 1.0) - math.lgamma(slots))


def _log_stream_sum(logterm, k_start: int, cap: int = 400000):
    """Streaming log-sum-exp of logterm(k) for k >= k_start, inf on no decay."""
    m = -INF
    s = 0.0
    prev = INF
    k = k_start
    while k < k_start + cap:
        lt = logterm(k)
        if lt > m:
            s = s * math.exp(m - lt) + 1.0 if m > -INF else 1.0
            m = lt
        else:
            s += math.exp(lt - m)
        if lt < prev and lt < m - 46.0:
            return m + math.log(s)
        prev = lt
        k += 1
    return INF


def sphere_log_tails(total_area: float, loop_area: float, rank: int,
                     k_max: int, n_max: int) -> tuple[float, float]:
    """(log numerator tail, log z tail) for the sphere double sum.

    Strata use sum_{|alpha|=a} dim^2 = multiset(N^2, a) via RSK, so the
    k-stratum squared-dimension mass is at most C(2N^2+k-1, k).  Bounds are
    finite but only informative when k_max comfortably exceeds the entropy
    scale ~ 2 N^2 e^{-T/2}.
    """
    T = total_area
    t = loop_area
    nn2 = 2.0 * rank * rank
    lth = math.log(theta(0.5 * T))

    def lt_z(k):
        return lth + _log_multiset(k, nn2) - 0.25 * T * k

    def lt_num(k):
        return (math.log(rank) + lth + _log_multiset(k, nn2)
                - 0.25 * t * k - 0.25 * (T - t) * (k - 1))

    lz = _log_stream_sum(lt_z, k_max + 1)
    ln = _log_stream_sum(lt_num, k_max + 1)

    # enumerated strata with |n| > n_max
    shift = -(-(k_max + 1) // rank)
    lsn = math.log(2.0 * _gauss_tail(n_max + 1, 0.5 * T, shift))
    lz_enum = -INF
    ln_enum = -INF
    for k in range(k_max + 1):
        lm = _log_multiset(k, nn2) if k else 0.0
        lz_enum = _logadd(lz_enum, lm - 0.25 * T * k)
        ln_enum = _logadd(ln_enum, math.log(rank) + lm - 0.25 * t * k
                          - 0.25 * (T - t) * max(k - 1, 0))
    lz = _logadd(lz, lsn + lz_enum)
    ln = _logadd(ln, lsn + ln_enum)
    return ln, lz


def _logadd(a: float, b: float) -> float:
    if a == -INF:
        return b
    if b == -INF:
        return a
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))
