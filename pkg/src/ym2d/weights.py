"""Highest weights of U(N) and SU(N) in composite form.

A weight of U(N) is a weakly decreasing integer N-tuple.  The composite
form (alpha, beta, n) with partitions alpha (r rows), beta (s rows) and an
integer plateau value n encodes the tuple

    (alpha_1 + n, ..., alpha_r + n, n, ..., n, n - beta_s, ..., n - beta_1)

with N - r - s >= 1 middle entries equal to n.  SU(N) weights are the
n-independent classes; their normalized tuple (last part 0) is the one with
n = beta_1.

Dimensions are exact big integers, Casimir numbers exact rationals.  Floats
appear only in log_dim, classify and schur_eval.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import log

from .partitions import (
    Partition,
    add_box,
    check_partition,
    hook_lengths,
    remove_box,
    sim_partitions,
    total_content,
)

ExplicitWeight = tuple[int, ...]

__all__ = [
    "CompositeWeight",
    "ExplicitWeight",
    "RankTooSmall",
    "RankOverflow",
    "compose",
    "decompose",
    "shift",
    "is_canonical",
    "dim",
    "dim_explicit",
    "log_dim",
    "casimir_u",
    "casimir_u_explicit",
    "casimir_su",
    "casimir_su_explicit",
    "successors",
    "sim_neighbors",
    "classify",
    "q_factor",
    "schur_eval",
]


class RankTooSmall(ValueError):
    """The rank cannot accommodate the requested composite shape."""


class RankOverflow(ValueError):
    """A branching move left the set of rank-N weights."""

    def __init__(self, message, candidate=None):
        super().__init__(message)
        self.candidate = candidate


def _check_rank(alpha, beta, rank):
    if len(alpha) + len(beta) + 1 > rank:
        raise RankTooSmall(
            f"rank {rank} cannot hold alpha with {len(alpha)} rows and "
            f"beta with {len(beta)} rows"
        )


@dataclass(frozen=True)
class CompositeWeight:
    """Immutable composite weight (alpha, beta, n) at a given rank."""

    alpha: Partition
    beta: Partition
    n: int
    rank: int

    def __post_init__(self):
        check_partition(self.alpha)
        check_partition(self.beta)
        if not isinstance(self.n, int):
            raise ValueError(f"plateau value must be an integer, got {self.n!r}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ValueError(f"rank must be a positive integer, got {self.rank!r}")
        _check_rank(self.alpha, self.beta, self.rank)

    @property
    def size(self):
        """Total number of cells |alpha| + |beta|."""
        return sum(self.alpha) + sum(self.beta)

    def explicit(self):
        """The weakly decreasing N-tuple this weight stands for."""
        return compose(self.alpha, self.beta, self.n, self.rank)


def compose(alpha, beta, n, rank):
    """Materialize (alpha, beta, n) as a weakly decreasing rank-tuple."""
    check_partition(alpha)
    check_partition(beta)
    _check_rank(alpha, beta, rank)
    middle = rank - len(alpha) - len(beta)
    return (
        tuple(a + n for a in alpha)
        + (n,) * middle
        + tuple(n - b for b in reversed(beta))
    )


def _check_explicit(parts):
    if not isinstance(parts, tuple) or not parts:
        raise ValueError("explicit weight must be a nonempty tuple")
    for i, part in enumerate(parts):
        if not isinstance(part, int):
            raise ValueError(f"weight parts must be integers: {parts}")
        if i and parts[i - 1] < part:
            raise ValueError(f"weight parts must be weakly decreasing: {parts}")
    return parts


def decompose(parts):
    """Composite coordinates of an explicit weight, with n the median part.

    The plateau value is taken as parts[m-1], m = ceil((N+1)/2).  This makes
    decompose total and a left inverse of compose, and keeps both alpha and
    beta at no more than about N/2 rows.
    """
    _check_explicit(parts)
    rank = len(parts)
    n = parts[rank // 2]
    alpha = tuple(p - n for p in itertools.takewhile(lambda p: p > n, parts))
    beta = tuple(n - p for p in itertools.takewhile(lambda p: p < n, reversed(parts)))
    return CompositeWeight(alpha, beta, n, rank)


def shift(parts, m):
    """Add m to every part; the rank-preserving translation of weights."""
    _check_explicit(parts)
    if not isinstance(m, int):
        raise ValueError(f"shift amount must be an integer, got {m!r}")
    return tuple(p + m for p in parts)


def is_canonical(alpha, beta, rank):
    """True when the median rule decomposes compose(alpha, beta, n, rank)
    back to (alpha, beta); depends only on the row counts."""
    return 2 * len(alpha) <= rank and 2 * len(beta) <= rank - 1


# --- dimensions -------------------------------------------------------------


def _contents(alpha):
    for i, part in enumerate(alpha):
        for j in range(1, part + 1):
            yield j - i - 1


def _stretched_dim(alpha, rank):
    """Exact dimension of the U(rank) irreducible labeled by a partition:
    product over cells of (rank + content) / hook."""
    num = 1
    for c in _contents(alpha):
        num *= rank + c
    den = 1
    for row in hook_lengths(alpha):
        for h in row:
            den *= h
    return Fraction(num, den)


def q_factor(alpha, beta, rank):
    """Exact correction coupling the two partitions in the dimension
    factorization; equals 1 when either partition is empty and tends to 1 as
    the rank grows."""
    check_partition(alpha)
    check_partition(beta)
    _check_rank(alpha, beta, rank)
    out = Fraction(1)
    for i, a in enumerate(alpha, start=1):
        for j, b in enumerate(beta, start=1):
            base = rank + 1 - i - j
            out *= Fraction(base * (a + b + base), (a + base) * (b + base))
    return out


def dim(w):
    """Exact dimension of the irreducible with highest weight w.

    Computed as stretched_dim(alpha) * stretched_dim(beta) * q_factor, which
    costs O(|alpha|*|beta|) exact factor products and never touches the
    rank-long tuple.  Independent of n.
    """
    value = (
        _stretched_dim(w.alpha, w.rank)
        * _stretched_dim(w.beta, w.rank)
        * q_factor(w.alpha, w.beta, w.rank)
    )
    assert value.denominator == 1
    return value.numerator


def dim_explicit(parts):
    """Weyl dimension product over all pairs i < j; the O(N^2) oracle."""
    _check_explicit(parts)
    rank = len(parts)
    value = Fraction(1)
    for i in range(rank):
        for j in range(i + 1, rank):
            value *= Fraction(parts[i] - parts[j] + j - i, j - i)
    assert value.denominator == 1
    return value.numerator


def log_dim(w):
    """Natural log of dim(w), as a compensated-free sum of factor logs.

    Dimensions grow like rank^(|alpha|+|beta|), far past float range for the
    weights the truncated sums visit, so the log is accumulated directly.
    """
    total = 0.0
    for alpha in (w.alpha, w.beta):
        for c in _contents(alpha):
            total += log(w.rank + c)
        for row in hook_lengths(alpha):
            for h in row:
                total -= log(h)
    for i, a in enumerate(w.alpha, start=1):
        for j, b in enumerate(w.beta, start=1):
            base = w.rank + 1 - i - j
            total += log(base) + log(a + b + base)
            total -= log(a + base) + log(b + base)
    return total


# --- Casimir numbers --------------------------------------------------------


def casimir_u(w):
    """Exact quadratic Casimir of the U(rank) weight (alpha, beta, n)."""
    ka, kb = sum(w.alpha), sum(w.beta)
    twist = total_content(w.alpha) + total_content(w.beta) + w.n * (ka - kb)
    return ka + kb + w.n * w.n + Fraction(2 * twist, w.rank)


def casimir_u_explicit(parts):
    """Exact quadratic Casimir from the tuple; the O(N) oracle.

    The pair sum over i < j of (part_i - part_j) telescopes to
    sum_i (N + 1 - 2i) part_i.
    """
    _check_explicit(parts)
    rank = len(parts)
    square = sum(p * p for p in parts)
    pair = sum((rank + 1 - 2 * i) * p for i, p in enumerate(parts, start=1))
    return Fraction(square + pair, rank)


def casimir_su(alpha, beta, rank):
    """Exact quadratic Casimir of the SU(rank) weight with the given
    composite pair; independent of the plateau value by construction."""
    check_partition(alpha)
    check_partition(beta)
    _check_rank(alpha, beta, rank)
    ka, kb = sum(alpha), sum(beta)
    out = ka + kb + Fraction(2 * (total_content(alpha) + total_content(beta)), rank)
    return out - Fraction((ka - kb) ** 2, rank * rank)


def casimir_su_explicit(parts):
    """Exact SU Casimir from a normalized tuple (last part 0)."""
    _check_explicit(parts)
    if parts[-1] != 0:
        raise ValueError(f"weight is not SU-normalized (last part {parts[-1]})")
    rank = len(parts)
    square = sum(p * p for p in parts)
    linear = sum(parts)
    pair = sum((rank + 1 - 2 * i) * p for i, p in enumerate(parts, start=1))
    return Fraction(square + pair, rank) - Fraction(linear * linear, rank * rank)


# --- branching --------------------------------------------------------------


def _emit(alpha, beta, w, on_overflow):
    """Wrap a candidate composite pair as a weight of w.rank, re-deriving
    coordinates when the pair only fits with an empty plateau."""
    room = w.rank - len(alpha) - len(beta)
    if room >= 1:
        return CompositeWeight(alpha, beta, w.n, w.rank)
    if on_overflow == "raise":
        raise RankOverflow(
            f"successor (alpha={alpha}, beta={beta}, n={w.n}) needs rank "
            f">= {len(alpha) + len(beta) + 1}, have {w.rank}",
            candidate=(alpha, beta, w.n),
        )
    if room < 0:
        # no rank-N tuple holds this pair at all
        return None
    flat = tuple(a + w.n for a in alpha) + tuple(w.n - b for b in reversed(beta))
    return decompose(flat)


def _check_mode(on_overflow):
    if on_overflow not in ("raise", "renormalize"):
        raise ValueError(f"unknown overflow mode {on_overflow!r}")


def successors(w, on_overflow="raise"):
    """All weights covering w: one cell added to alpha or removed from beta.

    With on_overflow="raise" (default), a move whose plain coordinates do
    not fit the rank raises RankOverflow naming the offender.  With
    "renormalize", such a move is re-decomposed through its explicit tuple,
    so the returned list is exactly the cover set in the weight lattice.
    """
    _check_mode(on_overflow)
    out = []
    for a in add_box(w.alpha):
        got = _emit(a, w.beta, w, on_overflow)
        if got is not None:
            out.append(got)
    for b in remove_box(w.beta):
        out.append(CompositeWeight(w.alpha, b, w.n, w.rank))
    return out


def sim_neighbors(w, on_overflow="raise"):
    """All weights differing from w by moving one cell (add one entry of the
    tuple, subtract another); w itself is excluded.

    Four disjoint families: grow both partitions, shrink both, move a cell
    within alpha, move a cell within beta.
    """
    _check_mode(on_overflow)
    out = []
    for a in add_box(w.alpha):
        for b in add_box(w.beta):
            got = _emit(a, b, w, on_overflow)
            if got is not None:
                out.append(got)
    for a in remove_box(w.alpha):
        for b in remove_box(w.beta):
            out.append(CompositeWeight(a, b, w.n, w.rank))
    for a in sim_partitions(w.alpha):
        got = _emit(a, w.beta, w, on_overflow)
        if got is not None:
            out.append(got)
    for b in sim_partitions(w.beta):
        got = _emit(w.alpha, b, w, on_overflow)
        if got is not None:
            out.append(got)
    return out


# --- classification ---------------------------------------------------------


def classify(w, gamma):
    """Class index in {1,2,3,4} from the two threshold tests
    |alpha| <= rank^gamma and |beta| <= rank^gamma."""
    if not 0.0 < gamma < 1.0 / 3.0:
        raise ValueError(f"gamma must lie in (0, 1/3), got {gamma}")
    cut = w.rank**gamma
    small_a = sum(w.alpha) <= cut
    small_b = sum(w.beta) <= cut
    if small_a and small_b:
        return 1
    if small_b:
        return 2
    if small_a:
        return 3
    return 4


# --- Schur oracle -----------------------------------------------------------


def _det_leibniz(mat):
    n = len(mat)
    total = 0j
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for start in range(n):
            if seen[start]:
                continue
            length = 0
            k = start
            while not seen[k]:
                seen[k] = True
                k = perm[k]
                length += 1
            if length % 2 == 0:
                sign = -sign
        term = complex(sign)
        for i in range(n):
            term *= mat[i][perm[i]]
        total += term
    return total


def schur_eval(parts, xs):
    """Schur (Laurent) polynomial of the weight at the points xs, via the
    ratio of alternants.  Testing oracle only; O(N!) below rank 6, floating
    determinants above."""
    _check_explicit(parts)
    rank = len(parts)
    xs = [complex(x) for x in xs]
    if len(xs) != rank:
        raise ValueError(f"need {rank} evaluation points, got {len(xs)}")
    for i in range(rank):
        for j in range(i + 1, rank):
            if xs[i] == xs[j]:
                raise ValueError(f"evaluation points must be distinct: x={xs[i]}")
    prefactor = 1 + 0j
    low = parts[-1]
    if low < 0:
        for x in xs:
            if x == 0:
                raise ValueError("points must be nonzero for negative weights")
            prefactor *= x**low
        parts = tuple(p - low for p in parts)
    exps = [parts[j] + rank - 1 - j for j in range(rank)]
    num = [[x**e for e in exps] for x in xs]
    if rank <= 5:
        numerator = _det_leibniz(num)
    else:
        import numpy

        numerator = complex(numpy.linalg.det(numpy.array(num, dtype=complex)))
    denominator = 1 + 0j
    for i in range(rank):
        for j in range(i + 1, rank):
            denominator *= xs[i] - xs[j]
    return prefactor * numerator / denominator
