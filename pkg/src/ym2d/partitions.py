"""Integer partitions and Young-diagram combinatorics.

A partition is a tuple of weakly decreasing positive integers; () is the
empty partition.  Cells are indexed (i, j) with 1-based row i and column j,
and the content of a cell is j - i.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial

Partition = tuple[int, ...]

__all__ = [
    "Partition",
    "check_partition",
    "partitions_of",
    "partition_count",
    "conjugate",
    "total_content",
    "hook_lengths",
    "sym_dim",
    "add_box",
    "remove_box",
    "sim_partitions",
    "border_strips",
]


def check_partition(alpha):
    """Raise ValueError unless alpha is a weakly decreasing tuple of positive ints."""
    if not isinstance(alpha, tuple):
        raise ValueError(f"partition must be a tuple, got {type(alpha).__name__}")
    for i, part in enumerate(alpha):
        if not isinstance(part, int) or part < 1:
            raise ValueError(f"partition parts must be positive integers: {alpha}")
        if i and alpha[i - 1] < part:
            raise ValueError(f"partition parts must be weakly decreasing: {alpha}")
    return alpha


def partitions_of(k):
    """All partitions of k in lexicographically decreasing order.

    partitions_of(0) == [()]; partitions_of(4) starts with (4,) and ends
    with (1, 1, 1, 1).
    """
    if k < 0:
        raise ValueError("cannot partition a negative integer")
    out = []
    stack = []

    def descend(rem, cap):
        if rem == 0:
            out.append(tuple(stack))
            return
        for part in range(min(rem, cap), 0, -1):
            stack.append(part)
            descend(rem - part, part)
            stack.pop()

    descend(k, k)
    return out


@lru_cache(maxsize=None)
def partition_count(k):
    """Number of partitions of k, by Euler's pentagonal-number recurrence."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    total = 0
    m = 1
    while True:
        g1 = m * (3 * m - 1) // 2
        g2 = m * (3 * m + 1) // 2
        if g1 > k and g2 > k:
            break
        sign = -1 if m % 2 == 0 else 1
        if g1 <= k:
            total += sign * partition_count(k - g1)
        if g2 <= k:
            total += sign * partition_count(k - g2)
        m += 1
    return total


def conjugate(alpha):
    """Transpose of the Young diagram."""
    if not alpha:
        return ()
    out = []
    for j in range(1, alpha[0] + 1):
        out.append(sum(1 for part in alpha if part >= j))
    return tuple(out)


def total_content(alpha):
    """Sum of contents j - i over all cells; antisymmetric under conjugation."""
    return sum(part * (part + 1) // 2 - (i + 1) * part for i, part in enumerate(alpha))


def hook_lengths(alpha):
    """Hook length of every cell, row by row."""
    conj = conjugate(alpha)
    return [
        [part - j + conj[j - 1] - (i + 1) + 1 for j in range(1, part + 1)]
        for i, part in enumerate(alpha)
    ]


def sym_dim(alpha):
    """Number of standard Young tableaux of shape alpha (hook length formula)."""
    check_partition(alpha)
    denom = 1
    for row in hook_lengths(alpha):
        for h in row:
            denom *= h
    num = factorial(sum(alpha))
    assert num % denom == 0
    return num // denom


def add_box(alpha):
    """All partitions obtained by adding one cell, ordered by row index.

    A cell can be added at row i (1-based) when i == 1 or alpha[i-2] > alpha[i-1],
    and a new row of length 1 can always be appended.
    """
    out = []
    n = len(alpha)
    for i in range(n):
        if i == 0 or alpha[i - 1] > alpha[i]:
            out.append(alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:])
    out.append(alpha + (1,))
    return out


def remove_box(alpha):
    """All partitions obtained by removing one corner cell, ordered by row index."""
    out = []
    n = len(alpha)
    for i in range(n):
        if i == n - 1 or alpha[i] > alpha[i + 1]:
            if alpha[i] == 1:
                out.append(alpha[:i])
            else:
                out.append(alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:])
    return out


def sim_partitions(alpha):
    """Distinct partitions alpha' != alpha reachable by adding one cell and
    removing another (equivalently, sharing a one-cell-larger parent)."""
    seen = set()
    out = []
    for parent in add_box(alpha):
        for sibling in remove_box(parent):
            if sibling != alpha and sibling not in seen:
                seen.add(sibling)
                out.append(sibling)
    return out


def border_strips(alpha, r):
    """All (mu, height) with mu obtained from alpha by gluing a border strip
    of r cells.

    A border strip is an edge-connected skew shape containing no 2x2 block;
    its height is the number of rows it touches minus one.  Spanning rows
    i0..i1 forces mu[i] = alpha[i-1] + 1 for i0 < i <= i1 (1-based), which
    pins the whole shape once the top-row length is solved from r.
    """
    check_partition(alpha)
    if r < 1:
        raise ValueError("border strip size must be positive")
    ext = list(alpha)
    out = []
    for i1 in range(1, len(alpha) + r + 1):
        while len(ext) < i1:
            ext.append(0)
        for i0 in range(i1, 0, -1):
            # cells in rows below the top row are forced
            lower = 0
            ok = True
            for i in range(i0 + 1, i1 + 1):
                row_cells = ext[i - 2] + 1 - ext[i - 1]
                if row_cells < 1:
                    ok = False
                    break
                lower += row_cells
            if not ok or lower >= r:
                continue
            top = ext[i0 - 1] + (r - lower)
            # top row must stay below the row above and meet the row beneath
            if i0 > 1 and top > ext[i0 - 2]:
                continue
            if i1 > i0 and top < ext[i0 - 1] + 1:
                continue
            mu = list(alpha) + [0] * max(0, i1 - len(alpha))
            mu[i0 - 1] = top
            for i in range(i0 + 1, i1 + 1):
                mu[i - 1] = ext[i - 2] + 1
            out.append((tuple(mu), i1 - i0))
    return out
