"""Fused finite-rank character-sum engine.

Enumerates canonical (alpha, beta) pairs once per rank and accumulates, in a
single pass, the partition function, Wilson-expectation numerator, and
second-moment numerator for both groups and any set of genera.  All n-sums
factor through the pair's size difference, so they are cached per delta-k.

Summation is deterministic by construction: pairs are processed in a fixed
order, accumulated with Neumaier compensation inside fixed-size blocks, and
block results are merged in index order.  Worker count never changes the
arithmetic, only which process computes a block.
"""

from __future__ import annotations

import math
from fractions import Fraction
from multiprocessing import get_context

from .partitions import partitions_of, total_content
from .weights import _stretched_dim

BLOCK = 2048

_KINDS = 3           # z, e, m
_GROUPS = 2          # su, u
_NCLS = 4

# process-local context for block workers; set before any pool is forked
_G: dict = {}


def _log_frac(x: Fraction) -> float:
    # avoids float overflow for big integer ratios
    return math.log(x.numerator) - math.log(x.denominator)


def _shape_entry(shape, rank, tmove, build_moves):
    """Precompute per-shape move tables for one role-agnostic partition."""
    r = len(shape)
    k = sum(shape)
    kc = total_content(shape)
    ds = _stretched_dim(shape, rank)
    ls = _log_frac(ds)
    if not build_moves:
        return (shape, k, r, kc, ls, (), (), ())

    invn = 1.0 / rank
    adds = []
    add_rows = []
    for i in range(r):
        if i == 0 or shape[i - 1] > shape[i]:
            add_rows.append(i)
    add_rows.append(r)
    for i in add_rows:
        a0 = shape[i] if i < r else 0
        if i < r:
            new = shape[:i] + (a0 + 1,) + shape[i + 1:]
        else:
            new = shape + (1,)
        c = a0 - i  # content of the added box, row i+1, column a0+1
        drat = float(_stretched_dim(new, rank) / ds)
        em = math.exp(-0.5 * tmove - tmove * c * invn)
        adds.append((i + 1, a0, drat, em))

    rems = []
    rem_rows = []
    for i in range(r):
        if i == r - 1 or shape[i] > shape[i + 1]:
            rem_rows.append(i)
    for i in rem_rows:
        a0 = shape[i]
        if a0 == 1:
            new = shape[:i]
        else:
            new = shape[:i] + (a0 - 1,) + shape[i + 1:]
        c = a0 - 1 - i  # content of the removed box
        drat = float(_stretched_dim(new, rank) / ds)
        em = math.exp(0.5 * tmove + tmove * c * invn)
        rems.append((i + 1, a0, drat, em))

    sims = []
    for ai, (i1, a0, _, _) in enumerate(adds):
        for ri, (i1r, b0, _, _) in enumerate(rems):
            if i1 == i1r:
                continue
            lst = list(shape)
            if i1 - 1 < r:
                lst[i1 - 1] += 1
            else:
                lst.append(1)
            lst[i1r - 1] -= 1
            if lst and lst[-1] == 0:
                lst.pop()
            cand = tuple(lst)
            ok = all(x > 0 for x in cand)
            ok = ok and all(cand[j] >= cand[j + 1] for j in range(len(cand) - 1))
            if not ok or cand == shape:
                continue
            drat = float(_stretched_dim(cand, rank) / ds)
            sims.append((ai, ri, drat))

    return (shape, k, r, kc, ls, tuple(adds), tuple(rems), tuple(sims))


def _build_shapes(rank, k_max, tmove, build_moves):
    cap = rank // 2  # longest shape any role admits
    shapes = []
    for k in range(k_max + 1):
        for p in partitions_of(k):
            if len(p) <= cap:
                shapes.append(_shape_entry(p, rank, tmove, build_moves))
    return shapes


def _pair_list(shapes, rank):
    amax = rank // 2
    bmax = (rank - 1) // 2
    aids = [i for i, s in enumerate(shapes) if s[2] <= amax]
    bids = [i for i, s in enumerate(shapes) if s[2] <= bmax]
    pairs = [(ia, ib) for ia in aids for ib in bids]
    pairs.sort(key=lambda p: (shapes[p[0]][1] + shapes[p[1]][1], p[0], p[1]))
    return pairs


def _gauss_sums(rank, k_max, n_max, T, t, want_e):
    """n-sum caches indexed by dk + k_max, summed in fixed ascending n order."""
    sz = []
    se = []
    half_t_ = 0.5 * T
    for dk in range(-k_max, k_max + 1):
        d = dk / rank
        s0 = 0.0
        s1 = 0.0
        for n in range(-n_max, n_max + 1):
            g = math.exp(-half_t_ * (n + d) * (n + d))
            s0 += g
            if want_e:
                s1 += g * math.exp(-t * n / rank)
        sz.append(s0)
        se.append(s1)
    return sz, se


def _qrow(an, a0, i1, rows, rank):
    """Ratio of staircase factors along one changed row against fixed rows."""
    p = 1.0
    base = rank + 1 - i1
    j = 0
    for b in rows:
        j += 1
        cc = base - j
        p *= (an + b + cc) * (a0 + cc) / ((a0 + b + cc) * (an + cc))
    return p


def _genus_block(bid):
    G = _G
    pairs = G["pairs"]
    sh = G["shapes"]
    rank = G["rank"]
    half_t = G["half_T"]
    inv_n = 1.0 / rank
    inv_nn = inv_n * inv_n
    kmx = G["k_max"]
    sz = G["sz"]
    se = G["se"]
    corr = G["corr"]
    pw = G["pw"]          # tuple of 2-2g
    ngen = len(pw)
    cut = G["cut"]
    want_e = G["want_e"]
    want_m = G["want_m"]
    need_ld = G["need_ld"]
    exp_ = math.exp
    log_ = math.log

    nc = _KINDS * _GROUPS * ngen * _NCLS
    S = [0.0] * nc
    C = [0.0] * nc

    def acc(i, x):
        s = S[i]
        tt = s + x
        if abs(s) >= abs(x):
            C[i] += (s - tt) + x
        else:
            C[i] += (x - tt) + s
        S[i] = tt

    lo = bid * BLOCK
    hi = min(len(pairs), lo + BLOCK)
    for idx in range(lo, hi):
        ia, ib = pairs[idx]
        rows_a, ka, ra, kca, lsa, adds_a, rems_a, sims_a = (
            sh[ia][0], sh[ia][1], sh[ia][2], sh[ia][3], sh[ia][4],
            sh[ia][5], sh[ia][6], sh[ia][7])
        rows_b, kb, rb, kcb, lsb, adds_b, rems_b, sims_b = (
            sh[ib][0], sh[ib][1], sh[ib][2], sh[ib][3], sh[ib][4],
            sh[ib][5], sh[ib][6], sh[ib][7])

        dk = ka - kb
        c2p = (ka + kb) + 2.0 * (kca + kcb) * inv_n - (dk * dk) * inv_nn
        base = exp_(-half_t * c2p)
        cls = (0 if kb <= cut else 2) if ka <= cut else (1 if kb <= cut else 3)
        dki = dk + kmx

        ld = 0.0
        if need_ld:
            q = 1.0
            i = 0
            for a in rows_a:
                i += 1
                basec = rank + 1 - i
                j = 0
                for b in rows_b:
                    j += 1
                    cc = basec - j
                    q *= cc * (a + b + cc) / ((a + cc) * (b + cc))
            ld = lsa + lsb + log_(q)

        a_e = 0.0
        a_m = 0.0
        if want_e or want_m:
            qadd_a = []
            for (i1, a0, drat, em) in adds_a:
                p = _qrow(a0 + 1, a0, i1, rows_b, rank)
                qadd_a.append(p)
                a_e += drat * p * em
            qrem_b = []
            for (j1, b0, drat, em) in rems_b:
                p = _qrow(b0 - 1, b0, j1, rows_a, rank)
                qrem_b.append(p)
                a_e += drat * p * em

            if want_m:
                # diagonal of the two-step walk: one unit term per parent
                # weight (add a box, remove the same box)
                a_m = float(len(adds_a) + len(rems_b))
                qrem_a = [_qrow(a0 - 1, a0, i1, rows_b, rank)
                          for (i1, a0, _, _) in rems_a]
                qadd_b = [_qrow(b0 + 1, b0, j1, rows_a, rank)
                          for (j1, b0, _, _) in adds_b]
                for mi, (i1, a0, da, ema) in enumerate(adds_a):
                    pa = da * ema * qadd_a[mi]
                    for mj, (j1, b0, db, emb) in enumerate(adds_b):
                        cc = rank + 1 - i1 - j1
                        if cc <= 0:
                            continue  # would need rank+1 rows
                        x = float(a0 + b0 + cc)
                        a_m += (pa * db * emb * qadd_b[mj]
                                * x * (x + 2.0) / ((x + 1.0) * (x + 1.0)))
                for mi, (i1, a0, da, ema) in enumerate(rems_a):
                    pa = da * ema * qrem_a[mi]
                    for mj, (j1, b0, db, emb) in enumerate(rems_b):
                        cc = rank + 1 - i1 - j1
                        x = float(a0 + b0 + cc)
                        a_m += (pa * db * emb * qrem_b[mj]
                                * (x - 2.0) * x / ((x - 1.0) * (x - 1.0)))
                for (ai, ri, drat) in sims_a:
                    a_m += (drat * qadd_a[ai] * qrem_a[ri]
                            * adds_a[ai][3] * rems_a[ri][3])
                for (ai, ri, drat) in sims_b:
                    a_m += (drat * qadd_b[ai] * qrem_b[ri]
                            * adds_b[ai][3] * rems_b[ri][3])

        szk = sz[dki]
        sek = se[dki]
        cok = corr[dki]
        for gei in range(ngen):
            p2g = pw[gei]
            w = base if p2g == 0 else base * exp_(p2g * ld)
            off = gei * _NCLS + cls
            acc(off, w)
            acc((ngen << 2) + off, w * szk)
            if want_e:
                acc(2 * (ngen << 2) + off, w * a_e * cok)
                acc(3 * (ngen << 2) + off, w * a_e * sek)
            if want_m:
                acc(4 * (ngen << 2) + off, w * a_m)
                acc(5 * (ngen << 2) + off, w * a_m * szk)
    return S, C


def _sphere_block(bid):
    G = _G
    pairs = G["pairs"]
    sh = G["shapes"]
    rank = G["rank"]
    half_t = G["half_T"]
    inv_n = 1.0 / rank
    inv_nn = inv_n * inv_n
    kmx = G["k_max"]
    sz = G["sz"]
    ssp = G["ssph"]
    corr = G["corr"]
    cut = G["cut"]
    shift = G["shift"]
    exp_ = math.exp
    log_ = math.log

    nc = 2 * _NCLS
    S = [0.0] * nc
    C = [0.0] * nc

    def acc(i, x):
        s = S[i]
        tt = s + x
        if abs(s) >= abs(x):
            C[i] += (s - tt) + x
        else:
            C[i] += (x - tt) + s
        S[i] = tt

    lo = bid * BLOCK
    hi = min(len(pairs), lo + BLOCK)
    for idx in range(lo, hi):
        ia, ib = pairs[idx]
        rows_a, ka, ra, kca, lsa, adds_a, rems_a, _ = sh[ia]
        rows_b, kb, rb, kcb, lsb, adds_b, rems_b, _ = sh[ib]
        dk = ka - kb
        c2p = (ka + kb) + 2.0 * (kca + kcb) * inv_n - (dk * dk) * inv_nn
        cls = (0 if kb <= cut else 2) if ka <= cut else (1 if kb <= cut else 3)
        dki = dk + kmx

        q = 1.0
        i = 0
        for a in rows_a:
            i += 1
            basec = rank + 1 - i
            j = 0
            for b in rows_b:
                j += 1
                cc = basec - j
                q *= cc * (a + b + cc) / ((a + cc) * (b + cc))
        ld = lsa + lsb + log_(q)

        zbase = exp_(2.0 * ld - shift - half_t * c2p)
        acc(cls, zbase * sz[dki])

        a_s = 0.0
        for (i1, a0, drat, em) in adds_a:
            a_s += drat * em * _qrow(a0 + 1, a0, i1, rows_b, rank)
        for (j1, b0, drat, em) in rems_b:
            a_s += drat * em * _qrow(b0 - 1, b0, j1, rows_a, rank)
        acc(_NCLS + cls, zbase * a_s * corr[dki] * ssp[dki])
    return S, C


def _run_blocks(fn, nblocks, workers):
    if workers <= 1 or nblocks <= 1:
        return [fn(b) for b in range(nblocks)]
    try:
        ctx = get_context("fork")
    except ValueError:
        return [fn(b) for b in range(nblocks)]
    nw = min(workers, nblocks)
    with ctx.Pool(processes=nw) as pool:
        return list(pool.imap(fn, range(nblocks)))


def _merge(results, nc):
    ms = [0.0] * nc
    mc = [0.0] * nc
    for bs, bc in results:
        for i in range(nc):
            for x in (bs[i], bc[i]):
                s = ms[i]
                tt = s + x
                if abs(s) >= abs(x):
                    mc[i] += (s - tt) + x
                else:
                    mc[i] += (x - tt) + s
                ms[i] = tt
    return [ms[i] + mc[i] for i in range(nc)]


def genus_sums(rank, k_max, n_max, gamma, area, loop_area, genera,
               want_e=True, want_m=True, workers=1):
    """One fused pass; returns per (group, genus) raw sums and class splits.

    Output maps (group, genus) to {"z": (tot, cls4), "e": ..., "m": ...};
    the e and m entries are raw numerators without 1/N or 1/N^2 factors.
    """
    global _G
    t = loop_area if (want_e or want_m) else 0.0
    shapes = _build_shapes(rank, k_max, t, want_e or want_m)
    pairs = _pair_list(shapes, rank)
    sz, se = _gauss_sums(rank, k_max, n_max, area, t, want_e)
    corr = [math.exp(0.5 * t * (2 * dk + 1) / (rank * rank))
            for dk in range(-k_max, k_max + 1)]
    pw = tuple(2 - 2 * g for g in genera)
    _G = {
        "pairs": pairs, "shapes": shapes, "rank": rank,
        "half_T": 0.5 * area, "k_max": k_max, "sz": sz, "se": se,
        "corr": corr, "pw": pw, "cut": float(rank) ** gamma,
        "want_e": want_e, "want_m": want_m,
        "need_ld": any(p != 0 for p in pw),
    }
    nblocks = max(1, -(-len(pairs) // BLOCK))
    nc = _KINDS * _GROUPS * len(pw) * _NCLS
    cells = _merge(_run_blocks(_genus_block, nblocks, workers), nc)

    out = {}
    ngen = len(genera)
    for gi, group in enumerate(("su", "u")):
        for gei, g in enumerate(genera):
            res = {}
            for ki, kind in enumerate(("z", "e", "m")):
                o = ((ki * _GROUPS + gi) * ngen + gei) * _NCLS
                cls = tuple(cells[o + c] for c in range(_NCLS))
                res[kind] = (((cls[0] + cls[1]) + cls[2]) + cls[3], cls)
            out[(group, g)] = res
    out["pairs"] = len(pairs)
    return out


def sphere_sums(rank, k_max, n_max, gamma, total_area, loop_area, workers=1):
    """Sphere double sum; returns shifted z and numerator with class splits."""
    global _G
    T = total_area
    t = loop_area
    shapes = _build_shapes(rank, k_max, T - t, True)
    pairs = _pair_list(shapes, rank)
    sz, _ = _gauss_sums(rank, k_max, n_max, T, 0.0, False)
    half_rest = 0.5 * (T - t)
    half_loop = 0.5 * t
    ssp = []
    for dk in range(-k_max, k_max + 1):
        d0 = dk / rank
        d1 = (dk + 1) / rank
        s = 0.0
        for n in range(-n_max, n_max + 1):
            s += math.exp(-half_loop * (n + d0) * (n + d0)
                          - half_rest * (n + d1) * (n + d1))
        ssp.append(s)
    corr = [math.exp(half_rest * (2 * dk + 1) / (rank * rank))
            for dk in range(-k_max, k_max + 1)]

    amax = rank // 2
    bmax = (rank - 1) // 2
    mla = max((s[4] for s in shapes if s[2] <= amax), default=0.0)
    mlb = max((s[4] for s in shapes if s[2] <= bmax), default=0.0)
    shift = max(0.0, 2.0 * (mla + mlb) - 600.0)

    _G = {
        "pairs": pairs, "shapes": shapes, "rank": rank, "half_T": 0.5 * T,
        "k_max": k_max, "sz": sz, "ssph": ssp, "corr": corr,
        "cut": float(rank) ** gamma, "shift": shift,
    }
    nblocks = max(1, -(-len(pairs) // BLOCK))
    cells = _merge(_run_blocks(_sphere_block, nblocks, workers), 2 * _NCLS)
    zc = tuple(cells[0:4])
    nc_ = tuple(cells[4:8])
    return {
        "z": (((zc[0] + zc[1]) + zc[2]) + zc[3], zc),
        "num": (((nc_[0] + nc_[1]) + nc_[2]) + nc_[3], nc_),
        "pairs": len(pairs),
        "log_shift": shift,
    }
