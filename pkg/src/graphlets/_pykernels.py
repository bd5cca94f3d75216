"""Pure-Python sampling kernels.

These are the reference implementations and the fallback when the compiled
core is unavailable.  ``_core.pyx`` mirrors them statement for statement,
including the order in which uniforms are consumed, so both produce the same
output for the same generator.

Query counters ``q`` are [neighbor, pair, degree].  A binary search over a
sorted list is billed as one neighbor query.
"""
from __future__ import annotations

from bisect import bisect_left

import numpy as np

from .rand import Uniforms, draw_index

ISOLATED = -1


def _popcount(x):
    return bin(x).count("1")


def _pick(w, count, t):
    """Index j with cumulative weight crossing t; never lands on a zero weight."""
    j = 0
    acc = w[0]
    while t >= acc and j < count - 1:
        j += 1
        acc += w[j]
    while w[j] == 0:
        j -= 1
    return j


def _is_adj(L, u, w):
    if u == w:
        return False
    if L.deg[u] > L.deg[w]:
        u, w = w, u
    hi = L.indptr[u + 1]
    j = bisect_left(L.adj, w, L.indptr[u], hi)
    return j < hi and L.adj[j] == w


def _alias_draw(L, uni):
    i = draw_index(uni(), len(L.a_sup))
    if uni() >= L.a_prob[i]:
        i = L.a_alias[i]
    return L.a_sup[i]


# -- exact growing process ---------------------------------------------------

def _deg_after(L, u, rv):
    lo = L.indptr[u]
    return L.deg[u] - (bisect_left(L.adj_rank, rv, lo, L.indptr[u + 1]) - lo)


def rand_grow(L, v, uni, q, trace=None):
    """Grow {v} to k vertices inside G(v); returns the list in insertion order."""
    k = L.k
    rank, indptr, adj_rank = L.rank, L.indptr, L.adj_rank
    S = [v]
    da = [L.deg_after[v]]
    dS = [0]
    A = [0]
    for i in range(1, k):
        cuts = [da[j] - dS[j] for j in range(i)]
        tot = 0
        for c in cuts:
            tot += c
        if tot <= 0:
            raise AssertionError(f"empty cut at step {i} from v={v}")
        j = _pick(cuts, i, uni() * tot)
        u = S[j]
        r = draw_index(uni(), cuts[j])
        lo = indptr[u]
        hi = indptr[u + 1]
        idx = lo + L.deg[u] - da[j] + r
        skips = []
        m = A[j]
        t = 0
        while m:
            if m & 1:
                skips.append(bisect_left(adj_rank, rank[S[t]], lo, hi))
            m >>= 1
            t += 1
        skips.sort()
        for p in skips:
            if p <= idx:
                idx += 1
        w = L.order[adj_rank[idx]]
        q[0] += 1
        mw = 0
        for t in range(i):
            if _is_adj(L, S[t], w):
                mw |= 1 << t
                A[t] |= 1 << i
                dS[t] += 1
        q[1] += i
        if trace is not None:
            trace.append((u, w, dict(zip(S, cuts)), tot))
        S.append(w)
        A.append(mw)
        dS.append(_popcount(mw))
        da.append(_deg_after(L, w, rank[v]))
        q[0] += 1
    return S


def prob(L, S, q):
    """Probability that the growing process at S[0] returns set(S)."""
    k = len(S)
    rv = L.rank[S[0]]
    A = [0] * k
    for a in range(k):
        for c in range(a + 1, k):
            if _is_adj(L, S[a], S[c]):
                A[a] |= 1 << c
                A[c] |= 1 << a
    q[1] += k * (k - 1) // 2
    da = [_deg_after(L, x, rv) for x in S]
    q[0] += k
    full = (1 << k) - 1
    f = [0.0] * (full + 1)
    f[1] = 1.0
    for mask in range(1, full, 2):
        fm = f[mask]
        if fm == 0.0:
            continue
        c = 0
        for j in range(k):
            if mask >> j & 1:
                c += da[j] - _popcount(A[j] & mask)
        for w in range(k):
            if not mask >> w & 1:
                nb = _popcount(A[w] & mask)
                if nb:
                    f[mask | 1 << w] += fm * nb / c
    return f[full]


def ugs_trials(ctx, gen, n_samples):
    L = ctx.lists()
    uni = Uniforms(gen)
    q = [0, 0, 0]
    out = np.empty((n_samples, L.k), dtype=np.int32)
    trials = np.zeros(n_samples, dtype=np.int64)
    for s in range(n_samples):
        t = 0
        while True:
            t += 1
            v = _alias_draw(L, uni)
            S = rand_grow(L, v, uni, q)
            p = prob(L, S, q)
            if uni() < L.coef / (L.b[v] * p):
                break
        S.sort()
        out[s] = S
        trials[s] = t
    return out, trials, np.array(q, dtype=np.int64)


def grow_batch(ctx, gen, v, n):
    L = ctx.lists()
    uni = Uniforms(gen)
    q = [0, 0, 0]
    out = np.empty((n, L.k), dtype=np.int32)
    probs = np.empty(n, dtype=np.float64)
    for s in range(n):
        S = rand_grow(L, v, uni, q)
        probs[s] = prob(L, S, q)
        S.sort()
        out[s] = S
    return out, probs, np.array(q, dtype=np.int64)


# -- approximate growing process ---------------------------------------------

def _succ(s, x, v):
    sx = s[x]
    sv = s[v]
    return sx < sv or (sx == sv and x < v)


def estimate_cuts(L, v, U, ell, h, uni, q):
    s, adj, indptr = L.s, L.adj, L.indptr
    out = []
    for u in U:
        d = L.deg[u]
        lo = indptr[u]
        X = 0
        if d == 0:
            out.append(0.0)
            continue
        if L.exhaustive and h >= d:
            for x in adj[lo:lo + d]:
                if _succ(s, x, v) and x not in U:
                    X += 1
            q[0] += d
            out.append(float(X) if h * X / d >= ell else 0.0)
        else:
            hh = int(h)
            for _ in range(hh):
                x = adj[lo + draw_index(uni(), d)]
                if _succ(s, x, v) and x not in U:
                    X += 1
            q[0] += hh
            out.append(d * X / hh if X >= ell else 0.0)
    q[2] += len(U)
    return out


def apx_rand_grow(L, v, uni, q):
    """Returns the grown list, or None on FAIL."""
    s, adj, indptr = L.s, L.adj, L.indptr
    S = [v]
    for i in range(1, L.k):
        c = estimate_cuts(L, v, S, L.ell_grow, L.h_grow, uni, q)
        tot = 0.0
        for x in c:
            tot += x
        if tot <= 0.0:
            return None
        j = _pick(c, i, uni() * tot)
        u = S[j]
        d = L.deg[u]
        lo = indptr[u]
        y = -1
        for _ in range(L.trial_cap):
            y = adj[lo + draw_index(uni(), d)]
            q[0] += 1
            if _succ(s, y, v) and y not in S:
                break
            y = -1
        if y < 0:
            return None
        S.append(y)
    return S


def apx_prob(L, S, uni, q):
    """(estimate of prob(S), degraded flag)."""
    k = len(S)
    v = S[0]
    A = [0] * k
    for a in range(k):
        for c in range(a + 1, k):
            if _is_adj(L, S[a], S[c]):
                A[a] |= 1 << c
                A[c] |= 1 << a
    q[1] += k * (k - 1) // 2
    full = (1 << k) - 1
    f = [0.0] * (full + 1)
    f[1] = 1.0
    degraded = False
    for mask in range(1, full, 2):
        fm = f[mask]
        if fm == 0.0:
            continue
        U = [S[j] for j in range(k) if mask >> j & 1]
        c = estimate_cuts(L, v, U, L.ell_prob, L.h_prob, uni, q)
        ctot = 0.0
        for x in c:
            ctot += x
        if ctot <= 0.0:
            degraded = True
            continue
        for w in range(k):
            if not mask >> w & 1:
                nb = _popcount(A[w] & mask)
                if nb:
                    f[mask | 1 << w] += fm * nb / ctot
    return f[full], degraded


def apx_trials(ctx, gen, n_samples):
    L = ctx.lists()
    uni = Uniforms(gen)
    q = [0, 0, 0]
    out = np.empty((n_samples, L.k), dtype=np.int32)
    trials = np.zeros(n_samples, dtype=np.int64)
    stats = np.zeros(2, dtype=np.int64)  # fails, degraded
    for s in range(n_samples):
        t = 0
        while True:
            t += 1
            v = _alias_draw(L, uni)
            S = apx_rand_grow(L, v, uni, q)
            if S is None:
                stats[0] += 1
                continue
            p, bad = apx_prob(L, S, uni, q)
            if bad:
                stats[1] += 1
            if p <= 0.0:
                continue
            if uni() < L.coef / (L.b[v] * p):
                break
        S.sort()
        out[s] = S
        trials[s] = t
    return out, trials, stats, np.array(q, dtype=np.int64)


def apx_grow_batch(ctx, gen, v, n):
    """n runs of the approximate growing process at v; FAIL rows are -1."""
    L = ctx.lists()
    uni = Uniforms(gen)
    q = [0, 0, 0]
    out = np.full((n, L.k), -1, dtype=np.int32)
    for s in range(n):
        S = apx_rand_grow(L, v, uni, q)
        if S is not None:
            S.sort()
            out[s] = S
    return out, np.array(q, dtype=np.int64)


# -- walk on (k-1)-graphlets ---------------------------------------------------

def _adjmat(L, g, q):
    j = len(g)
    A = [0] * j
    for a in range(j):
        for c in range(a + 1, j):
            if _is_adj(L, g[a], g[c]):
                A[a] |= 1 << c
                A[c] |= 1 << a
    q[1] += j * (j - 1) // 2
    return A


def _connected(A, mask):
    if mask == 0:
        return True
    low = mask & -mask
    seen = low
    frontier = low
    while frontier:
        b = frontier & -frontier
        frontier ^= b
        i = b.bit_length() - 1
        new = A[i] & mask & ~seen
        seen |= new
        frontier |= new
    return seen == mask


def walk_move(L, g, uni, q):
    """One non-lazy move to a uniform neighbor in the graphlet graph, or None if isolated."""
    j = len(g)
    adj, indptr, deg = L.adj, L.indptr, L.deg
    if j == 1:
        a = g[0]
        d = deg[a]
        q[2] += 1
        if d == 0:
            return None
        q[0] += 1
        return [adj[indptr[a] + draw_index(uni(), d)]]
    A = _adjmat(L, g, q)
    C = [deg[g[i]] - _popcount(A[i]) for i in range(j)]
    q[2] += j
    full = (1 << j) - 1
    cx = []
    for x in range(j):
        if _connected(A, full ^ (1 << x)):
            t = 0
            for y in range(j):
                if y != x:
                    t += C[y]
            cx.append(t)
        else:
            cx.append(0)
    tot = 0
    for c in cx:
        tot += c
    if tot == 0:
        return None
    while True:
        x = _pick(cx, j, uni() * tot)
        Cy = [0 if y == x else C[y] for y in range(j)]
        y = _pick(Cy, j, uni() * cx[x])
        a = g[y]
        d = deg[a]
        lo = indptr[a]
        while True:
            z = adj[lo + draw_index(uni(), d)]
            q[0] += 1
            if z not in g:
                break
        r = 0
        for i in range(j):
            if i != x and _is_adj(L, g[i], z):
                r += 1
        q[1] += j - 1
        if uni() < 1.0 / r:
            return [g[i] for i in range(j) if i != x] + [z]


def walk_step(L, g, uni, q):
    if uni() < 0.5:
        return g
    return walk_move(L, g, uni, q)


def compute_T(L, h, q):
    k = len(h)
    A = _adjmat(L, h, q)
    full = (1 << k) - 1
    one = [_connected(A, full ^ (1 << x)) for x in range(k)]
    T = 0
    for x in range(k):
        if not one[x]:
            continue
        for y in range(x + 1, k):
            if one[y] and _connected(A, full ^ (1 << x) ^ (1 << y)):
                T += 1
    return T


def walk_run(ctx, gen, g0, n_samples):
    """Returns (samples, attempts, final state, steps, status, queries); status -1 if stuck."""
    L = ctx.lists()
    uni = Uniforms(gen)
    q = [0, 0, 0]
    g = [int(x) for x in g0]
    out = np.empty((n_samples, L.k), dtype=np.int32)
    attempts = np.zeros(n_samples, dtype=np.int64)
    steps = 0
    for s in range(n_samples):
        att = 0
        while True:
            att += 1
            for _ in range(L.t_mix):
                g2 = walk_step(L, g, uni, q)
                if g2 is None:
                    return out[:s], attempts[:s], np.array(g, np.int32), steps, ISOLATED, np.array(q)
                g = g2
                steps += 1
            z = walk_move(L, g, uni, q)
            if z is None:
                return out[:s], attempts[:s], np.array(g, np.int32), steps, ISOLATED, np.array(q)
            steps += 1
            h = g + [z[-1]]
            T = compute_T(L, h, q)
            ok = uni() < 1.0 / T
            g = z
            if ok:
                h.sort()
                out[s] = h
                attempts[s] = att
                break
    return out, attempts, np.array(g, np.int32), steps, 0, np.array(q, dtype=np.int64)


def walk_steps_from(ctx, gen, g0, n):
    """n independent lazy steps from the same state; rows sorted. Isolated -> -1 rows."""
    L = ctx.lists()
    uni = Uniforms(gen)
    q = [0, 0, 0]
    g0 = [int(x) for x in g0]
    out = np.full((n, len(g0)), -1, dtype=np.int32)
    for s in range(n):
        g = walk_step(L, g0, uni, q)
        if g is not None:
            out[s] = sorted(g)
    return out, np.array(q, dtype=np.int64)
