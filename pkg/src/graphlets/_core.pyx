# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sampling kernels; a line-by-line port of _pykernels.

Uniform doubles come straight from the generator's bitgen_t, in the same
order the Python kernels read them, so outputs are identical.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint32_t
from libc.stdlib cimport malloc, free
from cpython.pycapsule cimport PyCapsule_GetPointer
from numpy.random cimport bitgen_t

cnp.import_array()

cdef enum:
    MAXK = 16

cdef extern from *:
    int __builtin_popcount(unsigned int) nogil
    int __builtin_ctz(unsigned int) nogil


cdef struct G:
    int k
    const int64_t* indptr
    const int32_t* adj
    const int64_t* deg
    const int32_t* adj_rank
    const int32_t* order
    const int32_t* rank
    const int64_t* deg_after
    const double* b
    const double* s
    const int32_t* a_sup
    const double* a_prob
    const int32_t* a_alias
    int64_t n_alias
    double coef
    double ell_grow
    double h_grow
    double ell_prob
    double h_prob
    int64_t trial_cap
    bint exhaustive
    int64_t q[3]
    bitgen_t* rng


cdef bitgen_t* _bitgen(object gen) except NULL:
    return <bitgen_t*> PyCapsule_GetPointer(gen.bit_generator.capsule, "BitGenerator")


cdef inline double _u(G* g) noexcept nogil:
    return g.rng.next_double(g.rng.state)


cdef inline int64_t _draw_index(double u, int64_t n) noexcept nogil:
    cdef int64_t j = <int64_t>(u * n)
    return j if j < n else n - 1


cdef inline int _popcount(uint32_t x) noexcept nogil:
    return __builtin_popcount(x)


cdef inline int _pick_i(const int64_t* w, int count, double t) noexcept nogil:
    cdef int j = 0
    cdef double acc = <double>w[0]
    while t >= acc and j < count - 1:
        j += 1
        acc += <double>w[j]
    while w[j] == 0:
        j -= 1
    return j


cdef inline int _pick_d(const double* w, int count, double t) noexcept nogil:
    cdef int j = 0
    cdef double acc = w[0]
    while t >= acc and j < count - 1:
        j += 1
        acc += w[j]
    while w[j] == 0.0:
        j -= 1
    return j


cdef inline int64_t _lower_bound(const int32_t* a, int64_t lo, int64_t hi, int32_t x) noexcept nogil:
    cdef int64_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline bint _is_adj(G* g, int32_t u, int32_t w) noexcept nogil:
    cdef int32_t t
    cdef int64_t hi, j
    if u == w:
        return 0
    if g.deg[u] > g.deg[w]:
        t = u
        u = w
        w = t
    hi = g.indptr[u + 1]
    j = _lower_bound(g.adj, g.indptr[u], hi, w)
    return j < hi and g.adj[j] == w


cdef inline int32_t _alias_draw(G* g) noexcept nogil:
    cdef int64_t i = _draw_index(_u(g), g.n_alias)
    if _u(g) >= g.a_prob[i]:
        i = g.a_alias[i]
    return g.a_sup[i]


cdef inline bint _member(const int32_t* S, int n, int32_t x) noexcept nogil:
    cdef int i
    for i in range(n):
        if S[i] == x:
            return 1
    return 0


cdef void _sort_small(int32_t* a, int n) noexcept nogil:
    cdef int i, j
    cdef int32_t x
    for i in range(1, n):
        x = a[i]
        j = i - 1
        while j >= 0 and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x


cdef void _sort_small64(int64_t* a, int n) noexcept nogil:
    cdef int i, j
    cdef int64_t x
    for i in range(1, n):
        x = a[i]
        j = i - 1
        while j >= 0 and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x


# -- exact growing process -------------------------------------------------------

cdef inline int64_t _deg_after(G* g, int32_t u, int32_t rv) noexcept nogil:
    cdef int64_t lo = g.indptr[u]
    return g.deg[u] - (_lower_bound(g.adj_rank, lo, g.indptr[u + 1], rv) - lo)


cdef int _rand_grow(G* g, int32_t v, int32_t* S) noexcept nogil:
    cdef int k = g.k
    cdef int64_t da[MAXK]
    cdef int64_t dS[MAXK]
    cdef uint32_t A[MAXK]
    cdef int64_t cuts[MAXK]
    cdef int64_t skips[MAXK]
    cdef int i, j, t, ns
    cdef int64_t tot, r, lo, hi, idx
    cdef uint32_t m, mw
    cdef int32_t u, w
    S[0] = v
    da[0] = g.deg_after[v]
    dS[0] = 0
    A[0] = 0
    for i in range(1, k):
        tot = 0
        for j in range(i):
            cuts[j] = da[j] - dS[j]
            tot += cuts[j]
        if tot <= 0:
            return -1
        j = _pick_i(cuts, i, _u(g) * <double>tot)
        u = S[j]
        r = _draw_index(_u(g), cuts[j])
        lo = g.indptr[u]
        hi = g.indptr[u + 1]
        idx = lo + g.deg[u] - da[j] + r
        ns = 0
        m = A[j]
        t = 0
        while m:
            if m & 1:
                skips[ns] = _lower_bound(g.adj_rank, lo, hi, g.rank[S[t]])
                ns += 1
            m >>= 1
            t += 1
        _sort_small64(skips, ns)
        for t in range(ns):
            if skips[t] <= idx:
                idx += 1
        w = g.order[g.adj_rank[idx]]
        g.q[0] += 1
        mw = 0
        for t in range(i):
            if _is_adj(g, S[t], w):
                mw |= (<uint32_t>1) << t
                A[t] |= (<uint32_t>1) << i
                dS[t] += 1
        g.q[1] += i
        S[i] = w
        A[i] = mw
        dS[i] = _popcount(mw)
        da[i] = _deg_after(g, w, g.rank[v])
        g.q[0] += 1
    return 0


cdef double _prob(G* g, const int32_t* S, int k, double* f) noexcept nogil:
    cdef uint32_t A[MAXK]
    cdef int64_t da[MAXK]
    cdef int a, c, j, w, nb
    cdef uint32_t mask, full
    cdef int64_t cut
    cdef double fm
    cdef int32_t rv = g.rank[S[0]]
    for a in range(k):
        A[a] = 0
    for a in range(k):
        for c in range(a + 1, k):
            if _is_adj(g, S[a], S[c]):
                A[a] |= (<uint32_t>1) << c
                A[c] |= (<uint32_t>1) << a
    g.q[1] += k * (k - 1) // 2
    for a in range(k):
        da[a] = _deg_after(g, S[a], rv)
    g.q[0] += k
    full = ((<uint32_t>1) << k) - 1
    for mask in range(full + 1):
        f[mask] = 0.0
    f[1] = 1.0
    mask = 1
    while mask < full:
        fm = f[mask]
        if fm != 0.0:
            cut = 0
            for j in range(k):
                if (mask >> j) & 1:
                    cut += da[j] - _popcount(A[j] & mask)
            for w in range(k):
                if not ((mask >> w) & 1):
                    nb = _popcount(A[w] & mask)
                    if nb:
                        f[mask | ((<uint32_t>1) << w)] += fm * nb / <double>cut
        mask += 2
    return f[full]


cdef void _load_ugs(G* g, ctx, object gen,
                    const int64_t[::1] indptr, const int32_t[::1] adj, const int64_t[::1] deg,
                    const int32_t[::1] adj_rank, const int32_t[::1] order, const int32_t[::1] rank,
                    const int64_t[::1] deg_after, const double[::1] b, const int32_t[::1] a_sup,
                    const double[::1] a_prob, const int32_t[::1] a_alias) except *:
    g.k = ctx.k
    g.indptr = &indptr[0]
    g.adj = &adj[0] if adj.shape[0] else NULL
    g.deg = &deg[0]
    g.adj_rank = &adj_rank[0] if adj_rank.shape[0] else NULL
    g.order = &order[0]
    g.rank = &rank[0]
    g.deg_after = &deg_after[0]
    g.b = &b[0]
    g.a_sup = &a_sup[0]
    g.a_prob = &a_prob[0]
    g.a_alias = &a_alias[0]
    g.n_alias = a_sup.shape[0]
    g.coef = ctx.coef
    g.q[0] = g.q[1] = g.q[2] = 0
    g.rng = _bitgen(gen)


def _check_k(k):
    if k < 2 or k > MAXK:
        raise ValueError(f"compiled kernels support 2 <= k <= {MAXK}")


def ugs_trials(ctx, gen, Py_ssize_t n_samples):
    _check_k(ctx.k)
    cdef G g
    cdef const int64_t[::1] indptr = ctx.indptr
    cdef const int32_t[::1] adj = ctx.adj
    cdef const int64_t[::1] deg = ctx.deg
    cdef const int32_t[::1] adj_rank = ctx.adj_rank
    cdef const int32_t[::1] order = ctx.order
    cdef const int32_t[::1] rank = ctx.rank
    cdef const int64_t[::1] deg_after = ctx.deg_after
    cdef const double[::1] b = ctx.b
    cdef const int32_t[::1] a_sup = ctx.a_sup
    cdef const double[::1] a_prob = ctx.a_prob
    cdef const int32_t[::1] a_alias = ctx.a_alias
    _load_ugs(&g, ctx, gen, indptr, adj, deg, adj_rank, order, rank, deg_after, b,
              a_sup, a_prob, a_alias)
    cdef int k = g.k
    out_arr = np.empty((n_samples, k), dtype=np.int32)
    trials_arr = np.zeros(n_samples, dtype=np.int64)
    cdef int32_t[:, ::1] out = out_arr
    cdef int64_t[::1] trials = trials_arr
    cdef int32_t S[MAXK]
    cdef double* f = <double*> malloc(sizeof(double) << k)
    cdef Py_ssize_t s
    cdef int64_t t
    cdef int32_t v
    cdef double p
    cdef int i, bad = 0
    if f == NULL:
        raise MemoryError()
    with nogil:
        for s in range(n_samples):
            t = 0
            while True:
                t += 1
                v = _alias_draw(&g)
                if _rand_grow(&g, v, S) < 0:
                    bad = 1
                    break
                p = _prob(&g, S, k, f)
                if _u(&g) < g.coef / (g.b[v] * p):
                    break
            if bad:
                break
            _sort_small(S, k)
            for i in range(k):
                out[s, i] = S[i]
            trials[s] = t
    free(f)
    if bad:
        raise AssertionError("empty cut during growth; order is not degree-dominating")
    return out_arr, trials_arr, np.array([g.q[0], g.q[1], g.q[2]], dtype=np.int64)


def grow_batch(ctx, gen, int32_t v, Py_ssize_t n):
    _check_k(ctx.k)
    cdef G g
    cdef const int64_t[::1] indptr = ctx.indptr
    cdef const int32_t[::1] adj = ctx.adj
    cdef const int64_t[::1] deg = ctx.deg
    cdef const int32_t[::1] adj_rank = ctx.adj_rank
    cdef const int32_t[::1] order = ctx.order
    cdef const int32_t[::1] rank = ctx.rank
    cdef const int64_t[::1] deg_after = ctx.deg_after
    cdef const double[::1] b = ctx.b
    cdef const int32_t[::1] a_sup = ctx.a_sup
    cdef const double[::1] a_prob = ctx.a_prob
    cdef const int32_t[::1] a_alias = ctx.a_alias
    _load_ugs(&g, ctx, gen, indptr, adj, deg, adj_rank, order, rank, deg_after, b,
              a_sup, a_prob, a_alias)
    cdef int k = g.k
    out_arr = np.empty((n, k), dtype=np.int32)
    probs_arr = np.empty(n, dtype=np.float64)
    cdef int32_t[:, ::1] out = out_arr
    cdef double[::1] probs = probs_arr
    cdef int32_t S[MAXK]
    cdef double* f = <double*> malloc(sizeof(double) << k)
    cdef Py_ssize_t s
    cdef int i, bad = 0
    if f == NULL:
        raise MemoryError()
    with nogil:
        for s in range(n):
            if _rand_grow(&g, v, S) < 0:
                bad = 1
                break
            probs[s] = _prob(&g, S, k, f)
            _sort_small(S, k)
            for i in range(k):
                out[s, i] = S[i]
    free(f)
    if bad:
        raise AssertionError("empty cut during growth; order is not degree-dominating")
    return out_arr, probs_arr, np.array([g.q[0], g.q[1], g.q[2]], dtype=np.int64)


# -- approximate growing process ----------------------------------------------

cdef inline bint _succ(G* g, int32_t x, int32_t v) noexcept nogil:
    cdef double sx = g.s[x]
    cdef double sv = g.s[v]
    return sx < sv or (sx == sv and x < v)


cdef void _estimate_cuts(G* g, int32_t v, const int32_t* U, int nu, double ell, double h,
                         double* out) noexcept nogil:
    cdef int a
    cdef int32_t u, x
    cdef int64_t d, lo, X, e, hh
    for a in range(nu):
        u = U[a]
        d = g.deg[u]
        lo = g.indptr[u]
        X = 0
        if d == 0:
            out[a] = 0.0
            continue
        if g.exhaustive and h >= <double>d:
            for e in range(lo, lo + d):
                x = g.adj[e]
                if _succ(g, x, v) and not _member(U, nu, x):
                    X += 1
            g.q[0] += d
            out[a] = <double>X if h * <double>X / <double>d >= ell else 0.0
        else:
            hh = <int64_t>h
            for e in range(hh):
                x = g.adj[lo + _draw_index(_u(g), d)]
                if _succ(g, x, v) and not _member(U, nu, x):
                    X += 1
            g.q[0] += hh
            out[a] = <double>(d * X) / <double>hh if <double>X >= ell else 0.0
    g.q[2] += nu


cdef int _apx_rand_grow(G* g, int32_t v, int32_t* S) noexcept nogil:
    cdef double c[MAXK]
    cdef double tot
    cdef int i, j
    cdef int32_t u, y
    cdef int64_t d, lo, t
    S[0] = v
    for i in range(1, g.k):
        _estimate_cuts(g, v, S, i, g.ell_grow, g.h_grow, c)
        tot = 0.0
        for j in range(i):
            tot += c[j]
        if tot <= 0.0:
            return -1
        j = _pick_d(c, i, _u(g) * tot)
        u = S[j]
        d = g.deg[u]
        lo = g.indptr[u]
        y = -1
        for t in range(g.trial_cap):
            y = g.adj[lo + _draw_index(_u(g), d)]
            g.q[0] += 1
            if _succ(g, y, v) and not _member(S, i, y):
                break
            y = -1
        if y < 0:
            return -1
        S[i] = y
    return 0


cdef double _apx_prob(G* g, const int32_t* S, int k, double* f, bint* degraded) noexcept nogil:
    cdef uint32_t A[MAXK]
    cdef int32_t U[MAXK]
    cdef double c[MAXK]
    cdef int a, cc, j, w, nb, nu
    cdef uint32_t mask, full
    cdef double fm, ctot
    cdef int32_t v = S[0]
    for a in range(k):
        A[a] = 0
    for a in range(k):
        for cc in range(a + 1, k):
            if _is_adj(g, S[a], S[cc]):
                A[a] |= (<uint32_t>1) << cc
                A[cc] |= (<uint32_t>1) << a
    g.q[1] += k * (k - 1) // 2
    full = ((<uint32_t>1) << k) - 1
    for mask in range(full + 1):
        f[mask] = 0.0
    f[1] = 1.0
    degraded[0] = 0
    mask = 1
    while mask < full:
        fm = f[mask]
        if fm != 0.0:
            nu = 0
            for j in range(k):
                if (mask >> j) & 1:
                    U[nu] = S[j]
                    nu += 1
            _estimate_cuts(g, v, U, nu, g.ell_prob, g.h_prob, c)
            ctot = 0.0
            for j in range(nu):
                ctot += c[j]
            if ctot <= 0.0:
                degraded[0] = 1
            else:
                for w in range(k):
                    if not ((mask >> w) & 1):
                        nb = _popcount(A[w] & mask)
                        if nb:
                            f[mask | ((<uint32_t>1) << w)] += fm * nb / ctot
        mask += 2
    return f[full]


cdef void _load_apx(G* g, ctx, object gen,
                    const int64_t[::1] indptr, const int32_t[::1] adj, const int64_t[::1] deg,
                    const double[::1] s, const double[::1] b, const int32_t[::1] a_sup,
                    const double[::1] a_prob, const int32_t[::1] a_alias) except *:
    g.k = ctx.k
    g.indptr = &indptr[0]
    g.adj = &adj[0] if adj.shape[0] else NULL
    g.deg = &deg[0]
    g.s = &s[0]
    g.b = &b[0]
    g.a_sup = &a_sup[0]
    g.a_prob = &a_prob[0]
    g.a_alias = &a_alias[0]
    g.n_alias = a_sup.shape[0]
    g.coef = ctx.coef
    g.ell_grow = ctx.ell_grow
    g.h_grow = ctx.h_grow
    g.ell_prob = ctx.ell_prob
    g.h_prob = ctx.h_prob
    g.trial_cap = ctx.trial_cap
    g.exhaustive = ctx.exhaustive
    g.q[0] = g.q[1] = g.q[2] = 0
    g.rng = _bitgen(gen)


def apx_trials(ctx, gen, Py_ssize_t n_samples):
    _check_k(ctx.k)
    cdef G g
    cdef const int64_t[::1] indptr = ctx.indptr
    cdef const int32_t[::1] adj = ctx.adj
    cdef const int64_t[::1] deg = ctx.deg
    cdef const double[::1] sk = ctx.s
    cdef const double[::1] b = ctx.b
    cdef const int32_t[::1] a_sup = ctx.a_sup
    cdef const double[::1] a_prob = ctx.a_prob
    cdef const int32_t[::1] a_alias = ctx.a_alias
    _load_apx(&g, ctx, gen, indptr, adj, deg, sk, b, a_sup, a_prob, a_alias)
    cdef int k = g.k
    out_arr = np.empty((n_samples, k), dtype=np.int32)
    trials_arr = np.zeros(n_samples, dtype=np.int64)
    stats_arr = np.zeros(2, dtype=np.int64)
    cdef int32_t[:, ::1] out = out_arr
    cdef int64_t[::1] trials = trials_arr
    cdef int64_t[::1] stats = stats_arr
    cdef int32_t S[MAXK]
    cdef double* f = <double*> malloc(sizeof(double) << k)
    cdef Py_ssize_t s
    cdef int64_t t
    cdef int32_t v
    cdef double p
    cdef bint bad
    cdef int i
    if f == NULL:
        raise MemoryError()
    with nogil:
        for s in range(n_samples):
            t = 0
            while True:
                t += 1
                v = _alias_draw(&g)
                if _apx_rand_grow(&g, v, S) < 0:
                    stats[0] += 1
                    continue
                p = _apx_prob(&g, S, k, f, &bad)
                if bad:
                    stats[1] += 1
                if p <= 0.0:
                    continue
                if _u(&g) < g.coef / (g.b[v] * p):
                    break
            _sort_small(S, k)
            for i in range(k):
                out[s, i] = S[i]
            trials[s] = t
    free(f)
    return out_arr, trials_arr, stats_arr, np.array([g.q[0], g.q[1], g.q[2]], dtype=np.int64)


def apx_grow_batch(ctx, gen, int32_t v, Py_ssize_t n):
    _check_k(ctx.k)
    cdef G g
    cdef const int64_t[::1] indptr = ctx.indptr
    cdef const int32_t[::1] adj = ctx.adj
    cdef const int64_t[::1] deg = ctx.deg
    cdef const double[::1] sk = ctx.s
    cdef const double[::1] b = ctx.b
    cdef const int32_t[::1] a_sup = ctx.a_sup
    cdef const double[::1] a_prob = ctx.a_prob
    cdef const int32_t[::1] a_alias = ctx.a_alias
    _load_apx(&g, ctx, gen, indptr, adj, deg, sk, b, a_sup, a_prob, a_alias)
    cdef int k = g.k
    out_arr = np.full((n, k), -1, dtype=np.int32)
    cdef int32_t[:, ::1] out = out_arr
    cdef int32_t S[MAXK]
    cdef Py_ssize_t s
    cdef int i
    with nogil:
        for s in range(n):
            if _apx_rand_grow(&g, v, S) == 0:
                _sort_small(S, k)
                for i in range(k):
                    out[s, i] = S[i]
    return out_arr, np.array([g.q[0], g.q[1], g.q[2]], dtype=np.int64)


# -- walk on (k-1)-graphlets ----------------------------------------------------

cdef void _adjmat(G* g, const int32_t* st, int j, uint32_t* A) noexcept nogil:
    cdef int a, c
    for a in range(j):
        A[a] = 0
    for a in range(j):
        for c in range(a + 1, j):
            if _is_adj(g, st[a], st[c]):
                A[a] |= (<uint32_t>1) << c
                A[c] |= (<uint32_t>1) << a
    g.q[1] += j * (j - 1) // 2


cdef bint _connected(const uint32_t* A, uint32_t mask) noexcept nogil:
    cdef uint32_t seen, frontier, bit, new
    cdef int i
    if mask == 0:
        return 1
    seen = mask & (~mask + 1)
    frontier = seen
    while frontier:
        bit = frontier & (~frontier + 1)
        frontier ^= bit
        i = __builtin_ctz(bit)
        new = A[i] & mask & ~seen
        seen |= new
        frontier |= new
    return seen == mask


cdef int _walk_move(G* g, int32_t* st, int j) noexcept nogil:
    """Move st in place to a uniform graphlet-graph neighbor; -1 if isolated."""
    cdef uint32_t A[MAXK]
    cdef int64_t C[MAXK]
    cdef int64_t cx[MAXK]
    cdef int64_t Cy[MAXK]
    cdef int x, y, i, r, o
    cdef int64_t tot, t, d, lo
    cdef int32_t a, z
    cdef uint32_t full
    if j == 1:
        a = st[0]
        d = g.deg[a]
        g.q[2] += 1
        if d == 0:
            return -1
        g.q[0] += 1
        st[0] = g.adj[g.indptr[a] + _draw_index(_u(g), d)]
        return 0
    _adjmat(g, st, j, A)
    for i in range(j):
        C[i] = g.deg[st[i]] - _popcount(A[i])
    g.q[2] += j
    full = ((<uint32_t>1) << j) - 1
    for x in range(j):
        if _connected(A, full ^ ((<uint32_t>1) << x)):
            t = 0
            for y in range(j):
                if y != x:
                    t += C[y]
            cx[x] = t
        else:
            cx[x] = 0
    tot = 0
    for x in range(j):
        tot += cx[x]
    if tot == 0:
        return -1
    while True:
        x = _pick_i(cx, j, _u(g) * <double>tot)
        for y in range(j):
            Cy[y] = 0 if y == x else C[y]
        y = _pick_i(Cy, j, _u(g) * <double>cx[x])
        a = st[y]
        d = g.deg[a]
        lo = g.indptr[a]
        while True:
            z = g.adj[lo + _draw_index(_u(g), d)]
            g.q[0] += 1
            if not _member(st, j, z):
                break
        r = 0
        for i in range(j):
            if i != x and _is_adj(g, st[i], z):
                r += 1
        g.q[1] += j - 1
        if _u(g) < 1.0 / r:
            o = 0
            for i in range(j):
                if i != x:
                    st[o] = st[i]
                    o += 1
            st[j - 1] = z
            return 0


cdef inline int _walk_step(G* g, int32_t* st, int j) noexcept nogil:
    if _u(g) < 0.5:
        return 0
    return _walk_move(g, st, j)


cdef int _compute_T(G* g, const int32_t* h, int k) noexcept nogil:
    cdef uint32_t A[MAXK]
    cdef bint one[MAXK]
    cdef uint32_t full = ((<uint32_t>1) << k) - 1
    cdef int x, y, T = 0
    _adjmat(g, h, k, A)
    for x in range(k):
        one[x] = _connected(A, full ^ ((<uint32_t>1) << x))
    for x in range(k):
        if not one[x]:
            continue
        for y in range(x + 1, k):
            if one[y] and _connected(A, full ^ ((<uint32_t>1) << x) ^ ((<uint32_t>1) << y)):
                T += 1
    return T


cdef void _load_walk(G* g, ctx, object gen, const int64_t[::1] indptr, const int32_t[::1] adj,
                     const int64_t[::1] deg) except *:
    g.k = ctx.k
    g.indptr = &indptr[0]
    g.adj = &adj[0] if adj.shape[0] else NULL
    g.deg = &deg[0]
    g.q[0] = g.q[1] = g.q[2] = 0
    g.rng = _bitgen(gen)


def walk_run(ctx, gen, g0, Py_ssize_t n_samples):
    if ctx.k < 2 or ctx.k > MAXK:
        raise ValueError(f"compiled kernels support 2 <= k <= {MAXK}")
    cdef G g
    cdef const int64_t[::1] indptr = ctx.indptr
    cdef const int32_t[::1] adj = ctx.adj
    cdef const int64_t[::1] deg = ctx.deg
    _load_walk(&g, ctx, gen, indptr, adj, deg)
    cdef int k = g.k
    cdef int j = k - 1
    cdef int64_t t_mix = ctx.t_mix
    out_arr = np.empty((n_samples, k), dtype=np.int32)
    att_arr = np.zeros(n_samples, dtype=np.int64)
    cdef int32_t[:, ::1] out = out_arr
    cdef int64_t[::1] attempts = att_arr
    cdef int32_t st[MAXK]
    cdef int32_t h[MAXK]
    cdef int i, T, status = 0
    cdef bint ok
    cdef int64_t att, t, steps = 0
    cdef Py_ssize_t s, done = 0
    for i in range(j):
        st[i] = g0[i]
    with nogil:
        for s in range(n_samples):
            att = 0
            while True:
                att += 1
                for t in range(t_mix):
                    if _walk_step(&g, st, j) < 0:
                        status = -1
                        break
                    steps += 1
                if status < 0:
                    break
                for i in range(j):
                    h[i] = st[i]
                if _walk_move(&g, st, j) < 0:
                    status = -1
                    break
                steps += 1
                h[j] = st[j - 1]
                T = _compute_T(&g, h, k)
                ok = _u(&g) < 1.0 / T
                if ok:
                    _sort_small(h, k)
                    for i in range(k):
                        out[s, i] = h[i]
                    attempts[s] = att
                    break
            if status < 0:
                break
            done = s + 1
    final = np.array([st[i] for i in range(j)], dtype=np.int32)
    return (out_arr[:done], att_arr[:done], final, steps, status,
            np.array([g.q[0], g.q[1], g.q[2]], dtype=np.int64))


def walk_steps_from(ctx, gen, g0, Py_ssize_t n):
    cdef G g
    cdef const int64_t[::1] indptr = ctx.indptr
    cdef const int32_t[::1] adj = ctx.adj
    cdef const int64_t[::1] deg = ctx.deg
    _load_walk(&g, ctx, gen, indptr, adj, deg)
    cdef int j = len(g0)
    if j < 1 or j > MAXK:
        raise ValueError("bad state size")
    out_arr = np.full((n, j), -1, dtype=np.int32)
    cdef int32_t[:, ::1] out = out_arr
    cdef int32_t st0[MAXK]
    cdef int32_t st[MAXK]
    cdef int i
    cdef Py_ssize_t s
    for i in range(j):
        st0[i] = g0[i]
    with nogil:
        for s in range(n):
            for i in range(j):
                st[i] = st0[i]
            if _walk_step(&g, st, j) == 0:
                _sort_small(st, j)
                for i in range(j):
                    out[s, i] = st[i]
    return out_arr, np.array([g.q[0], g.q[1], g.q[2]], dtype=np.int64)
