# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels; function-for-function twin of _kernels_py.

All tables arrive as int32 memoryviews (the wrapper in kernels.py
normalizes Python lists).  Return values are -1 on success or the packed
index of the first counterexample, as in the pure backend.
"""


def assoc_failure(const int[:] mul, int n):
    cdef long long i, j, k, ij, row_i, row_j
    for i in range(n):
        row_i = i * n
        for j in range(n):
            ij = mul[row_i + j]
            row_j = j * n
            for k in range(n):
                if mul[ij * n + k] != mul[row_i + mul[row_j + k]]:
                    return (i * n + j) * n + k
    return -1


def hom_failure(const int[:] fmap, const int[:] mul_s, int n_s,
                const int[:] mul_t, int n_t):
    cdef long long i, j, row, fi_row
    for i in range(n_s):
        fi_row = <long long> fmap[i] * n_t
        row = i * n_s
        for j in range(n_s):
            if fmap[mul_s[row + j]] != mul_t[fi_row + fmap[j]]:
                return row + j
    return -1


cdef inline long long _hmul(long long g, long long h, int q,
                            const int[:] add, const int[:] mul) nogil:
    cdef long long a, b, c, a2, b2, c2, r, ra, rb, rc
    a = g // (q * q); r = g % (q * q); b = r // q; c = r % q
    a2 = h // (q * q); r = h % (q * q); b2 = r // q; c2 = r % q
    ra = add[a * q + a2]
    rb = add[b * q + b2]
    rc = add[add[c * q + c2] * q + mul[a * q + b2]]
    return (ra * q + rb) * q + rc


cdef inline long long _hcomm(long long g, long long h, int q,
                             const int[:] add, const int[:] mul,
                             const int[:] neg) nogil:
    cdef long long a, b, a2, b2, r
    a = g // (q * q); r = g % (q * q); b = r // q
    a2 = h // (q * q); r = h % (q * q); b2 = r // q
    return add[mul[a * q + b2] * q + neg[mul[b * q + a2]]]


def heis_mul(long long g, long long h, int q, const int[:] add, const int[:] mul):
    return _hmul(g, h, q, add, mul)


def heis_inv(long long g, int q, const int[:] add, const int[:] mul,
             const int[:] neg):
    cdef long long a, b, c, r, ra, rb, rc
    a = g // (q * q); r = g % (q * q); b = r // q; c = r % q
    ra = neg[a]
    rb = neg[b]
    rc = add[neg[c] * q + mul[a * q + b]]
    return (ra * q + rb) * q + rc


def heis_comm(long long g, long long h, int q, const int[:] add,
              const int[:] mul, const int[:] neg):
    return _hcomm(g, h, q, add, mul, neg)


def heis_assoc_failure(int q, const int[:] add, const int[:] mul):
    cdef long long i, j, k, ij, n
    n = <long long> q * q * q
    for i in range(n):
        for j in range(n):
            ij = _hmul(i, j, q, add, mul)
            for k in range(n):
                if _hmul(ij, k, q, add, mul) != _hmul(i, _hmul(j, k, q, add, mul), q, add, mul):
                    return (i * n + j) * n + k
    return -1


def heis_hom_failure(const int[:] fmap, int qs, const int[:] add_s,
                     const int[:] mul_s, int qt, const int[:] add_t,
                     const int[:] mul_t):
    cdef long long i, j, ij, fi, n
    n = <long long> qs * qs * qs
    for i in range(n):
        fi = fmap[i]
        for j in range(n):
            ij = _hmul(i, j, qs, add_s, mul_s)
            if fmap[ij] != _hmul(fi, fmap[j], qt, add_t, mul_t):
                return i * n + j
    return -1


def ext_cocycle_failure(int na, int nb, const int[:] add_a, const int[:] add_b,
                        const int[:] coc):
    cdef long long a, a2, a3, s12, c12, row_a, row_a2, lhs, rhs
    for a in range(na):
        row_a = a * na
        for a2 in range(na):
            s12 = add_a[row_a + a2]
            c12 = coc[row_a + a2]
            row_a2 = a2 * na
            for a3 in range(na):
                lhs = add_b[c12 * nb + coc[s12 * na + a3]]
                rhs = add_b[coc[row_a2 + a3] * nb + coc[row_a + add_a[row_a2 + a3]]]
                if lhs != rhs:
                    return (row_a + a2) * na + a3
    return -1


cdef inline long long _emul(long long g, long long h, int na, int nb,
                            const int[:] add_a, const int[:] add_b,
                            const int[:] coc) nogil:
    cdef long long ga, gb, ha, hb, a, b
    ga = g // nb; gb = g % nb
    ha = h // nb; hb = h % nb
    a = add_a[ga * na + ha]
    b = add_b[add_b[gb * nb + hb] * nb + coc[ga * na + ha]]
    return a * nb + b


def ext_mul(long long g, long long h, int na, int nb, const int[:] add_a,
            const int[:] add_b, const int[:] coc):
    return _emul(g, h, na, nb, add_a, add_b, coc)


def ext_hom_failure(const int[:] psi, int na, int nb, const int[:] add_a,
                    const int[:] add_b, const int[:] coc):
    cdef long long g, h, gh, pg, n
    n = <long long> na * nb
    for g in range(n):
        pg = psi[g]
        for h in range(n):
            gh = _emul(g, h, na, nb, add_a, add_b, coc)
            if psi[gh] != _emul(pg, psi[h], na, nb, add_a, add_b, coc):
                return g * n + h
    return -1


def homcond_failure(int na, int nb, const int[:] add_a, const int[:] add_b,
                    const int[:] coc, const int[:] alpha, const int[:] beta,
                    const int[:] gamma):
    cdef long long a, a2, row, aa, ga, lhs, rhs
    for a in range(na):
        row = a * na
        aa = alpha[a]
        ga = gamma[a]
        for a2 in range(na):
            lhs = add_b[beta[coc[row + a2]] * nb + gamma[add_a[row + a2]]]
            rhs = add_b[add_b[ga * nb + gamma[a2]] * nb + coc[aa * na + alpha[a2]]]
            if lhs != rhs:
                return row + a2
    return -1


def otimes_witness(int q, const int[:] add, const int[:] mul, const int[:] neg,
                   long long u, long long v, int xc, int yc, int zc,
                   const int[:] xs, const int[:] ys):
    cdef long long pi, pj, x1, y1, nxs, nys
    nxs = xs.shape[0]
    nys = ys.shape[0]
    for pi in range(nxs):
        x1 = xs[pi]
        if _hcomm(x1, u, q, add, mul, neg) != 0:
            continue
        if _hcomm(x1, v, q, add, mul, neg) != xc:
            continue
        for pj in range(nys):
            y1 = ys[pj]
            if _hcomm(y1, v, q, add, mul, neg) != 0:
                continue
            if _hcomm(u, y1, q, add, mul, neg) != yc:
                continue
            if _hcomm(x1, y1, q, add, mul, neg) == zc:
                return pi * nys + pj
    return -1


def quad_identity_failure(const int[:] table, int e, int q, const int[:] add,
                          const int[:] mul):
    cdef long long x, y, row, tx, lhs, rhs
    for x in range(q):
        row = x * q
        tx = table[x]
        for y in range(q):
            lhs = table[add[row + y]]
            rhs = add[add[tx * q + table[y]] * q + mul[mul[row + y] * q + e]]
            if lhs != rhs:
                return row + y
    return -1
