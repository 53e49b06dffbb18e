"""Pure-Python scan kernels.

Reference implementations of the hot exhaustive loops.  The compiled
backend in _speedups.pyx mirrors these function for function; both
operate on flat integer tables and return -1 on success or a packed
index of the first counterexample.

Conventions:
  * field tables add/mul are flat q*q row-major, neg is length q;
  * a Heisenberg element (a, b, c) packs as (a*q + b)*q + c;
  * an extension element (ia, ib) packs as ia*nb + ib;
  * pair (i, j) packs as i*n + j, triple (i, j, k) as (i*n + j)*n + k.
"""


def assoc_failure(mul, n):
    """First (i,j,k) with (ij)k != i(jk) in a dense Cayley table, or -1."""
    for i in range(n):
        row_i = i * n
        for j in range(n):
            ij = mul[row_i + j]
            row_j = j * n
            for k in range(n):
                if mul[ij * n + k] != mul[row_i + mul[row_j + k]]:
                    return (i * n + j) * n + k
    return -1


def hom_failure(fmap, mul_s, n_s, mul_t, n_t):
    """First pair with f(gh) != f(g)f(h) over dense Cayley tables, or -1."""
    for i in range(n_s):
        fi_row = fmap[i] * n_t
        row = i * n_s
        for j in range(n_s):
            if fmap[mul_s[row + j]] != mul_t[fi_row + fmap[j]]:
                return row + j
    return -1


def heis_mul(g, h, q, add, mul):
    """Product of packed Heisenberg triples from field tables."""
    a, r = divmod(g, q * q)
    b, c = divmod(r, q)
    a2, r2 = divmod(h, q * q)
    b2, c2 = divmod(r2, q)
    ra = add[a * q + a2]
    rb = add[b * q + b2]
    rc = add[add[c * q + c2] * q + mul[a * q + b2]]
    return (ra * q + rb) * q + rc


def heis_inv(g, q, add, mul, neg):
    a, r = divmod(g, q * q)
    b, c = divmod(r, q)
    ra = neg[a]
    rb = neg[b]
    rc = add[neg[c] * q + mul[a * q + b]]
    return (ra * q + rb) * q + rc


def heis_comm(g, h, q, add, mul, neg):
    """Commutator of packed triples; equals the packed value (0, 0, ab'-ba')."""
    a, r = divmod(g, q * q)
    b = r // q
    a2, r2 = divmod(h, q * q)
    b2 = r2 // q
    return add[mul[a * q + b2] * q + neg[mul[b * q + a2]]]


def heis_assoc_failure(q, add, mul):
    """First failing triple of the coordinate group law, or -1."""
    n = q * q * q
    for i in range(n):
        for j in range(n):
            ij = heis_mul(i, j, q, add, mul)
            for k in range(n):
                if heis_mul(ij, k, q, add, mul) != heis_mul(
                    i, heis_mul(j, k, q, add, mul), q, add, mul
                ):
                    return (i * n + j) * n + k
    return -1


def heis_hom_failure(fmap, qs, add_s, mul_s, qt, add_t, mul_t):
    """First source pair with f(gh) != f(g)f(h), field-table driven, or -1."""
    n = qs * qs * qs
    for i in range(n):
        fi = fmap[i]
        for j in range(n):
            ij = heis_mul(i, j, qs, add_s, mul_s)
            if fmap[ij] != heis_mul(fi, fmap[j], qt, add_t, mul_t):
                return i * n + j
    return -1


def ext_cocycle_failure(na, nb, add_a, add_b, coc):
    """First triple violating the cocycle identity, or -1.

    Checks c(a,a') + c(a+a', a'') == c(a',a'') + c(a, a'+a'') over the
    codomain addition, which is exactly associativity of the extension.
    """
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


def ext_mul(g, h, na, nb, add_a, add_b, coc):
    ga, gb = divmod(g, nb)
    ha, hb = divmod(h, nb)
    a = add_a[ga * na + ha]
    b = add_b[add_b[gb * nb + hb] * nb + coc[ga * na + ha]]
    return a * nb + b


def ext_hom_failure(psi, na, nb, add_a, add_b, coc):
    """First pair with psi(gh) != psi(g)psi(h) in the extension, or -1."""
    n = na * nb
    for g in range(n):
        pg = psi[g]
        for h in range(n):
            gh = ext_mul(g, h, na, nb, add_a, add_b, coc)
            if psi[gh] != ext_mul(pg, psi[h], na, nb, add_a, add_b, coc):
                return g * n + h
    return -1


def homcond_failure(na, nb, add_a, add_b, coc, alpha, beta, gamma):
    """First pair violating the triangular-map compatibility identity, or -1.

    The identity is beta(c(a,a')) + gamma(a+a') == gamma(a) + gamma(a')
    + c(alpha(a), alpha(a')) for all a, a' in the base group.
    """
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


def otimes_witness(q, add, mul, neg, u, v, xc, yc, zc, xs, ys):
    """Search candidate pairs for the multiplication-graph witness.

    u and v are the packed designated generators (1,0,0) and (0,1,0).
    Returns the packed position pos_x * len(ys) + pos_y of the first pair
    (x', y') satisfying all five commutator equations, or -1.  xc, yc, zc
    are the field indices of the center coordinates of the fixed triple;
    a packed central element (0, 0, w) equals its field index w.
    """
    nys = len(ys)
    for pi, x1 in enumerate(xs):
        if heis_comm(x1, u, q, add, mul, neg) != 0:
            continue
        if heis_comm(x1, v, q, add, mul, neg) != xc:
            continue
        for pj, y1 in enumerate(ys):
            if heis_comm(y1, v, q, add, mul, neg) != 0:
                continue
            if heis_comm(u, y1, q, add, mul, neg) != yc:
                continue
            if heis_comm(x1, y1, q, add, mul, neg) == zc:
                return pi * nys + pj
    return -1


def quad_identity_failure(table, e, q, add, mul):
    """First pair with psi(x+y) != psi(x) + psi(y) + e*x*y, or -1."""
    for x in range(q):
        row = x * q
        tx = table[x]
        for y in range(q):
            lhs = table[add[row + y]]
            rhs = add[add[tx * q + table[y]] * q + mul[mul[row + y] * q + e]]
            if lhs != rhs:
                return row + y
    return -1
