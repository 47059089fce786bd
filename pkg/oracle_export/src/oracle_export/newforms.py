"""Newform Galois orbits on Gamma0(9) with exact eigenvalue coefficients.

The new subspace of S_k(Gamma0(9)) is isolated through the characteristic
polynomial of T_2: old orbits from level 1 enter three times and old orbits
from level 3 twice, so the new-part characteristic polynomial is the exact
quotient by those powers.  For a chosen irreducible factor g (one Galois
orbit), the orbit's rational subspace is ker g(T_2), on which T_2 acts with
minimal polynomial g; solving the eigenvalue problem over K = Q[x]/(g) and
normalizing a_1 = 1 yields the eigenform's coefficients as exact elements
of K in the power basis of a_2.

Every extracted eigenform is verified against the Hecke recursion
T_ell f = a_ell f coefficientwise for several primes before it is returned.
"""

from gmpy2 import mpq

from .fieldtools import PowerBasisField
from .spaces import charpoly, cusp_basis, dim_cusp, hecke_matrix

__all__ = ["newform_orbits", "Orbit", "eigen_coefficients"]


class Orbit:
    """One Galois orbit of newforms: min poly of a_2 and the data needed to
    produce coefficient expansions."""

    def __init__(self, k, minpoly_a2, basis, combo):
        self.k = k
        self.minpoly_a2 = minpoly_a2  # ascending int coefficients, monic
        self.dim = len(minpoly_a2) - 1
        self._basis = basis
        self._combo = combo  # coords over K (lists of mpq), one per basis elt
        self._cache = None

    def coefficients(self, prec):
        """Eigenform coefficients a_0..a_prec as vectors over the power basis
        of a_2 (lists of mpq of length self.dim)."""
        if self._cache is not None and len(self._cache) > prec:
            return self._cache[: prec + 1]
        if len(self._basis[0]) <= prec:
            raise ValueError("orbit basis precision too small")
        d = self.dim
        # clear denominators across the combination for integer inner loops
        den = 1
        for vec in self._combo:
            for v in vec:
                den = den * int(v.denominator) // _gcd(den, int(v.denominator))
        scaled = [[int(v * den) for v in vec] for vec in self._combo]
        out = []
        for n in range(prec + 1):
            acc = [0] * d
            for i, b in enumerate(self._basis):
                c = b[n]
                if c:
                    sv = scaled[i]
                    for j in range(d):
                        if sv[j]:
                            acc[j] += sv[j] * c
            out.append([mpq(v, den) for v in acc])
        self._cache = out
        return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _poly_from_mpq(coeffs):
    import sympy

    x = sympy.Symbol("x")
    return sympy.Poly(
        sum(
            sympy.Rational(int(c.numerator), int(c.denominator)) * x**i
            for i, c in enumerate(coeffs)
        ),
        x,
    )


def new_charpoly(k):
    """Characteristic polynomial of T_2 on the new subspace of S_k(Gamma0(9)),
    as a sympy Poly, computed by exact division of the level 9/3/1 charpolys."""
    import sympy

    x = sympy.Symbol("x")
    polys = {}
    for level in (9, 3, 1):
        dim = dim_cusp(level, k)
        if dim == 0:
            polys[level] = sympy.Poly(1, x)
            continue
        prec = 2 * (2 * dim + 8) + 2
        basis = cusp_basis(level, k, prec)
        polys[level] = _poly_from_mpq(charpoly(hecke_matrix(basis, 2, k)))
    if polys[1].degree() > 0:
        new3, rem = sympy.div(polys[3], polys[1] ** 2)
        if not sympy.Poly(rem, x).is_zero:
            raise AssertionError("level-1 old part does not divide level 3")
    else:
        new3 = polys[3]
    new3 = sympy.Poly(new3, x)
    denom = new3**2 * polys[1] ** 3
    q, rem = sympy.div(polys[9], denom)
    if not sympy.Poly(rem, x).is_zero:
        raise AssertionError("old part does not divide level-9 charpoly")
    return sympy.Poly(q, x)


def newform_orbits(k, prec, verify_primes=(2, 7, 13), verify_to=500):
    """All newform orbits on Gamma0(9) of weight k, coefficients to `prec`.

    Orbits are ordered deterministically by (dimension, minpoly coefficients).
    Each orbit is verified against the Hecke recursion up to min(prec,
    verify_to); callers exporting one orbit re-verify it at full precision.
    """
    import sympy

    x = sympy.Symbol("x")
    basis_prec = max(prec, 13 * max(2, dim_cusp(9, k)) // 2 + 40)
    basis = cusp_basis(9, k, basis_prec)
    t2 = hecke_matrix(basis, 2, k)
    newpoly = new_charpoly(k)
    factors = []
    for fac, mult in newpoly.factor_list()[1]:
        if mult != 1:
            raise AssertionError("repeated factor in new part")
        fp = sympy.Poly(fac, x)
        coeffs = [int(c) for c in reversed(fp.all_coeffs())]
        if coeffs[-1] != 1:
            raise AssertionError("non-monic new factor")
        factors.append(coeffs)
    factors.sort(key=lambda c: (len(c), c))
    orbits = []
    for coeffs in factors:
        combo = _orbit_combination(t2, coeffs, basis)
        orbit = Orbit(k, coeffs, basis, combo)
        _verify_orbit(orbit, min(basis_prec, verify_to), verify_primes)
        orbits.append(orbit)
    return orbits


def _mat_apply(mat, vec):
    n = len(mat)
    out = [mpq(0)] * n
    for i in range(n):
        row = mat[i]
        acc = mpq(0)
        for j in range(n):
            if vec[j]:
                acc += row[j] * vec[j]
        out[i] = acc
    return out


def _orbit_combination(t2, g_coeffs, basis):
    """Coordinates (over K = Q[x]/(g)) expressing the normalized eigenform in
    the given basis: solve on ker g(T_2)."""
    dim = len(t2)
    d = len(g_coeffs) - 1
    # evaluate g(T2) by Horner
    gmat = [[mpq(g_coeffs[-1] if i == j else 0) for j in range(dim)] for i in range(dim)]
    for c in reversed(g_coeffs[:-1]):
        nxt = [[mpq(0)] * dim for _ in range(dim)]
        for i in range(dim):
            for t in range(dim):
                f = gmat[i][t]
                if f:
                    row = t2[t]
                    out_row = nxt[i]
                    for j in range(dim):
                        out_row[j] += f * row[j]
        for i in range(dim):
            nxt[i][i] += c
        gmat = nxt
    kernel = _rational_kernel(gmat)
    if len(kernel) != d:
        raise AssertionError("orbit kernel has wrong dimension")
    # restrict T2 to the kernel: T2 * v_j = sum A[i][j] v_i
    # build in terms of kernel coordinates by solving small systems
    A = _restriction_matrix(t2, kernel)
    K = PowerBasisField(g_coeffs)
    w = _eigenvector_over_K(A, K)
    # combination in the big basis: c_i = sum_j w_j * kernel[j][i]
    combo = []
    for i in range(dim):
        acc = [mpq(0)] * K.n
        for j, wj in enumerate(w):
            f = kernel[j][i]
            if f:
                for tdeg in range(K.n):
                    acc[tdeg] += wj[tdeg] * f
        combo.append(acc)
    # normalize a_1 = 1: a_1 = sum_i c_i * basis_i[1]
    a1 = [mpq(0)] * K.n
    for i, b in enumerate(basis):
        if b[1]:
            for tdeg in range(K.n):
                a1[tdeg] += combo[i][tdeg] * b[1]
    inv_a1 = _k_inverse(a1, K)
    return [K.mul(c, inv_a1) for c in combo]


def _rational_kernel(mat):
    """Basis of the right kernel of a square rational matrix."""
    n = len(mat)
    m = [list(map(mpq, row)) for row in mat]
    piv_of_col = {}
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, n) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for i in range(n):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        piv_of_col[col] = rank
        rank += 1
    free_cols = [c for c in range(n) if c not in piv_of_col]
    kernel = []
    for fc in free_cols:
        vec = [mpq(0)] * n
        vec[fc] = mpq(1)
        for col, r in piv_of_col.items():
            vec[col] = -m[r][fc]
        kernel.append(vec)
    return kernel


def _restriction_matrix(t2, kernel):
    """Matrix of T2 on span(kernel) in kernel coordinates."""
    d = len(kernel)
    n = len(t2)
    images = [_mat_apply(t2, v) for v in kernel]
    # solve sum_j A[j][i] kernel[j] = images[i]
    # build matrix with kernel vectors as columns
    rows = []
    for r in range(n):
        rows.append([kernel[j][r] for j in range(d)])
    A = [[mpq(0)] * d for _ in range(d)]
    for i in range(d):
        sol = _solve_overdetermined(rows, [images[i][r] for r in range(n)])
        for j in range(d):
            A[j][i] = sol[j]
    return A


def _solve_overdetermined(rows, rhs):
    """Solve rows * x = rhs exactly; rows has full column rank."""
    m = len(rows)
    d = len(rows[0])
    aug = [list(map(mpq, rows[i])) + [mpq(rhs[i])] for i in range(m)]
    rank = 0
    piv_cols = []
    for col in range(d):
        piv = next((i for i in range(rank, m) if aug[i][col] != 0), None)
        if piv is None:
            raise AssertionError("dependent columns in solve")
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = 1 / aug[rank][col]
        aug[rank] = [v * inv for v in aug[rank]]
        for i in range(m):
            if i != rank and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[rank])]
        rank += 1
        piv_cols.append(col)
    x = [mpq(0)] * d
    for r, col in enumerate(piv_cols):
        x[col] = aug[r][d]
    # consistency
    for i in range(m):
        if all(aug[i][j] == 0 for j in range(d)) and aug[i][d] != 0:
            raise AssertionError("inconsistent overdetermined system")
    return x


def _k_inverse(a, K):
    """Inverse in K = Q[x]/(g) by the extended Euclidean algorithm."""
    g = list(K.f)
    r0 = [mpq(c) for c in g]
    r1 = list(a) + [mpq(0)]
    s0 = [mpq(0)]
    s1 = [mpq(1)]

    def deg(p):
        dd = len(p) - 1
        while dd >= 0 and p[dd] == 0:
            dd -= 1
        return dd

    def sub_scaled(p, q, c, shift):
        out = list(p)
        while len(out) < len(q) + shift:
            out.append(mpq(0))
        for i, v in enumerate(q):
            if v:
                out[i + shift] -= c * v
        return out

    while True:
        d1 = deg(r1)
        if d1 < 0:
            raise ZeroDivisionError("not invertible")
        if d1 == 0:
            inv = 1 / r1[0]
            res = [v * inv for v in s1]
            res = (res + [mpq(0)] * K.n)[: K.n]
            return res
        d0 = deg(r0)
        if d0 < d1:
            r0, r1, s0, s1 = r1, r0, s1, s0
            continue
        c = r0[d0] / r1[d1]
        r0 = sub_scaled(r0, r1, c, d0 - d1)
        s0 = sub_scaled(s0, s1, c, d0 - d1)
        if deg(r0) < deg(r1):
            r0, r1, s0, s1 = r1, r0, s1, s0


def _eigenvector_over_K(A, K):
    """Nonzero kernel vector of (A - x * I) over K = Q[x]/(g)."""
    d = len(A)
    x_elt = [mpq(0)] * K.n
    if K.n > 1:
        x_elt[1] = mpq(1)
    else:
        # rational orbit: x is the single root of the linear minpoly
        x_elt[0] = -mpq(K.f[0])
    m = [[_k_embed(A[i][j], K) for j in range(d)] for i in range(d)]
    for i in range(d):
        m[i][i] = [a - b for a, b in zip(m[i][i], x_elt)]
    # Gaussian elimination over K
    piv_of_col = {}
    rank = 0
    for col in range(d):
        piv = None
        for i in range(rank, d):
            if any(v != 0 for v in m[i][col]):
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = _k_inverse(m[rank][col], K)
        m[rank] = [K.mul(v, inv) for v in m[rank]]
        for i in range(d):
            if i != rank and any(v != 0 for v in m[i][col]):
                f = m[i][col]
                m[i] = [
                    [a - b for a, b in zip(v, K.mul(f, w))]
                    for v, w in zip(m[i], m[rank])
                ]
        piv_of_col[col] = rank
        rank += 1
    free = [c for c in range(d) if c not in piv_of_col]
    if not free:
        raise AssertionError("eigenvalue is not an eigenvalue (empty kernel)")
    fc = free[0]
    vec = [[mpq(0)] * K.n for _ in range(d)]
    vec[fc][0] = mpq(1)
    for col, r in piv_of_col.items():
        vec[col] = [-v for v in m[r][fc]]
    return vec


def _k_embed(q, K):
    out = [mpq(0)] * K.n
    out[0] = mpq(q)
    return out


def _verify_orbit(orbit, prec, primes):
    """Check the Hecke recursion a_{ln} + l^(k-1) a_{n/l} = a_l a_n on the
    computed expansion, plus normalization and the level condition a_3 = 0."""
    coeffs = orbit.coefficients(prec)
    K = PowerBasisField(orbit.minpoly_a2)
    one = [mpq(1)] + [mpq(0)] * (K.n - 1)
    if coeffs[1] != one:
        raise AssertionError("eigenform not normalized")
    if any(v != 0 for v in coeffs[0]):
        raise AssertionError("nonzero constant term")
    if any(v != 0 for v in coeffs[3]):
        raise AssertionError("a_3 must vanish at level 9")
    for ell in primes:
        if 9 % ell == 0:
            continue
        a_ell = coeffs[ell]
        ek = ell ** (orbit.k - 1)
        top = prec // ell
        for n in range(1, top + 1):
            lhs = list(coeffs[ell * n])
            if n % ell == 0:
                prev = coeffs[n // ell]
                lhs = [a + ek * b for a, b in zip(lhs, prev)]
            rhs = K.mul(a_ell, coeffs[n])
            if lhs != rhs:
                raise AssertionError(
                    f"Hecke recursion fails at ell={ell}, n={n}"
                )
