"""Exact bases of cusp-form spaces on Gamma0(9) (and 3, 1) and the T_2 action.

Construction: on Gamma0(9) the weight-4 eta power eta(3z)^8 vanishes to order
exactly one at every cusp and is nonvanishing on the upper half plane, so
S_k(Gamma0(9)) = eta(3z)^8 * M_{k-4}(Gamma0(9)).  Iterating gives a ladder
basis  { f4^j * (Eisenstein basis of weight k-4j) }  whose expansions are
exact integer series.  Same idea at level 3 with eta(z)^6 eta(3z)^6 (weight 6)
and at level 1 with Delta.  Each basis is certified at runtime by checking
its rank against the dimension formula.
"""

from gmpy2 import mpq

from .seriesops import (
    eisenstein_scaled,
    eta_power_series,
    eta_product_series,
    int_series_mul,
    sigma_series,
    sigma_twisted_series,
    series_scale,
)

_RANK_PRIME = (1 << 61) - 1


def dim_cusp(level, k):
    """dim S_k(Gamma0(level)) for even k >= 4 and level in {1, 3, 9}."""
    if k < 4 or k % 2:
        raise ValueError("weight out of range")
    if level == 9:
        return k - 3
    if level == 3:
        return k // 3 - 1
    if level == 1:
        return k // 12 - 1 if k % 12 == 2 else k // 12
    raise ValueError("unsupported level")


def _eis_basis_9(w, prec):
    """Integer bases of the Eisenstein subspace of M_w(Gamma0(9)), rescaled."""
    if w == 0:
        return [[1] + [0] * prec]
    if w == 2:
        # (3 E2(3z) - E2(z))/2, (9 E2(9z) - E2(z))/8, and the (chi3, chi3) series
        s1 = sigma_series(1, prec)
        s3 = sigma_series(1, prec, scale=3)
        s9 = sigma_series(1, prec, scale=9)
        p3 = [a - 3 * b for a, b in zip(s1, s3)]
        p3 = series_scale(p3, 12)
        p3[0] += 1
        p9 = [a - 9 * b for a, b in zip(s1, s9)]
        p9 = series_scale(p9, 3)
        p9[0] += 1
        return [p3, p9, sigma_twisted_series(1, prec)]
    out = []
    for scale in (1, 3, 9):
        e, _den = eisenstein_scaled(w, prec, scale=scale)
        out.append(e)
    out.append(sigma_twisted_series(w - 1, prec))
    return out


def _eis_basis_3(w, prec):
    if w == 0:
        return [[1] + [0] * prec]
    if w == 2:
        s1 = sigma_series(1, prec)
        s3 = sigma_series(1, prec, scale=3)
        p3 = [a - 3 * b for a, b in zip(s1, s3)]
        p3 = series_scale(p3, 12)
        p3[0] += 1
        return [p3]
    out = []
    for scale in (1, 3):
        e, _den = eisenstein_scaled(w, prec, scale=scale)
        out.append(e)
    return out


def _eis_basis_1(w, prec):
    if w == 0:
        return [[1] + [0] * prec]
    if w == 2:
        return []
    e, _den = eisenstein_scaled(w, prec)
    return [e]


def cusp_basis(level, k, prec):
    """Integer-series basis of S_k(Gamma0(level)), rank-certified."""
    if level == 9:
        lad, step = eta_power_series(3, 8, prec), 4
        eis = _eis_basis_9
    elif level == 3:
        lad, step = eta_product_series([(1, 6), (3, 6)], prec), 6
        eis = _eis_basis_3
    elif level == 1:
        lad, step = eta_power_series(1, 24, prec), 12
        eis = _eis_basis_1
    else:
        raise ValueError("unsupported level")
    basis = []
    power = [1] + [0] * prec
    a = 0
    while True:
        a += 1
        w = k - step * a
        if w < 0:
            break
        power = int_series_mul(power, lad, prec)
        if w % 2:
            continue
        for e in eis(w, prec):
            basis.append(int_series_mul(power, e, prec))
    want = dim_cusp(level, k)
    if len(basis) != want:
        raise AssertionError(
            f"ladder produced {len(basis)} elements, dimension is {want}"
        )
    if _rank_mod_p(basis, min(prec, 3 * want + 10)) != want:
        raise AssertionError("ladder basis is not linearly independent")
    return basis


def _rank_mod_p(rows, ncols, p=_RANK_PRIME):
    mat = [[int(r[j]) % p for j in range(1, ncols + 1)] for r in rows]
    rank = 0
    col = 0
    nrows = len(mat)
    while rank < nrows and col < ncols:
        piv = None
        for i in range(rank, nrows):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], p - 2, p)
        row_r = mat[rank]
        for i in range(rank + 1, nrows):
            f = mat[i][col]
            if f:
                f = (f * inv) % p
                row_i = mat[i]
                for j in range(col, ncols):
                    row_i[j] = (row_i[j] - f * row_r[j]) % p
        rank += 1
        col += 1
    return rank


def hecke_series(series, ell, k, prec_out):
    """T_ell applied to an eigen-candidate series with trivial character at a
    level prime to ell: (T_ell g)_n = g_{ell n} + ell^(k-1) g_{n/ell}."""
    ek = ell ** (k - 1)
    out = [0] * (prec_out + 1)
    for n in range(prec_out + 1):
        c = series[ell * n]
        if n % ell == 0:
            c += ek * series[n // ell]
        out[n] = c
    return out


def hecke_matrix(basis, ell, k):
    """Exact matrix of T_ell on the span of `basis` (column j = image of
    basis[j] in basis coordinates).  Basis series must extend to ell*ncols."""
    dim = len(basis)
    ncols = 2 * dim + 8
    if len(basis[0]) <= ell * ncols:
        raise ValueError("basis precision too small for Hecke action")
    images = [hecke_series(b, ell, k, ncols) for b in basis]
    # Solve sum_j x_j basis[j][n] = image[i][n] for n = 1..ncols, all i at once.
    rows = []
    for n in range(1, ncols + 1):
        rows.append(
            [mpq(basis[j][n]) for j in range(dim)]
            + [mpq(images[i][n]) for i in range(dim)]
        )
    _eliminate(rows, dim)
    # Back-substitution happened inside _eliminate; read off solutions.
    sol = [[None] * dim for _ in range(dim)]
    for r in range(dim):
        for i in range(dim):
            sol[r][i] = rows[r][dim + i]
    # Verify residual rows vanish (consistency of the linear system).
    for n in range(dim, len(rows)):
        for i in range(dim):
            if rows[n][dim + i] != 0:
                raise AssertionError("Hecke image escaped the spanned space")
    # matrix[r][j]: coefficient of basis[r] in T_ell basis[j]
    return [[sol[r][j] for j in range(dim)] for r in range(dim)]


def _eliminate(rows, dim):
    """Reduced row echelon on the first `dim` columns of an augmented system."""
    nrows = len(rows)
    rank = 0
    for col in range(dim):
        piv = None
        for i in range(rank, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            raise AssertionError("basis columns are dependent")
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(nrows):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    if rank != dim:
        raise AssertionError("basis columns are dependent")


def charpoly(mat):
    """Characteristic polynomial (monic, ascending coefficients, exact)."""
    from sympy import Matrix, Rational

    dim = len(mat)
    m = Matrix(
        [[Rational(int(x.numerator), int(x.denominator)) for x in row] for row in mat]
    )
    poly = m.charpoly()
    coeffs = poly.all_coeffs()  # descending
    out = [mpq(int(c.p), int(c.q)) for c in reversed(coeffs)]
    return out
