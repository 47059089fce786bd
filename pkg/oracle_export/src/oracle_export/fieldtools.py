"""Exact maximal-order and prime-splitting machinery for the export backend.

Everything here works with explicit Z-lattices in a number field
K = Q[x]/(f): an order is a full-rank lattice closed under multiplication,
stored as a basis matrix over the power basis of the defining root.  The
p-maximal order is computed by the standard radical/multiplier-ring
iteration (Pohst-Zassenhaus round two at a single prime), primes over p are
split off via idempotents of the F_p-algebra O/pO, and valuations are
checked independently through Hermite-normal-form membership in ideal-power
lattices.  This file deliberately shares no code with the main package: it
is the independent oracle the main package's fixtures are checked against.
"""

from gmpy2 import mpq

# ---------------------------------------------------------------------------
# small exact linear algebra helpers


def hnf_rows(rows):
    """Hermite normal form (row lattice basis) of an integer matrix.

    Returns a list of rows forming an upper-triangular-ish canonical basis of
    the lattice generated by the input rows (zero rows dropped).
    """
    mat = [list(map(int, r)) for r in rows]
    if not mat:
        return []
    ncols = len(mat[0])
    basis = []
    for col in range(ncols):
        active = [r for r in mat if r[col] != 0]
        if not active:
            continue
        # Euclidean reduction: combine rows until one nonzero entry remains
        while True:
            active = [r for r in mat if r[col] != 0]
            if len(active) <= 1:
                break
            active.sort(key=lambda r: abs(r[col]))
            a = active[0]
            for r in active[1:]:
                q = r[col] // a[col]
                if q:
                    for j in range(ncols):
                        r[j] -= q * a[j]
        active = [r for r in mat if r[col] != 0]
        if not active:
            continue
        piv = active[0]
        if piv[col] < 0:
            for j in range(ncols):
                piv[j] = -piv[j]
        basis.append(piv)
        mat = [r for r in mat if r is not piv]
    # reduce entries above pivots
    basis.sort(key=lambda r: next(j for j in range(ncols) if r[j] != 0))
    for i in range(len(basis)):
        pcol = next(j for j in range(ncols) if basis[i][j] != 0)
        for k in range(i):
            q = basis[k][pcol] // basis[i][pcol]
            if q:
                for j in range(ncols):
                    basis[k][j] -= q * basis[i][j]
    return basis


def kernel_int(rows):
    """Basis of the integer (left-)kernel lattice {c : c * rows = 0}."""
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    # augment with identity, run HNF-style elimination on the A-part
    aug = [list(map(int, rows[i])) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    for col in range(ncols):
        while True:
            active = [r for r in aug if r[col] != 0 and not any(r[:col])]
            if len(active) <= 1:
                break
            active.sort(key=lambda r: abs(r[col]))
            a = active[0]
            for r in active[1:]:
                q = r[col] // a[col]
                for j in range(ncols + m):
                    r[j] -= q * a[j]
    kernel = [r[ncols:] for r in aug if not any(r[:ncols])]
    return hnf_rows(kernel) if kernel else []


def solve_upper(hnf_basis, target):
    """Solve x * hnf_basis = target over Q for a full-rank square HNF basis.

    Returns the rational coordinate vector, or None if the basis is not
    square/full rank."""
    n = len(hnf_basis)
    piv_cols = []
    for r in hnf_basis:
        piv_cols.append(next(j for j in range(len(r)) if r[j] != 0))
    x = [mpq(0)] * n
    t = [mpq(v) for v in target]
    # rows are in echelon order (pivot columns increasing, zeros below each
    # pivot), so forward substitution determines the coordinates
    for i in range(n):
        c = piv_cols[i]
        x[i] = t[c] / hnf_basis[i][c]
        if x[i]:
            for j in range(len(t)):
                t[j] -= x[i] * hnf_basis[i][j]
    if any(v != 0 for v in t):
        raise ValueError("target outside the row space")
    return x


def lattice_contains(hnf_basis, vec):
    """Membership of an integer/rational vector in the lattice spanned by a
    full-rank HNF basis."""
    try:
        x = solve_upper(hnf_basis, vec)
    except ValueError:
        return False
    return all(v.denominator == 1 for v in x)


def mat_inverse(rows):
    """Exact inverse of a square rational matrix (list of mpq lists)."""
    n = len(rows)
    aug = [[mpq(v) for v in rows[i]] + [mpq(1 if j == i else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [r[n:] for r in aug]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[mpq(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                row = out[i]
                for j in range(m):
                    row[j] += c * bt[j]
    return out


# ---------------------------------------------------------------------------
# polynomial arithmetic modulo the defining polynomial


class PowerBasisField:
    """Q[x]/(f) with f monic integral, elements as mpq coordinate tuples."""

    def __init__(self, min_poly):
        self.f = [mpq(c) for c in min_poly]
        if self.f[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.n = len(min_poly) - 1
        # x^k mod f for k = n .. 2n-2
        reductions = []
        cur = [-c for c in self.f[:-1]]  # x^n
        reductions.append(list(cur))
        for _ in range(self.n - 2):
            cur = [mpq(0)] + cur
            top = cur.pop()
            if top:
                for i in range(self.n):
                    cur[i] -= top * self.f[i]
            reductions.append(list(cur))
        self.reductions = reductions

    def mul(self, a, b):
        n = self.n
        prod = [mpq(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:n]
        for k in range(n, 2 * n - 1):
            c = prod[k]
            if c:
                red = self.reductions[k - n]
                for i in range(n):
                    out[i] += c * red[i]
        return out

    def mul_int(self, a, c):
        return [x * c for x in a]

    def power(self, a, e):
        out = [mpq(0)] * self.n
        out[0] = mpq(1)
        base = list(a)
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    def norm(self, a):
        """Field norm via the determinant of the multiplication matrix."""
        rows = []
        cur = [mpq(1)] + [mpq(0)] * (self.n - 1)
        for i in range(self.n):
            basis_vec = [mpq(0)] * self.n
            basis_vec[i] = mpq(1)
            rows.append(self.mul(basis_vec, a))
        return _det(rows)


def _det(rows):
    n = len(rows)
    m = [list(r) for r in rows]
    det = mpq(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return mpq(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] * inv
                for j in range(col, n):
                    m[i][j] -= f * m[col][j]
    return det


# ---------------------------------------------------------------------------
# orders


class Order:
    """An order in K given by a basis matrix over the power basis."""

    def __init__(self, field, basis_matrix):
        self.K = field
        self.basis = [[mpq(v) for v in row] for row in basis_matrix]
        self.inv = mat_inverse(self.basis)
        n = field.n
        # structure constants: basis_i * basis_j in order coordinates
        self.table = []
        for i in range(n):
            row_i = []
            for j in range(n):
                prod = field.mul(self.basis[i], self.basis[j])
                coords = self._to_order(prod)
                row_i.append(coords)
            self.table.append(row_i)

    def _to_order(self, power_coords):
        return [
            sum(power_coords[k] * self.inv[k][j] for k in range(self.K.n))
            for j in range(self.K.n)
        ]

    def to_power(self, order_coords):
        return [
            sum(order_coords[k] * self.basis[k][j] for k in range(self.K.n))
            for j in range(self.K.n)
        ]

    def is_genuine(self):
        """Structure constants integral and 1 in the lattice."""
        for row in self.table:
            for coords in row:
                if any(c.denominator != 1 for c in coords):
                    return False
        one = [mpq(1)] + [mpq(0)] * (self.K.n - 1)
        try:
            c = self._to_order(one)
        except ValueError:
            return False
        return all(v.denominator == 1 for v in c)

    def mul_coords(self, u, v):
        """Product of two elements given in order coordinates."""
        n = self.K.n
        out = [mpq(0)] * n
        for i in range(n):
            if u[i]:
                for j in range(n):
                    if v[j]:
                        t = self.table[i][j]
                        c = u[i] * v[j]
                        for k in range(n):
                            out[k] += c * t[k]
        return out

    def index_in(self, other):
        """[other : self] as a rational (ratio of lattice covolumes)."""
        m = mat_mul(self.basis, mat_inverse(other.basis))
        return abs(1 / _det(m))


def p_radical(order, p):
    """HNF basis (order coords) of the p-radical lattice rad(pO) inside O."""
    n = order.K.n
    t = 1
    q = p
    while q < n:
        q *= p
        t += 1
    # Frobenius: e_i -> e_i^(p^t) mod p, as an F_p matrix
    frob = []
    for i in range(n):
        e = [mpq(1 if j == i else 0) for j in range(n)]
        # power in the order, reducing mod p as we go to keep entries small
        acc = e
        for _ in range(t):
            acc = _order_pow_mod_p(order, acc, p)
        frob.append([int(c) % p for c in acc])
    ker = _kernel_mod_p(frob, p)
    rows = [[int(v) for v in k] for k in ker]
    rows += [[p if j == i else 0 for j in range(n)] for i in range(n)]
    return hnf_rows(rows)


def _order_pow_mod_p(order, coords, p):
    e = p
    out = None
    base = [mpq(int(c) % p) for c in coords]
    while e:
        if e & 1:
            out = base if out is None else [
                mpq(int(v) % p) for v in order.mul_coords(out, base)
            ]
        e >>= 1
        if e:
            base = [mpq(int(v) % p) for v in order.mul_coords(base, base)]
    return out


def _kernel_mod_p(mat, p):
    """Left kernel basis of an integer matrix over F_p."""
    n = len(mat)
    ncols = len(mat[0])
    aug = [[mat[i][j] % p for j in range(ncols)] + [1 if k == i else 0 for k in range(n)] for i in range(n)]
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, n) if aug[i][col] % p), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = pow(aug[rank][col], p - 2, p)
        aug[rank] = [(v * inv) % p for v in aug[rank]]
        for i in range(n):
            if i != rank and aug[i][col] % p:
                f = aug[i][col]
                aug[i] = [(a - f * b) % p for a, b in zip(aug[i], aug[rank])]
        rank += 1
    return [r[ncols:] for r in aug[rank:]]


def multiplier_order(order, p, radical_hnf):
    """The ring of multipliers O' = {x in K : x * rad <= rad}, as an Order."""
    n = order.K.n
    rad = radical_hnf
    # y in O with y * r_k in p * rad for all k; then O' = (1/p) * {such y} + O
    p_rad = [[p * v for v in row] for row in rad]
    blocks = []
    for r in rad:
        # T_k: row i = coords of e_i * r
        t_rows = []
        for i in range(n):
            e = [mpq(1 if j == i else 0) for j in range(n)]
            t_rows.append(order.mul_coords(e, [mpq(v) for v in r]))
        blocks.append(t_rows)
    # condition: c * T_k = z_k * pR  -> integer kernel of [T | -pR-blocks]
    ncols_total = n * len(blocks)
    big = []
    for i in range(n):
        row = []
        for T in blocks:
            row.extend(int(v) for v in T[i])
        big.append(row)
    for bi, _ in enumerate(blocks):
        for rrow in range(n):
            row = [0] * ncols_total
            for j in range(n):
                row[bi * n + j] = -int(p_rad[rrow][j])
            big.append(row)
    ker = kernel_int(big)
    ys = [k[:n] for k in ker]
    rows = [[mpq(v, p) for v in y] for y in ys if any(y)]
    rows += [[mpq(1 if j == i else 0) for j in range(n)] for i in range(n)]
    # HNF over Q with denominator p: scale by p, HNF, scale back
    scaled = hnf_rows([[int(v * p) for v in r] for r in rows])
    new_basis_order_coords = [[mpq(v, p) for v in r] for r in scaled]
    power_rows = [order.to_power(r) for r in new_basis_order_coords]
    return Order(order.K, power_rows)


def p_maximal_order(field, p):
    """Round-two iteration at p starting from the equation order Z[theta]."""
    n = field.n
    order = Order(field, [[mpq(1 if j == i else 0) for j in range(n)] for i in range(n)])
    while True:
        rad = p_radical(order, p)
        bigger = multiplier_order(order, p, rad)
        growth = order.index_in(bigger)
        if growth == 1:
            if not order.is_genuine():
                raise AssertionError("round-two produced a non-order")
            return order
        order = bigger


# ---------------------------------------------------------------------------
# splitting primes in a p-maximal order


class PrimeData:
    """One prime over p: ramification e, residue degree f, a generator g with
    (p, g) = P, a uniformizer pi (v_P(pi) = 1, zero valuation at the other
    primes over p), and the anti-uniformizer tau = y/p with v_P(tau) = -1.
    All elements are stored in power-basis coordinates."""

    def __init__(self, p, e, f, generator, uniformizer, tau):
        self.p = p
        self.e = e
        self.f = f
        self.generator = generator
        self.uniformizer = uniformizer
        self.tau = tau


def _alg_mul_mod_p(order, a, b, p):
    return [int(v) % p for v in order.mul_coords([mpq(x) for x in a], [mpq(y) for y in b])]


def _min_poly_mod_p(order, elt, p, subspace=None):
    """Minimal polynomial of elt acting in O/pO (or a subalgebra), over F_p."""
    n = order.K.n
    powers = [[1 if i == 0 else 0 for i in range(n)]]
    cur = [1 if i == 0 else 0 for i in range(n)]
    for _ in range(n):
        cur = _alg_mul_mod_p(order, cur, elt, p)
        powers.append(cur)
    # find first linear dependency
    rows = []
    for k, vec in enumerate(powers):
        rows.append(list(vec))
        dep = _dependency_mod_p(rows, p)
        if dep is not None:
            # dep: coefficients c_0..c_k with sum c_i powers[i] = 0, c_k = 1
            return dep
    raise AssertionError("no minimal polynomial found")


def _dependency_mod_p(rows, p):
    """If the last row depends on the previous ones mod p, return monic
    dependency coefficients; else None."""
    m = len(rows)
    n = len(rows[0])
    mat = [[rows[i][j] % p for j in range(n)] for i in range(m - 1)]
    target = [rows[-1][j] % p for j in range(n)]
    # solve x * mat = target mod p
    aug = [row + [1 if k == i else 0 for k in range(m - 1)] for i, row in enumerate(mat)]
    rank = 0
    piv_cols = []
    for col in range(n):
        piv = next((i for i in range(rank, m - 1) if aug[i][col] % p), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = pow(aug[rank][col], p - 2, p)
        aug[rank] = [(v * inv) % p for v in aug[rank]]
        for i in range(m - 1):
            if i != rank and aug[i][col] % p:
                f = aug[i][col]
                aug[i] = [(a - f * b) % p for a, b in zip(aug[i], aug[rank])]
        rank += 1
        piv_cols.append(col)
    x = [0] * (m - 1)
    t = list(target)
    for r, col in enumerate(piv_cols):
        c = t[col] % p
        if c:
            x_row = aug[r]
            for j in range(n):
                t[j] = (t[j] - c * x_row[j]) % p
            # accumulate transformation part
            for k in range(m - 1):
                x[k] = (x[k] + c * x_row[n + k]) % p
    if any(v % p for v in t):
        return None
    coeffs = [(-v) % p for v in x] + [1]
    return coeffs


def split_prime(field, p, order=None):
    """All primes over p in the maximal order, with verified uniformizer and
    anti-uniformizer data.  Returns (order, [PrimeData...])."""
    if order is None:
        order = p_maximal_order(field, p)
    n = field.n
    # decompose 1 into primitive idempotents of A = O/pO
    comps = _split_algebra(order, p, [[1 if i == 0 else 0 for i in range(n)]])
    out = []
    for idem in comps:
        out.append(_prime_from_idempotent(field, order, p, idem, comps))
    out.sort(key=lambda pd: (pd.e, pd.f, tuple(pd.generator)))
    total = sum(pd.e * pd.f for pd in out)
    if total != n:
        raise AssertionError("sum e_i f_i != degree")
    return order, out


def _component_data(order, p, e):
    """Basis of the component e*A, its nilradical, and the Berlekamp kernel
    {x in comp : x^p = x mod nil} as coefficient-free row spaces."""
    n = order.K.n
    rows = []
    for i in range(n):
        basis_vec = [1 if j == i else 0 for j in range(n)]
        rows.append(_alg_mul_mod_p(order, e, basis_vec, p))
    comp = _row_space_mod_p(rows, p)
    t = 1
    q = p
    while q < n:
        q *= p
        t += 1
    frob_rows = []
    for vec in comp:
        fv = vec
        for _ in range(t):
            fv = _alg_pow_mod_p(order, fv, p, p)
        frob_rows.append(fv)
    nil_coeffs = _kernel_of_map_mod_p(comp, frob_rows, p)
    nil = []
    for cvec in nil_coeffs:
        v = [0] * n
        for c, b in zip(cvec, comp):
            if c:
                v = [(x + c * y) % p for x, y in zip(v, b)]
        nil.append(v)
    nil = _row_space_mod_p(nil, p) if nil else []
    # Berlekamp kernel: x in comp with x^p - x in nil
    targets = []
    for vec in comp:
        fv = _alg_pow_mod_p(order, vec, p, p)
        diff = [(a - b) % p for a, b in zip(fv, vec)]
        targets.append(diff)
    berl_coeffs = _kernel_of_affine_mod_p(comp, targets, nil, p)
    berl = []
    for cvec in berl_coeffs:
        v = [0] * n
        for c, b in zip(cvec, comp):
            if c:
                v = [(x + c * y) % p for x, y in zip(v, b)]
        berl.append(v)
    return comp, nil, _row_space_mod_p(berl, p) if berl else []


def _kernel_of_affine_mod_p(domain_basis, images, modspace, p):
    """Coefficient vectors c with sum c_i images[i] inside span(modspace)."""
    m = len(domain_basis)
    if m == 0:
        return []
    ncols = len(images[0])
    k = len(modspace)
    # solve c * images = d * modspace  ->  kernel of [images | .] with modspace
    rows = []
    for i in range(m):
        rows.append(list(images[i]))
    for s in modspace:
        rows.append([(-v) % p for v in s])
    big_kernel = _kernel_mod_p_rows(rows, p)
    return [kv[:m] for kv in big_kernel]


def _kernel_mod_p_rows(rows, p):
    """Left kernel of a stacked row matrix over F_p."""
    m = len(rows)
    ncols = len(rows[0])
    aug = [[rows[i][j] % p for j in range(ncols)] + [1 if kk == i else 0 for kk in range(m)] for i in range(m)]
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, m) if aug[i][col] % p), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = pow(aug[rank][col], p - 2, p)
        aug[rank] = [(v * inv) % p for v in aug[rank]]
        for i in range(m):
            if i != rank and aug[i][col] % p:
                f = aug[i][col]
                aug[i] = [(a - f * b) % p for a, b in zip(aug[i], aug[rank])]
        rank += 1
    return [r[ncols:] for r in aug[rank:]]


def _split_algebra(order, p, idems):
    """Refine orthogonal idempotents of O/pO to primitive ones, using the
    Berlekamp kernel of each component to certify locality (dim 1) or to
    produce a guaranteed split."""
    final = []
    work = list(idems)
    n = order.K.n
    while work:
        e = work.pop()
        comp, nil, berl = _component_data(order, p, e)
        # berl contains the nilradical and F_p*e; the number of residue fields
        # in this component is dim(berl) - dim(nil).
        n_fields = len(berl) - len(nil)
        if n_fields <= 1:
            final.append(e)
            continue
        # An element of berl outside span(nil, e) has >= 2 distinct residue
        # eigenvalues in F_p, so its minimal polynomial splits the component.
        trivial = _row_space_mod_p(nil + [e], p)
        theta = None
        for cand in berl:
            if not _in_row_space_mod_p(cand, trivial, p):
                theta = cand
                break
        if theta is None:
            raise AssertionError("Berlekamp kernel degenerate")
        pieces = _split_by_element(order, p, e, theta)
        if len(pieces) < 2:
            raise AssertionError("certified split failed to materialize")
        work.extend(pieces)
    return final


def _split_by_element(order, p, e, theta):
    """Split component unity e along the distinct F_p-eigenvalues of theta."""
    import sympy

    x = sympy.Symbol("x")
    n = order.K.n
    mp_coeffs = _min_poly_mod_p(order, theta, p)  # ascending
    poly = sympy.Poly(list(reversed([c % p for c in mp_coeffs])), x, modulus=p)
    parts = poly.factor_list()[1]
    pieces = []
    for fac, mult in parts:
        block = fac**mult
        rest, rem = sympy.div(poly, block, x)
        rest = sympy.Poly(rest, x, modulus=p)
        inv = sympy.invert(rest, block)
        h = (rest * inv) % poly
        coeffs_desc = [int(c) % p for c in sympy.Poly(h, x, modulus=p).all_coeffs()]
        cand = _eval_poly_in_algebra(order, theta, coeffs_desc, p)
        cand = _alg_mul_mod_p(order, cand, e, p)
        if not any(cand):
            continue
        cand = _idempotent_lift(order, cand, p)
        if any(cand):
            pieces.append(cand)
    # sanity: pieces are orthogonal and sum to e
    total = [0] * n
    for c in pieces:
        total = [(a + b) % p for a, b in zip(total, c)]
    if total != [v % p for v in e]:
        raise AssertionError("idempotent pieces do not sum to the unity")
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            prod = _alg_mul_mod_p(order, pieces[i], pieces[j], p)
            if any(prod):
                raise AssertionError("idempotent pieces not orthogonal")
    return pieces


def _row_space_mod_p(rows, p):
    m = [[v % p for v in r] for r in rows]
    basis = []
    piv_cols = {}
    for r in m:
        r = list(r)
        for col, br in piv_cols.items():
            c = r[col]
            if c:
                r = [(a - c * b) % p for a, b in zip(r, br)]
        nz = next((j for j, v in enumerate(r) if v % p), None)
        if nz is None:
            continue
        inv = pow(r[nz], p - 2, p)
        r = [(v * inv) % p for v in r]
        piv_cols[nz] = r
        basis.append(r)
    return basis


def _eval_poly_in_algebra(order, theta, coeffs_desc, p):
    n = order.K.n
    acc = [0] * n
    for c in coeffs_desc:
        acc = _alg_mul_mod_p(order, acc, theta, p)
        acc[0] = (acc[0] + c) % p
    return acc


def _idempotent_lift(order, cand, p):
    n = order.K.n
    q = p
    while q < n:
        q *= p
    for _ in range(4):
        new = _alg_pow_mod_p(order, cand, q, p)
        if new == cand:
            break
        cand = new
    check = _alg_mul_mod_p(order, cand, cand, p)
    if check != cand:
        raise AssertionError("idempotent lift failed")
    return cand


def _alg_pow_mod_p(order, a, e, p):
    out = [1] + [0] * (order.K.n - 1)
    base = list(a)
    while e:
        if e & 1:
            out = _alg_mul_mod_p(order, out, base, p)
        e >>= 1
        if e:
            base = _alg_mul_mod_p(order, base, base, p)
    return out


def _prime_from_idempotent(field, order, p, idem, all_idems):
    """Build verified PrimeData for the prime attached to one primitive
    idempotent of O/pO."""
    n = field.n
    comp_basis, nil_space, berl = _component_data(order, p, idem)
    if len(berl) - len(nil_space) != 1:
        raise AssertionError("component is not local")
    dim = len(comp_basis)
    f = dim - len(nil_space)
    if dim % f:
        raise AssertionError("component dimension not divisible by residue degree")
    e = dim // f
    # N^2 within the component
    nil2 = []
    for a in nil_space:
        for b in nil_space:
            nil2.append(_alg_mul_mod_p(order, a, b, p))
    nil2_space = _row_space_mod_p(nil2, p) if nil2 else []

    other = [0] * n
    for other_idem in all_idems:
        if other_idem != idem:
            other = [(x + y) % p for x, y in zip(other, other_idem)]

    # Uniformizer candidates: for e >= 2 take nv + other with nv in N \ N^2
    # (exact valuation 1 at P, unit at the other primes); for e = 1 take the
    # lift vanishing on this component plus small multiples of p.  Each
    # candidate is verified through the norm: since it is a unit at every
    # other prime over p, v_p(Norm) = f * v_P(candidate).
    if e >= 2:
        nv = next(
            (v for v in nil_space if not _in_row_space_mod_p(v, nil2_space, p)),
            None,
        )
        if nv is None:
            raise AssertionError("no element of N minus N^2")
        base = [(a + b) % p for a, b in zip(nv, other)]
    else:
        base = list(other)
    pi = None
    for k in (0, 1, 2):
        cand_power = order.to_power([mpq(v) for v in base])
        cand_power[0] += k * p
        nrm = field.norm(cand_power)
        if nrm != 0 and _vp_rational(nrm, p) == f:
            pi = cand_power
            break
    if pi is None:
        raise AssertionError("no uniformizer candidate verified")

    # generator g with (p, g) = P: pi itself has that property
    gen_power = pi

    # tau = y / p with y = pi^(e-1) * unit on this component, 0 on the others;
    # compute y = pi^(e-1) * idem inside O/pO, then lift.  v_P(y) = e - 1 and
    # v_Q(y) >= e_Q for Q != P since y vanishes on those components.
    if e > 1:
        pi_coords = order._to_order(pi)
        y = [int(v) % p for v in pi_coords]
        y = _alg_pow_mod_p(order, y, e - 1, p)
        y = _alg_mul_mod_p(order, y, idem, p)
    else:
        y = list(idem)
    y_power = order.to_power([mpq(v) for v in y])
    tau_power = [v / p for v in y_power]
    return PrimeData(p, e, f, gen_power, pi, tau_power)


def _kernel_of_map_mod_p(domain_basis, image_rows, p):
    """Kernel (coefficient vectors) of the linear map sending domain_basis[i]
    to image_rows[i], all mod p."""
    m = len(domain_basis)
    if m == 0:
        return []
    ncols = len(image_rows[0])
    aug = [[image_rows[i][j] % p for j in range(ncols)] + [1 if k == i else 0 for k in range(m)] for i in range(m)]
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, m) if aug[i][col] % p), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = pow(aug[rank][col], p - 2, p)
        aug[rank] = [(v * inv) % p for v in aug[rank]]
        for i in range(m):
            if i != rank and aug[i][col] % p:
                fq = aug[i][col]
                aug[i] = [(a - fq * b) % p for a, b in zip(aug[i], aug[rank])]
        rank += 1
    return [r[ncols:] for r in aug[rank:]]


def _in_row_space_mod_p(vec, space, p):
    if not space:
        return all(v % p == 0 for v in vec)
    test = _row_space_mod_p(space + [vec], p)
    return len(test) == len(space)


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


def _vp_int(n, p):
    if n == 0:
        return 0
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _vp_rational(x, p):
    x = mpq(x)
    num = int(x.numerator)
    den = int(x.denominator)
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# the independent valuation oracle (HNF ideal-power membership)


class ValuationOracle:
    """Computes v_P(x) by membership of x in HNF lattices of P^k, built from
    the two-element representations P^k = (p^ceil(k/e), pi^k)."""

    def __init__(self, field, order, prime_data):
        self.K = field
        self.order = order
        self.pd = prime_data
        self._lattices = {}

    def _lattice(self, k):
        if k in self._lattices:
            return self._lattices[k]
        p, e = self.pd.p, self.pd.e
        n = self.K.n
        c = -(-k // e)  # ceil
        pi_pow = [mpq(1)] + [mpq(0)] * (n - 1)
        for _ in range(k):
            pi_pow = self.K.mul(pi_pow, self.pd.uniformizer)
        rows = []
        for i in range(n):
            b = self.order.basis[i]
            rows.append([v * p**c for v in b])
            rows.append(self.K.mul(b, pi_pow))
        # convert rows to order coordinates (they must be integral there)
        int_rows = []
        for r in rows:
            coords = self.order._to_order(r)
            if any(v.denominator != 1 for v in coords):
                raise AssertionError("ideal generator escaped the order")
            int_rows.append([int(v) for v in coords])
        lat = hnf_rows(int_rows)
        self._lattices[k] = lat
        return lat

    def valuation(self, power_coords, cap=120):
        """v_P(x) for any x in the field; None stands for +infinity (x = 0)."""
        coords = self.order._to_order([mpq(v) for v in power_coords])
        if all(v == 0 for v in coords):
            return None
        # pull out rational content so the lattice test sees integer vectors:
        # v_P(x) = v_P(d x) - e * v_p(d) for any nonzero rational d
        den = 1
        for v in coords:
            dv = int(v.denominator)
            den = den * dv // _gcd_int(den, dv)
        coords = [v * den for v in coords]
        shift = -self.pd.e * _vp_int(den, self.pd.p)
        num_gcd = 0
        for v in coords:
            num_gcd = _gcd_int(num_gcd, abs(int(v)))
        strip = self.pd.p ** _vp_int(num_gcd, self.pd.p)
        if strip > 1:
            coords = [v / strip for v in coords]
            shift += self.pd.e * _vp_int(strip, self.pd.p)
        vec = [int(v) for v in coords]
        v = 0
        while v < cap:
            if not lattice_contains(self._lattice(v + 1), vec):
                return v + shift
            v += 1
        raise AssertionError("valuation exceeded cap")
