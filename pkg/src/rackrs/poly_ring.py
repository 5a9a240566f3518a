"""Univariate polynomial arithmetic over a field tower.

Coefficients are stored low degree to high as packed field elements and
trailing zeros are trimmed on construction.  The zero polynomial has
degree NEG_INF, a true sentinel: any comparison against it does the right
thing, so the Euclidean chain never sees -1 arithmetic.
"""

from . import kernels
from .errors import fail

NEG_INF = float("-inf")


class Poly:
    __slots__ = ("F", "coeffs")

    def __init__(self, F, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        if cs:
            F._chk(*cs)
        self.F = F
        self.coeffs = tuple(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self):
        return not self.coeffs

    def coeff(self, j):
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def __call__(self, x):
        F = self.F
        F._chk(x)
        if not self.coeffs:
            return 0
        if F.has_tables:
            return kernels.horner_tab(self.coeffs, x, F.p, F._exp, F._log)
        return kernels.horner(self.coeffs, x, F.p, F.modulus_packed, F.t)

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.F is other.F
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.F), self.coeffs))

    def __add__(self, other):
        F = self.F
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out)

    def __neg__(self):
        return Poly(self.F, [self.F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.F
        if self.is_zero or other.is_zero:
            return Poly(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, out)

    def scale(self, c):
        return Poly(self.F, [self.F.mul(c, a) for a in self.coeffs])

    def shift(self, k):
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return Poly(self.F, (0,) * k + self.coeffs)

    def __divmod__(self, g):
        F = self.F
        if g.is_zero:
            fail("DIVIDE_BY_ZERO_POLY", "polynomial division by zero")
        if self.degree < g.degree:
            return Poly(F), self
        r = list(self.coeffs)
        dg = len(g.coeffs) - 1
        q = [0] * (len(r) - dg)
        lead_inv = F.inv(g.coeffs[-1])
        while len(r) - 1 >= dg:
            d = len(r) - 1
            c = F.mul(r[-1], lead_inv)
            q[d - dg] = c
            for i, gc in enumerate(g.coeffs):
                r[d - dg + i] = F.sub(r[d - dg + i], F.mul(c, gc))
            while r and r[-1] == 0:
                r.pop()
        return Poly(F, q), Poly(F, r)

    def __floordiv__(self, g):
        return divmod(self, g)[0]

    def __mod__(self, g):
        return divmod(self, g)[1]

    def divexact(self, g):
        q, r = divmod(self, g)
        if not r.is_zero:
            raise ValueError("division expected to be exact")
        return q

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def __repr__(self):
        return f"Poly[{self}]"


def constant(F, c):
    return Poly(F, (c,))


def monomial(F, j, c=1):
    return Poly(F, (0,) * j + (c,))


def lagrange(F, points):
    """The unique polynomial of degree < len(points) through all of them."""
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        fail("DUPLICATE_POINT", "interpolation points must be distinct")
    total = Poly(F)
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        num = Poly(F, (1,))
        denom = 1
        for j, (xj, _) in enumerate(points):
            if j != i:
                num = num * Poly(F, (F.neg(xj), 1))
                denom = F.mul(denom, F.sub(xi, xj))
        total = total + num.scale(F.div(yi, denom))
    return total


def residue_shifted(f, h, y):
    """f mod (h - y): the degree-<deg(h) polynomial agreeing with f
    wherever h evaluates to y."""
    F = f.F
    if h.degree < 1:
        fail("DIVIDE_BY_ZERO_POLY", "shift modulus must have positive degree")
    F._chk(y)
    hy = h - constant(F, y)
    return f % hy


def coefficient_polys(f, h, k=None):
    """Coefficient polynomials H_j with sum_j H_j(y) x^j = f mod (h - y).

    Obtained from the division chain f = v_1 + h*v_2 + h^2*v_3 + ... with
    deg(v_i) < deg(h); H_j collects the x^j coefficients of the v_i as a
    polynomial in y.  With deg(f) < k each H_j has degree <= ceil(k/u) - 1.
    """
    F = f.F
    u = h.degree
    if u < 1:
        fail("DIVIDE_BY_ZERO_POLY", "h must have positive degree")
    if k is not None and not f.degree < k:
        raise ValueError(f"deg(f)={f.degree} not below k={k}")
    layers = []
    cur = f
    while not cur.is_zero:
        cur, rem = divmod(cur, h)
        layers.append(rem)
    return [Poly(F, [layer.coeff(j) for layer in layers]) for j in range(u)]


def vandermonde_solve(F, xs, rhs, window=None):
    """Solve sum_{j=j0}^{j0+w-1} e_j * x_i^j = rhs_i for the e_j.

    window = (j0, w); defaults to (0, len(xs)).  Returns [e_j0, ...].
    """
    j0, w = window if window is not None else (0, len(xs))
    if len(xs) != w or len(rhs) != w:
        raise ValueError(f"need exactly w={w} points and right-hand sides")
    if w == 0:
        return []
    if len(set(xs)) != len(xs):
        fail("SINGULAR", "duplicate evaluation points")
    if j0 > 0 and 0 in xs:
        fail("SINGULAR", "evaluation point 0 cannot see a window above x^0")
    from .field_tower import mat_solve
    M = [[F.pow(x, j0 + c) for c in range(w)] for x in xs]
    sol = mat_solve(F, M, list(rhs))
    if sol is None:
        fail("SINGULAR", "window system is singular")
    return sol


def random_poly(F, k, rng):
    """Uniform polynomial of degree < k (the zero polynomial included)."""
    return Poly(F, [rng.randrange(F.size) for _ in range(k)])
