"""Reed-Solomon encoding, dual codewords, and an erasure-decoding oracle.

The dual of an evaluation code on distinct points is again an evaluation
code once each column is scaled by nu_i, the inverse of the product of
differences to the other points; dual_word includes those multipliers so
parity checks are literally zero.  erasure_decode interpolates k surviving
positions and verifies the rest, favoring transparency over speed: it is
the oracle every repair scheme is compared against.
"""

from .errors import fail
from .poly_ring import Poly, lagrange

ERASED = None


class CodeParams:
    """Length, dimension, evaluation points, and the rack-derived shape."""

    def __init__(self, F, k, points, u=None):
        points = tuple(points)
        if len(set(points)) != len(points):
            fail("DUPLICATE_POINT", "evaluation points must be distinct")
        for a in points:
            F._chk(a)
        n = len(points)
        if not 1 <= k < n <= F.size:
            raise ValueError(f"need 1 <= k < n <= {F.size}, got k={k} n={n}")
        self.F = F
        self.n = n
        self.k = k
        self.points = points
        self.u = u
        if u is not None:
            if n % u:
                raise ValueError(f"u={u} does not divide n={n}")
            self.nbar = n // u
            self.s = -(-k // u)
            self.v = k - u * (k // u)
        else:
            self.nbar = self.s = self.v = None

    def __repr__(self):
        shape = f" u={self.u} nbar={self.nbar} s={self.s}" if self.u else ""
        return f"CodeParams(n={self.n}, k={self.k}{shape})"


class Codeword:
    """Symbol vector aligned with the evaluation points."""

    __slots__ = ("params", "symbols")

    def __init__(self, params, symbols):
        symbols = tuple(symbols)
        if len(symbols) != params.n:
            raise ValueError("symbol count does not match code length")
        self.params = params
        self.symbols = symbols

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def __eq__(self, other):
        return isinstance(other, Codeword) and self.symbols == other.symbols

    def serialize(self):
        return ",".join(str(s) for s in self.symbols)

    def __repr__(self):
        return f"Codeword[{self.serialize()}]"


def encode(f, params):
    """Evaluate a degree-<k message polynomial at every code point."""
    if not f.degree < params.k:
        raise ValueError(f"deg(f)={f.degree} not below k={params.k}")
    return Codeword(params, (f(a) for a in params.points))


def dual_multipliers(F, points):
    """nu_i = 1 / prod_{j != i} (a_i - a_j); all nonzero."""
    points = tuple(points)
    if len(set(points)) != len(points):
        fail("DUPLICATE_POINT", "points must be distinct")
    out = []
    for i, ai in enumerate(points):
        prod = 1
        for j, aj in enumerate(points):
            if j != i:
                prod = F.mul(prod, F.sub(ai, aj))
        out.append(F.inv(prod))
    return tuple(out)


def dual_word(g, params):
    """The dual-code word (nu_i * g(a_i))_i for deg(g) < n - k."""
    F = params.F
    if not g.degree < params.n - params.k:
        raise ValueError(f"deg(g)={g.degree} not below n-k={params.n - params.k}")
    nu = dual_multipliers(F, params.points)
    return Codeword(params, (F.mul(v, g(a)) for v, a in zip(nu, params.points)))


def erasure_decode(symbols, params):
    """Recover the unique degree-<k polynomial matching all unerased
    positions (erasures are ERASED/None).  Interpolates k survivors and
    verifies every remaining one."""
    F = params.F
    symbols = list(symbols)
    if len(symbols) != params.n:
        raise ValueError("word length does not match code length")
    known = [(a, s) for a, s in zip(params.points, symbols) if s is not ERASED]
    if len(known) < params.k:
        fail("TOO_MANY_ERASURES",
             f"{len(known)} survivors for dimension {params.k}")
    f = lagrange(F, known[:params.k])
    for a, s in known[params.k:]:
        if f(a) != s:
            fail("INCONSISTENT", "survivors do not lie on one codeword")
    return f
