"""Exact arithmetic in F_{p^t} with explicit subfield structure.

Every element has one canonical representation: the packed base-p integer
of its coefficient vector over F_p, constant term least significant.
Intermediate subfields F_{p^d} for d | t are not separate objects; an
element belongs to level d exactly when x^(p^d) = x, and the distinguished
generator of level d is gamma^((p^t-1)/(p^d-1)) for the top-level
generator gamma.  This keeps one arithmetic everywhere and makes ledger
accounting bit-exact.

Multiplication uses log/antilog tables up to 2^16 elements and schoolbook
reduction above; both paths live in rackrs.kernels.
"""

from . import kernels
from .errors import fail
from .moduli import MODULI

Elem = int  # packed base-p integer

MAX_FIELD = 2 ** 20
TABLE_LIMIT = 2 ** 16


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n):
    fs = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            fs.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fs.append(n)
    return fs


# -- F_p[x] helpers on plain coefficient lists, used only to validate
#    user-supplied moduli (the shipped table is pre-validated).

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, m, p):
    a = a[:]
    dm = len(m) - 1
    _fp_trim(a)
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _fp_trim(a)
    return a


def _fp_mulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _fp_mod(out, m, p)


def _fp_powmod(base, e, m, p):
    result = [1]
    cur = base[:]
    while e:
        if e & 1:
            result = _fp_mulmod(result, cur, m, p)
        cur = _fp_mulmod(cur, cur, m, p)
        e >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = _fp_trim(a[:]), _fp_trim(b[:])
    while b:
        inv = pow(b[-1], p - 2, p)
        bm = [(c * inv) % p for c in b]
        a = _fp_mod(a, bm, p)
        a, b = b, _fp_trim(a)
    return a


def _irreducible(modulus, p, t):
    # Rabin test: x^(p^t) = x mod f, and x^(p^(t/l)) - x coprime to f
    # for every prime l dividing t.  (Comparing against unreduced x is
    # fine only for deg f >= 2, hence the degree-1 short-circuit.)
    if t == 1:
        return True
    x = [0, 1]
    top = _fp_powmod(x, p ** t, modulus, p)
    diff = _fp_trim([(a - b) % p for a, b in
                     zip(top + [0, 0], x + [0] * len(top))])
    if diff:
        return False
    for l in _prime_factors(t):
        xp = _fp_powmod(x, p ** (t // l), modulus, p)
        diff = _fp_trim([(a - b) % p for a, b in
                         zip(xp + [0, 0], x + [0] * len(xp))])
        g = _fp_gcd(list(modulus), diff, p)
        if len(g) - 1 >= 1:
            return False
    return True


class FieldTower:
    """F_{p^t} plus its full lattice of subfields (one per divisor of t)."""

    def __init__(self, p, t, modulus=None):
        if not isinstance(p, int) or not _is_prime(p):
            fail("NOT_PRIME", f"p={p} is not a prime")
        if not isinstance(t, int) or t < 1:
            fail("REDUCIBLE_MODULUS", f"degree t={t} must be a positive integer")
        if p ** t > MAX_FIELD:
            fail("FIELD_TOO_LARGE", f"p^t={p ** t} exceeds {MAX_FIELD}")
        if modulus is None:
            if (p, t) not in MODULI:
                fail("NO_TABLE_MODULUS",
                     f"no shipped modulus for p={p} t={t}; supply one")
            modulus = MODULI[(p, t)]
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != t + 1 or modulus[-1] != 1:
            fail("REDUCIBLE_MODULUS",
                 f"modulus must be monic of degree {t}, got {list(modulus)}")
        if not _irreducible(list(modulus), p, t):
            fail("REDUCIBLE_MODULUS",
                 f"modulus {list(modulus)} factors over GF({p})")
        self.p = p
        self.t = t
        self.size = p ** t
        self.order = self.size - 1
        self.modulus = modulus
        self.modulus_packed = sum(c * p ** i for i, c in enumerate(modulus))
        self.levels = tuple(d for d in range(1, t + 1) if t % d == 0)
        self._order_factors = _prime_factors(self.order) if self.order > 1 else []
        self.generator = self._find_generator()
        self.generators = {d: self.pow_noval(self.generator,
                                              self.order // (p ** d - 1))
                           for d in self.levels}
        self.has_tables = self.size <= TABLE_LIMIT
        if self.has_tables:
            self._exp, self._log = kernels.build_exp_log(
                p, t, self.modulus_packed, self.generator)
        else:
            self._exp = self._log = None
        self._subfield_cache = {}
        self._dual_cache = {}
        self._coord_dual_cache = {}

    # -- construction helpers

    def _raw_pow(self, a, e):
        return kernels.pp_pow(a, e, self.p, self.modulus_packed, self.t)

    def _has_order(self, g, order):
        if self._raw_pow(g, order) != 1:
            return False
        return all(self._raw_pow(g, order // l) != 1
                   for l in self._order_factors)

    def _find_generator(self):
        if self.t == 1:
            # smallest primitive root mod p
            for g in range(1, self.p):
                if self._has_order(g, self.order):
                    return g
        if self._has_order(self.p, self.order):  # x itself, the usual case
            return self.p
        for g in range(2, self.size):
            if self._has_order(g, self.order):
                return g
        raise AssertionError("no generator found in a finite field")

    # -- element validation and basic arithmetic

    def _chk(self, *xs):
        for x in xs:
            if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < self.size:
                fail("LEVEL_MISMATCH",
                     f"{x!r} is not a packed element of GF({self.p}^{self.t})")

    def add(self, a, b):
        self._chk(a, b)
        return kernels.pp_add(a, b, self.p)

    def sub(self, a, b):
        self._chk(a, b)
        return kernels.pp_sub(a, b, self.p)

    def neg(self, a):
        self._chk(a)
        return kernels.pp_neg(a, self.p)

    def mul(self, a, b):
        self._chk(a, b)
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            return self._exp[(self._log[a] + self._log[b]) % self.order]
        return kernels.pp_mul(a, b, self.p, self.modulus_packed, self.t)

    def inv(self, a):
        self._chk(a)
        if a == 0:
            fail("DIVIDE_BY_ZERO", "inverse of zero")
        if self.has_tables:
            return self._exp[(self.order - self._log[a]) % self.order]
        return self._raw_pow(a, self.order - 1)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        self._chk(a)
        if not isinstance(e, int) or isinstance(e, bool):
            fail("LEVEL_MISMATCH", f"exponent {e!r} must be an integer")
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                fail("DIVIDE_BY_ZERO", "negative power of zero")
            return 0
        e %= self.order
        if self.has_tables:
            return self._exp[(self._log[a] * e) % self.order]
        return self._raw_pow(a, e)

    def pow_noval(self, a, e):
        # constructor-time pow, before tables exist
        if a == 0:
            return 0 if e else 1
        return self._raw_pow(a, e % self.order)

    def arith(self, kind, *operands):
        ops = {"add": (self.add, 2), "sub": (self.sub, 2),
               "mul": (self.mul, 2), "div": (self.div, 2),
               "inv": (self.inv, 1), "pow": (self.pow, 2),
               "neg": (self.neg, 1)}
        if kind not in ops:
            raise ValueError(f"unknown arithmetic kind {kind!r}")
        fn, arity = ops[kind]
        if len(operands) != arity:
            raise ValueError(f"{kind} takes {arity} operands")
        return fn(*operands)

    def frob(self, x, j=1):
        """x -> x^(p^j), the j-fold Frobenius."""
        return self.pow(x, self.p ** j)

    # -- subfields and traces

    def _check_level(self, delta, of=None):
        of = self.t if of is None else of
        if not isinstance(delta, int) or delta < 1 or of % delta or self.t % of:
            fail("BAD_SUBFIELD", f"level {delta} does not divide {of}")

    def in_subfield(self, x, delta):
        self._chk(x)
        self._check_level(delta)
        return self.pow(x, self.p ** delta) == x

    def subfield_elements(self, delta):
        """All elements of F_{p^delta}, ascending packed order."""
        self._check_level(delta)
        if delta not in self._subfield_cache:
            g = self.generators[delta]
            elems = {0, 1}
            cur = 1
            for _ in range(self.p ** delta - 2):
                cur = self.mul(cur, g)
                elems.add(cur)
            self._subfield_cache[delta] = tuple(sorted(elems))
        return self._subfield_cache[delta]

    def subfield_trace(self, x, delta, top=None):
        """Trace from F_{p^top} onto F_{p^delta}: sum of x^(p^(delta*i))."""
        top = self.t if top is None else top
        self._check_level(top)
        self._check_level(delta, of=top)
        self._chk(x)
        if top != self.t and not self.in_subfield(x, top):
            fail("LEVEL_MISMATCH",
                 f"element {x} is not in the degree-{top} subfield")
        step = self.p ** delta
        acc = 0
        cur = x
        for _ in range(top // delta):
            acc = self.add(acc, cur)
            cur = self.pow(cur, step)
        return acc

    # -- coordinates, bases, rank

    def power_basis(self, delta=1):
        """(1, gamma, ..., gamma^(t/delta - 1)), a basis over F_{p^delta}."""
        self._check_level(delta)
        return tuple(self.pow(self.generator, i) for i in range(self.t // delta))

    def dual_basis(self, basis, lower=1, upper=None):
        """The basis {d_j} with Tr_{upper/lower}(b_i d_j) = [i == j]."""
        upper = self.t if upper is None else upper
        self._check_level(upper)
        self._check_level(lower, of=upper)
        basis = tuple(basis)
        d = upper // lower
        if len(basis) != d:
            fail("NOT_A_BASIS",
                 f"need {d} elements for degree {upper} over {lower}, got {len(basis)}")
        for b in basis:
            self._chk(b)
            if upper != self.t and not self.in_subfield(b, upper):
                fail("LEVEL_MISMATCH", f"basis element {b} outside level {upper}")
        key = (basis, lower, upper)
        if key in self._dual_cache:
            return self._dual_cache[key]
        gram = [[self.subfield_trace(self.mul(basis[i], basis[j]), lower, upper)
                 for j in range(d)] for i in range(d)]
        ginv = mat_inv(self, gram)
        if ginv is None:
            fail("NOT_A_BASIS", "trace Gram matrix is singular")
        dual = []
        for j in range(d):
            acc = 0
            for i in range(d):
                acc = self.add(acc, self.mul(ginv[i][j], basis[i]))
            dual.append(acc)
        dual = tuple(dual)
        self._dual_cache[key] = dual
        self._dual_cache[(dual, lower, upper)] = basis
        return dual

    def expand(self, x, basis, lower=1, upper=None):
        """Coordinates (Tr(b_i * x))_i; feed them to reassemble with the
        dual basis to reconstruct x."""
        upper = self.t if upper is None else upper
        self._chk(x)
        return tuple(self.subfield_trace(self.mul(b, x), lower, upper)
                     for b in basis)

    def reassemble(self, coords, dual):
        dual = tuple(dual)
        if len(coords) != len(dual):
            fail("NOT_A_BASIS", "coordinate/basis length mismatch")
        acc = 0
        for c, d in zip(coords, dual):
            acc = self.add(acc, self.mul(c, d))
        return acc

    def coords_over(self, x, delta=1):
        """Coordinate vector of x over F_{p^delta}, length t/delta."""
        self._chk(x)
        self._check_level(delta)
        if delta == 1:
            out = []
            for _ in range(self.t):
                out.append(x % self.p)
                x //= self.p
            return tuple(out)
        if delta == self.t:
            return (x,)
        if delta not in self._coord_dual_cache:
            pb = self.power_basis(delta)
            self._coord_dual_cache[delta] = self.dual_basis(pb, delta, self.t)
        dual = self._coord_dual_cache[delta]
        return tuple(self.subfield_trace(self.mul(x, dj), delta) for dj in dual)

    def rank_over_subfield(self, elems, delta=1):
        """Dimension of the F_{p^delta}-span of elems."""
        ech = Echelon(self, delta)
        for x in elems:
            ech.add(x)
        return ech.rank

    def span_basis(self, elems, delta=1):
        """A maximal independent subset of elems, kept in input order."""
        ech = Echelon(self, delta)
        kept = []
        for x in elems:
            if ech.add(x):
                kept.append(x)
        return kept

    # -- display

    def log_of(self, x):
        self._chk(x)
        if not self.has_tables or x == 0:
            return None
        return self._log[x]

    def fmt(self, x):
        """Packed decimal plus gamma-power annotation when a log exists."""
        k = self.log_of(x)
        if k is None:
            return str(x)
        return f"{x}(γ^{k})"

    def pow_str(self, x):
        """gamma-power notation alone: '0', '1', or 'γ^k'."""
        if x == 0:
            return "0"
        if x == 1:
            return "1"
        k = self.log_of(x)
        return f"γ^{k}" if k is not None else str(x)

    def __repr__(self):
        return f"FieldTower(p={self.p}, t={self.t})"


def build_field(p, t, modulus=None):
    """Construct F_{p^t}; the shipped modulus table is used when none is given."""
    return FieldTower(p, t, modulus)


class Echelon:
    """Incremental Gaussian elimination over F_{p^delta}.

    Each reduced row remembers its expression over the originally added
    elements, so membership tests can return explicit combinations.
    """

    def __init__(self, F, delta=1):
        self.F = F
        self.delta = delta
        self.rows = []      # (reduced coord vector, combo over originals)
        self.pivots = []    # pivot column per row
        self.n_orig = 0

    @property
    def rank(self):
        return len(self.rows)

    def _reduce(self, vec):
        F = self.F
        vec = list(vec)
        combo = [0] * self.n_orig
        for (row, rcombo), pc in zip(self.rows, self.pivots):
            if vec[pc]:
                factor = F.div(vec[pc], row[pc])
                for i, rv in enumerate(row):
                    if rv:
                        vec[i] = F.sub(vec[i], F.mul(factor, rv))
                for i, rc in enumerate(rcombo):
                    if rc:
                        combo[i] = F.sub(combo[i], F.mul(factor, rc))
        return vec, combo

    def add(self, x):
        """Add element x; True when it enlarges the span."""
        vec, combo = self._reduce(self.F.coords_over(x, self.delta))
        self.n_orig += 1
        for r, _ in self.rows:
            r.append(0)
        if not any(vec):
            return False
        combo = [self.F.neg(c) for c in combo] + [1]
        pc = next(i for i, v in enumerate(vec) if v)
        self.rows.append((vec, combo))
        self.pivots.append(pc)
        return True

    def express(self, x):
        """Coefficients over the added elements when x lies in the span,
        else None.  Only originals that enlarged the span carry weight."""
        vec, combo = self._reduce(self.F.coords_over(x, self.delta))
        if any(vec):
            return None
        return [self.F.neg(c) for c in combo]


class SubspaceDesc:
    """A subspace given by a basis over a stated subfield level."""

    def __init__(self, F, basis, sub_delta=1, ambient_delta=None):
        self.F = F
        self.sub_delta = sub_delta
        self.ambient_delta = F.t if ambient_delta is None else ambient_delta
        F._check_level(self.ambient_delta)
        F._check_level(sub_delta, of=self.ambient_delta)
        basis = tuple(basis)
        for b in basis:
            F._chk(b)
            if not F.in_subfield(b, self.ambient_delta):
                fail("LEVEL_MISMATCH",
                     f"basis element {b} outside level {self.ambient_delta}")
        if F.rank_over_subfield(basis, sub_delta) != len(basis):
            fail("NOT_A_BASIS", "subspace basis is dependent over its subfield")
        self.basis = basis
        self.cardinality = (F.p ** sub_delta) ** len(basis)

    def enumerate(self):
        """Every subfield-linear combination; exactly `cardinality` values."""
        F = self.F
        scalars = F.subfield_elements(self.sub_delta)
        elems = [0]
        for b in self.basis:
            elems = [F.add(e, F.mul(c, b)) for e in elems for c in scalars]
        out = sorted(set(elems))
        if len(out) != self.cardinality:
            fail("NOT_A_BASIS", "enumeration collapsed; basis not independent")
        return out

    def __contains__(self, x):
        ech = Echelon(self.F, self.sub_delta)
        for b in self.basis:
            ech.add(b)
        return ech.express(x) is not None


def linearized_eval(U, x):
    """Product of (x - u) over all u in the subspace U."""
    F = U.F
    F._chk(x)
    acc = 1
    for u in U.enumerate():
        acc = F.mul(acc, F.sub(x, u))
    return acc


# -- small dense linear algebra over a FieldTower

def mat_inv(F, M):
    """Inverse of a square matrix of packed elements, or None if singular."""
    n = len(M)
    aug = [list(M[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv_p = F.inv(aug[col][col])
        aug[col] = [F.mul(inv_p, v) for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_solve(F, M, rhs):
    """Solve M x = rhs; None if the matrix is singular."""
    n = len(M)
    aug = [list(M[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv_p = F.inv(aug[col][col])
        aug[col] = [F.mul(inv_p, v) for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]
