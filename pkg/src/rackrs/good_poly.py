"""Good polynomials: degree-u maps that are constant on each block of an
equal-size partition of the evaluation set.

Three families are built here: powers x^m (constant on cosets of the
order-m subgroup), additive maps sum theta_i x^(q^i) (constant on cosets
of their kernel), and m-th powers of additive maps whose coefficients sum
to zero (constant on unions of scaled kernel cosets).  Whatever the
algebra promises, the partition is always re-verified by brute
enumeration before a GoodPolynomial is handed out; builders never trust
the formulas.
"""

from .errors import fail
from .poly_ring import Poly, monomial

_FAMILIES = ("power", "additive", "composite")


class GoodPolynomial:
    """h together with its partition blocks A_i and constants y_i."""

    def __init__(self, F, family, h, groups, constants, params=None):
        if family not in _FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        self.F = F
        self.family = family
        self.h = h
        self.groups = tuple(tuple(g) for g in groups)
        self.constants = tuple(constants)
        self.params = dict(params or {})
        self.u = int(h.degree)
        self.nbar = len(self.groups)
        self._verify()

    def _verify(self):
        u = self.u
        if len(self.constants) != self.nbar:
            fail("NOT_GOOD_ON_SET", "one constant per block required")
        if len(set(self.constants)) != self.nbar:
            fail("DUPLICATE_CONSTANTS", "block constants collide")
        seen = set()
        for block, y in zip(self.groups, self.constants):
            if len(block) != u:
                fail("NOT_GOOD_ON_SET",
                     f"block size {len(block)} != deg(h) = {u}")
            for a in block:
                if a in seen:
                    fail("NOT_GOOD_ON_SET", f"point {a} appears twice")
                seen.add(a)
                if self.h(a) != y:
                    fail("NOT_GOOD_ON_SET",
                         f"h({a}) = {self.h(a)} != {y} on its block")

    def points(self):
        """All evaluation points, block order then ascending within block."""
        return tuple(a for block in self.groups for a in block)

    def __repr__(self):
        return (f"GoodPolynomial({self.family}, u={self.u}, "
                f"nbar={self.nbar})")


def build_partition(h, A, group_size=None):
    """Group A by the value of h; every fiber must have the same size
    (deg(h) unless overridden) and blocks are ordered by smallest member.

    Returns (groups, constants); raises NOT_GOOD_ON_SET when h is not
    constant-on-equal-blocks over A.
    """
    u = group_size if group_size is not None else h.degree
    if u < 1 or u != int(u):
        fail("NOT_GOOD_ON_SET", f"invalid block size {u}")
    u = int(u)
    A = list(A)
    if len(set(A)) != len(A):
        fail("NOT_GOOD_ON_SET", "point set has repeats")
    if len(A) % u:
        fail("NOT_GOOD_ON_SET", f"|A| = {len(A)} not divisible by {u}")
    fibers = {}
    for a in A:
        fibers.setdefault(h(a), []).append(a)
    for y, block in fibers.items():
        if len(block) != u:
            fail("NOT_GOOD_ON_SET",
                 f"fiber of {y} has size {len(block)}, expected {u}")
    ordered = sorted(fibers.items(), key=lambda kv: min(kv[1]))
    groups = [tuple(sorted(block)) for _, block in ordered]
    constants = [y for y, _ in ordered]
    return groups, constants


def _select_blocks(groups, constants, nbar, reps):
    """Pick and order blocks: by explicit representatives when given,
    else the greedy smallest-member order build_partition produced."""
    if reps is not None:
        index = {}
        for g, y in zip(groups, constants):
            for a in g:
                index[a] = (g, y)
        chosen = []
        used = set()
        for r in reps:
            if r not in index:
                fail("NOT_GOOD_ON_SET", f"representative {r} not in any block")
            g, y = index[r]
            if g in used:
                fail("NOT_GOOD_ON_SET", f"representative {r} repeats a block")
            used.add(g)
            chosen.append((g, y))
        groups = [g for g, _ in chosen]
        constants = [y for _, y in chosen]
    if nbar is not None:
        if nbar > len(groups):
            fail("NOT_GOOD_ON_SET",
                 f"only {len(groups)} complete blocks, {nbar} requested")
        groups, constants = groups[:nbar], constants[:nbar]
    return groups, constants


def make_power(F, m, nbar=None, reps=None):
    """h = x^m on cosets of the order-m subgroup of the nonzero elements;
    the constant of coset g*E is g^m."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"m={m!r} must be a positive integer")
    if F.order % m:
        fail("ORDER_NOT_DIVIDING", f"{m} does not divide {F.order}")
    h = monomial(F, m)
    A = [x for x in range(1, F.size)]  # zero excluded: it sits in no coset
    groups, constants = build_partition(h, A, group_size=m)
    groups, constants = _select_blocks(groups, constants, nbar, reps)
    return GoodPolynomial(F, "power", h, groups, constants, {"m": m})


def _additive_poly(F, theta):
    """sum theta_i x^(p^i) as a Poly."""
    coeffs = [0] * (F.p ** (len(theta) - 1) + 1)
    for i, th in enumerate(theta):
        coeffs[F.p ** i] = F.add(coeffs[F.p ** i], th)
    return Poly(F, coeffs)


def _kernel(F, h):
    return [x for x in range(F.size) if h(x) == 0]


def make_additive(F, theta, nbar=None, reps=None):
    """h(x) = sum_{i=0}^{a} theta_i x^(q^i) on additive cosets of its
    kernel U; requires |U| = q^a exactly (checked by enumeration)."""
    theta = tuple(theta)
    a = len(theta) - 1
    if a < 0 or theta[0] == 0 or (a > 0 and theta[a] == 0):
        raise ValueError("theta needs nonzero first and last coefficients")
    for th in theta:
        F._chk(th)
    h = _additive_poly(F, theta)
    kernel = _kernel(F, h)
    if len(kernel) != F.p ** a:
        fail("WRONG_KERNEL_SIZE",
             f"kernel has {len(kernel)} roots, expected {F.p ** a}")
    groups, constants = build_partition(h, range(F.size), group_size=F.p ** a)
    groups, constants = _select_blocks(groups, constants, nbar, reps)
    return GoodPolynomial(F, "additive", h, groups, constants,
                          {"theta": theta, "a": a})


def make_composite(F, theta, m, e, nbar=None, reps=None):
    """h(x) = (sum theta_i x^(q^(e*i)))^m with sum theta_i = 0.

    The inner additive map must kill a subspace V of size q^a
    (a = e * (len(theta) - 1)) that is closed under multiplication by the
    degree-e subfield; blocks are the complete size-(m * q^a) fibers of h,
    greedily ordered.
    """
    theta = tuple(theta)
    if not isinstance(e, int) or e < 1 or F.t % e:
        fail("BAD_SUBFIELD", f"inner degree e={e} must divide t={F.t}")
    if not isinstance(m, int) or m < 1 or (F.p ** e - 1) % m:
        fail("ORDER_NOT_DIVIDING", f"{m} does not divide q^e - 1 = {F.p ** e - 1}")
    if len(theta) < 1 or theta[0] == 0 or theta[-1] == 0:
        raise ValueError("theta needs nonzero first and last coefficients")
    acc = 0
    for th in theta:
        F._chk(th)
        acc = F.add(acc, th)
    if acc != 0:
        fail("COEFF_SUM_NONZERO", f"sum(theta) = {acc} != 0")
    a = e * (len(theta) - 1)
    inner_theta = [0] * (a + 1)
    for i, th in enumerate(theta):
        inner_theta[e * i] = th
    inner = _additive_poly(F, inner_theta)
    V = _kernel(F, inner)
    if len(V) != F.p ** a:
        fail("WRONG_KERNEL_SIZE",
             f"inner kernel has {len(V)} roots, expected {F.p ** a}")
    Vset = set(V)
    for lam in F.subfield_elements(e):
        for v in V:
            if F.mul(lam, v) not in Vset:
                fail("CLOSURE_FAILURE",
                     "kernel not closed under the degree-e subfield")
    h = inner
    for _ in range(m - 1):
        h = h * inner
    u = m * F.p ** a
    # keep only complete fibers: the kernel fiber (size q^a < u for m > 1)
    # and any other shortfall classes drop out here
    fibers = {}
    for x in range(F.size):
        fibers.setdefault(h(x), []).append(x)
    complete = {y: block for y, block in fibers.items() if len(block) == u}
    A = [x for block in complete.values() for x in block]
    if not A:
        fail("NOT_GOOD_ON_SET", "no complete blocks exist")
    groups, constants = build_partition(h, A, group_size=u)
    groups, constants = _select_blocks(groups, constants, nbar, reps)
    return GoodPolynomial(F, "composite", h, groups, constants,
                          {"theta": theta, "m": m, "e": e, "a": a})
