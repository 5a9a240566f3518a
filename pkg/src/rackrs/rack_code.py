"""Laying a Reed-Solomon codeword into a racks-by-nodes array.

Row i holds the code symbols on block A_i of a good polynomial h.  Since
f agrees on A_i with its residue f_i = f mod (h - y_i), a degree-<u
polynomial, the array is equivalently the coefficient matrix e[i][j] of
those residues; and the j-th coefficients across racks form a short
codeword evaluated at the block constants y_i, which is what makes
homogeneous repair schemes applicable per column.
"""

from .errors import fail
from .poly_ring import lagrange
from .rs_core import CodeParams, Codeword


def make_params(F, gp, k):
    """CodeParams whose point order is the rack layout of gp."""
    return CodeParams(F, k, gp.points(), u=gp.u)


class RackArray:
    """nbar x u matrix of symbols with their evaluation points."""

    def __init__(self, F, gp, params, symbols):
        self.F = F
        self.gp = gp
        self.params = params
        self.points = gp.groups
        self.symbols = tuple(tuple(row) for row in symbols)
        if len(self.symbols) != gp.nbar or any(len(r) != gp.u for r in self.symbols):
            raise ValueError("symbol matrix shape does not match the layout")

    @property
    def nbar(self):
        return self.gp.nbar

    @property
    def u(self):
        return self.gp.u

    def flatten(self):
        """The codeword in layout point order."""
        return Codeword(self.params, (s for row in self.symbols for s in row))

    def dump(self):
        """One line per rack of point:symbol pairs."""
        return "\n".join(
            " ".join(f"{a}:{s}" for a, s in zip(prow, srow))
            for prow, srow in zip(self.points, self.symbols))


def layout(f, gp, params):
    """Evaluate the message polynomial on every block point."""
    if not f.degree < params.k:
        raise ValueError(f"deg(f)={f.degree} not below k={params.k}")
    if params.points != gp.points():
        raise ValueError("params point order does not match the layout")
    rows = [tuple(f(a) for a in block) for block in gp.groups]
    return RackArray(params.F, gp, params, rows)


class ResidueSet:
    """Per-rack residue polynomials and their coefficient matrix."""

    def __init__(self, arr, polys):
        self.arr = arr
        self.polys = tuple(polys)
        u = arr.u
        self.e = tuple(tuple(fi.coeff(j) for j in range(u)) for fi in self.polys)

    @property
    def gp(self):
        return self.arr.gp


def rack_residues(arr):
    """Interpolate each rack's symbols into its degree-<u residue."""
    u = arr.u
    polys = []
    for prow, srow in zip(arr.points, arr.symbols):
        fi = lagrange(arr.F, list(zip(prow, srow)))
        if not fi.degree < u:
            fail("INCONSISTENT", "rack row does not fit a degree-<u residue")
        polys.append(fi)
    return ResidueSet(arr, polys)


class ColumnWord:
    """(e_{1,j}, ..., e_{nbar,j}) with evaluation points (y_1, ..., y_nbar).

    Entries may be None while a word is under repair; degree checks apply
    only to complete words.
    """

    __slots__ = ("F", "j", "values", "ys", "s")

    def __init__(self, F, j, values, ys, s):
        self.F = F
        self.j = j
        self.values = tuple(values)
        self.ys = tuple(ys)
        self.s = s
        if len(self.values) != len(self.ys):
            raise ValueError("column length does not match the constants")

    def interpolate(self):
        if any(v is None for v in self.values):
            raise ValueError("column word has unknown entries")
        return lagrange(self.F, list(zip(self.ys, self.values)))

    def check_degree(self):
        """True when the complete column fits a degree-<s polynomial."""
        return self.interpolate().degree < self.s


def column(rset, j):
    arr = rset.arr
    if not 0 <= j < arr.u:
        raise ValueError(f"column index {j} out of range")
    return ColumnWord(arr.F, j, (row[j] for row in rset.e),
                      arr.gp.constants, arr.params.s)
