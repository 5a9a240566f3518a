"""Repair schemes for column codewords and rack-level orchestration.

A failed rack's residue polynomial is rebuilt in three steps: helper racks
interpolate their residues locally (free), the missing top coefficients
are recovered one column at a time by a pluggable homogeneous scheme
(cross-rack, the only counted traffic), and the remaining low coefficients
come from the rack's own survivors through a Vandermonde solve (free).

Two trace-based schemes share one engine.  Each builds a family of dual
polynomials g_l vanishing at every excluded position, evaluates them at
the helpers' points, and asks each helper only for the traces of its
symbol against a basis of span{g_l(y_i)}: that rank is the helper's whole
download.  The recovered coefficient falls out of the dual basis of
{nu_i* * g_l(y_i*)}.  When several racks miss a column, or a scheme's
degree bound fails, the column falls back to plain interpolation from s
full symbols, flagged "baseline" in the report.
"""

from fractions import Fraction

from .errors import fail
from .field_tower import Echelon, SubspaceDesc
from .poly_ring import Poly, lagrange, vandermonde_solve
from .rack_code import ColumnWord
from .rs_core import dual_multipliers


class FailureSpec:
    """Failed node indices per rack; racks are 1-based, nodes 0-based."""

    def __init__(self, failures):
        norm = {}
        for rack, nodes in dict(failures).items():
            nodes = frozenset(int(i) for i in nodes)
            if not nodes:
                raise ValueError(f"rack {rack} listed with no failed nodes")
            norm[int(rack)] = nodes
        self.failures = norm

    @property
    def m(self):
        return len(self.failures)

    @property
    def eps(self):
        return {rack: len(nodes) for rack, nodes in self.failures.items()}

    @property
    def eps_max(self):
        return max(self.eps.values(), default=0)

    def validate(self, params):
        """Check the failed-node map against a rack-structured code."""
        nbar, u, s = params.nbar, params.u, params.s
        for rack, nodes in self.failures.items():
            if not 1 <= rack <= nbar:
                raise ValueError(f"rack {rack} out of range 1..{nbar}")
            if any(not 0 <= i < u for i in nodes):
                raise ValueError(f"node index out of range 0..{u - 1} in rack {rack}")
        if self.m > nbar - s:
            fail("TOO_MANY_FAILED_RACKS",
                 f"{self.m} failed racks exceeds nbar - s = {nbar - s}")

    def __repr__(self):
        inner = ", ".join(f"{r}:{sorted(ns)}" for r, ns in sorted(self.failures.items()))
        return f"FailureSpec({inner})"


def compute_Rt(spec):
    """R_t = racks with at least t failures, for t = 1..max; nested by
    construction."""
    out = []
    for t in range(1, spec.eps_max + 1):
        out.append((t, frozenset(r for r, e in spec.eps.items() if e >= t)))
    return out


class SchemeConfig:
    """Which single-failure scheme repairs a column, with its parameters."""

    KINDS = ("gw_subfield", "subspace", "naive")

    def __init__(self, kind, delta=None, sbar=None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown scheme kind {kind!r}")
        if kind == "gw_subfield" and (delta is None or delta < 1):
            raise ValueError("gw_subfield needs delta >= 1")
        if kind == "subspace" and (sbar is None or sbar < 0):
            raise ValueError("subspace needs sbar >= 0")
        self.kind = kind
        self.delta = delta
        self.sbar = sbar

    def __repr__(self):
        extra = ""
        if self.kind == "gw_subfield":
            extra = f" delta={self.delta}"
        elif self.kind == "subspace":
            extra = f" sbar={self.sbar}"
        return f"SchemeConfig({self.kind}{extra})"


class HelperDownload:
    """What one helper rack ships for one column repair.

    values: the transmitted sub-symbols (prime-field elements).
    multipliers: span basis of the dual-polynomial evaluations; each value
    is the trace of (nu_i * multiplier * symbol).  None for naive repair,
    where values are the plain coordinates of the full symbol.
    gevals: every dual-polynomial evaluation at this helper, kept so the
    rank accounting can be recomputed independently.
    """

    __slots__ = ("rack", "values", "multipliers", "gevals")

    def __init__(self, rack, values, multipliers=None, gevals=None):
        self.rack = rack
        self.values = tuple(values)
        self.multipliers = tuple(multipliers) if multipliers is not None else None
        self.gevals = tuple(gevals) if gevals is not None else None

    def __repr__(self):
        return f"HelperDownload(rack={self.rack}, {len(self.values)} sub-symbols)"


# -- dual-polynomial constructions

def _vanishing(F, ys, excluded):
    """prod_{r in excluded} (x - y_r)."""
    Z = Poly(F, (1,))
    for r in sorted(excluded):
        Z = Z * Poly(F, (F.neg(ys[r - 1]), 1))
    return Z


def _gw_numerator(F, beta, y0, delta):
    """Trace of beta*(x - y0) from level delta down to the prime field,
    as a polynomial in x; vanishes at y0 and has degree p^(delta-1)."""
    coeffs = [0] * (F.p ** (delta - 1) + 1)
    for i in range(delta):
        e = F.p ** i
        c = F.pow(beta, e)
        coeffs[e] = F.add(coeffs[e], c)
        coeffs[0] = F.sub(coeffs[0], F.mul(c, F.pow(y0, e)))
    return Poly(F, coeffs)


def _subspace_numerator(F, U, beta, y0):
    """prod_{v in U} (beta*(x - y0) - v); vanishes at y0 since 0 is in U."""
    out = Poly(F, (1,))
    shift = F.mul(beta, y0)
    for v in U.enumerate():
        out = out * Poly(F, (F.neg(F.add(shift, v)), beta))
    return out


def gw_dual_polys(word, i_star, delta, eta=None, beta=None, excluded=()):
    """The dual polynomials of the subfield trace scheme, l = (eta_m, beta_w)
    with eta over F_{q^delta} and beta over F_q, plus the vanishing factor
    for excluded positions."""
    F = word.F
    if F.t % delta:
        fail("BAD_SUBFIELD", f"delta={delta} does not divide t={F.t}")
    nbar, s = len(word.ys), word.s
    room = nbar - s - len(excluded)
    if F.p ** (delta - 1) > room:
        fail("PRECONDITION_FAILED",
             f"degree bound: q^(delta-1) = {F.p ** (delta - 1)} > {room}")
    for y in word.ys:
        if not F.in_subfield(y, delta):
            fail("PRECONDITION_FAILED",
                 f"column point {y} lies outside the degree-{delta} subfield")
    if eta is None:
        eta = F.power_basis(delta)
    if beta is None:
        g = F.generators[delta]
        beta = tuple(F.pow(g, i) for i in range(delta))
    y0 = word.ys[i_star - 1]
    Z = _vanishing(F, word.ys, excluded)
    polys = []
    for em in eta:
        for bw in beta:
            g = _gw_numerator(F, bw, y0, delta).divexact(Poly(F, (F.neg(y0), 1)))
            polys.append(g.scale(em) * Z)
    return polys


def subspace_dual_polys(word, i_star, sbar, ubar=None, beta=None, excluded=()):
    """Dual polynomials of the subspace scheme: the annihilator of a
    dimension-sbar subspace applied to beta_l*(x - y_i*), divided by the
    linear factor, with the vanishing factor for excluded positions."""
    F = word.F
    if not 0 <= sbar <= F.t:
        raise ValueError(f"sbar={sbar} out of range 0..{F.t}")
    nbar, s = len(word.ys), word.s
    room = nbar - s - len(excluded)
    if F.p ** sbar > room:
        fail("PRECONDITION_FAILED",
             f"degree bound: q^sbar = {F.p ** sbar} > {room}")
    if ubar is None:
        ubar = SubspaceDesc(F, tuple(F.pow(F.generator, i) for i in range(sbar)), 1)
    if ubar.cardinality != F.p ** sbar:
        raise ValueError("subspace size does not match sbar")
    if beta is None:
        beta = F.power_basis(1)
    y0 = word.ys[i_star - 1]
    Z = _vanishing(F, word.ys, excluded)
    polys = []
    for bl in beta:
        if bl == 0:
            fail("BASIS_DEGENERATE", "zero element in the beta basis")
        g = _subspace_numerator(F, ubar, bl, y0).divexact(Poly(F, (F.neg(y0), 1)))
        polys.append(g * Z)
    return polys


# -- the shared trace-repair engine

def _trace_repair(word, i_star, polys):
    """Run one column repair from a family of dual polynomials.

    Returns (recovered value, helper downloads).  Positions where every
    dual polynomial vanishes (the excluded ones) are skipped entirely; all
    other positions besides i_star must hold known values.
    """
    F = word.F
    nbar = len(word.ys)
    nu = dual_multipliers(F, word.ys)
    pos0 = i_star - 1
    theta = tuple(F.mul(nu[pos0], g(word.ys[pos0])) for g in polys)
    if F.rank_over_subfield(theta, 1) != F.t:
        fail("BASIS_DEGENERATE",
             "recovery multipliers do not span the field over F_q")
    theta_dual = F.dual_basis(theta, 1)
    sums = [0] * len(polys)
    records = []
    for r in range(1, nbar + 1):
        if r == i_star:
            continue
        rp = r - 1
        gevals = [g(word.ys[rp]) for g in polys]
        if not any(gevals):
            continue  # excluded position: no contribution, no traffic
        e_r = word.values[rp]
        if e_r is None:
            raise ValueError(f"helper position {r} holds no value")
        ech = Echelon(F, 1)
        basis = []
        kept_idx = []
        for idx, gv in enumerate(gevals):
            if ech.add(gv):
                basis.append(gv)
                kept_idx.append(idx)
        scaled = F.mul(nu[rp], e_r)
        downloads = [F.subfield_trace(F.mul(b, scaled), 1) for b in basis]
        for l, gv in enumerate(gevals):
            coeffs = ech.express(gv)
            for slot, idx in enumerate(kept_idx):
                c = coeffs[idx]
                if c:
                    sums[l] = F.add(sums[l], F.mul(c, downloads[slot]))
        records.append(HelperDownload(r, downloads, basis, gevals))
    value = 0
    for l, d in enumerate(theta_dual):
        value = F.add(value, F.mul(F.neg(sums[l]), d))
    return value, records


def gw_subfield_repair(word, i_star, delta, eta=None, beta=None, excluded=()):
    """Repair column entry i_star by trace downloads through the
    degree-delta subfield; per-helper download equals the rank of the
    dual-polynomial evaluations there."""
    polys = gw_dual_polys(word, i_star, delta, eta, beta, excluded)
    return _trace_repair(word, i_star, polys)


def subspace_repair(word, i_star, sbar, ubar=None, beta=None, excluded=()):
    """Repair column entry i_star by the subspace-annihilator scheme;
    per-helper download is at most t - sbar sub-symbols."""
    polys = subspace_dual_polys(word, i_star, sbar, ubar, beta, excluded)
    return _trace_repair(word, i_star, polys)


def naive_repair(word, targets, D):
    """Recover every target entry from s full symbols: interpolate the
    degree-<s column polynomial through the first s helpers of D."""
    F = word.F
    s = word.s
    targets = sorted(set(targets))
    D = sorted(set(D))
    if set(targets) & set(D):
        fail("PRECONDITION_FAILED", "targets overlap the helper set")
    if len(D) < s:
        fail("INSUFFICIENT_HELPERS", f"naive repair needs {s} helpers, got {len(D)}")
    chosen = D[:s]
    pts = []
    for r in chosen:
        v = word.values[r - 1]
        if v is None:
            raise ValueError(f"helper position {r} holds no value")
        pts.append((word.ys[r - 1], v))
    poly = lagrange(F, pts)
    out = {r: poly(word.ys[r - 1]) for r in targets}
    records = [HelperDownload(r, F.coords_over(word.values[r - 1], 1))
               for r in chosen]
    return out, records


# -- planning and orchestration

class ColumnPlan:
    __slots__ = ("t", "j", "kind", "targets", "i_star", "excluded",
                 "helpers", "baseline")

    def __init__(self, t, j, kind, targets, i_star, excluded, helpers, baseline):
        self.t = t
        self.j = j
        self.kind = kind
        self.targets = tuple(targets)
        self.i_star = i_star
        self.excluded = frozenset(excluded)
        self.helpers = tuple(helpers)
        self.baseline = baseline


class RepairPlan:
    def __init__(self, spec, scheme, params, gp, columns, D):
        self.spec = spec
        self.scheme = scheme
        self.params = params
        self.gp = gp
        self.columns = columns
        self.D = tuple(D)

    def describe(self):
        lines = []
        for c in self.columns:
            tag = " [baseline]" if c.baseline else ""
            tgt = ",".join(str(r) for r in c.targets)
            lines.append(f"t={c.t} column j={c.j} scheme={c.kind} "
                         f"targets={{{tgt}}}{tag}")
        return lines


def plan(spec, params, gp, scheme, D=None):
    """Dispatch each column: the configured single-failure scheme where
    exactly one rack misses the column and the degree bound holds,
    otherwise plain interpolation flagged as baseline."""
    spec.validate(params)
    nbar, s, u = params.nbar, params.s, gp.u
    F = params.F
    failed = set(spec.failures)
    survivors = [r for r in range(1, nbar + 1) if r not in failed]
    if D is None:
        D = list(survivors)
    else:
        D = sorted(set(int(r) for r in D))
        bad = [r for r in D if r in failed or not 1 <= r <= nbar]
        if bad:
            fail("INSUFFICIENT_HELPERS",
                 f"helper racks {bad} are failed or out of range")
    if scheme.kind == "naive":
        if len(D) < s:
            fail("INSUFFICIENT_HELPERS",
                 f"naive repair needs {s} helper racks, got {len(D)}")
    elif set(D) != set(survivors):
        fail("INSUFFICIENT_HELPERS",
             "trace schemes download from every surviving rack")
    if scheme.kind == "gw_subfield":
        if F.t % scheme.delta:
            fail("BAD_SUBFIELD", f"delta={scheme.delta} does not divide t={F.t}")
        if any(not F.in_subfield(y, scheme.delta) for y in gp.constants):
            fail("PRECONDITION_FAILED",
                 f"block constants leave the degree-{scheme.delta} subfield")
        base_need = F.p ** (scheme.delta - 1)
    elif scheme.kind == "subspace":
        base_need = F.p ** scheme.sbar
    else:
        base_need = None
    if base_need is not None and base_need > nbar - s:
        fail("PRECONDITION_FAILED",
             f"degree bound: scheme needs {base_need} <= nbar - s = {nbar - s}")
    columns = []
    for t, rt in compute_Rt(spec):
        j = u - t
        single = len(rt) == 1 and scheme.kind != "naive"
        if single:
            (i_star,) = rt
            excluded = failed - {i_star}
            if base_need <= nbar - s - len(excluded):
                columns.append(ColumnPlan(t, j, scheme.kind, rt, i_star,
                                          excluded, survivors, False))
                continue
        columns.append(ColumnPlan(t, j, "naive", sorted(rt), None, frozenset(),
                                  D, True))
    return RepairPlan(spec, scheme, params, gp, columns, D)


class ColumnReport:
    __slots__ = ("t", "j", "kind", "targets", "baseline", "measured",
                 "analytic", "downloads")

    def __init__(self, t, j, kind, targets, baseline, measured, analytic,
                 downloads):
        self.t = t
        self.j = j
        self.kind = kind
        self.targets = tuple(targets)
        self.baseline = baseline
        self.measured = measured
        self.analytic = analytic
        self.downloads = downloads


class BandwidthReport:
    """Measured cross-rack sub-symbols per column against the closed-form
    count: rank sums for the trace schemes, s*t for baseline columns,
    summed over t."""

    def __init__(self, F, columns):
        self.columns = columns
        self.total = sum(c.measured for c in columns)
        self.analytic_total = sum(c.analytic for c in columns)
        self.matches = self.total == self.analytic_total
        self.sym_equiv = Fraction(self.total, F.t) if F.t else Fraction(0)

    @property
    def per_t(self):
        return {c.t: c.measured for c in self.columns}

    def describe(self):
        lines = []
        for c in self.columns:
            tag = " [baseline]" if c.baseline else ""
            lines.append(f"t={c.t}: {c.measured} sub-symbols via {c.kind}{tag}"
                         f" (analytic {c.analytic})")
        lines.append(f"total: {self.total} sub-symbols"
                     f" (= {self.sym_equiv} symbols),"
                     f" analytic {self.analytic_total},"
                     f" match: {'yes' if self.matches else 'NO'}")
        return lines


def _column_word(F, rplan, residues, j):
    """Assemble a column with helper entries filled and the rest unknown."""
    values = []
    for r in range(1, rplan.params.nbar + 1):
        fi = residues.get(r)
        values.append(fi.coeff(j) if fi is not None else None)
    return ColumnWord(F, j, values, rplan.gp.constants, rplan.params.s)


def execute(masked_rows, rplan, recorder=None):
    """Run a full repair session over symbol rows with None at failures.

    Returns (restored, report): restored maps (rack, node index) to the
    recomputed symbol.  recorder, when given, is called as
    recorder(phase, src, dst, subsymbols) for every message that would
    cross a link; phase is step1-intra, step2-cross, or step3-intra.
    """
    gp, params, spec = rplan.gp, rplan.params, rplan.spec
    F = params.F
    u, nbar, s, t = gp.u, params.nbar, params.s, F.t
    record = recorder if recorder is not None else (lambda *a: None)

    helper_racks = set()
    for c in rplan.columns:
        helper_racks.update(c.helpers if c.kind != "naive" else c.helpers[:s])
    residues = {}
    for r in sorted(helper_racks):
        prow = gp.groups[r - 1]
        srow = masked_rows[r - 1]
        if any(v is None for v in srow):
            raise ValueError(f"helper rack {r} has missing symbols")
        record("step1-intra", r, r, u * t)
        residues[r] = lagrange(F, list(zip(prow, srow)))

    center = 0 if spec.m > 1 else next(iter(spec.failures), 0)
    recovered = {r: {} for r in spec.failures}
    reports = []
    for c in rplan.columns:
        word = _column_word(F, rplan, residues, c.j)
        if c.kind == "gw_subfield":
            value, recs = gw_subfield_repair(word, c.i_star, rplan.scheme.delta,
                                             excluded=c.excluded)
            recovered[c.i_star][c.j] = value
            analytic = sum(F.rank_over_subfield(rec.gevals, 1) for rec in recs)
        elif c.kind == "subspace":
            value, recs = subspace_repair(word, c.i_star, rplan.scheme.sbar,
                                          excluded=c.excluded)
            recovered[c.i_star][c.j] = value
            analytic = sum(F.rank_over_subfield(rec.gevals, 1) for rec in recs)
        else:
            values, recs = naive_repair(word, c.targets, list(c.helpers))
            for r, v in values.items():
                recovered[r][c.j] = v
            analytic = s * t
        measured = 0
        for rec in recs:
            record("step2-cross", rec.rack, center, len(rec.values))
            measured += len(rec.values)
        reports.append(ColumnReport(c.t, c.j, c.kind, c.targets, c.baseline,
                                    measured, analytic, recs))

    restored = {}
    for r in sorted(spec.failures):
        failed_idx = sorted(spec.failures[r])
        eps = len(failed_idx)
        prow = gp.groups[r - 1]
        srow = masked_rows[r - 1]
        top = recovered[r]
        expect = set(range(u - eps, u))
        if set(top) != expect:
            raise AssertionError(f"rack {r}: repaired columns {sorted(top)}, "
                                 f"needed {sorted(expect)}")
        surv = [(prow[i], srow[i]) for i in range(u) if i not in set(failed_idx)]
        if surv:
            record("step3-intra", r, r, len(surv) * t)
        rhs = []
        for a, v in surv:
            acc = v
            for j, e in top.items():
                acc = F.sub(acc, F.mul(e, F.pow(a, j)))
            rhs.append(acc)
        low = vandermonde_solve(F, [a for a, _ in surv], rhs, (0, u - eps))
        coeffs = list(low) + [top[j] for j in range(u - eps, u)]
        f_r = Poly(F, coeffs)
        if not f_r.degree < u:
            raise AssertionError("restored residue exceeds rack degree")
        for i in failed_idx:
            restored[(r, i)] = f_r(prow[i])
        if failed_idx:
            record("step3-intra", r, r, eps * t)
    return restored, BandwidthReport(F, reports)


def repair_rack(arr, spec, rplan, recorder=None):
    """Repair a rack array in place of the failed entries; returns the
    restored symbols and the bandwidth report.  Failed positions are
    masked before any computation touches them."""
    masked = []
    for r, row in enumerate(arr.symbols, start=1):
        dead = spec.failures.get(r, frozenset())
        masked.append([None if i in dead else v for i, v in enumerate(row)])
    return execute(masked, rplan, recorder)


# -- closed-form bandwidth calculators

def predict(formula, **kw):
    """Exact rational bandwidth from the closed forms.

    cor1: eps * bprime
    cor2: eps * (nbar - 1) * (t - sbar)
    cor3: eps * dbar * t / (dbar - kprime + 1)
    thm2: sum of the per-t counts bs
    two_rack: 2*eps1*dbar*t/(dbar-kprime+2) + (eps2-eps1)*dbar*t/(dbar-kprime+1)
    """
    Fr = Fraction
    if formula == "cor1":
        return Fr(kw["eps"]) * Fr(kw["bprime"])
    if formula == "cor2":
        return Fr(kw["eps"]) * (Fr(kw["nbar"]) - 1) * (Fr(kw["t"]) - Fr(kw["sbar"]))
    if formula == "cor3":
        den = Fr(kw["dbar"]) - Fr(kw["kprime"]) + 1
        if den <= 0:
            raise ValueError("dbar - kprime + 1 must be positive")
        return Fr(kw["eps"]) * Fr(kw["dbar"]) * Fr(kw["t"]) / den
    if formula == "thm2":
        return sum((Fr(b) for b in kw["bs"]), Fr(0))
    if formula == "two_rack":
        den1 = Fr(kw["dbar"]) - Fr(kw["kprime"]) + 2
        den2 = Fr(kw["dbar"]) - Fr(kw["kprime"]) + 1
        if den1 <= 0 or den2 <= 0:
            raise ValueError("denominators must be positive")
        first = 2 * Fr(kw["eps1"]) * Fr(kw["dbar"]) * Fr(kw["t"]) / den1
        second = (Fr(kw["eps2"]) - Fr(kw["eps1"])) * Fr(kw["dbar"]) * Fr(kw["t"]) / den2
        return first + second
    raise ValueError(f"unknown formula {formula!r}")
