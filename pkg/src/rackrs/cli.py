"""Scenario-driven command line front end.

Scenario files are line-oriented: `block key=value ...`, with `#`
comments.  Blocks: field, code, goodpoly, scheme, failures (repeatable),
helpers, seed.  Integer lists are comma-separated.  Example:

    field p=2 t=4
    code n=16 k=7 u=4
    goodpoly family=additive theta=1,0,1 reps=0,2,12,8
    scheme kind=gw_subfield delta=2
    failures rack=1 nodes=1,2,3
    helpers racks=2,3,4
    seed value=11

Exit codes: 0 success, 2 verification mismatch, 3 config error.
"""

import argparse
import random
import sys
from fractions import Fraction

from .errors import RackRSError
from .field_tower import build_field
from .good_poly import make_additive, make_composite, make_power
from .poly_ring import random_poly
from .rack_code import column, layout, make_params, rack_residues
from .repair import FailureSpec, SchemeConfig, plan, predict
from .rs_core import ERASED, Codeword, encode, erasure_decode
from .simulator import build_cluster, inject, measure, run

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_CONFIG = 3


# -- scenario parsing

def _intlist(s):
    return [int(tok) for tok in s.split(",") if tok != ""]


def parse_scenario(text):
    """Parse scenario text into {block: {key: value}} with failures as a
    list of (rack, nodes) pairs."""
    out = {"failures": []}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        block, pairs = toks[0], toks[1:]
        kv = {}
        for tok in pairs:
            if "=" not in tok:
                raise ValueError(f"line {lineno}: expected key=value, got {tok!r}")
            k, v = tok.split("=", 1)
            kv[k] = v
        if block == "failures":
            if "rack" not in kv or "nodes" not in kv:
                raise ValueError(f"line {lineno}: failures needs rack= and nodes=")
            out["failures"].append((int(kv["rack"]), _intlist(kv["nodes"])))
        elif block in ("field", "code", "goodpoly", "scheme", "helpers", "seed"):
            if block in out and block != "failures":
                raise ValueError(f"line {lineno}: duplicate {block} block")
            out[block] = kv
        else:
            raise ValueError(f"line {lineno}: unknown block {block!r}")
    return out


def build_scenario(sc):
    """Instantiate field, partition, code, scheme, and failure spec."""
    fb = sc.get("field")
    if fb is None:
        raise ValueError("scenario needs a field block")
    p, t = int(fb["p"]), int(fb["t"])
    modulus = tuple(_intlist(fb["modulus"])) if "modulus" in fb else None
    F = build_field(p, t, modulus)

    gb = sc.get("goodpoly")
    if gb is None:
        raise ValueError("scenario needs a goodpoly block")
    family = gb.get("family")
    nbar = int(gb["nbar"]) if "nbar" in gb else None
    reps = _intlist(gb["reps"]) if "reps" in gb else None
    if family == "power":
        gp = make_power(F, int(gb["m"]), nbar, reps)
    elif family == "additive":
        gp = make_additive(F, tuple(_intlist(gb["theta"])), nbar, reps)
    elif family == "composite":
        gp = make_composite(F, tuple(_intlist(gb["theta"])), int(gb["m"]),
                            int(gb["e"]), nbar, reps)
    else:
        raise ValueError(f"unknown goodpoly family {family!r}")

    cb = sc.get("code")
    if cb is None or "k" not in cb:
        raise ValueError("scenario needs a code block with k=")
    k = int(cb["k"])
    if "u" in cb and int(cb["u"]) != gp.u:
        raise ValueError(f"code u={cb['u']} but the partition has u={gp.u}")
    if "n" in cb and int(cb["n"]) != gp.nbar * gp.u:
        raise ValueError(f"code n={cb['n']} but the array holds "
                         f"{gp.nbar * gp.u} symbols")
    params = make_params(F, gp, k)

    sb = sc.get("scheme", {"kind": "naive"})
    kind = sb.get("kind", "naive")
    scheme = SchemeConfig(kind,
                          delta=int(sb["delta"]) if "delta" in sb else None,
                          sbar=int(sb["sbar"]) if "sbar" in sb else None)

    spec = FailureSpec({rack: nodes for rack, nodes in sc["failures"]})
    D = _intlist(sc["helpers"]["racks"]) if "helpers" in sc else None
    seed = int(sc.get("seed", {}).get("value", 0))
    return F, gp, params, scheme, spec, D, seed


# -- shared reporting

def _print_report(F, gp, params, scheme, spec, report, ledger, show_intra):
    print(f"field GF({F.p}^{F.t}), modulus "
          + ",".join(str(c) for c in F.modulus))
    print(f"code n={gp.nbar * gp.u} k={params.k} u={gp.u} "
          f"nbar={gp.nbar} s={params.s}")
    print(f"partition {gp.family}, block constants "
          + " ".join(F.fmt(y) for y in gp.constants))
    extra = ""
    if scheme.kind == "gw_subfield":
        extra = f" delta={scheme.delta}"
    elif scheme.kind == "subspace":
        extra = f" sbar={scheme.sbar}"
    print(f"scheme {scheme.kind}{extra}")
    if spec.failures:
        for rack, nodes in sorted(spec.failures.items()):
            print(f"failed rack {rack}, nodes "
                  + ",".join(str(i) for i in sorted(nodes)))
    else:
        print("no failures")
    for line in report.describe():
        print(line)
    summary = measure(ledger)
    print(f"cross-rack bandwidth: {summary['cross']} sub-symbols")
    if show_intra:
        print(f"intra-rack (excluded from bandwidth): {summary['intra']} sub-symbols")


def _write_ledger(ledger, path, show_intra):
    lines = ledger.export(show_intra=show_intra)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


# -- subcommands

def cmd_run(args):
    with open(args.scenario, encoding="utf-8") as fh:
        sc = parse_scenario(fh.read())
    F, gp, params, scheme, spec, D, seed = build_scenario(sc)
    if args.seed is not None:
        seed = args.seed
    rng = random.Random(seed)
    f = random_poly(F, params.k, rng)
    cluster = build_cluster(params, gp, f)
    inject(cluster, spec)
    rplan = plan(spec, params, gp, scheme, D)
    ledger, report = run(cluster, rplan)
    _print_report(F, gp, params, scheme, spec, report, ledger, args.show_intra)
    if args.ledger:
        _write_ledger(ledger, args.ledger, args.show_intra)
    if not report.matches:
        print("MISMATCH: measured bandwidth differs from the analytic count")
        return EXIT_MISMATCH
    if spec.failures:
        print(f"restored {sum(spec.eps.values())} symbols, "
              f"verified against the original codeword")
    else:
        print("nothing to repair")
    return EXIT_OK


EXAMPLE1_SCENARIO = """\
field p=2 t=4 modulus=1,1,0,0,1
code n=16 k=7 u=4
goodpoly family=additive theta=1,0,1 reps=0,2,12,8
scheme kind=gw_subfield delta=2
failures rack=1 nodes=1,2,3
helpers racks=2,3,4
seed value=11
"""


def cmd_example1(args):
    sc = parse_scenario(EXAMPLE1_SCENARIO)
    F, gp, params, scheme, spec, D, seed = build_scenario(sc)
    if args.seed is not None:
        seed = args.seed
    f = random_poly(F, params.k, random.Random(seed))
    cluster = build_cluster(params, gp, f)
    inject(cluster, spec)
    rplan = plan(spec, params, gp, scheme, D)
    ledger, report = run(cluster, rplan)
    _print_report(F, gp, params, scheme, spec, report, ledger, args.show_intra)

    gamma = F.generator
    print("download table (2 bits per helper rack per coefficient):")
    ok = True
    for col in report.columns:
        cells = []
        for rec in col.downloads:
            terms = ", ".join(
                f"Tr({F.pow_str(m)}*e)={v}"
                for m, v in zip(rec.multipliers, rec.values))
            cells.append(f"rack {rec.rack}: {terms}")
        print(f"  t={col.t} column j={col.j}:  " + "  |  ".join(cells))
        got = {rec.rack: rec.multipliers for rec in col.downloads}
        ok = ok and got == {2: (1, gamma), 3: (F.pow(gamma, 10), F.pow(gamma, 11)),
                            4: (F.pow(gamma, 5), F.pow(gamma, 6))}
    total_ok = ledger.cross_total == 18 and report.matches
    print(f"cross-rack total: {ledger.cross_total} bits "
          f"(3 coefficients x 6 bits)")
    if args.ledger:
        _write_ledger(ledger, args.ledger, args.show_intra)
    if not (ok and total_ok):
        print("MISMATCH: download table or total differs from the expected values")
        return EXIT_MISMATCH
    return EXIT_OK


def _fmt_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cmd_table(args):
    with open(args.sweep, encoding="utf-8") as fh:
        text = fh.read()
    rows = []
    keys_seen = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] != "sweep":
            raise ValueError(f"line {lineno}: expected a sweep line")
        kv = {}
        for tok in toks[1:]:
            k, v = tok.split("=", 1)
            kv[k] = v
        formula = kv.pop("formula")
        grid = [("formula", [formula])]
        for k, v in kv.items():
            if k == "bs":
                alts = [[int(x) for x in alt.split("+")] for alt in v.split(",")]
            else:
                alts = [int(x) for x in v.split(",")]
            grid.append((k, alts))
            if k not in keys_seen:
                keys_seen.append(k)
        combos = [{}]
        for k, alts in grid:
            combos = [dict(c, **{k: a}) for c in combos for a in alts]
        for c in combos:
            kw = {k: v for k, v in c.items() if k != "formula"}
            c["bandwidth"] = predict(c["formula"], **kw)
            rows.append(c)
    header = ["formula"] + keys_seen + ["bandwidth"]
    lines = [",".join(header)]
    for row in rows:
        cells = [str(row["formula"])]
        for k in keys_seen:
            v = row.get(k, "")
            if isinstance(v, list):
                v = "+".join(str(x) for x in v)
            cells.append(str(v))
        cells.append(_fmt_rational(row["bandwidth"]))
        lines.append(",".join(cells))
    text_out = "\n".join(lines) + "\n"
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text_out)
    else:
        sys.stdout.write(text_out)
    return EXIT_OK


def _random_failures(rng, nbar, u, s):
    m = rng.randint(1, nbar - s)
    racks = rng.sample(range(1, nbar + 1), m)
    return FailureSpec({r: rng.sample(range(u), rng.randint(1, u))
                        for r in racks})


def cmd_verify(args):
    with open(args.scenario, encoding="utf-8") as fh:
        sc = parse_scenario(fh.read())
    F, gp, params, scheme, _spec, _D, seed = build_scenario(sc)
    if args.seed is not None:
        seed = args.seed
    if gp.nbar - params.s < 1:
        raise ValueError("code leaves no room for a failed rack")
    rng = random.Random(seed)
    trials = args.trials
    cols_ok = oracle_ok = acct_ok = 0
    for _ in range(trials):
        f = random_poly(F, params.k, rng)
        cluster = build_cluster(params, gp, f)

        # column words of the residue array must have degree < s
        rset = rack_residues(layout(f, gp, params))
        if all(column(rset, j).check_degree() for j in range(gp.u)):
            cols_ok += 1

        spec = _random_failures(rng, gp.nbar, gp.u, params.s)
        inject(cluster, spec)
        rplan = plan(spec, params, gp, scheme)
        ledger, report = run(cluster, rplan)

        flat = []
        for r in range(gp.nbar):
            for i in range(gp.u):
                dead = spec.failures.get(r + 1, frozenset())
                flat.append(ERASED if i in dead else cluster.racks[r][i].symbol)
        oracle = encode(erasure_decode(flat, params), params)
        want = Codeword(params, [cluster.racks[r][i].symbol
                                 for r in range(gp.nbar) for i in range(gp.u)])
        if oracle == want:
            oracle_ok += 1
        if ledger.cross_total == report.analytic_total and report.matches:
            acct_ok += 1
    print(f"verify: {trials} trials, scheme {scheme.kind}")
    print(f"  column-degree checks: {cols_ok}/{trials}")
    print(f"  oracle equivalence:   {oracle_ok}/{trials}")
    print(f"  accounting equality:  {acct_ok}/{trials}")
    if cols_ok == oracle_ok == acct_ok == trials:
        print("PASS")
        return EXIT_OK
    print("FAIL")
    return EXIT_MISMATCH


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="rackrs",
        description="rack-aware Reed-Solomon repair simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario file")
    p_run.add_argument("scenario")
    p_ex = sub.add_parser("example1", help="built-in 18-bit repair demo")
    p_tab = sub.add_parser("table", help="evaluate bandwidth formulas over grids")
    p_tab.add_argument("sweep")
    p_tab.add_argument("--csv", default=None)
    p_ver = sub.add_parser("verify", help="randomized property campaign")
    p_ver.add_argument("scenario")
    p_ver.add_argument("--trials", type=int, default=100)

    for p in (p_run, p_ex, p_ver):
        p.add_argument("--seed", type=int, default=None)
    for p in (p_run, p_ex):
        p.add_argument("--ledger", default=None)
        p.add_argument("--show-intra", action="store_true")

    args = ap.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "example1":
            return cmd_example1(args)
        if args.command == "table":
            return cmd_table(args)
        return cmd_verify(args)
    except RackRSError as e:
        if e.code == "INCONSISTENT":
            print(f"verification mismatch: {e}", file=sys.stderr)
            return EXIT_MISMATCH
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError, KeyError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
