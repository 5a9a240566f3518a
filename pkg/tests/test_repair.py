"""Column repair schemes, rack orchestration, and bandwidth accounting.

The GF(16) frozen numbers: failing 3 nodes of rack 1 under the subfield
trace scheme moves 18 bits across racks (6 per column), each helper
shipping 2 bits per column against the fixed multiplier sets {1,g},
{g^10,g^11}, {g^5,g^6}; plain interpolation would move 24.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rackrs.errors import RackRSError
from rackrs.field_tower import SubspaceDesc, build_field
from rackrs.good_poly import make_additive, make_composite
from rackrs.poly_ring import Poly, random_poly
from rackrs.rack_code import column, layout, make_params, rack_residues
from rackrs.repair import (FailureSpec, SchemeConfig, compute_Rt,
                           gw_subfield_repair, naive_repair, plan, predict,
                           repair_rack, subspace_repair)
from rackrs.rs_core import dual_multipliers


def err(code, fn, *a, **kw):
    with pytest.raises(RackRSError) as ei:
        fn(*a, **kw)
    assert ei.value.code == code


# -- failure bookkeeping

def test_failure_spec_counts():
    spec = FailureSpec({1: (0, 5), 5: (7,), 3: (1, 2, 4)})
    assert spec.m == 3
    assert spec.eps == {1: 2, 5: 1, 3: 3}
    assert spec.eps_max == 3


def test_failure_spec_rejects_empty_rack():
    with pytest.raises(ValueError):
        FailureSpec({2: ()})


def test_compute_Rt_nested():
    spec = FailureSpec({1: (0, 5), 5: (7,), 3: (1, 2, 4)})
    rt = dict(compute_Rt(spec))
    assert rt == {1: {1, 3, 5}, 2: {1, 3}, 3: {3}}
    assert rt[3] <= rt[2] <= rt[1]


def test_validate_bounds(F16):
    gp = make_additive(F16, (1, 0, 1))
    params = make_params(F16, gp, 7)  # nbar=4, s=2
    with pytest.raises(ValueError):
        FailureSpec({5: (0,)}).validate(params)
    with pytest.raises(ValueError):
        FailureSpec({1: (4,)}).validate(params)
    err("TOO_MANY_FAILED_RACKS",
        FailureSpec({1: (0,), 2: (0,), 3: (0,)}).validate, params)


def test_scheme_config_validation():
    with pytest.raises(ValueError):
        SchemeConfig("fancy")
    with pytest.raises(ValueError):
        SchemeConfig("gw_subfield")
    with pytest.raises(ValueError):
        SchemeConfig("subspace")
    assert SchemeConfig("naive").kind == "naive"


# -- the GF(16) three-node reference run

@pytest.fixture(scope="module")
def ex16(F16):
    gp = make_additive(F16, (1, 0, 1), reps=(0, 2, 12, 8))
    params = make_params(F16, gp, 7)
    f = random_poly(F16, params.k, random.Random(11))
    arr = layout(f, gp, params)
    return gp, params, f, arr


MULTS = {2: {1, 2}, 3: {7, 14}, 4: {6, 12}}


def test_reference_plan_shape(F16, ex16):
    gp, params, f, arr = ex16
    spec = FailureSpec({1: (1, 2, 3)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    assert [c.t for c in rplan.columns] == [1, 2, 3]
    assert [c.j for c in rplan.columns] == [3, 2, 1]
    assert all(c.kind == "gw_subfield" and not c.baseline for c in rplan.columns)
    assert all(c.i_star == 1 and not c.excluded for c in rplan.columns)
    assert rplan.D == (2, 3, 4)


def test_reference_run_moves_18_bits(F16, ex16):
    gp, params, f, arr = ex16
    spec = FailureSpec({1: (1, 2, 3)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    restored, report = repair_rack(arr, spec, rplan)
    assert report.total == 18
    assert report.matches and report.analytic_total == 18
    assert report.sym_equiv == Fraction(9, 2)
    assert report.per_t == {1: 6, 2: 6, 3: 6}
    for i in (1, 2, 3):
        assert restored[(1, i)] == f(gp.groups[0][i])


def test_reference_downloads_are_the_fixed_traces(F16, ex16):
    """Each helper ships exactly the traces of nu*mult*e for its two
    multipliers, identical multiplier sets across all three columns."""
    gp, params, f, arr = ex16
    spec = FailureSpec({1: (1, 2, 3)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    _, report = repair_rack(arr, spec, rplan)
    nu = dual_multipliers(F16, gp.constants)
    rset = rack_residues(arr)
    for col in report.columns:
        assert [rec.rack for rec in col.downloads] == [2, 3, 4]
        for rec in col.downloads:
            assert set(rec.multipliers) == MULTS[rec.rack]
            e = rset.e[rec.rack - 1][col.j]
            want = tuple(
                F16.subfield_trace(F16.mul(b, F16.mul(nu[rec.rack - 1], e)), 1)
                for b in rec.multipliers)
            assert rec.values == want
            assert len(rec.values) == 2  # t/delta


def test_reference_naive_costs_24(F16, ex16):
    gp, params, f, arr = ex16
    spec = FailureSpec({1: (1, 2, 3)})
    rplan = plan(spec, params, gp, SchemeConfig("naive"))
    restored, report = repair_rack(arr, spec, rplan)
    assert report.total == 24
    assert all(c.baseline for c in report.columns)
    for i in (1, 2, 3):
        assert restored[(1, i)] == f(gp.groups[0][i])


def test_reference_message_ledger(F16, ex16):
    gp, params, f, arr = ex16
    spec = FailureSpec({1: (1, 2, 3)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    msgs = []
    repair_rack(arr, spec, rplan, recorder=lambda *a: msgs.append(a))
    cross = [m for m in msgs if m[0] == "step2-cross"]
    intra = [m for m in msgs if m[0] != "step2-cross"]
    assert sum(m[3] for m in cross) == 18
    assert all(m[2] == 1 for m in cross)  # single failed rack is the center
    assert sum(m[3] for m in intra) == 64  # 3*16 reads + 4 + 12 writeback
    assert all(m[1] == m[2] for m in intra)


def test_whole_rack_loss(F16, ex16):
    gp, params, f, arr = ex16
    spec = FailureSpec({1: (0, 1, 2, 3)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    restored, report = repair_rack(arr, spec, rplan)
    assert report.total == 24  # 4 columns, 6 bits each
    for i in range(4):
        assert restored[(1, i)] == f(gp.groups[0][i])


def test_equal_losses_cost_the_same(F16, ex16):
    """Bandwidth depends on how many nodes fail, not which or where."""
    gp, params, f, arr = ex16
    scheme = SchemeConfig("gw_subfield", delta=2)
    totals = set()
    for spec in (FailureSpec({2: (0, 1)}), FailureSpec({3: (2, 3)}),
                 FailureSpec({4: (0, 3)}), FailureSpec({1: (1, 2)})):
        rplan = plan(spec, params, gp, scheme)
        _, report = repair_rack(arr, spec, rplan)
        totals.add(report.total)
    assert len(totals) == 1


def test_custom_bases_still_exact(F16, ex16):
    gp, params, f, arr = ex16
    rset = rack_residues(arr)
    word = column(rset, 2)
    base, recs = gw_subfield_repair(word, 1, 2)
    value, recs2 = gw_subfield_repair(word, 1, 2, eta=(3, 5), beta=(1, 6))
    assert value == base == rset.e[0][2]
    assert all(len(r.values) <= 2 for r in recs2)


def test_repeated_runs_identical(F16, ex16):
    gp, params, f, arr = ex16
    spec = FailureSpec({1: (1, 2, 3)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    a = repair_rack(arr, spec, rplan)
    b = repair_rack(arr, spec, rplan)
    assert a[0] == b[0]
    assert [c.measured for c in a[1].columns] == [c.measured for c in b[1].columns]
    for ca, cb in zip(a[1].columns, b[1].columns):
        assert [(r.rack, r.values, r.multipliers) for r in ca.downloads] == \
               [(r.rack, r.values, r.multipliers) for r in cb.downloads]


# -- two failed racks on GF(64)

@pytest.fixture(scope="module")
def ex64(F64):
    gp = make_additive(F64, (1, 0, 0, 1))  # u=8, nbar=8
    params = make_params(F64, gp, 10)      # s=2
    f = random_poly(F64, params.k, random.Random(7))
    arr = layout(f, gp, params)
    return gp, params, f, arr


def test_two_rack_plan_and_run(F64, ex64):
    gp, params, f, arr = ex64
    spec = FailureSpec({1: (0, 5), 5: (7,)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=3))
    kinds = [(c.t, c.kind, c.baseline) for c in rplan.columns]
    assert kinds == [(1, "naive", True), (2, "gw_subfield", False)]
    assert rplan.columns[1].i_star == 1
    assert rplan.columns[1].excluded == frozenset({5})

    msgs = []
    restored, report = repair_rack(arr, spec, rplan,
                                   recorder=lambda *a: msgs.append(a))
    assert [c.measured for c in report.columns] == [12, 12]
    assert report.matches
    # excluded rack contributes nothing to the trace column
    trace_col = report.columns[1]
    assert all(rec.rack != 5 for rec in trace_col.downloads)
    # several failed racks: everything flows to the repair center 0
    assert all(m[2] == 0 for m in msgs if m[0] == "step2-cross")
    for (r, i), v in restored.items():
        assert v == f(gp.groups[r - 1][i])
    assert set(restored) == {(1, 0), (1, 5), (5, 7)}


def test_degree_bound_falls_back_to_baseline(F16, ex16):
    """Two failed racks on nbar=4 leave no room for the exclusion factor."""
    gp, params, f, arr = ex16
    spec = FailureSpec({1: (2, 3), 2: (3,)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    assert [c.kind for c in rplan.columns] == ["naive", "naive"]
    assert all(c.baseline for c in rplan.columns)
    restored, report = repair_rack(arr, spec, rplan)
    for (r, i), v in restored.items():
        assert v == f(gp.groups[r - 1][i])
    assert report.total == 2 * params.s * F16.t  # s*t per baseline column


# -- subspace scheme

def test_subspace_sweep_meets_bound_exactly(F64):
    gp = make_additive(F64, (1, 0, 0, 1))
    params = make_params(F64, gp, 16)  # s=2, so q^sbar <= 6 admits sbar <= 2
    f = random_poly(F64, params.k, random.Random(3))
    arr = layout(f, gp, params)
    spec = FailureSpec({2: (0, 7)})
    for sbar in (0, 1, 2):
        rplan = plan(spec, params, gp, SchemeConfig("subspace", sbar=sbar))
        restored, report = repair_rack(arr, spec, rplan)
        bound = predict("cor2", eps=2, nbar=params.nbar, t=F64.t, sbar=sbar)
        assert report.total == bound == 2 * 7 * (6 - sbar)
        for (r, i), v in restored.items():
            assert v == f(gp.groups[r - 1][i])


def test_subspace_sbar0_download_at_most_t(F64):
    gp = make_additive(F64, (1, 0, 0, 1))
    params = make_params(F64, gp, 16)
    f = random_poly(F64, params.k, random.Random(5))
    word = column(rack_residues(layout(f, gp, params)), 7)
    value, recs = subspace_repair(word, 3, 0)
    assert value == word.values[2]
    assert all(len(r.values) <= F64.t for r in recs)


def test_subspace_custom_subspace_and_errors(F64):
    gp = make_additive(F64, (1, 0, 0, 1))
    params = make_params(F64, gp, 16)
    f = random_poly(F64, params.k, random.Random(9))
    word = column(rack_residues(layout(f, gp, params)), 6)
    U = SubspaceDesc(F64, (F64.pow(F64.generator, 3),), 1)
    value, _ = subspace_repair(word, 1, 1, ubar=U)
    assert value == word.values[0]
    with pytest.raises(ValueError):
        subspace_repair(word, 1, 2, ubar=U)  # cardinality 2 != 4
    err("BASIS_DEGENERATE", subspace_repair, word, 1, 1,
        beta=(0,) + F64.power_basis(1)[1:])


def test_composite_blocks_use_subspace_only(F64):
    gp = make_composite(F64, (1, 1), 3, 2)  # u=12, nbar=5
    params = make_params(F64, gp, 13)       # s=2
    f = random_poly(F64, params.k, random.Random(2))
    arr = layout(f, gp, params)
    spec = FailureSpec({2: (0, 11)})
    err("PRECONDITION_FAILED", plan, spec, params, gp,
        SchemeConfig("gw_subfield", delta=2))
    rplan = plan(spec, params, gp, SchemeConfig("subspace", sbar=1))
    restored, report = repair_rack(arr, spec, rplan)
    assert report.total == 40  # eps*(nbar-1)*(t-sbar) met exactly here
    for (r, i), v in restored.items():
        assert v == f(gp.groups[r - 1][i])


def test_small_field_trace_degenerates_to_naive(F9):
    gp = make_additive(F9, (1, 1))  # u=3, nbar=3
    params = make_params(F9, gp, 4)  # s=2, room nbar-s=1 forces delta=1
    f = random_poly(F9, params.k, random.Random(1))
    arr = layout(f, gp, params)
    spec = FailureSpec({1: (2,)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=1))
    restored, report = repair_rack(arr, spec, rplan)
    assert report.total == 4 == params.s * F9.t
    assert restored[(1, 2)] == f(gp.groups[0][2])


# -- naive scheme and helper-set handling

def test_naive_with_chosen_helpers(F64, ex64):
    gp, params, f, arr = ex64
    spec = FailureSpec({3: (1, 4)})
    rplan = plan(spec, params, gp, SchemeConfig("naive"), D=(7, 2))
    restored, report = repair_rack(arr, spec, rplan)
    assert report.total == 2 * params.s * F64.t
    racks = {rec.rack for c in report.columns for rec in c.downloads}
    assert racks <= {2, 7}
    for (r, i), v in restored.items():
        assert v == f(gp.groups[r - 1][i])


def test_helper_set_errors(F64, ex64):
    gp, params, f, arr = ex64
    spec = FailureSpec({3: (1, 4)})
    err("INSUFFICIENT_HELPERS", plan, spec, params, gp,
        SchemeConfig("naive"), D=(7,))
    err("INSUFFICIENT_HELPERS", plan, spec, params, gp,
        SchemeConfig("naive"), D=(3, 7))
    err("INSUFFICIENT_HELPERS", plan, spec, params, gp,
        SchemeConfig("naive"), D=(2, 99))
    err("INSUFFICIENT_HELPERS", plan, spec, params, gp,
        SchemeConfig("gw_subfield", delta=3), D=(2, 4, 6))


def test_naive_repair_direct(F16, ex16):
    gp, params, f, arr = ex16
    word = column(rack_residues(arr), 1)
    out, recs = naive_repair(word, (2,), (1, 3, 4))
    assert out[2] == word.values[1]
    assert [rec.rack for rec in recs] == [1, 3]
    assert all(len(rec.values) == F16.t for rec in recs)
    err("PRECONDITION_FAILED", naive_repair, word, (2,), (2, 3))
    err("INSUFFICIENT_HELPERS", naive_repair, word, (2,), (3,))


# -- scheme preconditions

def test_gw_error_paths(F16, F64, ex16):
    gp, params, f, arr = ex16
    word = column(rack_residues(arr), 2)
    err("BAD_SUBFIELD", gw_subfield_repair, word, 1, 3)  # 3 nmid 4
    err("PRECONDITION_FAILED", gw_subfield_repair, word, 1, 4)  # q^3 > 2
    err("BASIS_DEGENERATE", gw_subfield_repair, word, 1, 2, beta=(0, 1))
    err("BAD_SUBFIELD", plan, FailureSpec({1: (3,)}), params, gp,
        SchemeConfig("gw_subfield", delta=3))


def test_points_outside_subfield_rejected(F64):
    gp = make_additive(F64, (1, 0, 0, 1))
    params = make_params(F64, gp, 10)
    f = random_poly(F64, params.k, random.Random(4))
    word = column(rack_residues(layout(f, gp, params)), 7)
    # constants live in the cubic subfield, not the quadratic one
    err("PRECONDITION_FAILED", gw_subfield_repair, word, 1, 2)
    value, _ = gw_subfield_repair(word, 1, 3)
    assert value == word.values[0]


def test_execute_requires_full_helper_rows(F16, ex16):
    gp, params, f, arr = ex16
    spec = FailureSpec({1: (1, 2, 3)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    masked = [list(r) for r in arr.symbols]
    for i in (1, 2, 3):
        masked[0][i] = None
    masked[2][0] = None  # helper rack 3 loses a symbol
    with pytest.raises(ValueError):
        from rackrs.repair import execute
        execute(masked, rplan)


# -- closed-form calculators

def test_predict_reference_values():
    assert predict("cor1", eps=3, bprime=6) == 18
    assert predict("cor2", eps=2, nbar=8, t=6, sbar=1) == 70
    assert predict("cor3", eps=2, dbar=10, t=30, kprime=5) == 100
    assert predict("thm2", bs=(12, 12)) == 24
    got = predict("two_rack", eps1=1, eps2=2, dbar=10, t=30, kprime=5)
    assert got == Fraction(950, 7)
    assert isinstance(got, Fraction)


def test_predict_rejects_bad_inputs():
    with pytest.raises(ValueError):
        predict("cor3", eps=1, dbar=4, t=6, kprime=9)
    with pytest.raises(ValueError):
        predict("two_rack", eps1=1, eps2=2, dbar=4, t=6, kprime=9)
    with pytest.raises(ValueError):
        predict("nope")


# -- randomized end-to-end

@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_random_failures_restore_exactly(F16, data):
    gp = make_additive(F16, (1, 0, 1), reps=(0, 2, 12, 8))
    params = make_params(F16, gp, 7)
    coeffs = data.draw(st.lists(st.integers(0, 15), min_size=1,
                                max_size=params.k))
    f = Poly(F16, coeffs)
    arr = layout(f, gp, params)
    rack = data.draw(st.integers(1, 4))
    eps = data.draw(st.integers(1, 4))
    nodes = data.draw(st.permutations(range(4)))[:eps]
    spec = FailureSpec({rack: nodes})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    restored, report = repair_rack(arr, spec, rplan)
    assert report.matches
    assert report.total == 6 * eps
    for (r, i), v in restored.items():
        assert v == f(gp.groups[r - 1][i])
