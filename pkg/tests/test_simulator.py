"""Cluster state machine, failure injection, and the traffic ledger."""

import random

import pytest

from rackrs.errors import RackRSError
from rackrs.good_poly import make_additive
from rackrs.poly_ring import random_poly
from rackrs.rack_code import make_params
from rackrs.repair import FailureSpec, SchemeConfig, plan
from rackrs.rs_core import ERASED
from rackrs.simulator import (Cluster, Ledger, Message, Relayer,
                              build_cluster, inject, measure, run)


@pytest.fixture()
def world(F16):
    gp = make_additive(F16, (1, 0, 1), reps=(0, 2, 12, 8))
    params = make_params(F16, gp, 7)
    f = random_poly(F16, params.k, random.Random(11))
    return gp, params, f, build_cluster(params, gp, f)


def test_message_invariants():
    m = Message("step2-cross", 3, 1, 2)
    assert m.cross
    assert not Message("step1-intra", 2, 2, 16).cross
    with pytest.raises(ValueError):
        Message("step2-cross", 1, 2, 0)
    with pytest.raises(ValueError):
        Message("step1-intra", 1, 2, 4)


def test_relayer_stores_nothing():
    r = Relayer(3)
    assert r.rack == 3
    with pytest.raises(AttributeError):
        r.symbol = 5


def test_cluster_layout(world):
    gp, params, f, cluster = world
    assert len(cluster.racks) == 4 and all(len(r) == 4 for r in cluster.racks)
    for rack in cluster.racks:
        for node in rack:
            assert node.read() == f(node.point)
    assert cluster.failed_nodes() == []
    cluster.audit()


def test_inject_and_read(world):
    gp, params, f, cluster = world
    spec = FailureSpec({1: (1, 2, 3)})
    inject(cluster, spec)
    inject(cluster, spec)  # second injection changes nothing
    assert cluster.failed_nodes() == [(1, 1), (1, 2), (1, 3)]
    rows = cluster.rows()
    assert rows[0][1] is ERASED and rows[0][3] is ERASED
    assert rows[0][0] == f(gp.groups[0][0])
    cluster.audit()  # dead nodes are exempt from the audit


def test_inject_validates(world):
    gp, params, f, cluster = world
    with pytest.raises(ValueError):
        inject(cluster, FailureSpec({9: (0,)}))


def test_run_restores_and_accounts(world):
    gp, params, f, cluster = world
    spec = FailureSpec({1: (1, 2, 3)})
    inject(cluster, spec)
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    ledger, report = run(cluster, rplan)
    assert cluster.failed_nodes() == []
    for rack in cluster.racks:
        for node in rack:
            assert node.read() == f(node.point)
    assert ledger.cross_total == report.total == 18
    assert ledger.intra_total == 64
    assert measure(ledger) == {"cross": 18, "intra": 64,
                               "messages": len(ledger.messages)}


def test_run_refuses_stale_plan(world):
    gp, params, f, cluster = world
    spec = FailureSpec({1: (3,)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    inject(cluster, spec)
    run(cluster, rplan)
    # the cluster healed, so the same plan no longer covers reality
    with pytest.raises(RackRSError) as ei:
        run(cluster, rplan)
    assert ei.value.code == "INCONSISTENT"
    for rack in cluster.racks:
        for node in rack:
            assert node.read() == f(node.point)


def test_export_format_and_intra_toggle(world):
    gp, params, f, cluster = world
    spec = FailureSpec({1: (1, 2, 3)})
    inject(cluster, spec)
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    ledger, _ = run(cluster, rplan)

    full = ledger.export()
    assert full[-1] == f"summary,cross=18,intra=64,messages={len(ledger.messages)}"
    for line in full[:-1]:
        phase, src, dst, n = line.split(",")
        assert phase in ("step1-intra", "step2-cross", "step3-intra")
        assert int(n) > 0

    lean = ledger.export(show_intra=False)
    assert lean[-1] == full[-1]  # the toggle never touches totals
    assert all(l.startswith("step2-cross") for l in lean[:-1])
    assert [l for l in full if l.startswith("step2-cross")] == lean[:-1]
    assert sum(int(l.split(",")[3]) for l in lean[:-1]) == 18


def test_run_is_deterministic(F16):
    gp = make_additive(F16, (1, 0, 1), reps=(0, 2, 12, 8))
    params = make_params(F16, gp, 7)
    f = random_poly(F16, params.k, random.Random(23))
    spec = FailureSpec({2: (0, 2)})
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    exports = set()
    for _ in range(3):
        cluster = build_cluster(params, gp, f)
        inject(cluster, spec)
        ledger, _ = run(cluster, rplan)
        exports.add("\n".join(ledger.export()))
    assert len(exports) == 1


def test_tampered_node_fails_audit(world):
    gp, params, f, cluster = world
    cluster.racks[2][1].symbol ^= 5
    with pytest.raises(RackRSError) as ei:
        cluster.audit()
    assert ei.value.code == "INCONSISTENT"


def test_tampered_helper_poisons_run(world):
    gp, params, f, cluster = world
    spec = FailureSpec({1: (1, 2, 3)})
    inject(cluster, spec)
    cluster.racks[1][0].symbol ^= 3
    cluster._pristine = tuple(tuple(n.symbol for n in rack)
                              for rack in cluster.racks)  # hide the edit
    rplan = plan(spec, params, gp, SchemeConfig("gw_subfield", delta=2))
    with pytest.raises(RackRSError) as ei:
        run(cluster, rplan)
    assert ei.value.code == "INCONSISTENT"
    # the failed write landed nowhere
    assert cluster.failed_nodes() == [(1, 1), (1, 2), (1, 3)]


def test_empty_ledger_exports_summary_only():
    led = Ledger()
    assert led.export() == ["summary,cross=0,intra=0,messages=0"]
    assert measure(led) == {"cross": 0, "intra": 0, "messages": 0}
