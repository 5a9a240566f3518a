"""Rack-cluster state machine with a traffic ledger.

A cluster is nbar racks of u nodes, one symbol per node, plus one virtual
relayer per rack that stores nothing.  Failure injection flags nodes so
reads return ERASED; a repair run replays the three-step protocol as
messages and the ledger counts cross-rack sub-symbols only, since traffic
inside a rack is free.  Intra-rack messages are still recorded so reports
can show them, but they never enter the bandwidth total.
"""

from .errors import fail
from .rack_code import layout
from .repair import execute
from .rs_core import ERASED


class Message:
    """One transfer: src/dst are rack indices, 0 is the repair center."""

    __slots__ = ("phase", "src", "dst", "subsymbols")

    def __init__(self, phase, src, dst, subsymbols):
        if subsymbols <= 0:
            raise ValueError("payload must be positive")
        if phase.endswith("intra") and src != dst:
            raise ValueError("intra-rack message with distinct endpoints")
        self.phase = phase
        self.src = src
        self.dst = dst
        self.subsymbols = subsymbols

    @property
    def cross(self):
        return self.src != self.dst

    def __repr__(self):
        return f"Message({self.phase}, {self.src}->{self.dst}, {self.subsymbols})"


class Ledger:
    """Ordered message log; only src != dst counts toward bandwidth."""

    def __init__(self):
        self.messages = []

    def record(self, phase, src, dst, subsymbols):
        self.messages.append(Message(phase, src, dst, subsymbols))

    @property
    def cross_total(self):
        return sum(m.subsymbols for m in self.messages if m.cross)

    @property
    def intra_total(self):
        return sum(m.subsymbols for m in self.messages if not m.cross)

    def export(self, show_intra=True):
        """One `phase,src,dst,subsymbols` line per record, insertion
        order, then a summary line."""
        lines = []
        for m in self.messages:
            if not show_intra and not m.cross:
                continue
            lines.append(f"{m.phase},{m.src},{m.dst},{m.subsymbols}")
        lines.append(f"summary,cross={self.cross_total},"
                     f"intra={self.intra_total},messages={len(self.messages)}")
        return lines


class Relayer:
    """Per-rack aggregator; deliberately has nowhere to keep a symbol."""

    __slots__ = ("rack",)

    def __init__(self, rack):
        self.rack = rack


class Node:
    __slots__ = ("rack", "index", "point", "symbol", "alive")

    def __init__(self, rack, index, point, symbol):
        self.rack = rack
        self.index = index
        self.point = point
        self.symbol = symbol
        self.alive = True

    def read(self):
        return self.symbol if self.alive else ERASED


class Cluster:
    def __init__(self, params, gp, arr):
        self.params = params
        self.gp = gp
        self.racks = []
        for r in range(1, gp.nbar + 1):
            pts = gp.groups[r - 1]
            syms = arr.symbols[r - 1]
            self.racks.append([Node(r, i, pts[i], syms[i])
                               for i in range(gp.u)])
        self.relayers = tuple(Relayer(r) for r in range(1, gp.nbar + 1))
        self._pristine = tuple(tuple(row) for row in arr.symbols)

    def rows(self):
        """Visible symbols, ERASED at failed nodes."""
        return [[node.read() for node in rack] for rack in self.racks]

    def failed_nodes(self):
        return [(n.rack, n.index) for rack in self.racks for n in rack
                if not n.alive]

    def audit(self):
        """Every alive node must still hold its generating symbol."""
        for r, rack in enumerate(self.racks):
            for i, node in enumerate(rack):
                if node.alive and node.symbol != self._pristine[r][i]:
                    fail("INCONSISTENT",
                         f"node ({node.rack},{i}) drifted from the codeword")


def build_cluster(params, gp, f):
    return Cluster(params, gp, layout(f, gp, params))


def inject(cluster, spec):
    """Flag the spec's nodes as failed; idempotent."""
    spec.validate(cluster.params)
    for rack, nodes in spec.failures.items():
        for i in nodes:
            cluster.racks[rack - 1][i].alive = False


def run(cluster, rplan):
    """Replay the repair plan as messages; returns (ledger, report).

    All failed symbols are recomputed before any write lands, and every
    write is checked against the generating codeword, so the cluster is
    either fully restored or untouched.
    """
    ledger = Ledger()
    restored, report = execute(cluster.rows(), rplan, ledger.record)
    failed = set(cluster.failed_nodes())
    if set(restored) != failed:
        fail("INCONSISTENT",
             f"repair covered {sorted(restored)}, failures were {sorted(failed)}")
    for (r, i), v in restored.items():
        if v != cluster._pristine[r - 1][i]:
            fail("INCONSISTENT",
                 f"node ({r},{i}): repaired {v}, stored {cluster._pristine[r - 1][i]}")
    for (r, i), v in restored.items():
        node = cluster.racks[r - 1][i]
        node.symbol = v
        node.alive = True
    cluster.audit()
    if ledger.cross_total != report.total:
        fail("INCONSISTENT",
             f"ledger cross {ledger.cross_total} != report {report.total}")
    return ledger, report


def measure(ledger):
    """Bandwidth summary per the counting rule: cross only."""
    return {
        "cross": ledger.cross_total,
        "intra": ledger.intra_total,
        "messages": len(ledger.messages),
    }
