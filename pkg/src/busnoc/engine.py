"""Deterministic cycle loop.

Each cycle advances in a fixed phase order:

  1. bus arbiter step and grant delivery
  2. request computation, deadlock presumption, BR / cancellation issuance
  3. crossbar arbitration (round-robin per output)
  4. flit movement collection against the phase-entry snapshot
     (PE consumption, bus ib->ob transfer, then channel crossings)
  5. simultaneous commit of all movements
  6. inactivity bookkeeping (lazy: last-crossing cycle per channel)
  7. packet generation and source-queue draining through the local port
  8. optional conservation audit

Movement decisions only read pre-phase state, so results are independent
of router iteration order; identical (config, seed) replays are
byte-identical. Control signals (BR/BG/cancel) take effect the cycle after
issuance via the phase ordering.
"""

from __future__ import annotations

import time
from collections import deque

from .bus import BusArbiter, BusDatapath, Consumed, PeReceiver
from .core import (
    Coord,
    Direction,
    Flit,
    FlitKind,
    MESH_DIRS,
    Recovery,
    Routing,
    SimConfig,
    index_to_coord,
    node_index,
)
from .metrics import MetricsAccumulator, Report
from .router import INPUT_SIDES, Router
from .routing import ROUTE_FUNCS, RouteRequest
from .traffic import maybe_inject, node_rng

LOCAL = Direction.LOCAL
BUS = Direction.BUS


class SimTimeout(RuntimeError):
    """Wall-clock cap exceeded before the run finished."""


class SimulationError(AssertionError):
    """An engine invariant failed; carries the cycle and offending entity."""


# Forbidden (travel-in, out) turns per algorithm, keyed by column parity
# where the rule depends on it.
def _turn_forbidden(routing, arrival: Direction, out: Direction, col: int) -> bool:
    N, E, S, W = Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST
    if arrival in (LOCAL, BUS):
        return False
    if routing is Routing.XY:
        return arrival in (N, S) and out in (E, W)
    if routing is Routing.WEST_FIRST:
        return out is W and arrival is not W
    if routing is Routing.ODD_EVEN:
        if arrival is E and out in (N, S) and col % 2 == 0:
            return True
        if arrival in (N, S) and out is W and col % 2 == 1:
            return True
    return False


class Simulation:
    """All mutable run state; advanced single-threaded by step()."""

    def __init__(self, cfg: SimConfig, *, log: bool = False, audit: bool = False):
        self.cfg = cfg
        self.cycle = 0
        n = cfg.num_nodes
        with_bus = cfg.recovery is Recovery.BUS
        self.coords = [index_to_coord(i, cfg) for i in range(n)]
        self.routers = [
            Router(self.coords[i], cfg.buffer_depth, with_bus) for i in range(n)
        ]
        # (neighbor index, receiving side) per node per mesh direction.
        self.links: list[dict[Direction, tuple[int, Direction]]] = []
        for i in range(n):
            m = {}
            for d in MESH_DIRS:
                nb = self.coords[i].step(d)
                if cfg.in_bounds(nb):
                    m[d] = (node_index(nb, cfg), d.opposite)
            self.links.append(m)
        self.arbiter = BusArbiter()
        self.datapath = BusDatapath()
        self.pes = [PeReceiver() for _ in range(n)]
        self.pe_staging: list[Flit | None] = [None] * n
        self.source_queues: list[deque] = [deque() for _ in range(n)]
        # Per-node serializer: (packet id, descriptor, next seq) while a
        # packet is being pushed into the local input FIFO.
        self.serializers: list[tuple | None] = [None] * n
        self.rngs = [node_rng(cfg.seed, i) for i in range(n)]
        window = cfg.sim_cycles - cfg.warmup_cycles
        self.metrics = MetricsAccumulator(cfg.warmup_cycles, window, n)
        self.next_packet_id = 0
        self.route_fn = ROUTE_FUNCS[cfg.routing]
        self.events: list[str] | None = [] if log else None
        self.audit = audit
        self.generated_flits = 0
        self.consumed_flits = 0
        self.forbidden_turns = 0
        # Wormhole continuity per (node, output dir): (packet id, next seq).
        self._link_expect: dict[tuple[int, Direction], tuple[int, int]] = {}
        self._requests: list[dict] = [dict() for _ in range(n)]

    # -- logging ---------------------------------------------------------

    def _log(self, entity: str, event: str, pid: int = -1, seq: int = -1) -> None:
        self.events.append(f"{self.cycle},{entity},{event},{pid},{seq}")

    # -- pre-seeding (scenario harness) ----------------------------------

    def new_packet_id(self) -> int:
        pid = self.next_packet_id
        self.next_packet_id += 1
        return pid

    def register_preseeded_packet(self, length: int) -> None:
        self.metrics.record_generated()
        self.generated_flits += length

    # -- phases ----------------------------------------------------------

    def _deliver_grants(self) -> None:
        """Pop queue heads until one is still eligible (or queue empties).

        A request whose message routed normally between BR and BG is treated
        as cancelled; the next head is considered the same cycle.
        """
        while self.arbiter.grant is None and self.arbiter.queue:
            ridx, side = self.arbiter.step()
            r = self.routers[ridx]
            ch = r.inputs[side]
            head = ch.fifo[0] if ch.fifo else None
            if (
                ch.reserved_output is None
                and head is not None
                and head.kind is FlitKind.HEADER
                and r.pending_bus_request == side
            ):
                ch.reserved_output = BUS
                r.outputs[BUS].reserved_by = side
                r.bus_granted_channel = side
                r.pending_bus_request = None
                r.presumed.pop(side, None)
                if self.events is not None:
                    self._log(f"r{ridx}", "bg", head.packet_id)
                return
            # Stale grant: the blocked header went away; release and retry.
            if r.pending_bus_request == side:
                r.pending_bus_request = None
            self.arbiter.release()

    def _phase_detect_and_requests(self) -> None:
        cfg = self.cfg
        threshold = cfg.threshold
        bus_on = cfg.recovery is Recovery.BUS
        for ridx, r in enumerate(self.routers):
            reqs = self._requests[ridx]
            if reqs:
                reqs.clear()
            if r.occupancy == 0 and not r.presumed:
                continue
            # False-detection bookkeeping: a presumed channel whose header
            # routed normally (or left) cancels its BR.
            if r.presumed:
                for side in list(r.presumed):
                    ch = r.inputs[side]
                    head = ch.fifo[0] if ch.fifo else None
                    if ch.reserved_output is BUS:
                        r.presumed.pop(side)
                        continue
                    if (
                        head is None
                        or head.packet_id != r.presumed[side]
                        or ch.reserved_output is not None
                    ):
                        r.presumed.pop(side)
                        self.metrics.cancellations += 1
                        if r.pending_bus_request == side:
                            r.pending_bus_request = None
                            self.arbiter.cancel(ridx)
                            if self.events is not None:
                                self._log(f"r{ridx}", "cancel")
                            self._deliver_grants()
            for ch in r.unrouted_headers():
                head = ch.fifo[0]
                if head.dst == r.coord:
                    reqs[ch.side] = (LOCAL,)
                    continue
                cands = self.route_fn(
                    RouteRequest(r.coord, head.dst, ch.arrival_dir)
                )
                reqs[ch.side] = cands
                # Presumption: every requested output reserved elsewhere and
                # idle past the threshold.
                blocked = all(
                    r.outputs[d].busy
                    and self.cycle - 1 - r.outputs[d].last_cross >= threshold
                    for d in cands
                )
                if blocked and r.presumed.get(ch.side) != head.packet_id:
                    r.presumed[ch.side] = head.packet_id
                    self.metrics.deadlocks_detected += 1
                    if self.events is not None:
                        self._log(f"r{ridx}", "detect", head.packet_id)
                if (
                    blocked
                    and bus_on
                    and r.pending_bus_request is None
                    and r.bus_granted_channel is None
                ):
                    r.pending_bus_request = ch.side
                    self.arbiter.request(ridx, ch.side)
                    if self.events is not None:
                        self._log(f"r{ridx}", "br", head.packet_id)

    def _phase_arbitrate(self) -> None:
        for ridx, r in enumerate(self.routers):
            reqs = self._requests[ridx]
            if not reqs:
                continue
            free = None
            if any(len(c) > 1 for c in reqs.values()):
                free = {}
                for d in MESH_DIRS:
                    link = self.links[ridx].get(d)
                    free[d] = (
                        self.routers[link[0]].inputs[link[1]].free_slots()
                        if link
                        else 0
                    )
            else:
                free = {}
            r.arbitrate(reqs, free)

    def _phase_move(self) -> None:
        cfg = self.cfg
        cycle = self.cycle
        n = cfg.num_nodes
        metrics = self.metrics
        log = self.events is not None

        # 4a: PE consumption against the snapshot of staging and bus OBs.
        for i in range(n):
            staged = self.pe_staging[i]
            obf = self.datapath.ob.get(i)
            if staged is None and obf is None:
                continue
            decision = self.pes[i].decide(staged, obf)
            if decision is Consumed.ROUTER:
                self.pe_staging[i] = None
                self.consumed_flits += 1
                if log:
                    self._log(f"pe{i}", "consume_router", staged.packet_id, staged.seq)
            elif decision is Consumed.BUS:
                del self.datapath.ob[i]
                self.consumed_flits += 1
                metrics.record_flit_ejected(cycle)
                if log:
                    self._log(f"pe{i}", "consume_bus", obf.packet_id, obf.seq)
                if obf.kind is FlitKind.TAIL:
                    metrics.record_delivery(
                        obf.src, obf.dst, obf.length, obf.created_cycle, cycle
                    )
                    metrics.bus_recoveries += 1

        # 4b: bus ib -> destination OB, stalling on an unconsumed OB.
        ibf = self.datapath.ib
        if ibf is not None:
            dstn = node_index(ibf.dst, cfg)
            if dstn not in self.datapath.ob:
                self.datapath.ob[dstn] = ibf
                self.datapath.ib = None
                if log:
                    self._log("bus", "ob", ibf.packet_id, ibf.seq)

        # 4c: channel crossings, decided against pre-commit buffer state.
        moves = []  # (router idx, input side, out dir, receiving (idx, side) or None)
        for ridx, r in enumerate(self.routers):
            if r.occupancy == 0:
                continue
            for ch in r.input_list:
                out = ch.reserved_output
                if out is None or not ch.fifo:
                    continue
                if out is LOCAL:
                    if self.pe_staging[ridx] is None:
                        moves.append((ridx, ch, out, None))
                elif out is BUS:
                    if self.datapath.ib is None:
                        moves.append((ridx, ch, out, None))
                else:
                    link = self.links[ridx][out]
                    if self.routers[link[0]].inputs[link[1]].free_slots() > 0:
                        moves.append((ridx, ch, out, link))

        # 5: commit.
        for ridx, ch, out, link in moves:
            r = self.routers[ridx]
            f = ch.fifo.popleft()
            r.occupancy -= 1
            port = r.outputs[out]
            port.last_cross = cycle
            self._check_link((ridx, out), f)
            if f.kind is FlitKind.HEADER and out in DELTAS_MESH:
                if _turn_forbidden(cfg.routing, ch.arrival_dir, out, r.coord.x):
                    self.forbidden_turns += 1
            if log:
                self._log(f"r{ridx}.{out.name}", "hop", f.packet_id, f.seq)
            if out is LOCAL:
                self.pe_staging[ridx] = f
                metrics.record_flit_ejected(cycle)
                if f.kind is FlitKind.TAIL:
                    metrics.record_delivery(
                        f.src, f.dst, f.length, f.created_cycle, cycle
                    )
                    r.release_output(out)
            elif out is BUS:
                self.datapath.ib = f
                if f.kind is FlitKind.TAIL:
                    r.release_output(out)
                    r.bus_granted_channel = None
                    self.arbiter.release()
                    # Recovery epoch: one escape per deadlock cycle. Flush
                    # outstanding BRs and restart every inactivity count so
                    # the remaining members only re-request after a fresh
                    # threshold interval, by which time the freed channels
                    # have let them route (and cancel) normally.
                    self.arbiter.queue.clear()
                    for rr in self.routers:
                        rr.pending_bus_request = None
                        for p in rr.outputs.values():
                            p.last_cross = cycle
                    if self.events is not None:
                        self._log(f"r{ridx}", "bus_release", f.packet_id)
            else:
                nb = self.routers[link[0]]
                nb.inputs[link[1]].accept_flit(f)
                nb.occupancy += 1
                if f.kind is FlitKind.TAIL:
                    r.release_output(out)

    def _check_link(self, key: tuple[int, Direction], f: Flit) -> None:
        expect = self._link_expect.get(key)
        if expect is None:
            if f.kind is not FlitKind.HEADER:
                raise SimulationError(
                    f"cycle {self.cycle}: link {key} saw {f.kind.name} "
                    f"seq {f.seq} with no message in progress"
                )
        else:
            pid, seq = expect
            if f.packet_id != pid or f.seq != seq:
                raise SimulationError(
                    f"cycle {self.cycle}: link {key} expected packet {pid} "
                    f"seq {seq}, saw packet {f.packet_id} seq {f.seq}"
                )
        if f.kind is FlitKind.TAIL:
            self._link_expect.pop(key, None)
        else:
            self._link_expect[key] = (f.packet_id, f.seq + 1)

    def _phase_inject(self) -> None:
        cfg = self.cfg
        cycle = self.cycle
        pir = cfg.pir
        log = self.events is not None
        for i, r in enumerate(self.routers):
            if pir > 0.0:
                desc = maybe_inject(self.coords[i], cfg, self.rngs[i], cycle)
                if desc is not None:
                    q = self.source_queues[i]
                    q.append((self.new_packet_id(), desc))
                    self.metrics.record_generated()
                    self.generated_flits += desc.length
                    if len(q) > cfg.saturation_queue_limit:
                        self.metrics.saturated = True
            st = self.serializers[i]
            if st is None:
                if not self.source_queues[i]:
                    continue
                if not r.injection_allowed(cfg.injection_limit):
                    continue
                if r.inputs[LOCAL].free_slots() == 0:
                    continue
                pid, desc = self.source_queues[i].popleft()
                st = (pid, desc, 0)
            else:
                if r.inputs[LOCAL].free_slots() == 0:
                    continue
            pid, desc, seq = st
            kind = (
                FlitKind.HEADER
                if seq == 0
                else FlitKind.TAIL
                if seq == desc.length - 1
                else FlitKind.BODY
            )
            f = Flit(kind, pid, desc.src, desc.dst, seq, desc.length,
                     desc.created_cycle)
            r.inputs[LOCAL].accept_flit(f)
            r.occupancy += 1
            if log:
                self._log(f"r{i}", "inject", pid, seq)
            self.serializers[i] = None if kind is FlitKind.TAIL else (
                pid, desc, seq + 1
            )

    def _phase_audit(self) -> None:
        in_network = 0
        for r in self.routers:
            for ch in r.inputs.values():
                in_network += len(ch.fifo)
        in_network += sum(1 for s in self.pe_staging if s is not None)
        if self.datapath.ib is not None:
            in_network += 1
        in_network += len(self.datapath.ob)
        for st in self.serializers:
            if st is not None:
                _, desc, seq = st
                in_network += desc.length - seq
        for q in self.source_queues:
            for _, desc in q:
                in_network += desc.length
        if self.generated_flits != self.consumed_flits + in_network:
            raise SimulationError(
                f"cycle {self.cycle}: flit conservation violated: "
                f"{self.generated_flits} generated != "
                f"{self.consumed_flits} consumed + {in_network} in network"
            )

    def step(self) -> None:
        if self.cfg.recovery is Recovery.BUS:
            self._deliver_grants()
        self._phase_detect_and_requests()
        self._phase_arbitrate()
        self._phase_move()
        self._phase_inject()
        if self.audit:
            self._phase_audit()
        self.cycle += 1

    def run(self, deadline_s: float | None = None) -> Report:
        start = time.monotonic()
        for _ in range(self.cfg.sim_cycles):
            if (
                deadline_s is not None
                and self.cycle % 1024 == 0
                and time.monotonic() - start > deadline_s
            ):
                raise SimTimeout(
                    f"wall clock cap of {deadline_s}s hit at cycle {self.cycle}"
                )
            self.step()
        return self.metrics.finalize()

    def idle(self) -> bool:
        """True when no flit or queued packet remains anywhere."""
        return self.generated_flits == self.consumed_flits


DELTAS_MESH = frozenset(MESH_DIRS)


def run(cfg: SimConfig, *, log: bool = False, audit: bool = False,
        deadline_s: float | None = None) -> Report:
    """Build a fresh simulation from cfg, step sim_cycles times, finalize."""
    sim = Simulation(cfg, log=log, audit=audit)
    return sim.run(deadline_s=deadline_s)
