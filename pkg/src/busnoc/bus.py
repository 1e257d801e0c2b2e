"""Global recovery bus: FIFO request arbiter with grant/cancel signalling,
the one-flit bus input buffer, per-node one-flit output buffers, and the
PE-side consumption state machine with bus-over-router priority.

Only one message uses the bus at a time; a granted router holds the grant
until it places the message's tail flit on the bus.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum

from .core import Direction, Flit, FlitKind

# (router index, input channel side) identifies one blocked message.
Request = tuple[int, Direction]


class BusArbiter:
    def __init__(self) -> None:
        self.queue: deque[Request] = deque()
        self.grant: Request | None = None

    def request(self, router: int, side: Direction) -> None:
        """Append a BR; duplicate requests from the same router are ignored."""
        if self.grant is not None and self.grant[0] == router:
            return
        if any(r == router for r, _ in self.queue):
            return
        self.queue.append((router, side))

    def cancel(self, router: int) -> bool:
        """Remove a queued BR; no-op if absent. Returns True if the head
        entry was removed (the next head may be granted this cycle)."""
        for i, (r, _) in enumerate(self.queue):
            if r == router:
                del self.queue[i]
                return i == 0
        return False

    def step(self) -> Request | None:
        """If the bus is free, grant the request at the head of the queue."""
        if self.grant is None and self.queue:
            self.grant = self.queue.popleft()
            return self.grant
        return None

    def release(self) -> None:
        self.grant = None


@dataclass(slots=True)
class BusDatapath:
    """One-flit input buffer fed by the granted router; one-flit output
    buffer per node. A flit written to ib appears at the destination's ob
    the following cycle; the transfer stalls while that ob is unconsumed."""

    ib: Flit | None = None
    ob: dict = field(default_factory=dict)  # node index -> Flit

    def ob_flit(self, node: int) -> Flit | None:
        return self.ob.get(node)


class PeSource(IntEnum):
    IDLE = 0
    FROM_ROUTER = 1
    FROM_BUS = 2


class Consumed(IntEnum):
    NONE = 0
    ROUTER = 1
    BUS = 2


@dataclass(slots=True)
class PeReceiver:
    """Consumes one flit per cycle, preferring the bus when both a bus
    header and a router header are pending; mid-message streams are never
    interleaved, the latecomer waits for the tail."""

    source: PeSource = PeSource.IDLE
    _expect: tuple[int, int] | None = None  # (packet_id, next seq) on bus path

    def decide(self, router_flit: Flit | None, bus_flit: Flit | None) -> Consumed:
        if self.source is PeSource.FROM_BUS:
            if bus_flit is None:
                return Consumed.NONE
            pid, seq = self._expect
            assert bus_flit.packet_id == pid and bus_flit.seq == seq, (
                "bus flit stream out of order"
            )
            if bus_flit.kind is FlitKind.TAIL:
                self.source = PeSource.IDLE
                self._expect = None
            else:
                self._expect = (pid, seq + 1)
            return Consumed.BUS
        if self.source is PeSource.FROM_ROUTER:
            if router_flit is None:
                return Consumed.NONE
            if router_flit.kind is FlitKind.TAIL:
                self.source = PeSource.IDLE
            return Consumed.ROUTER
        # Idle: simultaneous headers resolve in favour of the bus.
        if bus_flit is not None:
            assert bus_flit.kind is FlitKind.HEADER, "bus stream must start with a header"
            self.source = PeSource.FROM_BUS
            self._expect = (bus_flit.packet_id, 1)
            return Consumed.BUS
        if router_flit is not None:
            assert router_flit.kind is FlitKind.HEADER, (
                "router ejection stream must start with a header"
            )
            self.source = PeSource.FROM_ROUTER
            return Consumed.ROUTER
        return Consumed.NONE
