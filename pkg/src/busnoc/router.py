"""Per-node wormhole router: input FIFOs, crossbar reservations, round-robin
output arbitration, and the optional injection-limitation gate.

Input channels are keyed by the side of the router they sit on, so a flit
travelling East enters the receiving router's WEST channel. A channel's
reservation is held from the cycle its header wins arbitration until the
cycle its tail departs; body/tail flits never re-route.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .core import Coord, Direction, Flit, FlitKind, MESH_DIRS
from .routing import select_output

# Fixed iteration order for input sides; also the round-robin scan order.
INPUT_SIDES = (
    Direction.NORTH,
    Direction.EAST,
    Direction.SOUTH,
    Direction.WEST,
    Direction.LOCAL,
)


@dataclass(slots=True)
class InputChannel:
    side: Direction
    capacity: int
    fifo: deque = field(default_factory=deque)
    reserved_output: Direction | None = None

    @property
    def arrival_dir(self) -> Direction:
        """Direction of travel of flits entering on this side."""
        if self.side is Direction.LOCAL:
            return Direction.LOCAL
        return self.side.opposite

    def accept_flit(self, f: Flit) -> None:
        assert len(self.fifo) < self.capacity, (
            f"input FIFO overflow on side {self.side.name}"
        )
        self.fifo.append(f)

    @property
    def head(self) -> Flit | None:
        return self.fifo[0] if self.fifo else None

    def free_slots(self) -> int:
        return self.capacity - len(self.fifo)


@dataclass(slots=True)
class OutputPort:
    """One output physical channel. The inactivity count is kept in lazy
    form as the cycle a flit last crossed (-1 before any crossing); the
    value observed at the start of cycle c is c - 1 - last_cross, identical
    to a per-cycle ticked counter with reset-on-crossing."""

    dir: Direction
    reserved_by: Direction | None = None
    last_cross: int = -1

    @property
    def busy(self) -> bool:
        return self.reserved_by is not None

    def idle_cycles(self, cycle: int, saturation: int | None = None) -> int:
        v = cycle - 1 - self.last_cross
        if saturation is not None and v > saturation:
            return saturation
        return v


class Router:
    """State of one node's router; mutated only by the engine cycle loop."""

    def __init__(self, coord: Coord, buffer_depth: int, with_bus: bool) -> None:
        self.coord = coord
        self.inputs: dict[Direction, InputChannel] = {
            side: InputChannel(side, buffer_depth) for side in INPUT_SIDES
        }
        # Scan-order view of the channels; hot loops avoid the dict lookups.
        self.input_list = tuple(self.inputs[side] for side in INPUT_SIDES)
        out_dirs = list(MESH_DIRS) + [Direction.LOCAL]
        if with_bus:
            out_dirs.append(Direction.BUS)
        self.outputs: dict[Direction, OutputPort] = {
            d: OutputPort(d) for d in out_dirs
        }
        self._rr: dict[Direction, int] = {d: 0 for d in out_dirs}
        # Bus protocol state: channel with an outstanding BR, and the granted one.
        self.pending_bus_request: Direction | None = None
        self.bus_granted_channel: Direction | None = None
        # Channels presumed deadlocked, by packet id (false-detection accounting).
        self.presumed: dict[Direction, int] = {}
        # Total flits across input FIFOs; lets the engine skip idle routers.
        self.occupancy = 0

    def busy_mesh_outputs(self) -> int:
        return sum(1 for d in MESH_DIRS if self.outputs[d].busy)

    def injection_allowed(self, limit: int | None) -> bool:
        """Gate on new-message injection: halt when too many outputs are busy."""
        if limit is None:
            return True
        return self.busy_mesh_outputs() <= limit

    def unrouted_headers(self) -> list[InputChannel]:
        """Channels whose head flit is a header still awaiting a reservation."""
        out = []
        for ch in self.input_list:
            if ch.reserved_output is None and ch.fifo:
                f = ch.fifo[0]
                if f.kind is FlitKind.HEADER:
                    out.append(ch)
        return out

    def arbitrate(
        self,
        requests: Mapping[Direction, tuple[Direction, ...]],
        free_slots: Mapping[Direction, int],
    ) -> list[tuple[Direction, Direction]]:
        """Grant free outputs to requesting channels.

        requests maps input side -> full candidate set. Each requester first
        narrows to its non-busy candidates and picks one via select_output;
        per output, competing channels are resolved round-robin. Returns the
        committed (input side, output dir) grants.
        """
        wants: dict[Direction, list[Direction]] = {}
        for side in INPUT_SIDES:
            cands = requests.get(side)
            if not cands:
                continue
            avail = tuple(d for d in cands if not self.outputs[d].busy)
            if not avail:
                continue  # fully blocked; detection counters keep running
            if len(avail) == 1:
                choice = avail[0]
            else:
                choice = select_output(avail, free_slots)
            wants.setdefault(choice, []).append(side)
        grants: list[tuple[Direction, Direction]] = []
        for out_dir, sides in wants.items():
            port = self.outputs[out_dir]
            ptr = self._rr[out_dir]
            n = len(INPUT_SIDES)
            winner = None
            for i in range(n):
                side = INPUT_SIDES[(ptr + i) % n]
                if side in sides:
                    winner = side
                    self._rr[out_dir] = (INPUT_SIDES.index(side) + 1) % n
                    break
            assert winner is not None
            ch = self.inputs[winner]
            ch.reserved_output = out_dir
            port.reserved_by = winner
            grants.append((winner, out_dir))
        return grants

    def release_output(self, out_dir: Direction) -> None:
        """Tail departed: free the port and the channel reservation."""
        port = self.outputs[out_dir]
        assert port.reserved_by is not None
        self.inputs[port.reserved_by].reserved_output = None
        port.reserved_by = None
