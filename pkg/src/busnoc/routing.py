"""Routing functions: each maps (current, destination, arrival) to admissible
minimal output directions, plus the congestion-aware selection policy.

All four algorithms are minimal: every returned direction strictly reduces
Manhattan distance. arrival_dir is the incoming flit's direction of travel
(LOCAL for freshly injected headers); the odd-even rules use it to identify
the turn being taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .core import Coord, Direction, Routing

N, E, S, W = Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST


class UnreachableRoutingState(RuntimeError):
    """A (cur, dst, arrival) combination the algorithm can never produce."""


@dataclass(frozen=True, slots=True)
class RouteRequest:
    cur: Coord
    dst: Coord
    arrival_dir: Direction = Direction.LOCAL


def _vertical(ey: int) -> Direction:
    return N if ey > 0 else S


def route_xy(r: RouteRequest) -> tuple[Direction, ...]:
    """Dimension-order: resolve x fully, then y."""
    ex = r.dst.x - r.cur.x
    if ex > 0:
        return (E,)
    if ex < 0:
        return (W,)
    return (_vertical(r.dst.y - r.cur.y),)


def route_west_first(r: RouteRequest) -> tuple[Direction, ...]:
    """West hops, when needed, come first and exclusively; otherwise fully
    adaptive among the productive non-west directions."""
    ex = r.dst.x - r.cur.x
    ey = r.dst.y - r.cur.y
    if ex < 0:
        return (W,)
    cands = []
    if ey:
        cands.append(_vertical(ey))
    if ex > 0:
        cands.append(E)
    return tuple(cands)


def route_odd_even(r: RouteRequest) -> tuple[Direction, ...]:
    """Odd-even turn model (column parity = x): EN/ES turns forbidden at even
    columns, NW/SW turns forbidden at odd columns.

    Beyond per-hop turn filtering, two look-ahead restrictions keep the
    candidate set non-empty downstream: eastbound traffic may not enter an
    even destination column while rows still differ, and westbound traffic
    defers vertical moves to even columns (a vertical move at an odd column
    would later need a NW/SW turn there).
    """
    ex = r.dst.x - r.cur.x
    ey = r.dst.y - r.cur.y
    even_col = r.cur.x % 2 == 0
    arr = r.arrival_dir
    if ex > 0:
        if ey == 0:
            return (E,)
        cands = []
        if not (arr is E and even_col):
            cands.append(_vertical(ey))
        if r.dst.x % 2 == 1 or ex != 1:
            cands.append(E)
        if not cands:
            raise UnreachableRoutingState(f"odd-even dead end at {r}")
        return tuple(cands)
    if ex < 0:
        cands = []
        if ey and even_col:
            cands.append(_vertical(ey))
        if arr in (N, S) and not even_col:
            # NW/SW turn forbidden here; vertical-at-odd is never produced,
            # so W must remain available.
            raise UnreachableRoutingState(f"odd-even dead end at {r}")
        cands.append(W)
        return tuple(cands)
    # Same column: only WN/WS or straight vertical moves remain, both legal
    # everywhere; an E arrival at an even column would be a forbidden turn.
    if arr is E and even_col:
        raise UnreachableRoutingState(f"odd-even dead end at {r}")
    return (_vertical(ey),)


def route_tfar(r: RouteRequest) -> tuple[Direction, ...]:
    """True fully adaptive: every minimal productive direction, no turn rules."""
    ex = r.dst.x - r.cur.x
    ey = r.dst.y - r.cur.y
    cands = []
    if ey:
        cands.append(_vertical(ey))
    if ex > 0:
        cands.append(E)
    elif ex < 0:
        cands.append(W)
    return tuple(cands)


ROUTE_FUNCS: Mapping[Routing, Callable[[RouteRequest], tuple[Direction, ...]]] = {
    Routing.XY: route_xy,
    Routing.WEST_FIRST: route_west_first,
    Routing.ODD_EVEN: route_odd_even,
    Routing.TFAR: route_tfar,
}

# Tie-break order for select_output.
_TIE_ORDER = (N, E, S, W)


def select_output(
    cands: Sequence[Direction], free_slots: Mapping[Direction, int]
) -> Direction:
    """Pick the candidate whose downstream buffer has the most free slots;
    ties break N < E < S < W. Deterministic given identical state."""
    assert cands, "select_output requires a non-empty candidate set"
    best = None
    best_key = None
    for d in _TIE_ORDER:
        if d in cands:
            key = free_slots[d]
            if best_key is None or key > best_key:
                best, best_key = d, key
    assert best is not None
    return best
