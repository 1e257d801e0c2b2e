"""Shared domain types: coordinates, directions, flits, and run configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum


class Direction(IntEnum):
    """Router ports. BUS is a crossbar output only when bus recovery is on."""

    NORTH = 0
    EAST = 1
    SOUTH = 2
    WEST = 3
    LOCAL = 4
    BUS = 5

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITE[self]


_OPPOSITE = {
    Direction.NORTH: Direction.SOUTH,
    Direction.SOUTH: Direction.NORTH,
    Direction.EAST: Direction.WEST,
    Direction.WEST: Direction.EAST,
    Direction.LOCAL: Direction.LOCAL,
    Direction.BUS: Direction.BUS,
}

# (dx, dy) per direction of travel; NORTH is +y.
DELTAS = {
    Direction.NORTH: (0, 1),
    Direction.EAST: (1, 0),
    Direction.SOUTH: (0, -1),
    Direction.WEST: (-1, 0),
}

MESH_DIRS = (Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST)


@dataclass(frozen=True, slots=True)
class Coord:
    x: int
    y: int

    def step(self, d: Direction) -> "Coord":
        dx, dy = DELTAS[d]
        return Coord(self.x + dx, self.y + dy)


class FlitKind(IntEnum):
    HEADER = 0
    BODY = 1
    TAIL = 2


@dataclass(frozen=True, slots=True)
class Flit:
    """Atomic transfer unit; one flit crosses a physical channel per cycle."""

    kind: FlitKind
    packet_id: int
    src: Coord
    dst: Coord
    seq: int
    length: int
    created_cycle: int

    def __post_init__(self) -> None:
        if (self.seq == 0) != (self.kind is FlitKind.HEADER):
            raise ValueError("seq 0 must be the header and vice versa")
        if (self.seq == self.length - 1) != (self.kind is FlitKind.TAIL):
            raise ValueError("last seq must be the tail and vice versa")
        if self.src == self.dst:
            raise ValueError("self-addressed flits are never generated")


class Routing(IntEnum):
    XY = 0
    WEST_FIRST = 1
    ODD_EVEN = 2
    TFAR = 3


class Recovery(IntEnum):
    NONE = 0
    BUS = 1


class Traffic(IntEnum):
    UNIFORM = 0
    TRANSPOSE1 = 1
    BIT_REVERSAL = 2
    BUTTERFLY = 3


class ConfigError(ValueError):
    """A SimConfig field combination violates a documented constraint."""


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class SimConfig:
    """Immutable simulation parameters; safe to share across runs.

    threshold_log2 stores k with detection threshold T = 2**k, so the
    flag test is a single-bit check by construction.
    """

    mesh_x: int = 4
    mesh_y: int = 4
    routing: Routing = Routing.XY
    recovery: Recovery = Recovery.NONE
    threshold_log2: int = 5
    traffic: Traffic = Traffic.UNIFORM
    pir: float = 0.01
    len_min: int = 4
    len_max: int = 10
    buffer_depth: int = 4
    injection_limit: int | None = None
    warmup_cycles: int = 0
    sim_cycles: int = 10_000
    seed: int = 0
    saturation_queue_limit: int = 10_000

    def __post_init__(self) -> None:
        if self.mesh_x < 1 or self.mesh_y < 1:
            raise ConfigError("mesh_x and mesh_y must be positive")
        if self.threshold_log2 < 1:
            raise ConfigError("threshold_log2 must be >= 1")
        if not (0.0 <= self.pir <= 1.0):
            raise ConfigError("pir must lie in [0, 1]")
        if not (2 <= self.len_min <= self.len_max):
            raise ConfigError("need 2 <= len_min <= len_max")
        if self.buffer_depth < 1:
            raise ConfigError("buffer_depth must be >= 1")
        if self.injection_limit is not None and self.injection_limit < 0:
            raise ConfigError("injection_limit must be >= 0 when set")
        if self.warmup_cycles < 0 or self.sim_cycles < 0:
            raise ConfigError("cycle counts must be non-negative")
        if self.warmup_cycles > self.sim_cycles:
            raise ConfigError("warmup_cycles must not exceed sim_cycles")
        if self.saturation_queue_limit < 1:
            raise ConfigError("saturation_queue_limit must be >= 1")
        if self.traffic is Traffic.TRANSPOSE1 and self.mesh_x != self.mesh_y:
            raise ConfigError("transpose1 traffic requires a square mesh")
        if self.traffic in (Traffic.BIT_REVERSAL, Traffic.BUTTERFLY):
            if not _is_pow2(self.mesh_x * self.mesh_y):
                raise ConfigError(
                    f"{self.traffic.name.lower()} traffic requires a "
                    "power-of-two node count"
                )

    @property
    def num_nodes(self) -> int:
        return self.mesh_x * self.mesh_y

    @property
    def threshold(self) -> int:
        return 1 << self.threshold_log2

    def in_bounds(self, c: Coord) -> bool:
        return 0 <= c.x < self.mesh_x and 0 <= c.y < self.mesh_y


def node_index(c: Coord, cfg: SimConfig) -> int:
    """Row-major flattening with x as the low digit."""
    if not cfg.in_bounds(c):
        raise ConfigError(f"coordinate {c} outside {cfg.mesh_x}x{cfg.mesh_y} mesh")
    return c.y * cfg.mesh_x + c.x


def index_to_coord(i: int, cfg: SimConfig) -> Coord:
    """Inverse of node_index."""
    if not (0 <= i < cfg.num_nodes):
        raise ConfigError(f"node index {i} outside [0, {cfg.num_nodes})")
    return Coord(i % cfg.mesh_x, i // cfg.mesh_x)
