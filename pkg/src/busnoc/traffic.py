"""Packet generation: Bernoulli injection per node per cycle, destination
patterns (uniform random, first matrix transpose, bit reversal, butterfly),
and uniform packet-length sampling.

Each node draws from its own RNG stream derived from the global seed, so
injection traces are stable under unrelated config changes. Deterministic
patterns with dst == src (fixed points) generate no packet that cycle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import Coord, SimConfig, Traffic, index_to_coord, node_index


@dataclass(frozen=True, slots=True)
class PacketDescriptor:
    src: Coord
    dst: Coord
    length: int
    created_cycle: int


def node_rng(seed: int, node: int) -> random.Random:
    return random.Random(seed * 1_000_003 + node)


def dest_uniform(src: Coord, cfg: SimConfig, rng: random.Random) -> Coord:
    """Uniformly random destination, excluding src."""
    n = cfg.num_nodes
    assert n >= 2
    i = rng.randrange(n - 1)
    s = node_index(src, cfg)
    if i >= s:
        i += 1
    return index_to_coord(i, cfg)


def dest_transpose1(src: Coord, cfg: SimConfig) -> Coord:
    """First matrix transpose: (x, y) -> (Y-1-y, X-1-x); the anti-diagonal
    maps to itself."""
    return Coord(cfg.mesh_y - 1 - src.y, cfg.mesh_x - 1 - src.x)


def _index_bits(cfg: SimConfig) -> int:
    return (cfg.num_nodes - 1).bit_length()


def dest_bit_reversal(src: Coord, cfg: SimConfig) -> Coord:
    """Reverse the bits of the node index."""
    bits = _index_bits(cfg)
    i = node_index(src, cfg)
    rev = 0
    for b in range(bits):
        if i & (1 << b):
            rev |= 1 << (bits - 1 - b)
    return index_to_coord(rev, cfg)


def dest_butterfly(src: Coord, cfg: SimConfig) -> Coord:
    """Exchange the most- and least-significant index bits."""
    bits = _index_bits(cfg)
    i = node_index(src, cfg)
    msb = (i >> (bits - 1)) & 1
    lsb = i & 1
    j = i & ~(1 | (1 << (bits - 1)))
    j |= lsb << (bits - 1)
    j |= msb
    return index_to_coord(j, cfg)


def pattern_dest(src: Coord, cfg: SimConfig, rng: random.Random) -> Coord:
    if cfg.traffic is Traffic.UNIFORM:
        return dest_uniform(src, cfg, rng)
    if cfg.traffic is Traffic.TRANSPOSE1:
        return dest_transpose1(src, cfg)
    if cfg.traffic is Traffic.BIT_REVERSAL:
        return dest_bit_reversal(src, cfg)
    return dest_butterfly(src, cfg)


def maybe_inject(
    src: Coord, cfg: SimConfig, rng: random.Random, cycle: int
) -> PacketDescriptor | None:
    """With probability pir, produce a packet descriptor for this cycle.

    The length draw happens on every successful Bernoulli trial, fixed
    point or not, keeping per-node streams aligned across patterns.
    """
    if rng.random() >= cfg.pir:
        return None
    length = rng.randint(cfg.len_min, cfg.len_max)
    dst = pattern_dest(src, cfg, rng)
    if dst == src:
        return None
    return PacketDescriptor(src, dst, length, cycle)
