"""Constructed test scenarios: a deterministic four-packet deadlock cycle
on a 2x2 mesh, and single-packet path tracing.

The deadlock pre-seed places four 6-flit packets so that each holds one
channel of the cycle (0,0)->(1,0)->(1,1)->(0,1)->(0,0) and its header
requests the next, which is legal under fully adaptive routing. With no
recovery the block never moves; with bus recovery exactly one message
escapes over the bus and the rest route normally.
"""

from __future__ import annotations

from dataclasses import replace

from .core import (
    Coord,
    Direction,
    Flit,
    FlitKind,
    Recovery,
    Routing,
    SimConfig,
    node_index,
)
from .engine import Simulation

N, E, S, W = Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST
LOCAL = Direction.LOCAL


def deadlock_config(recovery: Recovery, **overrides) -> SimConfig:
    base = dict(
        mesh_x=2,
        mesh_y=2,
        routing=Routing.TFAR,
        recovery=recovery,
        pir=0.0,
        len_min=6,
        len_max=6,
        buffer_depth=4,
        sim_cycles=5_000,
        seed=0,
    )
    base.update(overrides)
    return SimConfig(**base)


def _flits(pid: int, src: Coord, dst: Coord, length: int):
    out = []
    for seq in range(length):
        kind = (
            FlitKind.HEADER
            if seq == 0
            else FlitKind.TAIL
            if seq == length - 1
            else FlitKind.BODY
        )
        out.append(Flit(kind, pid, src, dst, seq, length, 0))
    return out


def build_deadlock_scenario(cfg: SimConfig, *, log: bool = False,
                            audit: bool = False) -> Simulation:
    """Pre-seed the cyclic four-packet block described above.

    Each packet's first four flits fill the input FIFO where its header is
    blocked; the remaining two sit in the local input FIFO one hop back,
    whose channel holds the reservation on the cycle link.
    """
    assert cfg.mesh_x == 2 and cfg.mesh_y == 2
    assert cfg.pir == 0.0, "the block must form in a quiet network"
    sim = Simulation(cfg, log=log, audit=audit)
    length = 6
    # (src, dst, router holding the blocked header, side it sits on,
    #  router one hop back, output the tail half reserves there)
    plan = [
        (Coord(0, 0), Coord(1, 1), Coord(1, 0), W, Coord(0, 0), E),
        (Coord(1, 0), Coord(0, 1), Coord(1, 1), S, Coord(1, 0), N),
        (Coord(1, 1), Coord(0, 0), Coord(0, 1), E, Coord(1, 1), W),
        (Coord(0, 1), Coord(1, 0), Coord(0, 0), N, Coord(0, 1), S),
    ]
    for src, dst, at, side, back, held in plan:
        pid = sim.new_packet_id()
        flits = _flits(pid, src, dst, length)
        front = sim.routers[node_index(at, cfg)]
        rear = sim.routers[node_index(back, cfg)]
        for f in flits[: cfg.buffer_depth]:
            front.inputs[side].accept_flit(f)
            front.occupancy += 1
        for f in flits[cfg.buffer_depth :]:
            rear.inputs[LOCAL].accept_flit(f)
            rear.occupancy += 1
        rear.inputs[LOCAL].reserved_output = held
        rear.outputs[held].reserved_by = LOCAL
        # The flits already forwarded crossed these links; the wormhole
        # monitors expect the stream to continue where it stopped.
        sim._link_expect[(node_index(back, cfg), held)] = (pid, cfg.buffer_depth)
        sim.register_preseeded_packet(length)
    return sim


def trace_packet_path(cfg: SimConfig, src: Coord, dst: Coord,
                      max_cycles: int = 1_000) -> list[Coord]:
    """Inject one packet into an otherwise idle network and return the
    sequence of routers its header traverses, src through dst."""
    assert src != dst
    cfg = replace(cfg, pir=0.0, sim_cycles=0)
    sim = Simulation(cfg, log=True)
    pid = sim.new_packet_id()
    length = cfg.len_min
    from .traffic import PacketDescriptor

    sim.source_queues[node_index(src, cfg)].append(
        (pid, PacketDescriptor(src, dst, length, 0))
    )
    sim.register_preseeded_packet(length)
    for _ in range(max_cycles):
        sim.step()
        if sim.idle():
            break
    assert sim.idle(), f"packet {src}->{dst} not delivered in {max_cycles} cycles"
    path = [src]
    for line in sim.events:
        _, entity, event, pid_s, seq = line.split(",")
        if event == "hop" and int(seq) == 0:
            ridx, out = entity.split(".")
            if out in ("NORTH", "EAST", "SOUTH", "WEST"):
                path.append(path[-1].step(Direction[out]))
    assert path[-1] == dst
    return path
