"""Unit tests for the shared domain types."""

import pytest
from hypothesis import given, strategies as st

from busnoc.core import (
    ConfigError,
    Coord,
    DELTAS,
    Direction,
    Flit,
    FlitKind,
    MESH_DIRS,
    Routing,
    SimConfig,
    Traffic,
    index_to_coord,
    node_index,
)


def test_opposite_is_involution():
    for d in Direction:
        assert d.opposite.opposite is d


def test_opposite_deltas_cancel():
    for d in MESH_DIRS:
        dx, dy = DELTAS[d]
        ox, oy = DELTAS[d.opposite]
        assert (dx + ox, dy + oy) == (0, 0)


def test_north_is_plus_y():
    assert Coord(2, 1).step(Direction.NORTH) == Coord(2, 2)
    assert Coord(2, 1).step(Direction.EAST) == Coord(3, 1)
    assert Coord(2, 1).step(Direction.SOUTH) == Coord(2, 0)
    assert Coord(2, 1).step(Direction.WEST) == Coord(1, 1)


@given(st.integers(-8, 8), st.integers(-8, 8), st.sampled_from(MESH_DIRS))
def test_step_and_back(x, y, d):
    assert Coord(x, y).step(d).step(d.opposite) == Coord(x, y)


def _flit(kind, seq, length=4):
    return Flit(kind, 0, Coord(0, 0), Coord(1, 0), seq, length, 0)


def test_flit_kind_positions():
    _flit(FlitKind.HEADER, 0)
    _flit(FlitKind.BODY, 1)
    _flit(FlitKind.TAIL, 3)
    with pytest.raises(ValueError):
        _flit(FlitKind.BODY, 0)
    with pytest.raises(ValueError):
        _flit(FlitKind.HEADER, 1)
    with pytest.raises(ValueError):
        _flit(FlitKind.BODY, 3)
    with pytest.raises(ValueError):
        _flit(FlitKind.TAIL, 2)


def test_flit_rejects_self_addressed():
    with pytest.raises(ValueError):
        Flit(FlitKind.HEADER, 0, Coord(1, 1), Coord(1, 1), 0, 4, 0)


def test_config_defaults():
    cfg = SimConfig()
    assert (cfg.mesh_x, cfg.mesh_y) == (4, 4)
    assert cfg.num_nodes == 16
    assert cfg.threshold == 32  # k = 5
    assert cfg.routing is Routing.XY
    assert cfg.len_min == 4 and cfg.len_max == 10


def test_threshold_is_power_of_two():
    assert SimConfig(threshold_log2=3).threshold == 8
    assert SimConfig(threshold_log2=10).threshold == 1024


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(mesh_x=0),
        dict(mesh_y=0),
        dict(threshold_log2=0),
        dict(pir=1.5),
        dict(pir=-0.1),
        dict(len_min=1),
        dict(len_min=6, len_max=5),
        dict(buffer_depth=0),
        dict(injection_limit=-1),
        dict(sim_cycles=-1),
        dict(warmup_cycles=200, sim_cycles=100),
        dict(saturation_queue_limit=0),
        dict(traffic=Traffic.TRANSPOSE1, mesh_x=4, mesh_y=3),
        dict(traffic=Traffic.BIT_REVERSAL, mesh_x=3, mesh_y=3),
        dict(traffic=Traffic.BUTTERFLY, mesh_x=3, mesh_y=4),
    ],
)
def test_config_rejects(kwargs):
    with pytest.raises(ConfigError):
        SimConfig(**kwargs)


def test_config_accepts_power_of_two_rectangles():
    SimConfig(traffic=Traffic.BIT_REVERSAL, mesh_x=4, mesh_y=2)
    SimConfig(traffic=Traffic.BUTTERFLY, mesh_x=8, mesh_y=4)


def test_node_index_roundtrip():
    cfg = SimConfig()
    seen = set()
    for i in range(cfg.num_nodes):
        c = index_to_coord(i, cfg)
        assert node_index(c, cfg) == i
        seen.add(c)
    assert len(seen) == cfg.num_nodes


def test_node_index_row_major():
    cfg = SimConfig()
    assert node_index(Coord(0, 0), cfg) == 0
    assert node_index(Coord(3, 0), cfg) == 3
    assert node_index(Coord(0, 1), cfg) == 4
    assert node_index(Coord(3, 3), cfg) == 15


def test_node_index_bounds():
    cfg = SimConfig()
    with pytest.raises(ConfigError):
        node_index(Coord(4, 0), cfg)
    with pytest.raises(ConfigError):
        node_index(Coord(0, -1), cfg)
    with pytest.raises(ConfigError):
        index_to_coord(16, cfg)
