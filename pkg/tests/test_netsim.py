"""Tests for the simulated radio: wire format, delivery, tables, floods."""
import numpy as np
import pytest

from swarmconn import graph_oracle as go
from swarmconn import netsim
from swarmconn.netsim import (BEACON, DIGEST, FLOOD, Message, NeighborTable,
                              RadioModel)
from swarmconn.pi_estimator import FloodPayload


def test_wire_roundtrip_beacon():
    m = Message(BEACON, 3, 3, 41, 0, (0.123456789,))
    m2 = netsim.decode_message(netsim.encode_message(m))
    assert m2 == m


def test_wire_roundtrip_digest():
    m = Message(DIGEST, 7, 7, 12, 0,
                ((2, (1.5, -3.25)), (9, (0.0, 8.0))))
    m2 = netsim.decode_message(netsim.encode_message(m))
    assert m2.payload == m.payload
    assert (m2.sender, m2.origin_iteration) == (7, 12)


def test_wire_roundtrip_digest_empty():
    m = Message(DIGEST, 1, 1, 0, 0, ())
    assert netsim.decode_message(netsim.encode_message(m)).payload == ()


def test_wire_roundtrip_flood():
    p = FloodPayload(round_id=5, x=-0.25, x2=0.0625, xlx=0.5)
    m = Message(FLOOD, 2, 8, 99, 3, p)
    m2 = netsim.decode_message(netsim.encode_message(m))
    assert m2.payload == p and m2.hop_count == 3 and m2.origin == 8


def test_wire_rejects_bad_schema_and_kind():
    buf = bytearray(netsim.encode_message(Message(BEACON, 0, 0, 0, 0, (1.0,))))
    buf[0] = 99
    with pytest.raises(ValueError):
        netsim.decode_message(bytes(buf))
    with pytest.raises(ValueError):
        netsim.encode_message(Message(7, 0, 0, 0, 0, None))


def test_radio_model_validation():
    with pytest.raises(ValueError):
        RadioModel(drop_prob=1.0)
    with pytest.raises(ValueError):
        RadioModel(comm_range=-1.0)
    with pytest.raises(ValueError):
        RadioModel(max_hops=0)


def _world(positions, comm_range):
    return go.build_graph(np.array(positions), comm_range,
                          go.WeightParams(mode="binary"))


def test_broadcast_range_and_rel():
    world = _world([[0.0, 0.0], [10.0, 0.0], [30.0, 0.0]], 16.0)
    radio = RadioModel(comm_range=16.0)
    m = Message(BEACON, 0, 0, 0, 0, (0.0,))
    out = netsim.broadcast(0, m, world, radio, np.random.default_rng(0))
    assert out == [(1, (-10.0, 0.0))]   # sender minus receiver, node 2 out of range


def test_broadcast_drop_rate():
    world = _world([[0.0, 0.0], [5.0, 0.0]], 16.0)
    radio = RadioModel(comm_range=16.0, drop_prob=0.3)
    rng = np.random.default_rng(123)
    m = Message(BEACON, 0, 0, 0, 0, (0.0,))
    trials = 20000
    got = sum(len(netsim.broadcast(0, m, world, radio, rng)) for _ in range(trials))
    assert abs(got / trials - 0.7) < 0.01


def test_relay_flood_dedup_and_budget():
    radio = RadioModel(max_hops=3)
    p = FloodPayload(round_id=2, x=0.0, x2=0.0, xlx=0.0)
    m = Message(FLOOD, 5, 9, 1, 1, p)
    seen = set()
    out = netsim.relay_flood(4, [m], seen, radio)
    assert len(out) == 1
    r = out[0]
    assert (r.sender, r.origin, r.hop_count) == (4, 9, 2)
    # duplicate suppressed
    assert netsim.relay_flood(4, [m], seen, radio) == []
    # hop budget exhausted
    m2 = Message(FLOOD, 5, 10, 1, 3, p)
    assert netsim.relay_flood(4, [m2], set(), radio) == []


def _beacon(sender, x=0.0, it=0):
    return Message(BEACON, sender, sender, it, 0, (x,))


def test_table_beacon_then_digest():
    t = NeighborTable(0)
    netsim.update_neighbor_table(t, [( _beacon(1, 0.5, 7), (2.0, 0.0))], 0, 5)
    assert t.one_hop[1] == [(2.0, 0.0), 0.5, 0, 7]
    # digest from 1 announcing its neighbor 2 at offset (3, 0) from 1
    d = Message(DIGEST, 1, 1, 8, 0, ((2, (3.0, 0.0)), (0, (-2.0, 0.0))))
    netsim.update_neighbor_table(t, [(d, (2.0, 0.0))], 1, 5)
    assert 2 in t.two_hop
    rel, vias, last = t.two_hop[2]
    assert rel == (5.0, 0.0) and vias == {1: 1} and last == 1
    assert 0 not in t.two_hop          # own id never enters
    # node 2 heard directly promotes it to one_hop and drops the 2-hop entry
    netsim.update_neighbor_table(t, [(_beacon(2), (5.0, 0.0))], 2, 5)
    assert 2 in t.one_hop and 2 not in t.two_hop


def test_table_two_hop_relay_accumulation():
    t = NeighborTable(0)
    for s, rel in ((1, (2.0, 0.0)), (3, (0.0, 2.0))):
        netsim.update_neighbor_table(t, [(_beacon(s), rel)], 0, 5)
    d1 = Message(DIGEST, 1, 1, 0, 0, ((7, (1.0, 0.0)),))
    d3 = Message(DIGEST, 3, 3, 0, 0, ((7, (2.0, -1.0)),))
    netsim.update_neighbor_table(t, [(d1, (2.0, 0.0)), (d3, (0.0, 2.0))], 1, 5)
    assert set(t.two_hop[7][1]) == {1, 3}
    pi_size, path = t.two_hop_structure(1)
    assert pi_size == 3 and path == set()     # 2 relays > k=1
    _, path2 = t.two_hop_structure(2)
    assert path2 == {7}


def test_table_ttl_eviction_boundary():
    t = NeighborTable(0)
    netsim.update_neighbor_table(t, [(_beacon(1), (1.0, 0.0))], 0, 3)
    netsim.update_neighbor_table(t, [], 3, 3)    # heard exactly ttl ago: kept
    assert 1 in t.one_hop
    netsim.update_neighbor_table(t, [], 4, 3)
    assert 1 not in t.one_hop


def test_table_orphan_two_hop_removed():
    t = NeighborTable(0)
    netsim.update_neighbor_table(t, [(_beacon(1), (1.0, 0.0))], 0, 3)
    d = Message(DIGEST, 1, 1, 0, 0, ((7, (1.0, 0.0)),))
    netsim.update_neighbor_table(t, [(d, (1.0, 0.0))], 0, 3)
    assert 7 in t.two_hop
    # relay 1 goes silent past ttl: its vias entry and then node 7 vanish
    netsim.update_neighbor_table(t, [], 4, 3)
    assert 1 not in t.one_hop and 7 not in t.two_hop


def test_table_flood_refreshes_sender():
    t = NeighborTable(0)
    netsim.update_neighbor_table(t, [(_beacon(1), (1.0, 0.0))], 0, 5)
    f = Message(FLOOD, 1, 1, 0, 0, FloodPayload(0, 0.0, 0.0, 0.0))
    netsim.update_neighbor_table(t, [(f, (1.5, 0.0))], 4, 5)
    assert t.one_hop[1][0] == (1.5, 0.0) and t.one_hop[1][2] == 4


def test_table_malformed_counted():
    t = NeighborTable(0)
    bad = [
        (Message(BEACON, 1, 1, 0, 0, "junk"), (1.0, 0.0)),
        (Message(DIGEST, 1, 1, 0, 0, 42), (1.0, 0.0)),
        (Message(FLOOD, 1, 1, 0, 0, None), (1.0, 0.0)),
        (Message(9, 1, 1, 0, 0, None), (1.0, 0.0)),
    ]
    netsim.update_neighbor_table(t, bad, 0, 5)
    assert t.malformed == 4
    assert not t.one_hop and not t.two_hop
