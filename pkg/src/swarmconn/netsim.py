"""Simulated limited-range lossy radio.

Semantics: every broadcast at tick t is enqueued into the next-tick
inbox of each in-range receiver that independently survives a Bernoulli
trial (double-buffered mailboxes, so nothing sent at t is readable
before t+1).  Receiving any message also yields the sender's range and
bearing (situated communication), delivered alongside the message as a
relative position measured at transmission time.

Three message classes ride the wire:
  Beacon - sender's Fiedler-entry estimate + PI iteration, every tick.
  Digest - the sender's current 1-hop list (id + offset), used by
           receivers to build 2-hop neighborhoods.
  Flood  - PI correction sums, re-broadcast hop-by-hop with duplicate
           suppression up to a hop budget.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .pi_estimator import FloodPayload

BEACON = 0
DIGEST = 1
FLOOD = 2

WIRE_SCHEMA = 1
KIND_NAMES = {BEACON: "beacon", DIGEST: "digest", FLOOD: "flood"}


@dataclass(slots=True)
class Message:
    kind: int
    sender: int
    origin: int
    origin_iteration: int
    hop_count: int
    payload: object


@dataclass(frozen=True)
class RadioModel:
    comm_range: float = 16.0
    drop_prob: float = 0.0
    max_hops: int = 1

    def __post_init__(self):
        if not (0.0 <= self.drop_prob < 1.0):
            raise ValueError("drop_prob must be in [0, 1)")
        if self.comm_range <= 0:
            raise ValueError("comm_range must be positive")
        if self.max_hops < 1:
            raise ValueError("max_hops must be >= 1")


class NeighborTable:
    """Per-agent view of 1- and 2-hop neighbors, built from received traffic.

    one_hop: id -> [rel, fiedler, last_heard, origin_iteration]
    two_hop: id -> [rel, {relay: last_heard}, last_heard]
    Relative positions are w.r.t. the owning agent.  The two key sets are
    kept disjoint (1-hop wins) and entries silent for more than ttl ticks
    are evicted.
    """

    __slots__ = ("owner", "one_hop", "two_hop", "malformed")

    def __init__(self, owner: int):
        self.owner = owner
        self.one_hop: dict[int, list] = {}
        self.two_hop: dict[int, list] = {}
        self.malformed = 0

    def two_hop_structure(self, k: int) -> tuple[int, set[int]]:
        """Locally reconstructed (|Pi_i|, Path_i(k)); mirrors the oracle."""
        path = {nid for nid, e in self.two_hop.items() if len(e[1]) <= k}
        return len(self.one_hop) + len(self.two_hop), path


def broadcast(sender_row: int, msg: Message, world, radio: RadioModel, rng, ids=None):
    """Deliveries for one broadcast: [(receiver_id, rel_to_receiver), ...].

    `world` is a GraphSnapshot over currently alive robots, `sender_row`
    the sender's row in it, and `ids` maps rows to robot ids (identity
    when omitted).  rel is the sender's offset as seen by the receiver.
    Loss is silent, one independent Bernoulli trial per link.
    """
    out = []
    pos = world.positions
    keep = 1.0 - radio.drop_prob
    for j in world.neighbors(sender_row):
        j = int(j)
        if radio.drop_prob > 0.0 and rng.random() >= keep:
            continue
        rel = tuple(float(pos[sender_row][c] - pos[j][c]) for c in range(pos.shape[1]))
        out.append((ids[j] if ids is not None else j, rel))
    return out


def relay_flood(self_id: int, inbox_floods, already_seen: set, radio: RadioModel):
    """Flood messages this agent must rebroadcast (hop budget + dedup)."""
    out = []
    for msg in inbox_floods:
        key = (msg.payload.round_id, msg.origin)
        if key in already_seen:
            continue
        already_seen.add(key)
        if msg.hop_count < radio.max_hops:
            out.append(Message(FLOOD, self_id, msg.origin, msg.origin_iteration,
                               msg.hop_count + 1, msg.payload))
    return out


def update_neighbor_table(table: NeighborTable, inbox, now: int, ttl: int) -> NeighborTable:
    """Fold one tick's inbox into the table and evict stale entries.

    inbox entries are (Message, rel) pairs where rel = sender position
    minus receiver position at transmission time.
    """
    one, two = table.one_hop, table.two_hop
    for msg, rel in inbox:
        s = msg.sender
        entry = one.get(s)
        if msg.kind == BEACON:
            p = msg.payload
            if not isinstance(p, tuple) or len(p) != 1 or not isinstance(p[0], float):
                table.malformed += 1
                continue
            one[s] = [rel, p[0], now, msg.origin_iteration]
            two.pop(s, None)
        elif msg.kind == DIGEST:
            p = msg.payload
            if not isinstance(p, tuple):
                table.malformed += 1
                continue
            if entry is not None:
                entry[0], entry[2] = rel, now
            for item in p:
                try:
                    nid, nrel = item
                except (TypeError, ValueError):
                    table.malformed += 1
                    continue
                if nid == table.owner or nid in one:
                    continue
                abs_rel = tuple(rel[c] + nrel[c] for c in range(len(rel)))
                t2 = two.get(nid)
                if t2 is None:
                    two[nid] = [abs_rel, {s: now}, now]
                else:
                    t2[0], t2[2] = abs_rel, now
                    t2[1][s] = now
        elif msg.kind == FLOOD:
            if not isinstance(msg.payload, FloodPayload):
                table.malformed += 1
                continue
            if entry is not None:
                entry[0], entry[2] = rel, now
        else:
            table.malformed += 1
    # TTL eviction; keep an entry heard exactly ttl ticks ago
    stale = [i for i, e in one.items() if now - e[2] > ttl]
    for i in stale:
        del one[i]
    stale2 = [i for i, e in two.items() if now - e[2] > ttl]
    for i in stale2:
        del two[i]
    for e in two.values():
        vias = e[1]
        dead = [r for r, t in vias.items() if now - t > ttl or r not in one]
        for r in dead:
            del vias[r]
    # a 2-hop entry with no live relay is unreachable evidence
    orphans = [i for i, e in two.items() if not e[1]]
    for i in orphans:
        del two[i]
    return table


# --- canonical byte layout ------------------------------------------------
#
# All numerics little-endian and fixed width; lists are length-prefixed.
#   header : u8 schema | u8 kind | u16 sender | u16 origin |
#            u32 origin_iteration | u16 hop_count
#   beacon : f64 fiedler_entry
#   digest : u8 dim | u16 count | count * (u16 id | dim * f64 offset)
#   flood  : u32 round_id | f64 x | f64 x2 | f64 x_lx

_HDR = struct.Struct("<BBHHIH")
_F64 = struct.Struct("<d")
_FLOOD = struct.Struct("<Iddd")


def encode_message(msg: Message) -> bytes:
    head = _HDR.pack(WIRE_SCHEMA, msg.kind, msg.sender, msg.origin,
                     msg.origin_iteration, msg.hop_count)
    if msg.kind == BEACON:
        return head + _F64.pack(msg.payload[0])
    if msg.kind == DIGEST:
        entries = msg.payload
        dim = len(entries[0][1]) if entries else 0
        parts = [head, struct.pack("<BH", dim, len(entries))]
        for nid, rel in entries:
            parts.append(struct.pack("<H", nid))
            parts.append(struct.pack(f"<{dim}d", *rel))
        return b"".join(parts)
    if msg.kind == FLOOD:
        p = msg.payload
        return head + _FLOOD.pack(p.round_id, p.x, p.x2, p.xlx)
    raise ValueError(f"unknown message kind {msg.kind}")


def decode_message(buf: bytes) -> Message:
    schema, kind, sender, origin, origin_iter, hops = _HDR.unpack_from(buf, 0)
    if schema != WIRE_SCHEMA:
        raise ValueError(f"unsupported wire schema {schema}")
    off = _HDR.size
    if kind == BEACON:
        (fv,) = _F64.unpack_from(buf, off)
        payload = (fv,)
    elif kind == DIGEST:
        dim, count = struct.unpack_from("<BH", buf, off)
        off += 3
        entries = []
        for _ in range(count):
            (nid,) = struct.unpack_from("<H", buf, off)
            off += 2
            rel = struct.unpack_from(f"<{dim}d", buf, off)
            off += 8 * dim
            entries.append((nid, rel))
        payload = tuple(entries)
    elif kind == FLOOD:
        rid, x, x2, xlx = _FLOOD.unpack_from(buf, off)
        payload = FloodPayload(round_id=rid, x=x, x2=x2, xlx=xlx)
    else:
        raise ValueError(f"unknown message kind {kind}")
    return Message(kind, sender, origin, origin_iter, hops, payload)
