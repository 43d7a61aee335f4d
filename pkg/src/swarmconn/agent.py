"""Per-robot state machine.

Each tick an alive robot consumes its frozen inbox, updates its neighbor
table and estimator, assembles its commanded velocity, integrates its
position (explicit Euler, single-integrator model), and emits its
outbox.  A robot reads only its own state and inbox, so agents within a
tick are order-independent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from . import control, netsim, pi_estimator
from .netsim import BEACON, DIGEST, FLOOD, Message, NeighborTable


@dataclass
class RobotState:
    id: int
    position: list
    rng: object                      # per-agent seeded Generator
    alive: bool = True
    pi: pi_estimator.PiState = None
    table: NeighborTable = None
    flood_acc: pi_estimator.FloodAccumulator = field(
        default_factory=pi_estimator.FloodAccumulator)
    seen_floods: set = field(default_factory=set)
    flood_pending: bool = False
    degeneracy_flags: dict = field(default_factory=dict)
    faults: int = 0


def make_robot(rid: int, position, cfg, rng) -> RobotState:
    pi = pi_estimator.PiState(
        x_k=pi_estimator.init_x(rng),
        alpha=cfg.alpha,
        last_correction_iter=1 - cfg.pi.correction_period,
    )
    return RobotState(id=rid, position=list(position), rng=rng,
                      pi=pi, table=NeighborTable(rid))


def _weight(d: float, mode: str, sigma_w: float, comm_range: float) -> float:
    if d > comm_range:
        return 0.0
    if mode == "binary":
        return 1.0
    return math.exp(-(d * d) / (2.0 * sigma_w * sigma_w))


def step(state: RobotState, inbox, cfg, now: int) -> list:
    """One control tick; returns the outbox.  Must only be called when alive."""
    old_position = list(state.position)
    m = cfg.dim
    table = netsim.update_neighbor_table(state.table, inbox, now, cfg.ttl)

    # floods: absorb into the correction accumulator and collect relays
    floods = [msg for msg, _rel in inbox if msg.kind == FLOOD]
    acc = state.flood_acc
    for msg in floods:
        acc = pi_estimator.absorb_flood(acc, msg.origin, msg.payload)
    outbox = netsim.relay_flood(state.id, floods, state.seen_floods, cfg.radio)

    # power-iteration step on locally known weights and neighbor entries
    mode, sigma_w, comm_range = cfg.weights.mode, cfg.sigma_w, cfg.radio.comm_range
    deg = 0.0
    pi_entries = []
    conn_info = []
    neighbor_rel = []
    for e in table.one_hop.values():
        rel = e[0]
        neighbor_rel.append(rel)
        d = math.sqrt(sum(c * c for c in rel))
        w = _weight(d, mode, sigma_w, comm_range)
        deg += w
        pi_entries.append((w, e[1]))
        conn_info.append((e[1], rel))
    pi = pi_estimator.pi_step(state.pi, deg, pi_entries)

    # flood emission deferred one tick so the snapshot in last_x/last_lx
    # reflects the corrected vector
    if state.flood_pending:
        pi, payload = pi_estimator.begin_correction(pi)
        acc = pi_estimator.absorb_flood(acc, state.id, payload)
        state.seen_floods.add((payload.round_id, state.id))
        outbox.append(Message(FLOOD, state.id, state.id, pi.iteration, 0, payload))
        state.flood_pending = False

    # periodic (or instability-triggered) mean-correction round
    if pi.unstable or pi.iteration - pi.last_correction_iter >= cfg.pi.correction_period:
        if acc.count >= 1:
            pi = pi_estimator.apply_correction(pi, acc, state.rng)
        pi = replace(pi, last_correction_iter=pi.iteration)
        state.flood_pending = True

    # the three contributions of the control law
    lam = pi_estimator.estimate_lambda2(pi, cfg.vparams.epsilon_lambda)
    zero = [0.0] * m
    if cfg.gains.sigma != 0.0 and mode == "smooth" and conn_info:
        uc = control.connectivity_contribution(
            lam, pi.x_k, conn_info, cfg.vparams, sigma_w, comm_range,
            m=m, flags=state.degeneracy_flags)
    else:
        uc = zero
    if cfg.gains.psi != 0.0:
        ur = control.robustness_contribution(
            state.position, table, cfg.robustness, m=m,
            flags=state.degeneracy_flags)
    else:
        ur = zero
    if cfg.gains.zeta != 0.0 and neighbor_rel:
        ulj = control.coverage_contribution(state.position, neighbor_rel, cfg.lj, m=m)
    else:
        ulj = zero
    u = control.combine(uc, ur, ulj, cfg.gains, cfg.v_max)

    # integrate and clamp to the arena box (normal velocity absorbed)
    pos = state.position
    ok = True
    for c in range(m):
        x = pos[c] + u[c] * cfg.dt
        if not math.isfinite(x):
            ok = False
            break
        pos[c] = min(max(x, 0.0), cfg.arena[c])
    if not ok or not math.isfinite(pi.x_k):
        # freeze for this tick and stay silent; never corrupt neighbors
        state.position = old_position
        state.faults += 1
        return []
    state.pi = pi
    state.flood_acc = acc

    outbox.append(Message(BEACON, state.id, state.id, pi.iteration, 0, (pi.x_k,)))
    if now % cfg.digest_period == 0:
        digest = tuple((nid, e[0]) for nid, e in table.one_hop.items())
        outbox.append(Message(DIGEST, state.id, state.id, pi.iteration, 0, digest))
    return outbox


def inject_failures(team, model, dt: float, rng):
    """Kill each alive robot with prob 1 - exp(-dt/mtbf); death is permanent."""
    if model.mtbf is None:
        return team
    p = -math.expm1(-dt / model.mtbf)
    for r in team:
        if r.alive and rng.random() < p:
            r.alive = False
    return team
