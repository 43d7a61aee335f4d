"""Simulation loop, metric computation, and file output.

Tick order (strictly sequential): inject failures -> every alive agent
steps on its frozen inbox -> broadcasts are resolved against the
post-step ground-truth graph into next-tick inboxes -> oracle metrics.

Output files (all with a version header line):
  metrics.csv      one row per tick: global truth + per-robot observables
  trajectories.csv one row per robot per tick
  messages.csv     one row per delivered message (optional, config flag)
  summary.json     run-level aggregates
"""
from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from . import agent, graph_oracle, kernels
from .config import ScenarioConfig, to_toml
from .netsim import DIGEST, KIND_NAMES

METRICS_HEADER = "#swarmconn:metrics:v1"
TRAJ_HEADER = "#swarmconn:trajectories:v1"
MESSAGES_HEADER = "#swarmconn:messages:v1"
SUMMARY_SCHEMA = 1
CONNECT_TOL = 1e-9


def place_team(cfg: ScenarioConfig, rng) -> list[list[float]]:
    """Initial positions: explicit list, uniform, or uniform-until-connected."""
    if cfg.initial_positions is not None:
        return [list(p) for p in cfg.initial_positions]
    for _ in range(1000):
        pos = [[float(rng.uniform(0.0, cfg.arena[c])) for c in range(cfg.dim)]
               for _ in range(cfg.n)]
        if cfg.placement == "uniform":
            return pos
        if cfg.n == 1:
            return pos
        g = graph_oracle.build_graph(np.array(pos), cfg.radio, cfg.weights)
        if graph_oracle.is_connected(g):
            return pos
    raise RuntimeError("could not sample a connected initial placement")


def _fmt(x: float) -> str:
    return repr(float(x))


class RunResult:
    """In-memory artifacts of one run (files are optional)."""

    def __init__(self):
        self.metrics_rows = []
        self.traj_rows = []
        self.message_rows = []
        self.summary = {}
        self.team = None
        self.lambda2_true_trace = []


def run(cfg: ScenarioConfig, out_dir=None, metrics_hook=None) -> RunResult:
    """Execute a scenario; write CSVs + summary if out_dir is given.

    metrics_hook(tick, team, graph) is called each tick when supplied
    (used by tests that only need the trace, skipping row formatting).
    """
    ss = np.random.SeedSequence(cfg.seed)
    children = ss.spawn(3 + cfg.n)
    rng_place = np.random.default_rng(children[0])
    rng_net = np.random.default_rng(children[1])
    rng_fail = np.random.default_rng(children[2])
    agent_rngs = [np.random.default_rng(c) for c in children[3:]]

    positions = place_team(cfg, rng_place)
    team = [agent.make_robot(i, positions[i], cfg, agent_rngs[i])
            for i in range(cfg.n)]

    res = RunResult()
    res.team = team
    full_rows = metrics_hook is None
    n, m = cfg.n, cfg.dim
    drop = cfg.radio.drop_prob
    keep = 1.0 - drop
    inboxes = [[] for _ in range(n)]
    digest_deliveries = []   # (recv_tick, receiver, sender) when logging
    neighbor_sets = []       # per tick: {robot: set(in-range alive ids)}
    eps = cfg.vparams.epsilon_lambda
    rel_err_sum, rel_err_cnt = 0.0, 0
    connected_ticks = 0

    for t in range(cfg.ticks):
        agent.inject_failures(team, cfg.failure, cfg.dt, rng_fail)

        outboxes = {}
        for r in team:
            if r.alive:
                outboxes[r.id] = agent.step(r, inboxes[r.id], cfg, t)
            inboxes[r.id] = []

        alive_ids = [r.id for r in team if r.alive]
        nbr_of = {i: set() for i in range(n)}
        g = None
        if alive_ids:
            pos = np.array([team[i].position for i in alive_ids])
            g = graph_oracle.build_graph(pos, cfg.radio, cfg.weights)
            w = g.weights
            nrows = len(alive_ids)
            rel_t = g.positions[:, None, :] - g.positions[None, :, :]
            nbr_rows = [np.nonzero(w[i] > 0.0)[0] for i in range(nrows)]
            for srow, sid in enumerate(alive_ids):
                msgs = outboxes.get(sid)
                nbr_of[sid] = {alive_ids[int(j)] for j in nbr_rows[srow]}
                if not msgs:
                    continue
                for j in nbr_rows[srow]:
                    j = int(j)
                    rid = alive_ids[j]
                    rel = tuple(float(c) for c in rel_t[srow, j])
                    inb = inboxes[rid]
                    for msg in msgs:
                        if drop > 0.0 and rng_net.random() >= keep:
                            continue
                        inb.append((msg, rel))
                        if cfg.log_messages:
                            res.message_rows.append(
                                (t + 1, rid, msg.sender, KIND_NAMES[msg.kind],
                                 msg.origin, msg.origin_iteration, msg.hop_count))
                            if msg.kind == DIGEST:
                                digest_deliveries.append((t + 1, rid, msg.sender))
        if cfg.log_messages:
            neighbor_sets.append(nbr_of)

        # oracle metrics over alive robots only
        if g is not None and g.n >= 2:
            lam_true = graph_oracle.fiedler(g).lambda2
            connected = graph_oracle.is_connected(g)
            dvec = np.sqrt(((g.positions[:, None, :] - g.positions[None, :, :]) ** 2
                            ).sum(-1))[np.triu_indices(g.n, 1)]
            dmin, dmax = float(dvec.min()), float(dvec.max())
        else:
            lam_true, connected, dmin, dmax = 0.0, g is not None, 0.0, 0.0
        res.lambda2_true_trace.append(lam_true)
        if connected:
            connected_ticks += 1

        if lam_true > CONNECT_TOL:
            for r in team:
                if r.alive and r.pi.rounds_completed > 0:
                    est = max(eps, r.pi.lambda2_est)
                    rel_err_sum += abs(est - lam_true) / lam_true
                    rel_err_cnt += 1

        if metrics_hook is not None:
            metrics_hook(t, team, g)
        if full_rows:
            cols = [str(t), _fmt(lam_true), "1" if connected else "0",
                    _fmt(dmin), _fmt(dmax)]
            for r in team:
                est = (max(eps, r.pi.lambda2_est)
                       if r.pi.rounds_completed > 0 else eps)
                one = r.table.one_hop
                last_it = ";".join(f"{s}:{e[3]}" for s, e in sorted(one.items()))
                est_d = ";".join(
                    f"{s}:{math.sqrt(sum(c * c for c in e[0])):.9g}"
                    for s, e in sorted(one.items()))
                cols += ["1" if r.alive else "0"]
                cols += [_fmt(x) for x in r.position]
                cols += [_fmt(est), str(len(one)), str(len(r.table.two_hop)),
                         last_it, est_d]
                res.traj_rows.append(
                    (t, r.id, 1 if r.alive else 0, tuple(r.position)))
            res.metrics_rows.append(cols)

    frac_conn = connected_ticks / cfg.ticks
    res.summary = {
        "schema_version": SUMMARY_SCHEMA,
        "n": n,
        "ticks": cfg.ticks,
        "seed": cfg.seed,
        "kernel_backend": kernels.BACKEND,
        "connectivity_held_fraction": frac_conn,
        "lambda2_true_final": res.lambda2_true_trace[-1],
        "mean_rel_lambda2_error": (rel_err_sum / rel_err_cnt) if rel_err_cnt else None,
        "alive_final": sum(1 for r in team if r.alive),
        "faults": {r.id: r.faults for r in team if r.faults},
        "malformed_messages": {r.id: r.table.malformed
                               for r in team if r.table.malformed},
        "degeneracy_flags": {r.id: r.degeneracy_flags
                             for r in team if r.degeneracy_flags},
    }
    if cfg.log_messages:
        res.summary["gap_ratios"] = _gap_from_events(
            digest_deliveries, neighbor_sets, n, cfg.ticks)

    if out_dir is not None:
        _write_outputs(cfg, res, Path(out_dir))
    return res


def _write_outputs(cfg: ScenarioConfig, res: RunResult, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.toml").write_text(to_toml(cfg))

    per_robot = []
    for i in range(cfg.n):
        per_robot += ([f"alive_{i}"]
                      + [f"p{c}_{i}" for c in range(cfg.dim)]
                      + [f"lambda2_est_{i}", f"onehop_{i}", f"twohop_{i}",
                         f"lastiter_{i}", f"estdist_{i}"])
    with open(out / "metrics.csv", "w", newline="\n") as f:
        f.write(METRICS_HEADER + "\n")
        f.write(",".join(["tick", "lambda2_true", "connected",
                          "min_dist", "max_dist"] + per_robot) + "\n")
        for row in res.metrics_rows:
            f.write(",".join(row) + "\n")

    with open(out / "trajectories.csv", "w", newline="\n") as f:
        f.write(TRAJ_HEADER + "\n")
        f.write(",".join(["tick", "robot", "alive"]
                         + [f"p{c}" for c in range(cfg.dim)]) + "\n")
        for t, rid, alive, pos in res.traj_rows:
            f.write(f"{t},{rid},{alive}," + ",".join(_fmt(x) for x in pos) + "\n")

    if cfg.log_messages:
        with open(out / "messages.csv", "w", newline="\n") as f:
            f.write(MESSAGES_HEADER + "\n")
            f.write("tick,receiver,sender,kind,origin,origin_iteration,hop_count\n")
            for row in res.message_rows:
                f.write(",".join(str(x) for x in row) + "\n")

    with open(out / "summary.json", "w", newline="\n") as f:
        json.dump(res.summary, f, indent=2, sort_keys=True)
        f.write("\n")


# --- digest gap ratios ----------------------------------------------------

def _gap_from_events(digest_deliveries, neighbor_sets, n, ticks):
    """Per-robot digest-miss statistics.

    A miss at reception tick t means: the sender was an in-range alive
    neighbor at send tick t-1 but no digest from it arrived.  Ratios are
    over ticks in which the robot had at least one neighbor; correlations
    pair the per-sender miss indicator series.
    """
    got = {}
    for t, recv, sender in digest_deliveries:
        got.setdefault((t, recv), set()).add(sender)

    out = {}
    for r in range(n):
        series = {}       # sender -> {recv_tick: missed}
        exactly_one = 0
        all_missed = 0
        considered = 0
        for t in range(1, ticks):
            nbrs = neighbor_sets[t - 1].get(r, set())
            if not nbrs:
                continue
            considered += 1
            received = got.get((t, r), set())
            misses = [s for s in nbrs if s not in received]
            for s in nbrs:
                series.setdefault(s, {})[t] = 1 if s in misses else 0
            if len(misses) == 1:
                exactly_one += 1
            if len(misses) == len(nbrs):
                all_missed += 1
        per_sender = {}
        for s, d in series.items():
            per_sender[str(s)] = sum(d.values()) / len(d)
        corr = {}
        senders = sorted(series)
        for ai in range(len(senders)):
            for bi in range(ai + 1, len(senders)):
                a, b = senders[ai], senders[bi]
                common = sorted(set(series[a]) & set(series[b]))
                if len(common) < 2:
                    continue
                xa = np.array([series[a][t] for t in common], dtype=float)
                xb = np.array([series[b][t] for t in common], dtype=float)
                if xa.std() == 0.0 or xb.std() == 0.0:
                    c = 0.0
                else:
                    c = float(np.corrcoef(xa, xb)[0, 1])
                corr[f"{a}-{b}"] = c
        out[str(r)] = {
            "ticks_considered": considered,
            "per_sender_miss": per_sender,
            "exactly_one_missing": (exactly_one / considered) if considered else 0.0,
            "all_missing": (all_missed / considered) if considered else 0.0,
            "pairwise_corr": corr,
        }
    return out


def gap_ratios(run_dir) -> dict:
    """Recompute digest gap ratios from a run's files (messages + trajectories)."""
    run_dir = Path(run_dir)
    from .config import load_config
    cfg = load_config(run_dir / "config.toml")

    digest_deliveries = []
    with open(run_dir / "messages.csv") as f:
        header = f.readline().strip()
        if header != MESSAGES_HEADER:
            raise ValueError(f"unsupported messages schema: {header!r}")
        f.readline()
        for line in f:
            tick, recv, sender, kind, *_ = line.rstrip("\n").split(",")
            if kind == "digest":
                digest_deliveries.append((int(tick), int(recv), int(sender)))

    pos_at = {}
    alive_at = {}
    with open(run_dir / "trajectories.csv") as f:
        header = f.readline().strip()
        if header != TRAJ_HEADER:
            raise ValueError(f"unsupported trajectories schema: {header!r}")
        f.readline()
        for line in f:
            parts = line.rstrip("\n").split(",")
            t, rid, alive = int(parts[0]), int(parts[1]), int(parts[2])
            pos_at[(t, rid)] = tuple(float(x) for x in parts[3:])
            alive_at[(t, rid)] = bool(alive)

    neighbor_sets = []
    cr2 = cfg.radio.comm_range ** 2
    for t in range(cfg.ticks):
        nbr = {}
        alive = [i for i in range(cfg.n) if alive_at.get((t, i))]
        for i in alive:
            pi = pos_at[(t, i)]
            s = set()
            for j in alive:
                if j == i:
                    continue
                pj = pos_at[(t, j)]
                if sum((a - b) ** 2 for a, b in zip(pi, pj)) <= cr2:
                    s.add(j)
            nbr[i] = s
        neighbor_sets.append(nbr)
    return _gap_from_events(digest_deliveries, neighbor_sets, cfg.n, cfg.ticks)
