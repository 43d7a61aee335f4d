"""Acceptance suite: one test (and one printed pass/fail line) per criterion.

Run with -s to see the per-criterion lines as they complete.
"""
import filecmp
import time

import numpy as np

from swarmconn import config, control, graph_oracle as go, harness


def _report(name, ok, detail=""):
    line = f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def _connected_positions(rng, n, side, comm_range):
    for _ in range(500):
        pos = rng.uniform(0, side, size=(n, 2))
        g = go.build_graph(pos, comm_range, go.WeightParams(mode="binary"))
        if go.is_connected(g):
            return pos, g
    raise RuntimeError("no connected sample")


def test_oracle_correctness():
    t0 = time.perf_counter()
    wp = go.WeightParams(mode="binary")
    p3 = go.build_graph(np.array([[0.0, 0], [10, 0], [20, 0]]), 12.0, wp)
    k3 = go.build_graph(np.array([[0.0, 0], [10, 0], [5, 8.0]]), 12.0, wp)
    disc = go.build_graph(np.array([[0.0, 0], [10, 0], [100, 0], [110, 0.0]]),
                          12.0, wp)
    ok = (abs(go.fiedler(p3).lambda2 - 1.0) < 1e-9
          and abs(go.fiedler(k3).lambda2 - 3.0) < 1e-9
          and abs(go.fiedler(disc).lambda2) < 1e-9)

    rng = np.random.default_rng(2024)
    agree = 0
    for _ in range(200):
        n = int(rng.integers(2, 21))
        pos = rng.uniform(0, 60, size=(n, 2))
        g = go.build_graph(pos, 16.0, go.WeightParams())
        lam = go.fiedler(g).lambda2
        if go.is_connected(g) == (lam > 1e-9):
            agree += 1
    dt = time.perf_counter() - t0
    _report("oracle correctness", ok and agree == 200 and dt < 5.0,
            f"equivalence {agree}/200, {dt:.2f}s")


def _static_estimation_run(n, seed, rounds=50, period=10):
    rng = np.random.default_rng(seed)
    pos, g = _connected_positions(rng, n, side=40.0, comm_range=16.0)
    max_deg = float(max(g.weights.sum(axis=1)))
    cfg = config.from_dict({
        "n": n, "ticks": period * rounds + period + 5, "seed": seed,
        "weights": {"mode": "binary"},
        "gains": {"sigma": 0.0, "psi": 0.0, "zeta": 0.0},
        "pi": {"degree_bound": max_deg, "correction_period": period},
        "placement": {"positions": pos.tolist()},
        "logging": {"messages": False},
    })
    res = harness.run(cfg, metrics_hook=lambda *a: None)
    spec = go.fiedler(g)
    ests = np.array([r.pi.lambda2_est for r in res.team])
    x = np.array([r.pi.x_k for r in res.team])
    rel = np.abs(ests - spec.lambda2) / spec.lambda2
    cos = abs(x @ spec.fiedler_vector) / np.linalg.norm(x)
    rounds_done = min(r.pi.rounds_completed for r in res.team)
    return rel.max(), cos, rounds_done


def test_distributed_estimation():
    t0 = time.perf_counter()
    worst_rel, worst_cos = 0.0, 1.0
    for n, seed in ((5, 101), (10, 102), (20, 103)):
        rel, cos, done = _static_estimation_run(n, seed)
        assert done >= 50
        worst_rel = max(worst_rel, rel)
        worst_cos = min(worst_cos, cos)
    dt = time.perf_counter() - t0
    _report("distributed estimation",
            worst_rel < 0.05 and worst_cos >= 0.99 and dt < 30.0,
            f"max rel err {worst_rel:.4f}, min cosine {worst_cos:.4f}, {dt:.1f}s")


def test_gradient_fidelity():
    vp = control.VParams(epsilon_lambda=0.05, scale=1.0)
    wp = go.WeightParams()
    comm_range = 16.0
    sigma_w = wp.resolve_sigma(comm_range)
    h = 1e-6
    rng = np.random.default_rng(71)
    worst = 0.0
    checked = 0
    while checked < 20:
        n = int(rng.integers(4, 7))
        pos = rng.uniform(0, 20, size=(n, 2))
        g = go.build_graph(pos, comm_range, wp)
        evals = np.linalg.eigvalsh(go.laplacian(g))
        d = np.sqrt(((pos[:, None] - pos[None]) ** 2).sum(-1))
        near_cut = np.any(np.abs(d[np.triu_indices(n, 1)] - comm_range) < 1e-3)
        # keep only connected configs with a simple, well-separated lambda2
        # and no pair sitting on the range cutoff (V(lambda2(p)) must be
        # differentiable there)
        if evals[1] < 1e-4 or evals[2] - evals[1] < 1e-3 or near_cut:
            continue
        spec = go.fiedler(g)
        for i in range(n):
            nbrs = g.neighbors(i)
            info = [(float(spec.fiedler_vector[j]),
                     tuple(pos[j] - pos[i])) for j in nbrs]
            ana = control.connectivity_contribution(
                spec.lambda2, float(spec.fiedler_vector[i]), info,
                vp, sigma_w, comm_range)
            fd = []
            for c in range(2):
                pp = pos.copy()
                pp[i, c] += h
                lp = go.fiedler(go.build_graph(pp, comm_range, wp)).lambda2
                pm = pos.copy()
                pm[i, c] -= h
                lm = go.fiedler(go.build_graph(pm, comm_range, wp)).lambda2
                fd.append(-(vp.energy(lp) - vp.energy(lm)) / (2 * h))
            num = np.linalg.norm(np.array(ana) - np.array(fd))
            den = max(np.linalg.norm(fd), 1e-12)
            worst = max(worst, num / den)
        checked += 1
    _report("gradient fidelity", worst < 1e-4,
            f"{checked} configs, worst rel err {worst:.2e}")


def test_robustness_equivalence():
    rng = np.random.default_rng(31)
    mismatches = 0
    graphs = 0
    while graphs < 100:
        n = int(rng.integers(4, 13))
        pos = rng.uniform(0, 30, size=(n, 2))
        g = go.build_graph(pos, 14.0, go.WeightParams(mode="binary"))
        cfg = config.from_dict({
            "n": n, "ticks": 6, "seed": graphs,
            "radio": {"comm_range": 14.0},
            "weights": {"mode": "binary"},
            "gains": {"sigma": 0.0, "psi": 0.0, "zeta": 0.0},
            "placement": {"positions": pos.tolist()},
            "logging": {"messages": False},
        })
        res = harness.run(cfg, metrics_hook=lambda *a: None)
        for k in (1, 2):
            for r in res.team:
                local = control.local_robustness(r.table, k)
                oracle = go.robustness_score(g, r.id, k)
                if local != oracle:
                    mismatches += 1
        graphs += 1
    _report("robustness heuristic equivalence", mismatches == 0,
            f"100 graphs, k in (1, 2), {mismatches} mismatches")


def _scenario(seed, coverage_only):
    raw = {"n": 20, "ticks": 3000, "seed": seed,
           "logging": {"messages": False}}
    if coverage_only:
        raw["gains"] = {"sigma": 0.0, "psi": 0.0, "zeta": 1.0}
    cfg = config.from_dict(raw)
    res = harness.run(cfg, metrics_hook=lambda *a: None)
    return res.summary["connectivity_held_fraction"] == 1.0


def test_scenario_scale():
    t0 = time.perf_counter()
    seeds = range(10)
    full_held = [_scenario(s, coverage_only=False) for s in seeds]
    cov_held = [_scenario(s, coverage_only=True) for s in seeds]
    dt = time.perf_counter() - t0
    lost = sum(1 for h in cov_held if not h)
    _report("scenario-scale behavior",
            all(full_held) and lost >= 1 and dt < 300.0,
            f"full {sum(full_held)}/10 held, coverage-only lost {lost}/10, "
            f"{dt:.0f}s")


def test_communication_calibration():
    # lossy triangle: per-sender digest miss ratio ~ drop_prob
    tri = [[10.0, 10.0], [20.0, 10.0], [15.0, 18.0]]
    cfg = config.from_dict({
        "n": 3, "ticks": 3000, "seed": 5,
        "radio": {"drop_prob": 0.25},
        "gains": {"sigma": 0.0, "psi": 0.0, "zeta": 0.0},
        "placement": {"positions": tri},
    })
    res = harness.run(cfg)
    ratios = [ratio
              for stats in res.summary["gap_ratios"].values()
              for ratio in stats["per_sender_miss"].values()]
    ok_lossy = (len(ratios) == 6
                and all(abs(r - 0.25) <= 0.02 for r in ratios))

    # lossless line of 4: zero gaps, floods cross the diameter in D ticks
    line = [[5.0, 25.0], [15.0, 25.0], [25.0, 25.0], [35.0, 25.0]]
    cfg2 = config.from_dict({
        "n": 4, "ticks": 80, "seed": 6,
        "radio": {"comm_range": 12.0},
        "gains": {"sigma": 0.0, "psi": 0.0, "zeta": 0.0},
        "placement": {"positions": line},
    })
    res2 = harness.run(cfg2)
    zero_gaps = all(
        ratio == 0.0
        for stats in res2.summary["gap_ratios"].values()
        for ratio in stats["per_sender_miss"].values())

    diameter = 3
    first = {}   # (origin, origin_iteration, receiver) -> first delivery tick
    for tick, recv, _s, kind, origin, oit, _h in res2.message_rows:
        if kind == "flood" and recv != origin:   # relays echo to the origin
            first.setdefault((origin, oit, recv), tick)
    spans_ok = True
    rounds = {}
    for (origin, oit, recv), tick in first.items():
        rounds.setdefault((origin, oit), {})[recv] = tick
    for (origin, _oit), per_recv in rounds.items():
        if min(per_recv.values()) > cfg2.ticks - diameter:
            continue    # emitted too close to the end to finish spreading
        if len(per_recv) != 3:
            spans_ok = False
        elif max(per_recv.values()) - min(per_recv.values()) > diameter - 1:
            spans_ok = False
    _report("communication calibration",
            ok_lossy and zero_gaps and spans_ok,
            f"miss ratios {min(ratios):.3f}..{max(ratios):.3f}, "
            f"lossless gaps zero: {zero_gaps}, flood span ok: {spans_ok}")


def test_determinism(tmp_path):
    cfg = config.from_dict({
        "n": 8, "ticks": 120, "seed": 42,
        "radio": {"drop_prob": 0.1},
        "failure": {"mtbf": 600.0},
    })
    a, b = tmp_path / "a", tmp_path / "b"
    harness.run(cfg, out_dir=a)
    harness.run(cfg, out_dir=b)
    same = {name: filecmp.cmp(a / name, b / name, shallow=False)
            for name in ("metrics.csv", "trajectories.csv", "messages.csv")}
    _report("determinism", all(same.values()),
            ", ".join(f"{k} {'ok' if v else 'DIFFERS'}" for k, v in same.items()))
