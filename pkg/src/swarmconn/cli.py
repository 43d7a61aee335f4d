"""Command-line interface.

  swarmconn run --config scenario.toml [--seed N] --out DIR
  swarmconn oracle --config scenario.toml
  swarmconn replay --trace DIR

SWARMCONN_LOG=debug|info|warning controls verbosity.
"""
from __future__ import annotations

import argparse
import filecmp
import logging
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import graph_oracle, harness
from .config import load_config

log = logging.getLogger("swarmconn")


def _setup_logging():
    level = os.environ.get("SWARMCONN_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    log.info("running %d robots for %d ticks (seed %d)", cfg.n, cfg.ticks, cfg.seed)
    res = harness.run(cfg, out_dir=args.out)
    s = res.summary
    print(f"ticks={s['ticks']} n={s['n']} seed={s['seed']}")
    print(f"connectivity_held_fraction={s['connectivity_held_fraction']:.4f}")
    print(f"lambda2_true_final={s['lambda2_true_final']:.6f}")
    if s["mean_rel_lambda2_error"] is not None:
        print(f"mean_rel_lambda2_error={s['mean_rel_lambda2_error']:.4f}")
    print(f"outputs written to {args.out}")
    return 0


def cmd_oracle(args) -> int:
    cfg = load_config(args.config)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed).spawn(3)[0])
    pos = harness.place_team(cfg, rng)
    g = graph_oracle.build_graph(np.array(pos), cfg.radio, cfg.weights)
    if g.n >= 2:
        spec = graph_oracle.fiedler(g)
        print(f"lambda2 = {spec.lambda2!r}")
        print("fiedler_vector =", " ".join(repr(v) for v in spec.fiedler_vector))
    else:
        print("lambda2 = undefined (n < 2)")
    print(f"connected = {graph_oracle.is_connected(g)}")
    return 0


def cmd_replay(args) -> int:
    trace = Path(args.trace)
    cfg = load_config(trace / "config.toml")
    with tempfile.TemporaryDirectory() as tmp:
        harness.run(cfg, out_dir=tmp)
        names = ["metrics.csv", "trajectories.csv"]
        if cfg.log_messages:
            names.append("messages.csv")
        ok = True
        for name in names:
            same = filecmp.cmp(trace / name, Path(tmp) / name, shallow=False)
            print(f"{name}: {'PASS' if same else 'FAIL'}")
            ok = ok and same
    return 0 if ok else 1


def main(argv=None) -> int:
    _setup_logging()
    p = argparse.ArgumentParser(prog="swarmconn")
    sub = p.add_subparsers(dest="cmd", required=True)

    pr = sub.add_parser("run", help="run a scenario and write output files")
    pr.add_argument("--config", required=True)
    pr.add_argument("--seed", type=int, default=None,
                    help="override the seed from the config file")
    pr.add_argument("--out", required=True)
    pr.set_defaults(func=cmd_run)

    po = sub.add_parser("oracle", help="print lambda2/Fiedler for the initial layout")
    po.add_argument("--config", required=True)
    po.set_defaults(func=cmd_oracle)

    pp = sub.add_parser("replay", help="re-run a trace and verify byte-identical outputs")
    pp.add_argument("--trace", required=True)
    pp.set_defaults(func=cmd_replay)

    args = p.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
