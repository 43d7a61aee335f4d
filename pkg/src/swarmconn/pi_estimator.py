"""Per-agent decentralized estimation of the Fiedler eigenpair.

Each agent carries one entry x_k of a team-wide vector x and iterates
x <- (I - alpha L) x row-wise using only neighbor values.  Periodically
a team-wide flood spreads (x_k, x_k^2, x_k * (Lx)_k) triples; from the
accumulated sums every agent deflates the all-ones component (the "mean
correction"), rescales, and extracts lambda2 as a Rayleigh quotient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

OVERFLOW_LIMIT = 1e12
COLLAPSE_TOL = 1e-18


@dataclass
class PiState:
    x_k: float
    alpha: float
    iteration: int = 0
    last_correction_iter: int = 0
    lambda2_est: float = 0.0
    round_id: int = -1            # id of the last round this agent initiated
    # consistent snapshot from the most recent pi_step: the pre-update x
    # and the (Lx)_k computed from it (a Rayleigh quotient needs both
    # factors taken at the same iterate)
    last_x: float = 0.0
    last_lx: float = 0.0
    rounds_completed: int = 0
    unstable: bool = False

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")


@dataclass
class FloodAccumulator:
    round_id: int = -1
    sum_x: float = 0.0
    sum_x2: float = 0.0
    sum_xlx: float = 0.0
    count: int = 0
    seen: set = field(default_factory=set)


@dataclass(frozen=True)
class FloodPayload:
    """Contents of one correction-flood message."""
    round_id: int
    x: float
    x2: float
    xlx: float


def pi_step(state: PiState, own_degree: float, neighbor_entries) -> PiState:
    """One power-iteration step: x_k <- x_k - alpha * (Lx)_k.

    neighbor_entries: iterable of (weight, neighbor_x) pairs.
    """
    lx = own_degree * state.x_k
    for w, xj in neighbor_entries:
        lx -= w * xj
    x_new = state.x_k - state.alpha * lx
    unstable = not math.isfinite(x_new) or abs(x_new) > OVERFLOW_LIMIT
    return replace(
        state,
        x_k=x_new,
        last_x=state.x_k,
        last_lx=lx,
        iteration=state.iteration + 1,
        unstable=unstable,
    )


def begin_correction(state: PiState) -> tuple[PiState, FloodPayload]:
    """Open a fresh correction round and emit this agent's flood payload.

    The payload is the consistent (x, x^2, x*(Lx)) snapshot recorded by
    the latest pi_step.  The caller must invoke this on the tick *after*
    a correction was applied, so the snapshot reflects the corrected
    vector; emitting the pre-correction iterate would re-spread the very
    mean component the correction removed.
    """
    rid = state.round_id + 1
    payload = FloodPayload(
        round_id=rid,
        x=state.last_x,
        x2=state.last_x * state.last_x,
        xlx=state.last_x * state.last_lx,
    )
    return replace(state, round_id=rid), payload


def absorb_flood(acc: FloodAccumulator, origin: int, payload: FloodPayload) -> FloodAccumulator:
    """Fold one flood payload into the accumulator.

    Stale rounds are ignored, newer rounds reset the accumulator, and a
    duplicate originator within a round is a no-op (idempotent).
    """
    if payload.round_id < acc.round_id:
        return acc
    if payload.round_id > acc.round_id:
        acc = FloodAccumulator(round_id=payload.round_id)
    if origin in acc.seen:
        return acc
    acc.seen.add(origin)
    return FloodAccumulator(
        round_id=acc.round_id,
        sum_x=acc.sum_x + payload.x,
        sum_x2=acc.sum_x2 + payload.x2,
        sum_xlx=acc.sum_xlx + payload.xlx,
        count=acc.count + 1,
        seen=acc.seen,
    )


def apply_correction(state: PiState, acc: FloodAccumulator, rng) -> PiState:
    """Mean-correct and rescale x_k; refresh the lambda2 estimate.

    lambda2 comes from the Rayleigh quotient of the pre-deflation sums.
    Deflation subtracts the team mean; the rescale uses the exact
    post-deflation norm  sum_x2 - count * mean^2.  If the deflated vector
    collapsed (x was parallel to ones), x_k is reinitialized from the
    agent's seeded stream.
    """
    if acc.count < 1:
        raise ValueError("cannot correct from an empty accumulator")
    lam = max(0.0, acc.sum_xlx / acc.sum_x2) if acc.sum_x2 > COLLAPSE_TOL else state.lambda2_est
    mean = acc.sum_x / acc.count
    sum_x2_deflated = acc.sum_x2 - acc.count * mean * mean
    if sum_x2_deflated < COLLAPSE_TOL:
        x_new = float(rng.uniform(-1.0, 1.0))
    else:
        x_new = (state.x_k - mean) / math.sqrt(sum_x2_deflated)
    return replace(
        state,
        x_k=x_new,
        lambda2_est=lam,
        rounds_completed=state.rounds_completed + 1,
        unstable=False,
    )


def estimate_lambda2(state: PiState, epsilon_lambda: float) -> float:
    """Clamped estimate for the controller; the floor before any round."""
    if state.rounds_completed == 0:
        return epsilon_lambda
    return max(epsilon_lambda, state.lambda2_est)


def default_alpha(degree_bound: float) -> float:
    """Step size guaranteeing |1 - alpha * lambda| < 1 for nonzero lambda."""
    return 1.0 / (2.0 * degree_bound + 1.0)


def init_x(rng) -> float:
    """Seeded start value; uniform in [-1, 1] so x is not parallel to ones."""
    return float(rng.uniform(-1.0, 1.0))
