"""The three control contributions and their combination.

Each agent's commanded velocity is sigma*u_c + psi*u_r + zeta*u_lj,
norm-clamped: a connectivity term descending an energy of the estimated
algebraic connectivity, a robustness pull toward poorly-relayed 2-hop
neighbors, and a Lennard-Jones spacing/coverage term.  All terms depend
only on relative positions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels

D_MIN = 0.01  # meters; Eq-singularity clamp for all inter-agent distances


@dataclass(frozen=True)
class Gains:
    sigma: float = 1.0
    psi: float = 1.0
    zeta: float = 1.0


@dataclass(frozen=True)
class LJParams:
    a: float = 4.0
    b: float = 2.0
    # the pairwise equilibrium sits at ~1.28*delta, so delta = comm_range
    # puts it just beyond radio range: coverage genuinely fights
    # connectivity instead of stalling at a comfortable spacing
    delta: float = 16.0   # target spacing parameter, meters; default comm_range
    iota: float = 10.0

    def __post_init__(self):
        if not (self.a > self.b > 0):
            raise ValueError("need a > b > 0")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.iota < 0:
            raise ValueError("iota must be nonnegative")


@dataclass(frozen=True)
class RobustnessParams:
    k: int = 1
    r: float = 0.3
    # whether the pull fires when nu is above or below the threshold; the
    # trigger direction is deliberately configurable (see README)
    trigger_above: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not (0.0 <= self.r <= 1.0):
            raise ValueError("r must be in [0, 1]")


@dataclass(frozen=True)
class VParams:
    """Connectivity energy V(lam) = coth((lam - eps') / scale), eps' = epsilon_lambda / 2.

    V is nonnegative, strictly decreasing, and blows up as lam -> eps',
    which stays strictly below the clamped estimate floor epsilon_lambda.
    """

    epsilon_lambda: float = 0.05
    scale: float = 1.0

    def __post_init__(self):
        if self.epsilon_lambda <= 0:
            raise ValueError("epsilon_lambda must be positive")
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    def energy(self, lam: float) -> float:
        return 1.0 / math.tanh((lam - self.epsilon_lambda / 2.0) / self.scale)

    def energy_slope(self, lam: float) -> float:
        """V'(lam) = -csch^2((lam - eps')/scale) / scale  (always negative)."""
        sh = math.sinh((lam - self.epsilon_lambda / 2.0) / self.scale)
        return -1.0 / (self.scale * sh * sh)


def connectivity_contribution(lambda2_est, own_fiedler, neighbor_info,
                              vparams: VParams, sigma_w, comm_range,
                              m=2, flags=None):
    """u_c = -V'(lam2) * d(lam2)/d(p_i).

    neighbor_info: list of (neighbor_fiedler, rel_position) with rel =
    p_j - p_i; the Gaussian edge weight is evaluated from rel, so the
    gradient and the weights cannot drift apart.  Coincident neighbors
    (closer than D_MIN) are skipped and counted on `flags`.
    """
    rel = []
    dx2 = []
    for xj, r in neighbor_info:
        rel.extend(r)
        d = own_fiedler - xj
        dx2.append(d * d)
    grad, skipped = kernels.conn_grad(rel, dx2, m, sigma_w, comm_range, D_MIN)
    if skipped and flags is not None:
        flags["conn_coincident"] = flags.get("conn_coincident", 0) + skipped
    c = -vparams.energy_slope(lambda2_est)
    return [c * gc for gc in grad]


def local_robustness(table, k: int) -> float:
    """nu_i^k from an agent's own neighbor table; 0 on an empty neighborhood."""
    pi_size, path = table.two_hop_structure(k)
    if pi_size == 0:
        return 0.0
    return len(path) / pi_size


def robustness_contribution(own_pos, table, params: RobustnessParams,
                            m=2, flags=None):
    """Unit pull toward the barycentre of the vulnerable 2-hop set, or zero.

    Positions in the table are already relative to the agent, so the
    barycentre offset is used directly; own_pos only fixes the dimension.
    """
    zero = [0.0] * m
    pi_size, path = table.two_hop_structure(params.k)
    if pi_size == 0 or not path:
        return zero
    nu = len(path) / pi_size
    fire = nu > params.r if params.trigger_above else nu < params.r
    if not fire:
        return zero
    q = [0.0] * m
    for nid in path:
        rel = table.two_hop[nid][0]
        for c in range(m):
            q[c] += rel[c]
    inv = 1.0 / len(path)
    q = [qc * inv for qc in q]
    norm = math.sqrt(sum(qc * qc for qc in q))
    if norm < D_MIN:
        if flags is not None:
            flags["rob_coincident"] = flags.get("rob_coincident", 0) + 1
        return zero
    return [qc / norm for qc in q]


def coverage_contribution(own_pos, neighbor_rel, params: LJParams, m=2):
    """Summed Lennard-Jones force over neighbors (rel = p_n - p_i)."""
    if not neighbor_rel:
        return [0.0] * m
    flat = []
    for r in neighbor_rel:
        flat.extend(r)
    return kernels.lj_sum(flat, m, params.a, params.b, params.delta,
                          params.iota, D_MIN)


def combine(uc, ur, ulj, gains: Gains, v_max: float):
    """u = sigma*uc + psi*ur + zeta*ulj, norm-clamped to v_max."""
    u = [gains.sigma * a + gains.psi * b + gains.zeta * c
         for a, b, c in zip(uc, ur, ulj)]
    norm = math.sqrt(sum(x * x for x in u))
    if norm > v_max and norm > 0.0:
        s = v_max / norm
        u = [x * s for x in u]
    return u


def lj_equilibrium(params: LJParams, lo=0.05, hi=None) -> float:
    """Separation where the pairwise force vanishes (bisection)."""
    hi = hi if hi is not None else 10.0 * params.delta
    f = lambda d: kernels.lj_force_scalar(d, params.a, params.b, params.delta, params.iota)
    a, b = lo, hi
    fa, fb = f(a), f(b)
    if fa * fb > 0:
        raise ValueError("no sign change in bracket")
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fa * fm <= 0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)
