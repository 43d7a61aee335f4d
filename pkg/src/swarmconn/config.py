"""Scenario configuration: TOML loading, validation, defaults.

The config file is standard TOML (flat keys plus nested sections); the
full grammar with every key and default is documented in the README.
Unknown keys are rejected so typos cannot silently fall back to
defaults.
"""
from __future__ import annotations

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field

from .control import Gains, LJParams, RobustnessParams, VParams
from .graph_oracle import WeightParams
from .netsim import RadioModel
from .pi_estimator import default_alpha


@dataclass(frozen=True)
class PiConfig:
    alpha: float          # 0 = auto: 1 / (2 * degree_bound + 1)
    correction_period: int = 10
    degree_bound: float = 0.0  # 0 = auto: n - 1 (weights are <= 1)

    def __post_init__(self):
        if self.correction_period < 1:
            raise ValueError("correction_period must be >= 1")


@dataclass(frozen=True)
class FailureModel:
    mtbf: float | None = None  # seconds; None disables failures

    def __post_init__(self):
        if self.mtbf is not None and self.mtbf <= 0:
            raise ValueError("mtbf must be positive")


@dataclass(frozen=True)
class ScenarioConfig:
    n: int
    ticks: int
    seed: int = 0
    dt: float = 0.1
    dim: int = 2
    arena: tuple[float, ...] = (50.0, 50.0)
    radio: RadioModel = field(default_factory=RadioModel)
    weights: WeightParams = field(default_factory=WeightParams)
    gains: Gains = field(default_factory=Gains)
    v_max: float = 1.0
    lj: LJParams = field(default_factory=LJParams)
    robustness: RobustnessParams = field(default_factory=RobustnessParams)
    vparams: VParams = field(default_factory=VParams)
    pi: PiConfig = field(default_factory=lambda: PiConfig(alpha=0.0))
    failure: FailureModel = field(default_factory=FailureModel)
    placement: str = "connected"       # "connected" | "uniform" | "explicit"
    initial_positions: tuple | None = None
    ttl: int = 5
    digest_period: int = 1
    log_messages: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.ticks < 1:
            raise ValueError("ticks must be >= 1")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if not (1 <= self.dim <= 8):
            raise ValueError("dim must be in [1, 8]")
        if len(self.arena) != self.dim:
            raise ValueError("arena size list must match dim")
        if any(a <= 0 for a in self.arena):
            raise ValueError("arena sides must be positive")
        if self.v_max <= 0:
            raise ValueError("v_max must be positive")
        if self.ttl < 1:
            raise ValueError("ttl must be >= 1")
        if self.digest_period < 1:
            raise ValueError("digest_period must be >= 1")
        if self.placement not in ("connected", "uniform", "explicit"):
            raise ValueError(f"unknown placement mode {self.placement!r}")
        if self.placement == "explicit":
            if self.initial_positions is None or len(self.initial_positions) != self.n:
                raise ValueError("explicit placement needs n initial positions")
            for p in self.initial_positions:
                if len(p) != self.dim:
                    raise ValueError("initial position dimension mismatch")

    # resolved hyper-parameters -------------------------------------------
    @property
    def sigma_w(self) -> float:
        return self.weights.resolve_sigma(self.radio.comm_range)

    @property
    def alpha(self) -> float:
        if self.pi.alpha > 0:
            return self.pi.alpha
        bound = self.pi.degree_bound if self.pi.degree_bound > 0 else max(1, self.n - 1)
        return default_alpha(bound)

    @property
    def max_hops(self) -> int:
        return self.radio.max_hops


_SECTIONS = {
    "arena": {"width", "height", "sides"},
    "radio": {"comm_range", "drop_prob", "max_hops"},
    "weights": {"mode", "sigma_w"},
    "gains": {"sigma", "psi", "zeta", "v_max"},
    "lj": {"a", "b", "delta", "iota"},
    "robustness": {"k", "r", "trigger"},
    "potential": {"epsilon_lambda", "scale"},
    "pi": {"alpha", "correction_period", "degree_bound"},
    "failure": {"mtbf"},
    "placement": {"mode", "positions"},
    "netsim": {"ttl", "digest_period"},
    "logging": {"messages"},
}
_TOP_KEYS = {"n", "ticks", "seed", "dt", "dim"} | set(_SECTIONS)


def _check_keys(table: dict, allowed: set, where: str):
    for k in table:
        if k not in allowed:
            raise ValueError(f"unknown key {k!r} in {where}")


def from_dict(raw: dict) -> ScenarioConfig:
    """Validate a parsed config dict and fill defaults."""
    _check_keys(raw, _TOP_KEYS, "top level")
    for sec in _SECTIONS:
        if sec in raw:
            if not isinstance(raw[sec], dict):
                raise ValueError(f"section {sec!r} must be a table")
            _check_keys(raw[sec], _SECTIONS[sec], f"[{sec}]")

    if "n" not in raw:
        raise ValueError("missing required key 'n'")
    if "ticks" not in raw:
        raise ValueError("missing required key 'ticks'")
    n = int(raw["n"])
    dim = int(raw.get("dim", 2))

    ar = raw.get("arena", {})
    if "sides" in ar:
        arena = tuple(float(x) for x in ar["sides"])
    else:
        arena = (float(ar.get("width", 50.0)), float(ar.get("height", 50.0)))
        if dim != 2 and "width" not in ar and "height" not in ar:
            arena = (50.0,) * dim

    rd = raw.get("radio", {})
    comm_range = float(rd.get("comm_range", 16.0))
    radio = RadioModel(
        comm_range=comm_range,
        drop_prob=float(rd.get("drop_prob", 0.0)),
        max_hops=int(rd.get("max_hops", n)),
    )

    wt = raw.get("weights", {})
    weights = WeightParams(
        mode=str(wt.get("mode", "smooth")),
        sigma_w=float(wt["sigma_w"]) if "sigma_w" in wt else None,
    )
    if weights.mode not in ("smooth", "binary"):
        raise ValueError(f"unknown weights.mode {weights.mode!r}")

    gn = raw.get("gains", {})
    gains = Gains(
        sigma=float(gn.get("sigma", 1.0)),
        psi=float(gn.get("psi", 1.0)),
        zeta=float(gn.get("zeta", 1.0)),
    )
    v_max = float(gn.get("v_max", 1.0))

    lj_raw = raw.get("lj", {})
    lj = LJParams(
        a=float(lj_raw.get("a", 4.0)),
        b=float(lj_raw.get("b", 2.0)),
        delta=float(lj_raw.get("delta", comm_range)),
        iota=float(lj_raw.get("iota", 10.0)),
    )

    rb = raw.get("robustness", {})
    trigger = str(rb.get("trigger", "above"))
    if trigger not in ("above", "below"):
        raise ValueError("robustness.trigger must be 'above' or 'below'")
    robustness = RobustnessParams(
        k=int(rb.get("k", 1)),
        r=float(rb.get("r", 0.3)),
        trigger_above=(trigger == "above"),
    )

    pot = raw.get("potential", {})
    vparams = VParams(
        epsilon_lambda=float(pot.get("epsilon_lambda", 0.05)),
        scale=float(pot.get("scale", 1.0)),
    )

    pi_raw = raw.get("pi", {})
    pi = PiConfig(
        alpha=float(pi_raw.get("alpha", 0.0)),
        correction_period=int(pi_raw.get("correction_period", 10)),
        degree_bound=float(pi_raw.get("degree_bound", 0.0)),
    )

    fl = raw.get("failure", {})
    mtbf = fl.get("mtbf")
    failure = FailureModel(mtbf=float(mtbf) if mtbf else None)

    pl = raw.get("placement", {})
    positions = pl.get("positions")
    placement = str(pl.get("mode", "explicit" if positions is not None else "connected"))
    if positions is not None:
        positions = tuple(tuple(float(c) for c in p) for p in positions)

    ns = raw.get("netsim", {})
    lg = raw.get("logging", {})

    return ScenarioConfig(
        n=n,
        ticks=int(raw["ticks"]),
        seed=int(raw.get("seed", 0)),
        dt=float(raw.get("dt", 0.1)),
        dim=dim,
        arena=arena,
        radio=radio,
        weights=weights,
        gains=gains,
        v_max=v_max,
        lj=lj,
        robustness=robustness,
        vparams=vparams,
        pi=pi,
        failure=failure,
        placement=placement,
        initial_positions=positions,
        ttl=int(ns.get("ttl", 5)),
        digest_period=int(ns.get("digest_period", 1)),
        log_messages=bool(lg.get("messages", True)),
    )


def load_config(path) -> ScenarioConfig:
    with open(path, "rb") as f:
        raw = tomllib.load(f)
    return from_dict(raw)


def to_toml(cfg: ScenarioConfig) -> str:
    """Serialize the fully resolved config (used to make runs replayable)."""
    lines = [
        f"n = {cfg.n}",
        f"ticks = {cfg.ticks}",
        f"seed = {cfg.seed}",
        f"dt = {cfg.dt!r}",
        f"dim = {cfg.dim}",
        "",
        "[arena]",
        f"sides = [{', '.join(repr(a) for a in cfg.arena)}]",
        "",
        "[radio]",
        f"comm_range = {cfg.radio.comm_range!r}",
        f"drop_prob = {cfg.radio.drop_prob!r}",
        f"max_hops = {cfg.radio.max_hops}",
        "",
        "[weights]",
        f'mode = "{cfg.weights.mode}"',
        f"sigma_w = {cfg.sigma_w!r}",
        "",
        "[gains]",
        f"sigma = {cfg.gains.sigma!r}",
        f"psi = {cfg.gains.psi!r}",
        f"zeta = {cfg.gains.zeta!r}",
        f"v_max = {cfg.v_max!r}",
        "",
        "[lj]",
        f"a = {cfg.lj.a!r}",
        f"b = {cfg.lj.b!r}",
        f"delta = {cfg.lj.delta!r}",
        f"iota = {cfg.lj.iota!r}",
        "",
        "[robustness]",
        f"k = {cfg.robustness.k}",
        f"r = {cfg.robustness.r!r}",
        f'trigger = "{"above" if cfg.robustness.trigger_above else "below"}"',
        "",
        "[potential]",
        f"epsilon_lambda = {cfg.vparams.epsilon_lambda!r}",
        f"scale = {cfg.vparams.scale!r}",
        "",
        "[pi]",
        f"alpha = {cfg.alpha!r}",
        f"correction_period = {cfg.pi.correction_period}",
        "",
        "[netsim]",
        f"ttl = {cfg.ttl}",
        f"digest_period = {cfg.digest_period}",
        "",
        "[logging]",
        f"messages = {'true' if cfg.log_messages else 'false'}",
    ]
    if cfg.failure.mtbf is not None:
        lines += ["", "[failure]", f"mtbf = {cfg.failure.mtbf!r}"]
    if cfg.initial_positions is not None:
        pts = ", ".join("[" + ", ".join(repr(c) for c in p) + "]"
                        for p in cfg.initial_positions)
        lines += ["", "[placement]", 'mode = "explicit"', f"positions = [{pts}]"]
    else:
        lines += ["", "[placement]", f'mode = "{cfg.placement}"']
    return "\n".join(lines) + "\n"
