"""Command line front end: experiment orchestration and CSV emission.

Subcommands: speed-scan, qfi-scan, steady-state, propagate, sample-states.
Options come from built-in defaults, overridden by a JSON config file
(--config), overridden in turn by command line flags. Output is CSV with
a '#'-prefixed metadata header; identical config plus seed reproduces the
output byte for byte. Diagnostics go to stderr (GAUSSTHERMO_LOG sets the
level), never data.

Exit codes: 0 success, 2 config error, 3 numerical error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .dynamics import (
    SystemParams,
    build_diffusion,
    build_drift,
    is_stable,
    lyapunov_rhs,
    solve_steady,
    trajectory,
)
from .errors import (
    ConfigError,
    NumericalError,
    PhysicalityError,
    SingularMetricError,
    StabilityError,
    StepSizeError,
    StructuralError,
)
from .geometry import initial_speed, riemannian_speed
from .metrology import qfi_scan
from .sampler import classify_region, sample_rng, sample_state, speed_lower_bound
from .states import (
    assert_physical,
    classify_separability,
    local_squeeze,
    ppt_min_eigenvalue,
    purity,
    simon_invariants,
    symplectic_eigenvalues,
    thermal_state,
    twin_beam,
)

log = logging.getLogger("gaussthermo")

_STATES = ("thermal", "local-squeeze", "twin-beam", "file")
_SPACINGS = ("linear", "log")
_SHIFTS = ("both", "a", "b")


@dataclass
class RunConfig:
    """Full experiment configuration; field names double as config keys."""

    omega_a: float = 1.0
    omega_b: float = 1.0
    k_a: float = 0.1
    k_b: float = 0.1
    gn: float = 0.0
    m_a: float = 0.1
    m_b: float = 0.1
    epsilon: float = 1e-3
    dm: float = 1e-3
    shift: str = "both"
    t_max: float = 50.0
    n_points: int = 200
    spacing: str = "linear"
    seed: int = 0
    samples: int = 10000
    bound_points: int = 39
    state: str | None = None
    state_m_a: float = 0.1
    state_m_b: float = 0.1
    r: float = 2.0
    r_a: float = 2.0
    r_b: float = -2.0
    state_file: str | None = None
    out: str | None = None

    def validate(self) -> None:
        def require(cond: bool, field: str, why: str) -> None:
            if not cond:
                raise ConfigError(f"{field}: {why} (got {getattr(self, field)!r})")

        require(self.omega_a > 0, "omega_a", "must be > 0")
        require(self.omega_b > 0, "omega_b", "must be > 0")
        require(self.k_a > 0, "k_a", "must be > 0")
        require(self.k_b > 0, "k_b", "must be > 0")
        require(self.gn >= 0, "gn", "must be >= 0")
        require(self.m_a >= 0, "m_a", "must be >= 0")
        require(self.m_b >= 0, "m_b", "must be >= 0")
        require(self.epsilon > 0, "epsilon", "must be > 0")
        require(self.dm > 0, "dm", "must be > 0")
        require(self.shift in _SHIFTS, "shift", f"must be one of {_SHIFTS}")
        require(self.t_max >= 0, "t_max", "must be >= 0")
        require(self.n_points >= 1, "n_points", "must be >= 1")
        require(self.spacing in _SPACINGS, "spacing", f"must be one of {_SPACINGS}")
        require(0 <= self.seed < 2**64, "seed", "must fit an unsigned 64-bit integer")
        require(self.samples >= 0, "samples", "must be >= 0")
        require(self.bound_points >= 2, "bound_points", "must be >= 2")
        require(
            self.state is None or self.state in _STATES,
            "state",
            f"must be one of {_STATES}",
        )
        require(self.state_m_a >= 0, "state_m_a", "must be >= 0")
        require(self.state_m_b >= 0, "state_m_b", "must be >= 0")
        if self.state == "file":
            require(bool(self.state_file), "state_file", "required for state=file")

    def params(self) -> SystemParams:
        return SystemParams(
            omega_a=self.omega_a,
            omega_b=self.omega_b,
            k_a=self.k_a,
            k_b=self.k_b,
            gn=self.gn,
            m_a=self.m_a,
            m_b=self.m_b,
        )

    def time_grid(self) -> np.ndarray:
        if self.n_points == 1 or self.t_max == 0.0:
            return np.array([0.0])
        if self.spacing == "linear":
            return np.linspace(0.0, self.t_max, self.n_points)
        tail = np.geomspace(self.t_max * 1e-3, self.t_max, self.n_points - 1)
        return np.concatenate(([0.0], tail))


def load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path}: top level must be an object")
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"config file {path}: unknown keys {unknown}")
    return raw


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then config file values, then explicit flags."""
    cfg = RunConfig()
    if args.config is not None:
        for key, value in load_config_file(args.config).items():
            setattr(cfg, key, value)
    for field in dataclasses.fields(RunConfig):
        flag_value = getattr(args, field.name, None)
        if flag_value is not None:
            setattr(cfg, field.name, flag_value)
    try:
        cfg.validate()
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def initial_state(cfg: RunConfig, fallback: str = "thermal") -> tuple[str, np.ndarray]:
    kind = cfg.state or fallback
    if kind == "thermal":
        return kind, thermal_state(cfg.state_m_a, cfg.state_m_b)
    if kind == "local-squeeze":
        return kind, local_squeeze(np.eye(4), cfg.r_a, cfg.r_b)
    if kind == "twin-beam":
        return kind, twin_beam(cfg.r)
    if kind == "file":
        matrix = np.loadtxt(cfg.state_file)
        return kind, assert_physical(matrix, f"state file {cfg.state_file}")
    raise ConfigError(f"state: unknown kind {kind!r}")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.16e}"
    return str(value)


class CsvWriter:
    """CSV with '#' metadata lines; floats at 17 significant digits."""

    def __init__(self, stream, subcommand: str, cfg: RunConfig) -> None:
        self._stream = stream
        fields = dataclasses.asdict(cfg)
        fields.pop("out")  # destination is not part of the experiment
        echo = json.dumps(fields, sort_keys=True)
        stream.write(f"# gaussthermo {__version__} {subcommand}\n")
        stream.write(f"# config: {echo}\n")

    def header(self, columns: list[str]) -> None:
        self._stream.write(",".join(columns) + "\n")

    def row(self, values: list) -> None:
        self._stream.write(",".join(_fmt(v) for v in values) + "\n")


def run_speed_scan(cfg: RunConfig, stream) -> None:
    params = cfg.params()
    writer = CsvWriter(stream, "speed-scan", cfg)
    writer.header(
        [
            "record",
            "index",
            "mu1",
            "mu2",
            "mu",
            "delta",
            "nu_tilde_minus",
            "classification",
            "v_b_squared",
            "excluded",
        ]
    )
    log.info("speed-scan: %d samples, epsilon=%g", cfg.samples, cfg.epsilon)
    for index in range(cfg.samples):
        _, sigma = sample_state(sample_rng(cfg.seed, index))
        smp = initial_speed(sigma, params, cfg.epsilon)
        writer.row(
            [
                "sample",
                index,
                smp.mu1,
                smp.mu2,
                smp.mu,
                smp.delta,
                smp.nu_tilde_minus,
                smp.classification,
                smp.v_squared,
                smp.excluded,
            ]
        )
    nu_grid = np.linspace(0.05, 1.0, cfg.bound_points)
    log.info("speed-scan: lower bound over %d bins", cfg.bound_points)
    for index, point in enumerate(speed_lower_bound(nu_grid, params, cfg.epsilon)):
        delta = (
            2.0 / point.mu + (point.mu1 - point.mu2) ** 2 / (point.mu1 * point.mu2) ** 2
            if point.feasible
            else float("nan")
        )
        writer.row(
            [
                "bound",
                index,
                point.mu1,
                point.mu2,
                point.mu,
                delta,
                point.nu_tilde_minus,
                "",
                point.v_squared,
                not point.feasible,
            ]
        )


def run_qfi_scan(cfg: RunConfig, stream) -> None:
    params = cfg.params()
    grid = cfg.time_grid()
    if cfg.state is None:
        families = ["thermal", "local-squeeze", "twin-beam"]
    else:
        families = [cfg.state]
    writer = CsvWriter(stream, "qfi-scan", cfg)
    writer.header(["family", "t", "q_m", "q_t"])
    for kind in families:
        label, sigma0 = initial_state(
            dataclasses.replace(cfg, state=kind), fallback=kind
        )
        log.info("qfi-scan: family %s over %d times", label, len(grid))
        for point in qfi_scan(sigma0, params, grid, dm=cfg.dm, shift=cfg.shift):
            writer.row([label, point.t, point.q_m, point.q_t])


def run_steady_state(cfg: RunConfig, stream) -> None:
    params = cfg.params()
    drift = build_drift(params)
    writer = CsvWriter(stream, "steady-state", cfg)
    sigma_cols = [f"sigma_{i}{j}" for i in range(4) for j in range(4)]
    writer.header(
        ["stable"] + sigma_cols + ["nu_plus", "nu_minus", "nu_tilde_minus", "purity"]
    )
    if not is_stable(drift):
        log.warning("steady-state: drift matrix fails the stability test")
        nan = float("nan")
        writer.row([False] + [nan] * 20)
        return
    steady = solve_steady(drift, build_diffusion(params))
    nu_plus, nu_minus = symplectic_eigenvalues(steady)
    writer.row(
        [True]
        + [steady[i, j] for i in range(4) for j in range(4)]
        + [nu_plus, nu_minus, ppt_min_eigenvalue(steady), purity(steady)]
    )


def run_propagate(cfg: RunConfig, stream) -> None:
    params = cfg.params()
    label, sigma0 = initial_state(cfg)
    grid = cfg.time_grid()
    traj = trajectory(sigma0, params, grid)
    drift = build_drift(params)
    diffusion = build_diffusion(params)
    writer = CsvWriter(stream, "propagate", cfg)
    sigma_cols = [f"sigma_{i}{j}" for i in range(4) for j in range(4)]
    writer.header(
        ["t"] + sigma_cols + ["nu_plus", "nu_minus", "nu_tilde_minus", "purity", "v_b_squared"]
    )
    log.info("propagate: state %s over %d times", label, len(grid))
    for t, sigma in zip(traj.times, traj.covariances):
        nu_plus, nu_minus = symplectic_eigenvalues(sigma)
        try:
            speed = riemannian_speed(sigma, lyapunov_rhs(sigma, drift, diffusion))
        except SingularMetricError:
            speed = float("nan")
        writer.row(
            [t]
            + [sigma[i, j] for i in range(4) for j in range(4)]
            + [nu_plus, nu_minus, ppt_min_eigenvalue(sigma), purity(sigma), speed]
        )


def run_sample_states(cfg: RunConfig, stream) -> None:
    writer = CsvWriter(stream, "sample-states", cfg)
    writer.header(
        [
            "index",
            "mu1",
            "mu2",
            "mu",
            "delta",
            "region",
            "a",
            "b",
            "c_plus",
            "c_minus",
            "nu_minus",
            "nu_tilde_minus",
            "classification",
        ]
    )
    for index in range(cfg.samples):
        triple, sigma = sample_state(sample_rng(cfg.seed, index))
        inv = simon_invariants(sigma)
        writer.row(
            [
                index,
                triple.mu1,
                triple.mu2,
                triple.mu,
                triple.delta,
                classify_region(triple),
                inv.a,
                inv.b,
                inv.c_plus,
                inv.c_minus,
                symplectic_eigenvalues(sigma)[1],
                ppt_min_eigenvalue(sigma),
                classify_separability(sigma),
            ]
        )


_RUNNERS = {
    "speed-scan": run_speed_scan,
    "qfi-scan": run_qfi_scan,
    "steady-state": run_steady_state,
    "propagate": run_propagate,
    "sample-states": run_sample_states,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", type=str, default=None, metavar="PATH")
    shared.add_argument("--seed", type=int, default=None, metavar="U64")
    shared.add_argument("--out", type=str, default=None, metavar="PATH")
    for name in ("omega-a", "omega-b", "k-a", "k-b", "gn", "m-a", "m-b",
                 "epsilon", "dm", "t-max", "state-m-a", "state-m-b",
                 "r", "r-a", "r-b"):
        shared.add_argument(f"--{name}", type=float, default=None, metavar="F")
    shared.add_argument("--n-points", type=int, default=None, metavar="U")
    shared.add_argument("--samples", type=int, default=None, metavar="U")
    shared.add_argument("--bound-points", type=int, default=None, metavar="U")
    shared.add_argument("--spacing", choices=_SPACINGS, default=None)
    shared.add_argument("--shift", choices=_SHIFTS, default=None)
    shared.add_argument("--state", choices=_STATES, default=None)
    shared.add_argument("--state-file", type=str, default=None, metavar="PATH")

    parser = argparse.ArgumentParser(
        prog="gaussthermo",
        description="Two-mode Gaussian thermometer scans (CSV output).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("speed-scan", parents=[shared],
                   help="initial Riemannian speed vs entanglement scatter")
    sub.add_parser("qfi-scan", parents=[shared],
                   help="Fisher information vs interaction time")
    sub.add_parser("steady-state", parents=[shared],
                   help="stationary covariance and its invariants")
    sub.add_parser("propagate", parents=[shared],
                   help="covariance trajectory with derived observables")
    sub.add_parser("sample-states", parents=[shared],
                   help="random standard-form states and their invariants")
    return parser


def _configure_logging() -> None:
    levels = {"error": logging.ERROR, "warn": logging.WARNING,
              "info": logging.INFO, "debug": logging.DEBUG}
    level = levels.get(os.environ.get("GAUSSTHERMO_LOG", "warn").lower(), logging.WARNING)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return 2
    except OSError as exc:
        log.error("cannot read config: %s", exc)
        return 4
    runner = _RUNNERS[args.subcommand]
    try:
        if cfg.out is None:
            runner(cfg, sys.stdout)
        else:
            with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                runner(cfg, fh)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return 2
    except (NumericalError, PhysicalityError, StabilityError, StepSizeError,
            StructuralError, ValueError) as exc:
        log.error("numerical error: %s", exc)
        return 3
    except OSError as exc:
        log.error("i/o error: %s", exc)
        return 4
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
