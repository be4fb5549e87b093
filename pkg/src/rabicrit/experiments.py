"""Figure-reproduction sweeps, flat-file config parsing, CSV/JSON reports,
and the tripartite check of the dispersive approximation."""

from __future__ import annotations

import hashlib
import json
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import CRITICAL_BAND
from .dynamics import (
    SpectralDecomposition,
    decoherence_factor,
    evolve,
    loschmidt_echo_sweep,
)
from .hamiltonians import (
    ProbeParams,
    RabiParams,
    alpha_lambda,
    build_branch,
    build_displaced_rabi,
    build_effective_np,
    build_effective_sp,
    build_rabi,
    build_tripartite,
)
from .hilbert import FockCutoff, QuantumState, identity, number, quadrature_x, tensor
from .spectra import converge_cutoff, ground_state, operator_moments, photon_moments
from .variational import solve as variational_solve

SCHEMA_VERSION = 1
CSV_HEADER = "figure,method,lambda,eta,chi,omega_c_t,value_name,value,cutoff,converged"

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5", "custom")
METHODS = ("exact", "effective", "variational", "analytic")

_CONFIG_KEYS = {
    "figure",
    "lambda_grid",
    "eta_grid",
    "time_grid",
    "chi",
    "methods",
    "cutoff_tol",
    "output_path",
}


@dataclass
class SweepConfig:
    figure: str
    lambda_grid: list[float]
    eta_grid: list[float]
    time_grid: list[float]
    chi: float
    methods: list[str]
    cutoff_tol: float = 1e-8
    output_path: str = "."

    def validate(self):
        if self.figure not in FIGURES:
            raise ValueError(f"figure must be one of {FIGURES}, got {self.figure!r}")
        for name, grid in (
            ("lambda_grid", self.lambda_grid),
            ("eta_grid", self.eta_grid),
            ("time_grid", self.time_grid),
        ):
            if not grid:
                raise ValueError(f"{name} must be non-empty")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError(f"{name} must be strictly increasing")
        if self.figure in ("fig3", "fig4", "fig5") and self.chi <= 0:
            raise ValueError("chi must be positive for echo figures")
        if self.cutoff_tol <= 0:
            raise ValueError("cutoff_tol must be positive")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")

    @classmethod
    def from_file(cls, path) -> "SweepConfig":
        """Parse the flat one-key-per-line `key = value` config format."""
        raw = {}
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            raw[key] = value

        def floats(s):
            return [float(v) for v in s.replace(",", " ").split()]

        cfg = cls(
            figure=raw.get("figure", "custom"),
            lambda_grid=floats(raw.get("lambda_grid", "")),
            eta_grid=floats(raw.get("eta_grid", "")),
            time_grid=floats(raw.get("time_grid", "")),
            chi=float(raw.get("chi", "0")),
            methods=raw.get("methods", "analytic").replace(",", " ").split(),
            cutoff_tol=float(raw.get("cutoff_tol", "1e-8")),
            output_path=raw.get("output_path", "."),
        )
        cfg.validate()
        return cfg

    def canonical_text(self) -> str:
        lines = [
            f"figure = {self.figure}",
            "lambda_grid = " + " ".join(_fmt(v) for v in self.lambda_grid),
            "eta_grid = " + " ".join(_fmt(v) for v in self.eta_grid),
            "time_grid = " + " ".join(_fmt(v) for v in self.time_grid),
            f"chi = {_fmt(self.chi)}",
            "methods = " + " ".join(self.methods),
            f"cutoff_tol = {_fmt(self.cutoff_tol)}",
            f"output_path = {self.output_path}",
        ]
        return "\n".join(lines) + "\n"


@dataclass
class RunReport:
    records: list[dict] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION
    provenance: dict = field(default_factory=dict)

    @property
    def degraded(self) -> bool:
        return any(not rec["converged"] for rec in self.records)


def _fmt(x) -> str:
    if x is None or x == "":
        return ""
    return f"{float(x):.17g}"


def critical_lambda_grid(step_fine: float = 0.005, step_coarse: float = 0.02) -> list[float]:
    """Default lam/lam_c grid: fine sampling only near the critical point."""
    lo = np.arange(step_coarse, 0.9, step_coarse)
    mid = np.arange(0.9, 1.1 + step_fine / 2, step_fine)
    hi = np.arange(1.1 + step_coarse, 1.5 + step_coarse / 2, step_coarse)
    grid = np.unique(np.round(np.concatenate([lo, mid, hi]), 10))
    return [float(v) for v in grid if abs(v - 1.0) >= CRITICAL_BAND]


def default_config(figure: str, out_dir: str = ".", cutoff_tol: float = 1e-8) -> SweepConfig:
    """Per-figure default grids; eta and chi follow the reference setups."""
    if figure == "fig1":
        return SweepConfig(
            "fig1", [0.99], [1e3, 2e3, 5e3, 1e4, 2e4, 5e4, 1e5], [0.0], 0.0,
            ["exact", "effective", "variational"], cutoff_tol, out_dir,
        )
    if figure == "fig2":
        return SweepConfig(
            "fig2", [1.01], [1e3, 2e3, 5e3, 1e4, 2e4, 5e4, 1e5], [0.0], 0.0,
            ["exact", "effective", "variational"], cutoff_tol, out_dir,
        )
    if figure == "fig3":
        return SweepConfig(
            "fig3", critical_lambda_grid(), [5000.0],
            [float(t) for t in np.arange(0.0, 101.0, 2.0)], 1e-3,
            ["analytic"], cutoff_tol, out_dir,
        )
    if figure == "fig4":
        return SweepConfig(
            "fig4", critical_lambda_grid(), [2000.0, 4000.0, 6000.0, 8000.0, 10000.0],
            [60.0], 1e-3, ["analytic"], cutoff_tol, out_dir,
        )
    if figure == "fig5":
        return SweepConfig(
            "fig5", critical_lambda_grid(), [1e5], [60.0], 1e-3,
            ["exact", "effective", "variational", "analytic"], cutoff_tol, out_dir,
        )
    raise ValueError(f"no default config for figure {figure!r}")


def _ground_state_records(cfg: SweepConfig, omega_c: float, n_start: int) -> list[dict]:
    """fig1/fig2 rows: ground energy and mean photon number vs eta."""
    lam = cfg.lambda_grid[0]
    records = []
    for eta in cfg.eta_grid:
        p = RabiParams.from_dimensionless(lam, eta, omega_c)
        for method in cfg.methods:
            cutoff = None
            converged = True
            t0 = time.perf_counter()
            if method == "exact":
                if lam <= 1.0:
                    builder = lambda c: build_rabi(p, c)
                    n_op = lambda c: tensor(identity((2,)), number(c))
                else:
                    alpha = alpha_lambda(p)
                    builder = lambda c: build_displaced_rabi(p, alpha, c)[0]
                    n_op = lambda c: tensor(
                        identity((2,)),
                        number(c) + alpha * quadrature_x(c) + alpha**2 * identity((c.dim,)),
                    )
                cutoff = converge_cutoff(builder, cfg.cutoff_tol, n_start)
                gs = ground_state(builder(cutoff))
                energy = gs.energy
                mean_n, _ = operator_moments(gs.state, n_op(cutoff))
            elif method == "effective":
                if lam <= 1.0:
                    builder = lambda c: build_effective_np(p, c)
                    n_op = lambda c: number(c)
                else:
                    alpha = alpha_lambda(p)
                    builder = lambda c: build_effective_sp(p, c)
                    n_op = lambda c: (
                        number(c) + alpha * quadrature_x(c) + alpha**2 * identity((c.dim,))
                    )
                cutoff = converge_cutoff(builder, cfg.cutoff_tol, n_start)
                gs = ground_state(builder(cutoff))
                energy = gs.energy
                mean_n, _ = operator_moments(gs.state, n_op(cutoff))
            elif method == "variational":
                sol = variational_solve(p)
                energy, mean_n = sol.energy, sol.mean_n
            else:
                raise ValueError(f"method {method!r} not meaningful for {cfg.figure}")
            wall = time.perf_counter() - t0
            for name, value in (("energy", energy), ("mean_n", mean_n)):
                records.append(
                    {
                        "figure": cfg.figure,
                        "method": method,
                        "lambda": lam,
                        "eta": eta,
                        "chi": "",
                        "omega_c_t": "",
                        "value_name": name,
                        "value": value,
                        "cutoff": cutoff.n_max if cutoff else "",
                        "converged": converged,
                        "wall_time": wall,
                    }
                )
    return records


def _echo_records(cfg: SweepConfig, omega_c: float, n_start: int, threads: int) -> list[dict]:
    records = []
    probe = ProbeParams.from_chi(cfg.chi, omega_c)
    lambdas = [v for v in cfg.lambda_grid if abs(v - 1.0) >= CRITICAL_BAND]
    for eta in cfg.eta_grid:
        p = RabiParams.from_dimensionless(0.5, eta, omega_c)  # lam overridden per row
        for method in cfg.methods:
            t0 = time.perf_counter()
            sweep = loschmidt_echo_sweep(
                p, probe, lambdas, cfg.time_grid, method,
                cutoff_tol=cfg.cutoff_tol, n_start=n_start, threads=threads,
            )
            wall = time.perf_counter() - t0
            for i, lam in enumerate(sweep.lambdas):
                for j, t in enumerate(sweep.times):
                    records.append(
                        {
                            "figure": cfg.figure,
                            "method": method,
                            "lambda": float(lam),
                            "eta": eta,
                            "chi": cfg.chi,
                            "omega_c_t": float(t),
                            "value_name": "loschmidt_echo",
                            "value": float(sweep.l_matrix[i, j]),
                            "cutoff": sweep.cutoffs[i] if sweep.cutoffs[i] is not None else "",
                            "converged": bool(sweep.converged[i]),
                            "wall_time": wall / max(len(lambdas), 1),
                        }
                    )
    return records


def write_csv(records: list[dict], path: Path):
    lines = [CSV_HEADER]
    for rec in records:
        lines.append(
            ",".join(
                [
                    rec["figure"],
                    rec["method"],
                    _fmt(rec["lambda"]),
                    _fmt(rec["eta"]),
                    _fmt(rec["chi"]),
                    _fmt(rec["omega_c_t"]),
                    rec["value_name"],
                    _fmt(rec["value"]),
                    str(rec["cutoff"]),
                    str(rec["converged"]).lower(),
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n")


def write_gnuplot_script(cfg: SweepConfig, csv_name: str, path: Path):
    if len(cfg.time_grid) > 1 and len(cfg.lambda_grid) > 1:
        body = (
            f"set datafile separator ','\n"
            f"set xlabel 'lambda/lambda_c'\nset ylabel 'omega_c t'\n"
            f"splot '{csv_name}' every ::1 using 3:6:8 with points title 'L'\n"
        )
    else:
        xcol = 4 if len(cfg.eta_grid) > 1 else 3
        body = (
            f"set datafile separator ','\n"
            f"plot '{csv_name}' every ::1 using {xcol}:8 with points title '{cfg.figure}'\n"
        )
    path.write_text(body)


def run(
    config: SweepConfig,
    out_dir=None,
    omega_c: float = 1.0,
    n_start: int = 8,
    threads: int = 1,
) -> RunReport:
    """Execute a sweep, writing `<figure>.csv`, `<figure>.gp`, `report.json`."""
    config.validate()
    out = Path(out_dir if out_dir is not None else config.output_path)
    out.mkdir(parents=True, exist_ok=True)
    if config.figure in ("fig1", "fig2"):
        records = _ground_state_records(config, omega_c, n_start)
    else:
        records = _echo_records(config, omega_c, n_start, threads)
    report = RunReport(
        records=records,
        provenance={
            "config_hash": hashlib.sha256(config.canonical_text().encode()).hexdigest(),
            "code_version": __version__,
        },
    )
    csv_path = out / f"{config.figure}.csv"
    write_csv(records, csv_path)
    write_gnuplot_script(config, csv_path.name, out / f"{config.figure}.gp")
    payload = {
        "schema_version": report.schema_version,
        "provenance": report.provenance,
        "records": records,
    }
    (out / "report.json").write_text(json.dumps(payload, indent=1, sort_keys=True))
    return report


@dataclass(frozen=True)
class DispersiveReport:
    times: np.ndarray
    coherence_exact: np.ndarray
    coherence_predicted: np.ndarray
    max_rel_deviation: float
    dispersive_regime: bool


def validate_dispersive(
    p: RabiParams,
    probe: ProbeParams,
    times,
    cutoff: FockCutoff | None = None,
    cutoff_tol: float = 1e-8,
) -> DispersiveReport:
    """Compare the probe coherence from exact tripartite evolution against the
    branch-echo prediction |D(t)| |alpha* beta| * 2.

    Report-only: warns (never fails) when the dispersive condition
    |Delta_s| >> g_s sqrt(<n> + 1) is violated.
    """
    times = np.asarray(times, dtype=float)
    if cutoff is None:
        cutoff = converge_cutoff(lambda c: build_rabi(p, c), cutoff_tol)
    gs = ground_state(build_rabi(p, cutoff))
    mean_n, _ = photon_moments(gs.state)
    if abs(probe.delta_s) < 10.0 * probe.g_s * np.sqrt(mean_n + 1.0):
        warnings.warn(
            "dispersive condition |Delta_s| >> g_s sqrt(<n>+1) is violated; "
            "large deviations expected",
            stacklevel=2,
        )
    # exact tripartite evolution, probe initialized in alpha|g> + beta|e>
    h3 = build_tripartite(p, probe, cutoff)
    decomp = SpectralDecomposition.of(h3)
    probe_vec = np.array([probe.beta, probe.alpha], dtype=complex)  # (|e>, |g>)
    psi0 = QuantumState(np.kron(probe_vec, gs.state.vec), (2,) + gs.state.dims)
    rabi_dim = gs.state.dim
    sm = np.zeros((2, 2))
    sm[1, 0] = 1.0  # |g><e| on the probe
    sm_full = np.kron(sm, np.eye(rabi_dim))
    # coherence magnitude convention: 2 |<sigma_->| = 2 |rho_eg|
    coherence_exact = np.empty_like(times)
    for k, t in enumerate(times):
        psi_t = evolve(decomp, psi0, t)
        coherence_exact[k] = 2.0 * abs(np.vdot(psi_t.vec, sm_full @ psi_t.vec))
    # branch-echo prediction
    h_g = build_branch(p, probe, "g", cutoff)
    h_e = build_branch(p, probe, "e", cutoff)
    series = decoherence_factor(h_g, h_e, gs.state, times)
    coherence_pred = 2.0 * abs(np.conj(probe.alpha) * probe.beta) * np.abs(series.d_values)
    denom = np.maximum(coherence_pred, 1e-15)
    max_rel = float(np.max(np.abs(coherence_exact - coherence_pred) / denom))
    return DispersiveReport(
        times=times,
        coherence_exact=coherence_exact,
        coherence_predicted=coherence_pred,
        max_rel_deviation=max_rel,
        dispersive_regime=abs(probe.delta_s) >= 10.0 * probe.g_s * np.sqrt(mean_n + 1.0),
    )
