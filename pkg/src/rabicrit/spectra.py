"""Exact ground states by dense Hermitian eigendecomposition, photon
statistics, parity, and automatic cutoff convergence."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, LayoutError
from .hilbert import FockCutoff, Operator, QuantumState

CUTOFF_HARD_CAP = 4096


@dataclass(frozen=True)
class GroundStateResult:
    energy: float
    state: QuantumState
    cutoff_used: FockCutoff
    converged: bool
    energy_drift: float


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude amplitude real-positive (global phase)."""
    k = int(np.argmax(np.abs(vec)))
    phase = vec[k] / abs(vec[k])
    return vec * phase.conjugate()


def ground_state(h: Operator) -> GroundStateResult:
    """Lowest eigenpair of a Hermitian operator.

    The cutoff recorded is inferred from the last (boson) subsystem label.
    Convergence against cutoff doubling is the caller's concern; see
    `converge_cutoff` / `converged_ground_state`.
    """
    if not h.is_hermitian():
        raise ValueError("ground_state requires a Hermitian operator")
    w, v = np.linalg.eigh(h.mat)
    vec = _fix_phase(v[:, 0])
    state = QuantumState(vec / np.linalg.norm(vec), h.dims)
    return GroundStateResult(
        energy=float(w[0]),
        state=state,
        cutoff_used=FockCutoff(h.dims[-1] - 1),
        converged=True,
        energy_drift=0.0,
    )


def photon_moments(psi: QuantumState, boson_axis: int = -1) -> tuple[float, float]:
    """Mean and variance of the photon number in `psi`.

    `boson_axis` indexes the entry of `psi.dims` that is the Fock factor.
    """
    ndims = len(psi.dims)
    axis = boson_axis % ndims
    nb = psi.dims[axis]
    if nb < 2:
        raise LayoutError(f"axis {boson_axis} of dims {psi.dims} is not a boson factor")
    amp = psi.vec.reshape(psi.dims)
    amp = np.moveaxis(amp, axis, -1).reshape(-1, nb)
    prob = (np.abs(amp) ** 2).sum(axis=0)
    n = np.arange(nb, dtype=float)
    mean = float(prob @ n)
    mean2 = float(prob @ n**2)
    return mean, max(mean2 - mean**2, 0.0)


def operator_moments(psi: QuantumState, op: Operator) -> tuple[float, float]:
    """Mean and variance of a Hermitian operator in `psi`."""
    v = psi.vec
    ov = op.mat @ v
    mean = float(np.real(np.vdot(v, ov)))
    mean2 = float(np.real(np.vdot(ov, ov)))
    return mean, max(mean2 - mean**2, 0.0)


def parity_operator(cutoff: FockCutoff) -> Operator:
    """Pi = exp{i pi [a^dag a + (1 + sigma_z)/2]} on spin (x) Fock.

    Diagonal with entries (-1)^(n + 1) on the |e> block and (-1)^n on |g>.
    """
    n = np.arange(cutoff.dim)
    fock_sign = (-1.0) ** n
    diag = np.concatenate([-fock_sign, fock_sign]).astype(complex)
    return Operator(np.diag(diag), (2, cutoff.dim))


def converge_cutoff(
    builder: Callable[[FockCutoff], Operator],
    tol: float,
    n_start: int = 8,
) -> FockCutoff:
    """Smallest tested cutoff whose ground energy shifts by < tol on doubling.

    Doubling sequence n_start, 2 n_start, ...; hard cap 4096.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = n_start
    e_prev = ground_state(builder(FockCutoff(n))).energy
    while 2 * n <= CUTOFF_HARD_CAP:
        e_next = ground_state(builder(FockCutoff(2 * n))).energy
        if abs(e_next - e_prev) < tol:
            return FockCutoff(n)
        n *= 2
        e_prev = e_next
    raise ConvergenceError(
        f"ground energy not converged to {tol} below cutoff {CUTOFF_HARD_CAP}"
    )


def converged_ground_state(
    builder: Callable[[FockCutoff], Operator],
    tol: float,
    n_start: int = 8,
) -> GroundStateResult:
    """Ground state at the converged cutoff, with the doubling drift recorded."""
    cutoff = converge_cutoff(builder, tol, n_start)
    res = ground_state(builder(cutoff))
    e_double = ground_state(builder(FockCutoff(2 * cutoff.n_max))).energy
    drift = abs(res.energy - e_double)
    return GroundStateResult(
        energy=res.energy,
        state=res.state,
        cutoff_used=cutoff,
        converged=drift < tol,
        energy_drift=drift,
    )
