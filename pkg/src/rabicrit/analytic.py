"""Closed-form infinite-frequency-ratio results: squeezing parameters,
displacement, photon-number variances in both phases, and the short-time
Gaussian law for the Loschmidt echo."""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, log, sinh, sqrt

import numpy as np

from .errors import PhaseDomainError
from .hamiltonians import RabiParams, displaced_frame

# |lam - 1| below this is reported as critical rather than evaluated: the
# closed forms diverge and would silently overflow downstream plots.
CRITICAL_BAND = 1e-6


def _check_normal(lam: float):
    if lam < 0:
        raise PhaseDomainError(f"lam must be non-negative, got {lam}")
    if 1.0 - lam < CRITICAL_BAND:
        raise PhaseDomainError(
            f"lam={lam} is critical or superradiant; normal-phase closed forms "
            "require lam < 1"
        )


def _check_superradiant(lam: float):
    if lam - 1.0 < CRITICAL_BAND:
        raise PhaseDomainError(
            f"lam={lam} is critical or normal; superradiant closed forms "
            "require lam > 1"
        )


@dataclass(frozen=True)
class AnalyticGroundState:
    phase: str               # "normal" | "superradiant"
    r: float                 # squeezing parameter
    alpha_disp: float        # displacement (0 in the normal phase)
    epsilon: float           # excitation frequency of the diagonalized form
    energy: float            # ground energy on the low spin branch
    gamma: float             # photon-number variance
    mean_n: float            # average photon number


def squeezing_np(lam: float) -> float:
    """Normal-phase squeezing r = -ln(1 - lam^2)/4, for 0 <= lam < 1."""
    _check_normal(lam)
    return -0.25 * log(1.0 - lam**2)


def variance_np(p: RabiParams) -> float:
    """Photon-number variance of the normal-phase ground state:
    sinh^2(2 r)/2 + (g/omega_0)^2 e^{-2 r}."""
    r = squeezing_np(p.lam)
    return 0.5 * sinh(2.0 * r) ** 2 + (p.g / p.omega_0) ** 2 * exp(-2.0 * r)


def superradiant_frame(p: RabiParams) -> tuple[float, float]:
    """(alpha_lambda, r_sp) of the displaced superradiant description."""
    lam = p.lam
    _check_superradiant(lam)
    alpha = sqrt(p.omega_0 * (lam**4 - 1.0) / (4.0 * lam**2 * p.omega_c))
    r_sp = -0.25 * log(1.0 - lam**-4)
    return alpha, r_sp


def variance_sp(p: RabiParams) -> float:
    """Photon-number variance of the superradiant ground state:
    sinh^2(2 r)/2 + alpha^2 e^{2 r} + (g~/omega0~)^2 e^{-2 r}."""
    alpha, r = superradiant_frame(p)
    frame = displaced_frame(p, alpha)
    ratio2 = (frame.g_tilde / frame.omega0_tilde) ** 2
    return (
        0.5 * sinh(2.0 * r) ** 2
        + alpha**2 * exp(2.0 * r)
        + ratio2 * exp(-2.0 * r)
    )


def variance(p: RabiParams) -> float:
    """Phase-dispatched closed-form variance."""
    if p.lam < 1.0:
        return variance_np(p)
    return variance_sp(p)


def short_time_le(gamma: float, chi: float, t) -> np.ndarray | float:
    """Gaussian short-time law L(t) = exp(-4 gamma chi^2 t^2)."""
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    t = np.asarray(t, dtype=float)
    out = np.exp(-4.0 * gamma * chi**2 * t**2)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    return out if out.ndim else float(out)


def analytic_ground_state(p: RabiParams) -> AnalyticGroundState:
    """Infinite-eta ground-state summary in whichever phase lam selects.

    The superradiant branch energy uses the tilded spin splitting
    omega0~ = lam^2 omega_0 (the rotated two-level spacing), which is the
    form consistent with the known ground energy -omega_0 (lam^2 +
    lam^-2)/4 for lam > 1.
    """
    lam = p.lam
    if lam < 1.0:
        r = squeezing_np(lam)
        eps = p.omega_c * sqrt(1.0 - lam**2)
        energy = 0.5 * (eps - p.omega_c - p.omega_0)
        return AnalyticGroundState(
            phase="normal",
            r=r,
            alpha_disp=0.0,
            epsilon=eps,
            energy=energy,
            gamma=variance_np(p),
            mean_n=sinh(r) ** 2,
        )
    alpha, r = superradiant_frame(p)
    frame = displaced_frame(p, alpha)
    eps = p.omega_c * sqrt(1.0 - lam**-4)
    energy = 0.5 * (eps - p.omega_c - frame.omega0_tilde) + p.omega_c * alpha**2
    return AnalyticGroundState(
        phase="superradiant",
        r=r,
        alpha_disp=alpha,
        epsilon=eps,
        energy=energy,
        gamma=variance_sp(p),
        mean_n=sinh(r) ** 2 + alpha**2,
    )
