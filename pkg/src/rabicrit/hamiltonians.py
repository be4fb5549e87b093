"""Hamiltonian builders for the Rabi model, its dispersive-probe branches,
the displaced frame, and the low-spin effective (boson-only) Hamiltonians.

All builders return dense Hermitian `Operator` values. Natural units: the
library accepts any positive omega_c; the CLI fixes omega_c = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import atan, pi, sqrt

import numpy as np

from .errors import PhaseDomainError
from .hilbert import (
    FockCutoff,
    Operator,
    annihilation,
    identity,
    number,
    pauli,
    quadrature_x,
    sigma_minus,
    sigma_plus,
    tensor,
)


@dataclass(frozen=True)
class RabiParams:
    """Rabi-model parameter set (omega_c, omega_0, g).

    The dimensionless coupling lam = 2 g / sqrt(omega_0 omega_c) and the
    frequency ratio eta = omega_0 / omega_c are derived, never stored.
    """

    omega_c: float
    omega_0: float
    g: float

    def __post_init__(self):
        if self.omega_c <= 0 or self.omega_0 <= 0:
            raise ValueError("omega_c and omega_0 must be strictly positive")
        if self.g < 0:
            raise ValueError("g must be non-negative")

    @property
    def lam(self) -> float:
        return 2.0 * self.g / sqrt(self.omega_0 * self.omega_c)

    @property
    def eta(self) -> float:
        return self.omega_0 / self.omega_c

    @property
    def g_c(self) -> float:
        """Critical coupling sqrt(omega_c omega_0) / 2."""
        return sqrt(self.omega_c * self.omega_0) / 2.0

    @classmethod
    def from_dimensionless(cls, lam: float, eta: float, omega_c: float = 1.0) -> "RabiParams":
        omega_0 = eta * omega_c
        return cls(omega_c, omega_0, lam * sqrt(omega_0 * omega_c) / 2.0)


@dataclass(frozen=True)
class ProbeParams:
    """Auxiliary-atom parameters and its initial superposition.

    chi defaults to g_s^2 / delta_s; supplying it explicitly is allowed but
    must be consistent with (g_s, delta_s).
    """

    omega_s: float
    g_s: float
    delta_s: float
    alpha: complex = 1.0 / sqrt(2.0)
    beta: complex = 1.0 / sqrt(2.0)
    chi: float | None = None

    def __post_init__(self):
        if self.delta_s == 0.0:
            raise ValueError("delta_s must be nonzero (dispersive regime)")
        derived = self.g_s**2 / self.delta_s
        if self.chi is None:
            object.__setattr__(self, "chi", derived)
        elif abs(self.chi - derived) > 1e-12 * max(1.0, abs(derived)):
            raise ValueError(
                f"chi={self.chi} inconsistent with g_s^2/delta_s={derived}"
            )
        nrm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {nrm}, must be 1")

    @classmethod
    def from_chi(
        cls,
        chi: float,
        omega_c: float = 1.0,
        delta_s: float | None = None,
        alpha: complex = 1.0 / sqrt(2.0),
        beta: complex = 1.0 / sqrt(2.0),
    ) -> "ProbeParams":
        """Pick a (g_s, delta_s) pair realizing the requested dispersive shift."""
        if delta_s is None:
            delta_s = omega_c
        if chi * delta_s <= 0:
            raise ValueError("chi and delta_s must have the same sign")
        g_s = sqrt(chi * delta_s)
        return cls(omega_c + delta_s, g_s, delta_s, alpha, beta)


@dataclass(frozen=True)
class DisplacedFrame:
    """Parameters of the displaced frame D(alpha_disp)."""

    alpha_disp: float
    theta: float          # spin mixing angle, tan(2 theta) = -4 g alpha / omega_0
    omega0_tilde: float   # lam^2 omega_0
    g_tilde: float        # sqrt(omega_c omega_0) / (2 lam)


def alpha_lambda(p: RabiParams) -> float:
    """Displacement magnitude that removes the linear boson term, lam > 1 only."""
    lam = p.lam
    if lam <= 1.0:
        raise PhaseDomainError(f"alpha_lambda requires lam > 1, got lam={lam}")
    return sqrt(p.omega_0 * (lam**4 - 1.0) / (4.0 * lam**2 * p.omega_c))


def displaced_frame(p: RabiParams, alpha_disp: float) -> DisplacedFrame:
    lam = p.lam
    theta = 0.5 * atan(-4.0 * p.g * alpha_disp / p.omega_0)
    if theta <= -pi / 4.0:
        theta += pi / 2.0
    if lam > 0:
        g_tilde = sqrt(p.omega_c * p.omega_0) / (2.0 * lam)
    else:
        g_tilde = float("inf")
    return DisplacedFrame(alpha_disp, theta, lam**2 * p.omega_0, g_tilde)


def build_rabi(p: RabiParams, cutoff: FockCutoff) -> Operator:
    """H = omega_c a^dag a + (omega_0/2) sigma_z - g sigma_x (a + a^dag)."""
    nb = cutoff.dim
    i2 = identity((2,))
    ib = identity((nb,))
    h = (
        p.omega_c * tensor(i2, number(cutoff))
        + (0.5 * p.omega_0) * tensor(pauli("z"), ib)
        - p.g * tensor(pauli("x"), quadrature_x(cutoff))
    )
    return h


def build_branch(p: RabiParams, probe: ProbeParams, branch: str, cutoff: FockCutoff) -> Operator:
    """Conditional Rabi Hamiltonian given the probe in |e> or |g>.

    branch 'e': cavity frequency omega_c + chi, constant +(omega_s/2 + chi).
    branch 'g': cavity frequency omega_c - chi, constant -omega_s/2.
    """
    if branch not in ("e", "g"):
        raise ValueError(f"branch must be 'e' or 'g', got {branch!r}")
    chi = probe.chi
    if branch == "e":
        omega_b = p.omega_c + chi
        const = 0.5 * probe.omega_s + chi
    else:
        omega_b = p.omega_c - chi
        const = -0.5 * probe.omega_s
    shifted = RabiParams(omega_b, p.omega_0, p.g)
    h = build_rabi(shifted, cutoff)
    return h + const * identity(h.dims)


def build_tripartite(p: RabiParams, probe: ProbeParams, cutoff: FockCutoff) -> Operator:
    """Full Jaynes-Cummings probe plus Rabi model, before the dispersive step.

    Space: probe-spin (x) Rabi-spin (x) Fock, dimension 4 (n_max + 1).
    """
    nb = cutoff.dim
    i2 = identity((2,))
    ib = identity((nb,))
    a = annihilation(cutoff)
    rabi = tensor(i2, build_rabi(p, cutoff))
    h_probe = (0.5 * probe.omega_s) * tensor(pauli("z"), tensor(i2, ib))
    h_jc = (-probe.g_s) * (
        tensor(sigma_minus(), tensor(i2, a.dag()))
        + tensor(sigma_plus(), tensor(i2, a))
    )
    return rabi + h_probe + h_jc


def build_displaced_rabi(
    p: RabiParams, alpha_disp: float, cutoff: FockCutoff
) -> tuple[Operator, DisplacedFrame]:
    """Rabi Hamiltonian conjugated by D(alpha_disp), expanded term-by-term.

    H~ = omega_c (a^dag + alpha)(a + alpha) - g (a + a^dag) sigma_x
         + (omega_0/2) sigma_z - 2 g alpha sigma_x.

    Built analytically (not by numerical conjugation with the truncated
    displacement unitary), so it stays exactly Hermitian for any alpha.
    """
    nb = cutoff.dim
    i2 = identity((2,))
    ib = identity((nb,))
    x = quadrature_x(cutoff)
    boson = p.omega_c * (number(cutoff) + alpha_disp * x + alpha_disp**2 * ib)
    h = (
        tensor(i2, boson)
        + (0.5 * p.omega_0) * tensor(pauli("z"), ib)
        - p.g * tensor(pauli("x"), x)
        - (2.0 * p.g * alpha_disp) * tensor(pauli("x"), ib)
    )
    return h, displaced_frame(p, alpha_disp)


def build_effective_np(p: RabiParams, cutoff: FockCutoff) -> Operator:
    """Fourth-order low-spin effective Hamiltonian of the normal phase.

    Boson-only: omega_c n - (omega_c lam^2/4) x^2 + (lam^4 omega_c^2 /
    (16 omega_0)) x^4 - omega_0/2 + lam^2 omega_c^2 / (4 omega_0),
    with x = a + a^dag.
    """
    lam = p.lam
    x = quadrature_x(cutoff)
    x2 = x @ x
    const = -0.5 * p.omega_0 + lam**2 * p.omega_c**2 / (4.0 * p.omega_0)
    h = (
        p.omega_c * number(cutoff)
        - (p.omega_c * lam**2 / 4.0) * x2
        + (lam**4 * p.omega_c**2 / (16.0 * p.omega_0)) * (x2 @ x2)
        + const * identity(x.dims)
    )
    return h


def build_effective_sp(p: RabiParams, cutoff: FockCutoff) -> Operator:
    """Fourth-order low-spin effective Hamiltonian of the superradiant phase.

    Boson-only, in the frame displaced by alpha_lambda; requires lam > 1.
    """
    lam = p.lam
    if lam <= 1.0:
        raise PhaseDomainError(
            f"superradiant effective Hamiltonian requires lam > 1, got lam={lam}"
        )
    frame = displaced_frame(p, alpha_lambda(p))
    gt, w0t = frame.g_tilde, frame.omega0_tilde
    x = quadrature_x(cutoff)
    x2 = x @ x
    # constant terms kept explicit so ground energies match the bare-frame
    # curves; the g~^2 omega_c / omega0~^2 form is the one consistent with the
    # variational energy constant omega_c^2 / (4 omega0~ lam^4).
    const = (
        -0.5 * w0t
        + gt**2 * p.omega_c / w0t**2
        + p.omega_c * frame.alpha_disp**2
    )
    h = (
        p.omega_c * number(cutoff)
        - (gt**2 / w0t) * x2
        + (gt**4 / w0t**3) * (x2 @ x2)
        + const * identity(x.dims)
    )
    return h
