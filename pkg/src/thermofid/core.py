"""Model-agnostic thermodynamics kernel.

Turns any log-partition function lnZ(beta, lam) into free energies,
finite-difference response functions, and temperature/field fidelities.
Partition functions are handled exclusively in log space; every fidelity
ratio is a difference of logs exponentiated at the end, so systems whose
Z overflows double precision still evaluate cleanly.

Conventions: k_B = 1, beta = 1/T. Perturbations are specified in
temperature; the matching beta perturbation is always derived as
dbeta = dT / (T (T + dT)).
"""

import math
import sys
import warnings
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

from .errors import DomainError, EvaluationError, StepTooSmall

# A second difference whose magnitude is below this multiple of the
# epsilon-level cancellation noise in its terms is indistinguishable
# from rounding error.
NOISE_FACTOR = 10.0

# Relative size of the default temperature / field steps.
DEFAULT_STEP_FRACTION = 1e-3


@runtime_checkable
class ThermoModel(Protocol):
    """Contract every model satisfies: a log-partition function plus metadata."""

    name: str
    size_hint: int | None

    def log_z(self, beta: float, lam: float) -> float: ...


@dataclass(frozen=True)
class ThermoPoint:
    """A point (beta, lam) in the inverse-temperature / control-parameter plane."""

    beta: float
    lam: float

    def __post_init__(self):
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise DomainError(f"beta must be positive and finite, got {self.beta}")
        if not math.isfinite(self.lam):
            raise DomainError(f"lam must be finite, got {self.lam}")

    @property
    def temperature(self) -> float:
        return 1.0 / self.beta


@dataclass(frozen=True)
class PerturbationSpec:
    """Temperature and field perturbations used to form fidelity pairs."""

    delta_t: float
    delta_lambda: float

    def __post_init__(self):
        if not (self.delta_t > 0.0 and math.isfinite(self.delta_t)):
            raise DomainError(f"delta_t must be positive, got {self.delta_t}")
        if not (self.delta_lambda > 0.0 and math.isfinite(self.delta_lambda)):
            raise DomainError(f"delta_lambda must be positive, got {self.delta_lambda}")

    @classmethod
    def defaults_for(cls, point: ThermoPoint) -> "PerturbationSpec":
        return cls(
            delta_t=DEFAULT_STEP_FRACTION * point.temperature,
            delta_lambda=DEFAULT_STEP_FRACTION * max(abs(point.lam), 1.0),
        )

    def warn_if_large(self, point: ThermoPoint, fraction=0.1):
        """Warn (never fail) when the perturbations are not small for this point."""
        if self.delta_t * point.beta > fraction:
            warnings.warn(
                f"delta_t={self.delta_t} is not small against T={point.temperature}",
                stacklevel=2,
            )
        if self.delta_lambda > fraction * max(abs(point.lam), 1.0):
            warnings.warn(
                f"delta_lambda={self.delta_lambda} is not small against lam={point.lam}",
                stacklevel=2,
            )


def delta_beta(temperature, delta_t):
    """Inverse-temperature shift produced by a temperature shift delta_t."""
    return delta_t / (temperature * (temperature + delta_t))


def _log_z(model, beta, lam):
    value = model.log_z(beta, lam)
    if not math.isfinite(value):
        raise EvaluationError(
            f"{model.name}: non-finite lnZ at beta={beta}, lam={lam}"
        )
    return value


def _guard_noise_floor(diff, parts, context):
    """Reject a second difference that is pure cancellation noise.

    A zero difference built from bitwise-identical terms is a legitimately
    flat result and passes through; a (near-)zero difference of unequal terms
    is below the resolvable floor and raises.
    """
    if diff == 0.0 and all(p == parts[0] for p in parts):
        return
    scale = sum(abs(p) for p in parts)
    if abs(diff) < NOISE_FACTOR * sys.float_info.epsilon * scale:
        raise StepTooSmall(
            f"{context}: second difference {diff:.3e} is below the "
            f"cancellation noise floor; increase the step"
        )


def free_energy(model, point):
    """Free energy F = -lnZ(beta, lam) / beta."""
    return -_log_z(model, point.beta, point.lam) / point.beta


def log_fidelity_beta(model, beta0, beta1, lam):
    """lnZ((b0+b1)/2) - lnZ(b0)/2 - lnZ(b1)/2: the log of the temperature fidelity."""
    if not (beta0 > 0.0 and beta1 > 0.0):
        raise DomainError("inverse temperatures must be positive")
    mid = 0.5 * (beta0 + beta1)
    # the symmetric combination keeps F(b0, b1) == F(b1, b0) bitwise
    return _log_z(model, mid, lam) - 0.5 * (
        _log_z(model, beta0, lam) + _log_z(model, beta1, lam)
    )


def fidelity_beta(model, beta0, beta1, lam):
    """Fidelity between thermal states at beta0 and beta1, same lam.

    Exactly 1 when beta0 == beta1; at most 1 whenever lnZ is convex in beta.
    """
    return math.exp(log_fidelity_beta(model, beta0, beta1, lam))


def specific_heat(model, point, delta_t):
    """Central second difference of F in T: Cv = -T [F(T+h)+F(T-h)-2F(T)]/h^2, h = delta_t/2.

    Converges to -T d2F/dT2 with O(delta_t^2) error at analytic points.
    """
    t = point.temperature
    if delta_t <= 0.0:
        raise DomainError(f"delta_t must be positive, got {delta_t}")
    if t - 0.5 * delta_t <= 0.0:
        raise DomainError(f"delta_t={delta_t} too large for T={t}")
    h = 0.5 * delta_t
    f_plus = free_energy(model, ThermoPoint(1.0 / (t + h), point.lam))
    f_minus = free_energy(model, ThermoPoint(1.0 / (t - h), point.lam))
    f_mid = free_energy(model, point)
    diff = f_plus + f_minus - 2.0 * f_mid
    _guard_noise_floor(diff, (f_plus, f_minus, f_mid, f_mid), "specific_heat")
    return -t * diff / h**2


def fidelity_susceptibility_beta(model, point, delta_t):
    """Perturbation-independent temperature fidelity susceptibility -2 lnF / dbeta^2.

    Approaches Cv / (4 beta^2) as delta_t -> 0.
    """
    t = point.temperature
    if delta_t <= 0.0:
        raise DomainError(f"delta_t must be positive, got {delta_t}")
    beta1 = 1.0 / (t + delta_t)
    dbeta = point.beta - beta1
    mid = 0.5 * (point.beta + beta1)
    z_mid = _log_z(model, mid, point.lam)
    z0 = _log_z(model, point.beta, point.lam)
    z1 = _log_z(model, beta1, point.lam)
    ln_f = z_mid - 0.5 * (z0 + z1)
    _guard_noise_floor(ln_f, (z_mid, z0, z1), "fidelity_susceptibility_beta")
    return -2.0 * ln_f / dbeta**2


def susceptibility_lambda(model, point, delta_lambda):
    """Susceptibility -d2F/dlam2 by central second difference with h = delta_lambda/2."""
    if delta_lambda <= 0.0:
        raise DomainError(f"delta_lambda must be positive, got {delta_lambda}")
    h = 0.5 * delta_lambda
    f_plus = free_energy(model, ThermoPoint(point.beta, point.lam + h))
    f_minus = free_energy(model, ThermoPoint(point.beta, point.lam - h))
    f_mid = free_energy(model, point)
    diff = f_plus + f_minus - 2.0 * f_mid
    _guard_noise_floor(diff, (f_plus, f_minus, f_mid, f_mid), "susceptibility_lambda")
    return -diff / h**2


def log_fidelity_lambda_approx(model, beta, lam0, lam1):
    """Log of the commuting-approximation field fidelity Z(mid)/sqrt(Z0 Z1)."""
    if beta <= 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    mid = 0.5 * (lam0 + lam1)
    return _log_z(model, beta, mid) - 0.5 * (
        _log_z(model, beta, lam0) + _log_z(model, beta, lam1)
    )


def fidelity_lambda_approx(model, beta, lam0, lam1):
    """Field fidelity in the commuting approximation.

    Accurate when beta^3 |lam1-lam0|^3 is small; the dense-matrix pipeline
    in thermofid.exact provides the exact value and the validity bound.
    """
    return math.exp(log_fidelity_lambda_approx(model, beta, lam0, lam1))


def fidelity_susceptibility_lambda(model, beta, lam, delta_lambda):
    """Perturbation-independent field fidelity susceptibility -2 lnF / dlam^2.

    Approaches beta * chi / 4 at high temperature.
    """
    if delta_lambda <= 0.0:
        raise DomainError(f"delta_lambda must be positive, got {delta_lambda}")
    h = 0.5 * delta_lambda
    z_mid = _log_z(model, beta, lam)
    z0 = _log_z(model, beta, lam - h)
    z1 = _log_z(model, beta, lam + h)
    ln_f = z_mid - 0.5 * (z0 + z1)
    _guard_noise_floor(ln_f, (z_mid, z0, z1), "fidelity_susceptibility_lambda")
    return -2.0 * ln_f / delta_lambda**2


def log_z_convexity_defect(model, betas, lam):
    """Most negative scaled second difference of lnZ over a uniform beta grid.

    Returns min_i (lnZ[i+1] + lnZ[i-1] - 2 lnZ[i]) / max(|lnZ[i]|, 1); a value
    >= -1e-8 certifies discrete convexity of lnZ in beta (Var(H) >= 0), which
    in turn guarantees fidelity_beta <= 1.
    """
    betas = [float(b) for b in betas]
    if len(betas) < 3:
        raise DomainError("need at least three beta values")
    steps = [betas[i + 1] - betas[i] for i in range(len(betas) - 1)]
    if any(s <= 0 for s in steps):
        raise DomainError("beta grid must be strictly increasing")
    if max(steps) - min(steps) > 1e-9 * max(steps):
        raise DomainError("beta grid must be uniform")
    z = [_log_z(model, b, lam) for b in betas]
    defect = math.inf
    for i in range(1, len(z) - 1):
        d2 = z[i + 1] + z[i - 1] - 2.0 * z[i]
        defect = min(defect, d2 / max(abs(z[i]), 1.0))
    return defect
