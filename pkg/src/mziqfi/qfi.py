"""Two-parameter QFI matrix, model reductions and reparametrization.

The parameter basis is (phi_plus, phi_minus) unless tagged otherwise; index 1
is the common phase, index 2 the relative phase.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .fock import FockVector, TwoModeOperator, number_op, su2_generators
from .optics import PhasePair

PSD_TOL = 1e-9
FD_STEP_RANGE = (1e-6, 1e-2)


class NumericalQualityError(ArithmeticError):
    """A QFI matrix is non-PSD beyond tolerance."""


class NoInformationError(ValueError):
    """The Fisher information for the requested parameter is zero."""


class DegenerateNuisanceError(ValueError):
    """Common-phase information is zero but the relative phase still couples to it."""


class DegenerateNuisanceWarning(UserWarning):
    pass


class Basis(enum.Enum):
    PLUS_MINUS = "plus_minus"  # (phi_plus, phi_minus)
    ARM = "arm"  # (phi_1, phi_2)
    CUSTOM = "custom"


class ModelKind(enum.Enum):
    A_NUISANCE = "a"
    B_ANTISYMMETRIC = "b"
    C_UPPER_ARM = "c"
    D_LOWER_ARM = "d"

    @classmethod
    def parse(cls, label: str) -> ModelKind:
        return cls(label.strip().lower())


@dataclass(frozen=True)
class QfiMatrix:
    f11: float
    f12: float
    f22: float
    basis: Basis = Basis.PLUS_MINUS

    def __post_init__(self):
        for name in ("f11", "f12", "f22"):
            object.__setattr__(self, name, float(getattr(self, name)))
        scale = max(1.0, abs(self.f11), abs(self.f22))
        if self.f11 < -PSD_TOL * scale or self.f22 < -PSD_TOL * scale or self.det < -PSD_TOL * max(1.0, self.f11 * self.f22):
            raise NumericalQualityError(f"QFI matrix is not positive semidefinite: {self}")

    @classmethod
    def from_array(cls, m, basis: Basis = Basis.PLUS_MINUS) -> QfiMatrix:
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], 0.5 * (m[0, 1] + m[1, 0]), m[1, 1], basis)

    def as_array(self) -> np.ndarray:
        return np.array([[self.f11, self.f12], [self.f12, self.f22]])

    @property
    def det(self) -> float:
        return self.f11 * self.f22 - self.f12**2

    def max_abs_diff(self, other: QfiMatrix) -> float:
        return float(np.max(np.abs(self.as_array() - other.as_array())))


@dataclass(frozen=True)
class JacobianSpec:
    """d(phi_plus, phi_minus)/d(f, g); ``basis`` tags the result of the transform."""

    j: np.ndarray
    labels: tuple[str, str] = ("f", "g")
    basis: Basis = Basis.CUSTOM

    def __post_init__(self):
        j = np.array(self.j, dtype=float)
        if j.shape != (2, 2):
            raise ValueError(f"jacobian must be 2x2, got {j.shape}")
        if abs(np.linalg.det(j)) <= 1e-12:
            raise ValueError("singular jacobian: the reparametrization is not invertible")
        j.setflags(write=False)
        object.__setattr__(self, "j", j)


# phi_plus = phi1 + phi2, phi_minus = phi1 - phi2
ARM_JACOBIAN = JacobianSpec(np.array([[1.0, 1.0], [1.0, -1.0]]), ("phi1", "phi2"), Basis.ARM)
IDENTITY_JACOBIAN = JacobianSpec(np.eye(2), ("phi_plus", "phi_minus"), Basis.PLUS_MINUS)


@dataclass(frozen=True)
class CramerRaoBound:
    variance_lower_bound: float
    repetitions: int = field(default=1)


def _covariance_qfi(psi: np.ndarray, generators: list[np.ndarray]) -> np.ndarray:
    applied = [g @ psi for g in generators]
    means = [np.vdot(psi, x) for x in applied]
    n = len(generators)
    out = np.empty((n, n))
    for j in range(n):
        for k in range(n):
            out[j, k] = 4 * np.real(np.vdot(applied[j], applied[k]) - np.conj(means[j]) * means[k])
    return out


def qfi_generator_path(state: FockVector, pre_unitary: TwoModeOperator) -> QfiMatrix:
    """QFI from generator covariances, F = 4 Cov(N/2, J3) on pre_unitary|state>.

    Evaluating the arm-frame generators N/2 and J3 after ``pre_unitary`` equals
    evaluating N/2 and pre_unitary^dagger J3 pre_unitary (J2 for the 50:50
    splitter) on the input itself.
    """
    trunc = state.trunc
    if pre_unitary.trunc != trunc:
        raise ValueError("pre_unitary and state use different truncations")
    psi = state.flat
    if abs(np.vdot(psi, psi).real - 1.0) > trunc.leak_tol:
        raise ValueError("input state is not normalized")
    psi = pre_unitary.mat @ psi
    half_n = number_op("total", trunc).mat / 2
    _, _, j3 = su2_generators(trunc)
    return QfiMatrix.from_array(_covariance_qfi(psi, [half_n, j3.mat]))


def conjugated_generator(pre_unitary: TwoModeOperator) -> TwoModeOperator:
    """pre_unitary^dagger J3 pre_unitary, the relative-phase generator seen by the input."""
    _, _, j3 = su2_generators(pre_unitary.trunc)
    mat = pre_unitary.mat.conj().T @ j3.mat @ pre_unitary.mat
    return TwoModeOperator(0.5 * (mat + mat.conj().T), pre_unitary.trunc, hermitian_hint=True)


def qfi_from_derivatives(psi: np.ndarray, derivs: list[np.ndarray]) -> np.ndarray:
    """Pure-state QFI 4 Re(<d_j psi|d_k psi> - <d_j psi|psi><psi|d_k psi>)."""
    n = len(derivs)
    proj = [np.vdot(psi, d) for d in derivs]  # <psi|d_k psi>
    out = np.empty((n, n))
    for j in range(n):
        for k in range(n):
            out[j, k] = 4 * np.real(np.vdot(derivs[j], derivs[k]) - np.conj(proj[j]) * proj[k])
    return out


def qfi_finite_difference_path(
    state: FockVector,
    pipeline: Callable[[PhasePair], FockVector],
    at: PhasePair = PhasePair(0.0, 0.0),
    step: float = 1e-4,
) -> QfiMatrix:
    """QFI from central-difference derivative states in the phi_plus / phi_minus directions.

    ``pipeline`` maps phases to the full interferometer output for ``state``.
    Derivative states are not renormalized.
    """
    lo, hi = FD_STEP_RANGE
    if not lo <= step <= hi:
        raise ValueError(f"step must lie in [{lo}, {hi}], got {step}")

    def out(plus: float, minus: float) -> np.ndarray:
        v = pipeline(PhasePair.from_plus_minus(plus, minus))
        if v.trunc != state.trunc:
            raise ValueError("pipeline changed the truncation")
        return v.flat

    p, m = at.plus, at.minus
    psi = out(p, m)
    d_plus = (out(p + step, m) - out(p - step, m)) / (2 * step)
    d_minus = (out(p, m + step) - out(p, m - step)) / (2 * step)
    return QfiMatrix.from_array(qfi_from_derivatives(psi, [d_plus, d_minus]))


def _require_plus_minus(f: QfiMatrix) -> None:
    if f.basis is not Basis.PLUS_MINUS:
        raise ValueError(f"expected a (phi_plus, phi_minus) QFI matrix, got basis {f.basis.value}")


def model_qfi(f: QfiMatrix, model: ModelKind) -> float:
    """Scalar QFI about the relative phase under each parametrization model."""
    _require_plus_minus(f)
    if model is ModelKind.A_NUISANCE:
        tiny = 1e-12 * max(1.0, abs(f.f22))
        if f.f11 <= tiny:
            if abs(f.f12) > tiny:
                raise DegenerateNuisanceError("F11 vanishes while F12 does not")
            warnings.warn("common phase carries no information; model A reduces to F22", DegenerateNuisanceWarning, stacklevel=2)
            return f.f22
        return f.f22 - f.f12**2 / f.f11
    if model is ModelKind.B_ANTISYMMETRIC:
        return f.f22
    if model is ModelKind.C_UPPER_ARM:
        return f.f11 + 2 * f.f12 + f.f22
    if model is ModelKind.D_LOWER_ARM:
        return f.f11 - 2 * f.f12 + f.f22
    raise ValueError(f"unknown model {model!r}")


def all_models(f: QfiMatrix) -> dict[ModelKind, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateNuisanceWarning)
        return {m: model_qfi(f, m) for m in ModelKind}


def reparametrize(f: QfiMatrix, jac: JacobianSpec) -> QfiMatrix:
    """Congruence J^T F J into the (f, g) basis."""
    m = jac.j.T @ f.as_array() @ jac.j
    return QfiMatrix.from_array(m, jac.basis)


def constrained_qfi(f: QfiMatrix, jac: JacobianSpec, free_index: int) -> float:
    """QFI about the free new parameter when the other one is held constant."""
    if free_index not in (1, 2):
        raise ValueError(f"free_index must be 1 or 2, got {free_index}")
    g = reparametrize(f, jac)
    return g.f11 if free_index == 1 else g.f22


def crb(qfi_scalar: float, repetitions: int = 1) -> CramerRaoBound:
    """Var >= 1 / (nu F)."""
    if int(repetitions) != repetitions or repetitions < 1:
        raise ValueError(f"repetitions must be a positive integer, got {repetitions}")
    if not qfi_scalar > 0:
        raise NoInformationError(f"QFI {qfi_scalar} carries no information")
    return CramerRaoBound(1.0 / (repetitions * qfi_scalar), int(repetitions))
