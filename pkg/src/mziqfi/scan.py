"""Scans over arg(alpha1), arg(alpha2) at fixed resources (n1, n2, r)."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .closed_form import closed_form_entries
from .qfi import ModelKind, QfiMatrix, all_models

COLUMNS = ("theta1", "theta2", "F11", "F12", "F22", "Fa", "Fb", "Fc", "Fd")
MODEL_COLUMN = {
    ModelKind.A_NUISANCE: 5,
    ModelKind.B_ANTISYMMETRIC: 6,
    ModelKind.C_UPPER_ARM: 7,
    ModelKind.D_LOWER_ARM: 8,
}
# relative slack for treating two grid values as tied
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class ScanGrid:
    n1: float
    n2: float
    r: float
    theta1_steps: int = 64
    theta2_steps: int = 64
    model: ModelKind = ModelKind.A_NUISANCE

    def __post_init__(self):
        for name in ("n1", "n2", "r"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
        if self.theta1_steps < 8 or self.theta2_steps < 8:
            raise ValueError("need at least 8 steps per angle")

    def thetas(self) -> tuple[np.ndarray, np.ndarray]:
        t1 = 2 * math.pi * np.arange(self.theta1_steps) / self.theta1_steps
        t2 = 2 * math.pi * np.arange(self.theta2_steps) / self.theta2_steps
        return t1, t2


@dataclass
class ScanResult:
    grid: ScanGrid
    rows: np.ndarray  # shape (theta1_steps * theta2_steps, len(COLUMNS)), theta1-major
    argmax_per_model: dict[ModelKind, tuple[float, float, float]] = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, COLUMNS.index(name)]


@dataclass(frozen=True)
class RefineResult:
    theta1: float
    theta2: float
    value: float
    converged: bool = True


def evaluate(grid: ScanGrid, theta1: float, theta2: float) -> tuple[float, ...]:
    """One scan row at the given arguments."""
    a1 = math.sqrt(grid.n1) * cmath.exp(1j * theta1)
    a2 = math.sqrt(grid.n2) * cmath.exp(1j * theta2)
    f = QfiMatrix(*closed_form_entries(a1, grid.r, a2))
    models = all_models(f)
    return (theta1, theta2, f.f11, f.f12, f.f22, *(models[m] for m in ModelKind))


def model_value(grid: ScanGrid, theta1: float, theta2: float, model: ModelKind | None = None) -> float:
    return evaluate(grid, theta1, theta2)[MODEL_COLUMN[model or grid.model]]


def _argmax(rows: np.ndarray, col: int) -> tuple[float, float, float]:
    values = rows[:, col]
    best = values.max()
    # rows are theta1-major, so the first near-tie is the lexicographic minimum
    i = int(np.flatnonzero(values >= best - TIE_RTOL * max(1.0, abs(best)))[0])
    return float(rows[i, 0]), float(rows[i, 1]), float(values[i])


def run_scan(grid: ScanGrid) -> ScanResult:
    t1s, t2s = grid.thetas()
    rows = np.array([evaluate(grid, t1, t2) for t1 in t1s for t2 in t2s])
    argmax = {m: _argmax(rows, col) for m, col in MODEL_COLUMN.items()}
    return ScanResult(grid, rows, argmax)


def refine_max(
    grid: ScanGrid,
    seed: tuple[float, float],
    model: ModelKind | None = None,
    tol: float = 1e-8,
    max_iter: int = 10_000,
) -> RefineResult:
    """Coordinate ascent with step halving, starting from a grid argmax.

    Only strict improvements are accepted, so the result is never worse than
    the seed. Stops once the step is so small that no move can change the
    value by more than ``tol``.
    """
    model = model or grid.model
    x = [float(seed[0]), float(seed[1])]
    best = model_value(grid, x[0], x[1], model)
    step = 2 * math.pi / min(grid.theta1_steps, grid.theta2_steps)
    for _ in range(max_iter):
        moved = False
        for axis in (0, 1):
            for sign in (1.0, -1.0):
                trial = list(x)
                trial[axis] += sign * step
                v = model_value(grid, trial[0], trial[1], model)
                if v > best:
                    x, best, moved = trial, v, True
                    break
        if not moved:
            step /= 2
            # landscape is smooth in the angles: a step this small moves the
            # value by far less than tol near a stationary point
            if step < math.sqrt(tol) * 1e-2:
                return RefineResult(x[0], x[1], best)
    return RefineResult(x[0], x[1], best, converged=False)
