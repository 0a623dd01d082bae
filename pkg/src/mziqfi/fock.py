"""Truncated two-mode bosonic Fock space.

States are complex amplitude grids ``amps[n1, n2]``; operators are dense
matrices over the row-major flattening ``n1 * d2 + n2`` of that grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Union

import numpy as np

DEFAULT_LEAK_TOL = 1e-8

Mode = Union[Literal[1, 2], Literal["total"]]


class DimensionError(ValueError):
    """Operands live on different truncated spaces."""


class TruncationError(RuntimeError):
    """The kept Fock levels do not hold the state to within ``leak_tol``.

    ``trace`` records every truncation tried, as ``(d1, d2, leaked_weight)``.
    """

    def __init__(self, message: str, trace: list[tuple[int, int, float]] | None = None):
        super().__init__(message)
        self.trace = list(trace or [])


@dataclass(frozen=True)
class Truncation:
    d1: int
    d2: int
    leak_tol: float = DEFAULT_LEAK_TOL

    def __post_init__(self):
        if int(self.d1) != self.d1 or int(self.d2) != self.d2:
            raise ValueError("d1 and d2 must be integers")
        if self.d1 < 2 or self.d2 < 2:
            raise ValueError(f"need d1, d2 >= 2, got ({self.d1}, {self.d2})")
        if not 0.0 < self.leak_tol < 1.0:
            raise ValueError(f"leak_tol must lie in (0, 1), got {self.leak_tol}")

    @property
    def dim(self) -> int:
        return self.d1 * self.d2

    @property
    def shape(self) -> tuple[int, int]:
        return (self.d1, self.d2)

    def shells(self) -> np.ndarray:
        """Total photon number n1 + n2 of every grid point, shape (d1, d2)."""
        n1, n2 = np.indices(self.shape)
        return n1 + n2

    def interior(self) -> np.ndarray:
        """Mask of the flat basis with n1 + n2 <= min(d1, d2) - 2.

        Shells above this are affected by the cut ladder (a and a^dagger stop
        being an exact adjoint pair on the last level).
        """
        return (self.shells() <= min(self.d1, self.d2) - 2).ravel()


def tensor_basis_index(n1: int, n2: int, trunc: Truncation) -> int:
    if not (0 <= n1 < trunc.d1 and 0 <= n2 < trunc.d2):
        raise DimensionError(f"|{n1},{n2}> is outside the {trunc.d1}x{trunc.d2} grid")
    return n1 * trunc.d2 + n2


@dataclass(frozen=True, eq=False)
class FockVector:
    amps: np.ndarray
    trunc: Truncation

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex)
        if amps.shape != self.trunc.shape:
            raise DimensionError(f"amplitude grid {amps.shape} does not match {self.trunc.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def basis(cls, n1: int, n2: int, trunc: Truncation) -> FockVector:
        amps = np.zeros(trunc.shape, dtype=complex)
        tensor_basis_index(n1, n2, trunc)
        amps[n1, n2] = 1.0
        return cls(amps, trunc)

    @classmethod
    def vacuum(cls, trunc: Truncation) -> FockVector:
        return cls.basis(0, 0, trunc)

    @classmethod
    def from_flat(cls, flat: np.ndarray, trunc: Truncation) -> FockVector:
        return cls(np.reshape(flat, trunc.shape), trunc)

    @property
    def flat(self) -> np.ndarray:
        return self.amps.ravel()

    def shell_weights(self) -> np.ndarray:
        """Probability on each total photon-number shell."""
        return np.bincount(self.trunc.shells().ravel(), weights=np.abs(self.flat) ** 2)


@dataclass(frozen=True, eq=False)
class TwoModeOperator:
    mat: np.ndarray
    trunc: Truncation
    hermitian_hint: bool = False

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        if mat.shape != (self.trunc.dim, self.trunc.dim):
            raise DimensionError(f"matrix {mat.shape} does not act on dimension {self.trunc.dim}")
        if self.hermitian_hint:
            scale = np.max(np.abs(mat), initial=0.0)
            if np.max(np.abs(mat - mat.conj().T), initial=0.0) > 1e-12 * scale:
                raise ValueError("operator flagged Hermitian but mat != mat^dagger")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def dag(self) -> TwoModeOperator:
        return TwoModeOperator(self.mat.conj().T, self.trunc, self.hermitian_hint)

    def _check(self, other: TwoModeOperator) -> None:
        if other.trunc != self.trunc:
            raise DimensionError(f"truncation mismatch: {self.trunc} vs {other.trunc}")

    def __matmul__(self, other: TwoModeOperator) -> TwoModeOperator:
        self._check(other)
        return TwoModeOperator(self.mat @ other.mat, self.trunc)

    def __add__(self, other: TwoModeOperator) -> TwoModeOperator:
        self._check(other)
        return TwoModeOperator(self.mat + other.mat, self.trunc, self.hermitian_hint and other.hermitian_hint)

    def __sub__(self, other: TwoModeOperator) -> TwoModeOperator:
        self._check(other)
        return TwoModeOperator(self.mat - other.mat, self.trunc, self.hermitian_hint and other.hermitian_hint)

    def scaled(self, c: complex) -> TwoModeOperator:
        return TwoModeOperator(c * self.mat, self.trunc, self.hermitian_hint and np.imag(c) == 0)


def identity(trunc: Truncation) -> TwoModeOperator:
    return TwoModeOperator(np.eye(trunc.dim), trunc, hermitian_hint=True)


def commutator(x: TwoModeOperator, y: TwoModeOperator) -> TwoModeOperator:
    return x @ y - y @ x


def ladder(d: int) -> np.ndarray:
    """Single-mode annihilator on levels 0..d-1, <n-1|a|n> = sqrt(n)."""
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1)


def embed(single: np.ndarray, mode: int, trunc: Truncation, hermitian: bool = False) -> TwoModeOperator:
    """Lift a single-mode matrix to the two-mode space (row-major kron)."""
    if mode == 1:
        mat = np.kron(single, np.eye(trunc.d2))
    elif mode == 2:
        mat = np.kron(np.eye(trunc.d1), single)
    else:
        raise ValueError(f"mode must be 1 or 2, got {mode!r}")
    return TwoModeOperator(mat, trunc, hermitian_hint=hermitian)


def annihilator(mode: int, trunc: Truncation) -> TwoModeOperator:
    d = trunc.d1 if mode == 1 else trunc.d2
    return embed(ladder(d), mode, trunc)


def creator(mode: int, trunc: Truncation) -> TwoModeOperator:
    return annihilator(mode, trunc).dag


@lru_cache(maxsize=32)
def number_op(mode: Mode, trunc: Truncation) -> TwoModeOperator:
    n1, n2 = np.indices(trunc.shape)
    if mode == 1:
        diag = n1
    elif mode == 2:
        diag = n2
    elif mode == "total":
        diag = n1 + n2
    else:
        raise ValueError(f"mode must be 1, 2 or 'total', got {mode!r}")
    return TwoModeOperator(np.diag(diag.ravel().astype(float)), trunc, hermitian_hint=True)


@lru_cache(maxsize=16)
def su2_generators(trunc: Truncation) -> tuple[TwoModeOperator, TwoModeOperator, TwoModeOperator]:
    """Schwinger two-mode representation (J1, J2, J3).

    Cached per truncation; the returned operators are read-only.
    """
    a1, a2 = annihilator(1, trunc).mat, annihilator(2, trunc).mat
    hop = a1.conj().T @ a2  # a1^dagger a2
    j1 = (hop + hop.conj().T) / 2
    j2 = (hop - hop.conj().T) / 2j
    j3 = (number_op(1, trunc).mat - number_op(2, trunc).mat) / 2
    return tuple(TwoModeOperator(m, trunc, hermitian_hint=True) for m in (j1, j2, j3))


def _same(state: FockVector, other) -> None:
    if state.trunc != other.trunc:
        raise DimensionError(f"truncation mismatch: {state.trunc} vs {other.trunc}")


def apply(op: TwoModeOperator, state: FockVector) -> FockVector:
    _same(state, op)
    return FockVector.from_flat(op.mat @ state.flat, state.trunc)


def inner(u: FockVector, v: FockVector) -> complex:
    """<u|v>, antilinear in ``u``."""
    _same(u, v)
    return complex(np.vdot(u.flat, v.flat))


def norm(state: FockVector) -> float:
    return float(np.linalg.norm(state.flat))


def expect(state: FockVector, op: TwoModeOperator) -> complex:
    _same(state, op)
    psi = state.flat
    return complex(np.vdot(psi, op.mat @ psi))


def expect_product(state: FockVector, *ops: TwoModeOperator) -> complex:
    """<psi| O_1 O_2 ... O_k |psi>, applied right to left as matrix-vector products."""
    psi = state.flat
    v = psi
    for op in reversed(ops):
        _same(state, op)
        v = op.mat @ v
    return complex(np.vdot(psi, v))
