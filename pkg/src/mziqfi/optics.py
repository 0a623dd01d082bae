"""Optical elements and the displaced-squeezed x coherent input state."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import (
    DEFAULT_LEAK_TOL,
    FockVector,
    Truncation,
    TruncationError,
    TwoModeOperator,
    embed,
    ladder,
    su2_generators,
)

# Auto-sizing: first guess and growth step per mode, and the hard ceiling
# beyond which dense two-mode matrices stop being desk-scale.
AUTO_MIN_DIM = 8
AUTO_STEP = 8
AUTO_MAX_DIM = 64


@dataclass(frozen=True)
class InputSpec:
    """Input |alpha1, r> (x) |alpha2>; ``trunc=None`` means auto-size."""

    alpha1: complex
    r: float
    alpha2: complex
    trunc: Truncation | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha1", complex(self.alpha1))
        object.__setattr__(self, "alpha2", complex(self.alpha2))
        object.__setattr__(self, "r", float(self.r))
        if not self.r >= 0.0 or not math.isfinite(self.r):
            raise ValueError(f"squeeze parameter must be finite and >= 0, got {self.r}")
        if not (np.isfinite(self.alpha1) and np.isfinite(self.alpha2)):
            raise ValueError("displacements must be finite")

    @property
    def n1(self) -> float:
        return abs(self.alpha1) ** 2

    @property
    def n2(self) -> float:
        return abs(self.alpha2) ** 2

    @property
    def ns(self) -> float:
        return math.sinh(self.r) ** 2


@dataclass(frozen=True)
class PhasePair:
    phi1: float
    phi2: float

    @classmethod
    def from_plus_minus(cls, plus: float, minus: float) -> PhasePair:
        return cls((plus + minus) / 2, (plus - minus) / 2)

    @property
    def plus(self) -> float:
        return self.phi1 + self.phi2

    @property
    def minus(self) -> float:
        return self.phi1 - self.phi2


def _expm_hermitian(gen: np.ndarray, scale: complex) -> np.ndarray:
    w, v = np.linalg.eigh(gen)
    return (v * np.exp(scale * w)) @ v.conj().T


def _shell_blocks(gen: np.ndarray, trunc: Truncation) -> list[np.ndarray] | None:
    """Flat-index groups per photon-number shell, if ``gen`` never couples two shells."""
    shells = trunc.shells().ravel()
    if np.any(gen[shells[:, None] != shells[None, :]]):
        return None
    return [np.flatnonzero(shells == n) for n in range(shells.max() + 1)]


def hermitian_expm(generator: TwoModeOperator, scale: complex) -> TwoModeOperator:
    """exp(scale * G) for Hermitian G via eigendecomposition.

    Number-conserving generators are diagonalized shell by shell, which is
    exact and turns an O(D^3) decomposition into a handful of small ones.
    """
    if not generator.hermitian_hint:
        raise ValueError("hermitian_expm needs a generator flagged Hermitian")
    trunc = generator.trunc
    blocks = _shell_blocks(generator.mat, trunc)
    if blocks is None:
        out = _expm_hermitian(generator.mat, scale)
    else:
        out = np.zeros_like(generator.mat)
        for idx in blocks:
            out[np.ix_(idx, idx)] = _expm_hermitian(generator.mat[np.ix_(idx, idx)], scale)
    hermitian = np.imag(scale) == 0
    return TwoModeOperator(out, trunc, hermitian_hint=bool(hermitian))


def _displacement_single(alpha: complex, d: int) -> np.ndarray:
    a = ladder(d)
    gen = 1j * (alpha * a.conj().T - np.conj(alpha) * a)
    return _expm_hermitian(gen, -1j)


def _squeeze_single(r: float, d: int) -> np.ndarray:
    a = ladder(d)
    gen = 0.5j * r * (a @ a - a.conj().T @ a.conj().T)
    return _expm_hermitian(gen, -1j)


def displacement(mode: int, alpha: complex, trunc: Truncation) -> TwoModeOperator:
    """D(alpha) = exp(alpha a^dagger - alpha^* a) on one mode."""
    d = trunc.d1 if mode == 1 else trunc.d2
    return embed(_displacement_single(complex(alpha), d), mode, trunc)


def squeeze(mode: int, r: float, trunc: Truncation) -> TwoModeOperator:
    """S(r) = exp(r (a^2 - a^dagger^2) / 2), zero squeeze angle."""
    if r < 0:
        raise ValueError(f"squeeze parameter must be >= 0, got {r}")
    d = trunc.d1 if mode == 1 else trunc.d2
    return embed(_squeeze_single(float(r), d), mode, trunc)


@lru_cache(maxsize=16)
def _beam_splitter(trunc: Truncation) -> TwoModeOperator:
    j1, _, _ = su2_generators(trunc)
    # a1^dagger a2 + a2^dagger a1 = 2 J1
    return hermitian_expm(j1.scaled(2.0), -1j * math.pi / 4)


def beam_splitter(trunc: Truncation, dagger: bool = False) -> TwoModeOperator:
    """50:50 splitter exp(-i pi (a1^dagger a2 + a2^dagger a1) / 4), or its adjoint."""
    u = _beam_splitter(trunc)
    return u.dag if dagger else u


def phase_shift(pair: PhasePair, trunc: Truncation) -> TwoModeOperator:
    """exp(-i phi1 n1 - i phi2 n2); diagonal, exactly unitary."""
    n1, n2 = np.indices(trunc.shape)
    phases = np.exp(-1j * (pair.phi1 * n1 + pair.phi2 * n2)).ravel()
    return TwoModeOperator(np.diag(phases), trunc)


def displaced_squeezed_ket(alpha: complex, r: float, d: int, pad: int | None = None) -> tuple[np.ndarray, float]:
    """Fock amplitudes of D(alpha) S(r)|0> on levels 0..d-1.

    Built in a padded space of ``pad`` levels so the cut ladder only distorts
    levels that are thrown away. Returns (amplitudes, discarded weight).
    """
    pad = pad or 2 * d + 16
    ket = np.zeros(pad, dtype=complex)
    ket[0] = 1.0
    if r != 0:
        ket = _squeeze_single(r, pad) @ ket
    if alpha != 0:
        ket = _displacement_single(alpha, pad) @ ket
    return ket[:d].copy(), float(np.sum(np.abs(ket[d:]) ** 2))


def _build(alpha1: complex, r: float, alpha2: complex, trunc: Truncation) -> tuple[FockVector, float, float]:
    """State plus (leaked probability, leaked probability weighted by (n + 1)^2)."""
    k1, lost1 = displaced_squeezed_ket(alpha1, r, trunc.d1)
    k2, lost2 = displaced_squeezed_ket(alpha2, 0.0, trunc.d2)
    state = FockVector(np.outer(k1, k2), trunc)
    edge = min(trunc.d1, trunc.d2) - 1  # top two shells: n1 + n2 >= edge
    tail = state.shell_weights()[edge:]
    leaked = lost1 + lost2 + float(np.sum(tail))
    n = np.arange(edge, edge + tail.size)
    weighted = lost1 * (trunc.d1 + 1) ** 2 + lost2 * (trunc.d2 + 1) ** 2 + float(np.sum(tail * (n + 1) ** 2))
    return state, leaked, weighted


def auto_truncation(spec: InputSpec, leak_tol: float = DEFAULT_LEAK_TOL) -> tuple[Truncation, list]:
    """Smallest square truncation on the AUTO_STEP ladder that passes the leakage guard.

    The guard used here weights the lost probability by (n + 1)^2, so that
    second moments (and hence the QFI) are also converged, not just the norm.
    """
    mean = spec.n1 + spec.ns + spec.n2
    d = max(AUTO_MIN_DIM, AUTO_STEP * math.ceil((mean + 2) / AUTO_STEP))
    trace: list[tuple[int, int, float]] = []
    while d <= AUTO_MAX_DIM:
        trunc = Truncation(d, d, leak_tol)
        _, _, weighted = _build(spec.alpha1, spec.r, spec.alpha2, trunc)
        trace.append((d, d, weighted))
        if weighted <= leak_tol:
            return trunc, trace
        d += AUTO_STEP
    raise TruncationError(f"no truncation up to d={AUTO_MAX_DIM} holds the state within {leak_tol}", trace)


def prepare_input(spec: InputSpec) -> FockVector:
    """|psi0> = D(alpha1) S(r)|0> (x) D(alpha2)|0>, guarded against truncation leakage."""
    if spec.trunc is None:
        trunc, _ = auto_truncation(spec)
    else:
        trunc = spec.trunc
    state, leaked, _ = _build(spec.alpha1, spec.r, spec.alpha2, trunc)
    if leaked > trunc.leak_tol:
        raise TruncationError(
            f"truncation {trunc.d1}x{trunc.d2} leaks {leaked:.3e} > {trunc.leak_tol:.1e}",
            [(trunc.d1, trunc.d2, leaked)],
        )
    norm2 = float(np.sum(np.abs(state.amps) ** 2))
    assert abs(norm2 - 1.0) <= trunc.leak_tol, norm2
    return state


def mzi_output(psi0: FockVector, pair: PhasePair) -> FockVector:
    """U_BS^dagger U_phi U_BS |psi0>."""
    trunc = psi0.trunc
    u_bs = beam_splitter(trunc).mat
    n1, n2 = np.indices(trunc.shape)
    phases = np.exp(-1j * (pair.phi1 * n1 + pair.phi2 * n2)).ravel()
    out = u_bs.conj().T @ (phases * (u_bs @ psi0.flat))
    return FockVector.from_flat(out, trunc)
