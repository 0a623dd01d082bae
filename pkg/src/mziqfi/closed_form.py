"""Analytic moments and QFI for the displaced-squeezed x coherent input.

Two independent routes to the QFI matrix live here: the final closed form
(``qfi_closed_form``) and the assembly from single-mode moments
(``qfi_from_moments``). They must agree identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .optics import InputSpec
from .qfi import QfiMatrix


@dataclass(frozen=True)
class MomentSet:
    """Single-mode moments <a>, <a^dag a>, <a a>, <a^dag^2 a>, <(a^dag a)^2>."""

    a_mean: complex
    n_mean: float
    aa: complex
    adad_a: complex
    n2: float

    @property
    def variance(self) -> float:
        return self.n2 - self.n_mean**2


@dataclass(frozen=True)
class ThetaPair:
    theta1: float
    theta2: float


def moments_displaced_squeezed(alpha1: complex, r: float) -> MomentSet:
    if r < 0:
        raise ValueError(f"squeeze parameter must be >= 0, got {r}")
    a = complex(alpha1)
    ac = a.conjugate()
    sh, ch = math.sinh(r), math.cosh(r)
    sh2r = math.sinh(2 * r)
    n_mean = abs(a) ** 2 + sh**2
    return MomentSet(
        a_mean=a,
        n_mean=n_mean,
        aa=a * a - 0.5 * sh2r,
        adad_a=2 * ac * sh**2 - 0.5 * a * sh2r + ac * abs(a) ** 2,
        n2=n_mean**2 + 0.5 * sh2r**2 + abs(a * sh - ac * ch) ** 2,
    )


def moments_coherent(alpha2: complex) -> MomentSet:
    a = complex(alpha2)
    n = abs(a) ** 2
    return MomentSet(a_mean=a, n_mean=n, aa=a * a, adad_a=a.conjugate() * n, n2=n**2 + n)


def thetas(alpha1: complex, r: float, alpha2: complex) -> ThetaPair:
    ep, em = math.exp(2 * r), math.exp(-2 * r)
    return ThetaPair(
        theta1=alpha1.real**2 * em + alpha1.imag**2 * ep,
        theta2=alpha2.imag**2 * em + alpha2.real**2 * ep,
    )


def closed_form_entries(alpha1: complex, r: float, alpha2: complex) -> tuple[float, float, float]:
    """(F11, F12, F22) over (phi_plus, phi_minus)."""
    alpha1, alpha2 = complex(alpha1), complex(alpha2)
    th = thetas(alpha1, r, alpha2)
    f11 = abs(alpha2) ** 2 + math.sinh(2 * r) ** 2 / 2 + th.theta1
    f22 = abs(alpha1) ** 2 + math.sinh(r) ** 2 + th.theta2
    f12 = -(alpha1 * alpha2).imag * math.sinh(2 * r) + 2 * (alpha1.conjugate() * alpha2).imag * math.cosh(r) ** 2
    return f11, f12, f22


def qfi_closed_form(spec: InputSpec) -> QfiMatrix:
    return QfiMatrix(*closed_form_entries(spec.alpha1, spec.r, spec.alpha2))


# Assembly of the QFI entries from product-state moments.


def f11_from_moments(m1: MomentSet, m2: MomentSet) -> float:
    return m1.n2 + m2.n2 - m1.n_mean**2 - m2.n_mean**2


def f22_from_moments(m1: MomentSet, m2: MomentSet) -> float:
    a1, a2 = m1.a_mean, m2.a_mean
    val = (
        -m1.aa.conjugate() * m2.aa
        - m1.aa * m2.aa.conjugate()
        + m1.n_mean * (1 + m2.n_mean)
        + (1 + m1.n_mean) * m2.n_mean
        - abs(a1.conjugate() * a2 - a1 * a2.conjugate()) ** 2
    )
    return val.real


def f12_from_moments(m1: MomentSet, m2: MomentSet) -> float:
    a1d, a2 = m1.a_mean.conjugate(), m2.a_mean
    n1_a1d = m1.adad_a + a1d  # a^dag a a^dag = a^dag^2 a + a^dag
    n2_a2 = m2.adad_a.conjugate()  # a^dag a a = (a^dag^2 a)^dag
    term = -1j * n1_a1d * a2 - 1j * a1d * n2_a2 + 1j * (m1.n_mean + m2.n_mean) * a1d * a2
    return 2 * term.real  # term + c.c.


def qfi_from_moments(alpha1: complex, r: float, alpha2: complex) -> QfiMatrix:
    m1 = moments_displaced_squeezed(alpha1, r)
    m2 = moments_coherent(alpha2)
    return QfiMatrix(f11_from_moments(m1, m2), f12_from_moments(m1, m2), f22_from_moments(m1, m2))


def f_a_max(n1: float, n2: float, r: float) -> float:
    """Largest nuisance-model QFI at fixed n1, n2, r (reached for real alphas)."""
    if n1 < 0 or n2 < 0 or r < 0:
        raise ValueError("resources must be nonnegative")
    return n1 + math.sinh(r) ** 2 + n2 * math.exp(2 * r)


def f_c_special(r: float) -> float:
    """Upper-arm QFI when alpha1 = i alpha2, i.e. Re a1 = -Im a2, Im a1 = Re a2.

    The lower-arm model gives the same value for alpha1 = -i alpha2.
    """
    if r < 0:
        raise ValueError(f"squeeze parameter must be >= 0, got {r}")
    return (2 + math.cosh(2 * r)) * math.sinh(r) ** 2


def f_c_special_ns(ns: float) -> float:
    """Same value in terms of the squeezed-vacuum photon number ns = sinh^2 r."""
    return (3 + 2 * ns) * ns
