"""Screened Coulomb interaction in a spatially dispersive bulk medium.

The static longitudinal permittivity of the hydrodynamic Drude model is

    eps(k, 0) = 1 + (omega_p_bound / omega_0)^2 + omega_p^2 / (beta k)^2,

bound electrons contributing the constant eps_b and free carriers the
1/k^2 term that screens completely at long wavelength. The interaction is
available in closed form (Yukawa with k_s = omega_p / (beta sqrt(eps_b)))
and as a direct sine-transform quadrature of the Fourier representation;
the two must agree, which is how the closed form is validated here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import epsilon_0

from . import kernels
from .core import (
    DEFAULT_QUADRATURE,
    DomainError,
    QuadratureSpec,
    ValueWithError,
    _require_finite,
)
from .quadrature import sine_integral


@dataclass(frozen=True)
class DrudeStatic:
    """Static-limit hydrodynamic Drude parameters (all rad/s except beta in m/s).

    gamma_free and gamma_bound are accepted for schema fidelity but drop out
    of every zero-frequency result.
    """

    omega_p: float
    omega_p_bound: float
    omega_0: float
    beta: float
    gamma_free: float = 0.0
    gamma_bound: float = 0.0

    def __post_init__(self):
        for name in ("omega_p", "omega_p_bound", "omega_0", "beta",
                     "gamma_free", "gamma_bound"):
            object.__setattr__(self, name, _require_finite(getattr(self, name), name))
        if self.omega_p < 0.0:
            raise DomainError(f"omega_p must be >= 0, got {self.omega_p!r}")
        if self.omega_p_bound < 0.0:
            raise DomainError(f"omega_p_bound must be >= 0, got {self.omega_p_bound!r}")
        if not (self.omega_0 > 0.0):
            raise DomainError(f"omega_0 must be > 0, got {self.omega_0!r}")
        if not (self.beta > 0.0):
            raise DomainError(f"beta must be > 0, got {self.beta!r}")
        if self.gamma_free < 0.0 or self.gamma_bound < 0.0:
            raise DomainError("damping constants must be >= 0")

    @property
    def eps_b(self) -> float:
        """Bound-electron background permittivity, >= 1."""
        return 1.0 + (self.omega_p_bound / self.omega_0) ** 2

    @property
    def k_s(self) -> float:
        """Inverse screening length omega_p / (beta sqrt(eps_b)), in 1/m."""
        return self.omega_p / (self.beta * math.sqrt(self.eps_b))


@dataclass(frozen=True)
class NonlocalBulk:
    """Homogeneous spatially dispersive medium."""

    drude: DrudeStatic


def eps_longitudinal_static(k: float, p: DrudeStatic) -> float:
    """eps(k, 0) = eps_b + omega_p^2 / (beta k)^2 for k > 0."""
    if not (k > 0.0):
        raise DomainError(f"wavenumber k must be > 0, got {k!r}")
    return p.eps_b + (p.omega_p / (p.beta * k)) ** 2


def screened_potential(r: float, qA: float, qB: float, p: DrudeStatic) -> float:
    """Closed-form interaction qA qB exp(-k_s r) / (4 pi eps0 eps_b r), in joules."""
    if not (r > 0.0):
        raise DomainError(f"separation r must be > 0, got {r!r}")
    return qA * qB * math.exp(-p.k_s * r) / (4.0 * math.pi * epsilon_0 * p.eps_b * r)


def screened_potential_numeric(r: float, qA: float, qB: float, p: DrudeStatic,
                               spec: QuadratureSpec = DEFAULT_QUADRATURE) -> ValueWithError:
    """The same interaction by sine-transform quadrature of the k-space kernel.

    U = qA qB / (2 pi^2 eps0) * integral_0^inf sin(k r) k
        / (r (eps_b k^2 + (omega_p/beta)^2)) dk

    The complex exponential form is reduced to this real transform by the
    even/odd split, so the oscillatory engine runs with no complex arithmetic.
    """
    if not (r > 0.0):
        raise DomainError(f"separation r must be > 0, got {r!r}")
    w = (p.omega_p / p.beta) ** 2
    eps_b = p.eps_b

    def f(k: np.ndarray) -> np.ndarray:
        return kernels.screening_integrand(k, r, eps_b, w)

    # The raw transform tends to (pi/2) exp(-k_s r)/(r eps_b); give abs_tol
    # a floor at 1e-12 of the unscreened level when the caller left it at 0.
    pref = qA * qB / (2.0 * math.pi ** 2 * epsilon_0)
    abs_kernel = spec.abs_tol / abs(pref) if (spec.abs_tol > 0.0 and pref != 0.0) \
        else 1e-12 * math.pi / (2.0 * r * eps_b)
    kspec = QuadratureSpec(rel_tol=spec.rel_tol, abs_tol=abs_kernel,
                           max_panels=spec.max_panels, accel_order=spec.accel_order)
    k_scale = max(p.k_s, 1.0 / r)
    got = sine_integral(f, r, kspec, k_scale=k_scale)
    return ValueWithError(pref * got.value, abs(pref) * got.abs_err)
