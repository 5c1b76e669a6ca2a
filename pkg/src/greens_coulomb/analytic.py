"""Closed-form static Green's functions.

Uniform medium, planar dielectric interface (image charge), and a grounded
conducting plate with a circular aperture. The aperture solution comes from
the Kelvin inversion of the conducting half-plane problem and degenerates to
the solid-plate image formula as R -> 0 and to free space as R -> infinity.

All values are exact up to roundoff, so abs_err = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels
from .core import (
    CoincidentPointsError,
    DomainError,
    GreensValue,
    OnPlateError,
    OutOfRegionError,
    Permittivity,
    Point3,
    distance,
    finite_eps,
    is_conductor,
    validate_eps,
)

_FOUR_PI = 4.0 * math.pi


def free_space_g(r: Point3, r_src: Point3, eps: float = 1.0) -> GreensValue:
    """g = 1 / (4 pi eps |r - r_src|)."""
    eps = finite_eps(eps)
    dist = distance(r, r_src)
    if dist == 0.0:
        raise CoincidentPointsError("free_space_g: r coincides with r_src")
    return GreensValue(1.0 / (_FOUR_PI * eps * dist))


def interface_reflection(eps1: Permittivity, eps2: Permittivity) -> float:
    """(eps1 - eps2) / (eps1 + eps2); -1 when medium 2 is a perfect conductor."""
    if is_conductor(eps2):
        return -1.0
    if is_conductor(eps1):
        return 1.0
    e1, e2 = float(eps1), float(eps2)
    return (e1 - e2) / (e1 + e2)


def half_space_g(r: Point3, r_src: Point3, eps1: Permittivity,
                 eps2: Permittivity) -> GreensValue:
    """Green's function of two dielectric half-spaces joined at z = 0.

    The source must sit in region 1 (z > 0). For z > 0 field points the
    value is the direct kernel plus a single image reflected in the plane;
    for z < 0 it is the transmitted kernel 2/(eps1 + eps2) * g0. Callers
    with sources at z < 0 swap eps1 <-> eps2 and reflect both points first.
    """
    e1 = finite_eps(eps1, "eps1")
    validate_eps(eps2, "eps2")
    if not (r_src.z > 0.0):
        raise OutOfRegionError(
            "half_space_g: source must have z > 0 (mirror the configuration "
            "and swap eps1/eps2 for sources below the interface)"
        )
    if r == r_src:
        raise CoincidentPointsError("half_space_g: r coincides with r_src")

    if r.z >= 0.0:
        direct = 1.0 / (_FOUR_PI * distance(r, r_src))
        image = 1.0 / (_FOUR_PI * distance(r, r_src.mirror_z()))
        return GreensValue((direct + interface_reflection(eps1, eps2) * image) / e1)

    if is_conductor(eps2):
        return GreensValue(0.0)
    trans = 2.0 / (e1 + float(eps2))
    return GreensValue(trans / (_FOUR_PI * distance(r, r_src)))


def half_space_scattering_g1(r: Point3, r_src: Point3, eps1: Permittivity,
                             eps2: Permittivity) -> GreensValue:
    """Reflected (image) part only; finite at coincident points.

    Defined for field and source both in region 1.
    """
    e1 = finite_eps(eps1, "eps1")
    validate_eps(eps2, "eps2")
    if not (r_src.z > 0.0 and r.z > 0.0):
        raise OutOfRegionError("half_space_scattering_g1: both points must have z > 0")
    image_dist = distance(r, r_src.mirror_z())
    return GreensValue(interface_reflection(eps1, eps2) / (_FOUR_PI * e1 * image_dist))


# ---------------------------------------------------------------------------
# Conducting plate with a circular aperture
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HoleAux:
    """Auxiliary quantities of the aperture Green's function.

    F_plus/F_minus and D_plus/D_minus are lengths (m); lambda_plus and
    lambda_minus are the +-1 signs selecting the arctan branch.
    """

    F_plus: float
    F_minus: float
    D_plus: float
    D_minus: float
    lambda_plus: float
    lambda_minus: float


def _canonical_pair(r: Point3, r_src: Point3, R: float):
    """Map to z_field >= 0 using the z -> -z symmetry; reject on-plate points."""
    for name, p in (("r", r), ("r_src", r_src)):
        if p.z == 0.0 and p.rho >= R:
            raise OnPlateError(f"plate_hole: {name} lies on the conductor (z=0, rho>=R)")
    if r.z < 0.0:
        r, r_src = r.mirror_z(), r_src.mirror_z()
    return r, r_src


def plate_hole_aux(r: Point3, r_src: Point3, R: float) -> HoleAux:
    """F, D and sign auxiliaries for the aperture Green's function."""
    if not (R > 0.0):
        raise DomainError(f"plate_hole_aux: R must be > 0, got {R!r}")
    r, r_src = _canonical_pair(r, r_src, R)
    rho, phi, z = r.cylindrical()
    rhop, phip, zp = r_src.cylindrical()
    _, Fm, Fp, Dm, Dp, lm, lp = kernels.hole_greens(rho, phi, z, rhop, phip, zp, R)
    return HoleAux(F_plus=Fp, F_minus=Fm, D_plus=Dp, D_minus=Dm,
                   lambda_plus=lp, lambda_minus=lm)


def plate_hole_g(r: Point3, r_src: Point3, R: float) -> GreensValue:
    """Green's function of a grounded plate at z = 0 with an aperture of radius R."""
    if not (R > 0.0):
        raise DomainError(f"plate_hole_g: R must be > 0, got {R!r}")
    if r == r_src:
        raise CoincidentPointsError("plate_hole_g: r coincides with r_src")
    r, r_src = _canonical_pair(r, r_src, R)
    rho, phi, z = r.cylindrical()
    rhop, phip, zp = r_src.cylindrical()
    g, *_ = kernels.hole_greens(rho, phi, z, rhop, phip, zp, R)
    return GreensValue(g)


def plate_hole_onaxis_self_g1(z: float, R: float) -> GreensValue:
    """Reflected part at coincident on-axis points, g1(z) = g1(-z).

    g1 = -1/(16 pi |z|) + 1/(8 pi^2 |z|) * arctan(R/(2|z|) - |z|/(2R));
    the free-space divergence is already subtracted. Always negative
    (the induced surface charge attracts), approaching -1/(4 pi^2 R) as
    z -> 0 and the solid-plate image value -1/(8 pi |z|) as R -> 0.
    """
    if not (R > 0.0):
        raise DomainError(f"plate_hole_onaxis_self_g1: R must be > 0, got {R!r}")
    if z == 0.0:
        raise DomainError("plate_hole_onaxis_self_g1: z must be nonzero "
                          "(the z -> 0 limit is -1/(4 pi^2 R))")
    az = abs(z)
    value = (-1.0 / (16.0 * math.pi * az)
             + math.atan(R / (2.0 * az) - az / (2.0 * R)) / (8.0 * math.pi ** 2 * az))
    return GreensValue(value)
