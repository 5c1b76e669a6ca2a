"""First-order Born treatment of a dilute polarizable body.

The body is a piecewise-constant number-density field (axis-aligned boxes,
optionally the half-space z < 0) of molecules with a shared static
polarizability tensor. Two routes to the charge-body energy are exposed:

* the pairwise charge-molecule potential integrated over the body,
* the scattering correction to the Green's function, contracted to the
  self-energy.

Both are the same volume integral written differently and must agree; the
tests exploit that. Quadrature is deterministic nested Gauss-Legendre with
dyadic (octree) refinement, so results are bit-reproducible; half-infinite
volumes are truncated at a radius where the integrand tail bound is below
tolerance, the bound being added to abs_err.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.constants import epsilon_0

from . import kernels
from .core import (
    DEFAULT_QUADRATURE,
    CoincidentPointsError,
    DomainError,
    GreensValue,
    PointInsideBodyError,
    Point3,
    QuadratureSpec,
    ValueWithError,
    finite_eps,
)

_GL_ORDER = 5
_GL_X, _GL_W = leggauss(_GL_ORDER)


@dataclass(frozen=True)
class PolarizabilityTensor:
    """3x3 symmetric positive-semidefinite static polarizability, C m^2/V."""

    xx: float
    yy: float
    zz: float
    xy: float = 0.0
    xz: float = 0.0
    yz: float = 0.0

    @classmethod
    def isotropic(cls, alpha: float) -> "PolarizabilityTensor":
        return cls(alpha, alpha, alpha)

    @classmethod
    def from_matrix(cls, m) -> "PolarizabilityTensor":
        m = np.asarray(m, dtype=float)
        if m.shape != (3, 3):
            raise DomainError(f"polarizability must be 3x3, got shape {m.shape}")
        scale = float(np.max(np.abs(m)))
        if scale > 0.0 and float(np.max(np.abs(m - m.T))) > 1e-12 * scale:
            raise DomainError("polarizability must be symmetric to 1e-12 relative")
        sym = 0.5 * (m + m.T)
        return cls(sym[0, 0], sym[1, 1], sym[2, 2], sym[0, 1], sym[0, 2], sym[1, 2])

    def __post_init__(self):
        m = self.matrix
        scale = float(np.max(np.abs(m)))
        if scale > 0.0:
            evals = np.linalg.eigvalsh(m)
            if evals[0] < -1e-12 * scale:
                raise DomainError(
                    f"polarizability must be positive semi-definite, eigenvalues {evals}")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.xx, self.xy, self.xz],
                         [self.xy, self.yy, self.yz],
                         [self.xz, self.yz, self.zz]], dtype=float)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box [x0,x1] x [y0,y1] x [z0,z1], meters."""

    x0: float
    x1: float
    y0: float
    y1: float
    z0: float
    z1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0 and self.z1 > self.z0):
            raise DomainError(f"degenerate box {self!r}")

    @property
    def volume(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0) * (self.z1 - self.z0)

    def contains(self, p: Point3) -> bool:
        return (self.x0 <= p.x <= self.x1 and self.y0 <= p.y <= self.y1
                and self.z0 <= p.z <= self.z1)

    def children(self) -> Tuple["Box", ...]:
        mx = 0.5 * (self.x0 + self.x1)
        my = 0.5 * (self.y0 + self.y1)
        mz = 0.5 * (self.z0 + self.z1)
        out = []
        for xa, xb in ((self.x0, mx), (mx, self.x1)):
            for ya, yb in ((self.y0, my), (my, self.y1)):
                for za, zb in ((self.z0, mz), (mz, self.z1)):
                    out.append(Box(xa, xb, ya, yb, za, zb))
        return tuple(out)


@dataclass(frozen=True)
class DensityRegion:
    """Constant number density eta (1/m^3) on a box."""

    box: Box
    eta: float

    def __post_init__(self):
        if not (math.isfinite(self.eta) and self.eta >= 0.0):
            raise DomainError(f"eta must be >= 0, got {self.eta!r}")


@dataclass(frozen=True)
class DiluteBody:
    """Piecewise-constant density body with shared polarizability.

    regions: explicit boxes; half_space_eta: additionally (or instead) fill
    the half-space z < 0 at this uniform density.
    """

    alpha: PolarizabilityTensor
    regions: Tuple[DensityRegion, ...] = field(default_factory=tuple)
    half_space_eta: Optional[float] = None
    background_eps: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "regions", tuple(self.regions))
        object.__setattr__(self, "background_eps",
                           finite_eps(self.background_eps, "background_eps"))
        if self.half_space_eta is not None and not (
                math.isfinite(self.half_space_eta) and self.half_space_eta >= 0.0):
            raise DomainError(f"half_space_eta must be >= 0, got {self.half_space_eta!r}")
        if not self.regions and self.half_space_eta is None:
            raise DomainError("DiluteBody needs at least one region or half_space_eta")

    def contains(self, p: Point3) -> bool:
        if self.half_space_eta is not None and p.z < 0.0:
            return True
        return any(reg.box.contains(p) for reg in self.regions)


def charge_molecule_potential(qA: float, rA: Point3, rB: Point3,
                              alpha: PolarizabilityTensor) -> float:
    """Charge-molecule interaction -qA^2 (r . alpha . r) / (32 pi^2 eps0^2 r^6), joules."""
    r = np.array([rA.x - rB.x, rA.y - rB.y, rA.z - rB.z])
    r2 = float(r @ r)
    if r2 == 0.0:
        raise CoincidentPointsError("charge_molecule_potential: rA coincides with rB")
    quad = float(r @ alpha.matrix @ r)
    return -qA * qA * quad / (32.0 * math.pi ** 2 * epsilon_0 ** 2 * r2 ** 3)


# ---------------------------------------------------------------------------
# Deterministic adaptive volume quadrature
# ---------------------------------------------------------------------------

def _box_nodes(box: Box) -> Tuple[np.ndarray, np.ndarray]:
    def axis(a, b):
        return 0.5 * (a + b) + 0.5 * (b - a) * _GL_X, 0.5 * (b - a) * _GL_W

    xs, wx = axis(box.x0, box.x1)
    ys, wy = axis(box.y0, box.y1)
    zs, wz = axis(box.z0, box.z1)
    X, Y, Z = np.meshgrid(xs, ys, zs, indexing="ij")
    W = wx[:, None, None] * wy[None, :, None] * wz[None, None, :]
    pts = np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])
    return pts, W.ravel()


def _box_integral(integrand, box: Box) -> float:
    pts, w = _box_nodes(box)
    return integrand(pts, w)


def _adaptive_boxes(integrand, boxes, rel_tol: float, scale_hint: float,
                    max_depth: int = 12) -> Tuple[float, float]:
    """Octree-refined Gauss quadrature; deterministic FIFO processing order."""
    total = 0.0
    err = 0.0
    # (box, coarse estimate, depth); local budget proportional to |contribution|
    queue = [(b, _box_integral(integrand, b), 0) for b in boxes]
    while queue:
        next_queue = []
        for box, coarse, depth in queue:
            kids = box.children()
            fine = 0.0
            kid_vals = []
            for kid in kids:
                v = _box_integral(integrand, kid)
                kid_vals.append(v)
                fine += v
            diff = abs(fine - coarse)
            budget = rel_tol * max(abs(fine), scale_hint)
            if diff <= max(budget, 1e-15 * abs(fine)) or depth >= max_depth:
                total += fine
                err += diff
            else:
                next_queue.extend(
                    (kid, v, depth + 1) for kid, v in zip(kids, kid_vals))
        queue = next_queue
    return total, err


def _half_space_boxes(field_pts, rel_tail: float):
    """Half-cube shells covering z < 0 out to a truncation radius.

    The integrand falls off like 1/s^4 with s the distance to the nearer
    field point, so the exterior contributes ~ 2 pi / S relative to the
    pi/h total; S is chosen to push that below rel_tail.
    """
    h = min(abs(p.z) for p in field_pts)
    span = max(max(abs(p.x), abs(p.y)) for p in field_pts)
    L0 = 2.0 * (h + span)
    S = 4.0 * h / rel_tail
    boxes = [Box(-L0, L0, -L0, L0, -L0, 0.0)]
    L = L0
    while L < S:
        L2 = 2.0 * L
        boxes.append(Box(-L2, L2, -L2, L2, -L2, -L))
        boxes.append(Box(-L2, -L, -L2, L2, -L, 0.0))
        boxes.append(Box(L, L2, -L2, L2, -L, 0.0))
        boxes.append(Box(-L, L, -L2, -L, -L, 0.0))
        boxes.append(Box(-L, L, L, L2, -L, 0.0))
        L = L2
    tail_bound = 2.0 * math.pi / L  # bound on the exterior of int d^3r / s^4
    return boxes, tail_bound


def _check_outside(body: DiluteBody, pts) -> None:
    for p in pts:
        if body.contains(p):
            raise PointInsideBodyError(f"point {p} lies inside the body volume")


def born_scattering_g1(r: Point3, r_src: Point3, body: DiluteBody,
                       spec: QuadratureSpec = DEFAULT_QUADRATURE) -> GreensValue:
    """First Born correction to g from the polarizable body.

    g1(r, r') = -(1/eps0) int d^3x eta(x) grad_x g0(r, x) . alpha . grad_x g0(x, r')
    with the uniform background kernel g0 = 1/(4 pi eps_bg |.|).
    """
    _check_outside(body, (r, r_src))
    alpha = body.alpha.matrix
    rv = np.array([r.x, r.y, r.z])
    rpv = np.array([r_src.x, r_src.y, r_src.z])
    eps_bg = body.background_eps
    pref = -1.0 / (epsilon_0 * (4.0 * math.pi * eps_bg) ** 2)

    def integrand(pts, w):
        return kernels.alpha_chain_sum(pts, w, rv, rpv, alpha)

    total = 0.0
    err = 0.0
    alpha_scale = float(np.max(np.abs(alpha)))
    for reg in body.regions:
        if reg.eta == 0.0:
            continue
        val, e = _adaptive_boxes(integrand, [reg.box], spec.rel_tol,
                                 scale_hint=0.0)
        total += reg.eta * val
        err += reg.eta * e
    if body.half_space_eta is not None and body.half_space_eta > 0.0:
        if r.z <= 0.0 or r_src.z <= 0.0:
            raise PointInsideBodyError("field points must lie above the half-space body")
        rel_tail = 0.05 * spec.rel_tol
        boxes, tail = _half_space_boxes((r, r_src), rel_tail)
        # scale_hint: the dominant pi/h magnitude of the isotropic integral
        h = min(r.z, r_src.z)
        hint = alpha_scale * math.pi / h
        val, e = _adaptive_boxes(integrand, boxes, spec.rel_tol, scale_hint=hint)
        total += body.half_space_eta * val
        err += body.half_space_eta * (e + alpha_scale * tail)
    return GreensValue(pref * total, abs(pref) * err)


def charge_body_energy(a, body: DiluteBody,
                       spec: QuadratureSpec = DEFAULT_QUADRATURE) -> ValueWithError:
    """Volume integral of eta(x) * U_charge-molecule(rA, x) over the body, joules.

    Independent of the born_scattering_g1 route (the two are checked against
    each other in the tests). Carries the same 1/eps_bg^2 background
    screening as the Green's-function route so they agree for any
    background permittivity.
    """
    r = a.position
    _check_outside(body, (r,))
    alpha = body.alpha.matrix
    rv = np.array([r.x, r.y, r.z])
    eps_bg = body.background_eps
    pref = -a.q * a.q / (32.0 * math.pi ** 2 * epsilon_0 ** 2 * eps_bg ** 2)

    def integrand(pts, w):
        s = rv[np.newaxis, :] - pts
        s2 = np.einsum("ij,ij->i", s, s)
        quad = np.einsum("ij,jk,ik->i", s, alpha, s)
        return float(np.sum(w * quad / s2 ** 3))

    alpha_scale = float(np.max(np.abs(alpha)))
    total = 0.0
    err = 0.0
    for reg in body.regions:
        if reg.eta == 0.0:
            continue
        val, e = _adaptive_boxes(integrand, [reg.box], spec.rel_tol, scale_hint=0.0)
        total += reg.eta * val
        err += reg.eta * e
    if body.half_space_eta is not None and body.half_space_eta > 0.0:
        if r.z <= 0.0:
            raise PointInsideBodyError("charge must lie above the half-space body")
        rel_tail = 0.05 * spec.rel_tol
        boxes, tail = _half_space_boxes((r,), rel_tail)
        hint = alpha_scale * math.pi / r.z
        val, e = _adaptive_boxes(integrand, boxes, spec.rel_tol, scale_hint=hint)
        total += body.half_space_eta * val
        err += body.half_space_eta * (e + alpha_scale * tail)
    return ValueWithError(pref * total, abs(pref) * err)
