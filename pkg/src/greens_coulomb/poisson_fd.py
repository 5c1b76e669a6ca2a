"""Independent finite-difference solver for div(eps grad g) = -delta.

Axisymmetric (m = 0) conservative finite volumes on a uniform (rho, z)
grid, for z-layered permittivity profiles (planar interface or gap). Used
as a numerical cross-check of the closed-form and quadrature routes; it
shares no code with them.

The singular part is never discretized: writing g = g_free/eps_src + g1,
the unknown g1 satisfies

    div(eps grad g1) = -div((eps - eps_src) grad g_free) / eps_src

whose right side is supported only where eps differs from the source-region
value, i.e. away from the singularity. The discrete right side is the flux
mismatch of the sampled free kernel through faces whose permittivity
differs from eps_src, so the scheme is O(h^2) up to domain truncation.

The outer boundary condition is either "decay" (default; a 1/s falloff of
g1 measured from the source, which passes the induced monopole through and
keeps truncation error far below the discretization error) or "dirichlet0"
(hard zero; simplest, but the truncation error then falls off only like
1/box size).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .core import (
    DomainError,
    HalfSpace,
    Point3,
    SolverError,
    SourceOnInterfaceError,
    ThreeLayerCavity,
    UnsupportedGeometryError,
    is_conductor,
)

_FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class GridSpec:
    """Uniform cell-centered grid on [0, rho_max] x [z_min, z_max]."""

    n_rho: int
    n_z: int
    rho_max: float
    z_min: float
    z_max: float
    tol: float = 1e-10

    def __post_init__(self):
        if self.n_rho < 32 or self.n_z < 32:
            raise DomainError("grid must be at least 32 x 32")
        if not (self.rho_max > 0.0 and self.z_max > self.z_min):
            raise DomainError("empty grid domain")
        if not (0.0 < self.tol < 1.0):
            raise DomainError(f"solver tol must be in (0, 1), got {self.tol!r}")

    @property
    def drho(self) -> float:
        return self.rho_max / self.n_rho

    @property
    def dz(self) -> float:
        return (self.z_max - self.z_min) / self.n_z

    def rho_centers(self) -> np.ndarray:
        return (np.arange(self.n_rho) + 0.5) * self.drho

    def z_centers(self) -> np.ndarray:
        return self.z_min + (np.arange(self.n_z) + 0.5) * self.dz


def aligned_grid(n: int, src_z: float, interfaces, z_half_span: float,
                 rho_max: float, tol: float = 1e-10) -> GridSpec:
    """n x n grid whose faces contain the interfaces and whose cell centers
    contain src_z, spanning roughly [src_z - span, src_z + span] in z."""
    dz = 2.0 * z_half_span / n
    # put a face on the first interface, then nudge so src_z is on a center
    anchor = interfaces[0] if len(interfaces) else 0.0
    k = round((src_z - anchor) / dz - 0.5)
    dz_adj = (src_z - anchor) / (k + 0.5) if (k + 0.5) != 0 else dz
    if not (0.0 < dz_adj < 10.0 * dz):
        dz_adj = dz
    j_lo = math.floor((anchor - (src_z - z_half_span)) / dz_adj)
    z_min = anchor - j_lo * dz_adj
    return GridSpec(n_rho=n, n_z=n, rho_max=rho_max,
                    z_min=z_min, z_max=z_min + n * dz_adj, tol=tol)


def _eps_profile(geom) -> Tuple[Callable[[np.ndarray], np.ndarray], Tuple[float, ...]]:
    """Layered eps(z) and the interface z-positions."""
    if isinstance(geom, HalfSpace):
        if is_conductor(geom.eps1) or is_conductor(geom.eps2):
            raise UnsupportedGeometryError("the FD solver needs finite permittivities")
        e1, e2 = float(geom.eps1), float(geom.eps2)

        def eps(z: np.ndarray) -> np.ndarray:
            return np.where(z > 0.0, e1, e2)

        return eps, (0.0,)
    if isinstance(geom, ThreeLayerCavity):
        if is_conductor(geom.eps1) or is_conductor(geom.eps3):
            raise UnsupportedGeometryError("the FD solver needs finite permittivities")
        e1, e2, e3 = float(geom.eps1), float(geom.eps2), float(geom.eps3)
        half = 0.5 * geom.d

        def eps(z: np.ndarray) -> np.ndarray:
            return np.where(z < -half, e1, np.where(z > half, e3, e2))

        return eps, (-half, half)
    raise UnsupportedGeometryError(
        f"FD oracle supports HalfSpace and ThreeLayerCavity, not {type(geom).__name__}")


@dataclass
class FDSolution:
    """Sampled scattering field g1 on the grid, plus reconstruction helpers."""

    grid: GridSpec
    g1: np.ndarray           # (n_rho, n_z)
    eps_cell: np.ndarray     # (n_rho, n_z)
    eps_src: float
    src_z: float
    axis_offset: Tuple[float, float]
    residual: float

    def _interp(self, rho: np.ndarray, z: np.ndarray) -> np.ndarray:
        rc = self.grid.rho_centers()
        zc = self.grid.z_centers()
        rho_ext = np.concatenate([-rc[::-1], rc])
        vals = np.vstack([self.g1[::-1, :], self.g1])
        from scipy.interpolate import RegularGridInterpolator
        f = RegularGridInterpolator((rho_ext, zc), vals, method="linear",
                                    bounds_error=True)
        return f(np.column_stack([np.atleast_1d(rho), np.atleast_1d(z)]))

    def g1_at(self, p: Point3) -> float:
        """Interpolated g1 at a lab-frame point (source translated on axis)."""
        rho = math.hypot(p.x - self.axis_offset[0], p.y - self.axis_offset[1])
        return float(self._interp(np.array([rho]), np.array([p.z]))[0])

    def g_free(self, p: Point3) -> float:
        rho = math.hypot(p.x - self.axis_offset[0], p.y - self.axis_offset[1])
        dist = math.hypot(rho, p.z - self.src_z)
        return 1.0 / (_FOUR_PI * self.eps_src * dist)

    def g_total_at(self, p: Point3) -> float:
        return self.g1_at(p) + self.g_free(p)

    def source_g1(self) -> float:
        """g1 at the source point itself (the smooth scattering value)."""
        return self.g1_at(Point3(self.axis_offset[0], self.axis_offset[1], self.src_z))

    def gauss_flux(self, n_ring: int) -> float:
        """Outward flux of -eps grad g through a grid contour around the source.

        n_ring counts cells from the source in each direction; the result
        should equal the enclosed charge, i.e. 1.
        """
        g = self.grid
        rc, zc = g.rho_centers(), g.z_centers()
        j_src = int(np.argmin(np.abs(zc - self.src_z)))
        i_hi = min(n_ring, g.n_rho - 2)
        j_lo = max(j_src - n_ring, 1)
        j_hi = min(j_src + n_ring, g.n_z - 2)

        def gtot(i, j):
            dist = math.hypot(rc[i], zc[j] - self.src_z)
            return self.g1[i, j] + 1.0 / (_FOUR_PI * self.eps_src * dist)

        flux = 0.0
        rho_face = (i_hi + 1) * g.drho
        for j in range(j_lo, j_hi + 1):
            e = 2.0 / (1.0 / self.eps_cell[i_hi, j] + 1.0 / self.eps_cell[i_hi + 1, j])
            area = 2.0 * math.pi * rho_face * g.dz
            flux -= e * area * (gtot(i_hi + 1, j) - gtot(i_hi, j)) / g.drho
        for i in range(0, i_hi + 1):
            area = 2.0 * math.pi * rc[i] * g.drho
            e_top = 2.0 / (1.0 / self.eps_cell[i, j_hi] + 1.0 / self.eps_cell[i, j_hi + 1])
            flux -= e_top * area * (gtot(i, j_hi + 1) - gtot(i, j_hi)) / g.dz
            e_bot = 2.0 / (1.0 / self.eps_cell[i, j_lo] + 1.0 / self.eps_cell[i, j_lo - 1])
            flux -= e_bot * area * (gtot(i, j_lo - 1) - gtot(i, j_lo)) / g.dz
        return flux

    def to_csv(self, path) -> None:
        """Dump (rho, z, g1) rows for inspection."""
        rc, zc = self.grid.rho_centers(), self.grid.z_centers()
        with open(path, "w", newline="") as fh:
            fh.write("rho,z,g1\n")
            for i, r in enumerate(rc):
                for j, z in enumerate(zc):
                    fh.write(f"{float(r)!r},{float(z)!r},{float(self.g1[i, j])!r}\n")


def solve_scattering_g1(geom: Union[HalfSpace, ThreeLayerCavity], src: Point3,
                        grid: GridSpec, bc: str = "decay") -> FDSolution:
    """Solve for the scattering part g1 = g - g_free/eps_src on the grid.

    The source may sit off the z axis; the planar geometry is translation
    invariant in-plane, so the solve runs in a frame with the source on the
    axis and the solution remembers the offset.
    """
    if bc not in ("decay", "dirichlet0"):
        raise DomainError(f"unknown bc {bc!r}")
    eps_z, interfaces = _eps_profile(geom)
    zs = src.z
    for z_if in interfaces:
        if abs(zs - z_if) < grid.dz:
            raise SourceOnInterfaceError(
                f"source z = {zs!r} too close to the interface at z = {z_if!r}")
    if not (grid.z_min + 10 * grid.dz < zs < grid.z_max - 10 * grid.dz):
        raise DomainError("source must sit inside the grid with >= 10 cells margin")

    n_rho, n_z = grid.n_rho, grid.n_z
    drho, dz = grid.drho, grid.dz
    rc = grid.rho_centers()
    zc = grid.z_centers()
    eps_col = eps_z(zc)                      # (n_z,)
    eps_cell = np.broadcast_to(eps_col, (n_rho, n_z)).copy()
    eps_src = float(eps_z(np.array([zs]))[0])

    def gf(rho: np.ndarray, z: np.ndarray) -> np.ndarray:
        return 1.0 / (_FOUR_PI * eps_src * np.hypot(rho, z - zs))

    idx = np.arange(n_rho * n_z).reshape(n_rho, n_z)
    rows, cols, vals = [], [], []
    diag = np.zeros((n_rho, n_z))
    b = np.zeros((n_rho, n_z))

    def add_face(ci, cj, ni, nj, w, mismatch):
        # w couples cell (ci,cj) to neighbor (ni,nj); mismatch adds to b
        rows.append(idx[ci, cj]); cols.append(idx[ni, nj]); vals.append(-w)
        diag[ci, cj] += w
        b[ci, cj] += mismatch

    # radial faces (eps constant along rho, so no mismatch there except
    # through the harmonic mean staying equal to the cell value)
    RC, ZC = np.meshgrid(rc, zc, indexing="ij")
    gf_cell = gf(RC, ZC)
    for i in range(n_rho - 1):
        rho_f = (i + 1) * drho
        area = 2.0 * math.pi * rho_f * dz
        e_face = 2.0 / (1.0 / eps_cell[i, :] + 1.0 / eps_cell[i + 1, :])
        w = e_face * area / drho
        mis = (e_face - eps_src) * area / drho
        for j in range(n_z):
            m = mis[j] * (gf_cell[i + 1, j] - gf_cell[i, j])
            add_face(i, j, i + 1, j, w[j], m)
            add_face(i + 1, j, i, j, w[j], -m)

    # axial faces
    for j in range(n_z - 1):
        e_face = 2.0 / (1.0 / eps_col[j] + 1.0 / eps_col[j + 1])
        area = 2.0 * math.pi * rc * drho
        w = e_face * area / dz
        mis = (e_face - eps_src) * area / dz
        for i in range(n_rho):
            m = mis[i] * (gf_cell[i, j + 1] - gf_cell[i, j])
            add_face(i, j, i, j + 1, w[i], m)
            add_face(i, j + 1, i, j, w[i], -m)

    # outer boundary faces (rho = rho_max, z = z_min, z = z_max)
    def boundary(ci, cj, face_rho, face_z, area, delta, normal):
        e_face = eps_cell[ci, cj]
        s_cell = math.hypot(rc[ci], zc[cj] - zs)
        if bc == "decay":
            ghost_rho = rc[ci] + normal[0] * delta
            ghost_z = zc[cj] + normal[1] * delta
            s_ghost = math.hypot(ghost_rho, ghost_z - zs)
            w = e_face * area * (1.0 - s_cell / s_ghost) / delta
            gf_ghost = float(gf(np.array([ghost_rho]), np.array([ghost_z]))[0])
            m = (e_face - eps_src) * area * (gf_ghost - gf_cell[ci, cj]) / delta
        else:
            w = e_face * area / (0.5 * delta)
            gf_face = float(gf(np.array([face_rho]), np.array([face_z]))[0])
            m = (e_face - eps_src) * area * (gf_face - gf_cell[ci, cj]) / (0.5 * delta)
        diag[ci, cj] += w
        b[ci, cj] += m

    for j in range(n_z):
        boundary(n_rho - 1, j, grid.rho_max, zc[j],
                 2.0 * math.pi * grid.rho_max * dz, drho, (1.0, 0.0))
    for i in range(n_rho):
        area = 2.0 * math.pi * rc[i] * drho
        boundary(i, 0, rc[i], grid.z_min, area, dz, (0.0, -1.0))
        boundary(i, n_z - 1, rc[i], grid.z_max, area, dz, (0.0, 1.0))

    n = n_rho * n_z
    rows.extend(idx.ravel()); cols.extend(idx.ravel()); vals.extend(diag.ravel())
    M = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    rhs = b.ravel()
    u = spla.spsolve(M, rhs)
    res = float(np.linalg.norm(M @ u - rhs) / max(np.linalg.norm(rhs), 1e-300))
    if not np.all(np.isfinite(u)) or res > grid.tol:
        raise SolverError(f"sparse solve residual {res:.3e} exceeds tol {grid.tol:.3e}")

    return FDSolution(grid=grid, g1=u.reshape(n_rho, n_z), eps_cell=eps_cell,
                      eps_src=eps_src, src_z=zs, axis_offset=(src.x, src.y),
                      residual=res)
