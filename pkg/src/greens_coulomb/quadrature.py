"""Semi-infinite oscillatory integrals: Hankel (J0) and sine transforms.

The integration interval is partitioned at successive zeros of the
oscillating factor. Each panel is integrated with adaptive 16-point
Gauss-Legendre bisection, and the alternating sequence of partial sums is
extrapolated to its limit by repeated averaging (Euler transformation) up
to `accel_order` levels. The returned abs_err bounds the extrapolation
residual plus the accumulated panel errors.

Integrand callables receive a 1-D numpy array of wavenumbers and must
return the array of integrand values (the oscillating factor included,
so the same machinery serves both transforms and the non-oscillatory
rho = 0 case).
"""

from __future__ import annotations

import math
from typing import Callable, Iterator, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import j0, jn_zeros

from .core import (
    DEFAULT_QUADRATURE,
    ConvergenceError,
    DomainError,
    GreensValue,
    QuadratureSpec,
)

_GL_X, _GL_W = leggauss(16)

_J0_ZEROS = jn_zeros(0, 256)


def _j0_zero(n: int) -> float:
    """n-th positive zero of J0 (1-based), growing the cache as needed."""
    global _J0_ZEROS
    if n > _J0_ZEROS.size:
        _J0_ZEROS = jn_zeros(0, max(n, 2 * _J0_ZEROS.size))
    return _J0_ZEROS[n - 1]


def _gl_panel(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> float:
    h = 0.5 * (b - a)
    vals = f(0.5 * (a + b) + h * _GL_X)
    return h * float(np.dot(vals, _GL_W))


def _panel_adaptive(f, a: float, b: float, tol: float,
                    max_depth: int = 26) -> Tuple[float, float]:
    """Integrate one panel by bisection until the halving correction is below tol."""
    total = 0.0
    err = 0.0
    stack = [(a, b, _gl_panel(f, a, b), tol, 0)]
    while stack:
        a0, b0, coarse, tol0, depth = stack.pop()
        m = 0.5 * (a0 + b0)
        left = _gl_panel(f, a0, m)
        right = _gl_panel(f, m, b0)
        fine = left + right
        diff = abs(fine - coarse)
        floor = 1e-15 * (abs(fine) + abs(coarse))
        if diff <= max(tol0, floor) or depth >= max_depth:
            total += fine
            err += diff
        else:
            stack.append((a0, m, left, 0.5 * tol0, depth + 1))
            stack.append((m, b0, right, 0.5 * tol0, depth + 1))
    return total, err


def euler_limit(partial_sums: np.ndarray, depth: int) -> Tuple[float, float]:
    """Limit of an (eventually) alternating sequence of partial sums.

    Repeated pairwise averaging; returns the most stable row's last entry and
    a two-sided difference as the error estimate.
    """
    t = np.asarray(partial_sums, dtype=float)
    if t.size == 1:
        return float(t[-1]), abs(float(t[-1]))
    best = float(t[-1])
    best_err = abs(t[-1] - t[-2])
    prev_last = float(t[-1])
    for _ in range(depth):
        if t.size < 2:
            break
        t = 0.5 * (t[:-1] + t[1:])
        last = float(t[-1])
        move = abs(last - prev_last)
        row = abs(last - float(t[-2])) if t.size >= 2 else move
        err = move + row
        if err <= best_err:
            best_err = err
            best = last
        prev_last = last
    return best, best_err


def _estimate_limit(panels, spec: QuadratureSpec) -> Tuple[float, float]:
    """Value and tail-error estimate from the panel integrals seen so far."""
    p = np.asarray(panels, dtype=float)
    s = np.cumsum(p)
    scale = float(np.max(np.abs(p))) if p.size else 0.0
    if scale == 0.0:
        return 0.0, 0.0

    # Index from which the panel signs strictly alternate (tiny panels count
    # as converged rather than breaking alternation).
    tiny = 1e-16 * scale
    start = p.size
    for i in range(p.size - 1, 0, -1):
        if abs(p[i]) <= tiny or abs(p[i - 1]) <= tiny:
            break
        if p[i] * p[i - 1] < 0.0:
            start = i - 1
        else:
            break
    n_alt = p.size - start

    if n_alt >= 6:
        window = s[start:]
        if window.size > 80:
            window = window[-80:]
        return euler_limit(window, min(spec.accel_order, window.size - 1))

    # Non-alternating: direct sum with a geometric tail estimate.
    value = float(s[-1])
    a2 = abs(p[-1])
    a1 = abs(p[-2]) if p.size >= 2 else a2
    if a2 <= tiny:
        return value, 0.0
    if a1 > 0.0 and a2 < a1:
        ratio = a2 / a1
        return value, a2 * ratio / (1.0 - ratio)
    return value, math.inf


def _ladder_edges(first_cut: float, k_scale: Optional[float]) -> list:
    """Geometric pre-panels resolving integrand decay faster than the oscillation."""
    edges = [0.0]
    if k_scale is not None and k_scale > 0.0 and k_scale < 0.25 * first_cut:
        e = 0.25 * k_scale
        while e < 0.5 * first_cut:
            edges.append(e)
            e *= 2.0
    edges.append(first_cut)
    return edges


def _integrate_panels(f, edges_iter: Iterator[Tuple[float, float]],
                      spec: QuadratureSpec, context: str) -> Tuple[float, float]:
    panels = []
    panel_errs = 0.0
    scale = 0.0
    last = (0.0, math.inf)
    count = 0
    for a, b in edges_iter:
        ptol = 0.02 * max(spec.abs_tol, spec.rel_tol * scale)
        val, perr = _panel_adaptive(f, a, b, ptol)
        panels.append(val)
        panel_errs += perr
        scale = max(scale, abs(val))
        count += 1
        if count >= 8 and count % 4 == 0:
            value, tail = _estimate_limit(panels, spec)
            total_err = tail + panel_errs
            last = (value, total_err)
            if total_err <= max(spec.abs_tol, spec.rel_tol * abs(value)):
                return value, total_err
            if scale == 0.0:
                return 0.0, panel_errs
        if count >= spec.max_panels:
            break
    raise ConvergenceError(
        f"{context}: tolerance not reached after {count} panels "
        f"(best value {last[0]:.6e}, estimated error {last[1]:.3e})"
    )


def _oscillatory_edges(cuts_fn, k_scale):
    edges = _ladder_edges(cuts_fn(1), k_scale)
    for a, b in zip(edges[:-1], edges[1:]):
        yield a, b
    prev = edges[-1]
    n = 2
    while True:
        cur = cuts_fn(n)
        yield prev, cur
        prev = cur
        n += 1


def hankel_integral(f: Callable[[np.ndarray], np.ndarray], rho: float,
                    spec: QuadratureSpec = DEFAULT_QUADRATURE,
                    k_scale: Optional[float] = None) -> GreensValue:
    """integral_0^inf f(k) J0(k rho) dk with an abs_err estimate.

    `k_scale` hints at the decay scale of f (panels below the first Bessel
    zero are pre-split around it); rho = 0 integrates the monotone integrand
    on geometrically growing panels instead.
    """
    if rho < 0.0:
        raise DomainError(f"rho must be >= 0, got {rho!r}")
    if rho == 0.0:
        return _halfline_decaying(f, spec, k_scale)

    def integrand(k: np.ndarray) -> np.ndarray:
        return np.asarray(f(k), dtype=float) * j0(k * rho)

    edges = _oscillatory_edges(lambda n: _j0_zero(n) / rho, k_scale)
    value, err = _integrate_panels(integrand, edges, spec, "hankel_integral")
    return GreensValue(value, err)


def sine_integral(f: Callable[[np.ndarray], np.ndarray], r: float,
                  spec: QuadratureSpec = DEFAULT_QUADRATURE,
                  k_scale: Optional[float] = None) -> GreensValue:
    """integral_0^inf f(k) sin(k r) dk with an abs_err estimate."""
    if r <= 0.0:
        raise DomainError(f"r must be > 0, got {r!r}")

    def integrand(k: np.ndarray) -> np.ndarray:
        return np.asarray(f(k), dtype=float) * np.sin(k * r)

    edges = _oscillatory_edges(lambda n: n * math.pi / r, k_scale)
    value, err = _integrate_panels(integrand, edges, spec, "sine_integral")
    return GreensValue(value, err)


def _halfline_decaying(f, spec: QuadratureSpec, k_scale: Optional[float]) -> GreensValue:
    """Non-oscillatory semi-infinite integral of a decaying integrand."""
    kc = k_scale if (k_scale is not None and k_scale > 0.0) else 1.0
    total = 0.0
    panel_errs = 0.0
    prev_mag = math.inf
    small_streak = 0
    a = 0.0
    b = kc
    last_val = math.inf
    for count in range(spec.max_panels):
        ptol = 0.02 * max(spec.abs_tol, spec.rel_tol * abs(total))
        val, perr = _panel_adaptive(f, a, b, ptol)
        total += val
        panel_errs += perr
        tol = max(spec.abs_tol, spec.rel_tol * abs(total))
        mag = abs(val)
        if mag <= 0.25 * tol and mag < prev_mag:
            small_streak += 1
            ratio = mag / prev_mag if prev_mag > 0.0 else 0.0
            tail = mag * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
            if small_streak >= 2 and tail + panel_errs <= tol:
                return GreensValue(total, tail + panel_errs)
        else:
            small_streak = 0
        prev_mag = mag if mag > 0.0 else prev_mag
        last_val = val
        a, b = b, 2.0 * b
    raise ConvergenceError(
        f"half-line integral: tolerance not reached after {spec.max_panels} panels "
        f"(last panel {last_val:.3e})"
    )
