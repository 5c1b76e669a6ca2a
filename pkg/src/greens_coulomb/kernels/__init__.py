"""Hot numeric kernels with a compiled core and a pure fallback.

At import time the Cython extension `_fast` is preferred; if it was not
built (or GREENS_COULOMB_PURE is set) the numpy reference `_ref` is used.
Both expose the same API and agree to roundoff.
"""

import os

from . import _ref

if os.environ.get("GREENS_COULOMB_PURE"):
    _impl = _ref
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _ref

BACKEND = _impl.BACKEND_NAME

hole_greens = _impl.hole_greens
cavity_integrand = _impl.cavity_integrand
cavity_scatter_integrand = _impl.cavity_scatter_integrand
screening_integrand = _impl.screening_integrand
alpha_chain_sum = _impl.alpha_chain_sum

__all__ = [
    "BACKEND",
    "hole_greens",
    "cavity_integrand",
    "cavity_scatter_integrand",
    "screening_integrand",
    "alpha_chain_sum",
]
