"""Scene files: a single JSON document describing geometry, charges, options.

The schema is strict: unknown keys anywhere are rejected, so typos fail
loudly instead of silently computing the wrong thing. Charges may be given
in coulombs or elementary-charge units; everything is stored in SI.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

from scipy.constants import elementary_charge

from . import born, screening
from .core import (
    PERFECT_CONDUCTOR,
    Charge,
    CoulombError,
    FreeSpace,
    HalfSpace,
    PlateWithHole,
    Point3,
    QuadratureSpec,
    SceneError,
    ThreeLayerCavity,
)
from .interactions import Geometry


def _require_keys(obj: dict, where: str, required: Tuple[str, ...],
                  optional: Tuple[str, ...] = ()) -> None:
    if not isinstance(obj, dict):
        raise SceneError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise SceneError(f"{where}: unknown keys {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise SceneError(f"{where}: missing keys {sorted(missing)}")


def _number(obj, where: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise SceneError(f"{where}: expected a number, got {obj!r}")
    if not math.isfinite(obj):
        raise SceneError(f"{where}: must be finite, got {obj!r}")
    return float(obj)


def _eps(obj, where: str):
    if obj == "conductor":
        return PERFECT_CONDUCTOR
    return _number(obj, where)


def _parse_geometry(obj: dict) -> Geometry:
    _require_keys(obj, "geometry", ("type",),
                  ("eps", "eps1", "eps2", "eps3", "d", "R", "drude",
                   "alpha", "background_eps", "half_space_eta", "regions"))
    kind = obj.get("type")
    try:
        if kind == "free_space":
            _require_keys(obj, "geometry", ("type",), ("eps",))
            return FreeSpace(eps=_number(obj.get("eps", 1.0), "geometry.eps"))
        if kind == "half_space":
            _require_keys(obj, "geometry", ("type", "eps1", "eps2"), ())
            return HalfSpace(_eps(obj["eps1"], "geometry.eps1"),
                             _eps(obj["eps2"], "geometry.eps2"))
        if kind == "cavity":
            _require_keys(obj, "geometry", ("type", "eps1", "eps2", "eps3", "d"), ())
            return ThreeLayerCavity(_eps(obj["eps1"], "geometry.eps1"),
                                    _number(obj["eps2"], "geometry.eps2"),
                                    _eps(obj["eps3"], "geometry.eps3"),
                                    _number(obj["d"], "geometry.d"))
        if kind == "plate_with_hole":
            _require_keys(obj, "geometry", ("type", "R"), ())
            return PlateWithHole(R=_number(obj["R"], "geometry.R"))
        if kind == "nonlocal_bulk":
            _require_keys(obj, "geometry", ("type", "drude"), ())
            dr = obj["drude"]
            _require_keys(dr, "geometry.drude",
                          ("omega_p", "omega_p_bound", "omega_0", "beta"),
                          ("gamma_free", "gamma_bound"))
            return screening.NonlocalBulk(screening.DrudeStatic(
                omega_p=_number(dr["omega_p"], "drude.omega_p"),
                omega_p_bound=_number(dr["omega_p_bound"], "drude.omega_p_bound"),
                omega_0=_number(dr["omega_0"], "drude.omega_0"),
                beta=_number(dr["beta"], "drude.beta"),
                gamma_free=_number(dr.get("gamma_free", 0.0), "drude.gamma_free"),
                gamma_bound=_number(dr.get("gamma_bound", 0.0), "drude.gamma_bound")))
        if kind == "dilute_body":
            _require_keys(obj, "geometry", ("type", "alpha"),
                          ("background_eps", "half_space_eta", "regions"))
            alpha = obj["alpha"]
            if isinstance(alpha, (int, float)):
                tensor = born.PolarizabilityTensor.isotropic(float(alpha))
            else:
                tensor = born.PolarizabilityTensor.from_matrix(alpha)
            regions = []
            for i, reg in enumerate(obj.get("regions", [])):
                _require_keys(reg, f"geometry.regions[{i}]", ("box", "eta"), ())
                box = reg["box"]
                if not (isinstance(box, list) and len(box) == 6):
                    raise SceneError(f"geometry.regions[{i}].box: expected 6 numbers")
                vals = [_number(v, f"geometry.regions[{i}].box[{j}]")
                        for j, v in enumerate(box)]
                regions.append(born.DensityRegion(
                    born.Box(*vals), _number(reg["eta"], f"geometry.regions[{i}].eta")))
            hs_eta = obj.get("half_space_eta")
            return born.DiluteBody(
                alpha=tensor, regions=tuple(regions),
                half_space_eta=None if hs_eta is None else _number(
                    hs_eta, "geometry.half_space_eta"),
                background_eps=_number(obj.get("background_eps", 1.0),
                                       "geometry.background_eps"))
    except CoulombError:
        raise
    except (TypeError, ValueError) as exc:
        raise SceneError(f"geometry: {exc}") from exc
    raise SceneError(f"geometry.type: unknown geometry {kind!r}")


def _parse_charge(obj: dict, where: str) -> Charge:
    _require_keys(obj, where, ("q", "position"), ("unit",))
    unit = obj.get("unit", "C")
    if unit not in ("C", "e"):
        raise SceneError(f"{where}.unit: must be 'C' or 'e', got {unit!r}")
    q = _number(obj["q"], f"{where}.q")
    if unit == "e":
        q *= elementary_charge
    pos = obj["position"]
    if not (isinstance(pos, list) and len(pos) == 3):
        raise SceneError(f"{where}.position: expected [x, y, z]")
    xyz = [_number(v, f"{where}.position[{i}]") for i, v in enumerate(pos)]
    return Charge(q, Point3(*xyz))


@dataclass(frozen=True)
class SceneOptions:
    local_field: bool = False
    units: str = "si"
    rel_tol: Optional[float] = None
    abs_tol: Optional[float] = None
    threads: Optional[int] = None

    def quad_spec(self) -> QuadratureSpec:
        base = QuadratureSpec()
        return QuadratureSpec(
            rel_tol=self.rel_tol if self.rel_tol is not None else base.rel_tol,
            abs_tol=self.abs_tol if self.abs_tol is not None else base.abs_tol,
            max_panels=base.max_panels,
            accel_order=base.accel_order)


@dataclass(frozen=True)
class Scene:
    geometry: Geometry
    charges: Tuple[Charge, ...]
    options: SceneOptions = field(default_factory=SceneOptions)


def parse_scene(doc: dict) -> Scene:
    _require_keys(doc, "scene", ("geometry", "charges"), ("options",))
    geometry = _parse_geometry(doc["geometry"])
    charges_doc = doc["charges"]
    if not (isinstance(charges_doc, list) and 1 <= len(charges_doc) <= 2):
        raise SceneError("charges: expected a list of 1 or 2 charges")
    charges = tuple(_parse_charge(c, f"charges[{i}]")
                    for i, c in enumerate(charges_doc))
    opts_doc = doc.get("options", {})
    _require_keys(opts_doc, "options", (),
                  ("local_field", "units", "rel_tol", "abs_tol", "threads"))
    units = opts_doc.get("units", "si")
    if units not in ("si", "ratio"):
        raise SceneError(f"options.units: must be 'si' or 'ratio', got {units!r}")
    lf = opts_doc.get("local_field", False)
    if not isinstance(lf, bool):
        raise SceneError("options.local_field: must be true or false")
    rel_tol = opts_doc.get("rel_tol")
    abs_tol = opts_doc.get("abs_tol")
    threads = opts_doc.get("threads")
    if rel_tol is not None:
        rel_tol = _number(rel_tol, "options.rel_tol")
    if abs_tol is not None:
        abs_tol = _number(abs_tol, "options.abs_tol")
    if threads is not None and (isinstance(threads, bool)
                                or not isinstance(threads, int) or threads < 1):
        raise SceneError("options.threads: must be a positive integer")
    options = SceneOptions(local_field=lf, units=units, rel_tol=rel_tol,
                           abs_tol=abs_tol, threads=threads)
    try:
        return Scene(geometry=geometry, charges=charges, options=options)
    except CoulombError:
        raise
    except (TypeError, ValueError) as exc:
        raise SceneError(str(exc)) from exc


def load_scene(path) -> Scene:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SceneError(f"cannot read scene file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SceneError(f"scene file is not valid JSON: {exc}") from exc
    return parse_scene(doc)


def set_scene_value(doc: dict, path: str, value: float) -> dict:
    """Return a copy of the raw scene document with the value at a dotted
    path replaced (list indices are numeric path elements)."""
    parts = path.split(".")
    out = json.loads(json.dumps(doc))
    node = out
    try:
        for key in parts[:-1]:
            node = node[int(key)] if isinstance(node, list) else node[key]
        leaf = parts[-1]
        if isinstance(node, list):
            i = int(leaf)
            if not isinstance(node[i], (int, float)) or isinstance(node[i], bool):
                raise SceneError(f"sweep path {path!r} does not address a number")
            node[i] = value
        else:
            if leaf not in node or not isinstance(node[leaf], (int, float)) \
                    or isinstance(node[leaf], bool):
                raise SceneError(f"sweep path {path!r} does not address a number")
            node[leaf] = value
    except (KeyError, IndexError, ValueError, TypeError) as exc:
        raise SceneError(f"sweep path {path!r} not found in scene: {exc}") from exc
    return out
