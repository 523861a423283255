"""Named example immersions with their metallic structures, distributions and warped data."""

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import dsl
from .errors import ConfigError
from .immersion import ImmersionSpec, Locus, parse_bound
from .metallic import diagonal_structure, make_params
from .slant import Distribution
from .warped import WarpedSpec

_ALT = ("sigma", "sigma_bar") * 3
_ANTI_A = "sqrt(-sigma_bar/(sigma - sigma_bar))"
_ANTI_B = "sqrt(sigma/(sigma - sigma_bar))"
_EX41 = ("cos(u1)*cos(u2)", "cos(u1)*sin(u2)", "sin(u1)*cos(u2)", "sin(u1)*sin(u2)", "sin(u2)", "cos(u2)")
_HALF_PI = (0.0, "pi/2")


@dataclass(frozen=True)
class _Entry:
    description: str
    components: tuple
    domain: tuple
    pattern: tuple
    d1: tuple = (0,)
    d2: tuple = (1,)
    warped: dict | None = None  # base, fiber, f, g1, g2
    locus: str | None = None
    extra: bool = False  # not one of the published examples


ENTRIES = {
    "ex4_1": _Entry("pointwise bi-slant surface in R^6", _EX41, (_HALF_PI, _HALF_PI), _ALT,
                    warped=dict(base=(0,), fiber=(1,), f="sqrt(2)", g1=(("1",),), g2=(("1",),))),
    "ex4_2": _Entry("ex4_1 on the locus where sigma cos^2 v + sigma_bar sin^2 v is a metallic number",
                    _EX41, (_HALF_PI, _HALF_PI), _ALT, locus="metallic"),
    "ex4_3": _Entry("ex4_1 on the locus tan v = (sqrt(p^2+4q)+p)/(2 sqrt(q))", _EX41, (_HALF_PI, _HALF_PI), _ALT,
                    locus="hemi"),
    "ex5_1": _Entry("warped product pointwise bi-slant surface in R^6",
                    ("u1*sin(u2)", "u1*cos(u2)", "u1", "u1*cos(u2)", "u1*sin(u2)", "u2"),
                    ((0.0, 3.0), _HALF_PI), ("sigma",) * 3 + ("sigma_bar",) * 3,
                    warped=dict(base=(0,), fiber=(1,), f="sqrt(2*u1^2 + 1)", g1=(("3",),), g2=(("1",),))),
    "plane_invariant": _Entry("coordinate plane spanned by two sigma-eigendirections",
                              ("u1", "0", "u2", "0", "0", "0"), ((-1.0, 1.0), (-1.0, 1.0)), _ALT),
    "plane_antiinvariant": _Entry("plane whose tangent space J maps into the normal space",
                                  (f"u1*{_ANTI_A}", f"u1*{_ANTI_B}", f"u2*{_ANTI_A}", f"u2*{_ANTI_B}", "0", "0"),
                                  ((-1.0, 1.0), (-1.0, 1.0)), _ALT),
    "semislant_product": _Entry("invariant line times a pointwise slant circle arc",
                                ("u1", "cos(u2)", "sin(u2)", "0", "0", "0"), ((0.0, 1.0), (0.1, 0.9)), _ALT,
                                warped=dict(base=(0,), fiber=(1,), f="1", g1=(("1",),), g2=(("1",),)),
                                extra=True),
    "semislant_product_swapped": _Entry("pointwise slant circle arc times an invariant line",
                                        ("u2", "cos(u1)", "sin(u1)", "0", "0", "0"), ((0.1, 0.9), (0.0, 1.0)),
                                        _ALT,
                                        warped=dict(base=(0,), fiber=(1,), f="1", g1=(("1",),), g2=(("1",),)),
                                        extra=True),
    "semislant_warped": _Entry("invariant base warped with a pointwise slant fiber, nonconstant warping",
                               ("u1*cos(u2)", "sin(u2)", "u1*sin(u2)", "cos(u2)", "0", "0"),
                               ((0.2, 1.5), (0.1, 1.4)), _ALT,
                               warped=dict(base=(0,), fiber=(1,), f="sqrt(u1^2 + 1)", g1=(("1",),), g2=(("1",),)),
                               extra=True),
    "hemislant_product": _Entry("anti-invariant line times a pointwise slant circle arc",
                                (f"u1*{_ANTI_A}", f"u1*{_ANTI_B}", "cos(u2)", "sin(u2)", "0", "0"),
                                ((0.0, 1.0), (0.9, 1.4)), _ALT,
                                warped=dict(base=(0,), fiber=(1,), f="1", g1=(("1",),), g2=(("1",),)),
                                extra=True),
    "hemislant_cone": _Entry("cone over an anti-invariant-radial curve; warped with f linear in u",
                             tuple(f"u1*{c}" for c in (f"{_ANTI_A}*cos(2*u2)", f"{_ANTI_B}*cos(u2)",
                                                       f"{_ANTI_A}*sin(2*u2)", f"{_ANTI_B}*sin(u2)")) + ("0", "0"),
                             ((0.5, 2.0), (0.1, 1.4)), _ALT,
                             warped=dict(base=(0,), fiber=(1,),
                                         f=f"u1*sqrt(4*({_ANTI_A})^2 + ({_ANTI_B})^2)", g1=(("1",),), g2=(("1",),)),
                             extra=True),
}

PUBLISHED = ("ex4_1", "ex4_2", "ex4_3", "ex5_1", "plane_invariant", "plane_antiinvariant")


@dataclass
class Target:
    """A resolved immersion with everything needed to verify it."""

    name: str
    spec: ImmersionSpec
    ambient: object
    d1: Distribution | None = None
    d2: Distribution | None = None
    warped: WarpedSpec | None = None
    locus: Locus | None = None
    description: str = ""
    info: dict = field(default_factory=dict)

    @property
    def params(self):
        return self.ambient.params

    def sample(self, n, seed, margin=1e-3):
        if self.locus is not None:
            return self.locus.sample(n, seed, margin)
        return self.spec.sample(n, seed, margin)


def registry_names():
    return list(ENTRIES)


def _locus(kind, domain, params):
    s, sb, p, q = params.sigma, params.sigma_bar, params.p, params.q
    if kind == "hemi":
        v0 = math.atan((math.sqrt(p * p + 4 * q) + p) / (2 * math.sqrt(q)))
        return Locus("sigma cos^2 v + sigma_bar sin^2 v = 0", 1, (v0,), domain)
    # f(v) = sigma cos^2 v + sigma_bar sin^2 v lies in [sigma_bar, sigma]; f^2 = p f + q only at the endpoints
    cands = []
    for root in (s, sb):
        # cos^2 v = (root - sigma_bar) / (sigma - sigma_bar)
        c2 = (root - sb) / (s - sb)
        cands.append(math.acos(math.sqrt(min(max(c2, 0.0), 1.0))))
    return Locus("sigma cos^2 v + sigma_bar sin^2 v in {sigma, sigma_bar}", 1, tuple(sorted(cands)), domain)


def _parse_rows(rows):
    return tuple(tuple(dsl.parse_expression(str(e)) for e in r) for r in rows)


def build_warped(spec, params, data):
    return WarpedSpec(tuple(data["base"]), tuple(data["fiber"]), dsl.parse_expression(str(data["f"])),
                      _parse_rows(data["g1"]), _parse_rows(data["g2"]), spec, params.constants())


def registry_get(name, p=1, q=1):
    try:
        entry = ENTRIES[name]
    except KeyError:
        raise ConfigError(f"unknown registry entry {name!r}; known: {', '.join(ENTRIES)}") from None
    params = make_params(p, q)
    domain = tuple((parse_bound(lo, params), parse_bound(hi, params)) for lo, hi in entry.domain)
    comps = tuple(dsl.parse_expression(c) for c in entry.components)
    spec = ImmersionSpec(name, len(domain), comps, domain, params)
    ambient = diagonal_structure(params, entry.pattern)
    k = spec.chart_dim
    d1 = Distribution.coordinate(entry.d1, k, "D1")
    d2 = Distribution.coordinate(entry.d2, k, "D2")
    warped = build_warped(spec, params, entry.warped) if entry.warped else None
    locus = _locus(entry.locus, domain, params) if entry.locus else None
    return Target(name, spec, ambient, d1, d2, warped, locus, entry.description, {"extra": entry.extra})


# JSON targets ------------------------------------------------------------------


def _basis_from_json(value, k, name):
    """``[0]`` (coordinate indices), ``["u1"]`` or ``[[1, 0], ...]`` (column vectors)."""
    if all(isinstance(v, (int, str)) for v in value):
        idx = [int(v[1:]) - 1 if isinstance(v, str) else int(v) for v in value]
        return Distribution.coordinate(idx, k, name)
    return Distribution(np.asarray(value, dtype=float).T, name)


def load_target_json(path, p=None, q=None):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return target_from_dict(data, p, q, source=path)


def target_from_dict(data, p=None, q=None, source="<dict>"):
    missing = [key for key in ("name", "k", "m", "domain", "components", "J_pattern") if key not in data]
    if missing:
        raise ConfigError(f"{source}: missing keys {missing}")
    params = make_params(p if p is not None else data.get("p", 1), q if q is not None else data.get("q", 1))
    if len(data["components"]) != data["m"] or len(data["J_pattern"]) != data["m"]:
        raise ConfigError(f"{source}: m={data['m']} disagrees with components/J_pattern lengths")
    if len(data["domain"]) != data["k"]:
        raise ConfigError(f"{source}: k={data['k']} disagrees with the domain")
    comps = []
    for i, text in enumerate(data["components"], start=1):
        comps.append(dsl.parse_expression(text, line=i))
    domain = tuple((parse_bound(lo, params), parse_bound(hi, params)) for lo, hi in data["domain"])
    try:
        spec = ImmersionSpec(data["name"], int(data["k"]), tuple(comps), domain, params)
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    ambient = diagonal_structure(params, tuple(data["J_pattern"]))
    k = spec.chart_dim
    d1 = _basis_from_json(data["d1"], k, "D1") if "d1" in data else None
    d2 = _basis_from_json(data["d2"], k, "D2") if "d2" in data else None
    warped = build_warped(spec, params, data["warped"]) if "warped" in data else None
    return Target(data["name"], spec, ambient, d1, d2, warped, None, data.get("description", ""), {"source": source})


def resolve_target(target, p=1, q=1):
    """Registry name, or path to an immersion JSON file."""
    if target in ENTRIES:
        return registry_get(target, p, q)
    if os.path.exists(target):
        return load_target_json(target, p, q)
    raise ConfigError(f"{target!r} is neither a registry entry nor an existing file")
