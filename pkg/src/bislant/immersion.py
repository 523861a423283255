"""Parametric immersions ``i: U subset R^k -> R^m`` and their pointwise frames."""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import dsl
from .errors import DomainError, ParseError, RankDeficient
from .jets import orthonormal_complement, solve_spd, stack_jets
from .sampling import sample_box


@dataclass(frozen=True)
class ImmersionSpec:
    name: str
    chart_dim: int
    components: tuple
    domain: tuple
    params: object = None  # MetallicParams binding sigma, sigma_bar, p, q

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "domain", tuple((float(lo), float(hi)) for lo, hi in self.domain))
        if self.chart_dim < 1:
            raise ValueError("chart dimension must be positive")
        if len(self.domain) != self.chart_dim:
            raise ValueError(f"domain has {len(self.domain)} intervals for chart dimension {self.chart_dim}")
        if self.chart_dim > len(self.components):
            raise ValueError("chart dimension exceeds ambient dimension")
        for lo, hi in self.domain:
            if not lo < hi:
                raise ValueError(f"empty domain interval [{lo}, {hi}]")
        for i, c in enumerate(self.components):
            bad = [j for j in dsl.variables(c) if j >= self.chart_dim]
            if bad:
                raise ValueError(f"component {i + 1} uses u{bad[0] + 1} beyond chart dimension {self.chart_dim}")

    @property
    def ambient_dim(self):
        return len(self.components)

    def with_params(self, params):
        return replace(self, params=params)

    def constants(self):
        return self.params.constants() if self.params is not None else {"pi": math.pi}

    def contains(self, x, slack=0.0):
        return all(lo - slack <= xi <= hi + slack for xi, (lo, hi) in zip(x, self.domain))

    def evaluate(self, x):
        c = self.constants()
        return np.array([dsl.evaluate(comp, x, c) for comp in self.components])

    def jets(self, x):
        """Point, Jacobian (m, k) and Hessians (m, k, k) at chart point ``x``."""
        c = self.constants()
        x = tuple(float(t) for t in x)
        return stack_jets([dsl.jet_eval(comp, x, c) for comp in self.components])

    def source(self):
        return "\n".join(dsl.to_source(c) for c in self.components)

    def sample(self, n, seed, margin=1e-3):
        return sample_box(self.domain, n, seed, margin)


@dataclass(frozen=True, eq=False)
class FrameData:
    point: tuple
    value: np.ndarray
    tangent_frame: np.ndarray  # (m, k), columns Z_a
    normal_frame: np.ndarray  # (m, m-k), orthonormal
    gram: np.ndarray  # (k, k)
    second_jet: np.ndarray  # (k, k, m), d^2 i / du_a du_b

    @property
    def chart_dim(self):
        return self.tangent_frame.shape[1]

    @property
    def ambient_dim(self):
        return self.tangent_frame.shape[0]

    @property
    def normal_dim(self):
        return self.normal_frame.shape[1]

    @property
    def tangent_projector(self):
        Z = self.tangent_frame
        return Z @ solve_spd(self.gram, Z.T)

    @property
    def normal_projector(self):
        return self.normal_frame @ self.normal_frame.T

    def tangent_coords(self, w):
        """Chart coordinates of the tangential part of ambient vector(s) ``w``."""
        return solve_spd(self.gram, self.tangent_frame.T @ w)


def frame_at(spec, x, check_domain=True):
    x = tuple(float(t) for t in x)
    if len(x) != spec.chart_dim:
        raise ValueError(f"expected {spec.chart_dim} chart coordinates, got {len(x)}")
    if check_domain and not spec.contains(x, slack=1e-9):
        raise DomainError(f"point {x} lies outside the chart domain {spec.domain}")
    value, Z, H = stack_jets([dsl.jet_eval(c, x, spec.constants()) for c in spec.components])
    normal = orthonormal_complement(Z)
    gram = Z.T @ Z
    return FrameData(x, value, Z, normal, 0.5 * (gram + gram.T), np.transpose(H, (1, 2, 0)))


def parse_immersion(text, chart_dim=None, domain=None, name="immersion", params=None):
    """One component expression per line; blank lines and ``#`` comments are skipped."""
    components = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        components.append(dsl.parse_expression(line, line=lineno))
    if not components:
        raise ParseError("no components", 1, 1, text)
    used = set().union(*(dsl.variables(c) for c in components))
    if chart_dim is None:
        chart_dim = max(used) + 1 if used else 1
    if domain is None:
        raise ValueError("a chart domain is required")
    return ImmersionSpec(name, chart_dim, tuple(components), tuple(domain), params)


def parse_bound(value, params=None):
    """A domain endpoint: a number or a constant expression such as ``"pi/2"``."""
    if isinstance(value, (int, float)):
        return float(value)
    node = dsl.parse_expression(str(value))
    if dsl.variables(node):
        raise ParseError(f"domain bound {value!r} must not depend on chart variables")
    return dsl.evaluate(node, (), params.constants() if params else {})


def immersion_rank_margin(spec, points):
    """Smallest Jacobian singular value over ``points`` (zero means not immersive)."""
    worst = math.inf
    for x in points:
        _, Z, _ = spec.jets(x)
        worst = min(worst, np.linalg.svd(Z, compute_uv=False)[-1])
    return worst


@dataclass(frozen=True)
class Locus:
    """A constraint ``u_coordinate in values`` inside the chart domain.

    ``candidates`` are every solution of the constraint; ``values`` are those
    strictly inside the open domain.  An empty ``values`` means the constraint
    has no solution in the chart.
    """

    description: str
    coordinate: int
    candidates: tuple
    domain: tuple
    values: tuple = field(init=False)

    def __post_init__(self):
        lo, hi = self.domain[self.coordinate]
        inside = tuple(v for v in self.candidates if lo < v < hi)
        object.__setattr__(self, "values", inside)

    @property
    def empty(self):
        return not self.values

    def sample(self, n, seed, margin=1e-3):
        if self.empty:
            return []
        free = [iv for i, iv in enumerate(self.domain) if i != self.coordinate]
        pts = sample_box(free, n, seed, margin) if free else [()] * n
        out = []
        for j, rest in enumerate(pts):
            rest = list(rest)
            rest.insert(self.coordinate, self.values[j % len(self.values)])
            out.append(tuple(rest))
        return out

    def to_dict(self):
        return {"description": self.description, "coordinate": f"u{self.coordinate + 1}",
                "candidates": list(self.candidates), "values": list(self.values), "empty": self.empty}
