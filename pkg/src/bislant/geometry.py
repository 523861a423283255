"""Everything known about an immersion at one chart point, in one place.

Tangent vectors are chart coordinate vectors; normal vectors are ambient
vectors lying in the normal space.  Vector fields are the constant-coefficient
combinations of the coordinate fields ``Z_a``.
"""

from functools import cached_property

import numpy as np

from .extrinsic import OperatorJets, covariant_T_N, extrinsic_at
from .immersion import frame_at
from .split import split_J


class PointGeometry:
    def __init__(self, spec, ambient, x, frame=None):
        self.spec = spec
        self.ambient = ambient
        self.params = ambient.params
        self.frame = frame if frame is not None else frame_at(spec, x)
        self.x = self.frame.point
        self.split = split_J(ambient, self.frame)
        self.ext = extrinsic_at(spec, self.frame, normal_connection=False)
        self._cov = {}

    @property
    def k(self):
        return self.frame.chart_dim

    @property
    def G(self):
        return self.frame.gram

    @property
    def T(self):
        return self.split.T

    @cached_property
    def jets(self):
        return OperatorJets(self.frame, self.ambient.J)

    # vectors ------------------------------------------------------------

    def e(self, a):
        return np.eye(self.k)[a]

    def vec(self, X):
        return self.frame.tangent_frame @ X

    def g(self, X, Y):
        return float(X @ self.G @ Y)

    def gbar(self, V, W):
        return float(V @ W)

    def JX(self, X):
        return self.ambient.J @ self.vec(X)

    def N(self, X):
        """``NX`` as an ambient normal vector."""
        return self.frame.normal_frame @ (self.split.N @ X)

    def t(self, V):
        return self.split.t @ (self.frame.normal_frame.T @ V)

    def n(self, V):
        return self.frame.normal_frame @ (self.split.n @ (self.frame.normal_frame.T @ V))

    def h(self, X, Y):
        return self.ext.second_form(X, Y)

    def A(self, V, X):
        """``A_V X`` in chart coordinates."""
        return self.ext.shape_operator(V) @ X

    def nabla(self, X, Y):
        """``nabla_X Y`` for constant-coefficient fields ``X``, ``Y``."""
        return self.ext.connection(X, Y)

    # derivatives --------------------------------------------------------

    def covariant(self, X):
        key = tuple(np.round(np.asarray(X, dtype=float), 15))
        if key not in self._cov:
            self._cov[key] = covariant_T_N(self.ext, self.jets, X)
        return self._cov[key]

    def wirtinger_jet(self, X):
        """Jet of ``cos^2`` of the Wirtinger angle of the coordinate field ``X``."""
        X = np.asarray(X, dtype=float)
        jets = self.jets
        TX = jets.T @ X
        JZX = self.ambient.J @ (jets.Z @ X)
        num = TX.T @ (jets.G @ TX)  # scalar jet, ||TX||_g^2
        den = JZX.T @ JZX
        return num / den

    def theta_derivative(self, X, direction):
        """``direction(theta_X)`` from the jet of ``cos^2 theta = a``: ``-a'/(2 sqrt(a(1-a)))``."""
        c2 = self.wirtinger_jet(X)
        a = float(c2.value)
        da = float(c2.along(direction))
        if a < 1e-12 or a > 1.0 - 1e-12:
            # theta is 0 or pi/2 here; the Wirtinger function has a kink or a flat endpoint
            return np.nan
        return -da / (2.0 * np.sqrt(a * (1.0 - a)))
