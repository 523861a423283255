import math

import numpy as np
import pytest

from bislant.geometry import PointGeometry
from bislant.registry import registry_get

PQ = [(1, 1), (2, 1), (1, 2)]


def geometries(name, n=10, seed=3, p=1, q=1):
    target = registry_get(name, p, q)
    return target, [PointGeometry(target.spec, target.ambient, x) for x in target.sample(n, seed)]


@pytest.fixture
def ex41():
    return registry_get("ex4_1", 1, 1)


@pytest.fixture
def ex51():
    return registry_get("ex5_1", 1, 1)


def metallic_f(params, v):
    return params.sigma * math.cos(v) ** 2 + params.sigma_bar * math.sin(v) ** 2


def fd_grad(fn, x, h=1e-4):
    x = np.asarray(x, dtype=float)
    out = []
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        out.append((fn(x + e) - fn(x - e)) / (2 * h))
    return np.array(out)
