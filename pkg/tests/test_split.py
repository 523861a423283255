import math

import numpy as np
import pytest

from bislant.geometry import PointGeometry
from bislant.immersion import frame_at
from bislant.metallic import from_almost_product, make_params, random_almost_product
from bislant.registry import registry_get
from bislant.split import (
    check_fundamental_identities, check_product_relations, check_split_invariants, product_sign, split_J,
)

from conftest import PQ, metallic_f


@pytest.mark.parametrize("p,q", PQ)
def test_ex41_operators_by_hand(p, q):
    t = registry_get("ex4_1", p, q)
    u, v = 0.7, 0.4
    s = split_J(t.ambient, frame_at(t.spec, (u, v)))
    f = metallic_f(t.params, v)
    np.testing.assert_allclose(s.T, np.diag([f, p / 2]), atol=1e-12)


@pytest.mark.parametrize("p,q", PQ)
def test_ex51_operators_by_hand(p, q):
    t = registry_get("ex5_1", p, q)
    m = t.params
    u = 1.7
    s = split_J(t.ambient, frame_at(t.spec, (u, 0.3)))
    expected = np.diag([(2 * m.sigma + m.sigma_bar) / 3, (p * u * u + m.sigma_bar) / (2 * u * u + 1)])
    np.testing.assert_allclose(s.T, expected, atol=1e-12)


@pytest.mark.parametrize("name", ["plane_invariant", "plane_antiinvariant"])
def test_trivial_planes(name):
    t = registry_get(name)
    s = split_J(t.ambient, frame_at(t.spec, (0.1, -0.2)))
    if name == "plane_invariant":
        np.testing.assert_allclose(s.T, t.params.sigma * np.eye(2), atol=1e-14)
        assert np.abs(s.N).max() < 1e-14
    else:
        assert np.abs(s.T).max() < 1e-14


def _random_split(seed, k=3, m=7, p=1, q=1):
    rng = np.random.default_rng(seed)
    params = make_params(p, q)
    J1, _ = from_almost_product(params, random_almost_product(m, rng))
    Z = rng.standard_normal((m, k))

    class _Frame:
        pass

    from bislant.jets import orthonormal_complement

    fr = _Frame()
    fr.tangent_frame, fr.normal_frame, fr.gram = Z, orthonormal_complement(Z), Z.T @ Z
    return split_J(J1, fr), params, J1


@pytest.mark.parametrize("seed", range(5))
def test_identities_on_random_frames(seed):
    s, params, amb = _random_split(seed, p=1 + seed % 3, q=1 + seed % 2)
    for name, r in check_fundamental_identities(s, params).items():
        assert r < 1e-9, name
    for name, r in check_split_invariants(s).items():
        assert r < 1e-9, name
    sign = product_sign(amb, params)
    for name, r in check_product_relations(s, params, sign).items():
        assert r < 1e-9, name


def test_second_structure_has_negative_sign():
    rng = np.random.default_rng(11)
    params = make_params(2, 3)
    F = random_almost_product(5, rng)
    J1, J2 = from_almost_product(params, F)
    assert product_sign(J1, params) == 1
    assert product_sign(J2, params) == -1


def test_perturbation_breaks_identities():
    t = registry_get("ex4_1")
    rng = np.random.default_rng(0)
    E = rng.standard_normal((6, 6))
    bad = t.ambient.perturbed(1e-3 * (E + E.T) / 2)
    s = split_J(bad, frame_at(t.spec, (0.5, 0.5)))
    assert max(check_fundamental_identities(s, t.params).values()) > 1e-5


def test_geometry_vectors_consistent():
    t = registry_get("ex5_1")
    geo = PointGeometry(t.spec, t.ambient, (1.2, 0.4))
    X = np.array([0.3, -1.0])
    # JX = Z T X + N X
    np.testing.assert_allclose(geo.JX(X), geo.vec(geo.T @ X) + geo.N(X), atol=1e-12)
    V = geo.N(X)
    np.testing.assert_allclose(t.ambient.J @ V, geo.vec(geo.t(V)) + geo.n(V), atol=1e-12)
    assert geo.g(X, X) == pytest.approx(3 * 0.09 + (2 * 1.44 + 1) * 1.0)
    assert math.isclose(geo.gbar(V, V), float(V @ V))
