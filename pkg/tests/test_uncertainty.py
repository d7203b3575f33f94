"""Coordinate conversions, weight realization, and preference halfspaces."""

import numpy as np
import pytest

from matroid_elicit.instances import toy_instance
from matroid_elicit.matroid import InputError
from matroid_elicit.uncertainty import (
    AttributeMatrix,
    preference_halfspace,
    realize_weights,
    sigma_to_lambda,
)


@pytest.fixture(scope="module")
def toy_Y() -> AttributeMatrix:
    return toy_instance()[1]


# -------------------------------------------------------------- sigma <-> lambda

def test_origin_maps_to_last_unit_vector():
    assert np.allclose(sigma_to_lambda(np.zeros(3)), [0, 0, 0, 1])


def test_toy_cut_vertex_conversion():
    lam = sigma_to_lambda(np.array([0.0, 0.0, 6 / 13]))
    assert np.allclose(lam, [0, 0, 6 / 13, 7 / 13])


def test_p2_segment_conversion():
    assert np.allclose(sigma_to_lambda(np.array([0.25])), [0.25, 0.75])


def test_sigma_outside_simplex_rejected():
    with pytest.raises(InputError):
        sigma_to_lambda(np.array([0.7, 0.7]))
    with pytest.raises(InputError):
        sigma_to_lambda(np.array([-0.01, 0.2]))


def test_roundtrip_random_simplex_points():
    rng = np.random.default_rng(0)
    for _ in range(200):
        raw = rng.exponential(size=5)
        lam = raw / raw.sum()
        back = sigma_to_lambda(lam[:-1])
        assert np.allclose(back, lam, atol=1e-12)


def test_boundary_clamping_within_eps():
    lam = sigma_to_lambda(np.array([1.0 + 5e-10, 0.0]))
    assert (lam >= 0).all() and (lam <= 1).all()


# ------------------------------------------------------------- realize_weights

def test_toy_first_column(toy_Y):
    w = realize_weights(toy_Y, np.array([1.0, 0, 0, 0]))
    assert np.allclose(w, [6, 2, 5, 8, 1, 6, 3, 2])


def test_unit_vectors_give_columns(toy_Y):
    for j in range(toy_Y.p):
        lam = np.zeros(toy_Y.p)
        lam[j] = 1.0
        assert np.allclose(realize_weights(toy_Y, lam), toy_Y.y[:, j])


def test_toy_halfhalf_average(toy_Y):
    w = realize_weights(toy_Y, np.array([0.5, 0.5, 0, 0]))
    assert np.allclose(w, [7, 3, 3.5, 7.5, 1.5, 4.5, 3.5, 2.5])


def test_dimension_mismatch(toy_Y):
    with pytest.raises(InputError):
        realize_weights(toy_Y, np.array([1.0, 0, 0]))


def test_realization_is_affine(toy_Y):
    rng = np.random.default_rng(1)
    for _ in range(50):
        raw = rng.exponential(size=(2, toy_Y.p))
        lam1, lam2 = raw / raw.sum(axis=1, keepdims=True)
        t = rng.uniform()
        mixed = realize_weights(toy_Y, t * lam1 + (1 - t) * lam2)
        split = t * realize_weights(toy_Y, lam1) + (1 - t) * realize_weights(toy_Y, lam2)
        assert np.allclose(mixed, split, atol=1e-12)


def test_weights_nonnegative_on_simplex(toy_Y):
    rng = np.random.default_rng(2)
    for _ in range(100):
        raw = rng.exponential(size=toy_Y.p)
        assert (realize_weights(toy_Y, raw / raw.sum()) >= 0).all()


# -------------------------------------------------------- preference halfspace

def test_toy_constraint_4_over_5(toy_Y):
    h = preference_halfspace(toy_Y, 4, 5)
    assert np.array_equal(h.a, [1.0, -1.0, -13.0])
    assert h.c == 6.0


def test_identical_rows_vacuous():
    Y = AttributeMatrix(np.array([[2.0, 3.0], [2.0, 3.0], [1.0, 4.0]]))
    h = preference_halfspace(Y, 1, 2)
    assert np.array_equal(h.a, [0.0])
    assert h.c == 0.0


def test_bad_indices(toy_Y):
    with pytest.raises(InputError):
        preference_halfspace(toy_Y, 3, 3)
    with pytest.raises(InputError):
        preference_halfspace(toy_Y, 0, 3)


def test_halfspace_soundness_1000_random(toy_Y):
    # membership in the halfspace must agree with the sign of w_l - w_k
    rng = np.random.default_rng(3)
    for _ in range(1000):
        raw = rng.exponential(size=toy_Y.p)
        lam = raw / raw.sum()
        sigma = lam[:-1]
        l, k = rng.choice(toy_Y.n, size=2, replace=False) + 1
        h = preference_halfspace(toy_Y, int(l), int(k))
        w = realize_weights(toy_Y, sigma_to_lambda(sigma))
        diff = w[l - 1] - w[k - 1]
        slack = float(sigma @ h.a + h.c)
        assert slack == pytest.approx(diff, abs=1e-9)


def test_negative_attribute_rejected():
    with pytest.raises(InputError):
        AttributeMatrix(np.array([[1.0, -0.5], [2.0, 3.0]]))
