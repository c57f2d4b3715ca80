import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import erf

from roughtda.errors import ConfigError
from roughtda.persistence import PersistenceDiagram
from roughtda.tda_features import (PersistenceImageConfig, TemplateConfig, carlsson_coordinates,
                                   chebyshev_nodes, fit_persistence_image_config,
                                   fit_template_config, lagrange_basis, persistence_image,
                                   persistence_weight, template_features)

point = st.tuples(st.floats(-3, 3), st.floats(0, 2)).map(lambda t: (t[0], t[0] + t[1]))
diagrams = st.lists(point, max_size=8)


def exact_image(pairs, cfg):
    """Cell integrals of the weighted Gaussians in closed form via erf."""
    def cell_mass(c, lo, hi, n):
        e = np.linspace(lo, hi, n + 1)
        cdf = 0.5 * (1 + erf((e - c) / (np.sqrt(2) * cfg.sigma)))
        return np.diff(cdf)

    img = np.zeros((cfg.grid_rows, cfg.grid_cols))
    for b, d in pairs:
        w = min(max((d - b) / cfg.weight_scale, 0.0), 1.0)
        img += w * np.outer(cell_mass(d - b, *cfg.lifetime_range, cfg.grid_rows),
                            cell_mass(b, *cfg.birth_range, cfg.grid_cols))
    return img.ravel()


# ---------------------------------------------------------------------------
# Carlsson coordinates

def test_carlsson_hand_value():
    c = carlsson_coordinates(PersistenceDiagram(0, [(0, 2), (1, 3)], 3))
    assert (c.f1, c.f2, c.f3, c.f4, c.f5) == (2, 2, 16, 16, 2)


@pytest.mark.parametrize("pairs", [[], [(1, 1)]])
def test_carlsson_zero(pairs):
    assert np.array_equal(carlsson_coordinates(pairs).as_array(), np.zeros(5))


@given(diagrams, diagrams)
def test_carlsson_additive(a, b):
    union = a + b
    if not union:
        return
    d_max = max(d for _, d in union)
    ca = carlsson_coordinates(a, d_max).as_array() if a else np.zeros(5)
    cb = carlsson_coordinates(b, d_max).as_array() if b else np.zeros(5)
    cu = carlsson_coordinates(union, d_max).as_array()
    np.testing.assert_allclose(cu[:4], ca[:4] + cb[:4], rtol=1e-9, atol=1e-9)
    assert cu[4] == max(ca[4], cb[4])
    assert cu[4] >= 0


@given(diagrams, st.randoms())
def test_carlsson_permutation_invariant(a, rnd):
    b = list(a)
    rnd.shuffle(b)
    np.testing.assert_allclose(carlsson_coordinates(a).as_array(), carlsson_coordinates(b).as_array(),
                               rtol=1e-12, atol=1e-12)


# ---------------------------------------------------------------------------
# persistence images

def test_pi_default_length():
    cfg = fit_persistence_image_config([[(0, 1), (0.5, 2.0)]])
    assert persistence_image([(0, 1)], cfg).values.shape == (320,)


def test_pi_zero_persistence_is_zero():
    cfg = PersistenceImageConfig((-1, 1), (-1, 1), 0.2, p_max=1.0)
    assert np.all(persistence_image([(0.3, 0.3)], cfg).values == 0)


def test_pi_single_point_unit_mass():
    sigma = 0.1
    cfg = PersistenceImageConfig((0.5 - 5 * sigma, 0.5 + 5 * sigma), (1 - 5 * sigma, 1 + 5 * sigma),
                                 sigma, p_max=1.0)
    v = persistence_image([(0.5, 1.5)], cfg).values
    assert v.sum() == pytest.approx(1.0, abs=1e-3)


def test_pi_matches_erf_oracle():
    rng = np.random.default_rng(4)
    b = rng.uniform(0, 1, 12)
    pairs = list(zip(b, b + rng.uniform(0, 1, 12)))
    cfg = fit_persistence_image_config([pairs])
    exact = exact_image(pairs, cfg)
    err4 = np.abs(persistence_image(pairs, cfg).values - exact).max()
    assert err4 <= 1e-2 * exact.max()
    # midpoint rule is second order: 4x finer sub-grid cuts the error ~16x
    fine = PersistenceImageConfig(cfg.birth_range, cfg.lifetime_range, cfg.sigma, cfg.p_max,
                                  subsamples=16)
    err16 = np.abs(persistence_image(pairs, fine).values - exact).max()
    assert err16 < err4 / 10


def test_pi_row_major_lifetime_rows():
    cfg = PersistenceImageConfig((0, 4), (0, 2), 0.05, p_max=1.0, grid_cols=4, grid_rows=2)
    v = persistence_image([(3.5, 4.0)], cfg).values.reshape(2, 4)
    # birth 3.5 -> last column, lifetime 0.5 -> first row
    assert np.unravel_index(np.argmax(v), v.shape) == (0, 3)


@given(diagrams)
def test_pi_mass_equals_total_weight(pairs):
    if not pairs:
        return
    life = [d - b for b, d in pairs]
    sigma = 0.05
    pad = 5 * sigma
    births = [b for b, _ in pairs]
    cfg = PersistenceImageConfig((min(births) - pad, max(births) + pad),
                                 (min(life) - pad, max(life) + pad), sigma, p_max=2.0,
                                 grid_cols=40, grid_rows=40)
    v = persistence_image(pairs, cfg).values
    assert v.sum() == pytest.approx(persistence_weight(life, 2.0).sum(), abs=1e-2)


@given(diagrams, st.randoms())
def test_pi_permutation_invariant(a, rnd):
    cfg = PersistenceImageConfig((-4, 6), (-1, 3), 0.3, p_max=2.0)
    b = list(a)
    rnd.shuffle(b)
    np.testing.assert_allclose(persistence_image(a, cfg).values, persistence_image(b, cfg).values,
                               atol=1e-12)


def test_pi_weight():
    np.testing.assert_array_equal(persistence_weight([-1, 0, 0.5, 1, 3], 1.0), [0, 0, 0.5, 1, 1])


@pytest.mark.parametrize("kwargs", [dict(sigma=0), dict(birth_range=(1, 1)), dict(grid_cols=0),
                                    dict(subsamples=2), dict(p_max=0.0)])
def test_pi_config_errors(kwargs):
    base = dict(birth_range=(0, 1), lifetime_range=(0, 1), sigma=0.1)
    with pytest.raises(ConfigError):
        PersistenceImageConfig(**{**base, **kwargs})


def test_pi_fit_ranges():
    cfg = fit_persistence_image_config([[(0, 1)], [(2, 5)]])
    assert cfg.sigma == pytest.approx(0.2)
    assert cfg.birth_range == pytest.approx((-0.6, 2.6))
    assert cfg.lifetime_range == pytest.approx((0.4, 3.6))
    assert cfg.p_max == 3
    with pytest.raises(ConfigError):
        fit_persistence_image_config([[]])


# ---------------------------------------------------------------------------
# template functions

def test_chebyshev_nodes():
    n = chebyshev_nodes(-1, 1, 3)
    np.testing.assert_allclose(n, [-np.sqrt(3) / 2, 0, np.sqrt(3) / 2], atol=1e-15)


def test_lagrange_cardinal_property():
    nodes = chebyshev_nodes(0, 2, 6)
    np.testing.assert_allclose(lagrange_basis(nodes, nodes), np.eye(6), atol=1e-12)
    x = np.linspace(0, 2, 17)
    np.testing.assert_allclose(lagrange_basis(nodes, x).sum(axis=1), 1.0, atol=1e-12)


def test_template_empty_and_length():
    cfg = TemplateConfig((0, 1), (0, 1), 3, 3)
    v = template_features([], cfg).values
    assert v.shape == (9,) and np.all(v == 0)


def test_template_one_hot_at_node():
    cfg = TemplateConfig((0, 1), (0, 2), 4, 5)
    i, j = 2, 3
    b, p = cfg.mesh_a[i], cfg.mesh_b[j]
    v = template_features([(b, b + p)], cfg).values.reshape(4, 5)
    expected = np.zeros((4, 5))
    expected[i, j] = 1
    np.testing.assert_allclose(v, expected, atol=1e-12)


def test_template_outside_box_ignored():
    cfg = TemplateConfig((0, 1), (0, 1), 3, 3)
    assert np.all(template_features([(5, 5.5)], cfg).values == 0)


@given(diagrams, diagrams)
def test_template_additive(a, b):
    cfg = TemplateConfig((-3.5, 3.5), (-0.1, 2.1), 4, 4)
    np.testing.assert_allclose(template_features(a + b, cfg).values,
                               template_features(a, cfg).values + template_features(b, cfg).values,
                               rtol=1e-9, atol=1e-9)


@given(diagrams, st.randoms())
def test_template_permutation_invariant(a, rnd):
    cfg = TemplateConfig((-3.5, 3.5), (-0.1, 2.1))
    b = list(a)
    rnd.shuffle(b)
    np.testing.assert_allclose(template_features(a, cfg).values, template_features(b, cfg).values,
                               rtol=1e-9, atol=1e-9)


def test_template_fit_box_and_errors():
    cfg = fit_template_config([[(0, 1)], [(2, 4)]])
    assert cfg.birth_range == pytest.approx((-0.1, 2.1))
    assert cfg.lifetime_range == pytest.approx((0.95, 2.05))
    with pytest.raises(ConfigError):
        fit_template_config([[]])
    with pytest.raises(ConfigError):
        TemplateConfig((0, 1), (0, 1), 1, 3)


def test_fixed_length_across_dataset():
    rng = np.random.default_rng(0)
    ds = [list(zip(b, b + rng.uniform(0, 1, len(b)))) for b in
          (rng.uniform(0, 1, k) for k in (0, 1, 5, 30))]
    pi_cfg = fit_persistence_image_config(ds)
    tf_cfg = fit_template_config(ds)
    assert {len(persistence_image(d, pi_cfg)) for d in ds} == {320}
    assert {len(template_features(d, tf_cfg)) for d in ds} == {100}
