import math

import numpy as np
import pytest
import scipy.stats as st
from helpers import (
    cauchy_pdf,
    gauss_pair_product,
    gaussian_pdf,
    lognormal_pdf,
    pearson2_d1_pdf,
    quad_power_integral,
)

from epsentropy.core import RngStream
from epsentropy.processes import (
    COPULA_MARGINALS,
    ProcessSpec,
    ProcessTruth,
    cauchy_ratio_process,
    copula_onedep_process,
    gaussian_ma_process,
    gen_cauchy_ratio,
    gen_copula_onedep,
    gen_gaussian_ma,
    gen_iid_uniform,
    gen_pearson2,
    generate,
    iid_uniform_process,
    lognormal_ma_process,
    lognormal_onedep_process,
    ma2_normal_process,
    pearson2_max_entropy_constant,
    pearson2_process,
    pearson2_quantile,
)

INF = float("inf")


# ---------------------------------------------------------------------------
# closed-form truths vs quadrature
# ---------------------------------------------------------------------------

def test_gaussian_truths_by_quadrature():
    spec = gaussian_ma_process([2.0, 1.0, 2.0])  # sigma = 3
    pdf = gaussian_pdf(3.0)
    assert spec.truth.q2 == pytest.approx(quad_power_integral(pdf, -40, 40, 2), rel=1e-10)
    assert spec.truth.q3 == pytest.approx(quad_power_integral(pdf, -40, 40, 3), rel=1e-10)
    assert spec.truth.h2 == pytest.approx(-math.log(spec.truth.q2), rel=1e-15)
    assert spec.truth.h3 == pytest.approx(-0.5 * math.log(spec.truth.q3), rel=1e-15)
    assert spec.m == 2


def test_lognormal_truths_by_quadrature():
    spec = lognormal_onedep_process()
    assert spec.m == 1
    pdf = lognormal_pdf(1.0)
    assert spec.truth.q2 == pytest.approx(quad_power_integral(pdf, 0, INF, 2), rel=1e-9)
    assert spec.truth.q3 == pytest.approx(quad_power_integral(pdf, 0, INF, 3), rel=1e-9)


def test_cauchy_truths_by_quadrature():
    spec = cauchy_ratio_process()
    assert spec.truth.q2 == pytest.approx(quad_power_integral(cauchy_pdf, -INF, INF, 2), rel=1e-10)
    assert spec.truth.q3 == pytest.approx(quad_power_integral(cauchy_pdf, -INF, INF, 3), rel=1e-10)
    assert spec.m == 1


def test_pearson2_truth_by_quadrature():
    spec = pearson2_process([0.0], [[1.0]])
    assert spec.truth.q2 == pytest.approx(
        quad_power_integral(pearson2_d1_pdf, -3, 3, 2), rel=1e-9
    )
    # scale: det^{1/2} divides q2
    wide = pearson2_process([0.0], [[4.0]])
    assert wide.truth.q2 == pytest.approx(spec.truth.q2 / 2.0, rel=1e-12)


def test_ma2_q3_equals_triple_density_integral():
    # u3 limit at lag 0 is E[p(X)^2], the same integral the q3 constant holds
    spec = ma2_normal_process()
    assert spec.truth.q3 == pytest.approx(gauss_pair_product(1.0), rel=1e-9)


def test_iid_uniform_truths():
    t = iid_uniform_process(1).truth
    assert (t.q2, t.h2, t.zeta) == (1.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# dependence structure
# ---------------------------------------------------------------------------

def _lag_corr(x, h):
    return float(np.corrcoef(x[:-h], x[h:])[0, 1])


def test_ma2_lag_correlations():
    x = gen_gaussian_ma([1, 1, 1], 120_000, RngStream(70, 0)).sample.points[:, 0]
    assert _lag_corr(x, 1) == pytest.approx(2.0 / 3.0, abs=0.01)
    assert _lag_corr(x, 2) == pytest.approx(1.0 / 3.0, abs=0.01)
    assert abs(_lag_corr(x, 3)) < 0.01  # independent beyond the window


def test_copula_chain_is_one_dependent():
    g = gen_copula_onedep("uniform", 8.0, 120_000, RngStream(71, 0))
    x = g.sample.points[:, 0]
    assert _lag_corr(x, 1) > 0.2
    assert abs(_lag_corr(x, 2)) < 0.01
    assert g.spec.m == 1


def test_copula_theta_zero_gives_independence():
    x = gen_copula_onedep("uniform", 0.0, 120_000, RngStream(72, 0)).sample.points[:, 0]
    assert abs(_lag_corr(x, 1)) < 0.01


# ---------------------------------------------------------------------------
# marginal laws
# ---------------------------------------------------------------------------

def test_gaussian_ma_marginal():
    x = gen_gaussian_ma([0.6, 0.8], 20_000, RngStream(73, 0)).sample.points[:, 0]
    assert st.kstest(x, st.norm(scale=1.0).cdf).pvalue > 0.01


def test_lognormal_marginal():
    g = generate(lognormal_onedep_process(), 20_000, RngStream(74, 0))
    x = g.sample.points[:, 0]
    assert np.all(x > 0)
    assert st.kstest(x, st.lognorm(s=1.0).cdf).pvalue > 0.01


def test_cauchy_marginal():
    x = gen_cauchy_ratio(20_000, RngStream(75, 0)).sample.points[:, 0]
    assert np.all(np.isfinite(x))
    assert st.kstest(x, st.cauchy.cdf).pvalue > 0.01


@pytest.mark.parametrize("marginal", sorted(COPULA_MARGINALS))
def test_copula_marginal_exact(marginal):
    x = gen_copula_onedep(marginal, 3.0, 20_000, RngStream(76, 0)).sample.points[:, 0]
    cdfs = {
        "uniform": st.uniform.cdf,
        "normal": st.norm.cdf,
        "lognormal": st.lognorm(s=1.0).cdf,
        "pearson2": lambda v: 0.5
        + 3.0 / (4.0 * math.sqrt(5.0)) * (np.clip(v, -math.sqrt(5), math.sqrt(5))
        - np.clip(v, -math.sqrt(5), math.sqrt(5)) ** 3 / 15.0),
    }
    assert st.kstest(x, cdfs[marginal]).pvalue > 0.01


def test_pearson2_support_and_moments():
    mu = np.array([1.0, -2.0])
    sigma = np.array([[2.0, 0.5], [0.5, 1.0]])
    g = gen_pearson2(mu, sigma, None, 40_000, RngStream(77, 0))
    pts = g.sample.points
    centered = pts - mu
    quad = np.einsum("ij,jk,ik->i", centered, np.linalg.inv(sigma), centered)
    assert np.max(quad) <= 6.0 + 1e-9  # support radius d + 4
    assert np.allclose(pts.mean(axis=0), mu, atol=0.03)
    assert np.allclose(np.cov(pts.T), sigma, atol=0.05)


def test_pearson2_marginal_d1():
    x = gen_pearson2([0.0], [[1.0]], None, 20_000, RngStream(78, 0)).sample.points[:, 0]
    root5 = math.sqrt(5.0)
    cdf = lambda v: 0.5 + 3.0 / (4.0 * root5) * (v - v**3 / 15.0)
    assert np.max(np.abs(x)) <= root5
    assert st.kstest(x, cdf).pvalue > 0.01


def test_iid_uniform_shape_and_law():
    g = gen_iid_uniform(3, 5_000, RngStream(79, 0))
    assert g.sample.d == 3 and g.sample.n == 5_000
    assert st.kstest(g.sample.points.ravel(), st.uniform.cdf).pvalue > 0.01


# ---------------------------------------------------------------------------
# quantiles
# ---------------------------------------------------------------------------

def test_pearson2_quantile_roundtrip():
    p = np.linspace(0.01, 0.99, 33)
    x = pearson2_quantile(p)
    root5 = math.sqrt(5.0)
    back = 0.5 + 3.0 / (4.0 * root5) * (x - x**3 / 15.0)
    assert np.allclose(back, p, atol=1e-12)
    assert pearson2_quantile(0.5) == pytest.approx(0.0, abs=1e-12)
    assert pearson2_quantile(0.5, mu=2.0, scale=3.0) == pytest.approx(2.0, abs=1e-11)
    with pytest.raises(ValueError):
        pearson2_quantile(0.0)
    with pytest.raises(ValueError):
        pearson2_quantile(1.0)


# ---------------------------------------------------------------------------
# specs, dispatch, determinism
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "spec",
    [
        gaussian_ma_process([0.3, 0.7, 0.1]),
        lognormal_ma_process([1.0, 0.5]),
        cauchy_ratio_process(),
        copula_onedep_process(2.5, "normal"),
        pearson2_process([0.0, 1.0], [[1.0, 0.2], [0.2, 2.0]], m=3),
        iid_uniform_process(4),
    ],
)
def test_spec_json_roundtrip(spec):
    back = ProcessSpec.from_json(spec.to_json())
    assert back == spec


def test_spec_from_json_unknown_family():
    with pytest.raises(ValueError, match="unknown process family"):
        ProcessSpec.from_json({"family": "white_noise", "params": {}})


def test_generate_dispatch_and_determinism():
    for spec in (
        ma2_normal_process(),
        lognormal_onedep_process(),
        cauchy_ratio_process(),
        copula_onedep_process(1.5, "pearson2"),
        pearson2_process([0.0], [[1.0]]),
        iid_uniform_process(2),
    ):
        a = generate(spec, 200, RngStream(80, 5))
        b = generate(spec, 200, RngStream(80, 5))
        c = generate(spec, 200, RngStream(80, 6))
        assert a.spec == spec and a.stream == RngStream(80, 5)
        assert np.array_equal(a.sample.points, b.sample.points)
        assert not np.array_equal(a.sample.points, c.sample.points)


@pytest.mark.parametrize("n", [0, -3, 2.5, True])
def test_generate_rejects_bad_length(n):
    with pytest.raises(ValueError):
        gen_iid_uniform(1, n, RngStream(81, 0))


def test_process_parameter_validation():
    with pytest.raises(ValueError):
        gaussian_ma_process([])
    with pytest.raises(ValueError):
        gaussian_ma_process([0.0, 0.0])
    with pytest.raises(ValueError):
        copula_onedep_process(-1.0)
    with pytest.raises(ValueError):
        copula_onedep_process(2.0, "triangular")
    with pytest.raises(ValueError):
        pearson2_process([0.0], [[1.0]], m=0)
    with pytest.raises(ValueError):
        pearson2_process([0.0], [[1.0]], m=5)  # cap is d + 3
    with pytest.raises(ValueError):
        pearson2_process([0.0], [[-1.0]])
    with pytest.raises(ValueError):
        iid_uniform_process(0)


def test_pearson2_constant_matches_gof_home():
    from epsentropy.gof import k_d

    assert pearson2_max_entropy_constant(3) == k_d(3)


def test_custom_copula_marginal_callable():
    g = gen_copula_onedep(lambda u: 2.0 * u, 1.0, 500, RngStream(82, 0))
    assert g.spec.params["marginal"] == "custom"
    assert g.spec.truth == ProcessTruth()
    assert np.all((g.sample.points >= 0) & (g.sample.points <= 2))
