"""Stationary m-dependent test-bed processes with known marginal functionals.

Every generator consumes an RngStream and returns a GeneratedSeries whose
ProcessSpec echoes the construction and, where the marginal law is known in
closed form, carries the population values of the estimated functionals
(q2 = integral p^2, h2 = -log q2, q3 = integral p^3, h3 = -(1/2) log q3,
and the long-run density variance zeta when it is known exactly).

Families:

* gaussian_ma      X_t = sum_k theta_k Z_{t-k}, Gaussian innovations
* lognormal_ma     exp of a gaussian_ma series
* cauchy_ratio     X_t = Z_t / Z_{t+1}, standard Cauchy marginal, 1-dependent
* copula_onedep    Y_t = F^{-1}(C^{-1}_{2|1}(U_{t+1} | U_t)), Clayton copula
* pearson2         elliptically contoured Pearson type-II marginal in R^d,
                   m-dependence through overlapping innovation windows
* iid_uniform      independent Uniform[0,1]^d rows (regime probes)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import RngStream, SeriesSample, standard_normals, normal_quantile

__all__ = [
    "ProcessTruth",
    "ProcessSpec",
    "GeneratedSeries",
    "gen_gaussian_ma",
    "gen_lognormal_ma",
    "gen_cauchy_ratio",
    "gen_copula_onedep",
    "gen_pearson2",
    "gen_iid_uniform",
    "generate",
    "gaussian_ma_process",
    "lognormal_ma_process",
    "cauchy_ratio_process",
    "copula_onedep_process",
    "pearson2_process",
    "iid_uniform_process",
    "ma2_normal_process",
    "lognormal_onedep_process",
    "pearson2_max_entropy_constant",
    "pearson2_quantile",
    "COPULA_MARGINALS",
]


@dataclass(frozen=True)
class ProcessTruth:
    """Population values of the estimated functionals, where known."""

    q2: float | None = None
    h2: float | None = None
    q3: float | None = None
    h3: float | None = None
    zeta: float | None = None


@dataclass(frozen=True)
class ProcessSpec:
    """Declarative description of a generator: family name + parameters.

    m is the dependence range bound of the generated sequence (lags beyond m
    are independent).  truth carries known population functionals.
    """

    family: str
    params: dict
    m: int
    truth: ProcessTruth = field(default_factory=ProcessTruth)

    def to_json(self) -> dict:
        return {"family": self.family, "params": dict(self.params)}

    @staticmethod
    def from_json(doc: dict) -> "ProcessSpec":
        family = doc.get("family")
        params = dict(doc.get("params", {}))
        if family == "gaussian_ma":
            return gaussian_ma_process(params["theta"])
        if family == "lognormal_ma":
            return lognormal_ma_process(params["theta"])
        if family == "cauchy_ratio":
            return cauchy_ratio_process()
        if family == "copula_onedep":
            return copula_onedep_process(params["theta"], params.get("marginal", "uniform"))
        if family == "pearson2":
            return pearson2_process(params["mu"], params["sigma"], params.get("m"))
        if family == "iid_uniform":
            return iid_uniform_process(int(params.get("d", 1)))
        raise ValueError(f"unknown process family {family!r}")


@dataclass(frozen=True)
class GeneratedSeries:
    """A simulated sample plus the spec and stream that produced it."""

    sample: SeriesSample
    spec: ProcessSpec
    stream: RngStream


# ---------------------------------------------------------------------------
# spec constructors (closed-form truths attached)
# ---------------------------------------------------------------------------


def _ma_sigma(theta: np.ndarray) -> float:
    s = float(np.sqrt(np.sum(theta**2)))
    if s == 0.0:
        raise ValueError("moving-average weights must not be all zero")
    return s


def _check_theta(theta) -> np.ndarray:
    arr = np.asarray(theta, dtype=np.float64).ravel()
    if arr.size < 1 or not np.all(np.isfinite(arr)):
        raise ValueError("theta must be a non-empty finite weight vector")
    return arr


def gaussian_ma_process(theta) -> ProcessSpec:
    arr = _check_theta(theta)
    sig = _ma_sigma(arr)
    q2 = 1.0 / (2.0 * sig * math.sqrt(math.pi))
    q3 = 1.0 / (2.0 * math.pi * math.sqrt(3.0) * sig**2)
    truth = ProcessTruth(q2=q2, h2=-math.log(q2), q3=q3, h3=-0.5 * math.log(q3))
    return ProcessSpec(
        family="gaussian_ma", params={"theta": arr.tolist()}, m=arr.size - 1, truth=truth
    )


def lognormal_ma_process(theta) -> ProcessSpec:
    arr = _check_theta(theta)
    sig = _ma_sigma(arr)
    q2 = math.exp(sig**2 / 4.0) / (2.0 * sig * math.sqrt(math.pi))
    q3 = math.exp(2.0 * sig**2 / 3.0) / (2.0 * math.pi * math.sqrt(3.0) * sig**2)
    truth = ProcessTruth(q2=q2, h2=-math.log(q2), q3=q3, h3=-0.5 * math.log(q3))
    return ProcessSpec(
        family="lognormal_ma", params={"theta": arr.tolist()}, m=arr.size - 1, truth=truth
    )


def cauchy_ratio_process() -> ProcessSpec:
    q2 = 1.0 / (2.0 * math.pi)
    q3 = 3.0 / (8.0 * math.pi**2)
    truth = ProcessTruth(q2=q2, h2=-math.log(q2), q3=q3, h3=-0.5 * math.log(q3))
    return ProcessSpec(family="cauchy_ratio", params={}, m=1, truth=truth)


def ma2_normal_process() -> ProcessSpec:
    """MA(2) with equal weights 1/sqrt(3): standard normal marginal."""
    w = 1.0 / math.sqrt(3.0)
    return gaussian_ma_process([w, w, w])


def lognormal_onedep_process() -> ProcessSpec:
    """1-dependent log-normal series with LogNormal(0, 1) marginal."""
    return lognormal_ma_process([math.sqrt(3.0) / 2.0, -0.5])


def iid_uniform_process(d: int = 1) -> ProcessSpec:
    if d < 1:
        raise ValueError("dimension must be >= 1")
    truth = ProcessTruth(q2=1.0, h2=0.0, q3=1.0, h3=0.0, zeta=0.0)
    return ProcessSpec(family="iid_uniform", params={"d": int(d)}, m=0, truth=truth)


def pearson2_max_entropy_constant(d: int) -> float:
    # local import keeps gof the canonical home of k_d
    from .gof import k_d

    return k_d(d)


def pearson2_process(mu, sigma, m: int | None = None) -> ProcessSpec:
    mu_arr = np.asarray(mu, dtype=np.float64).ravel()
    d = mu_arr.size
    sig_arr = np.asarray(sigma, dtype=np.float64)
    if sig_arr.shape != (d, d):
        raise ValueError(f"sigma must be {d}x{d}, got {sig_arr.shape}")
    try:
        chol = np.linalg.cholesky(sig_arr)
    except np.linalg.LinAlgError:
        raise ValueError("sigma must be symmetric positive definite") from None
    if m is None:
        m = d + 3
    m = int(m)
    if not 1 <= m <= d + 3:
        raise ValueError(f"dependence parameter m must be in [1, {d + 3}], got {m}")
    det_root = float(np.prod(np.diagonal(chol)))
    q2 = 1.0 / (pearson2_max_entropy_constant(d) * det_root)
    truth = ProcessTruth(q2=q2, h2=-math.log(q2))
    return ProcessSpec(
        family="pearson2",
        params={"mu": mu_arr.tolist(), "sigma": sig_arr.tolist(), "m": m},
        m=m,
        truth=truth,
    )


def copula_onedep_process(theta: float, marginal: str = "uniform") -> ProcessSpec:
    theta = float(theta)
    if not 0.0 <= theta <= 100.0:
        raise ValueError(f"Clayton parameter must lie in [0, 100], got {theta}")
    if marginal not in COPULA_MARGINALS:
        raise ValueError(f"unknown marginal {marginal!r}; pick one of {sorted(COPULA_MARGINALS)}")
    truth = _COPULA_TRUTHS[marginal]
    return ProcessSpec(
        family="copula_onedep", params={"theta": theta, "marginal": marginal}, m=1, truth=truth
    )


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def gen_gaussian_ma(theta, n: int, rng: RngStream) -> GeneratedSeries:
    """Gaussian moving average X_t = sum_{k=0}^{m} theta_k Z_{t-k}.

    Marginal N(0, sum theta_k^2); the sequence is len(theta)-1 dependent.
    """
    spec = gaussian_ma_process(theta)
    return GeneratedSeries(sample=SeriesSample(_ma_path(spec, n, rng)), spec=spec, stream=rng)


def gen_lognormal_ma(theta, n: int, rng: RngStream) -> GeneratedSeries:
    """exp of a Gaussian moving average; log-normal marginal."""
    spec = lognormal_ma_process(theta)
    return GeneratedSeries(sample=SeriesSample(np.exp(_ma_path(spec, n, rng))), spec=spec, stream=rng)


def _require_n(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise ValueError(f"series length must be a positive integer, got {n}")
    return int(n)


def _ma_path(spec: ProcessSpec, n: int, rng: RngStream) -> np.ndarray:
    n = _require_n(n)
    theta = np.asarray(spec.params["theta"], dtype=np.float64)
    m = theta.size - 1
    z = standard_normals(rng.generator(), n + m)
    return np.convolve(z, theta, mode="valid")


def gen_cauchy_ratio(n: int, rng: RngStream) -> GeneratedSeries:
    """Ratio of consecutive Gaussians: standard Cauchy marginal, 1-dependent."""
    n = _require_n(n)
    spec = cauchy_ratio_process()
    z = standard_normals(rng.generator(), n + 1)
    den = z[1:]
    # an exact-zero innovation is a 2^-53 grid artifact; keep the path finite
    den = np.where(den == 0.0, 2.0**-30, den)
    return GeneratedSeries(sample=SeriesSample(z[:n] / den), spec=spec, stream=rng)


def _clayton_conditional_inverse(u: np.ndarray, v: np.ndarray, theta: float) -> np.ndarray:
    """Solve C_{2|1}(w | u) = v for w under the Clayton copula.

    w = ((v^{-theta/(1+theta)} - 1) u^{-theta} + 1)^{-1/theta}, evaluated in
    log space so extreme uniforms cannot overflow.
    """
    if theta == 0.0:
        return v.copy()
    log_a = np.log(np.expm1(-theta / (1.0 + theta) * np.log(v))) - theta * np.log(u)
    log_arg = np.where(log_a > 700.0, log_a, np.log1p(np.exp(np.minimum(log_a, 700.0))))
    return np.exp(-log_arg / theta)


COPULA_MARGINALS: dict[str, object] = {}


def _marginal_uniform(u: np.ndarray) -> np.ndarray:
    return u


def _marginal_normal(u: np.ndarray) -> np.ndarray:
    return normal_quantile(u)


def _marginal_lognormal(u: np.ndarray) -> np.ndarray:
    return np.exp(normal_quantile(u))


def pearson2_quantile(p, mu: float = 0.0, scale: float = 1.0):
    """Quantile of the one-dimensional Pearson type-II law by bisection.

    Standard form: density (3 / (4 sqrt(5))) (1 - x^2 / 5) on [-sqrt(5),
    sqrt(5)], unit variance; closed-form CDF
    F(x) = 1/2 + (3 / (4 sqrt(5))) (x - x^3 / 15).
    """
    arr = np.asarray(p, dtype=np.float64)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("quantile argument must lie strictly inside (0, 1)")
    root5 = math.sqrt(5.0)
    coef = 3.0 / (4.0 * root5)
    lo = np.full(arr.shape, -root5)
    hi = np.full(arr.shape, root5)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        cdf = 0.5 + coef * (mid - mid**3 / 15.0)
        below = cdf < arr
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out = mu + float(scale) * 0.5 * (lo + hi)
    if np.isscalar(p) or arr.ndim == 0:
        return float(out)
    return out


def _marginal_pearson2(u: np.ndarray) -> np.ndarray:
    return pearson2_quantile(u)


COPULA_MARGINALS.update(
    {
        "uniform": _marginal_uniform,
        "normal": _marginal_normal,
        "lognormal": _marginal_lognormal,
        "pearson2": _marginal_pearson2,
    }
)

_COPULA_TRUTHS = {
    "uniform": ProcessTruth(q2=1.0, h2=0.0, zeta=0.0),
    "normal": ProcessTruth(
        q2=1.0 / (2.0 * math.sqrt(math.pi)), h2=math.log(2.0 * math.sqrt(math.pi))
    ),
    "lognormal": ProcessTruth(
        q2=math.exp(0.25) / (2.0 * math.sqrt(math.pi)),
        h2=math.log(2.0 * math.sqrt(math.pi)) - 0.25,
    ),
    "pearson2": ProcessTruth(
        q2=3.0 * math.sqrt(5.0) / 25.0, h2=-math.log(3.0 * math.sqrt(5.0) / 25.0)
    ),
}


def gen_copula_onedep(marginal_quantile, theta: float, n: int, rng: RngStream) -> GeneratedSeries:
    """1-dependent sequence through a Clayton copula conditional inverse.

    Y_t = F^{-1}(C^{-1}_{2|1}(U_{t+1} | U_t)) with iid uniforms U: each Y_t
    is a function of (U_t, U_{t+1}) only, so the sequence is 1-dependent and
    the marginal is exactly F.  theta = 0 degenerates to iid draws from F.

    marginal_quantile may be a vectorized callable or one of the registered
    marginal names (uniform, normal, lognormal, pearson2).
    """
    n = _require_n(n)
    if isinstance(marginal_quantile, str):
        name = marginal_quantile
        spec = copula_onedep_process(theta, name)
        quantile = COPULA_MARGINALS[name]
    else:
        spec = ProcessSpec(
            family="copula_onedep",
            params={"theta": float(theta), "marginal": "custom"},
            m=1,
            truth=ProcessTruth(),
        )
        quantile = marginal_quantile
        if not 0.0 <= float(theta) <= 100.0:
            raise ValueError(f"Clayton parameter must lie in [0, 100], got {theta}")
    gen = rng.generator()
    u = gen.random(n + 1)
    u[u == 0.0] = 2.0**-54
    w = _clayton_conditional_inverse(u[:-1], u[1:], float(theta))
    return GeneratedSeries(sample=SeriesSample(quantile(w)), spec=spec, stream=rng)


def gen_pearson2(mu, sigma, m: int | None, n: int, rng: RngStream) -> GeneratedSeries:
    """m-dependent sequence with an elliptical Pearson type-II marginal.

    A window of d+4 iid Gaussians maps to one observation:
    X = mu + sqrt(d+4) L z_head / ||z_window||, with L the Cholesky factor of
    sigma and z_head the first d coordinates.  Consecutive windows advance by
    stride s = d+4-m, so neighbors share exactly m innovations; lags whose
    windows no longer overlap are independent, making the sequence
    floor((d+3)/s)-dependent (<= m, so m is a valid dependence bound).
    Every observation satisfies (x-mu)' sigma^{-1} (x-mu) <= d+4.
    """
    n = _require_n(n)
    spec = pearson2_process(mu, sigma, m)
    mu_arr = np.asarray(spec.params["mu"], dtype=np.float64)
    sig_arr = np.asarray(spec.params["sigma"], dtype=np.float64)
    d = mu_arr.size
    window = d + 4
    stride = window - spec.m
    chol = np.linalg.cholesky(sig_arr)
    z = standard_normals(rng.generator(), (n - 1) * stride + window)
    win = np.lib.stride_tricks.sliding_window_view(z, window)[::stride]
    norms = np.sqrt(np.einsum("ij,ij->i", win, win))
    norms = np.where(norms == 0.0, 1.0, norms)
    head = win[:, :d]
    pts = mu_arr + math.sqrt(window) * (head @ chol.T) / norms[:, None]
    return GeneratedSeries(sample=SeriesSample(pts), spec=spec, stream=rng)


def gen_iid_uniform(d: int, n: int, rng: RngStream) -> GeneratedSeries:
    n = _require_n(n)
    spec = iid_uniform_process(d)
    pts = rng.generator().random((n, d))
    return GeneratedSeries(sample=SeriesSample(pts), spec=spec, stream=rng)


def generate(spec: ProcessSpec, n: int, rng: RngStream) -> GeneratedSeries:
    """Generate from a declarative spec (dispatch on the family name)."""
    fam = spec.family
    if fam == "gaussian_ma":
        return gen_gaussian_ma(spec.params["theta"], n, rng)
    if fam == "lognormal_ma":
        return gen_lognormal_ma(spec.params["theta"], n, rng)
    if fam == "cauchy_ratio":
        return gen_cauchy_ratio(n, rng)
    if fam == "copula_onedep":
        return gen_copula_onedep(spec.params["marginal"], spec.params["theta"], n, rng)
    if fam == "pearson2":
        return gen_pearson2(spec.params["mu"], spec.params["sigma"], spec.params["m"], n, rng)
    if fam == "iid_uniform":
        return gen_iid_uniform(spec.params["d"], n, rng)
    raise ValueError(f"unknown process family {fam!r}")
