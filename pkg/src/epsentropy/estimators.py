"""Entropy and integral-functional estimators built on epsilon-close counts.

Central quantities, all computed from exact pair/triple counts:

* qn_raw     proportion of eps-close pairs among the C(n,2) index pairs
* q2_hat     qn_raw / ball_volume(d, eps); estimates the quadratic integral
             functional q2 = integral of the squared marginal density
* h2_hat     -log(max(q2_hat, 1/n)); quadratic Renyi entropy estimate
* u3_hat[h]  lagged cubic-functional estimates from coincidence triples at
             radius eps0, h = 0..r
* h3_hat     -(1/2) log(max(u3_hat[0], 1/n))
* zeta_hat   plug-in long-run variance of the local density along the series
* w_hat      scaler for the sqrt(n) central limit regime
* u_hat      scaler for the small-eps (n eps^{d/2}) regime

The clamp floor is fixed at 1/n everywhere a logarithm or a variance needs
protection; clamps keep estimates usable on degenerate samples without
touching the raw counts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import SeriesSample, ball_volume, unit_ball_volume
from .paircount import _adjacency_masks, _uh_count_from_masks, close_pairs, count_close_pairs

__all__ = [
    "EstimateConfig",
    "EstimateReport",
    "ResidualKind",
    "estimate_q2",
    "estimate_h2",
    "estimate_u3",
    "estimate_h3",
    "estimate_zeta",
    "estimate_w",
    "estimate_u",
    "estimate_report",
    "residual",
    "residual_from_report",
    "suggest_eps",
    "triple_normalizer",
]


@dataclass(frozen=True)
class EstimateConfig:
    """Estimation parameters: pair radius eps, triple radius eps0, lag bound r.

    eps0 defaults to eps when omitted.  r is the user's upper bound for the
    dependence range of the series; the variance plug-in sums lags 1..r.
    """

    eps: float
    eps0: float | None = None
    r: int = 0

    def __post_init__(self) -> None:
        if not (float(self.eps) > 0.0 and math.isfinite(self.eps)):
            raise ValueError(f"eps must be positive and finite, got {self.eps}")
        if self.eps0 is not None and not (float(self.eps0) > 0.0 and math.isfinite(self.eps0)):
            raise ValueError(f"eps0 must be positive and finite, got {self.eps0}")
        if not isinstance(self.r, (int, np.integer)) or isinstance(self.r, bool) or self.r < 0:
            raise ValueError(f"r must be a nonnegative integer, got {self.r}")

    @property
    def resolved_eps0(self) -> float:
        return float(self.eps if self.eps0 is None else self.eps0)


@dataclass(frozen=True)
class EstimateReport:
    """Full set of point estimates for one sample under one config."""

    n: int
    d: int
    eps: float
    eps0: float
    r: int
    n_pairs_close: int
    min_distance: float
    qn_raw: float
    q2_hat: float
    h2_hat: float
    u3_hat: tuple[float, ...]
    h3_hat: float
    zeta_hat: float
    w_hat: float
    u_hat: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "eps": self.eps,
            "eps0": self.eps0,
            "r": self.r,
            "n_pairs_close": self.n_pairs_close,
            "min_distance": self.min_distance,
            "qn_raw": self.qn_raw,
            "q2_hat": self.q2_hat,
            "h2_hat": self.h2_hat,
            "u3_hat": list(self.u3_hat),
            "h3_hat": self.h3_hat,
            "zeta_hat": self.zeta_hat,
            "w_hat": self.w_hat,
            "u_hat": self.u_hat,
        }


class ResidualKind(str, enum.Enum):
    """Pivotal residual variants; all are asymptotically standard normal."""

    Q_SQRTN = "q_sqrtn"
    H_SQRTN = "h_sqrtn"
    Q_NEPS = "q_neps"
    H_NEPS = "h_neps"


def triple_normalizer(n: int, h: int) -> int:
    """Number of admissible (i, j, k) triples at lag h.

    (n-h-1)(n-2)(n-3) for h >= 1; the lag-0 index set is larger because only
    one anchor index is excluded: (n-1)(n-1)(n-2).
    """
    if h == 0:
        return (n - 1) * (n - 1) * (n - 2)
    return (n - h - 1) * (n - 2) * (n - 3)


def estimate_q2(sample: SeriesSample, eps: float) -> tuple[float, float]:
    """(qn_raw, q2_hat): close-pair proportion and its ball-volume rescaling."""
    res = count_close_pairs(sample, eps)
    qn = res.n_pairs_close / (res.n * (res.n - 1) / 2)
    return qn, qn / ball_volume(sample.d, eps)


def estimate_h2(sample: SeriesSample, eps: float) -> float:
    """Quadratic Renyi entropy estimate -log(max(q2_hat, 1/n))."""
    _, q2 = estimate_q2(sample, eps)
    return -math.log(max(q2, 1.0 / sample.n))


def estimate_u3(sample: SeriesSample, h: int, eps0: float) -> float:
    """Lagged cubic-functional estimate at lag h and radius eps0.

    Normalized triple count; estimates E[p(X_1) p(X_{1+h})] for the marginal
    density p.  Saturates at ball_volume(d, eps0)^{-2} when every indicator
    fires.
    """
    from .paircount import count_uh_triples

    count = count_uh_triples(sample, h, eps0)
    norm = triple_normalizer(sample.n, h)
    return count / (norm * ball_volume(sample.d, eps0) ** 2)


def estimate_h3(sample: SeriesSample, eps0: float) -> float:
    """Cubic-route entropy estimate -(1/2) log(max(u3_hat[0], 1/n))."""
    u0 = estimate_u3(sample, 0, eps0)
    return -0.5 * math.log(max(u0, 1.0 / sample.n))


def _u3_all(sample: SeriesSample, eps0: float, r: int) -> tuple[float, ...]:
    if sample.n < r + 4:
        raise ValueError(f"need n >= r + 4 for lags up to r (n={sample.n}, r={r})")
    i_arr, j_arr = close_pairs(sample, eps0)
    masks = _adjacency_masks(sample.n, i_arr, j_arr)
    b2 = ball_volume(sample.d, eps0) ** 2
    return tuple(
        _uh_count_from_masks(masks, sample.n, h) / (triple_normalizer(sample.n, h) * b2)
        for h in range(r + 1)
    )


def _zeta_from(q2_hat: float, u3: tuple[float, ...]) -> float:
    q_sq = q2_hat * q2_hat
    z = u3[0] - q_sq
    for uh in u3[1:]:
        z += 2.0 * (uh - q_sq)
    return z


def estimate_zeta(sample: SeriesSample, config: EstimateConfig) -> float:
    """Plug-in long-run variance of the marginal density along the series.

    (u3[0] - q2_hat^2) + 2 sum_{h=1}^{r} (u3[h] - q2_hat^2), deliberately not
    clamped: small negative values are informative (they flag a weak signal
    or an r far above the true dependence range).
    """
    _, q2 = estimate_q2(sample, config.eps)
    u3 = _u3_all(sample, config.resolved_eps0, config.r)
    return _zeta_from(q2, u3)


def estimate_w(sample: SeriesSample, config: EstimateConfig) -> float:
    """Scaler for the sqrt(n) regime: sqrt(2 q2_hat / (n b_eps) + 4 max(zeta, 1/n))."""
    _, q2 = estimate_q2(sample, config.eps)
    u3 = _u3_all(sample, config.resolved_eps0, config.r)
    z = _zeta_from(q2, u3)
    n = sample.n
    return math.sqrt(2.0 * q2 / (n * ball_volume(sample.d, config.eps)) + 4.0 * max(z, 1.0 / n))


def estimate_u(sample: SeriesSample, eps: float) -> float:
    """Scaler for the small-eps regime: sqrt(2 max(q2_hat, 1/n) / b_1(d))."""
    _, q2 = estimate_q2(sample, eps)
    return math.sqrt(2.0 * max(q2, 1.0 / sample.n) / unit_ball_volume(sample.d))


def estimate_report(sample: SeriesSample, config: EstimateConfig) -> EstimateReport:
    """All estimates in one pass; pair structures at eps0 are reused per lag."""
    n = sample.n
    if n < config.r + 4:
        raise ValueError(f"need n >= r + 4 (n={n}, r={config.r})")
    eps = float(config.eps)
    eps0 = config.resolved_eps0

    pair_res = count_close_pairs(sample, eps)
    qn = pair_res.n_pairs_close / (n * (n - 1) / 2)
    b_eps = ball_volume(sample.d, eps)
    q2 = qn / b_eps
    h2 = -math.log(max(q2, 1.0 / n))

    u3 = _u3_all(sample, eps0, config.r)
    h3 = -0.5 * math.log(max(u3[0], 1.0 / n))
    z = _zeta_from(q2, u3)
    w = math.sqrt(2.0 * q2 / (n * b_eps) + 4.0 * max(z, 1.0 / n))
    u = math.sqrt(2.0 * max(q2, 1.0 / n) / unit_ball_volume(sample.d))

    return EstimateReport(
        n=n,
        d=sample.d,
        eps=eps,
        eps0=eps0,
        r=config.r,
        n_pairs_close=pair_res.n_pairs_close,
        min_distance=pair_res.min_distance,
        qn_raw=qn,
        q2_hat=q2,
        h2_hat=h2,
        u3_hat=u3,
        h3_hat=h3,
        zeta_hat=z,
        w_hat=w,
        u_hat=u,
    )


def residual_from_report(report: EstimateReport, truth: float, kind: ResidualKind) -> float:
    """Pivotal residual from an existing report.

    truth is the population q2 for the Q kinds and the population h2 for the
    H kinds.  Under the matching limit regime the residual is asymptotically
    standard normal.
    """
    kind = ResidualKind(kind)
    truth = float(truth)
    n = report.n
    if kind in (ResidualKind.Q_SQRTN, ResidualKind.H_SQRTN):
        scale = report.w_hat
    else:
        scale = report.u_hat
    if not scale > 0.0:
        raise ValueError(f"degenerate scaler {scale}; residual undefined")
    root = math.sqrt(n) if kind in (ResidualKind.Q_SQRTN, ResidualKind.H_SQRTN) else n * report.eps ** (report.d / 2.0)
    if kind in (ResidualKind.Q_SQRTN, ResidualKind.Q_NEPS):
        return root * (report.q2_hat - truth) / scale
    return root * report.q2_hat * (report.h2_hat - truth) / scale


def residual(sample: SeriesSample, config: EstimateConfig, truth: float, kind: ResidualKind) -> float:
    return residual_from_report(estimate_report(sample, config), truth, kind)


def suggest_eps(sample: SeriesSample, alpha: float) -> float:
    """Heuristic radius c_hat * n^{-2/(4 alpha + d)} for asserted smoothness alpha.

    c_hat is the root-mean-square per-coordinate standard deviation.  Opt-in
    convenience only; estimators never pick a radius silently.
    """
    alpha = float(alpha)
    if not (0.0 < alpha <= 4.0) or not math.isfinite(alpha):
        raise ValueError(f"smoothness alpha must lie in (0, 4], got {alpha}")
    if sample.n < 2:
        raise ValueError("heuristic radius needs at least two observations")
    c_hat = float(np.sqrt(np.mean(np.var(sample.points, axis=0, ddof=1))))
    if c_hat == 0.0:
        raise ValueError("sample is constant; heuristic radius undefined")
    return c_hat * sample.n ** (-2.0 / (4.0 * alpha + sample.d))
