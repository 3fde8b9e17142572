"""Net-utility model of intermodal integration and its optimum.

Integration depth d buys benefit with diminishing returns,
b_max * (1 - exp(-alpha d)), and incurs fragility risk growing as a power
law, beta_risk * d^k. The optimum equates marginal benefit and marginal
risk; because the utility is strictly concave for d > 0 the stationary point
is the unique maximum. For k = 1 a positive optimum exists only when the
initial marginal benefit b_max * alpha exceeds the constant marginal risk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError, NumericalError

_RESIDUAL_TOL = 1e-10
_MAX_BRACKET = 2.0**60


@dataclass(frozen=True)
class UtilityParams:
    b_max: float
    alpha: float
    beta_risk: float
    k: float = 1.0

    def __post_init__(self) -> None:
        if self.b_max <= 0 or self.alpha <= 0 or self.beta_risk <= 0:
            raise InputError("b_max, alpha and beta_risk must be > 0")
        if self.k < 1:
            raise InputError("risk exponent k must be >= 1")


@dataclass(frozen=True)
class OptimalIntegration:
    d_star: float
    residual: float
    second_derivative: float
    boundary: bool

    @property
    def concave(self) -> bool:
        return self.second_derivative < 0


def utility(params: UtilityParams, d: float) -> tuple[float, float, float]:
    """(net utility, benefit, risk) at integration depth d >= 0."""
    if d < 0:
        raise InputError(f"integration depth must be >= 0, got {d}")
    b = params.b_max * (1.0 - math.exp(-params.alpha * d))
    r = params.beta_risk * d**params.k
    return b - r, b, r


def marginal_gap(params: UtilityParams, d: float) -> float:
    """Marginal benefit minus marginal risk (the utility derivative)."""
    benefit = params.b_max * params.alpha * math.exp(-params.alpha * d)
    risk = params.beta_risk * params.k * d ** (params.k - 1.0)
    return benefit - risk


def second_derivative(params: UtilityParams, d: float) -> float:
    value = -params.b_max * params.alpha**2 * math.exp(-params.alpha * d)
    if params.k != 1.0:
        value -= params.beta_risk * params.k * (params.k - 1.0) * d ** (params.k - 2.0)
    return value


def solve_optimal_d(params: UtilityParams) -> OptimalIntegration:
    """Find the integration depth where marginal benefit meets marginal risk.

    Brackets the sign change by doubling the upper bound, then drives the
    residual below 1e-10 with Newton steps safeguarded by bisection. When
    k = 1 and b_max * alpha <= beta_risk there is no interior optimum: the
    best strategy is no integration at all (d* = 0, boundary flag set).
    """
    if params.k == 1.0 and params.b_max * params.alpha <= params.beta_risk:
        return OptimalIntegration(
            d_star=0.0,
            residual=0.0,
            second_derivative=second_derivative(params, 0.0),
            boundary=True,
        )

    lo = 0.0
    hi = 1.0
    while marginal_gap(params, hi) > 0:
        hi *= 2.0
        if hi > _MAX_BRACKET:
            raise NumericalError("failed to bracket the optimality condition")

    d = 0.5 * (lo + hi)
    for _ in range(200):
        f = marginal_gap(params, d)
        if abs(f) < _RESIDUAL_TOL:
            break
        if f > 0:
            lo = d
        else:
            hi = d
        slope = second_derivative(params, d) if d > 0 else None
        step_ok = False
        if slope is not None and slope != 0:
            nxt = d - f / slope
            if lo < nxt < hi:
                d = nxt
                step_ok = True
        if not step_ok:
            d = 0.5 * (lo + hi)
    residual = abs(marginal_gap(params, d))
    if residual >= _RESIDUAL_TOL:
        raise NumericalError(f"optimality residual {residual:g} did not converge")
    return OptimalIntegration(
        d_star=d,
        residual=residual,
        second_derivative=second_derivative(params, d),
        boundary=False,
    )


def optimal_d_closed_form_k1(params: UtilityParams) -> float:
    """Closed-form optimum for k = 1, used as an independent oracle."""
    if params.k != 1.0:
        raise InputError("closed form applies to k = 1 only")
    if params.b_max * params.alpha <= params.beta_risk:
        return 0.0
    return math.log(params.b_max * params.alpha / params.beta_risk) / params.alpha


def sensitivity(params: UtilityParams, perturb: str, delta: float) -> int:
    """Sign of the optimum's response to a relative parameter change.

    delta is fractional (0.1 grows the parameter by 10%). Returns +1, 0
    or -1 for the direction d* moves.
    """
    if perturb not in ("b_max", "alpha", "beta_risk", "k"):
        raise InputError(f"unknown parameter {perturb!r}")
    base = solve_optimal_d(params).d_star
    fields = {
        "b_max": params.b_max,
        "alpha": params.alpha,
        "beta_risk": params.beta_risk,
        "k": params.k,
    }
    fields[perturb] = fields[perturb] * (1.0 + delta)
    moved = solve_optimal_d(UtilityParams(**fields)).d_star
    diff = moved - base
    if abs(diff) < 1e-12:
        return 0
    return 1 if diff > 0 else -1


def fit_utility_params(
    d_values: list[float],
    benefits: list[float],
    risks: list[float],
) -> UtilityParams:
    """Heuristic least-squares fit of the utility model to sweep data.

    Fits b_max, alpha to the benefit points and beta_risk, k to the risk
    points (k clamped to >= 1). Convenience only: the quality of the fit
    depends entirely on how the caller chose to scale d and define the
    benefit/risk proxies.
    """
    import numpy as np
    from scipy.optimize import curve_fit

    d = np.asarray(d_values, dtype=float)
    yb = np.asarray(benefits, dtype=float)
    yr = np.asarray(risks, dtype=float)
    if d.size < 3:
        raise InputError("fit needs at least 3 sweep points")
    if d.size != yb.size or d.size != yr.size:
        raise InputError("fit vectors must have equal length")

    def benefit_model(x, b_max, alpha):
        return b_max * (1.0 - np.exp(-alpha * x))

    def risk_model(x, beta_risk, k):
        return beta_risk * np.power(np.maximum(x, 1e-12), k)

    try:
        (b_max, alpha), _ = curve_fit(
            benefit_model, d, yb, p0=(max(yb.max(), 1e-3), 1.0),
            bounds=([1e-9, 1e-9], [np.inf, np.inf]), maxfev=20_000,
        )
        (beta_risk, k), _ = curve_fit(
            risk_model, d, yr, p0=(max(yr.max(), 1e-3), 1.5),
            bounds=([1e-9, 1.0], [np.inf, 8.0]), maxfev=20_000,
        )
    except RuntimeError as exc:
        raise NumericalError(f"utility fit did not converge: {exc}") from None
    return UtilityParams(b_max=float(b_max), alpha=float(alpha),
                         beta_risk=float(beta_risk), k=float(k))
