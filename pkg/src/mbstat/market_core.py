"""Market-based averages, volatilities, correlations, and joint moments.

The central fact this module implements: every trade-weighted correlation of
prices/returns is a closed form over frequency-based moments of trade values,
volumes, and past values.  All three correlation families share one bilinear
shape.  Writing ``W`` for the weight-bearing sequence of a leg (volumes for a
price leg, past values for a return leg) and ``g = mean(C)/mean(W)`` for its
market-based average (VWAP or value-weighted average return):

    corr = [cov(C1,C2) - g1*cov(W1,C2) - g2*cov(C1,W2) + g1*g2*cov(W1,W2)]
           / joint_moment(W1, W2)

Volatilities are the same-leg specialization of the same code path (no
separate formula is evaluated here; the specialized forms are used as
cross-checks in the test suite), so the specialization-chain identities hold
bit-exactly.

``cov`` throughout is the unnormalized covariance (joint moment minus product
of means).  A Pearson-style normalization is available only on the report
objects, clearly named, and never feeds back into any closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    ConsistencyError,
    DegenerateDenominator,
    LengthMismatch,
    NonPositiveInvestment,
)
from .freq_stats import cov, joint_moment, mean, moments
from .trade_series import ReturnView, Window

# Joint-moment denominators are strictly positive for valid trade data; this
# floor only catches pathological underflow before it turns into inf/nan.
DENOM_FLOOR = 1e-300

# Internal agreement required between two algebraically identical evaluations
# of the same joint moment (different arrangement, same compensated moments).
JOINT_MOMENT_REL_TOL = 1e-12

PRICE_FAMILY = "price_corr"
RETURN_FAMILY = "return_corr"
PRICE_RETURN_FAMILY = "price_return_corr"


@dataclass(frozen=True)
class MarketAverages:
    """VWAP (a) and value-weighted average return (h) per leg.

    Slots that do not apply to a report's family are 0.0: a price leg has no
    h, a return leg no a.
    """

    a1: float = 0.0
    a2: float = 0.0
    h1: float = 0.0
    h2: float = 0.0


@dataclass(frozen=True)
class CorrelationReport:
    """Market-based and frequency-based figures for one window pair.

    ``cov_wc`` is the covariance of leg 1's weight carrier against leg 2's
    values; ``cov_cw`` the mirror image; ``cov_ww`` the carrier-carrier
    covariance whose joint moment is the ``denominator``.
    """

    stat_family: str
    market_value: float
    frequency_value: float
    averages: MarketAverages
    freq_avg1: float
    freq_avg2: float
    denominator: float
    cov_cc: float
    cov_wc: float
    cov_cw: float
    cov_ww: float
    market_var1: float
    market_var2: float
    freq_var1: float
    freq_var2: float
    n: int
    alpha: int
    beta: int
    asset1: str
    asset2: str
    t_center: float

    @property
    def market_pearson(self) -> float:
        """Pearson-style normalization of the market-based covariance.

        This is a reporting convenience only; no closed form divides by
        standard deviations.  ``nan`` when either leg has zero variance.
        """
        prod = self.market_var1 * self.market_var2
        if prod <= 0.0:
            return math.nan
        return self.market_value / math.sqrt(prod)

    @property
    def frequency_pearson(self) -> float:
        """Pearson-style normalization of the frequency-based covariance."""
        prod = self.freq_var1 * self.freq_var2
        if prod <= 0.0:
            return math.nan
        return self.frequency_value / math.sqrt(prod)


@dataclass(frozen=True)
class _CorrParts:
    g1: float
    g2: float
    denominator: float
    cov_cc: float
    cov_wc: float
    cov_cw: float
    cov_ww: float
    market: float


def _carrier_corr(values1, carrier1, values2, carrier2) -> _CorrParts:
    g1 = mean(values1) / mean(carrier1)
    g2 = mean(values2) / mean(carrier2)
    denominator = joint_moment(carrier1, carrier2)
    if not denominator > DENOM_FLOOR:
        raise DegenerateDenominator(
            f"carrier joint moment {denominator!r} is too small to divide by"
        )
    cov_cc = cov(values1, values2)
    cov_wc = cov(carrier1, values2)
    cov_cw = cov(values1, carrier2)
    cov_ww = cov(carrier1, carrier2)
    market = (cov_cc - g1 * cov_wc - g2 * cov_cw + g1 * g2 * cov_ww) / denominator
    return _CorrParts(g1, g2, denominator, cov_cc, cov_wc, cov_cw, cov_ww, market)


def _self_market_var(values, carrier) -> float:
    return _carrier_corr(values, carrier, values, carrier).market


def _require_equal(n1: int, n2: int) -> None:
    if n1 != n2:
        raise LengthMismatch(f"window lengths differ: {n1} vs {n2}")


def vwap(window: Window) -> float:
    """Volume-weighted average price: mean(value) / mean(volume).

    Equals the ratio of total traded value to total traded volume; with
    constant volumes it reduces to the frequency mean price.
    """
    return mean(window.value) / mean(window.volume)


def portfolio_return(r, investments) -> float:
    """Investment-weighted return ``sum(r_i * X_i) / sum(X_i)``."""
    r = [float(v) for v in r]
    x = [float(v) for v in investments]
    if len(r) != len(x):
        raise LengthMismatch(f"returns and investments differ: {len(r)} vs {len(x)}")
    for v in x:
        if not v > 0.0:
            raise NonPositiveInvestment(f"investments must be > 0, got {v}")
    return math.fsum(ri * xi for ri, xi in zip(r, x)) / math.fsum(x)


def vawar(returns: ReturnView) -> float:
    """Value-weighted average return: returns weighted by their past values.

    Identical, term by term, to the portfolio return with the past values as
    the amounts invested; with constant past values it reduces to the
    frequency mean return.
    """
    return portfolio_return(returns.r, returns.c_past)


def mb_corr_prices(w1: Window, w2: Window) -> CorrelationReport:
    """Market-based correlation of the prices of two (possibly lagged) windows.

    The same series with ``w2 = lag_view(w1, beta)`` gives the price
    autocorrelation; ``w2 = w1`` gives the price volatility.  The
    frequency-based price covariance is reported alongside.
    """
    _require_equal(len(w1), len(w2))
    parts = _carrier_corr(w1.value, w1.volume, w2.value, w2.volume)
    return CorrelationReport(
        stat_family=PRICE_FAMILY,
        market_value=parts.market,
        frequency_value=cov(w1.price, w2.price),
        averages=MarketAverages(a1=parts.g1, a2=parts.g2),
        freq_avg1=mean(w1.price),
        freq_avg2=mean(w2.price),
        denominator=parts.denominator,
        cov_cc=parts.cov_cc,
        cov_wc=parts.cov_wc,
        cov_cw=parts.cov_cw,
        cov_ww=parts.cov_ww,
        market_var1=_self_market_var(w1.value, w1.volume),
        market_var2=_self_market_var(w2.value, w2.volume),
        freq_var1=moments(w1.price).variance,
        freq_var2=moments(w2.price).variance,
        n=len(w1),
        alpha=w1.lag,
        beta=w2.lag,
        asset1=w1.asset_id,
        asset2=w2.asset_id,
        t_center=w1.t_center,
    )


def mb_price_volatility(window: Window) -> float:
    """Market-based price volatility: the zero-lag same-asset correlation."""
    return mb_corr_prices(window, window).market_value


def mb_corr_returns(rv1: ReturnView, rv2: ReturnView) -> CorrelationReport:
    """Market-based correlation of the returns of two legs.

    Both legs are taken at the same tick times; the horizons are the legs'
    own ``alpha``.  Same-series input realizes the return autocorrelation,
    and identical views the return volatility.  The frequency-based return
    covariance is reported alongside.
    """
    _require_equal(len(rv1), len(rv2))
    parts = _carrier_corr(rv1.value, rv1.c_past, rv2.value, rv2.c_past)
    return CorrelationReport(
        stat_family=RETURN_FAMILY,
        market_value=parts.market,
        frequency_value=cov(rv1.r, rv2.r),
        averages=MarketAverages(h1=parts.g1, h2=parts.g2),
        freq_avg1=mean(rv1.r),
        freq_avg2=mean(rv2.r),
        denominator=parts.denominator,
        cov_cc=parts.cov_cc,
        cov_wc=parts.cov_wc,
        cov_cw=parts.cov_cw,
        cov_ww=parts.cov_ww,
        market_var1=_self_market_var(rv1.value, rv1.c_past),
        market_var2=_self_market_var(rv2.value, rv2.c_past),
        freq_var1=moments(rv1.r).variance,
        freq_var2=moments(rv2.r).variance,
        n=len(rv1),
        alpha=rv1.alpha,
        beta=rv2.alpha,
        asset1=rv1.asset_id,
        asset2=rv2.asset_id,
        t_center=rv1.t_center,
    )


def mb_return_volatility(returns: ReturnView) -> float:
    """Market-based return volatility: the equal-horizon same-asset case."""
    return mb_corr_returns(returns, returns).market_value


def mb_corr_price_return(w1: Window, rv2: ReturnView) -> CorrelationReport:
    """Market-based correlation between leg-1 prices and leg-2 returns."""
    _require_equal(len(w1), len(rv2))
    parts = _carrier_corr(w1.value, w1.volume, rv2.value, rv2.c_past)
    return CorrelationReport(
        stat_family=PRICE_RETURN_FAMILY,
        market_value=parts.market,
        frequency_value=cov(w1.price, rv2.r),
        averages=MarketAverages(a1=parts.g1, h2=parts.g2),
        freq_avg1=mean(w1.price),
        freq_avg2=mean(rv2.r),
        denominator=parts.denominator,
        cov_cc=parts.cov_cc,
        cov_wc=parts.cov_wc,
        cov_cw=parts.cov_cw,
        cov_ww=parts.cov_ww,
        market_var1=_self_market_var(w1.value, w1.volume),
        market_var2=_self_market_var(rv2.value, rv2.c_past),
        freq_var1=moments(w1.price).variance,
        freq_var2=moments(rv2.r).variance,
        n=len(w1),
        alpha=w1.lag,
        beta=rv2.alpha,
        asset1=w1.asset_id,
        asset2=rv2.asset_id,
        t_center=w1.t_center,
    )


def _joint_moment_both_ways(report: CorrelationReport, values1, values2) -> float:
    """Joint market moment as avg1*avg2 + corr, cross-checked against the
    expanded form assembled from the raw moments.  The two arrangements are
    algebraically identical; disagreement indicates a bug, not bad data."""
    avgs = report.averages
    g1 = avgs.a1 if report.stat_family == PRICE_FAMILY else avgs.h1
    g2 = avgs.a2 if report.stat_family == PRICE_FAMILY else avgs.h2
    combined = g1 * g2 + report.market_value
    cc = joint_moment(values1, values2)
    expanded = (
        cc
        - g1 * report.cov_wc
        - g2 * report.cov_cw
        + 2.0 * g1 * g2 * report.cov_ww
    ) / report.denominator
    scale = max(abs(combined), abs(expanded))
    if scale > 0.0 and abs(combined - expanded) > JOINT_MOMENT_REL_TOL * scale:
        raise ConsistencyError(
            f"joint moment evaluations disagree: {combined!r} vs {expanded!r}"
        )
    return combined


def mb_joint_price_moment(w1: Window, w2: Window) -> float:
    """Market-based second joint moment of the two legs' prices.

    Defined as ``a1*a2 + market correlation``; the expanded evaluation over
    the raw value/volume moments is asserted to agree before returning.
    """
    report = mb_corr_prices(w1, w2)
    return _joint_moment_both_ways(report, w1.value, w2.value)


def mb_joint_return_moment(rv1: ReturnView, rv2: ReturnView) -> float:
    """Market-based second joint moment of the two legs' returns."""
    report = mb_corr_returns(rv1, rv2)
    return _joint_moment_both_ways(report, rv1.value, rv2.value)
