"""Incremental rolling-window evaluation of all statistic families.

The engine advances a fixed-size window over the common grid of two series
and maintains every needed window sum (sum x, sum x^2, sum x*y per tracked
pair) by add/drop deltas from a periodically recomputed anchor: within a
block the deltas are the cumulative sums of the entering and leaving ticks,
and each block starts from a fresh full recomputation, which bounds drift.
The anchor interval is 4096 strides, shrunk only when ``stride`` or a tiny
window would let the in-block span grow past what keeps the incremental
results within 1e-9 of full recomputation.

Closed forms are then assembled per position exactly as in
:mod:`mbstat.market_core`, vectorized over window positions.  Results stream
out chunk by chunk (one chunk per anchor block), so a million-position run
never holds more than one block of records in memory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConsistencyError,
    DegenerateDenominator,
    InvalidConfig,
    LagNotOnGrid,
    MissingHistory,
    NonUniformSpacing,
)
from .market_core import (
    DENOM_FLOOR,
    JOINT_MOMENT_REL_TOL,
    PRICE_FAMILY,
    PRICE_RETURN_FAMILY,
    RETURN_FAMILY,
)
from .trade_series import TradeSeries

PRICE_VOL_FAMILY = "price_vol"
RETURN_VOL_FAMILY = "return_vol"
JOINT_PRICE_FAMILY = "joint_price_moment"
JOINT_RETURN_FAMILY = "joint_return_moment"

#: Canonical emission order; reports iterate families in this order.
FAMILIES = (
    PRICE_FAMILY,
    RETURN_FAMILY,
    PRICE_RETURN_FAMILY,
    PRICE_VOL_FAMILY,
    RETURN_VOL_FAMILY,
    JOINT_PRICE_FAMILY,
    JOINT_RETURN_FAMILY,
)

_LEG1_RETURN_FAMILIES = {RETURN_FAMILY, RETURN_VOL_FAMILY, JOINT_RETURN_FAMILY}
_LEG2_RETURN_FAMILIES = {RETURN_FAMILY, PRICE_RETURN_FAMILY, JOINT_RETURN_FAMILY}
_LEG2_LAG_FAMILIES = {PRICE_FAMILY, JOINT_PRICE_FAMILY}

_ANCHOR_INTERVAL = 4096


@dataclass(frozen=True)
class RollingPlan:
    """Resolved geometry of one rolling run over a series pair.

    Window ``i`` starts at common-grid index ``i * stride``; its first tick
    sits at index ``off1 + i*stride`` of series 1 and ``off2 + i*stride`` of
    series 2.  ``length`` counts usable common-grid ticks (enough history for
    every requested lag exists at every index).
    """

    window: int
    stride: int
    alpha: int
    beta: int
    families: tuple[str, ...]
    off1: int
    off2: int
    length: int
    n_positions: int
    t_origin: int
    epsilon: int
    anchor: int

    def start_index1(self, position: int) -> int:
        return self.off1 + position * self.stride

    def start_index2(self, position: int) -> int:
        return self.off2 + position * self.stride

    def t_center(self, position: int) -> float:
        start = position * self.stride
        return self.t_origin + (start + (self.window - 1) / 2.0) * self.epsilon


@dataclass(frozen=True)
class RollingChunk:
    """One anchor block of results: parallel arrays per family."""

    first_position: int
    t_center: np.ndarray
    families: dict[str, dict[str, np.ndarray]]

    def __len__(self) -> int:
        return len(self.t_center)


def _anchor_interval(window: int, stride: int) -> int:
    # Keep the worst-case in-block cumsum drift, ~span^2 * eps / window
    # relative to a window sum of positive data, near 1e-10.
    span_limit = int(671.0 * math.sqrt(window))
    by_drift = (span_limit - window) // stride + 1
    return max(1, min(_ANCHOR_INTERVAL, by_drift))


def make_plan(
    s1: TradeSeries,
    s2: TradeSeries,
    *,
    window: int,
    stride: int = 1,
    alpha: int = 0,
    beta: int = 0,
    families: tuple[str, ...] = FAMILIES,
) -> RollingPlan:
    """Validate a rolling request against the pair and fix its geometry."""
    if window < 1:
        raise InvalidConfig(f"window must be >= 1, got {window}")
    if stride < 1:
        raise InvalidConfig(f"stride must be >= 1, got {stride}")
    families = tuple(dict.fromkeys(families))
    unknown = [f for f in families if f not in FAMILIES]
    if unknown:
        raise InvalidConfig(f"unknown stat families {unknown}; know {FAMILIES}")
    if not families:
        raise InvalidConfig("at least one stat family is required")
    fams = set(families)
    need_r1 = bool(fams & _LEG1_RETURN_FAMILIES)
    need_r2 = bool(fams & _LEG2_RETURN_FAMILIES)
    need_lag2 = bool(fams & _LEG2_LAG_FAMILIES)
    if alpha < 0 or beta < 0:
        raise LagNotOnGrid("lags must be >= 0 grid steps")
    if need_r1 and alpha < 1:
        raise InvalidConfig("alpha must be >= 1 when leg-1 return statistics are requested")
    if need_r2 and beta < 1:
        raise InvalidConfig("beta must be >= 1 when leg-2 return statistics are requested")

    if s1.epsilon != s2.epsilon:
        raise NonUniformSpacing(
            f"grid spacings differ: {s1.epsilon} vs {s2.epsilon}"
        )
    eps = s1.epsilon
    if (int(s1.t[0]) - int(s2.t[0])) % eps != 0:
        raise NonUniformSpacing("the two grids are offset by a fraction of a step")

    t_lo = max(int(s1.t[0]), int(s2.t[0]))
    t_hi = min(int(s1.t[-1]), int(s2.t[-1]))
    if t_lo > t_hi:
        raise MissingHistory("the two series do not overlap in time")
    off1 = (t_lo - int(s1.t[0])) // eps
    off2 = (t_lo - int(s2.t[0])) // eps
    length = (t_hi - t_lo) // eps + 1

    need1 = alpha if need_r1 else 0
    need2 = beta if (need_r2 or need_lag2) else 0
    skip = max(0, need1 - off1, need2 - off2)
    off1 += skip
    off2 += skip
    length -= skip
    t_origin = t_lo + skip * eps

    if length < window:
        raise MissingHistory(
            f"only {max(length, 0)} usable overlapping ticks after reserving "
            f"history for alpha={alpha}, beta={beta}; window needs {window}"
        )
    n_positions = (length - window) // stride + 1
    return RollingPlan(
        window=window,
        stride=stride,
        alpha=alpha,
        beta=beta,
        families=families,
        off1=off1,
        off2=off2,
        length=length,
        n_positions=n_positions,
        t_origin=t_origin,
        epsilon=eps,
        anchor=_anchor_interval(window, stride),
    )


def _base_arrays(s1: TradeSeries, s2: TradeSeries, plan: RollingPlan) -> dict[str, np.ndarray]:
    off1, off2, length = plan.off1, plan.off2, plan.length
    fams = set(plan.families)
    arrays = {
        "p1": s1.price[off1 : off1 + length],
        "C1": s1.value[off1 : off1 + length],
        "U1": s1.volume[off1 : off1 + length],
    }
    if fams & _LEG1_RETURN_FAMILIES:
        lagged = s1.price[off1 - plan.alpha : off1 - plan.alpha + length]
        arrays["r1"] = arrays["p1"] / lagged
        arrays["Co1"] = lagged * arrays["U1"]
    if fams & _LEG2_LAG_FAMILIES:
        lo = off2 - plan.beta
        arrays["p2b"] = s2.price[lo : lo + length]
        arrays["C2b"] = s2.value[lo : lo + length]
        arrays["U2b"] = s2.volume[lo : lo + length]
    if fams & _LEG2_RETURN_FAMILIES:
        arrays["p2"] = s2.price[off2 : off2 + length]
        arrays["C2"] = s2.value[off2 : off2 + length]
        arrays["U2"] = s2.volume[off2 : off2 + length]
        lagged = s2.price[off2 - plan.beta : off2 - plan.beta + length]
        arrays["r2"] = arrays["p2"] / lagged
        arrays["Co2"] = lagged * arrays["U2"]
    return arrays


# Window sums each family consumes, as (x, y) names; y=None is a plain sum.
_FAMILY_SUMS = {
    PRICE_FAMILY: {
        "c1": ("C1", None), "w1": ("U1", None), "c2": ("C2b", None), "w2": ("U2b", None),
        "cc": ("C1", "C2b"), "wc": ("U1", "C2b"), "cw": ("C1", "U2b"), "ww": ("U1", "U2b"),
        "x1": ("p1", None), "x2": ("p2b", None), "xx": ("p1", "p2b"),
    },
    RETURN_FAMILY: {
        "c1": ("C1", None), "w1": ("Co1", None), "c2": ("C2", None), "w2": ("Co2", None),
        "cc": ("C1", "C2"), "wc": ("Co1", "C2"), "cw": ("C1", "Co2"), "ww": ("Co1", "Co2"),
        "x1": ("r1", None), "x2": ("r2", None), "xx": ("r1", "r2"),
    },
    PRICE_RETURN_FAMILY: {
        "c1": ("C1", None), "w1": ("U1", None), "c2": ("C2", None), "w2": ("Co2", None),
        "cc": ("C1", "C2"), "wc": ("U1", "C2"), "cw": ("C1", "Co2"), "ww": ("U1", "Co2"),
        "x1": ("p1", None), "x2": ("r2", None), "xx": ("p1", "r2"),
    },
    PRICE_VOL_FAMILY: {
        "c1": ("C1", None), "w1": ("U1", None), "c2": ("C1", None), "w2": ("U1", None),
        "cc": ("C1", "C1"), "wc": ("U1", "C1"), "cw": ("C1", "U1"), "ww": ("U1", "U1"),
        "x1": ("p1", None), "x2": ("p1", None), "xx": ("p1", "p1"),
    },
    RETURN_VOL_FAMILY: {
        "c1": ("C1", None), "w1": ("Co1", None), "c2": ("C1", None), "w2": ("Co1", None),
        "cc": ("C1", "C1"), "wc": ("Co1", "C1"), "cw": ("C1", "Co1"), "ww": ("Co1", "Co1"),
        "x1": ("r1", None), "x2": ("r1", None), "xx": ("r1", "r1"),
    },
}
_FAMILY_SUMS[JOINT_PRICE_FAMILY] = _FAMILY_SUMS[PRICE_FAMILY]
_FAMILY_SUMS[JOINT_RETURN_FAMILY] = _FAMILY_SUMS[RETURN_FAMILY]

# Which market-average slots (a1, a2, h1, h2) each family's g1/g2 fill.
_FAMILY_AVG_SLOTS = {
    PRICE_FAMILY: ("a1", "a2"),
    RETURN_FAMILY: ("h1", "h2"),
    PRICE_RETURN_FAMILY: ("a1", "h2"),
    PRICE_VOL_FAMILY: ("a1", "a2"),
    RETURN_VOL_FAMILY: ("h1", "h2"),
    JOINT_PRICE_FAMILY: ("a1", "a2"),
    JOINT_RETURN_FAMILY: ("h1", "h2"),
}


def _chunk_window_sums(x, y, s_anchor: int, rel: np.ndarray, n: int) -> np.ndarray:
    """Window sums at starts ``s_anchor + rel``: full recompute at the anchor,
    cumulative add/drop deltas within the block."""
    hi = s_anchor + int(rel[-1]) + n
    seg = x[s_anchor:hi] if y is None else x[s_anchor:hi] * y[s_anchor:hi]
    out = np.empty(rel.size, dtype=np.float64)
    out[0] = np.sum(seg[:n])
    if rel.size > 1:
        c = np.cumsum(seg)
        r = rel[1:]
        out[1:] = out[0] + (c[r + n - 1] - c[n - 1]) - c[r - 1]
    return out


def _family_records(family: str, sums: dict[str, np.ndarray], n: int) -> dict[str, np.ndarray]:
    inv_n = 1.0 / n
    m_c1 = sums["c1"] * inv_n
    m_w1 = sums["w1"] * inv_n
    m_c2 = sums["c2"] * inv_n
    m_w2 = sums["w2"] * inv_n
    g1 = m_c1 / m_w1
    g2 = m_c2 / m_w2
    denom = sums["ww"] * inv_n
    if not np.all(denom > DENOM_FLOOR):
        raise DegenerateDenominator(f"{family}: carrier joint moment underflowed")
    cov_cc = sums["cc"] * inv_n - m_c1 * m_c2
    cov_wc = sums["wc"] * inv_n - m_w1 * m_c2
    cov_cw = sums["cw"] * inv_n - m_c1 * m_w2
    cov_ww = sums["ww"] * inv_n - m_w1 * m_w2
    market = (cov_cc - g1 * cov_wc - g2 * cov_cw + g1 * g2 * cov_ww) / denom
    freq = sums["xx"] * inv_n - (sums["x1"] * inv_n) * (sums["x2"] * inv_n)

    if family in (JOINT_PRICE_FAMILY, JOINT_RETURN_FAMILY):
        combined = g1 * g2 + market
        expanded = (
            sums["cc"] * inv_n - g1 * cov_wc - g2 * cov_cw + 2.0 * g1 * g2 * cov_ww
        ) / denom
        drift = np.max(np.abs(combined - expanded) / np.abs(combined))
        if drift > JOINT_MOMENT_REL_TOL:
            raise ConsistencyError(
                f"{family}: joint-moment evaluations disagree by {drift:.3e} relative"
            )
        market = combined
        freq = sums["xx"] * inv_n  # raw frequency joint moment

    zeros = np.zeros_like(market)
    avgs = {"a1": zeros, "a2": zeros, "h1": zeros, "h2": zeros}
    slot1, slot2 = _FAMILY_AVG_SLOTS[family]
    avgs[slot1] = g1
    avgs[slot2] = g2

    record = {
        "market_value": market,
        "frequency_value": freq,
        "a1": avgs["a1"],
        "a2": avgs["a2"],
        "h1": avgs["h1"],
        "h2": avgs["h2"],
        "denominator": denom,
        "cov_cc": cov_cc,
        "cov_uc": cov_wc,
        "cov_cu": cov_cw,
        "cov_ww": cov_ww,
    }
    for key in ("market_value", "frequency_value", "denominator"):
        if not np.all(np.isfinite(record[key])):
            raise ConsistencyError(f"{family}: non-finite {key} in rolling output")
    return record


def iter_rolling_stats(s1: TradeSeries, s2: TradeSeries, plan: RollingPlan):
    """Yield one :class:`RollingChunk` per anchor block, in position order."""
    arrays = _base_arrays(s1, s2, plan)
    n = plan.window
    half = (n - 1) / 2.0
    sum_specs: dict[tuple[str, str | None], None] = {}
    for family in plan.families:
        for spec in _FAMILY_SUMS[family].values():
            sum_specs[spec] = None

    for c0 in range(0, plan.n_positions, plan.anchor):
        c1 = min(c0 + plan.anchor, plan.n_positions)
        rel = np.arange(c1 - c0, dtype=np.int64) * plan.stride
        s_anchor = c0 * plan.stride
        sums_by_spec = {
            (xn, yn): _chunk_window_sums(
                arrays[xn], None if yn is None else arrays[yn], s_anchor, rel, n
            )
            for (xn, yn) in sum_specs
        }
        starts = s_anchor + rel
        t_center = plan.t_origin + (starts + half) * plan.epsilon
        families = {}
        for family in plan.families:
            sums = {k: sums_by_spec[spec] for k, spec in _FAMILY_SUMS[family].items()}
            families[family] = _family_records(family, sums, n)
        yield RollingChunk(first_position=c0, t_center=t_center, families=families)


def collect_rolling_stats(s1: TradeSeries, s2: TradeSeries, plan: RollingPlan) -> RollingChunk:
    """Run the whole plan and concatenate the chunks (small inputs only)."""
    chunks = list(iter_rolling_stats(s1, s2, plan))
    if len(chunks) == 1:
        return chunks[0]
    families = {
        family: {
            key: np.concatenate([c.families[family][key] for c in chunks])
            for key in chunks[0].families[family]
        }
        for family in plan.families
    }
    return RollingChunk(
        first_position=0,
        t_center=np.concatenate([c.t_center for c in chunks]),
        families=families,
    )
