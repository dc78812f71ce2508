"""Byte-stable JSON and CSV emission of rolling-window records.

One record per window position per statistic family, with a fixed field
order.  Numbers are written with up to 17 significant digits, which makes
every double round-trip exactly; emission is handrolled so the output is
deterministic byte for byte for fixed inputs and flags.
"""

from __future__ import annotations

from typing import IO, Iterable

from .errors import ConsistencyError
from .rolling import RollingChunk, RollingPlan

SCHEMA_VERSION = 1

RECORD_FIELDS = (
    "t_center",
    "N",
    "alpha",
    "beta",
    "stat_family",
    "market_value",
    "frequency_value",
    "a1",
    "a2",
    "h1",
    "h2",
    "denominator",
    "cov_CC",
    "cov_UC",
    "cov_CU",
    "cov_UU_or_CoCo_or_UCo",
)

# record key -> column of the per-family chunk arrays
_ARRAY_FIELDS = (
    ("market_value", "market_value"),
    ("frequency_value", "frequency_value"),
    ("a1", "a1"),
    ("a2", "a2"),
    ("h1", "h1"),
    ("h2", "h2"),
    ("denominator", "denominator"),
    ("cov_CC", "cov_cc"),
    ("cov_UC", "cov_uc"),
    ("cov_CU", "cov_cu"),
    ("cov_UU_or_CoCo_or_UCo", "cov_ww"),
)


def _fmt(x: float) -> str:
    value = float(x)
    out = format(value, ".17g")
    if "inf" in out or "nan" in out:
        raise ConsistencyError(f"refusing to serialize non-finite value {value!r}")
    return out


def iter_records(plan: RollingPlan, chunks: Iterable[RollingChunk]):
    """Flatten chunks into per-record value tuples, ordered by window position
    then by the plan's family order."""
    for chunk in chunks:
        columns = {
            family: [chunk.families[family][src] for _, src in _ARRAY_FIELDS]
            for family in plan.families
        }
        for i in range(len(chunk)):
            t_center = float(chunk.t_center[i])
            for family in plan.families:
                yield (
                    t_center,
                    plan.window,
                    plan.alpha,
                    plan.beta,
                    family,
                    *(float(col[i]) for col in columns[family]),
                )


def write_json(out: IO[str], plan: RollingPlan, chunks: Iterable[RollingChunk]) -> None:
    out.write('{\n"schema_version": %d,\n"records": [\n' % SCHEMA_VERSION)
    first = True
    for rec in iter_records(plan, chunks):
        if not first:
            out.write(",\n")
        first = False
        out.write(
            '{"t_center": %s, "N": %d, "alpha": %d, "beta": %d, "stat_family": "%s", '
            '"market_value": %s, "frequency_value": %s, "a1": %s, "a2": %s, '
            '"h1": %s, "h2": %s, "denominator": %s, "cov_CC": %s, "cov_UC": %s, '
            '"cov_CU": %s, "cov_UU_or_CoCo_or_UCo": %s}'
            % (
                _fmt(rec[0]),
                rec[1],
                rec[2],
                rec[3],
                rec[4],
                *(_fmt(v) for v in rec[5:]),
            )
        )
    out.write("\n]\n}\n")


def write_csv(out: IO[str], plan: RollingPlan, chunks: Iterable[RollingChunk]) -> None:
    out.write(",".join(RECORD_FIELDS) + "\n")
    for rec in iter_records(plan, chunks):
        out.write(
            "%s,%d,%d,%d,%s,%s\n"
            % (
                _fmt(rec[0]),
                rec[1],
                rec[2],
                rec[3],
                rec[4],
                ",".join(_fmt(v) for v in rec[5:]),
            )
        )
