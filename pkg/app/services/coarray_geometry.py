"""
Integer set algebra over sensor positions: difference and sum co-arrays, the
SDCA union, its disjoint truncation and the contiguous virtual ULA.
"""

from collections import Counter
from typing import Dict, Sequence, Tuple, Union
import logging

import numpy as np

from app.core.exceptions import GeometryError
from app.models.geometry import (
    CoarrayKind,
    DEFAULT_PRECEDENCE,
    LagSet,
    SdcaPartition,
    SensorArray,
)

logger = logging.getLogger(__name__)


def _pair_counts(values: np.ndarray) -> Dict[int, int]:
    lags, counts = np.unique(values.ravel(), return_counts=True)
    return {int(lag): int(c) for lag, c in zip(lags, counts)}


def difference_coarray(arr: SensorArray) -> LagSet:
    """{x_p - x_q} over all ordered pairs, with multiplicities."""
    pos = np.asarray(arr.positions, dtype=np.int64)
    return LagSet.from_counts(_pair_counts(pos[:, None] - pos[None, :]))


def sum_coarray(arr: SensorArray, sign: int = 1) -> LagSet:
    """{x_p + x_q} for sign=+1, its negation for sign=-1."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    pos = np.asarray(arr.positions, dtype=np.int64)
    return LagSet.from_counts(_pair_counts(sign * (pos[:, None] + pos[None, :])))


def coarray(arr: SensorArray, kind: CoarrayKind) -> LagSet:
    if kind == CoarrayKind.DIFFERENCE:
        return difference_coarray(arr)
    return sum_coarray(arr, 1 if kind == CoarrayKind.POSITIVE_SUM else -1)


def sdca(arr: SensorArray) -> LagSet:
    """Union of the three co-arrays; weight is the total count over all three."""
    total: Counter = Counter()
    for kind in CoarrayKind:
        total.update(coarray(arr, kind).weights)
    return LagSet.from_counts(dict(total))


def partition_sdca(
    arr: SensorArray,
    precedence: Sequence[CoarrayKind] = DEFAULT_PRECEDENCE,
) -> SdcaPartition:
    """Assign every SDCA lag to the first co-array in ``precedence`` that contains it.

    The default order is difference, positive sum, negative sum. Each part keeps
    the weights of the co-array it was cut from.
    """
    precedence = tuple(CoarrayKind(k) for k in precedence)
    if sorted(precedence) != sorted(CoarrayKind):
        raise ValueError("precedence must name each co-array exactly once")

    taken = set()
    parts = {}
    for kind in precedence:
        full = coarray(arr, kind)
        keep = {lag: full.weight(lag) for lag in full.lags if lag not in taken}
        taken.update(keep)
        parts[kind] = LagSet.from_counts(keep)

    return SdcaPartition(
        d1bar=parts[CoarrayKind.DIFFERENCE],
        d2bar=parts[CoarrayKind.POSITIVE_SUM],
        d3bar=parts[CoarrayKind.NEGATIVE_SUM],
        precedence=precedence,
    )


def contiguous_segment(lags: LagSet) -> Tuple[int, int]:
    """Largest interval [lo, hi] around 0 with every integer present."""
    if 0 not in lags:
        raise GeometryError("lag 0 is not in the lag set, no contiguous segment around it")
    lo = 0
    while lo - 1 in lags:
        lo -= 1
    hi = 0
    while hi + 1 in lags:
        hi += 1
    return lo, hi


def virtual_ula_half_length(source: Union[SensorArray, SdcaPartition]) -> int:
    """L such that the SDCA covers -L..L; the segment is symmetric because the SDCA is.

    A partition gives the same answer as its array, whatever the precedence.
    """
    if isinstance(source, SdcaPartition):
        union = LagSet.from_counts(dict.fromkeys(source.all_lags(), 1))
    else:
        union = sdca(source)
    lo, hi = contiguous_segment(union)
    half = min(-lo, hi)
    logger.debug(f"Virtual ULA: lags {-half}..{half} ({2 * half + 1} elements)")
    return half
