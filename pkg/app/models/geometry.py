from pydantic import BaseModel, Field, validator
from typing import Dict, Iterator, List, Tuple
from enum import Enum


class CoarrayKind(str, Enum):
    DIFFERENCE = "difference"
    POSITIVE_SUM = "positive_sum"
    NEGATIVE_SUM = "negative_sum"


# D(1) before D(2) before D(3)
DEFAULT_PRECEDENCE: Tuple[CoarrayKind, ...] = (
    CoarrayKind.DIFFERENCE,
    CoarrayKind.POSITIVE_SUM,
    CoarrayKind.NEGATIVE_SUM,
)


class SensorArray(BaseModel):
    """Linear array with integer sensor positions in units of half a wavelength.

    Positions must be strictly increasing; they are shifted so that the first
    sensor sits at 0.
    """
    positions: List[int] = Field(..., min_items=1)

    @validator("positions")
    def positions_strictly_increasing(cls, v):
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("sensor positions must be strictly increasing with no duplicates")
        return [p - v[0] for p in v]

    class Config:
        allow_mutation = False

    @property
    def size(self) -> int:
        return len(self.positions)

    def __hash__(self):
        return hash(tuple(self.positions))


class LagSet(BaseModel):
    """Sorted integer lags with the number of ordered sensor pairs behind each."""
    lags: List[int] = []
    weights: Dict[int, int] = {}

    @validator("lags")
    def lags_sorted_unique(cls, v):
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("lags must be sorted ascending without duplicates")
        return v

    @validator("weights")
    def weights_match_lags(cls, v, values):
        lags = values.get("lags", [])
        if set(v) != set(lags):
            raise ValueError("weights must have exactly one entry per lag")
        if any(w < 1 for w in v.values()):
            raise ValueError("every lag weight must be at least 1")
        return v

    class Config:
        allow_mutation = False

    @classmethod
    def from_counts(cls, counts: Dict[int, int]) -> "LagSet":
        lags = sorted(lag for lag, w in counts.items() if w > 0)
        return cls(lags=lags, weights={lag: int(counts[lag]) for lag in lags})

    def __contains__(self, lag: int) -> bool:
        return lag in self.weights

    def __len__(self) -> int:
        return len(self.lags)

    def __iter__(self) -> Iterator[int]:
        return iter(self.lags)

    def weight(self, lag: int) -> int:
        return self.weights.get(lag, 0)

    def total_weight(self) -> int:
        return sum(self.weights.values())

    def csv_rows(self) -> List[List[str]]:
        return [[str(lag), str(self.weights[lag])] for lag in self.lags]


class SdcaPartition(BaseModel):
    """Disjoint split of the SDCA into difference, positive-sum and negative-sum parts."""
    d1bar: LagSet
    d2bar: LagSet
    d3bar: LagSet
    precedence: Tuple[CoarrayKind, ...] = DEFAULT_PRECEDENCE

    class Config:
        allow_mutation = False

    def part(self, kind: CoarrayKind) -> LagSet:
        return {
            CoarrayKind.DIFFERENCE: self.d1bar,
            CoarrayKind.POSITIVE_SUM: self.d2bar,
            CoarrayKind.NEGATIVE_SUM: self.d3bar,
        }[kind]

    def owner(self, lag: int) -> CoarrayKind:
        for kind in CoarrayKind:
            if lag in self.part(kind):
                return kind
        raise KeyError(lag)

    def all_lags(self) -> List[int]:
        return sorted(set(self.d1bar.lags) | set(self.d2bar.lags) | set(self.d3bar.lags))
