from pydantic import BaseModel, Field
from typing import Dict, List, Optional, Tuple

from app.models.geometry import CoarrayKind, DEFAULT_PRECEDENCE, LagSet
from app.models.experiment import ExperimentConfig, SweepRow
from app.models.estimation import LemmaSweepRow


class ComplexValue(BaseModel):
    re: float
    im: float = 0.0

    @classmethod
    def of(cls, z: complex) -> "ComplexValue":
        return cls(re=float(z.real), im=float(z.imag))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class CoarrayRequest(BaseModel):
    positions: List[int] = Field(..., min_items=1)
    precedence: Tuple[CoarrayKind, CoarrayKind, CoarrayKind] = DEFAULT_PRECEDENCE


class CoarrayResponse(BaseModel):
    positions: List[int]
    difference: LagSet
    positive_sum: LagSet
    negative_sum: LagSet
    sdca: LagSet
    partition: Dict[str, LagSet]
    contiguous_segment: Tuple[int, int]


class LemmaSweepRequest(BaseModel):
    positions: List[int] = [0, 1, 2, 3, 10, 17]
    theta_deg: float = Field(10.0, gt=-90, lt=90)
    phi_points: int = Field(360, ge=1, le=100000)
    precedence: Tuple[CoarrayKind, CoarrayKind, CoarrayKind] = DEFAULT_PRECEDENCE
    tolerance: Optional[float] = Field(None, gt=0)


class LemmaSweepResponse(BaseModel):
    rows: List[LemmaSweepRow]
    holds_at: List[float]


class SpanRequest(BaseModel):
    positions: List[int] = [0, 1, 2, 3, 10, 17]
    doas_deg: List[float] = Field(..., min_items=1)
    g: List[ComplexValue]
    g_tilde: List[ComplexValue]
    phases_rad: Optional[List[float]] = None
    tolerance: Optional[float] = Field(None, gt=0)


class SpanResponse(BaseModel):
    residual: float
    holds: bool
    tolerance: float
    eta: Optional[ComplexValue] = None
    lemma_condition: bool


class SpectrumResponse(BaseModel):
    truth_deg: List[float]
    estimate_deg: List[float]
    degenerate: bool
    theta_deg: List[float]
    pseudospectrum: List[float]


class SweepRequest(ExperimentConfig):
    # HTTP sweeps are synchronous, keep them small
    trials: int = Field(20, ge=1, le=1000)


class SweepResponse(BaseModel):
    rows: List[SweepRow]
