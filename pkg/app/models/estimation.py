from pydantic import BaseModel, Field, validator
from typing import List, Optional, Tuple

import numpy as np


class MusicConfig(BaseModel):
    grid_step_deg: float = Field(0.01, gt=0)
    grid_range_deg: Tuple[float, float] = (-90.0, 90.0)
    # None means L + 1 for a virtual ULA on -L..L
    subarray_len: Optional[int] = Field(None, ge=1)
    num_sources: int = Field(..., ge=1)

    @validator("grid_range_deg")
    def range_ordered(cls, v):
        lo, hi = v
        if not -90.0 <= lo < hi <= 90.0:
            raise ValueError("grid range must satisfy -90 <= lo < hi <= 90")
        return v

    def grid(self) -> np.ndarray:
        lo, hi = self.grid_range_deg
        count = int(round((hi - lo) / self.grid_step_deg)) + 1
        return np.round(lo + self.grid_step_deg * np.arange(count), 10)

    def resolve_subarray_len(self, half_length: int) -> int:
        return self.subarray_len if self.subarray_len is not None else half_length + 1


class MusicSpectrum(BaseModel):
    theta_deg: np.ndarray
    values: np.ndarray

    class Config:
        arbitrary_types_allowed = True

    def csv_rows(self) -> List[List[str]]:
        return [[f"{t:.10g}", f"{p:.17g}"] for t, p in zip(self.theta_deg, self.values)]


class DoaEstimate(BaseModel):
    angles_deg: List[float]
    spectrum: Optional[MusicSpectrum] = None
    # True when the padding rule had to fill in missing peaks
    degenerate: bool = False

    @validator("angles_deg")
    def sorted_angles(cls, v):
        return sorted(v)


class PhiBars(BaseModel):
    """Truncated Khatri-Rao blocks, one row per lag of the matching partition part."""
    phi1: np.ndarray
    phi2: np.ndarray
    phi3: np.ndarray
    lags1: List[int]
    lags2: List[int]
    lags3: List[int]

    class Config:
        arbitrary_types_allowed = True

    @property
    def num_sources(self) -> int:
        return self.phi1.shape[1]

    def stacked(self) -> np.ndarray:
        return np.vstack([self.phi1, self.phi2, self.phi3])


class SpanTestReport(BaseModel):
    residual: float = Field(..., ge=0)
    tolerance: float = Field(..., gt=0)
    # best single-source scalar; only set when M = 1
    eta: Optional[complex] = None
    holds: bool

    @validator("holds")
    def holds_matches_residual(cls, v, values):
        residual = values.get("residual")
        tolerance = values.get("tolerance")
        if residual is not None and tolerance is not None and v != (residual < tolerance):
            raise ValueError("holds must equal residual < tolerance")
        return v

    class Config:
        arbitrary_types_allowed = True


class LemmaSweepRow(BaseModel):
    phi_rad: float
    residual: float
    holds: bool

    def to_csv_row(self) -> List[str]:
        return [f"{self.phi_rad:.12g}", f"{self.residual:.6e}", str(self.holds).lower()]
