from pydantic import BaseModel, Field, validator
from typing import List, Optional
from enum import Enum
import math

import numpy as np

from app.models.geometry import SensorArray


class SignalModel(str, Enum):
    SIMPLIFIED = "simplified"
    PRACTICAL = "practical"


class Scenario(BaseModel):
    """One snapshot-generation setup: geometry, sources, noise level and seed.

    ``snr_db = inf`` gives noiseless data. ``phases`` defaults to zeros and is
    ignored by the simplified model.
    """
    array: SensorArray
    doas: List[float] = Field(..., min_items=1)
    source_powers: Optional[List[float]] = None
    phases: Optional[List[float]] = None
    snr_db: float = 10.0
    snapshots: int = Field(200, ge=1)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    model: SignalModel = SignalModel.SIMPLIFIED

    @validator("doas")
    def doas_increasing_in_range(cls, v):
        if any(not -90.0 < d < 90.0 for d in v):
            raise ValueError("DOAs must lie strictly inside (-90, 90) degrees")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("DOAs must be strictly increasing")
        return v

    @validator("source_powers", always=True)
    def powers_per_source(cls, v, values):
        doas = values.get("doas") or []
        if v is None:
            return [1.0] * len(doas)
        if len(v) != len(doas):
            raise ValueError("source_powers needs one entry per DOA")
        if any(not p > 0 for p in v):
            raise ValueError("source powers must be positive")
        return v

    @validator("phases", always=True)
    def phases_per_source(cls, v, values):
        doas = values.get("doas") or []
        if v is None:
            return [0.0] * len(doas)
        if len(v) != len(doas):
            raise ValueError("phases needs one entry per DOA")
        if any(not math.isfinite(p) for p in v):
            raise ValueError("phases must be finite")
        return v

    @validator("snr_db")
    def snr_not_nan(cls, v):
        if math.isnan(v) or v == -math.inf:
            raise ValueError("snr_db must be a number or +inf")
        return v

    @property
    def num_sources(self) -> int:
        return len(self.doas)

    @property
    def noise_variance(self) -> float:
        """sigma_v^2 = mean source power * 10^(-SNR/10)."""
        if self.snr_db == math.inf:
            return 0.0
        return float(np.mean(self.source_powers)) * 10.0 ** (-self.snr_db / 10.0)

    def effective_phases(self) -> np.ndarray:
        if self.model == SignalModel.SIMPLIFIED:
            return np.zeros(self.num_sources)
        return np.asarray(self.phases, dtype=float)


class SnapshotBlock(BaseModel):
    """N x K complex array output, one column per snapshot."""
    data: np.ndarray

    @validator("data")
    def finite_matrix(cls, v):
        v = np.asarray(v, dtype=complex)
        if v.ndim != 2 or v.shape[1] < 1:
            raise ValueError("snapshot data must be an N x K matrix with K >= 1")
        if not np.all(np.isfinite(v)):
            raise ValueError("snapshot data contains non-finite entries")
        return v

    class Config:
        arbitrary_types_allowed = True

    @property
    def num_sensors(self) -> int:
        return self.data.shape[0]

    @property
    def num_snapshots(self) -> int:
        return self.data.shape[1]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            for row in self.data:
                fh.write(",".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row) + "\n")
