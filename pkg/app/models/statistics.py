from pydantic import BaseModel, validator
from typing import List
from enum import Enum

import numpy as np


class SigmaMode(str, Enum):
    KNOWN = "known"
    ESTIMATED = "estimated"


class Block(int, Enum):
    """The four stacked pieces of r: vec(R_y), vec(R_y*), vec(Gamma_y), vec(Gamma_y*)."""
    COVARIANCE = 1
    COVARIANCE_CONJ = 2
    PSEUDO = 3
    PSEUDO_CONJ = 4


class SecondOrderStats(BaseModel):
    """Covariance R_y and pseudo-covariance Gamma_y of the array output.

    ``k_used`` is the snapshot count for sample statistics and 0 for exact
    expectations.
    """
    r_y: np.ndarray
    gamma_y: np.ndarray
    k_used: int = 0

    @validator("r_y")
    def hermitian(cls, v):
        v = np.asarray(v, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("r_y must be square")
        return (v + v.conj().T) / 2

    @validator("gamma_y")
    def complex_symmetric(cls, v, values):
        v = np.asarray(v, dtype=complex)
        r_y = values.get("r_y")
        if r_y is not None and v.shape != r_y.shape:
            raise ValueError("gamma_y must have the same shape as r_y")
        return (v + v.T) / 2

    class Config:
        arbitrary_types_allowed = True

    @property
    def num_sensors(self) -> int:
        return self.r_y.shape[0]


class TaggedVector(BaseModel):
    """r = [vec(R_y); vec(R_y*); vec(Gamma_y); vec(Gamma_y*)] with a lag and block per entry."""
    values: np.ndarray
    lags: np.ndarray
    blocks: np.ndarray
    stats: SecondOrderStats

    class Config:
        arbitrary_types_allowed = True

    def __len__(self) -> int:
        return self.values.shape[0]


class VirtualSignal(BaseModel):
    """Redundancy-averaged co-array data on the contiguous lags -L..L."""
    lags: List[int]
    values: np.ndarray
    sigma_estimate: float = 0.0

    @validator("values")
    def one_value_per_lag(cls, v, values):
        v = np.asarray(v, dtype=complex)
        lags = values.get("lags")
        if lags is not None:
            if v.shape != (len(lags),):
                raise ValueError("virtual signal needs exactly one value per lag")
            half = len(lags) // 2
            if lags != list(range(-half, half + 1)):
                raise ValueError("virtual lags must be the contiguous interval -L..L")
        return v

    class Config:
        arbitrary_types_allowed = True

    @property
    def half_length(self) -> int:
        return len(self.lags) // 2

    def value(self, lag: int) -> complex:
        return complex(self.values[lag + self.half_length])

    def csv_rows(self) -> List[List[str]]:
        return [[str(lag), f"{z.real:.17g}", f"{z.imag:.17g}"] for lag, z in zip(self.lags, self.values)]
