from pydantic import BaseModel, Field, validator
from typing import List, Optional, Tuple
from enum import Enum

from app.core.config import settings
from app.models.geometry import CoarrayKind, DEFAULT_PRECEDENCE, SensorArray
from app.models.estimation import DoaEstimate, MusicConfig
from app.models.scenario import SignalModel
from app.models.statistics import SigmaMode


class PhaseLaw(str, Enum):
    UNIFORM = "uniform"
    ZERO_OR_PI = "zero_or_pi"
    FIXED = "fixed"


class ExperimentConfig(BaseModel):
    """Everything a sweep, lemma check, co-array dump or spectrum dump needs.

    Defaults reproduce the six-sensor, two-source SNR sweep at desk scale.
    """
    positions: List[int] = [0, 1, 2, 3, 10, 17]
    doa_intervals_deg: List[Tuple[float, float]] = [(-20.0, -10.0), (20.0, 30.0)]
    snr_grid_db: List[float] = Field([-10.0, -8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0, 10.0], min_items=1)
    snapshots: int = Field(200, ge=1)
    trials: int = Field(settings.default_trials, ge=1)
    seed: int = Field(20180101, ge=0, lt=2 ** 64)
    source_power: float = Field(1.0, gt=0)
    models: List[SignalModel] = [SignalModel.SIMPLIFIED, SignalModel.PRACTICAL]
    phase_law: PhaseLaw = PhaseLaw.UNIFORM
    phases_rad: Optional[List[float]] = None
    sigma_mode: SigmaMode = SigmaMode.KNOWN
    grid_step_deg: float = Field(0.01, gt=0)
    grid_range_deg: Tuple[float, float] = (-90.0, 90.0)
    subarray_len: Optional[int] = Field(None, ge=1)
    output_path: str = "rmse_vs_snr.csv"

    lemma_theta_deg: float = Field(10.0, gt=-90, lt=90)
    lemma_phi_points: int = Field(360, ge=1)
    lemma_precedence: Tuple[CoarrayKind, CoarrayKind, CoarrayKind] = DEFAULT_PRECEDENCE

    spectrum_snr_db: float = 10.0
    spectrum_model: SignalModel = SignalModel.PRACTICAL
    spectrum_trial: int = Field(0, ge=0)

    @validator("positions")
    def positions_valid(cls, v):
        return SensorArray(positions=v).positions

    @validator("doa_intervals_deg")
    def intervals_disjoint(cls, v):
        if not v:
            raise ValueError("at least one DOA interval is required")
        for lo, hi in v:
            if not -90.0 < lo <= hi < 90.0:
                raise ValueError(f"DOA interval [{lo}, {hi}] must satisfy -90 < lo <= hi < 90")
        ordered = sorted(v)
        if any(nxt[0] <= cur[1] for cur, nxt in zip(ordered, ordered[1:])):
            raise ValueError("DOA intervals must be pairwise disjoint")
        return ordered

    @validator("models")
    def models_present(cls, v):
        if not v:
            raise ValueError("at least one signal model is required")
        return list(dict.fromkeys(v))

    @validator("phases_rad", always=True)
    def fixed_phases_given(cls, v, values):
        if values.get("phase_law") == PhaseLaw.FIXED:
            intervals = values.get("doa_intervals_deg") or []
            if v is None or len(v) != len(intervals):
                raise ValueError("phase_law = fixed needs one phases_rad entry per source")
        return v

    @validator("lemma_precedence")
    def precedence_is_permutation(cls, v):
        if len(set(v)) != 3:
            raise ValueError("lemma_precedence must name each co-array exactly once")
        return v

    @property
    def array(self) -> SensorArray:
        return SensorArray(positions=self.positions)

    @property
    def num_sources(self) -> int:
        return len(self.doa_intervals_deg)

    def music_config(self) -> MusicConfig:
        return MusicConfig(
            grid_step_deg=self.grid_step_deg,
            grid_range_deg=self.grid_range_deg,
            subarray_len=self.subarray_len,
            num_sources=self.num_sources,
        )


class TrialOutcome(BaseModel):
    trial_index: int
    truth_deg: List[float]
    estimate: DoaEstimate
    # set when the pipeline raised; the estimate is then the padded fallback
    error: Optional[str] = None


class SweepRow(BaseModel):
    snr_db: float
    model: SignalModel
    rmse_deg: float = Field(..., ge=0)
    trials: int
    seed: int
    degenerate_trials: int = 0
    failed_trials: int = 0

    def to_csv_row(self) -> List[str]:
        return [f"{self.snr_db:g}", self.model.value, f"{self.rmse_deg:.6f}", str(self.trials), str(self.seed)]


class SweepResult(BaseModel):
    rows: List[SweepRow] = []

    def rmse(self, snr_db: float, model: SignalModel) -> float:
        for row in self.rows:
            if row.snr_db == snr_db and row.model == model:
                return row.rmse_deg
        raise KeyError((snr_db, model))
