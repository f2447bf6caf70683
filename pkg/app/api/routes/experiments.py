"""
Monte Carlo endpoints. Handlers are plain `def` so FastAPI runs them in its threadpool.
"""

from fastapi import APIRouter, HTTPException
import logging

from app.core.exceptions import LabError
from app.models.api import SpectrumResponse, SweepRequest, SweepResponse
from app.models.experiment import ExperimentConfig
from app.services import mc_harness

router = APIRouter()
logger = logging.getLogger(__name__)


@router.post("/experiments/spectrum", response_model=SpectrumResponse)
def single_trial_spectrum(payload: ExperimentConfig):
    try:
        outcome = mc_harness.single_trial_spectrum(payload)
    except LabError as e:
        raise HTTPException(status_code=400, detail=f"Cannot run trial: {str(e)}")
    if outcome.error is not None:
        raise HTTPException(status_code=422, detail=f"Trial failed: {outcome.error}")
    spectrum = outcome.estimate.spectrum
    return SpectrumResponse(
        truth_deg=outcome.truth_deg,
        estimate_deg=outcome.estimate.angles_deg,
        degenerate=outcome.estimate.degenerate,
        theta_deg=spectrum.theta_deg.tolist(),
        pseudospectrum=spectrum.values.tolist(),
    )


@router.post("/experiments/sweep", response_model=SweepResponse)
def run_sweep(payload: SweepRequest):
    """
    RMSE versus SNR; results are returned, not written to disk.
    """
    try:
        logger.info(f"Sweep requested: {payload.trials} trials x {len(payload.snr_grid_db)} SNR points")
        result = mc_harness.run_sweep(payload, output_path="")
        return SweepResponse(rows=result.rows)
    except LabError as e:
        raise HTTPException(status_code=400, detail=f"Cannot run sweep: {str(e)}")
    except Exception as e:
        logger.error(f"Sweep failed: {str(e)}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"Failed to run sweep: {str(e)}")
