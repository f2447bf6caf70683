from fastapi import APIRouter, HTTPException
import logging

from app.core.exceptions import LabError
from app.models.api import (
    ComplexValue,
    LemmaSweepRequest,
    LemmaSweepResponse,
    SpanRequest,
    SpanResponse,
)
from app.models.geometry import SensorArray
from app.services import sdca_property

router = APIRouter()
logger = logging.getLogger(__name__)


@router.post("/lemma/verify", response_model=LemmaSweepResponse)
def verify_lemma(payload: LemmaSweepRequest):
    """
    Single-source span residual over a grid of initial phases.
    """
    try:
        rows = sdca_property.lemma1_sweep(
            SensorArray(positions=payload.positions),
            payload.theta_deg,
            sdca_property.phi_grid(payload.phi_points),
            precedence=payload.precedence,
            tolerance=payload.tolerance,
        )
        return LemmaSweepResponse(rows=rows, holds_at=[row.phi_rad for row in rows if row.holds])
    except (LabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=f"Cannot run span check: {str(e)}")
    except Exception as e:
        logger.error(f"Span sweep failed: {str(e)}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"Failed to run span check: {str(e)}")


@router.post("/lemma/span", response_model=SpanResponse)
def span_test(payload: SpanRequest):
    """
    Span residual for explicit DOAs and (g, g_tilde).
    """
    try:
        phi_bars = sdca_property.build_phi_bars(
            SensorArray(positions=payload.positions), payload.doas_deg, payload.phases_rad
        )
        g = [z.to_complex() for z in payload.g]
        g_tilde = [z.to_complex() for z in payload.g_tilde]
        report = sdca_property.span_residual(phi_bars, g, g_tilde, payload.tolerance)
        return SpanResponse(
            residual=report.residual,
            holds=report.holds,
            tolerance=report.tolerance,
            eta=ComplexValue.of(report.eta) if report.eta is not None else None,
            lemma_condition=sdca_property.lemma_condition(g, g_tilde),
        )
    except (LabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=f"Cannot run span check: {str(e)}")
    except Exception as e:
        logger.error(f"Span test failed: {str(e)}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"Failed to run span check: {str(e)}")
