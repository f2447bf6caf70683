from fastapi import APIRouter, HTTPException
import logging

from app.core.exceptions import LabError
from app.models.api import CoarrayRequest, CoarrayResponse
from app.models.geometry import CoarrayKind, SensorArray
from app.services import coarray_geometry

router = APIRouter()
logger = logging.getLogger(__name__)


@router.post("/coarray", response_model=CoarrayResponse)
def describe_coarray(payload: CoarrayRequest):
    """
    Co-arrays, SDCA partition and contiguous segment for a sensor geometry.
    """
    try:
        arr = SensorArray(positions=payload.positions)
        union = coarray_geometry.sdca(arr)
        partition = coarray_geometry.partition_sdca(arr, payload.precedence)
        return CoarrayResponse(
            positions=arr.positions,
            difference=coarray_geometry.coarray(arr, CoarrayKind.DIFFERENCE),
            positive_sum=coarray_geometry.coarray(arr, CoarrayKind.POSITIVE_SUM),
            negative_sum=coarray_geometry.coarray(arr, CoarrayKind.NEGATIVE_SUM),
            sdca=union,
            partition={"d1bar": partition.d1bar, "d2bar": partition.d2bar, "d3bar": partition.d3bar},
            contiguous_segment=coarray_geometry.contiguous_segment(union),
        )
    except (LabError, ValueError) as e:
        raise HTTPException(status_code=400, detail=f"Invalid geometry: {str(e)}")
    except Exception as e:
        logger.error(f"Co-array request failed for {payload.positions}: {str(e)}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"Failed to compute co-arrays: {str(e)}")
