"""
Numerical check of the SDCA span property.

The truncated co-array data [Phi1 g; Phi2 g~; Phi3 g~*] is tested for
membership in the column span of the stacked matrix [Phi1; Phi2; Phi3] via a
least-squares residual. The property holds exactly when g = g~ = g~* for every
source.
"""

from typing import List, Optional, Sequence
import logging

import numpy as np
from scipy import linalg

from app.core.config import settings
from app.core.exceptions import DegenerateGeometryError, LabError
from app.models.estimation import LemmaSweepRow, PhiBars, SpanTestReport
from app.models.geometry import CoarrayKind, DEFAULT_PRECEDENCE, LagSet, SensorArray
from app.services.coarray_geometry import partition_sdca
from app.services.signal_model import steering_matrix

logger = logging.getLogger(__name__)


def _representative_rows(product: np.ndarray, row_lags: np.ndarray, part: LagSet) -> np.ndarray:
    # every Khatri-Rao row with the same lag is identical, so the first one stands in
    wanted = np.asarray(part.lags, dtype=np.int64)
    first = {}
    for idx, lag in enumerate(row_lags.tolist()):
        first.setdefault(lag, idx)
    return product[[first[int(lag)] for lag in wanted], :]


def build_phi_bars(
    arr: SensorArray,
    doas: Sequence[float],
    phases: Optional[Sequence[float]] = None,
    precedence: Sequence[CoarrayKind] = DEFAULT_PRECEDENCE,
) -> PhiBars:
    """Pick one Khatri-Rao row per truncated lag from A*(.)A, A(.)A and A*(.)A*.

    With ``phases`` the steering matrix is A diag(e^{j phi}).
    """
    part = partition_sdca(arr, precedence)
    for name, lagset in (("d1bar", part.d1bar), ("d2bar", part.d2bar), ("d3bar", part.d3bar)):
        if len(lagset) == 0:
            raise DegenerateGeometryError(f"truncated co-array {name} is empty for positions {arr.positions}")

    a = steering_matrix(arr, doas)
    if phases is not None:
        a = a * np.exp(1j * np.asarray(phases, dtype=float))

    pos = np.asarray(arr.positions, dtype=np.int64)
    # khatri_rao(B, C) row i*N + j is B[i] * C[j]
    diff_lags = (pos[None, :] - pos[:, None]).ravel()
    sum_lags = (pos[:, None] + pos[None, :]).ravel()

    return PhiBars(
        phi1=_representative_rows(linalg.khatri_rao(a.conj(), a), diff_lags, part.d1bar),
        phi2=_representative_rows(linalg.khatri_rao(a, a), sum_lags, part.d2bar),
        phi3=_representative_rows(linalg.khatri_rao(a.conj(), a.conj()), -sum_lags, part.d3bar),
        lags1=part.d1bar.lags,
        lags2=part.d2bar.lags,
        lags3=part.d3bar.lags,
    )


def span_residual(
    phi_bars: PhiBars,
    g: Sequence[complex],
    g_tilde: Sequence[complex],
    tolerance: Optional[float] = None,
) -> SpanTestReport:
    """Relative least-squares residual of the block data against the stacked span."""
    tolerance = settings.lemma_tolerance if tolerance is None else tolerance
    g = np.asarray(g, dtype=complex)
    g_tilde = np.asarray(g_tilde, dtype=complex)
    m = phi_bars.num_sources
    if g.shape != (m,) or g_tilde.shape != (m,):
        raise LabError(f"g and g_tilde must both have {m} entries")

    v = np.concatenate([phi_bars.phi1 @ g, phi_bars.phi2 @ g_tilde, phi_bars.phi3 @ g_tilde.conj()])
    norm_v = linalg.norm(v)
    if norm_v == 0:
        raise LabError("co-array data vector is zero, span membership is undefined")

    b = phi_bars.stacked()
    coef, *_ = linalg.lstsq(b, v)
    residual = float(linalg.norm(v - b @ coef) / norm_v)
    return SpanTestReport(
        residual=residual,
        tolerance=tolerance,
        eta=complex(coef[0]) if m == 1 else None,
        holds=residual < tolerance,
    )


def lemma_condition(g: Sequence[complex], g_tilde: Sequence[complex], atol: float = 1e-12) -> bool:
    """Closed-form test of g_m = g~_m = g~_m* for all m."""
    g = np.asarray(g, dtype=complex)
    g_tilde = np.asarray(g_tilde, dtype=complex)
    return bool(np.allclose(g, g_tilde, rtol=0, atol=atol) and np.allclose(g_tilde, g_tilde.conj(), rtol=0, atol=atol))


def lemma1_sweep(
    arr: SensorArray,
    theta: float,
    phi_grid: Sequence[float],
    precedence: Sequence[CoarrayKind] = DEFAULT_PRECEDENCE,
    tolerance: Optional[float] = None,
) -> List[LemmaSweepRow]:
    """Single source with g = 1, g~ = e^{j 2 phi}: the residual vanishes only at phi = 0, pi."""
    phi_bars = build_phi_bars(arr, [theta], precedence=precedence)
    rows = []
    for phi in phi_grid:
        report = span_residual(phi_bars, [1.0], [np.exp(2j * phi)], tolerance)
        rows.append(LemmaSweepRow(phi_rad=float(phi), residual=report.residual, holds=report.holds))
    held = sum(row.holds for row in rows)
    logger.info(f"🔎 Span check at theta={theta} deg: property holds at {held}/{len(rows)} phase points")
    return rows


def phi_grid(points: int) -> np.ndarray:
    return np.linspace(0.0, 2.0 * np.pi, points, endpoint=False)
