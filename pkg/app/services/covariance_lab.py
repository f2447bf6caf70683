"""
Second-order statistics of the array output and their rearrangement into
co-array data.

Vectorization is column-major: entry (p, q) of an N x N matrix lands at index
p + q*N. Lag tags follow the steering exponent e^{-j pi x sin(theta)}, so that
the value at lag l of any block behaves like g * e^{-j pi l sin(theta)}:

    block 1  R_y(p, q)        -> x_p - x_q
    block 2  R_y*(p, q)       -> x_q - x_p
    block 3  Gamma_y(p, q)    -> x_p + x_q
    block 4  Gamma_y*(p, q)   -> -(x_p + x_q)
"""

from typing import Dict, Optional
import logging

import numpy as np
from scipy import linalg

from app.core.exceptions import EstimationError, GeometryError
from app.models.geometry import CoarrayKind, SdcaPartition, SensorArray
from app.models.scenario import Scenario, SnapshotBlock
from app.models.statistics import (
    Block,
    SecondOrderStats,
    SigmaMode,
    TaggedVector,
    VirtualSignal,
)
from app.services.coarray_geometry import virtual_ula_half_length
from app.services.signal_model import noncircularity, steering_matrix

logger = logging.getLogger(__name__)

# blocks whose entries may feed a lag owned by each partition part
PERMITTED_BLOCKS: Dict[CoarrayKind, tuple] = {
    CoarrayKind.DIFFERENCE: (Block.COVARIANCE, Block.COVARIANCE_CONJ),
    CoarrayKind.POSITIVE_SUM: (Block.PSEUDO,),
    CoarrayKind.NEGATIVE_SUM: (Block.PSEUDO_CONJ,),
}


def sample_stats(snap: SnapshotBlock) -> SecondOrderStats:
    y = snap.data
    k = snap.num_snapshots
    return SecondOrderStats(r_y=y @ y.conj().T / k, gamma_y=y @ y.T / k, k_used=k)


def population_stats(sc: Scenario) -> SecondOrderStats:
    """Exact R_y = A diag(g) A^H + sigma^2 I and Gamma_y = A diag(g_tilde) A^T."""
    a = steering_matrix(sc.array, sc.doas)
    g, g_tilde = noncircularity(sc)
    r_y = (a * g) @ a.conj().T + sc.noise_variance * np.eye(sc.array.size)
    gamma_y = (a * g_tilde) @ a.T
    return SecondOrderStats(r_y=r_y, gamma_y=gamma_y, k_used=0)


def lag_tags(arr: SensorArray) -> np.ndarray:
    """Lag tag of every entry of r, in r's order (4 N^2 entries)."""
    pos = np.asarray(arr.positions, dtype=np.int64)
    diff = (pos[:, None] - pos[None, :]).ravel(order="F")
    total = (pos[:, None] + pos[None, :]).ravel(order="F")
    return np.concatenate([diff, -diff, total, -total])


def vectorize_stacked(st: SecondOrderStats, arr: SensorArray) -> TaggedVector:
    n = arr.size
    if st.num_sensors != n:
        raise GeometryError(f"statistics are {st.num_sensors}x{st.num_sensors} but the array has {n} sensors")
    values = np.concatenate([
        st.r_y.ravel(order="F"),
        st.r_y.conj().ravel(order="F"),
        st.gamma_y.ravel(order="F"),
        st.gamma_y.conj().ravel(order="F"),
    ])
    blocks = np.repeat([b.value for b in Block], n * n)
    return TaggedVector(values=values, lags=lag_tags(arr), blocks=blocks, stats=st)


def estimate_noise_variance(st: SecondOrderStats, num_sources: int) -> float:
    """Mean of the N - M smallest eigenvalues of R_y."""
    n = st.num_sensors
    if num_sources >= n:
        raise EstimationError(
            f"cannot estimate the noise level with {num_sources} sources on {n} sensors"
        )
    eigenvalues = linalg.eigh(st.r_y, eigvals_only=True)
    return float(np.mean(eigenvalues[: n - num_sources]))


def resolve_noise_variance(
    r: TaggedVector,
    sigma_mode: SigmaMode,
    noise_variance: Optional[float],
    num_sources: Optional[int],
) -> float:
    if sigma_mode == SigmaMode.KNOWN:
        if noise_variance is None:
            raise EstimationError("sigma_mode=known needs the noise variance")
        return float(noise_variance)
    if num_sources is None:
        raise EstimationError("sigma_mode=estimated needs the number of sources")
    return estimate_noise_variance(r.stats, num_sources)


def assemble_virtual_signal(
    r: TaggedVector,
    part: SdcaPartition,
    sigma_mode: SigmaMode = SigmaMode.KNOWN,
    noise_variance: Optional[float] = 0.0,
    num_sources: Optional[int] = None,
) -> VirtualSignal:
    """Average every permitted entry of r per lag over the contiguous SDCA segment.

    A lag owned by d1bar takes block 1/2 entries, d2bar block 3, d3bar block 4.
    The noise power sits only on the lag-0 difference entries and is removed there.
    """
    half = virtual_ula_half_length(part)
    lags = np.arange(-half, half + 1)

    owner = [part.owner(int(lag)) for lag in lags]

    in_range = np.abs(r.lags) <= half
    permitted = np.zeros(len(r), dtype=bool)
    for kind, blocks in PERMITTED_BLOCKS.items():
        kind_lags = np.array([lag for lag, o in zip(lags, owner) if o == kind], dtype=np.int64)
        block_ok = np.isin(r.blocks, [b.value for b in blocks])
        permitted |= in_range & block_ok & np.isin(r.lags, kind_lags)

    index = r.lags[permitted] + half
    picked = r.values[permitted]
    counts = np.bincount(index, minlength=lags.size)
    if np.any(counts == 0):
        missing = lags[counts == 0].tolist()
        raise GeometryError(f"no co-array entry feeds virtual lags {missing}")
    sums = (
        np.bincount(index, weights=picked.real, minlength=lags.size)
        + 1j * np.bincount(index, weights=picked.imag, minlength=lags.size)
    )
    values = sums / counts

    sigma = resolve_noise_variance(r, sigma_mode, noise_variance, num_sources)
    if part.owner(0) == CoarrayKind.DIFFERENCE:
        values[half] -= sigma

    return VirtualSignal(lags=lags.tolist(), values=values, sigma_estimate=sigma)
