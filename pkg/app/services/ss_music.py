"""
Spatial-smoothing MUSIC on the virtual ULA.
"""

from functools import lru_cache
from typing import List, Sequence, Tuple
import logging

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import linalg, signal

from app.core.exceptions import EstimationError
from app.models.estimation import DoaEstimate, MusicConfig, MusicSpectrum
from app.models.statistics import VirtualSignal

logger = logging.getLogger(__name__)


def spatial_smooth(vs: VirtualSignal, subarray_len: int) -> np.ndarray:
    """Average z_i z_i^H over every length-``subarray_len`` window of the virtual signal."""
    available = len(vs.lags)
    if subarray_len < 1 or subarray_len > available:
        raise EstimationError(
            f"subarray length {subarray_len} does not fit a virtual ULA of {available} lags"
        )
    windows = sliding_window_view(vs.values, subarray_len)
    # rows of `windows` are the subvectors z_i
    cov = windows.T @ windows.conj() / windows.shape[0]
    return (cov + cov.conj().T) / 2


@lru_cache(maxsize=8)
def _grid_steering(subarray_len: int, grid_key: Tuple[float, float, float]) -> Tuple[np.ndarray, np.ndarray]:
    lo, hi, step = grid_key
    grid = MusicConfig(grid_step_deg=step, grid_range_deg=(lo, hi), num_sources=1).grid()
    n = np.arange(subarray_len)[:, None]
    return grid, np.exp(-1j * np.pi * n * np.sin(np.deg2rad(grid))[None, :])


def music_spectrum(cov: np.ndarray, cfg: MusicConfig) -> MusicSpectrum:
    """1 / ||E_n^H a(theta)||^2 on the configured grid, E_n spanning the smallest eigenvalues."""
    size = cov.shape[0]
    if cfg.num_sources >= size:
        raise EstimationError(f"{cfg.num_sources} sources need a subarray longer than {size}")
    _, eigenvectors = linalg.eigh(cov)
    noise_subspace = eigenvectors[:, : size - cfg.num_sources]

    lo, hi = cfg.grid_range_deg
    grid, steering = _grid_steering(size, (lo, hi, cfg.grid_step_deg))
    projection = noise_subspace.conj().T @ steering
    denom = np.maximum(np.sum(np.abs(projection) ** 2, axis=0), np.finfo(float).tiny)
    return MusicSpectrum(theta_deg=grid, values=1.0 / denom)


def pick_peaks(spectrum: MusicSpectrum, num_sources: int) -> DoaEstimate:
    """The ``num_sources`` highest local maxima; missing ones are filled with the global maximum."""
    peaks, _ = signal.find_peaks(spectrum.values)
    ranked = peaks[np.argsort(spectrum.values[peaks], kind="stable")[::-1]][:num_sources]
    degenerate = len(ranked) < num_sources
    if degenerate:
        fill = int(np.argmax(spectrum.values))
        ranked = np.concatenate([ranked, np.full(num_sources - len(ranked), fill)])
        logger.warning(f"⚠️ Only {len(peaks)} local maxima for {num_sources} sources, padding with {spectrum.theta_deg[fill]:.2f} deg")
    angles = [float(spectrum.theta_deg[i]) for i in ranked]
    return DoaEstimate(angles_deg=angles, spectrum=spectrum, degenerate=degenerate)


def estimate_doas(vs: VirtualSignal, cfg: MusicConfig, keep_spectrum: bool = False) -> DoaEstimate:
    subarray_len = cfg.resolve_subarray_len(vs.half_length)
    cov = spatial_smooth(vs, subarray_len)
    estimate = pick_peaks(music_spectrum(cov, cfg), cfg.num_sources)
    if not keep_spectrum:
        estimate = estimate.copy(update={"spectrum": None})
    return estimate


def rmse(estimates: Sequence[DoaEstimate], truths: Sequence[Sequence[float]]) -> float:
    """Root mean square error over trials and sources, pairing by sort order."""
    if len(estimates) != len(truths):
        raise EstimationError(f"{len(estimates)} estimates but {len(truths)} ground truths")
    if not estimates:
        raise EstimationError("rmse needs at least one trial")
    squared: List[float] = []
    for est, truth in zip(estimates, truths):
        if len(est.angles_deg) != len(truth):
            raise EstimationError(
                f"trial has {len(est.angles_deg)} estimates for {len(truth)} sources"
            )
        diff = np.sort(est.angles_deg) - np.sort(truth)
        squared.extend((diff ** 2).tolist())
    return float(np.sqrt(np.mean(squared)))
