"""
Snapshot generation for real-valued Gaussian sources in circular complex
Gaussian noise, with or without per-source initial phases.
"""

from typing import Sequence, Tuple
from enum import IntEnum
import logging

import numpy as np

from app.core.exceptions import SteeringDomainError
from app.models.geometry import SensorArray
from app.models.scenario import Scenario, SnapshotBlock

logger = logging.getLogger(__name__)


class Stream(IntEnum):
    """Independent RNG sub-streams derived from one seed."""
    SOURCES = 0
    NOISE = 1
    PHASES = 2
    DOAS = 3


def substream(seed: int, stream: Stream, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(int(stream), *keys)))


def steering_vector(arr: SensorArray, theta_deg: float) -> np.ndarray:
    """Entry n is exp(-j*pi*p_n*sin(theta)) for integer position p_n."""
    if not -90.0 < theta_deg < 90.0:
        raise SteeringDomainError(f"angle {theta_deg} deg is outside (-90, 90)")
    pos = np.asarray(arr.positions, dtype=float)
    return np.exp(-1j * np.pi * pos * np.sin(np.deg2rad(theta_deg)))


def steering_matrix(arr: SensorArray, doas_deg: Sequence[float]) -> np.ndarray:
    return np.column_stack([steering_vector(arr, theta) for theta in doas_deg])


def phase_factors(sc: Scenario) -> np.ndarray:
    return np.exp(1j * sc.effective_phases())


def generate_snapshots(sc: Scenario) -> SnapshotBlock:
    """y(k) = A diag(e^{j phi}) s(k) + v(k); the phase factor is 1 for the simplified model."""
    a = steering_matrix(sc.array, sc.doas)
    powers = np.asarray(sc.source_powers, dtype=float)

    # drawn at unit scale so that the SNR only rescales the noise
    sources = np.sqrt(powers)[:, None] * substream(sc.seed, Stream.SOURCES).standard_normal(
        (sc.num_sources, sc.snapshots)
    )
    unit_noise = substream(sc.seed, Stream.NOISE).standard_normal((2, sc.array.size, sc.snapshots))
    noise = np.sqrt(sc.noise_variance / 2.0) * (unit_noise[0] + 1j * unit_noise[1])

    data = a @ (phase_factors(sc)[:, None] * sources) + noise
    logger.debug(
        f"Generated {sc.snapshots} snapshots ({sc.model.value}) for DOAs {sc.doas}, "
        f"sigma_v^2={sc.noise_variance:.3g}"
    )
    return SnapshotBlock(data=data)


def noncircularity(sc: Scenario) -> Tuple[np.ndarray, np.ndarray]:
    """Population (g, g_tilde): g_m = sigma_s^2, g_tilde_m = sigma_s^2 e^{j 2 phi_m}."""
    g = np.asarray(sc.source_powers, dtype=float).astype(complex)
    g_tilde = g * np.exp(2j * sc.effective_phases())
    return g, g_tilde


def draw_phases(rng: np.random.Generator, count: int, zero_or_pi: bool = False) -> np.ndarray:
    if zero_or_pi:
        return np.pi * rng.integers(0, 2, size=count)
    return rng.uniform(0.0, 2.0 * np.pi, size=count)
