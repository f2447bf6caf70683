"""
Monte Carlo driver: per-trial randomisation, the SNR sweep over both signal
models, RMSE aggregation and CSV output.

Seeding:
  - DOAs and initial phases come from sub-streams keyed by (seed, trial), so
    both models and every SNR see the same draws (paired comparison).
  - Snapshot generation gets its own seed hashed from
    (seed, snr, model, trial).
"""

from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Iterable, List, Optional, TextIO, Tuple
import csv
import logging
import sys

import numpy as np

from app.core.config import settings
from app.core.exceptions import ConfigError, LabError, OutputError
from app.models.estimation import DoaEstimate, LemmaSweepRow
from app.models.experiment import ExperimentConfig, PhaseLaw, SweepResult, SweepRow, TrialOutcome
from app.models.geometry import SdcaPartition, SensorArray
from app.models.scenario import Scenario, SignalModel, SnapshotBlock
from app.models.statistics import VirtualSignal
from app.services.coarray_geometry import partition_sdca
from app.services.covariance_lab import assemble_virtual_signal, sample_stats, vectorize_stacked
from app.services.sdca_property import lemma1_sweep, phi_grid
from app.services.signal_model import Stream, draw_phases, generate_snapshots, substream
from app.services.ss_music import estimate_doas, rmse

logger = logging.getLogger(__name__)

CSV_HEADER = ["snr_db", "model", "rmse_deg", "trials", "seed"]

MODEL_CODES = {SignalModel.SIMPLIFIED: 0, SignalModel.PRACTICAL: 1}


def trial_seed(master_seed: int, snr_db: float, model: SignalModel, trial_index: int) -> int:
    """64-bit snapshot seed; the SNR enters through its IEEE-754 bit pattern."""
    snr_bits = int(np.float64(snr_db).view(np.uint64))
    entropy = [master_seed, snr_bits, MODEL_CODES[model], trial_index]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def draw_doas(cfg: ExperimentConfig, trial_index: int) -> List[float]:
    rng = substream(cfg.seed, Stream.DOAS, trial_index)
    lows, highs = np.array(cfg.doa_intervals_deg).T
    return rng.uniform(lows, highs).tolist()


def draw_trial_phases(cfg: ExperimentConfig, trial_index: int) -> List[float]:
    if cfg.phase_law == PhaseLaw.FIXED:
        return list(cfg.phases_rad)
    rng = substream(cfg.seed, Stream.PHASES, trial_index)
    return draw_phases(rng, cfg.num_sources, zero_or_pi=cfg.phase_law == PhaseLaw.ZERO_OR_PI).tolist()


@lru_cache(maxsize=16)
def _partition(arr: SensorArray) -> SdcaPartition:
    return partition_sdca(arr)


def trial_scenario(cfg: ExperimentConfig, snr_db: float, model: SignalModel, trial_index: int) -> Scenario:
    return Scenario(
        array=cfg.array,
        doas=draw_doas(cfg, trial_index),
        source_powers=[cfg.source_power] * cfg.num_sources,
        phases=draw_trial_phases(cfg, trial_index),
        snr_db=snr_db,
        snapshots=cfg.snapshots,
        seed=trial_seed(cfg.seed, snr_db, model, trial_index),
        model=model,
    )


def trial_virtual_signal(cfg: ExperimentConfig, snapshots: SnapshotBlock, scenario: Scenario) -> VirtualSignal:
    return assemble_virtual_signal(
        vectorize_stacked(sample_stats(snapshots), scenario.array),
        _partition(scenario.array),
        sigma_mode=cfg.sigma_mode,
        noise_variance=scenario.noise_variance,
        num_sources=scenario.num_sources,
    )


def run_trial(
    cfg: ExperimentConfig,
    snr_db: float,
    model: SignalModel,
    trial_index: int,
    keep_spectrum: bool = False,
) -> TrialOutcome:
    """One draw -> snapshots -> co-array data -> SS-MUSIC. Failures are recorded, not raised."""
    doas = draw_doas(cfg, trial_index)
    music_cfg = cfg.music_config()
    try:
        scenario = trial_scenario(cfg, snr_db, model, trial_index)
        virtual = trial_virtual_signal(cfg, generate_snapshots(scenario), scenario)
        estimate = estimate_doas(virtual, music_cfg, keep_spectrum=keep_spectrum)
    except (LabError, np.linalg.LinAlgError, ValueError) as e:
        logger.warning(f"⚠️ Trial {trial_index} ({model.value}, {snr_db} dB) failed: {e}")
        fallback = [music_cfg.grid_range_deg[0]] * cfg.num_sources
        return TrialOutcome(
            trial_index=trial_index,
            truth_deg=doas,
            estimate=DoaEstimate(angles_deg=fallback, degenerate=True),
            error=str(e),
        )
    return TrialOutcome(trial_index=trial_index, truth_deg=doas, estimate=estimate)


def run_trials(
    cfg: ExperimentConfig,
    snr_db: float,
    model: SignalModel,
    threads: Optional[int] = None,
) -> List[TrialOutcome]:
    threads = settings.threads if threads is None else threads
    if threads < 1:
        raise ConfigError(f"thread count must be at least 1, got {threads}")
    indices = range(cfg.trials)

    def one(index: int) -> TrialOutcome:
        return run_trial(cfg, snr_db, model, index)

    if threads <= 1:
        return [one(i) for i in indices]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map keeps trial order regardless of completion order
        return list(pool.map(one, indices))


def run_sweep(
    cfg: ExperimentConfig,
    output_path: Optional[str] = None,
    threads: Optional[int] = None,
) -> SweepResult:
    """RMSE per (SNR, model) over ``cfg.trials`` trials; writes the CSV unless ``output_path`` is ""."""
    logger.info(
        f"🚀 Sweep: positions={cfg.positions}, {len(cfg.snr_grid_db)} SNR points, "
        f"models={[m.value for m in cfg.models]}, {cfg.trials} trials, K={cfg.snapshots}"
    )
    rows = []
    for snr_db in cfg.snr_grid_db:
        for model in cfg.models:
            outcomes = run_trials(cfg, snr_db, model, threads)
            value = rmse([o.estimate for o in outcomes], [o.truth_deg for o in outcomes])
            row = SweepRow(
                snr_db=snr_db,
                model=model,
                rmse_deg=value,
                trials=cfg.trials,
                seed=cfg.seed,
                degenerate_trials=sum(o.estimate.degenerate for o in outcomes),
                failed_trials=sum(o.error is not None for o in outcomes),
            )
            logger.info(
                f"📊 SNR {snr_db:g} dB, {model.value}: RMSE {value:.4f} deg "
                f"({row.degenerate_trials} degenerate, {row.failed_trials} failed)"
            )
            rows.append(row)

    result = SweepResult(rows=rows)
    target = cfg.output_path if output_path is None else output_path
    if target:
        write_sweep_csv(result, target)
    return result


def _write_rows(stream: TextIO, header: List[str], rows: Iterable[List[str]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def write_csv(path: str, header: List[str], rows: Iterable[List[str]]) -> None:
    """Write to ``path``; ``-`` means stdout."""
    if path == "-":
        _write_rows(sys.stdout, header, rows)
        return
    try:
        with open(path, "w", newline="") as fh:
            _write_rows(fh, header, rows)
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e.strerror or e}") from e
    logger.info(f"✅ Wrote {path}")


def write_sweep_csv(result: SweepResult, path: str) -> None:
    write_csv(path, CSV_HEADER, (row.to_csv_row() for row in result.rows))


def verify_lemma(cfg: ExperimentConfig) -> List[LemmaSweepRow]:
    return lemma1_sweep(
        cfg.array,
        cfg.lemma_theta_deg,
        phi_grid(cfg.lemma_phi_points),
        precedence=cfg.lemma_precedence,
    )


def single_trial_spectrum(cfg: ExperimentConfig) -> TrialOutcome:
    return run_trial(cfg, cfg.spectrum_snr_db, cfg.spectrum_model, cfg.spectrum_trial, keep_spectrum=True)


def trial_artifacts(
    cfg: ExperimentConfig, snr_db: float, model: SignalModel, trial_index: int
) -> Tuple[Scenario, SnapshotBlock, VirtualSignal]:
    """Intermediate products of one trial, for dumping."""
    scenario = trial_scenario(cfg, snr_db, model, trial_index)
    snapshots = generate_snapshots(scenario)
    return scenario, snapshots, trial_virtual_signal(cfg, snapshots, scenario)
