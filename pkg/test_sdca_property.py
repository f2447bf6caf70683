from itertools import permutations

import numpy as np
import pytest
from scipy import linalg

from app.core.exceptions import DegenerateGeometryError, LabError
from app.models.geometry import CoarrayKind, DEFAULT_PRECEDENCE, SensorArray
from app.services.coarray_geometry import partition_sdca
from app.services.sdca_property import (
    build_phi_bars,
    lemma1_sweep,
    lemma_condition,
    phi_grid,
    span_residual,
)
from app.services.signal_model import steering_matrix
from conftest import random_array, random_doas


def closed_form_residual(phi):
    # six-sensor geometry: 23 difference lags, 11 on each sum side
    return np.sqrt(1.0 - ((23.0 + 22.0 * np.cos(2.0 * phi)) / 45.0) ** 2)


class TestPhiBars:
    def test_shapes(self, sparse_array):
        bars = build_phi_bars(sparse_array, [-15.0, 25.0])
        assert bars.phi1.shape == (23, 2)
        assert bars.phi2.shape == (11, 2)
        assert bars.phi3.shape == (11, 2)
        assert bars.stacked().shape == (45, 2)
        assert bars.num_sources == 2
        assert bars.lags2 == [4, 5, 6, 11, 12, 13, 18, 19, 20, 27, 34]

    def test_rows_follow_lags(self, sparse_array):
        doas = [-15.0, 25.0]
        bars = build_phi_bars(sparse_array, doas)
        sines = np.sin(np.deg2rad(doas))
        for phi, lags in ((bars.phi1, bars.lags1), (bars.phi2, bars.lags2), (bars.phi3, bars.lags3)):
            expected = np.exp(-1j * np.pi * np.outer(lags, sines))
            assert np.allclose(phi, expected, atol=1e-12)

    def test_broadside_is_all_ones(self, sparse_array):
        bars = build_phi_bars(sparse_array, [0.0])
        assert np.allclose(bars.stacked(), 1.0)

    def test_phases_scale_sum_blocks(self, sparse_array):
        plain = build_phi_bars(sparse_array, [10.0, 40.0])
        phased = build_phi_bars(sparse_array, [10.0, 40.0], phases=[0.3, 1.1])
        factor = np.exp(2j * np.array([0.3, 1.1]))
        assert np.allclose(phased.phi1, plain.phi1)
        assert np.allclose(phased.phi2, plain.phi2 * factor)
        assert np.allclose(phased.phi3, plain.phi3 * factor.conj())

    def test_single_sensor_is_degenerate(self):
        with pytest.raises(DegenerateGeometryError):
            build_phi_bars(SensorArray(positions=[0]), [10.0])


class TestSpanResidual:
    def test_real_source_lies_in_span(self, sparse_array):
        report = span_residual(build_phi_bars(sparse_array, [10.0]), [1.0], [1.0])
        assert report.holds
        assert report.residual < 1e-12
        assert report.tolerance == 1e-8
        assert report.eta == pytest.approx(1.0)

    def test_quarter_turn_phase(self, sparse_array):
        report = span_residual(build_phi_bars(sparse_array, [10.0]), [1.0], [1j])
        assert not report.holds
        assert report.residual == pytest.approx(np.sqrt(1496) / 45, abs=1e-9)

    def test_eta_scales_with_power(self, sparse_array):
        report = span_residual(build_phi_bars(sparse_array, [10.0]), [2.0], [2.0])
        assert report.holds
        assert report.eta == pytest.approx(2.0)

    def test_eta_only_for_single_source(self, sparse_array):
        report = span_residual(build_phi_bars(sparse_array, [-15.0, 25.0]), [1.0, 1.0], [1.0, 1.0])
        assert report.eta is None

    def test_scale_invariance(self, sparse_array):
        bars = build_phi_bars(sparse_array, [-15.0, 25.0])
        g = np.array([1.0, 0.7])
        g_tilde = g * np.exp(2j * np.array([0.4, 1.3]))
        base = span_residual(bars, g, g_tilde).residual
        assert span_residual(bars, 3.5 * g, 3.5 * g_tilde).residual == pytest.approx(base, rel=1e-9)

    def test_custom_tolerance(self, sparse_array):
        report = span_residual(build_phi_bars(sparse_array, [10.0]), [1.0], [1j], tolerance=1.0)
        assert report.holds
        assert report.tolerance == 1.0

    def test_length_mismatch(self, sparse_array):
        with pytest.raises(LabError):
            span_residual(build_phi_bars(sparse_array, [-15.0, 25.0]), [1.0], [1.0])

    def test_zero_data(self, sparse_array):
        with pytest.raises(LabError):
            span_residual(build_phi_bars(sparse_array, [10.0]), [0.0], [0.0])


class TestLemmaSweep:
    def test_quadrant_points(self, sparse_array):
        rows = lemma1_sweep(sparse_array, 10.0, phi_grid(4))
        assert [row.holds for row in rows] == [True, False, True, False]
        assert rows[1].residual == pytest.approx(np.sqrt(1 - 1 / 2025), abs=1e-9)
        assert rows[3].residual == pytest.approx(np.sqrt(1 - 1 / 2025), abs=1e-9)

    def test_holds_only_at_zero_and_pi(self, sparse_array):
        grid = phi_grid(360)
        rows = lemma1_sweep(sparse_array, 10.0, grid)
        held = [i for i, row in enumerate(rows) if row.holds]
        assert held == [0, 180]
        for phi, row in zip(grid, rows):
            if abs(np.exp(2j * phi) - 1) > 0.1:
                assert row.residual > 1e-3

    def test_matches_closed_form(self, sparse_array):
        grid = phi_grid(36)
        rows = lemma1_sweep(sparse_array, 10.0, grid)
        residuals = np.array([row.residual for row in rows])
        assert np.allclose(residuals, closed_form_residual(grid), atol=1e-9)

    def test_alternative_precedence_keeps_verdict(self, sparse_array):
        order = (CoarrayKind.POSITIVE_SUM, CoarrayKind.NEGATIVE_SUM, CoarrayKind.DIFFERENCE)
        rows = lemma1_sweep(sparse_array, 10.0, phi_grid(4), precedence=order)
        assert [row.holds for row in rows] == [True, False, True, False]

    def test_csv_row(self, sparse_array):
        row = lemma1_sweep(sparse_array, 10.0, [0.0])[0]
        phi, residual, holds = row.to_csv_row()
        assert phi == "0"
        assert holds == "true"
        assert float(residual) < 1e-8


def test_real_sources_always_satisfy_property(rng):
    for _ in range(100):
        arr = random_array(rng, min_sensors=2)
        m = int(rng.integers(1, 4))
        doas = random_doas(rng, m)
        g = rng.uniform(0.2, 3.0, size=m)
        report = span_residual(build_phi_bars(arr, doas), g, g)
        assert report.holds
        assert report.residual < 1e-10
        assert lemma_condition(g, g)


def test_lemma_condition_agrees_with_residual(sparse_array, rng):
    for _ in range(50):
        doas = random_doas(rng, 1)
        phi = rng.choice([0.0, np.pi, rng.uniform(0.2, 1.3)])
        g_tilde = [np.exp(2j * phi)]
        report = span_residual(build_phi_bars(sparse_array, doas), [1.0], g_tilde)
        assert report.holds == lemma_condition([1.0], g_tilde, atol=1e-9)


def test_lemma_condition_rejects_complex_pseudo_power():
    assert lemma_condition([1.0, 2.0], [1.0, 2.0])
    assert not lemma_condition([1.0], [1j])
    assert not lemma_condition([1.0], [2.0])


def random_phase(rng):
    return rng.choice([0.0, np.pi, rng.uniform(0.2, np.pi - 0.2)])


def test_phi_bars_match_explicit_khatri_rao_rows(rng):
    for _ in range(50):
        arr = random_array(rng, min_sensors=2, max_sensors=6)
        doas = random_doas(rng, 2)
        a = steering_matrix(arr, doas)
        pos = arr.positions
        # row i*N + j of khatri_rao(B, C) is B[i] * C[j]
        diff_lags = np.array([xj - xi for xi in pos for xj in pos])
        sum_lags = np.array([xi + xj for xi in pos for xj in pos])
        bars = build_phi_bars(arr, doas)
        blocks = (
            (linalg.khatri_rao(a.conj(), a), diff_lags, bars.phi1, bars.lags1),
            (linalg.khatri_rao(a, a), sum_lags, bars.phi2, bars.lags2),
            (linalg.khatri_rao(a.conj(), a.conj()), -sum_lags, bars.phi3, bars.lags3),
        )
        for product, row_lags, phi, lags in blocks:
            assert phi.shape == (len(lags), 2)
            for k, lag in enumerate(lags):
                rows = product[row_lags == lag]
                assert rows.shape[0] >= 1
                assert np.max(np.abs(rows - phi[k])) < 1e-12


def test_forward_direction_recovers_power(rng):
    for _ in range(100):
        arr = random_array(rng, min_sensors=2, max_sensors=7)
        g = float(rng.uniform(0.2, 3.0))
        g_tilde = g * np.exp(2j * random_phase(rng))
        report = span_residual(build_phi_bars(arr, random_doas(rng, 1)), [g], [g_tilde])
        assert report.holds == lemma_condition([g], [g_tilde], atol=1e-9)
        if report.holds:
            assert abs(g - report.eta) < 1e-8
            assert abs(g_tilde - report.eta) < 1e-8
            assert abs(np.conj(g_tilde) - report.eta) < 1e-8


def test_verdict_does_not_depend_on_precedence(rng):
    checked = 0
    for _ in range(100):
        arr = random_array(rng, min_sensors=2, max_sensors=7)
        doas = random_doas(rng, 1)
        g_tilde = [np.exp(2j * random_phase(rng))]
        expected = span_residual(build_phi_bars(arr, doas), [1.0], g_tilde).holds
        for order in permutations(DEFAULT_PRECEDENCE):
            part = partition_sdca(arr, order)
            if min(len(part.d1bar), len(part.d2bar), len(part.d3bar)) == 0:
                continue
            bars = build_phi_bars(arr, doas, precedence=order)
            assert span_residual(bars, [1.0], g_tilde).holds == expected
            checked += 1
    assert checked >= 100
