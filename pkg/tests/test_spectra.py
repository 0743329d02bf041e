import io

import numpy as np
import pytest

from gqrm.fock import FockBasis
from gqrm.linalg import OperatorMatrix
from gqrm.models import CouplingParams, GaugeFrame, build_hamiltonian, resonant_two_level
from gqrm.spectra import (
    ConvergenceError,
    CutoffPolicy,
    SpectrumRow,
    SpectrumTable,
    SweepConfig,
    asymptotic_gap,
    converged_differences,
    gap_analysis,
    heuristic_cutoff,
    normalized_differences,
    refine_fn,
    sweep,
)


@pytest.fixture(scope="module")
def resonant():
    return resonant_two_level(1.0)


def small_sweep(params, mode, frame="coulomb", **kwargs):
    defaults = dict(
        eta_grid=np.array([0.0, 0.3, 0.9]),
        params=params,
        mode=mode,
        n_levels=6,
        frame=frame,
        cutoff=CutoffPolicy(tol_rel=1e-10),
    )
    defaults.update(kwargs)
    return sweep(SweepConfig(**defaults))


class TestConfigValidation:
    def test_grid_must_ascend(self, resonant, mode):
        with pytest.raises(ValueError, match="ascending"):
            SweepConfig(eta_grid=np.array([0.5, 0.1]), params=resonant, mode=mode)

    def test_n_levels_minimum(self, resonant, mode):
        with pytest.raises(ValueError, match="n_levels"):
            SweepConfig(eta_grid=np.array([0.1]), params=resonant, mode=mode, n_levels=1)

    def test_cutoff_policy_order(self):
        with pytest.raises(ValueError, match="n_start"):
            CutoffPolicy(n_start=2048, n_max=1024)

    def test_heuristic_cutoff(self):
        assert heuristic_cutoff(0.0) == 16
        assert heuristic_cutoff(2.0) == 128


class TestSweep:
    def test_decoupled_point_pattern(self, resonant, mode):
        table = small_sweep(resonant, mode)
        assert np.allclose(table.rows[0].diffs, [0, 1, 1, 2, 2, 3], atol=1e-9)

    def test_rows_sorted_and_converged(self, resonant, mode):
        table = small_sweep(resonant, mode)
        assert np.all(np.diff(table.etas) > 0)
        assert table.all_converged
        for row in table.rows:
            assert row.residual < 1e-10
            assert np.all(np.diff(row.diffs) >= -1e-12)
            assert np.all(row.diffs >= -1e-12)

    def test_vacuum_rabi_splitting(self, resonant, mode):
        row = converged_differences(resonant, mode, 0.01, 3, policy=CutoffPolicy(tol_rel=1e-10))
        split = row.diffs[2] - row.diffs[1]
        assert split == pytest.approx(2 * 0.01, rel=0.05)

    def test_frame_independence(self, resonant, mode):
        t_c = small_sweep(resonant, mode, frame="coulomb")
        t_d = small_sweep(resonant, mode, frame="dipole")
        for rc, rd in zip(t_c.rows, t_d.rows):
            assert np.max(np.abs(rc.diffs - rd.diffs)) < 1e-9

    def test_parallel_matches_serial(self, resonant, mode):
        serial = small_sweep(resonant, mode)
        threaded = sweep(
            SweepConfig(
                eta_grid=np.array([0.0, 0.3, 0.9]),
                params=resonant,
                mode=mode,
                n_levels=6,
                cutoff=CutoffPolicy(tol_rel=1e-10),
            ),
            max_workers=3,
        )
        for a, b in zip(serial.rows, threaded.rows):
            assert np.array_equal(a.diffs, b.diffs)
            assert a.cutoff == b.cutoff

    def test_env_thread_cap(self, resonant, mode, monkeypatch):
        monkeypatch.setenv("GQRM_THREADS", "2")
        table = small_sweep(resonant, mode)
        assert table.all_converged
        monkeypatch.setenv("GQRM_THREADS", "zebra")
        with pytest.raises(ValueError, match="GQRM_THREADS"):
            small_sweep(resonant, mode)

    def test_unconverged_rows_flagged(self, resonant, mode):
        table = small_sweep(
            resonant, mode, cutoff=CutoffPolicy(n_start=8, n_max=8, tol_rel=1e-12)
        )
        assert not table.all_converged
        assert all(not r.converged for r in table.rows)

    def test_shift_invariance_of_differences(self, resonant, mode):
        basis = FockBasis(40)
        h = build_hamiltonian(resonant, mode, CouplingParams(0.4), basis, "coulomb")
        shifted = OperatorMatrix(h.matrix + 0.37 * np.eye(h.dim))
        d0 = normalized_differences(h, 6, 1.0)
        d1 = normalized_differences(shifted, 6, 1.0)
        assert np.max(np.abs(d0 - d1)) < 1e-12

    def test_csv_shape(self, resonant, mode):
        table = small_sweep(resonant, mode)
        buf = io.StringIO()
        table.write_csv(buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "eta,level_index,delta_e_over_omega,cutoff,residual,converged"
        assert len(lines) == 1 + 3 * 6
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "0" and first[5] == "true"


class TestGapAnalysis:
    @staticmethod
    def synthetic_table(etas, level0, level1):
        rows = [
            SpectrumRow(eta=e, diffs=np.array([0.0, a, b]), cutoff=16, residual=0.0, converged=True)
            for e, a, b in zip(etas, level0, level1)
        ]
        return SpectrumTable(rows=rows, omega_ph=1.0, n_levels=3)

    def test_monotone_gap_reports_no_minima(self):
        etas = np.linspace(0, 1, 11)
        table = self.synthetic_table(etas, 1 - 0.3 * etas, 2 - 0.1 * etas)
        analysis = gap_analysis(table, (1, 2))
        assert analysis.minima == []
        assert not analysis.has_crossing

    def test_parabolic_refinement_on_smooth_minimum(self):
        etas = np.linspace(0, 1, 21)
        gap = 0.5 + (etas - 0.47) ** 2
        table = self.synthetic_table(etas, np.ones_like(etas), 1 + gap)
        analysis = gap_analysis(table, (1, 2))
        assert len(analysis.minima) == 1
        m = analysis.minima[0]
        assert m.eta == pytest.approx(0.47, abs=1e-6)
        assert m.gap == pytest.approx(0.5, abs=1e-6)
        assert m.kind == "avoided"

    def test_invalid_pair(self):
        table = self.synthetic_table(np.linspace(0, 1, 5), np.ones(5), 2 * np.ones(5))
        with pytest.raises(ValueError, match="n_levels"):
            gap_analysis(table, (2, 5))

    def test_refined_crossing_detection(self, resonant, mode):
        grid = np.arange(0.30, 0.60001, 0.05)
        table = sweep(
            SweepConfig(
                eta_grid=grid,
                params=resonant,
                mode=mode,
                n_levels=5,
                cutoff=CutoffPolicy(tol_rel=1e-10),
            )
        )
        cutoff = max(r.cutoff for r in table.rows)
        analysis = gap_analysis(
            table, (2, 3), refine=refine_fn(resonant, mode, 5, cutoff)
        )
        assert analysis.has_crossing
        best = min(analysis.minima, key=lambda m: m.gap)
        assert best.gap < 1e-6
        assert best.eta == pytest.approx(0.433, abs=2e-3)


class TestAsymptoticGap:
    def test_flat_degenerate_limit(self, resonant, mode):
        gap = asymptotic_gap(
            resonant, mode, 3.0, CutoffPolicy(n_start=96, tol_rel=1e-10)
        )
        assert gap < 1e-3

    def test_detuned_gap_approaches_detuning(self, mode):
        params = resonant_two_level(1.0, epsilon=0.2)
        g2 = asymptotic_gap(params, mode, 2.0, CutoffPolicy(n_start=64, tol_rel=1e-10))
        g4 = asymptotic_gap(params, mode, 4.0, CutoffPolicy(n_start=128, tol_rel=1e-10))
        assert abs(g4 - 0.2) <= 0.02 * params.omega_q
        assert abs(g4 - 0.2) < abs(g2 - 0.2)

    def test_frame_choice_agrees(self, mode):
        params = resonant_two_level(1.0, epsilon=0.2)
        g_d = asymptotic_gap(params, mode, 2.0, CutoffPolicy(n_start=64, tol_rel=1e-10))
        g_c = asymptotic_gap(
            params, mode, 2.0, CutoffPolicy(n_start=64, tol_rel=1e-10),
            frame=GaugeFrame.COULOMB,
        )
        assert g_d == pytest.approx(g_c, abs=1e-9)

    def test_precondition(self, resonant, mode):
        with pytest.raises(ValueError, match="eta_large"):
            asymptotic_gap(resonant, mode, 1.0)

    def test_unconverged_raises(self, resonant, mode):
        with pytest.raises(ConvergenceError, match="unconverged"):
            asymptotic_gap(
                resonant, mode, 2.5, CutoffPolicy(n_start=8, n_max=8, tol_rel=1e-14)
            )
