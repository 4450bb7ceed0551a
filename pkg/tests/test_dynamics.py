import math

import numpy as np
import pytest

from mebd import dynamics, linalg
from mebd.dynamics import (
    MEBD,
    E1_FIXED,
    E_TILDE,
    MaximumReport,
    SweepConfig,
    SweepRecord,
    find_first_maximum,
    run_sweep,
    sanity_tau_bound,
)
from mebd.errors import GridTooLarge, NoMaximumFound
from mebd.hilbert import basis_index, excitation_sector
from mebd.model import CouplingKind, CouplingProfile, build_hdz


class TestSweepConfig:
    def test_grid(self):
        cfg = SweepConfig(3, "010", tau_start=0.0, tau_end=1.0, tau_step=0.25)
        assert np.allclose(cfg.grid(), [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_grid_too_large(self):
        with pytest.raises(GridTooLarge):
            SweepConfig(3, "010", tau_end=4.0, tau_step=1e-6)

    def test_bad_label_length(self):
        with pytest.raises(ValueError):
            SweepConfig(3, "0101")


class TestRunSweep:
    def test_product_state_at_tau_zero(self):
        cfg = SweepConfig(3, "010", tau_end=0.01, tau_step=0.01)
        recs = run_sweep(cfg)
        assert recs[0].tau == 0.0
        assert recs[0].values[MEBD] < 1e-10

    def test_two_spin_closed_form(self):
        # |10> under the nearest-neighbour 2-site chain: the cross
        # negativity is |sin tau|.
        cfg = SweepConfig(2, "10",
                          profile=CouplingProfile(CouplingKind.NEAREST_NEIGHBOR, 2),
                          tau_end=3.0, tau_step=0.1, quantities=(MEBD,))
        for rec in run_sweep(cfg):
            assert abs(rec.values[MEBD] - abs(math.sin(rec.tau))) < 1e-9

    def test_conservation_along_sweep(self):
        n, label = 4, "1001"
        ham = build_hdz(n)
        sf = linalg.hermitian_eig(ham.matrix)
        psi0 = np.zeros(1 << n, dtype=np.complex128)
        psi0[basis_index(label)] = 1.0
        c0 = sf.vectors.conj().T @ psi0
        sector = set(excitation_sector(n, label.count("1")))
        outside = [i for i in range(1 << n) if i not in sector]
        for tau in np.arange(0.0, 4.0, 0.25):
            psi = sf.vectors @ (np.exp(-1j * sf.eigenvalues * tau) * c0)
            rho = np.outer(psi, psi.conj())
            assert abs(np.trace(rho).real - 1.0) < 1e-10
            assert abs(np.trace(rho @ rho).real - 1.0) < 1e-9
            assert np.abs(rho[outside, :]).max() < 1e-10

    def test_estimator_ordering_pointwise(self):
        cfg = SweepConfig(4, "1001", tau_end=3.0, tau_step=0.1,
                          quantities=(MEBD, E1_FIXED, E_TILDE))
        for rec in run_sweep(cfg):
            assert rec.values[E1_FIXED] <= rec.values[MEBD] + 1e-9
            assert rec.values[MEBD] <= rec.values[E_TILDE] + 1e-9

    def test_workers_bitwise_deterministic(self):
        cfg = SweepConfig(3, "010", tau_end=1.0, tau_step=0.1)
        serial = run_sweep(cfg)
        parallel = run_sweep(cfg, workers=4)
        for a, b in zip(serial, parallel):
            assert a.tau == b.tau
            assert a.values == b.values


class TestFindFirstMaximum:
    def test_three_site_reference_point(self):
        cfg = SweepConfig(3, "010", tau_end=3.0, tau_step=0.01, quantities=(MEBD,))
        report = find_first_maximum(run_sweep(cfg), MEBD)
        assert abs(report.tau_star - 1.505) < 0.01
        assert abs(report.value - 0.943) < 0.01

    def test_monotone_series_has_no_maximum(self):
        series = [SweepRecord(tau=t, values={MEBD: t}) for t in np.linspace(0, 1, 10)]
        with pytest.raises(NoMaximumFound):
            find_first_maximum(series, MEBD)

    def test_min_value_filters_ripples(self):
        taus = np.linspace(0, 2, 21)
        vals = 0.1 * np.exp(-((taus - 0.5) ** 2) / 0.01) \
            + 0.9 * np.exp(-((taus - 1.5) ** 2) / 0.01)
        series = [SweepRecord(tau=float(t), values={MEBD: float(v)})
                  for t, v in zip(taus, vals)]
        report = find_first_maximum(series, MEBD, min_value=0.5)
        assert abs(report.tau_star - 1.5) < 0.1

    def test_grid_convergence(self):
        coarse_step = 0.02
        reports = []
        for step in (coarse_step, coarse_step / 2):
            cfg = SweepConfig(3, "010", tau_end=3.0, tau_step=step, quantities=(MEBD,))
            reports.append(find_first_maximum(run_sweep(cfg), MEBD))
        assert abs(reports[0].tau_star - reports[1].tau_star) < coarse_step

    def test_empty_series(self):
        with pytest.raises(NoMaximumFound):
            find_first_maximum([], MEBD)


class TestSanityTauBound:
    def test_values(self):
        ok = MaximumReport(tau_star=1.505, value=0.943, kind="parabolic-refined")
        late = MaximumReport(tau_star=3.5, value=0.9, kind="grid-point")
        assert sanity_tau_bound(ok)
        assert sanity_tau_bound(MaximumReport(2.193, 0.988, "grid-point"))
        assert not sanity_tau_bound(late)
