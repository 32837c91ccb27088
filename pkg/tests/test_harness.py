import numpy as np
import pytest

from fermidce import ModelConfig, fit_scaling, run_point, sweep_cutoff, sweep_speed
from fermidce.errors import ConsistencyError, DomainError
from fermidce.harness import (
    SPEED_COLUMNS,
    SWEEP_COLUMNS,
    SpeedTable,
    SweepAborted,
    SweepRow,
    SweepTable,
)

from conftest import LN2


def _table_from_model(fn, l_values=(16, 24, 32, 48, 64)):
    rows = tuple(
        SweepRow(cutoff=L, alpha_over_v=0.5, delta_l=LN2,
                 mean_w=fn(L), m2_w=0.0, mean_n=fn(L), m2_n=0.0)
        for L in l_values
    )
    return SweepTable(rows=rows, meta={"synthetic": True})


class TestRunPoint:
    def test_zero_drive_is_all_zero(self):
        rep = run_point(ModelConfig(speed_ratio=0.3, delta_l=0.0, cutoff=8))
        assert rep.mean_w == rep.m2_w == rep.mean_n == rep.m2_n == 0.0

    def test_slow_drive_matches_reported_constants(self):
        rep = run_point(ModelConfig(speed_ratio=0.1, delta_l=LN2, cutoff=64))
        assert 1.25e-3 / 2 < rep.mean_n < 1.25e-3 * 2
        assert 1.28e-2 / 2 < rep.mean_w < 1.28e-2 * 2

    def test_moment_invariants(self):
        rep = run_point(ModelConfig(speed_ratio=2.0, delta_l=LN2, cutoff=8))
        assert rep.mean_w >= 0 and rep.mean_n >= 0
        assert rep.var_w >= -1e-8 and rep.var_n >= -1e-8
        assert rep.m2_w >= rep.mean_w**2 - 1e-8

    def test_report_roundtrips_to_dict(self):
        rep = run_point(ModelConfig(speed_ratio=2.0, delta_l=LN2, cutoff=4))
        d = rep.to_dict()
        assert d["config"]["cutoff"] == 4
        assert d["energy_unit"] == "pi*v/l_final"

    def test_fd_step_switches_method(self):
        cfg = ModelConfig(speed_ratio=2.0, delta_l=LN2, cutoff=4)
        exact = run_point(cfg)
        fd = run_point(cfg, fd_step=1e-3)
        assert exact.method_m2 == "analytic"
        assert fd.method_m2 == "finite-difference"
        assert fd.m2_n == pytest.approx(exact.m2_n, rel=1e-6)
        assert fd.m2_w == pytest.approx(exact.m2_w, rel=1e-6)


class TestSweepCutoff:
    def test_zero_drive_rows(self):
        table = sweep_cutoff(ModelConfig(speed_ratio=0.3, delta_l=0.0, cutoff=2),
                             [2, 4, 8])
        assert all(r.mean_w == 0.0 and r.mean_n == 0.0 for r in table.rows)

    def test_rows_sorted_and_keyed(self):
        table = sweep_cutoff(ModelConfig(speed_ratio=0.5, delta_l=LN2, cutoff=2),
                             [2, 4, 8])
        assert [r.cutoff for r in table.rows] == [2, 4, 8]
        assert all(r.alpha_over_v == 0.5 for r in table.rows)

    def test_rejects_unsorted_grid(self):
        cfg = ModelConfig(speed_ratio=0.5, delta_l=LN2, cutoff=2)
        with pytest.raises(DomainError):
            sweep_cutoff(cfg, [8, 4])
        with pytest.raises(DomainError):
            sweep_cutoff(cfg, [4, 4, 8])

    def test_abort_keeps_partial_rows(self, monkeypatch):
        import fermidce.harness as hmod

        real = hmod.run_point

        def flaky(config, **kw):
            if config.cutoff == 8:
                raise ConsistencyError("synthetic failure")
            return real(config, **kw)

        monkeypatch.setattr(hmod, "run_point", flaky)
        cfg = ModelConfig(speed_ratio=0.5, delta_l=LN2, cutoff=2)
        with pytest.raises(SweepAborted) as info:
            sweep_cutoff(cfg, [2, 4, 8, 16])
        assert [r.cutoff for r in info.value.partial.rows] == [2, 4]


class TestFitScaling:
    def test_recovers_quadratic_exactly(self):
        table = _table_from_model(lambda L: 1.0 + 2.0 * L + 3.0 * L**2)
        fit = fit_scaling(table, "work")
        assert np.allclose(fit.coefficients, (1.0, 2.0, 3.0), atol=1e-9)
        assert fit.residual_norm < 1e-9
        assert fit.condition >= 1.0

    def test_recovers_logarithm_exactly(self):
        table = _table_from_model(lambda L: 0.5 + 2.0 * np.log(L))
        fit = fit_scaling(table, "number")
        assert np.allclose(fit.coefficients, (0.5, 0.0, 2.0), atol=1e-9)

    def test_needs_four_distinct_cutoffs(self):
        table = _table_from_model(lambda L: float(L), l_values=(16, 24, 32))
        with pytest.raises(DomainError):
            fit_scaling(table, "work")

    def test_min_cutoff_filter(self):
        table = _table_from_model(lambda L: float(L), l_values=(2, 4, 16, 24, 32, 48))
        fit = fit_scaling(table, "work")
        assert fit.l_range == (16, 48)

    def test_unknown_target(self):
        table = _table_from_model(lambda L: float(L))
        with pytest.raises(DomainError):
            fit_scaling(table, "entropy")


class TestSweepSpeed:
    def test_failed_speed_is_recorded(self):
        base = ModelConfig(speed_ratio=0.5, delta_l=LN2, cutoff=16)
        # negative speed with positive delta_l violates the sign constraint
        table = sweep_speed(base, [0.5, -0.7], [16, 24, 32, 48])
        assert len(table.rows) == 1
        assert len(table.failures) == 1 and table.failures[0][0] == -0.7

    def test_gamma1_flip_invariance(self):
        plus = sweep_speed(ModelConfig(speed_ratio=0.5, delta_l=LN2, cutoff=16),
                           [0.5], [16, 24, 32, 48])
        minus = sweep_speed(ModelConfig(speed_ratio=-0.5, delta_l=-LN2, cutoff=16),
                            [-0.5], [16, 24, 32, 48])
        g_plus = plus.rows[0].gamma1
        g_minus = minus.rows[0].gamma1
        assert abs(g_plus - g_minus) <= 1e-6 * max(abs(g_plus), 1e-12)


class TestCsvFormat:
    def _sweep(self):
        return sweep_cutoff(ModelConfig(speed_ratio=0.5, delta_l=LN2, cutoff=2),
                            [2, 4, 8])

    def test_deterministic_bytes(self):
        assert self._sweep().to_csv() == self._sweep().to_csv()

    def test_header_and_units(self):
        text = self._sweep().to_csv()
        header = [l for l in text.splitlines() if not l.startswith("#")][0]
        assert header == ",".join(SWEEP_COLUMNS)
        assert "mean_w[pi*v/l_final]" in header

    def test_roundtrip(self):
        table = self._sweep()
        text = table.to_csv()
        back = SweepTable.from_csv(text)
        # values survive at the documented 12 significant digits
        assert back.to_csv() == text
        assert back.meta == table.meta
        for a, b in zip(back.rows, table.rows):
            assert a.mean_w == pytest.approx(b.mean_w, rel=1e-11)
            assert a.mean_n == pytest.approx(b.mean_n, rel=1e-11)

    def test_rejects_foreign_header(self):
        with pytest.raises(DomainError):
            SweepTable.from_csv("a,b,c\n1,2,3\n")

    def test_speed_table_roundtrip(self):
        base = ModelConfig(speed_ratio=0.5, delta_l=LN2, cutoff=16)
        table = sweep_speed(base, [0.5], [16, 24, 32, 48])
        text = table.to_csv()
        back = SpeedTable.from_csv(text)
        assert back.to_csv() == text
        header = [l for l in text.splitlines() if not l.startswith("#")][0]
        assert header == ",".join(SPEED_COLUMNS)
