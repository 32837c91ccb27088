import numpy as np
import pytest

from fermidce import (
    ModelConfig,
    build_quadratic_form,
    char_grid,
    char_number,
    char_work,
    diagonalize,
    evolve,
    mean_number_analytic,
    mean_work_analytic,
    moments_fd,
    number_distribution,
    oracle_char,
    oracle_distribution,
    oracle_pair_amplitudes,
    pairing_matrix,
    perturbative_pair_amplitude,
    work_distribution,
)
from fermidce.bogoliubov import EvolvedTransform
from fermidce.errors import (
    ConsistencyError,
    DomainError,
    IllConditionedError,
    SizeGuardError,
)

from conftest import LN2


class TestPairingMatrix:
    def test_zero_step_gives_zero_pairing(self, pipeline):
        cfg, t, _ = pipeline(0.5, LN2, 2)
        state = pairing_matrix(evolve_zero(t), cfg)
        assert np.max(np.abs(state.g)) == 0.0
        assert state.norm_det == 1.0

    def test_l1_gives_zero_pairing(self, pipeline):
        _, _, state = pipeline(0.5, LN2, 1)
        assert np.max(np.abs(state.g)) == 0.0

    def test_skew_symmetry(self, pipeline):
        _, _, state = pipeline(2.0, LN2, 2)
        assert np.max(np.abs(state.g + state.g.T)) <= 1e-10

    def test_freq_abs_layout(self, pipeline):
        _, _, state = pipeline(2.0, LN2, 3)
        assert np.allclose(state.freq_abs, [2.5, 1.5, 0.5, 0.5, 1.5, 2.5])

    def test_matches_oracle_pair_structure(self, pipeline, fock_ops):
        """The a-b block of G holds exactly the oracle pair amplitudes."""
        cfg, t, state = pipeline(2.0, LN2, 2)
        amp = oracle_pair_amplitudes(fock_ops(2.0, 2), LN2)
        L = cfg.cutoff
        for m in range(L):
            for n in range(L):
                g_entry = state.g[m + L, (-1 - n) + L]
                assert abs(amp[m, n] - g_entry) < 1e-8

    def test_ill_conditioned_transform_rejected(self):
        cfg = ModelConfig(speed_ratio=1.0, delta_l=0.5, cutoff=1)
        u_t = np.diag([1.0, 1e-14]).astype(complex)
        v_t = np.full((2, 2), 1e-3, dtype=complex)
        bad = EvolvedTransform(u_t=u_t, v_t=v_t, delta_l=0.5)
        with pytest.raises(IllConditionedError):
            pairing_matrix(bad, cfg)

    def test_dimension_mismatch(self, pipeline):
        cfg, t, _ = pipeline(0.5, LN2, 2)
        with pytest.raises(DomainError):
            pairing_matrix(t, ModelConfig(speed_ratio=0.5, delta_l=LN2, cutoff=3))


def evolve_zero(t):
    n = t.dim
    return EvolvedTransform(u_t=np.eye(n, dtype=complex),
                            v_t=np.zeros((n, n), dtype=complex), delta_l=0.0)


class TestCharacteristicFunctions:
    def test_normalization(self, pipeline):
        _, _, state = pipeline(2.0, LN2, 3)
        assert char_work(state, 0.0) == 1.0
        assert char_number(state, 0.0) == 1.0

    def test_trivial_drive_is_flat(self, pipeline):
        cfg, t, _ = pipeline(0.5, LN2, 2)
        state = pairing_matrix(evolve_zero(t), cfg)
        for u in (0.3, 2.7, 11.0):
            assert char_work(state, u) == pytest.approx(1.0, abs=1e-12)
            assert char_number(state, u) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("speed,cutoff", [(0.1, 2), (2.0, 2), (0.1, 3), (2.0, 3)])
    def test_matches_oracle(self, pipeline, fock_ops, speed, cutoff):
        _, _, state = pipeline(speed, LN2, cutoff)
        ops = fock_ops(speed, cutoff)
        for u in (0.1, 0.7, 2.3):
            assert abs(char_work(state, u) - oracle_char(ops, LN2, u, "work")) < 1e-8
            assert abs(char_number(state, u) - oracle_char(ops, LN2, u, "number")) < 1e-8

    def test_hermitian_symmetry(self, pipeline):
        _, _, state = pipeline(2.0, LN2, 3)
        for u in (0.4, 1.9, 5.3):
            assert abs(char_work(state, -u) - np.conj(char_work(state, u))) < 1e-10

    def test_bounded_by_one(self, pipeline):
        _, _, state = pipeline(2.0, LN2, 8)
        us = np.linspace(0.0, 10.0, 41)
        for which in ("work", "number"):
            chi = char_grid(state, us, which)
            assert np.max(np.abs(chi)) <= 1.0 + 1e-10

    def test_number_period_pi(self, pipeline):
        _, _, state = pipeline(2.0, LN2, 3)
        assert abs(char_number(state, np.pi) - 1.0) < 1e-10
        for u in (0.4, 1.1):
            assert abs(char_number(state, u + np.pi) - char_number(state, u)) < 1e-10

    def test_theta0_never_enters(self):
        chis = []
        for theta0 in (0.0, 1.3):
            cfg = ModelConfig(speed_ratio=2.0, delta_l=LN2, cutoff=3, theta0=theta0)
            t = evolve(diagonalize(build_quadratic_form(cfg)), LN2)
            state = pairing_matrix(t, cfg)
            chis.append([char_work(state, 0.7), char_number(state, 1.3)])
        assert np.max(np.abs(np.array(chis[0]) - np.array(chis[1]))) < 1e-12

    def test_grid_rejects_negative_u(self, pipeline):
        _, _, state = pipeline(2.0, LN2, 2)
        with pytest.raises(DomainError):
            char_grid(state, [-1.0, 0.0], "work")


class TestMoments:
    def test_means_match_oracle(self, pipeline, fock_ops):
        from fermidce import oracle_moment

        _, t, state = pipeline(2.0, LN2, 3)
        ops = fock_ops(2.0, 3)
        assert mean_number_analytic(t) == pytest.approx(
            oracle_moment(ops, LN2, "number", 1), rel=1e-10)
        assert mean_work_analytic(t, state) == pytest.approx(
            oracle_moment(ops, LN2, "work", 1), rel=1e-10)

    def test_perturbative_mean_number(self, pipeline):
        _, t, _ = pipeline(1.0, 1e-2, 2)
        assert mean_number_analytic(t) == pytest.approx(2.5e-5, rel=0.05)

    def test_perturbative_mean_work(self, pipeline):
        cfg, t, state = pipeline(1.0, 1e-2, 2)
        # both pair channels cost 2 units, so <w> ~ delta_l^2/4 as well
        assert mean_work_analytic(t, state) == pytest.approx(2.5e-5, rel=0.05)

    def test_fd_matches_analytic_mean(self, pipeline):
        _, t, state = pipeline(2.0, LN2, 3)
        fd = moments_fd(state, "number", 1)
        assert fd.moments[1] == pytest.approx(mean_number_analytic(t), rel=1e-6)

    def test_analytic_m2_matches_oracle(self, pipeline, fock_ops):
        from fermidce import m2_number_analytic, m2_work_analytic, oracle_moment

        _, t, state = pipeline(2.0, LN2, 3)
        ops = fock_ops(2.0, 3)
        assert m2_number_analytic(t) == pytest.approx(
            oracle_moment(ops, LN2, "number", 2), rel=1e-10)
        assert m2_work_analytic(t, state) == pytest.approx(
            oracle_moment(ops, LN2, "work", 2), rel=1e-10)

    def test_fd_agrees_with_analytic_m2(self, pipeline):
        from fermidce import m2_number_analytic

        _, t, state = pipeline(0.5, LN2, 4)
        fd = moments_fd(state, "number", 2)
        assert fd.moments[2] == pytest.approx(m2_number_analytic(t), rel=1e-6)

    def test_fd_matches_oracle_m2(self, pipeline, fock_ops):
        from fermidce import oracle_moment

        _, t, state = pipeline(2.0, LN2, 3)
        ops = fock_ops(2.0, 3)
        fd_n = moments_fd(state, "number", 2)
        fd_w = moments_fd(state, "work", 2,
                          mean_reference=mean_work_analytic(t, state))
        assert fd_n.moments[2] == pytest.approx(
            oracle_moment(ops, LN2, "number", 2), rel=1e-6)
        assert fd_w.moments[2] == pytest.approx(
            oracle_moment(ops, LN2, "work", 2), rel=1e-6)

    def test_higher_orders_against_oracle(self, pipeline, fock_ops):
        from fermidce import oracle_moment

        _, _, state = pipeline(2.0, LN2, 2)
        ops = fock_ops(2.0, 2)
        # order 4 is roundoff-limited at the default step; widen it
        fd = moments_fd(state, "number", 4, h=1e-2)
        for order in (3, 4):
            assert fd.moments[order] == pytest.approx(
                oracle_moment(ops, LN2, "number", order), rel=1e-4)

    def test_zero_drive_moments_vanish(self, pipeline):
        cfg, t, _ = pipeline(0.5, LN2, 2)
        state = pairing_matrix(evolve_zero(t), cfg)
        fd = moments_fd(state, "work", 2)
        assert fd.moments[1] == 0.0
        assert fd.moments[2] == 0.0

    def test_variance_nonnegative(self, pipeline):
        for speed, cutoff in ((0.1, 4), (2.0, 8)):
            _, _, state = pipeline(speed, LN2, cutoff)
            for which in ("work", "number"):
                assert moments_fd(state, which, 2).variance >= -1e-8

    def test_mean_mismatch_raises(self, pipeline):
        _, _, state = pipeline(2.0, LN2, 2)
        with pytest.raises(ConsistencyError):
            moments_fd(state, "work", 1, mean_reference=1e6)

    def test_bad_order_rejected(self, pipeline):
        _, _, state = pipeline(2.0, LN2, 2)
        with pytest.raises(DomainError):
            moments_fd(state, "work", 5)


class TestDistributions:
    def test_trivial_drive(self, pipeline):
        cfg, t, _ = pipeline(0.5, LN2, 2)
        state = pairing_matrix(evolve_zero(t), cfg)
        nd = number_distribution(state)
        wd = work_distribution(state)
        assert nd[0] == pytest.approx(1.0, abs=1e-12) and np.max(nd[1:]) == 0.0
        assert wd[0] == pytest.approx(1.0, abs=1e-12) and np.max(np.abs(wd[1:])) < 1e-12

    @pytest.mark.parametrize("speed", [0.1, 2.0])
    def test_number_matches_oracle(self, pipeline, fock_ops, speed):
        _, _, state = pipeline(speed, LN2, 2)
        probs = number_distribution(state)
        exact = oracle_distribution(fock_ops(speed, 2), LN2, "number")
        assert np.max(np.abs(probs - exact[::2])) < 1e-8
        assert np.max(np.abs(exact[1::2])) < 1e-12  # odd counts never occur

    @pytest.mark.parametrize("speed", [0.1, 2.0])
    def test_work_matches_oracle(self, pipeline, fock_ops, speed):
        _, _, state = pipeline(speed, LN2, 2)
        probs = work_distribution(state)
        exact = oracle_distribution(fock_ops(speed, 2), LN2, "work")
        assert probs.shape == exact.shape
        assert np.max(np.abs(probs - exact)) < 1e-8

    def test_number_dft_cross_check(self, pipeline):
        """Poisson-binomial route vs inverse DFT of chi_N: independent paths."""
        cfg, _, state = pipeline(2.0, LN2, 3)
        L = cfg.cutoff
        probs = number_distribution(state)
        us = np.pi * np.arange(L + 1) / (L + 1)
        chi = char_grid(state, us, "number")
        recovered = np.fft.fft(chi).real / (L + 1)
        assert np.max(np.abs(recovered - probs)) < 1e-8

    def test_work_unit_cost_is_forbidden(self, pipeline):
        # no single pair costs one unit: the (0,0) amplitude vanishes
        for speed in (0.1, 2.0):
            _, _, state = pipeline(speed, LN2, 3)
            assert work_distribution(state)[1] < 1e-10

    @pytest.mark.parametrize("speed,cutoff", [(0.1, 3), (2.0, 3), (0.5, 6)])
    def test_mean_consistency_triangle(self, pipeline, speed, cutoff):
        """Analytic mean == FD mean == distribution mean on every config."""
        _, t, state = pipeline(speed, LN2, cutoff)
        mw = mean_work_analytic(t, state)
        mn = mean_number_analytic(t)
        wd = work_distribution(state, mean_reference=mw)
        nd = number_distribution(state)
        assert float(np.sum(np.arange(len(wd)) * wd)) == pytest.approx(mw, rel=1e-6)
        assert float(np.sum(2 * np.arange(len(nd)) * nd)) == pytest.approx(mn, abs=1e-8)
        fd_w = moments_fd(state, "work", 1, mean_reference=mw)
        fd_n = moments_fd(state, "number", 1, mean_reference=mn)
        assert fd_w.moments[1] == pytest.approx(mw, rel=1e-6)
        assert fd_n.moments[1] == pytest.approx(mn, rel=1e-6)

    def test_work_size_guard(self):
        from fermidce.statistics import PairingState

        n = 2 * 65
        state = PairingState(g=np.zeros((n, n), dtype=complex),
                             freq_abs=np.ones(n), log_norm_det=0.0)
        with pytest.raises(SizeGuardError):
            work_distribution(state)
        assert work_distribution(state, allow_large=True)[0] == pytest.approx(1.0)


class TestFlipSymmetry:
    def test_number_invariant_work_not(self, pipeline):
        _, t_plus, s_plus = pipeline(2.0, LN2, 8)
        _, t_minus, s_minus = pipeline(-2.0, -LN2, 8)
        n_plus = mean_number_analytic(t_plus)
        n_minus = mean_number_analytic(t_minus)
        assert n_plus == pytest.approx(n_minus, rel=1e-8)
        w_plus = mean_work_analytic(t_plus, s_plus)
        w_minus = mean_work_analytic(t_minus, s_minus)
        assert abs(w_plus - w_minus) / w_plus > 1e-3


class TestPerturbativeAmplitude:
    def test_reference_values(self):
        assert perturbative_pair_amplitude(1, 0, 0.4) == pytest.approx(-0.1, abs=1e-15)
        assert perturbative_pair_amplitude(3, 3, 2.0) == 0.0
        assert perturbative_pair_amplitude(0, 1, 1e-3) == pytest.approx(2.5e-4, abs=1e-19)

    def test_antisymmetric_in_indices(self):
        for m in range(4):
            for n in range(4):
                assert perturbative_pair_amplitude(m, n, 0.3) == pytest.approx(
                    -perturbative_pair_amplitude(n, m, 0.3), abs=1e-15)

    def test_rejects_negative_modes(self):
        with pytest.raises(DomainError):
            perturbative_pair_amplitude(-1, 0, 0.1)
