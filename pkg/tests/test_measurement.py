import math
import os

import numpy as np
import pytest

from bpr.linalg import trace_inner
from bpr.measurement import (
    SensingEnsemble,
    chi1sq_cdf,
    chi1sq_quantile,
    empirical_median_threshold,
    encode_binary,
    gen_gaussian_ensemble,
    gen_structured_illumination_ensemble,
    gen_two_sinusoid_signal,
    gen_unit_sphere_signal,
    interval_centroids,
    load_ensemble,
    load_measurements,
    load_signal,
    save_ensemble,
    save_measurements,
    save_signal,
    sigma_for_snr,
)

# chi^2_1 median from the closed form (Phi^{-1}(0.75))^2; the erfinv oracle
CHI1SQ_MEDIAN = 0.454936423119572


class TestSignals:
    def test_unit_sphere_norm(self):
        x = gen_unit_sphere_signal(64, seed=7)
        assert abs(np.linalg.norm(x) - 1.0) < 1e-12

    def test_unit_sphere_n1(self):
        for seed in range(5):
            x = gen_unit_sphere_signal(1, seed=seed)
            assert abs(abs(x[0]) - 1.0) < 1e-12

    def test_unit_sphere_deterministic(self):
        a = gen_unit_sphere_signal(16, seed=3)
        b = gen_unit_sphere_signal(16, seed=3)
        assert np.array_equal(a, b)

    def test_unit_sphere_invalid_n(self):
        with pytest.raises(ValueError):
            gen_unit_sphere_signal(0, seed=1)

    def test_two_sinusoid_norm(self):
        x = gen_two_sinusoid_signal(64)
        assert abs(np.linalg.norm(x) - 1.0) < 1e-12

    def test_two_sinusoid_first_entry(self):
        # at l = 0 the sine term vanishes, leaving kappa * 2.5
        x = gen_two_sinusoid_signal(64)
        raw = [1.5 * math.sin(4 * math.pi * l / 64) + 2.5 * math.cos(14 * math.pi * l / 64)
               for l in range(64)]
        kappa = 1.0 / math.sqrt(sum(v * v for v in raw))
        assert abs(x[0] - kappa * 2.5) < 1e-12

    def test_two_sinusoid_matches_direct_evaluation(self):
        # independent scalar re-evaluation of the formula
        n = 64
        x = gen_two_sinusoid_signal(n)
        raw = np.array([1.5 * math.sin(4 * math.pi * l / n) + 2.5 * math.cos(14 * math.pi * l / n)
                        for l in range(n)])
        expected = raw / math.sqrt((raw * raw).sum())
        assert np.allclose(x, expected, atol=1e-12)


class TestGaussianEnsemble:
    def test_shapes_and_rank1(self):
        ens = gen_gaussian_ensemble(64, 1280, seed=1)
        assert ens.rows.shape == (1280, 64)
        for i in (0, 640, 1279):
            w = np.linalg.eigvalsh(ens.lifted_form(i))
            assert w[-2] < 1e-10  # second eigenvalue: numerically rank 1

    def test_law_of_large_numbers(self):
        ens = gen_gaussian_ensemble(4, 100_000, seed=2)
        assert abs(ens.rows.mean()) < 0.02

    def test_deterministic(self):
        a = gen_gaussian_ensemble(8, 20, seed=5)
        b = gen_gaussian_ensemble(8, 20, seed=5)
        assert np.array_equal(a.rows, b.rows)

    def test_invalid_sizes(self):
        with pytest.raises(ValueError):
            gen_gaussian_ensemble(0, 5, seed=1)


class TestStructuredIllumination:
    def test_plain_dft_rows(self):
        ens = gen_structured_illumination_ensemble(8, 1, seed=0, randomize=False)
        assert ens.kind == "plain-dft"
        j = np.arange(8)
        F = np.exp(-2j * np.pi * np.outer(j, j) / 8)
        assert np.allclose(ens.rows, F, atol=1e-12)
        x = gen_unit_sphere_signal(8, seed=3)
        dft_mags = np.abs(F @ x) ** 2
        X = np.outer(x, x)
        for i in range(8):
            assert abs(trace_inner(ens.lifted_form(i), X) - dft_mags[i]) < 1e-10

    def test_mask_count(self):
        ens = gen_structured_illumination_ensemble(8, 3, seed=5, randomize=True)
        assert ens.kind == "fourier-mask"
        assert ens.m == 24

    def test_lifted_rank_at_most_two(self):
        ens = gen_structured_illumination_ensemble(8, 2, seed=7, randomize=True)
        for i in range(0, ens.m, 5):
            w = np.linalg.eigvalsh(ens.lifted_form(i))
            assert w[0] > -1e-10  # PSD
            assert w[-3] < 1e-10  # third eigenvalue vanishes

    def test_lifting_identity_all_kinds(self):
        x = gen_unit_sphere_signal(8, seed=11)
        X = np.outer(x, x)
        for ens in (
            gen_gaussian_ensemble(8, 12, seed=1),
            gen_structured_illumination_ensemble(8, 2, seed=2, randomize=True),
            gen_structured_illumination_ensemble(8, 2, seed=2, randomize=False),
        ):
            q = ens.project(x)
            for i in range(ens.m):
                assert abs(q[i] - trace_inner(ens.lifted_form(i), X)) < 1e-10
            assert np.allclose(ens.quad_forms(X), q, atol=1e-10)


class TestChi1sqThreshold:
    def test_median_matches_closed_form(self):
        assert abs(chi1sq_quantile(0.5) - CHI1SQ_MEDIAN) < 1e-7

    def test_small_p_limit(self):
        assert chi1sq_quantile(1e-12) < 1e-8

    def test_p09_against_monte_carlo(self):
        # brute-force quantile of 1e7 squared standard normals
        rng = np.random.default_rng(99)
        samples = rng.standard_normal(10_000_000) ** 2
        mc = np.quantile(samples, 0.9)
        # standard error of the MC quantile: sqrt(p(1-p)/N) / pdf(q)
        q = chi1sq_quantile(0.9)
        pdf = math.exp(-q / 2) / math.sqrt(2 * math.pi * q)
        se = math.sqrt(0.9 * 0.1 / 10_000_000) / pdf
        assert abs(q - mc) < 3 * se

    def test_invalid_p(self):
        for p in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(ValueError):
                chi1sq_quantile(p)

    def test_centroids_golden_pair(self):
        c_low, c_high = interval_centroids(0.4550)
        assert abs(c_low - 0.1427) < 1e-3
        assert abs(c_high - 1.8573) < 1e-3

    @pytest.mark.parametrize("tau", [0.1, 0.455, 1.0, 3.0])
    def test_total_expectation(self, tau):
        # p c_low + (1-p) c_high must equal E[chi^2_1] = 1
        c_low, c_high = interval_centroids(tau)
        p = chi1sq_cdf(tau)
        assert abs(p * c_low + (1 - p) * c_high - 1.0) < 1e-5

    def test_large_tau_limit(self):
        c_low, _ = interval_centroids(40.0)
        assert abs(c_low - 1.0) < 1e-6

    def test_invalid_tau(self):
        with pytest.raises(ValueError):
            interval_centroids(0.0)


class TestSigmaForSnr:
    def test_single_measurement(self):
        ens = SensingEnsemble("gaussian", np.array([[1.0]]))
        assert abs(sigma_for_snr(ens, np.array([1.0]), 0.0) - 1.0) < 1e-12

    def test_db_scaling(self):
        ens = gen_gaussian_ensemble(4, 40, seed=3)
        x = gen_unit_sphere_signal(4, seed=4)
        s0 = sigma_for_snr(ens, x, 10.0)
        s1 = sigma_for_snr(ens, x, 30.0)
        assert abs(s0 / s1 - 10.0) < 1e-9

    def test_round_trip(self):
        ens = gen_gaussian_ensemble(4, 40, seed=5)
        x = gen_unit_sphere_signal(4, seed=6)
        sigma = sigma_for_snr(ens, x, 30.0)
        q = ens.project(x)
        snr = 10 * np.log10(np.sum(q**2) / (ens.m * sigma**2))
        assert abs(snr - 30.0) < 1e-9

    def test_zero_signal(self):
        ens = gen_gaussian_ensemble(4, 10, seed=7)
        with pytest.raises(ValueError):
            sigma_for_snr(ens, np.zeros(4), 10.0)


class TestEncodeBinary:
    def test_scalar_above_threshold(self):
        ens = SensingEnsemble("gaussian", np.array([[1.0]]))
        y = encode_binary(ens, np.array([1.0]), tau=0.5)
        assert y.codes[0] == 1

    def test_all_below_threshold(self):
        ens = gen_gaussian_ensemble(4, 30, seed=8)
        x = gen_unit_sphere_signal(4, seed=9) * 1e-6  # all q_i < tau
        y = encode_binary(ens, x, tau=0.455)
        assert np.all(y.codes == -1)

    def test_sign_zero_is_minus_one(self):
        ens = SensingEnsemble("gaussian", np.array([[1.0]]))
        y = encode_binary(ens, np.array([1.0]), tau=1.0)  # q - tau == 0 exactly
        assert y.codes[0] == -1

    def test_equiprobable_fraction(self):
        tau = chi1sq_quantile(0.5)
        ens = gen_gaussian_ensemble(4, 100_000, seed=10)
        x = gen_unit_sphere_signal(4, seed=11)
        y = encode_binary(ens, x, tau)
        assert abs(np.mean(y.codes == 1) - 0.5) < 0.01

    def test_noiseless_ignores_seed(self):
        ens = gen_gaussian_ensemble(6, 50, seed=12)
        x = gen_unit_sphere_signal(6, seed=13)
        a = encode_binary(ens, x, 0.455, noise_sigma=0.0, seed=1)
        b = encode_binary(ens, x, 0.455, noise_sigma=0.0, seed=999)
        assert np.array_equal(a.codes, b.codes)

    def test_sign_blind(self):
        ens = gen_gaussian_ensemble(6, 50, seed=14)
        x = gen_unit_sphere_signal(6, seed=15)
        assert np.array_equal(
            encode_binary(ens, x, 0.455).codes, encode_binary(ens, -x, 0.455).codes
        )

    def test_noisy_deterministic_per_seed(self):
        ens = gen_gaussian_ensemble(6, 200, seed=16)
        x = gen_unit_sphere_signal(6, seed=17)
        a = encode_binary(ens, x, 0.455, noise_sigma=0.3, seed=5)
        b = encode_binary(ens, x, 0.455, noise_sigma=0.3, seed=5)
        c = encode_binary(ens, x, 0.455, noise_sigma=0.3, seed=6)
        assert np.array_equal(a.codes, b.codes)
        assert not np.array_equal(a.codes, c.codes)

    def test_invalid_params(self):
        ens = gen_gaussian_ensemble(3, 5, seed=18)
        x = gen_unit_sphere_signal(3, seed=19)
        with pytest.raises(ValueError):
            encode_binary(ens, x, tau=0.0)
        with pytest.raises(ValueError):
            encode_binary(ens, x, tau=0.4, noise_sigma=-1.0)


class TestEmpiricalMedian:
    def test_two_point_median(self):
        ens = SensingEnsemble("gaussian", np.array([[1.0], [math.sqrt(3.0)]]))
        assert abs(empirical_median_threshold(ens, np.array([1.0])) - 2.0) < 1e-12

    def test_constant_measurements(self):
        ens = SensingEnsemble("gaussian", np.ones((5, 1)) * 2.0)
        assert abs(empirical_median_threshold(ens, np.array([1.0])) - 4.0) < 1e-12

    def test_matches_chi1sq_median(self):
        ens = gen_gaussian_ensemble(4, 100_000, seed=20)
        x = gen_unit_sphere_signal(4, seed=21)
        assert abs(empirical_median_threshold(ens, x) - 0.4550) < 0.01

    def test_needs_two(self):
        ens = SensingEnsemble("gaussian", np.array([[1.0]]))
        with pytest.raises(ValueError):
            empirical_median_threshold(ens, np.array([1.0]))


class TestSerialization:
    def test_gaussian_round_trip(self, tmp_path):
        ens = gen_gaussian_ensemble(6, 11, seed=22)
        path = tmp_path / "ens.csv"
        save_ensemble(path, ens)
        back = load_ensemble(path)
        assert back.kind == ens.kind and back.seed == ens.seed
        assert np.array_equal(back.rows, ens.rows)

    def test_fourier_round_trip(self, tmp_path):
        ens = gen_structured_illumination_ensemble(6, 2, seed=23, randomize=True)
        path = tmp_path / "ens.csv"
        save_ensemble(path, ens)
        back = load_ensemble(path)
        assert back.kind == "fourier-mask"
        assert np.array_equal(back.rows, ens.rows)

    def test_measurement_round_trip(self, tmp_path):
        ens = gen_gaussian_ensemble(5, 30, seed=24)
        x = gen_unit_sphere_signal(5, seed=25)
        y = encode_binary(ens, x, 0.455, noise_sigma=0.2, seed=3)
        path = tmp_path / "codes.csv"
        save_measurements(path, y, ens)
        back, meta = load_measurements(path)
        assert np.array_equal(back.codes, y.codes)
        assert back.tau == y.tau and back.noise_sigma == y.noise_sigma
        assert meta["kind"] == "gaussian" and int(meta["n"]) == 5

    def test_signal_round_trip(self, tmp_path):
        x = gen_unit_sphere_signal(9, seed=26)
        path = tmp_path / "x.csv"
        save_signal(path, x)
        assert np.array_equal(load_signal(path), x)

    def test_saves_are_byte_stable(self, tmp_path):
        ens = gen_gaussian_ensemble(4, 7, seed=27)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        save_ensemble(p1, ens)
        save_ensemble(p2, ens)
        assert p1.read_bytes() == p2.read_bytes()
