import math

import numpy as np
import pytest

from bpr.measurement import encode_binary, gen_gaussian_ensemble, gen_unit_sphere_signal
from bpr.metrics import consistency, psnr, srer, ssim
from bpr.pgm import read_pgm, write_pgm


class TestSrer:
    def test_exact_recovery(self):
        x = gen_unit_sphere_signal(12, seed=0)
        assert srer(x, x) == float("inf")

    def test_sign_flip_equals_exact(self):
        x = gen_unit_sphere_signal(12, seed=1)
        assert srer(x, -x) == float("inf")

    def test_zero_estimate(self):
        x = gen_unit_sphere_signal(12, seed=2)
        assert abs(srer(x, np.zeros(12))) < 1e-12

    def test_sign_invariance_exact(self):
        x = gen_unit_sphere_signal(12, seed=3)
        xh = gen_unit_sphere_signal(12, seed=4) * 0.9
        assert srer(x, xh) == srer(x, -xh)

    def test_known_value(self):
        x = np.array([1.0, 0.0])
        xh = np.array([0.9, 0.0])
        assert abs(srer(x, xh) - 10 * math.log10(1.0 / 0.01)) < 1e-9

    def test_zero_truth_raises(self):
        with pytest.raises(ValueError):
            srer(np.zeros(3), np.ones(3))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            srer(np.ones(3), np.ones(4))


class TestConsistency:
    def test_truth_explains_noiseless_codes(self):
        x = gen_unit_sphere_signal(8, seed=5)
        ens = gen_gaussian_ensemble(8, 100, seed=6)
        y = encode_binary(ens, x, 0.4550)
        assert consistency(y, ens, x) == 1.0

    def test_flipped_codes_give_zero(self):
        from bpr.measurement import BinaryMeasurements
        x = gen_unit_sphere_signal(8, seed=7)
        ens = gen_gaussian_ensemble(8, 100, seed=8)
        y = encode_binary(ens, x, 0.4550)
        flipped = BinaryMeasurements(-y.codes, y.tau)
        assert consistency(flipped, ens, x) == 0.0

    def test_sign_blind(self):
        x = gen_unit_sphere_signal(8, seed=9)
        ens = gen_gaussian_ensemble(8, 60, seed=10)
        y = encode_binary(ens, x, 0.4550)
        xh = gen_unit_sphere_signal(8, seed=11)
        assert consistency(y, ens, xh) == consistency(y, ens, -xh)

    def test_fraction_times_m_is_integer(self):
        x = gen_unit_sphere_signal(8, seed=12)
        ens = gen_gaussian_ensemble(8, 73, seed=13)
        y = encode_binary(ens, x, 0.4550)
        xh = gen_unit_sphere_signal(8, seed=14)
        value = consistency(y, ens, xh) * 73
        assert abs(value - round(value)) < 1e-9

    def test_size_mismatch(self):
        x = gen_unit_sphere_signal(8, seed=15)
        ens = gen_gaussian_ensemble(8, 10, seed=16)
        other = gen_gaussian_ensemble(8, 11, seed=17)
        y = encode_binary(ens, x, 0.4550)
        with pytest.raises(ValueError):
            consistency(y, other, x)


class TestPsnr:
    def test_identical(self):
        img = np.full((8, 8), 77, dtype=np.uint8)
        assert psnr(img, img) == float("inf")

    def test_full_scale_error(self):
        a = np.zeros((8, 8), dtype=np.uint8)
        b = np.full((8, 8), 255, dtype=np.uint8)
        assert abs(psnr(a, b)) < 1e-12

    def test_matches_scalar_loop(self):
        rng = np.random.default_rng(18)
        a = rng.integers(0, 256, (8, 8)).astype(np.uint8)
        b = rng.integers(0, 256, (8, 8)).astype(np.uint8)
        sq = 0.0
        for i in range(8):
            for j in range(8):
                sq += (float(a[i, j]) - float(b[i, j])) ** 2
        expected = 20 * math.log10(255 * math.sqrt(64) / math.sqrt(sq))
        assert abs(psnr(a, b) - expected) < 1e-12

    def test_monotone_in_noise(self):
        rng = np.random.default_rng(19)
        base = rng.integers(60, 196, (16, 16)).astype(float)
        values = []
        for scale in (2.0, 8.0, 32.0):
            noisy = np.clip(base + rng.normal(0, scale, base.shape), 0, 255)
            values.append(psnr(base, noisy))
        assert values[0] > values[1] > values[2]

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            psnr(np.zeros((4, 4)), np.zeros((4, 5)))


class TestSsim:
    def test_identical_is_one(self):
        rng = np.random.default_rng(20)
        img = rng.integers(0, 256, (16, 16)).astype(np.uint8)
        assert abs(ssim(img, img) - 1.0) < 1e-12

    def test_constant_images_frozen_value(self):
        # mu_a = 0, mu_b = 255, zero variances: score = C1 / (255^2 + C1)
        a = np.zeros((8, 8), dtype=np.uint8)
        b = np.full((8, 8), 255, dtype=np.uint8)
        c1 = (0.01 * 255) ** 2
        expected = c1 / (255.0**2 + c1)
        got = ssim(a, b)
        assert abs(got - 9.999000099990003e-05) < 1e-12
        assert abs(got - expected) < 1e-15

    def test_symmetry(self):
        rng = np.random.default_rng(21)
        a = rng.integers(0, 256, (12, 12)).astype(np.uint8)
        b = rng.integers(0, 256, (12, 12)).astype(np.uint8)
        assert ssim(a, b) == ssim(b, a)

    def test_range_and_strictness(self):
        rng = np.random.default_rng(22)
        a = rng.integers(0, 256, (12, 12)).astype(np.uint8)
        b = rng.integers(0, 256, (12, 12)).astype(np.uint8)
        value = ssim(a, b)
        assert -1.0 <= value <= 1.0
        assert value < 1.0  # different images cannot reach 1

    def test_matches_windowed_loop_oracle(self):
        # independent per-window implementation with explicit loops
        rng = np.random.default_rng(23)
        a = rng.integers(0, 256, (12, 12)).astype(float)
        b = np.clip(a + rng.normal(0, 12, a.shape), 0, 255)
        c1 = (0.01 * 255) ** 2
        c2 = (0.03 * 255) ** 2
        scores = []
        for i in range(12 - 7):
            for j in range(12 - 7):
                wa = a[i:i + 8, j:j + 8].ravel()
                wb = b[i:i + 8, j:j + 8].ravel()
                mu_a, mu_b = wa.mean(), wb.mean()
                var_a = ((wa - mu_a) ** 2).mean()
                var_b = ((wb - mu_b) ** 2).mean()
                cov = ((wa - mu_a) * (wb - mu_b)).mean()
                scores.append(
                    (2 * mu_a * mu_b + c1) * (2 * cov + c2)
                    / ((mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2))
                )
        assert abs(ssim(a, b) - np.mean(scores)) < 1e-12

    def test_too_small_raises(self):
        with pytest.raises(ValueError):
            ssim(np.zeros((4, 4)), np.zeros((4, 4)))


class TestPgm:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(24)
        img = rng.integers(0, 256, (10, 14)).astype(np.uint8)
        path = tmp_path / "img.pgm"
        write_pgm(path, img)
        assert np.array_equal(read_pgm(path), img)

    def test_comment_handling(self, tmp_path):
        img = np.arange(6, dtype=np.uint8).reshape(2, 3)
        path = tmp_path / "c.pgm"
        with open(path, "wb") as fh:
            fh.write(b"P5\n# a comment\n3 2\n255\n")
            fh.write(img.tobytes())
        assert np.array_equal(read_pgm(path), img)

    def test_rejects_wrong_magic(self, tmp_path):
        path = tmp_path / "bad.pgm"
        path.write_bytes(b"P2\n2 2\n255\n0 0 0 0")
        with pytest.raises(ValueError):
            read_pgm(path)

    def test_rejects_non_uint8(self, tmp_path):
        with pytest.raises(ValueError):
            write_pgm(tmp_path / "x.pgm", np.zeros((4, 4)))
