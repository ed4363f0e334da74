import numpy as np
import pytest

from envelofit.core import LengthMismatchError, NonPositiveParameterError
from envelofit.synth import (
    GpParams,
    TrialSpec,
    generate_trial,
    make_smooth,
    nonlinearity_q,
    sample_gp,
)


class TestGpParams:
    def test_validation(self):
        with pytest.raises(NonPositiveParameterError):
            GpParams(0.0, 1.0)
        with pytest.raises(NonPositiveParameterError):
            GpParams(1.0, -1.0)
        with pytest.raises(NonPositiveParameterError):
            GpParams(1.0, 1.0, -1e-9)

    def test_printed_defaults(self):
        spec = TrialSpec()
        assert (spec.warp.c0, spec.warp.c1, spec.warp.c2) == (25.0, 500.0, 1e-3)
        assert (spec.mag.c0, spec.mag.c1, spec.mag.c2) == (25.0, 2500.0, 5e-4)
        assert (spec.transient.c0, spec.transient.c1, spec.transient.c2) == (
            0.1, 10.0, 1e-5)
        assert spec.fs_hz == 10.0 and spec.duration_s == 200.0
        assert spec.n == 2000


class TestSampleGp:
    def test_determinism(self):
        p = GpParams(1.0, 4.0, 1e-6)
        a = sample_gp(p, 64, 10.0, rng=5)
        b = sample_gp(p, 64, 10.0, rng=5)
        np.testing.assert_array_equal(a, b)

    def test_size_guard(self):
        with pytest.raises(LengthMismatchError):
            sample_gp(GpParams(1.0, 1.0, 1e-6), 5000, 10.0)
        with pytest.raises(NonPositiveParameterError):
            sample_gp(GpParams(1.0, 1.0, 1e-6), 0, 10.0)

    def test_moments_match_covariance(self):
        # Monte-Carlo check of variance and lag-1 covariance
        p = GpParams(2.0, 1.0, 1e-9)
        fs = 10.0
        rng = np.random.default_rng(0)
        draws = np.array([sample_gp(p, 128, fs, rng) for _ in range(400)])
        var = draws.var(axis=0).mean()
        assert var == pytest.approx(p.c0, rel=0.15)
        lag1 = (draws[:, :-1] * draws[:, 1:]).mean()
        want = p.c0 * np.exp(-(1.0 / fs) ** 2 / p.c1)
        assert lag1 == pytest.approx(want, rel=0.15)

    def test_jitter_adds_variance(self):
        p = GpParams(1.0, 1.0, 0.5)
        rng = np.random.default_rng(1)
        draws = np.array([sample_gp(p, 64, 10.0, rng) for _ in range(600)])
        assert draws.var(axis=0).mean() == pytest.approx(1.5, rel=0.15)


class TestMakeSmooth:
    def test_no_warp_unit_magnitude(self):
        fs = 10.0
        n = 40
        out = make_smooth(np.zeros(n), np.zeros(n), fs)
        t = np.arange(n) / fs
        np.testing.assert_allclose(out, np.cos(0.5 * np.pi * t))

    def test_constant_warp_shifts_phase(self):
        fs = 10.0
        n = 40
        out = make_smooth(np.full(n, 1.0), np.zeros(n), fs)
        t = np.arange(n) / fs
        np.testing.assert_allclose(out, np.cos(0.5 * np.pi * (t + 1.0)))

    def test_magnitude_scales(self):
        out = make_smooth(np.zeros(4), np.full(4, 20.0), 10.0)
        base = make_smooth(np.zeros(4), np.zeros(4), 10.0)
        np.testing.assert_allclose(out, 2.0 * base)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            make_smooth(np.zeros(4), np.zeros(5), 10.0)


class TestNonlinearityQ:
    def test_identity_outside_unit(self):
        assert nonlinearity_q(2.0) == 2.0
        assert nonlinearity_q(-3.5) == -3.5

    def test_signed_square_inside(self):
        assert nonlinearity_q(0.5) == pytest.approx(0.25)
        assert nonlinearity_q(-0.5) == pytest.approx(-0.25)
        assert nonlinearity_q(0.0) == 0.0

    def test_odd_and_continuous(self):
        u = np.linspace(-3, 3, 1001)
        out = nonlinearity_q(u)
        np.testing.assert_allclose(nonlinearity_q(-u), -out, atol=1e-15)
        assert np.max(np.abs(np.diff(out))) < 2.5 * (u[1] - u[0])

    def test_monotone(self):
        u = np.linspace(-5, 5, 2001)
        assert np.all(np.diff(nonlinearity_q(u)) >= 0)


class TestGenerateTrial:
    def test_bitwise_determinism(self):
        a = generate_trial(TrialSpec(seed=9, duration_s=30.0))
        b = generate_trial(TrialSpec(seed=9, duration_s=30.0))
        np.testing.assert_array_equal(a.observation.samples, b.observation.samples)
        np.testing.assert_array_equal(a.smooth.samples, b.smooth.samples)

    def test_seeds_differ(self):
        a = generate_trial(TrialSpec(seed=1, duration_s=30.0))
        b = generate_trial(TrialSpec(seed=2, duration_s=30.0))
        assert np.any(a.observation.samples != b.observation.samples)

    def test_observation_is_sum(self):
        tr = generate_trial(TrialSpec(seed=4, duration_s=30.0))
        np.testing.assert_array_equal(
            tr.observation.samples, tr.smooth.samples + tr.transient.samples
        )

    def test_component_scales(self):
        # transient magnitude is much smaller than the smooth carrier
        tr = generate_trial(TrialSpec(seed=0))
        assert np.std(tr.transient.samples) < 0.5 * np.std(tr.smooth.samples)
        assert 0.3 < np.std(tr.smooth.samples) < 2.0
