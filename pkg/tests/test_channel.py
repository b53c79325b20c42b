"""Tests for Gaussian ensembles, the transmission law, and the domain transform."""

import numpy as np
import pytest

from subdom.channel import (
    GaussianEnsemble,
    PathComponent,
    TransmissionRecord,
    domain_transmit,
    flat_transmittance,
    fourier_transmittance,
    path_matrix,
    path_transmittance,
    sample_input,
    statistical_model,
    subcarrier_decode,
    subcarrier_domain,
    subcarrier_encode,
    transmit,
)
from subdom.fourier import AnglePair, build_cvqft


def dft_sum(values):
    # independent oracle for the unnormalized DFT: the plain double sum
    values = np.asarray(values, dtype=complex)
    n = values.size
    out = np.zeros(n, dtype=complex)
    for i in range(n):
        for k in range(n):
            out[i] += values[k] * np.exp(-2j * np.pi * i * k / n)
    return out


class TestGaussianEnsemble:
    def test_same_seed_reproduces(self):
        a = GaussianEnsemble(8, 1.0, 99).sample()
        b = GaussianEnsemble(8, 1.0, 99).sample()
        assert np.array_equal(a, b)

    def test_component_power(self):
        # E[|z|^2] = 2 sigma_sq per component
        samples = GaussianEnsemble(4, 0.7, 3).sample_many(100_000)
        power = np.mean(np.abs(samples) ** 2, axis=0)
        np.testing.assert_allclose(power, 2 * 0.7, rtol=0.03)

    def test_vanishing_variance_limit(self):
        z = GaussianEnsemble(16, 1e-30, 0).sample()
        assert np.max(np.abs(z)) < 1e-12

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            GaussianEnsemble(0, 1.0, 0)
        with pytest.raises(ValueError):
            GaussianEnsemble(4, -1.0, 0)


class TestSampleInput:
    def test_rejects_non_positive_variance(self):
        with pytest.raises(ValueError):
            sample_input(4, 0.0, 0)
        with pytest.raises(ValueError):
            sample_input(4, -0.5, 0)

    def test_deterministic(self):
        assert np.array_equal(sample_input(16, 2.0, 5), sample_input(16, 2.0, 5))

    def test_moment(self):
        z = sample_input(100_000, 1.0, 12)
        assert np.mean(np.abs(z) ** 2) == pytest.approx(2.0, rel=0.03)


class TestEncodeDecode:
    def test_unit_impulse(self):
        l = 8
        d = subcarrier_encode(np.eye(l)[0].astype(complex))
        np.testing.assert_allclose(d, np.full(l, 1 / np.sqrt(l)), atol=1e-12)

    def test_round_trip(self):
        rng = np.random.default_rng(7)
        for l in (2, 64, 4096):
            z = rng.normal(size=l) + 1j * rng.normal(size=l)
            err = np.max(np.abs(subcarrier_decode(subcarrier_encode(z)) - z))
            assert err < 1e-10

    def test_parseval(self):
        rng = np.random.default_rng(8)
        z = rng.normal(size=64) + 1j * rng.normal(size=64)
        assert np.linalg.norm(subcarrier_encode(z)) == pytest.approx(
            np.linalg.norm(z), abs=1e-10)

    def test_matches_dense_operator(self):
        # encode/decode run on the FFT; the dense unitary is the oracle
        rng = np.random.default_rng(9)
        for l in (3, 16, 65):
            z = rng.normal(size=l) + 1j * rng.normal(size=l)
            U_inv = build_cvqft(l, "inverse").entries
            U_fwd = build_cvqft(l, "forward").entries
            assert np.max(np.abs(subcarrier_encode(z) - U_inv @ z)) < 1e-10
            assert np.max(np.abs(subcarrier_decode(z) - U_fwd @ z)) < 1e-10

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            subcarrier_encode(np.array([]))


class TestFourierTransmittance:
    def test_constant_vector(self):
        c = 0.3 + 0.3j
        ft = fourier_transmittance(np.full(8, c))
        assert ft[0] == pytest.approx(8 * c, abs=1e-12)
        assert np.max(np.abs(ft[1:])) < 1e-12

    def test_zeros(self):
        assert np.max(np.abs(fourier_transmittance(np.zeros(4)))) == 0.0

    def test_two_point(self):
        a, b = 1 + 2j, 0.5 - 1j
        ft = fourier_transmittance(np.array([a, b]))
        np.testing.assert_allclose(ft, [a + b, a - b], atol=1e-12)

    def test_against_plain_sum(self):
        rng = np.random.default_rng(10)
        values = rng.normal(size=7) + 1j * rng.normal(size=7)
        np.testing.assert_allclose(fourier_transmittance(values),
                                   dft_sum(values), atol=1e-12)

    def test_accepts_transmittance_object(self):
        t = flat_transmittance([0.1 + 0.1j, 0.2 + 0.2j])
        np.testing.assert_allclose(fourier_transmittance(t),
                                   dft_sum(t.flat), atol=1e-12)


class TestTransmittanceValidation:
    def test_strict_accepts_balanced_gains(self):
        quad = np.array([0.1, 0.5, 1 / np.sqrt(2)])
        flat_transmittance(quad + 1j * quad, strict=True)

    def test_strict_rejects_unbalanced(self):
        with pytest.raises(ValueError):
            flat_transmittance([0.3 + 0.2j], strict=True)

    def test_strict_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            flat_transmittance([0.9 + 0.9j], strict=True)
        with pytest.raises(ValueError):
            flat_transmittance([-0.1 - 0.1j], strict=True)

    def test_relaxed_accepts_anything(self):
        flat_transmittance([3.0 - 2.0j])

    def test_path_mode(self):
        t = path_transmittance([PathComponent(1.0, AnglePair(0.1, 0.2))])
        assert t.mode == "path"
        with pytest.raises(ValueError):
            fourier_transmittance(t)

    def test_rejects_negative_gain(self):
        with pytest.raises(ValueError):
            PathComponent(-0.5, AnglePair(0.0, 0.0))


class TestTransmit:
    def test_dead_channel(self):
        d = np.ones(4, dtype=complex)
        rec = transmit(d, np.zeros(4), noise_seed=0, sigma_n_sq=0.0)
        assert np.max(np.abs(rec.output)) == 0.0
        assert np.max(np.abs(rec.domain_output)) < 1e-12

    def test_noiseless_two_channel_composition(self):
        rng = np.random.default_rng(13)
        d = rng.normal(size=2) + 1j * rng.normal(size=2)
        a, b = 0.4 + 0.4j, 0.2 + 0.2j
        rec = transmit(d, np.array([a, b]), noise_seed=1, sigma_n_sq=0.0)
        z = subcarrier_decode(d)
        expected = np.array([(a + b) * z[0], (a - b) * z[1]])
        np.testing.assert_allclose(rec.output, expected, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            transmit(np.ones(4, dtype=complex), np.ones(3), 0, 0.0)

    def test_noise_only_quadrature_variance(self):
        # T = 0: the output is the transformed noise; its quadrature
        # variance must match the channel noise variance (the transform is
        # unitary and the distribution circular symmetric)
        sigma_n_sq = 0.5
        l, trials = 2, 100_000
        d = np.zeros(l, dtype=complex)
        quads = np.empty((trials, 2 * l))
        for t in range(trials):
            rec = transmit(d, np.zeros(l), noise_seed=t, sigma_n_sq=sigma_n_sq)
            quads[t] = np.concatenate([rec.output.real, rec.output.imag])
        np.testing.assert_allclose(np.var(quads, axis=0), sigma_n_sq, rtol=0.05)

    def test_transformed_noise_matches_direct_sampling_distribution(self):
        sigma_n_sq = 0.8
        l, trials = 4, 50_000
        transformed = np.abs(np.fft.fft(
            GaussianEnsemble(l, sigma_n_sq, 1).sample_many(trials),
            norm="ortho", axis=1)) ** 2
        direct = np.abs(GaussianEnsemble(l, sigma_n_sq, 2).sample_many(trials)) ** 2
        assert np.mean(transformed) == pytest.approx(np.mean(direct), rel=0.03)

    def test_record_round_trip_invariant(self):
        rng = np.random.default_rng(14)
        d = rng.normal(size=8) + 1j * rng.normal(size=8)
        rec = transmit(d, rng.normal(size=8) + 1j * rng.normal(size=8),
                       noise_seed=3, sigma_n_sq=0.1)
        assert np.max(np.abs(subcarrier_encode(rec.input_singles) - rec.subcarriers)) < 1e-10
        assert np.max(np.abs(subcarrier_decode(rec.subcarriers) - rec.input_singles)) < 1e-10

    def test_energy_bound(self):
        rng = np.random.default_rng(15)
        for trial in range(20):
            l = 8
            d = rng.normal(size=l) + 1j * rng.normal(size=l)
            gains = rng.normal(size=l) + 1j * rng.normal(size=l)
            rec = transmit(d, gains, noise_seed=trial, sigma_n_sq=0.2)
            signal = np.linalg.norm(rec.output - rec.noise_fft)
            bound = np.max(np.abs(rec.transmittance_fft)) * np.linalg.norm(d)
            assert signal <= bound + 1e-12


class TestRecordSerialization:
    def test_json_round_trip(self):
        rng = np.random.default_rng(16)
        d = rng.normal(size=4) + 1j * rng.normal(size=4)
        rec = transmit(d, rng.normal(size=4) + 1j * rng.normal(size=4), 5, 0.3)
        data = rec.to_dict()
        assert all(isinstance(pair, list) and len(pair) == 2
                   for pair in data["output"])
        back = TransmissionRecord.from_dict(data)
        np.testing.assert_array_equal(back.output, rec.output)
        np.testing.assert_array_equal(back.subcarriers, rec.subcarriers)


class TestPathMatrix:
    def test_empty_sum(self):
        assert np.max(np.abs(path_matrix([], 4))) == 0.0

    def test_single_aligned_path(self):
        T = path_matrix([PathComponent(1.0, AnglePair(0.0, 0.0))], 2)
        np.testing.assert_allclose(T, 0.5 * np.ones((2, 2)), atol=1e-12)
        assert np.linalg.matrix_rank(T) == 1
        assert np.trace(T) == pytest.approx(1.0, abs=1e-12)

    def test_linear_in_gain(self):
        pair = AnglePair(0.3, 1.1)
        T1 = path_matrix([PathComponent(1.0, pair)], 4)
        T2 = path_matrix([PathComponent(2.0, pair)], 4)
        np.testing.assert_allclose(T2, 2 * T1, atol=1e-12)


class TestSubcarrierDomain:
    def test_identity_maps_to_identity(self):
        R = subcarrier_domain(np.eye(4), 4)
        assert np.max(np.abs(R.entries - np.eye(4))) < 1e-12

    def test_frobenius_preserved(self):
        rng = np.random.default_rng(17)
        T = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        R = subcarrier_domain(T)
        assert R.frobenius_norm == pytest.approx(R.source_norm, abs=1e-10)
        assert R.source_norm == pytest.approx(np.linalg.norm(T), abs=1e-12)

    def test_single_on_grid_path_is_sparse(self):
        l = 4
        pair = AnglePair(float(np.arccos(2 / l)), float(np.arccos(1 / l)))
        R = subcarrier_domain(path_matrix([PathComponent(1.0, pair)], l), l)
        mags = np.abs(R.entries)
        assert mags[1, 2] == pytest.approx(1.0, abs=1e-10)
        mags[1, 2] = 0.0
        assert np.max(mags) < 1e-10

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            subcarrier_domain(np.ones((2, 3)))

    def test_on_grid_sparsity_random_configurations(self):
        rng = np.random.default_rng(18)
        for _ in range(30):
            l = int(rng.choice([4, 8, 16]))
            k0, i0 = rng.integers(0, l, 2)
            gain = float(rng.uniform(0.1, 3.0))
            pair = AnglePair(float(np.arccos(i0 / l)), float(np.arccos(k0 / l)))
            R = subcarrier_domain(path_matrix([PathComponent(gain, pair)], l), l)
            mags = np.abs(R.entries)
            assert mags[k0, i0] == pytest.approx(gain, abs=1e-10)
            mags[k0, i0] = 0.0
            assert np.max(mags) < 1e-10

    def test_off_grid_leakage_peaks_in_nearest_bin(self):
        rng = np.random.default_rng(19)
        for _ in range(50):
            l = int(rng.choice([4, 8, 16]))
            k0 = int(rng.integers(0, l))
            delta = float(rng.uniform(-0.49, 0.49)) / l
            theta = float(np.arccos(np.clip(k0 / l + delta, -1, 1)))
            i0 = int(rng.integers(0, l))
            pair = AnglePair(float(np.arccos(i0 / l)), theta)
            R = subcarrier_domain(path_matrix([PathComponent(1.0, pair)], l), l)
            from subdom.fourier import in_domain_bin
            assert in_domain_bin(theta, k0, l)
            assert int(np.argmax(np.abs(R.entries[:, i0]))) == k0


class TestDomainTransmit:
    def test_identity_channel(self):
        d = np.arange(4, dtype=complex)
        out = domain_transmit(d, np.eye(4), np.zeros(4))
        np.testing.assert_allclose(out, d, atol=1e-15)

    def test_zero_everything(self):
        out = domain_transmit(np.zeros(3), np.zeros((3, 3)), np.zeros(3))
        assert np.max(np.abs(out)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            domain_transmit(np.zeros(3), np.zeros((4, 4)), np.zeros(4))
        with pytest.raises(ValueError):
            domain_transmit(np.zeros(4), np.zeros((4, 4)), np.zeros(3))

    def test_consistency_with_fourier_law(self):
        # for a flat (diagonal) channel the domain output and the Fourier
        # output describe the same transmission in rotated frames:
        # y_domain - F(noise) = U^H (y - F(noise))
        rng = np.random.default_rng(20)
        for _ in range(10):
            l = 8
            d = rng.normal(size=l) + 1j * rng.normal(size=l)
            gains = rng.normal(size=l) + 1j * rng.normal(size=l)
            rec = transmit(d, gains, noise_seed=int(rng.integers(1e6)), sigma_n_sq=0.3)
            U = build_cvqft(l).entries
            left = rec.domain_output - rec.noise_fft
            right = U.conj().T @ (rec.output - rec.noise_fft)
            assert np.max(np.abs(left - right)) < 1e-10


class TestStatisticalModel:
    def test_shape_and_determinism(self):
        M = statistical_model(3, 5, 0.5, 7)
        assert M.shape == (3, 5)
        assert np.array_equal(M, statistical_model(3, 5, 0.5, 7))

    def test_per_entry_variance(self):
        # i.i.d. CN(0, sigma) entries: per-entry quadrature variance check
        # over 1e5 samples of the underlying ensemble
        samples = GaussianEnsemble(16, 1.3, 23).sample_many(100_000)
        np.testing.assert_allclose(np.var(samples.real, axis=0), 1.3, rtol=0.03)
        np.testing.assert_allclose(np.var(samples.imag, axis=0), 1.3, rtol=0.03)
        np.testing.assert_allclose(np.mean(np.abs(samples) ** 2, axis=0),
                                   2 * 1.3, rtol=0.03)
