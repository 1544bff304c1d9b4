"""Statevector kernel correctness against dense-matrix oracles."""
import numpy as np
import pytest

from secalab import (
    CapacityError,
    PauliObservable,
    PauliString,
    StateVector,
    apply_cz,
    apply_rotation,
    expectation,
    fidelity,
    init_zero,
    observable_variance,
    pauli,
    reduced_purity,
    sample_haar_state,
    to_matrix,
)
from secalab.metrics import fidelity_kl_divergence

from _oracles import (
    dense_expectation,
    dense_variance,
    random_observable,
    random_state,
    reduced_density_matrix,
    rotation_matrix,
)

BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


class TestInitZero:
    def test_one_qubit(self):
        np.testing.assert_array_equal(init_zero(1).amplitudes, [1, 0])

    def test_two_qubits(self):
        np.testing.assert_array_equal(init_zero(2).amplitudes, [1, 0, 0, 0])

    def test_three_qubits_normalized(self):
        s = init_zero(3)
        assert s.amplitudes[0] == 1.0
        assert abs(s.norm_sq() - 1.0) < 1e-15

    @pytest.mark.parametrize("n", [0, -1, 25])
    def test_capacity_guard(self, n):
        with pytest.raises(CapacityError):
            init_zero(n)


class TestApplyRotation:
    def test_zero_angle_is_identity(self):
        rng = np.random.default_rng(3)
        s = StateVector.from_amplitudes(random_state(rng, 3))
        before = s.amplitudes.copy()
        apply_rotation(s, "z", 1, 0.0)
        np.testing.assert_allclose(s.amplitudes, before, atol=1e-15)

    def test_x_pi_on_zero(self):
        s = apply_rotation(init_zero(1), "x", 0, np.pi)
        np.testing.assert_allclose(s.amplitudes, [0, -1j], atol=1e-12)

    def test_y_half_pi_matches_expm_oracle(self):
        expected = rotation_matrix("y", np.pi / 2) @ np.array([1, 0], dtype=complex)
        s = apply_rotation(init_zero(1), "y", 0, np.pi / 2)
        np.testing.assert_allclose(s.amplitudes, expected, atol=1e-12)
        np.testing.assert_allclose(s.amplitudes, [np.cos(np.pi / 4), np.sin(np.pi / 4)], atol=1e-12)

    @pytest.mark.parametrize("axis", ["x", "y", "z"])
    def test_random_rotations_match_expm_oracle(self, axis):
        rng = np.random.default_rng(11)
        for _ in range(5):
            n = int(rng.integers(1, 5))
            qubit = int(rng.integers(0, n))
            angle = float(rng.uniform(-2 * np.pi, 2 * np.pi))
            amps = random_state(rng, n)
            mat = rotation_matrix(axis, angle)
            full = np.ones((1, 1), dtype=complex)
            for q in reversed(range(n)):
                full = np.kron(full, mat if q == qubit else np.eye(2))
            expected = full @ amps
            s = StateVector.from_amplitudes(amps)
            apply_rotation(s, axis, qubit, angle)
            np.testing.assert_allclose(s.amplitudes, expected, atol=1e-12)

    def test_inverse_rotation_restores_state(self):
        rng = np.random.default_rng(7)
        s = StateVector.from_amplitudes(random_state(rng, 4))
        before = s.amplitudes.copy()
        apply_rotation(s, "y", 2, 1.3)
        apply_rotation(s, "y", 2, -1.3)
        np.testing.assert_allclose(s.amplitudes, before, atol=1e-12)

    def test_norm_preserved(self):
        rng = np.random.default_rng(5)
        s = init_zero(5)
        for _ in range(50):
            axis = str(rng.choice(["x", "y", "z"]))
            apply_rotation(s, axis, int(rng.integers(0, 5)), float(rng.uniform(0, 7)))
        assert abs(s.norm_sq() - 1.0) < 1e-12

    def test_bad_qubit_raises(self):
        with pytest.raises(IndexError):
            apply_rotation(init_zero(2), "x", 2, 0.1)

    def test_bad_axis_raises(self):
        with pytest.raises(ValueError):
            apply_rotation(init_zero(1), "w", 0, 0.1)


class TestApplyCz:
    def test_fixes_00(self):
        s = apply_cz(init_zero(2), 0, 1)
        np.testing.assert_array_equal(s.amplitudes, [1, 0, 0, 0])

    def test_phases_11(self):
        s = StateVector.from_amplitudes([0, 0, 0, 1])
        apply_cz(s, 0, 1)
        np.testing.assert_array_equal(s.amplitudes, [0, 0, 0, -1])

    def test_plus_plus(self):
        s = StateVector.from_amplitudes(np.full(4, 0.5))
        apply_cz(s, 0, 1)
        expected = StateVector.from_amplitudes(np.array([0.5, 0.5, 0.5, -0.5]))
        assert abs(fidelity(s, expected) - 1.0) < 1e-12

    def test_symmetric_exactly(self):
        rng = np.random.default_rng(2)
        amps = random_state(rng, 4)
        a = apply_cz(StateVector.from_amplitudes(amps), 1, 3)
        b = apply_cz(StateVector.from_amplitudes(amps), 3, 1)
        np.testing.assert_array_equal(a.amplitudes, b.amplitudes)

    def test_involution(self):
        rng = np.random.default_rng(4)
        amps = random_state(rng, 3)
        s = StateVector.from_amplitudes(amps)
        apply_cz(s, 0, 2)
        apply_cz(s, 0, 2)
        np.testing.assert_array_equal(s.amplitudes, amps)

    def test_same_qubit_rejected(self):
        with pytest.raises(ValueError):
            apply_cz(init_zero(2), 1, 1)


class TestExpectation:
    def test_z_on_zero(self):
        obs = PauliObservable((pauli(1.0, "Z"),))
        assert expectation(init_zero(1), obs) == pytest.approx(1.0)

    def test_zz_on_bell(self):
        obs = PauliObservable((pauli(1.0, "ZZ"),))
        s = StateVector.from_amplitudes(BELL)
        assert expectation(s, obs) == pytest.approx(1.0)

    def test_random_matches_dense_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            amps = random_state(rng, 3)
            obs = random_observable(rng, 3, 5)
            got = expectation(StateVector.from_amplitudes(amps), obs)
            assert got == pytest.approx(dense_expectation(amps, obs), abs=1e-10)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            expectation(init_zero(2), PauliObservable((pauli(1.0, "Z"),)))


class TestObservableVariance:
    def test_eigenstate_gives_zero(self):
        obs = PauliObservable((pauli(2.0, "Z"),))
        assert observable_variance(init_zero(1), obs) == pytest.approx(0.0, abs=1e-12)

    def test_plus_state_z_variance(self):
        s = StateVector.from_amplitudes(np.array([1, 1]) / np.sqrt(2))
        obs = PauliObservable((pauli(1.0, "Z"),))
        assert observable_variance(s, obs) == pytest.approx(1.0)

    def test_random_matches_dense_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            amps = random_state(rng, 3)
            obs = random_observable(rng, 3, 4)
            got = observable_variance(StateVector.from_amplitudes(amps), obs)
            assert got == pytest.approx(dense_variance(amps, obs), abs=1e-9)
            assert got > -1e-9


class TestFidelity:
    def test_identical(self):
        assert fidelity(init_zero(1), init_zero(1)) == pytest.approx(1.0)

    def test_orthogonal(self):
        one = StateVector.from_amplitudes([0, 1])
        assert fidelity(init_zero(1), one) == pytest.approx(0.0)

    def test_zero_plus(self):
        plus = StateVector.from_amplitudes(np.array([1, 1]) / np.sqrt(2))
        assert fidelity(init_zero(1), plus) == pytest.approx(0.5)

    def test_symmetric(self):
        rng = np.random.default_rng(8)
        a = StateVector.from_amplitudes(random_state(rng, 3))
        b = StateVector.from_amplitudes(random_state(rng, 3))
        assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-14)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(init_zero(1), init_zero(2))


class TestReducedPurity:
    def test_product_state(self):
        s = StateVector.from_amplitudes([0, 1, 0, 0])  # |01>: qubit0=1, qubit1=0
        assert reduced_purity(s, 0) == pytest.approx(1.0)
        assert reduced_purity(s, 1) == pytest.approx(1.0)

    def test_bell_state(self):
        s = StateVector.from_amplitudes(BELL)
        assert reduced_purity(s, 0) == pytest.approx(0.5)
        assert reduced_purity(s, 1) == pytest.approx(0.5)

    def test_random_matches_partial_trace_oracle(self):
        rng = np.random.default_rng(14)
        for _ in range(8):
            amps = random_state(rng, 3)
            s = StateVector.from_amplitudes(amps)
            for q in range(3):
                rho = reduced_density_matrix(amps, 3, q)
                expected = float(np.trace(rho @ rho).real)
                assert reduced_purity(s, q) == pytest.approx(expected, abs=1e-10)
                assert 0.5 - 1e-10 <= reduced_purity(s, q) <= 1.0 + 1e-10

    def test_bad_index(self):
        with pytest.raises(IndexError):
            reduced_purity(init_zero(2), 2)


class TestSampleHaarState:
    def test_normalized(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            s = sample_haar_state(3, rng)
            assert abs(s.norm_sq() - 1.0) < 1e-12

    def test_mean_z_vanishes(self):
        rng = np.random.default_rng(1)
        obs = PauliObservable((pauli(1.0, "Z"),))
        mean = np.mean([expectation(sample_haar_state(1, rng), obs) for _ in range(10_000)])
        assert abs(mean) < 0.05

    def test_pairwise_fidelities_match_haar_density(self):
        rng = np.random.default_rng(2)
        fids = [
            fidelity(sample_haar_state(2, rng), sample_haar_state(2, rng))
            for _ in range(10_000)
        ]
        assert fidelity_kl_divergence(np.array(fids), dim=4, bins=50) < 0.05

    def test_invariant_under_fixed_unitary(self):
        # fidelity against an arbitrary fixed state must follow the same density
        rng = np.random.default_rng(3)
        anchor = sample_haar_state(2, np.random.default_rng(999))
        fids = [fidelity(anchor, sample_haar_state(2, rng)) for _ in range(10_000)]
        assert fidelity_kl_divergence(np.array(fids), dim=4, bins=50) < 0.05

    def test_capacity(self):
        with pytest.raises(CapacityError):
            sample_haar_state(13, np.random.default_rng(0))


class TestPauliTypes:
    def test_bad_letter_rejected(self):
        with pytest.raises(ValueError):
            PauliString(1.0, ("Q",))

    def test_observable_needs_consistent_sizes(self):
        with pytest.raises(ValueError):
            PauliObservable((pauli(1.0, "Z"), pauli(1.0, "ZZ")))

    def test_empty_observable_rejected(self):
        with pytest.raises(ValueError):
            PauliObservable(())

    def test_to_matrix_matches_kron_oracle(self):
        rng = np.random.default_rng(15)
        obs = random_observable(rng, 3, 4)
        from _oracles import dense_observable

        np.testing.assert_allclose(to_matrix(obs), dense_observable(obs), atol=1e-14)
