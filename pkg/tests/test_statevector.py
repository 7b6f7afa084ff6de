import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hamiltonian_dense, rotation_dense
from sharc_vqe.ansatz import Circuit, BasisPrep, Cnot, PauliRotation, TrajectorySampler
from sharc_vqe.pauli import PauliString, PauliSum, is_easy, qubitwise_commutes
from sharc_vqe.statevector import (
    Grouping,
    NoiseSpec,
    QuantumState,
    ShotPlan,
    analytic_mse,
    apply_depolarizing,
    apply_pauli_rotation,
    expectation_exact,
    expectation_sampled,
    measurement_groups,
    pauli_expectations,
    prepare_basis_state,
)


def random_state(n, rng):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return QuantumState(n, v / np.linalg.norm(v))


def random_sum(n, n_terms, rng):
    labels = ["".join(rng.choice(list("IXYZ"), n)) for _ in range(n_terms)]
    return PauliSum.from_list([(float(rng.normal()), s) for s in labels])


class TestBasisStates:
    @pytest.mark.parametrize("n,occ,index", [(4, {0, 2}, 5), (4, set(), 0), (6, {0, 1, 3, 4}, 27)])
    def test_index(self, n, occ, index):
        amps = prepare_basis_state(n, occ).amplitudes
        assert amps[index] == 1 and np.count_nonzero(amps) == 1

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            prepare_basis_state(2, {2})


class TestRotation:
    def test_zero_angle(self):
        s = random_state(3, np.random.default_rng(0))
        np.testing.assert_allclose(apply_pauli_rotation(s, PauliString("XYZ"), 0.0).amplitudes, s.amplitudes)

    def test_z_is_phase(self):
        out = apply_pauli_rotation(prepare_basis_state(1, ()), PauliString("Z"), 0.7)
        assert out.amplitudes[0] == pytest.approx(np.exp(-0.35j))

    def test_x_pi_flips(self):
        out = apply_pauli_rotation(prepare_basis_state(1, ()), PauliString("X"), np.pi)
        np.testing.assert_allclose(out.amplitudes, [0, -1j], atol=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            apply_pauli_rotation(prepare_basis_state(2, ()), PauliString("X"), 0.1)

    @settings(max_examples=100)
    @given(st.integers(1, 4).flatmap(lambda n: st.text("IXYZ", min_size=n, max_size=n)),
           st.floats(-10, 10), st.integers(0, 2**32 - 1))
    def test_matches_matrix_exponential_and_keeps_norm(self, label, angle, seed):
        s = random_state(len(label), np.random.default_rng(seed))
        out = apply_pauli_rotation(s, PauliString(label), angle)
        np.testing.assert_allclose(out.amplitudes, rotation_dense(label, angle) @ s.amplitudes, atol=1e-10)
        assert out.norm == pytest.approx(1.0, abs=1e-10)


class TestExactExpectation:
    def test_identity(self):
        s = random_state(4, np.random.default_rng(1))
        assert expectation_exact(s, PauliSum.from_list([(1.0, "IIII")])) == pytest.approx(1.0)

    def test_diagonal_on_basis_state(self):
        h = PauliSum.from_list([(0.17218, "IIIZ")])
        assert expectation_exact(prepare_basis_state(4, {0, 2}), h) == pytest.approx(-0.17218)

    def test_h2_ground_vector(self, h2, h2_exact):
        assert expectation_exact(h2_exact[1][:, 0], h2) == pytest.approx(-1.1373, abs=5e-4)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            expectation_exact(prepare_basis_state(3, ()), PauliSum.from_list([(1.0, "ZZ")]))

    def test_matches_dense_quadratic_form(self):
        rng = np.random.default_rng(2)
        for case in range(120):
            n = 1 + case % 6
            h = random_sum(n, 6, rng)
            s = random_state(n, rng)
            m = hamiltonian_dense([(c, p.label) for p, c in h.items()], n, h.offset)
            ref = np.vdot(s.amplitudes, m @ s.amplitudes).real
            assert expectation_exact(s, h) == pytest.approx(ref, abs=1e-9)


class TestSampledExpectation:
    def test_identity_is_exact(self):
        e, var = expectation_sampled(random_state(2, np.random.default_rng(0)),
                                     PauliSum.from_list([(1.0, "II")]), ShotPlan(10))
        assert (e, var) == (1.0, 0.0)

    @pytest.mark.parametrize("label,prep", [("ZIZ", {0}), ("XX", None), ("YZ", None)])
    def test_eigenstate_has_no_spread(self, label, prep):
        n = len(label)
        if prep is not None:
            state = prepare_basis_state(n, prep)
        else:
            m = hamiltonian_dense([(1.0, label)], n)
            state = QuantumState(n, np.linalg.eigh(m)[1][:, -1])
        exact = expectation_exact(state, PauliSum.from_list([(1.0, label)]))
        e, var = expectation_sampled(state, PauliSum.from_list([(1.0, label)]), ShotPlan(100), seed=3)
        assert e == pytest.approx(exact, abs=1e-12) and var == pytest.approx(0.0, abs=1e-12)

    def test_deterministic(self, h2):
        s = random_state(4, np.random.default_rng(5))
        a = expectation_sampled(s, h2, ShotPlan(512), NoiseSpec(), seed=11)
        b = expectation_sampled(s, h2, ShotPlan(512), NoiseSpec(), seed=11)
        assert a == b
        assert expectation_sampled(s, h2, ShotPlan(512), seed=12) != a

    def test_error_bound(self, h2):
        s = random_state(4, np.random.default_rng(6))
        exact = expectation_exact(s, h2)
        shots = 1000
        bound = 5 * np.sqrt(np.sum(h2.coefficients**2) / shots)
        inside = [abs(expectation_sampled(s, h2, ShotPlan(shots), seed=k)[0] - exact) < bound
                  for k in range(200)]
        assert np.mean(inside) >= 0.99

    def test_grouping_does_not_bias(self, h2, h2_exact):
        state = QuantumState(4, h2_exact[1][:, 0])
        exact = expectation_exact(state, h2)
        for g in Grouping:
            vals = [expectation_sampled(state, h2, ShotPlan(4096, g), seed=k)[0] for k in range(40)]
            assert np.mean(vals) == pytest.approx(exact, abs=3e-3)

    def test_readout_flip_shrinks_parity(self):
        state = prepare_basis_state(1, ())
        h = PauliSum.from_list([(1.0, "Z")])
        e, _ = expectation_sampled(state, h, ShotPlan(200_000), NoiseSpec(0, 0, 0.1), seed=0)
        assert e == pytest.approx(1 - 2 * 0.1, abs=5e-3)

    def test_analytic_mse_zero_on_eigenstate(self):
        h = PauliSum.from_list([(0.5, "ZI"), (0.2, "ZZ"), (1.0, "II")])
        assert np.all(analytic_mse(h, prepare_basis_state(2, {1}).amplitudes, [1, 10]) == 0)


class TestGrouping:
    def test_ungrouped_counts_every_term(self, h2):
        assert len(measurement_groups(h2, Grouping.UNGROUPED)) == 15

    def test_easy_group(self, h2):
        groups = measurement_groups(h2, Grouping.EASY_SINGLE_GROUP)
        assert len(groups) == 5
        assert len(groups[0].term_indices) == 11 and not groups[0].needs_rotation

    def test_qubitwise_groups_partition_terms(self, h2):
        groups = measurement_groups(h2, Grouping.QUBITWISE_COMMUTING)
        seen = sorted(i for g in groups for i in g.term_indices)
        assert seen == list(range(len(h2)))
        s = h2.strings
        for g in groups:
            assert all(qubitwise_commutes(s[a], s[b]) for a in g.term_indices for b in g.term_indices)
        assert len(groups) < 15

    def test_diagonal_sum_is_one_group(self, h2):
        easy = h2.subset([s for s in h2.strings if is_easy(s)])
        assert len(measurement_groups(easy, Grouping.EASY_SINGLE_GROUP)) == 1


class TestDepolarizing:
    def test_zero_probability(self):
        s = random_state(2, np.random.default_rng(0))
        out, hit = apply_depolarizing(s, NoiseSpec(p1=0.0), 1, [0], np.random.default_rng(1))
        assert out is s and not hit

    def test_full_depolarization_mixes(self):
        rng = np.random.default_rng(4)
        spec = NoiseSpec(p1=1.0)
        z = PauliSum.from_list([(1.0, "Z")])
        vals = [expectation_exact(apply_depolarizing(prepare_basis_state(1, ()), spec, 1, [0], rng)[0], z)
                for _ in range(10_000)]
        assert abs(np.mean(vals)) < 0.05

    def test_bad_arity(self):
        with pytest.raises(ValueError):
            apply_depolarizing(prepare_basis_state(2, ()), NoiseSpec(), 2, [0], np.random.default_rng())

    def test_two_qubit_errors_scale_with_gate_count(self):
        def chain(n_cnots):
            ins = (BasisPrep(()),) + tuple(Cnot(0, 1) for _ in range(n_cnots))
            return Circuit(2, ins, 0)

        noise = NoiseSpec(p1=0.0, p2=0.05, readout_flip=0.0)
        counts = []
        for n_cnots in (4, 8, 16):
            sampler = TrajectorySampler(chain(n_cnots), [], noise)
            rng = np.random.default_rng(9)
            for _ in range(4000):
                sampler.sample(rng)
            counts.append(sampler.two_qubit_errors)
        # identity draws (1/16) are not counted as errors
        expected = [4000 * n * 0.05 * 15 / 16 for n in (4, 8, 16)]
        for got, exp in zip(counts, expected):
            assert got == pytest.approx(exp, rel=0.1)

    def test_single_qubit_rotation_errors_only_with_p1(self):
        ins = (BasisPrep(()), PauliRotation(PauliString("IY"), 0))
        sampler = TrajectorySampler(Circuit(2, ins, 1), [0.3], NoiseSpec(p1=0.0, p2=1.0))
        rng = np.random.default_rng(0)
        for _ in range(100):
            sampler.sample(rng)
        assert sampler.errors_applied == 0


def test_pauli_expectations_in_term_order(h2):
    amps = prepare_basis_state(4, {0, 1}).amplitudes
    vals = pauli_expectations(amps, h2)
    for (s, _), v in zip(h2.items(), vals):
        expected = 0.0 if not is_easy(s) else (-1) ** bin(s.z_mask & 0b0011).count("1")
        assert v == pytest.approx(expected)
