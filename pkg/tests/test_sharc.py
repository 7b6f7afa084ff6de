import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hamiltonian_dense
from sharc_vqe.ansatz import BasisPrep, Circuit, PauliRotation, bind
from sharc_vqe.pauli import PauliString, PauliSum, PauliTerm, is_easy
from sharc_vqe.sharc import (
    RefinedOperator,
    RefinementError,
    SharcConfig,
    SignificanceWarning,
    assemble_refined_partial,
    corrected_energy,
    fit_refined_operator,
    k_ph,
    partition,
    prepare_sharc,
    select_refinement_strings,
)
from sharc_vqe.statevector import expectation_exact


def _multiset(h):
    return sorted((t.string.label, t.coefficient) for t in h.terms)


class TestPartition:
    def test_h2_counts(self, h2):
        assert partition(h2, 0.01).counts == {"es": 11, "ei": 0, "ds": 4, "di": 0}

    def test_hubbard_counts(self, hubbard):
        assert partition(hubbard, 0.01).counts == {"es": 7, "ei": 0, "ds": 4, "di": 0}

    def test_tiny_cutoff_makes_everything_significant(self, h2):
        c = partition(h2, 5e-324).counts
        assert c["ei"] == 0 and c["di"] == 0

    def test_huge_cutoff_makes_everything_insignificant(self, h2):
        c = partition(h2, 1e6).counts
        assert c["es"] == 0 and c["ds"] == 0

    def test_offset_kept_once(self, h2):
        rep = partition(h2, 0.01)
        assert rep.h_es.offset == h2.offset
        assert rep.h_ds.offset == rep.h_di.offset == rep.h_ei.offset == 0

    def test_hard_blocks_are_hard(self, h2):
        rep = partition(h2, 0.01)
        assert all(is_easy(s) for s in rep.h_p.strings)
        assert not any(is_easy(s) for s in rep.h_d.strings)

    @pytest.mark.parametrize("c0", [0.0, -1.0])
    def test_nonpositive_cutoff(self, h2, c0):
        with pytest.raises(ValueError):
            partition(h2, c0)

    @settings(max_examples=100)
    @given(
        st.lists(
            st.tuples(st.text("IXYZ", min_size=3, max_size=3), st.floats(-2, 2, allow_nan=False)),
            min_size=1, max_size=12,
        ),
        st.floats(1e-4, 1.0),
    )
    def test_completeness(self, terms, c0):
        h = PauliSum(3, tuple([PauliTerm(c, PauliString(s)) for s, c in terms]))
        rep = partition(h, c0)
        assert _multiset(rep.total()) == _multiset(h)
        assert sum(rep.counts.values()) == len(h)


class TestRefinementStrings:
    @pytest.mark.parametrize("n, occ, label", [
        (4, {0, 2}, "ZIZI"),
        (6, {0, 1, 3, 4}, "ZZIZZI"),
        (8, {0, 1, 2, 4, 5, 6}, "ZZZIZZZI"),
        (10, {0, 1, 2, 5, 6, 7}, "ZZZIIZZZII"),
    ])
    def test_occupation_string(self, n, occ, label):
        assert select_refinement_strings(None, occ, 1, n_qubits=n) == [PauliString(label)]

    def test_second_string_is_heaviest_easy(self, h2):
        strings = select_refinement_strings(h2, {0, 2}, 2)
        pool = [t for t in h2.terms if is_easy(t.string) and t.string.weight > 0 and t.string.label != "ZIZI"]
        heaviest = max(pool, key=lambda t: abs(t.coefficient))
        assert strings == [PauliString("ZIZI"), heaviest.string]

    def test_too_many_strings(self, h2):
        with pytest.raises(ValueError):
            select_refinement_strings(h2, {0, 2}, 50)

    def test_zero_strings(self, h2):
        with pytest.raises(ValueError):
            select_refinement_strings(h2, {0, 2}, 0)


@pytest.fixture(scope="module")
def setup(h2, h2_circuit):
    return partition(h2, 0.01), h2_circuit


class TestFit:
    def test_one_point_interpolates(self, setup):
        rep, circ = setup
        ref = fit_refined_operator(rep.h_d, circ, [PauliString("ZIZI")], 1, 0.1)
        (pt,) = ref.fit_points
        amps = bind(circ, np.array(pt.theta)).amplitudes
        assert expectation_exact(amps, ref.as_sum()) == pytest.approx(expectation_exact(amps, rep.h_d), abs=1e-12)
        assert ref.residuals() == pytest.approx([0.0], abs=1e-12)

    def test_h2_coefficient_sign_and_scale(self, setup):
        rep, circ = setup
        (c,) = fit_refined_operator(rep.h_d, circ, [PauliString("ZIZI")], 1, 0.1).coefficients
        # reference value -0.03594 for a randomly perturbed fit point
        assert c < 0 and 0.1 * 0.03594 < abs(c) < 10 * 0.03594

    def test_two_points_average(self, setup):
        rep, circ = setup
        ref = fit_refined_operator(rep.h_d, circ, [PauliString("ZIZI")], 2, 0.1)
        ratios = [p.h_d / p.strings[0] for p in ref.fit_points]
        assert [p.theta[0] for p in ref.fit_points] == pytest.approx([0.1, 0.2])
        assert ref.coefficients[0] == pytest.approx(np.mean(ratios), abs=1e-14)
        assert ratios[0] != pytest.approx(ratios[1], abs=1e-6)

    def test_least_squares_two_strings(self, setup, h2):
        rep, circ = setup
        strings = select_refinement_strings(h2, {0, 2}, 2)
        ref = fit_refined_operator(rep.h_d, circ, strings, 2, 0.1)
        assert ref.residuals() == pytest.approx([0.0, 0.0], abs=1e-10)

    def test_surrogate_must_be_diagonal(self):
        with pytest.raises(ValueError):
            RefinedOperator(4, (PauliString("XIII"),), (1.0,), 1, 0.1)

    def test_degenerate_denominator(self):
        # <Z> = cos(theta) vanishes at the fit point theta = pi/2
        circ = Circuit(1, (BasisPrep(()), PauliRotation(PauliString("Y"), 0)), 1)
        h_d = PauliSum(1, (PauliTerm(0.2, PauliString("X")),))
        with pytest.raises(RefinementError):
            fit_refined_operator(h_d, circ, [PauliString("Z")], 1, np.pi / 2)

    def test_bad_arguments(self, setup):
        rep, circ = setup
        with pytest.raises(ValueError):
            fit_refined_operator(rep.h_d, circ, [PauliString("ZIZI")], 0, 0.1)
        with pytest.raises(ValueError):
            fit_refined_operator(rep.h_d, circ, [PauliString("ZIZI")], 1, 0.0)

    def test_significance_warning(self, setup):
        rep, circ = setup
        with pytest.warns(SignificanceWarning):
            fit_refined_operator(rep.h_d, circ, [PauliString("ZIZI")], 1, 0.1, significance=1e-6)


class TestAssembly:
    def test_h2_term_count_and_diagonal(self, h2, h2_circuit, h2_fixture):
        setup = prepare_sharc(h2, h2_circuit, SharcConfig(i=1, j=1), h2_fixture.occupied_modes)
        assert setup.refined.strings == (PauliString("ZIZI"),)
        assert len(setup.h_refined_partial) == 11
        assert all(is_easy(s) for s in setup.h_refined_partial.strings)

    def test_no_surrogate_is_h_p(self, h2):
        rep = partition(h2, 0.01)
        assert _multiset(assemble_refined_partial(rep, RefinedOperator.empty(4))) == _multiset(rep.h_p)

    def test_hubbard_easy_partial(self, hubbard):
        assert len(partition(hubbard, 0.01).h_p) == 7

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SharcConfig(i=1, j=0)
        with pytest.raises(ValueError):
            SharcConfig(i=-1, j=-1)


class TestCorrection:
    @pytest.mark.parametrize("ij", [(0, 0), (1, 1), (1, 2), (2, 2)])
    def test_telescoping(self, h2, h2_circuit, h2_fixture, ij):
        setup = prepare_sharc(h2, h2_circuit, SharcConfig(i=ij[0], j=ij[1]), h2_fixture.occupied_modes)
        dense = hamiltonian_dense([(c, s.label) for s, c in h2.items()], 4, h2.offset)
        rng = np.random.default_rng(sum(ij))
        for _ in range(100):
            theta = rng.uniform(-np.pi, np.pi, 3)
            psi = bind(h2_circuit, theta).amplitudes
            ref = float(np.real(np.vdot(psi, dense @ psi)))
            assert setup.corrected(theta, h2_circuit) == pytest.approx(ref, abs=1e-10)

    def test_wrong_theta_length(self, h2, h2_circuit):
        rep = partition(h2, 0.01)
        with pytest.raises(ValueError):
            corrected_energy(np.zeros(2), h2_circuit, rep.h_p, RefinedOperator.empty(4), rep.h_d)


class TestKph:
    def test_hubbard_easy(self, hubbard):
        assert k_ph(partition(hubbard, 0.01).h_p, hubbard) == pytest.approx(10 / 12, abs=1e-12)

    def test_full(self, hubbard):
        assert k_ph(hubbard, hubbard) == 1.0

    def test_hopping_additions(self, hubbard):
        easy = partition(hubbard, 0.01).h_p
        hops = [t for t in hubbard.terms if not is_easy(t.string)]
        one = easy + PauliSum(4, tuple(hops[:1]))
        two = easy + PauliSum(4, tuple(hops[:2]))
        assert k_ph(one, hubbard) == pytest.approx(10.5 / 12, abs=1e-12)
        assert k_ph(two, hubbard) == pytest.approx(11 / 12, abs=1e-12)

    def test_monotone(self, hubbard):
        terms = sorted(hubbard.terms, key=lambda t: t.string.label)
        values = [k_ph(PauliSum(4, tuple(terms[:m])), hubbard) for m in range(1, len(terms) + 1)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert values[-1] == pytest.approx(1.0)

    def test_not_subset(self, hubbard):
        with pytest.raises(ValueError):
            k_ph(PauliSum(4, (PauliTerm(1.0, PauliString("XXXX")),)), hubbard)
