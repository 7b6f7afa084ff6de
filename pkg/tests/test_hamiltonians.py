import numpy as np
import pytest

from oracles import (
    annihilator_jw,
    free_fermion_ground,
    hamiltonian_dense,
    hubbard_dense,
    parity_permutation,
)
from sharc_vqe.hamiltonians import (
    FermionOp,
    HamiltonianFileError,
    HubbardSpec,
    annihilate,
    build_hubbard,
    create,
    exact_spectrum,
    jordan_wigner,
    load_fixture,
    load_hamiltonian,
    map_operator,
    number,
    number_operator,
    occupied_qubits,
    parse_hamiltonian,
    save_hamiltonian,
)
from sharc_vqe.pauli import to_dense_matrix

HUBBARD_TABLE = {
    "IIII": 2.5, "IIZI": -1.25, "IIIZ": -1.25, "IIZZ": 1.25, "ZIII": -1.25, "IZII": -1.25,
    "ZZII": 1.25, "IYZY": -0.5, "IXZX": -0.5, "YZYI": -0.5, "XZXI": -0.5,
}


def dense(op_sum):
    return to_dense_matrix(op_sum)


class TestJordanWigner:
    def test_number_operator(self):
        h = jordan_wigner(number(0), 1)
        assert {s.label: c for s, c in h.items()} == pytest.approx({"I": 0.5, "Z": -0.5})

    def test_hopping(self):
        h = jordan_wigner(create(0) * annihilate(1) + create(1) * annihilate(0), 2)
        assert {s.label: c for s, c in h.items()} == pytest.approx({"XX": 0.5, "YY": 0.5})

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_ladder_matches_occupation_basis(self, n):
        # JW keeps occupation = computational basis, so matrices agree directly
        for p in range(n):
            image = map_operator(annihilate(p) + create(p), n)
            np.testing.assert_allclose(dense(image), annihilator_jw(p, n) + annihilator_jw(p, n).T, atol=1e-12)

    @pytest.mark.parametrize("mapping", ["jordan_wigner", "parity"])
    def test_anticommutation_relations(self, mapping):
        n = 4
        from sharc_vqe.hamiltonians.fermion import qubit_image
        from sharc_vqe.pauli import string_matrix

        def mat(op):
            return sum(c * string_matrix(s) for s, c in qubit_image(op, n, mapping).items())

        a = [mat(annihilate(p)) for p in range(n)]
        ad = [mat(create(p)) for p in range(n)]
        eye = np.eye(1 << n)
        for p in range(n):
            for q in range(n):
                np.testing.assert_allclose(a[p] @ ad[q] + ad[q] @ a[p], eye * (p == q), atol=1e-12)
                np.testing.assert_allclose(a[p] @ a[q] + a[q] @ a[p], 0 * eye, atol=1e-12)

    def test_parity_mapping_matches_permuted_occupation_basis(self):
        n = 4
        op = create(0) * annihilate(3) + create(3) * annihilate(0) + number(1) * number(2).scale(0.7)
        perm = parity_permutation(n)
        a = [annihilator_jw(p, n) for p in range(n)]
        ref = a[0].T @ a[3] + a[3].T @ a[0] + 0.7 * (a[1].T @ a[1]) @ (a[2].T @ a[2])
        np.testing.assert_allclose(dense(map_operator(op, n, "parity")), perm @ ref @ perm.T, atol=1e-12)

    def test_hermitian_input_gives_hermitian_matrix(self):
        op = (create(0) * annihilate(2)).scale(0.3) + (create(2) * annihilate(0)).scale(0.3) + number(1)
        m = dense(jordan_wigner(op, 3))
        np.testing.assert_allclose(m, m.conj().T, atol=1e-12)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            jordan_wigner(create(0) * annihilate(1), 2)

    def test_mode_out_of_range(self):
        with pytest.raises(ValueError):
            jordan_wigner(number(3), 2)

    @pytest.mark.parametrize("mapping,modes,qubits", [
        ("jordan_wigner", (0, 2), [0, 2]), ("parity", (0, 2), [0, 1]), ("parity", (0,), [0, 1, 2, 3])])
    def test_occupied_qubits(self, mapping, modes, qubits):
        assert occupied_qubits(modes, 4, mapping) == qubits


class TestHubbard:
    def test_two_site_table(self):
        h = build_hubbard(HubbardSpec(2, -1.0, 5.0))
        got = {s.label: c for s, c in h.items()}
        assert set(got) == set(HUBBARD_TABLE)
        for label, c in HUBBARD_TABLE.items():
            assert abs(got[label] - c) < 1e-12

    def test_matches_bundled_fixture(self):
        assert build_hubbard(HubbardSpec(2, -1.0, 5.0)) == load_fixture("hubbard2")

    def test_single_site(self):
        h = build_hubbard(HubbardSpec(1, t=-3.0, U=2.0))
        assert {s.label: c for s, c in h.items()} == pytest.approx(
            {"II": 0.5, "IZ": -0.5, "ZI": -0.5, "ZZ": 0.5})

    def test_free_fermions(self):
        h = build_hubbard(HubbardSpec(3, -1.0, 0.0))
        assert exact_spectrum(h, 1)[0][0] == pytest.approx(free_fermion_ground(3, -1.0), abs=1e-10)

    @pytest.mark.parametrize("sites,t,u", [(2, -1.0, 5.0), (3, -0.7, 2.0)])
    def test_matches_occupation_basis_oracle(self, sites, t, u):
        np.testing.assert_allclose(dense(build_hubbard(HubbardSpec(sites, t, u))), hubbard_dense(sites, t, u),
                                   atol=1e-12)

    def test_two_construction_paths_agree(self):
        literal = hamiltonian_dense([(c, s) for s, c in HUBBARD_TABLE.items()], 4)
        built = exact_spectrum(build_hubbard(HubbardSpec(2, -1.0, 5.0)), 1)[0][0]
        assert built == pytest.approx(np.linalg.eigvalsh(literal)[0], abs=1e-10)

    def test_conserves_particle_number(self):
        m = dense(build_hubbard(HubbardSpec(2, -1.0, 5.0)))
        n = dense(number_operator(4))
        assert np.linalg.norm(m @ n - n @ m) < 1e-10

    def test_invalid(self):
        with pytest.raises(ValueError):
            HubbardSpec(0)
        with pytest.raises(ValueError):
            HubbardSpec(2, boundary="periodic")


class TestFixtures:
    def test_h2_has_fifteen_terms(self, h2):
        assert len(h2) == 15 and h2.coefficient("IIII") == -0.81054

    def test_blocks_sum_to_full(self, h2):
        one, two = load_fixture("h2-1e"), load_fixture("h2-2e")
        total = one + two
        for s, c in h2.items():
            assert total.coefficient(s) == pytest.approx(c, abs=1e-5)
        assert set(total.strings) == set(h2.strings)

    def test_h2_spectrum(self, h2_exact):
        w = h2_exact[0]
        np.testing.assert_allclose(w, [-1.1373, -0.5363, -0.5363, -0.5246, -0.5246], atol=5e-4)

    def test_h2_reference_is_hartree_fock(self, h2, h2_fixture):
        from sharc_vqe.statevector import expectation_exact, prepare_basis_state
        hf = prepare_basis_state(4, h2_fixture.hf_qubits)
        assert expectation_exact(hf, h2) == pytest.approx(-1.1170, abs=2e-4)

    def test_unknown_fixture(self):
        with pytest.raises(KeyError):
            load_fixture("lih")


class TestFileFormat:
    def test_round_trip(self, tmp_path, h2):
        path = tmp_path / "h.txt"
        save_hamiltonian(h2, path, comments=["round trip"])
        assert load_hamiltonian(path) == h2

    def test_empty_term_list(self):
        h = parse_hamiltonian("# nothing\nqubits 2\n")
        assert len(h) == 0
        np.testing.assert_allclose(exact_spectrum(h)[0], np.zeros(4))

    def test_duplicates_merge(self):
        h = parse_hamiltonian("qubits 2\n0.25 ZZ\n0.5e-1 ZZ\n-1 XI\n")
        assert h.coefficient("ZZ") == pytest.approx(0.3) and len(h) == 2

    @pytest.mark.parametrize("text,line", [
        ("qubits 2\n0.1 ZZZ\n", 2), ("0.1 ZZ\n", 1), ("qubits x\n", 1), ("qubits 2\n# c\n0.1 QZ\n", 3)])
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(HamiltonianFileError) as info:
            parse_hamiltonian(text, "f.txt")
        assert info.value.line_no == line and f"f.txt:{line}" in str(info.value)

    def test_missing_header(self):
        with pytest.raises(HamiltonianFileError):
            parse_hamiltonian("# only a comment\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(HamiltonianFileError):
            load_hamiltonian(tmp_path / "absent.txt")


def test_fermion_op_algebra():
    op = create(1) * annihilate(0)
    assert op.adjoint().terms == (create(0) * annihilate(1)).terms
    assert isinstance(op + op, FermionOp) and op.max_mode == 1
