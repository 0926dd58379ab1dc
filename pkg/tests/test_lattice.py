"""Lattice builders: toric algebra, planar model, graph-state preparation."""

import numpy as np
import pytest

from anyonlab.dense import StateVector, apply_pauli, expect_pauli, run
from anyonlab.lattice import (GraphSpec, build_planar6, build_toric,
                              graph_state_circuit, graph_state_stabilizers,
                              ground_state_circuit, hamiltonian_energy,
                              planar6_graph_spec, syndrome)
from anyonlab.pauli import PauliString


def gf2_rank(rows: list[int]) -> int:
    """Gaussian elimination over GF(2) on int bitmask rows."""
    rank = 0
    rows = [r for r in rows if r]
    while rows:
        pivot = rows.pop()
        rank += 1
        low = pivot & -pivot
        rows = [(r ^ pivot) if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank


def symplectic_rows(model) -> list[int]:
    n = model.n_qubits
    return [(g.x_mask << n) | g.z_mask for g in model.generators]


def dense_generator(model, idx) -> np.ndarray:
    """Independent kron build of generator idx from its letters."""
    mats = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]),
            "Z": np.array([[1, 0], [0, -1]])}
    g = model.generators[idx]
    out = np.array([[1.0]])
    for q in range(1, model.n_qubits + 1):
        out = np.kron(out, mats[g.symbol(q)])
    return out


def ground_via_circuit() -> StateVector:
    return run(ground_state_circuit(planar6_graph_spec()), StateVector.zero(6))


class TestToric:
    def test_k2_counts_and_products(self):
        m = build_toric(2)
        assert m.n_qubits == 8
        assert len(m.vertex_ops) == 4 and len(m.face_ops) == 4
        prod_a = PauliString.identity(8)
        for a in m.vertex_ops:
            prod_a = prod_a * a
        prod_b = PauliString.identity(8)
        for b in m.face_ops:
            prod_b = prod_b * b
        assert prod_a == PauliString.identity(8)
        assert prod_b == PauliString.identity(8)

    @pytest.mark.parametrize("k", [2, 3])
    def test_weights_and_coverage(self, k):
        m = build_toric(k)
        for g in m.generators:
            assert g.weight == 4
        for q in range(1, m.n_qubits + 1):
            in_vertex = sum(1 for a in m.vertex_ops if q in a.support())
            in_face = sum(1 for b in m.face_ops if q in b.support())
            assert in_vertex == 2 and in_face == 2

    @pytest.mark.parametrize("k", [2, 3])
    def test_all_generators_commute(self, k):
        m = build_toric(k)
        gens = m.generators
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                assert gens[i].commutes(gens[j])

    def test_k3_gf2_rank_is_16(self):
        m = build_toric(3)
        assert m.n_qubits == 18
        assert len(m.generators) == 18
        assert gf2_rank(symplectic_rows(m)) == 16

    def test_k2_gf2_rank_is_6(self):
        assert gf2_rank(symplectic_rows(build_toric(2))) == 6

    def test_k_below_two_rejected(self):
        with pytest.raises(ValueError, match="k >= 2"):
            build_toric(1)

    @pytest.mark.parametrize("k", [2, 3])
    def test_single_x_flips_exactly_two_faces(self, k):
        m = build_toric(k)
        for q in range(1, m.n_qubits + 1):
            x = PauliString.x_on(m.n_qubits, q)
            flipped_faces = sum(1 for b in m.face_ops if not x.commutes(b))
            flipped_vertices = sum(1 for a in m.vertex_ops if not x.commutes(a))
            assert flipped_faces == 2 and flipped_vertices == 0

    @pytest.mark.parametrize("k", [2, 3])
    def test_single_z_flips_exactly_two_vertices(self, k):
        m = build_toric(k)
        for q in range(1, m.n_qubits + 1):
            z = PauliString.z_on(m.n_qubits, q)
            flipped_vertices = sum(1 for a in m.vertex_ops if not z.commutes(a))
            flipped_faces = sum(1 for b in m.face_ops if not z.commutes(b))
            assert flipped_vertices == 2 and flipped_faces == 0


class TestPlanar6:
    def test_exact_generator_list(self):
        m = build_planar6()
        assert m.generators == (
            PauliString.x_on(6, 1, 2, 3),
            PauliString.x_on(6, 3, 4, 5, 6),
            PauliString.z_on(6, 1, 3, 4),
            PauliString.z_on(6, 2, 3, 5),
            PauliString.z_on(6, 4, 6),
            PauliString.z_on(6, 5, 6),
        )
        assert m.generator_ids == ("A1", "A2", "B1", "B2", "B3", "B4")

    def test_boundary_faces_are_weight_two(self):
        m = build_planar6()
        assert [g.weight for g in m.face_ops] == [3, 3, 2, 2]

    def test_all_pairs_commute(self):
        gens = build_planar6().generators
        for i in range(6):
            for j in range(i + 1, 6):
                assert gens[i].commutes(gens[j])

    def test_joint_eigenspace_is_one_dimensional(self):
        m = build_planar6()
        proj = np.eye(64)
        for i in range(6):
            proj = proj @ (np.eye(64) + dense_generator(m, i)) / 2
        rank = np.linalg.matrix_rank(proj, tol=1e-9)
        assert rank == 1

    def test_braiding_loop_equals_a2(self):
        m = build_planar6()
        assert PauliString.x_on(6, 3, 4, 5, 6) == m.vertex_ops[1]


class TestGroundStateCircuit:
    def test_amplitudes_match_closed_form(self):
        out = ground_via_circuit()
        expected = {"000000": 0.5, "111000": 0.5, "110111": 0.5, "001111": 0.5}
        for i, amp in enumerate(out.amps):
            bits = format(i, "06b")
            np.testing.assert_allclose(amp, expected.get(bits, 0.0), atol=1e-12)

    def test_every_generator_expectation_is_plus_one(self):
        out = ground_via_circuit()
        for g in build_planar6().generators:
            assert abs(expect_pauli(out, g) - 1.0) < 1e-10

    def test_matches_dense_projector_eigenvector(self):
        m = build_planar6()
        proj = np.eye(64)
        for i in range(6):
            proj = proj @ (np.eye(64) + dense_generator(m, i)) / 2
        vals, vecs = np.linalg.eigh(proj)
        ground = vecs[:, np.argmax(vals)]
        ov = np.vdot(ground, ground_via_circuit().amps)
        assert abs(abs(ov) - 1.0) < 1e-10

    def test_graph_state_satisfies_graph_stabilizers(self):
        spec = planar6_graph_spec()
        g6 = run(graph_state_circuit(spec), StateVector.zero(6))
        for stab in graph_state_stabilizers(spec):
            assert abs(expect_pauli(g6, stab) - 1.0) < 1e-10

    def test_malformed_spec_rejected(self):
        with pytest.raises(ValueError, match="self-loop"):
            GraphSpec(4, ((1, 1),), "IIII")
        with pytest.raises(ValueError, match="outside"):
            GraphSpec(4, ((1, 9),), "IIII")
        with pytest.raises(ValueError, match="entries"):
            GraphSpec(4, ((1, 2),), "IH")
        with pytest.raises(ValueError, match="I/H"):
            GraphSpec(4, ((1, 2),), "IHXZ")


class TestEnergyAndSyndrome:
    def test_ground_energy(self):
        m = build_planar6()
        assert abs(hamiltonian_energy(m, ground_via_circuit()) + 6.0) < 1e-10

    def test_m_pair_energy(self):
        m = build_planar6()
        state = apply_pauli(ground_via_circuit(), PauliString.x_on(6, 4))
        # X4 anticommutes with B1 and B3 only: -6 + 2*2
        violated = sum(1 for g in m.generators
                       if not g.commutes(PauliString.x_on(6, 4)))
        assert violated == 2
        assert abs(hamiltonian_energy(m, state) + 2.0) < 1e-10

    def test_double_pair_energy(self):
        m = build_planar6()
        err = PauliString.z_on(6, 3) * PauliString.x_on(6, 4)
        violated = sum(1 for g in m.generators if not g.commutes(err))
        assert violated == 4
        state = apply_pauli(ground_via_circuit(), err)
        assert abs(hamiltonian_energy(m, state) - 2.0) < 1e-10

    def test_syndrome_ground(self):
        entries = syndrome(build_planar6(), ground_via_circuit())
        assert all(e.eigenstate and e.value == 1.0 for e in entries)

    def test_syndrome_x4(self):
        state = apply_pauli(ground_via_circuit(), PauliString.x_on(6, 4))
        values = {e.generator: e.value for e in syndrome(build_planar6(), state)}
        assert values == {"A1": 1.0, "A2": 1.0, "B1": -1.0,
                          "B2": 1.0, "B3": -1.0, "B4": 1.0}

    def test_syndrome_flags_superposed_creation_state(self):
        from anyonlab.anyon import create_anyons
        psi_b = create_anyons(ground_via_circuit())
        entries = {e.generator: e for e in syndrome(build_planar6(), psi_b)}
        for gid in ("A1", "A2"):
            assert not entries[gid].eigenstate
            assert abs(entries[gid].value) < 1e-10
        for gid, expected in (("B1", -1.0), ("B2", 1.0), ("B3", -1.0), ("B4", 1.0)):
            assert entries[gid].eigenstate and entries[gid].value == expected

    def test_size_mismatch(self):
        with pytest.raises(ValueError, match="model needs"):
            hamiltonian_energy(build_planar6(), StateVector.zero(3))
        with pytest.raises(ValueError, match="model needs"):
            syndrome(build_planar6(), StateVector.zero(3))


class TestDescribe:
    def test_planar6_description_lists_generators_and_layout(self):
        from anyonlab.lattice import describe_model
        text = describe_model(build_planar6())
        assert "A1 = +X1 X2 X3" in text
        assert "B3 = +Z4 Z6" in text
        assert "geometry: planar6" in text

    def test_toric_layout_table(self):
        from anyonlab.lattice import describe_model
        text = describe_model(build_toric(2))
        assert "h:0:0 -> q1" in text
        assert "v:1:1 -> q8" in text
