"""Builders for the k x k toric model and the 6-qubit planar variant.

Toric layout: cells (r, c) scan row-major; each cell owns its horizontal
bond first, then its vertical bond, so bond ("h", r, c) sits on qubit
2*(r*k + c) + 1 and ("v", r, c) on the next index (1-based).  The
horizontal bond of cell (r, c) joins vertices (r, c)-(r, c+1); the
vertical bond joins (r, c)-(r+1, c); all coordinates wrap mod k.

Generator order everywhere: vertex operators first, then face
operators, each in scan order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .dense import Circuit, Gate, StateVector, expect_pauli
from .pauli import PauliString

EIGENVALUE_TOL = 1e-9


@dataclass(frozen=True)
class LatticeModel:
    n_qubits: int
    vertex_ops: tuple[PauliString, ...]
    face_ops: tuple[PauliString, ...]
    vertex_ids: tuple[str, ...]
    face_ids: tuple[str, ...]
    geometry: str                      # "torus:k" | "planar6"
    qubit_layout: dict[tuple, int]     # bond id -> qubit (1-based)

    @property
    def generators(self) -> tuple[PauliString, ...]:
        return self.vertex_ops + self.face_ops

    @property
    def generator_ids(self) -> tuple[str, ...]:
        return self.vertex_ids + self.face_ids

    @property
    def torus_k(self) -> int | None:
        if self.geometry.startswith("torus:"):
            return int(self.geometry.split(":")[1])
        return None


def build_toric(k: int) -> LatticeModel:
    """k x k toric model on 2k^2 bond qubits."""
    if k < 2:
        raise ValueError(f"toric lattice needs k >= 2, got {k}")
    n = 2 * k * k
    layout: dict[tuple, int] = {}
    for r in range(k):
        for c in range(k):
            layout[("h", r, c)] = 2 * (r * k + c) + 1
            layout[("v", r, c)] = 2 * (r * k + c) + 2

    vertex_ops, vertex_ids = [], []
    for r in range(k):
        for c in range(k):
            qubits = [layout[("h", r, c)], layout[("h", r, (c - 1) % k)],
                      layout[("v", r, c)], layout[("v", (r - 1) % k, c)]]
            vertex_ops.append(PauliString.x_on(n, *qubits))
            vertex_ids.append(f"A({r},{c})")

    face_ops, face_ids = [], []
    for r in range(k):
        for c in range(k):
            qubits = [layout[("h", r, c)], layout[("h", (r + 1) % k, c)],
                      layout[("v", r, c)], layout[("v", r, (c + 1) % k)]]
            face_ops.append(PauliString.z_on(n, *qubits))
            face_ids.append(f"B({r},{c})")

    return LatticeModel(n, tuple(vertex_ops), tuple(face_ops),
                        tuple(vertex_ids), tuple(face_ids),
                        f"torus:{k}", layout)


def build_planar6() -> LatticeModel:
    """The 6-qubit planar model with two 3/4-body vertex terms and four faces."""
    n = 6
    vertex_ops = (PauliString.x_on(n, 1, 2, 3),
                  PauliString.x_on(n, 3, 4, 5, 6))
    face_ops = (PauliString.z_on(n, 1, 3, 4),
                PauliString.z_on(n, 2, 3, 5),
                PauliString.z_on(n, 4, 6),        # boundary faces are 2-body
                PauliString.z_on(n, 5, 6))
    layout = {(str(q),): q for q in range(1, 7)}
    return LatticeModel(n, vertex_ops, face_ops,
                        ("A1", "A2"), ("B1", "B2", "B3", "B4"),
                        "planar6", layout)


@dataclass(frozen=True)
class GraphSpec:
    """Graph plus per-qubit local gate ('I' or 'H') for state preparation."""

    n: int
    edges: tuple[tuple[int, int], ...]
    local_map: str

    def __post_init__(self):
        if len(self.local_map) != self.n:
            raise ValueError(f"local_map must have {self.n} entries")
        if any(ch not in "IH" for ch in self.local_map):
            raise ValueError(f"local_map may only contain I/H, got {self.local_map!r}")
        for (a, b) in self.edges:
            if a == b:
                raise ValueError(f"self-loop on vertex {a}")
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise ValueError(f"edge ({a},{b}) outside 1..{self.n}")


def planar6_graph_spec() -> GraphSpec:
    return GraphSpec(6, ((1, 2), (1, 3), (3, 6), (4, 6), (5, 6)), "IHHHHI")


def ground_state_circuit(spec: GraphSpec) -> Circuit:
    """|+>^V, controlled-Z per edge, then the local I/H layer."""
    gates = [Gate("h", (q,)) for q in range(1, spec.n + 1)]
    gates += [Gate("cz", edge) for edge in spec.edges]
    gates += [Gate("h", (q + 1,)) for q, ch in enumerate(spec.local_map) if ch == "H"]
    return Circuit(spec.n, tuple(gates))


def graph_state_circuit(spec: GraphSpec) -> Circuit:
    """The same network without the local layer (pure graph state)."""
    gates = [Gate("h", (q,)) for q in range(1, spec.n + 1)]
    gates += [Gate("cz", edge) for edge in spec.edges]
    return Circuit(spec.n, tuple(gates))


def graph_state_stabilizers(spec: GraphSpec) -> tuple[PauliString, ...]:
    """X_i Z_{N(i)} for each vertex i."""
    out = []
    for i in range(1, spec.n + 1):
        ops = {i: "X"}
        for (a, b) in spec.edges:
            if a == i:
                ops[b] = "Z"
            elif b == i:
                ops[a] = "Z"
        out.append(PauliString.from_ops(spec.n, ops))
    return tuple(out)


def hamiltonian_energy(model: LatticeModel, state: StateVector) -> float:
    """Energy -sum<A_v> - sum<B_f> of the model Hamiltonian."""
    if state.n != model.n_qubits:
        raise ValueError(f"state is {state.n}-qubit, model needs {model.n_qubits}")
    return -sum(expect_pauli(state, g) for g in model.generators)


@dataclass(frozen=True)
class SyndromeEntry:
    generator: str
    value: float
    eigenstate: bool


def syndrome(model: LatticeModel, state: StateVector) -> list[SyndromeEntry]:
    """Per-generator eigenvalue, or the raw expectation flagged non-eigenstate.

    Stabilizer-reachable states give exact +/-1 entries; superpositions
    across syndrome sectors (deliberate in the creation step here) are
    reported with ``eigenstate=False`` and the expectation value.
    """
    if state.n != model.n_qubits:
        raise ValueError(f"state is {state.n}-qubit, model needs {model.n_qubits}")
    out = []
    for gid, g in zip(model.generator_ids, model.generators):
        val = expect_pauli(state, g)
        if abs(abs(val) - 1.0) <= EIGENVALUE_TOL:
            out.append(SyndromeEntry(gid, 1.0 if val > 0 else -1.0, True))
        else:
            out.append(SyndromeEntry(gid, val, False))
    return out


def describe_model(model: LatticeModel) -> str:
    """Structured text: generator list plus the bond-to-qubit table."""
    lines = [f"geometry: {model.geometry}", f"qubits: {model.n_qubits}", "generators:"]
    for gid, g in zip(model.generator_ids, model.generators):
        lines.append(f"  {gid} = {g}")
    lines.append("layout:")
    for bond, q in sorted(model.qubit_layout.items(), key=lambda kv: kv[1]):
        lines.append(f"  {':'.join(str(b) for b in bond)} -> q{q}")
    return "\n".join(lines)


def bonds_of(model: LatticeModel, kind: str) -> Iterable[tuple]:
    """Bond ids of a given kind ('h' or 'v') for toric models."""
    return (b for b in model.qubit_layout if b[0] == kind)
