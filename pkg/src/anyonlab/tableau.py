"""Clifford-only stabilizer tableau for syndrome dynamics at scale.

Standard destabilizer/stabilizer tableau: rows 0..n-1 are destabilizers,
rows n..2n-1 stabilizers, each a Pauli mask pair plus an i-exponent
(stabilizer rows stay Hermitian, exponent 0 or 2).  Row masks are plain
Python ints so conjugation and symplectic products run on machine words.

The tableau does not track global phase: the braiding-phase physics
lives in the dense engine.  This backend serves large-lattice syndrome
studies and sign-exact cross-validation of the dense engine.

Deterministic generator measurements are memoized per tableau structure:
Pauli gates (and error strings) only flip row signs, which the cache
reads live, so sweeping syndromes after X/Z errors costs microseconds
per generator.  Any H/S/CZ/SWAP invalidates the cache.
"""

from __future__ import annotations

import numpy as np

from .dense import StateVector, apply_pauli as dense_apply_pauli
from .lattice import LatticeModel
from .pauli import DEFAULT_DENSE_LIMIT, PauliString, mul_phase_exp

CLIFFORD_GATES = ("h", "s", "sdg", "x", "z", "cz", "swap")


class Tableau:
    """Mutable stabilizer state on n qubits; ``copy()`` to fork for sweeps."""

    def __init__(self, n: int, seed: int | None = None):
        if n < 1:
            raise ValueError(f"qubit count must be >= 1, got {n}")
        self.n = n
        self.xs = [0] * (2 * n)
        self.zs = [0] * (2 * n)
        self.phases = [0] * (2 * n)     # i-exponent per row
        for i in range(n):
            self.xs[i] = 1 << i         # destabilizer i = X_{i+1}
            self.zs[n + i] = 1 << i     # stabilizer i = Z_{i+1}
        self._rng = np.random.default_rng(seed)
        self._version = 0
        self._det_cache: dict[tuple[int, int], tuple[tuple[int, ...], int]] = {}
        self._det_cache_version = -1

    @classmethod
    def zero_state(cls, n: int, seed: int | None = None) -> Tableau:
        return cls(n, seed=seed)

    def copy(self) -> Tableau:
        t = Tableau.__new__(Tableau)
        t.n = self.n
        t.xs = list(self.xs)
        t.zs = list(self.zs)
        t.phases = list(self.phases)
        t._rng = np.random.default_rng()
        t._rng.bit_generator.state = self._rng.bit_generator.state
        t._version = self._version
        t._det_cache = dict(self._det_cache)
        t._det_cache_version = self._det_cache_version
        return t

    # -- row helpers ---------------------------------------------------

    def _anticommutes(self, row: int, p: PauliString) -> bool:
        return bool(((self.xs[row] & p.z_mask)
                     ^ (self.zs[row] & p.x_mask)).bit_count() & 1)

    def _rowmult(self, h: int, i: int):
        """row_h := row_h * row_i with phase tracking."""
        self.phases[h] = (self.phases[h] + self.phases[i]
                          + mul_phase_exp(self.xs[h], self.zs[h],
                                          self.xs[i], self.zs[i])) % 4
        self.xs[h] ^= self.xs[i]
        self.zs[h] ^= self.zs[i]

    def row_pauli(self, row: int) -> PauliString:
        return PauliString(self.n, self.xs[row], self.zs[row], self.phases[row])

    def stabilizer_paulis(self) -> list[PauliString]:
        return [self.row_pauli(self.n + i) for i in range(self.n)]

    # -- gates -----------------------------------------------------------

    def apply_gate(self, kind: str, targets: tuple[int, ...] | int) -> Tableau:
        if isinstance(targets, int):
            targets = (targets,)
        if kind not in CLIFFORD_GATES:
            raise ValueError(f"unsupported Clifford gate {kind!r}")
        for q in targets:
            if not 1 <= q <= self.n:
                raise ValueError(f"target qubit {q} outside 1..{self.n}")
        if kind in ("cz", "swap"):
            if len(targets) != 2 or targets[0] == targets[1]:
                raise ValueError(f"gate {kind!r} needs two distinct targets")
        elif len(targets) != 1:
            raise ValueError(f"gate {kind!r} takes one target")

        if kind == "h":
            self._h(targets[0])
        elif kind == "s":
            self._s(targets[0])
        elif kind == "sdg":
            self._sdg(targets[0])
        elif kind == "x":
            self._x(targets[0])
        elif kind == "z":
            self._z(targets[0])
        elif kind == "cz":
            self._h(targets[1])
            self._cnot(targets[0], targets[1])
            self._h(targets[1])
        elif kind == "swap":
            self._swap(targets[0], targets[1])
        if kind not in ("x", "z"):
            self._version += 1      # masks changed; sign-only gates keep caches
        return self

    def _h(self, q: int):
        bit = 1 << (q - 1)
        for i in range(2 * self.n):
            x = self.xs[i] & bit
            z = self.zs[i] & bit
            if x and z:
                self.phases[i] = (self.phases[i] + 2) % 4
            if bool(x) != bool(z):
                self.xs[i] ^= bit
                self.zs[i] ^= bit

    def _s(self, q: int):
        bit = 1 << (q - 1)
        for i in range(2 * self.n):
            x = self.xs[i] & bit
            if x:
                if self.zs[i] & bit:
                    self.phases[i] = (self.phases[i] + 2) % 4
                self.zs[i] ^= bit

    def _sdg(self, q: int):
        bit = 1 << (q - 1)
        for i in range(2 * self.n):
            x = self.xs[i] & bit
            if x:
                if not self.zs[i] & bit:
                    self.phases[i] = (self.phases[i] + 2) % 4
                self.zs[i] ^= bit

    def _x(self, q: int):
        bit = 1 << (q - 1)
        for i in range(2 * self.n):
            if self.zs[i] & bit:
                self.phases[i] = (self.phases[i] + 2) % 4

    def _z(self, q: int):
        bit = 1 << (q - 1)
        for i in range(2 * self.n):
            if self.xs[i] & bit:
                self.phases[i] = (self.phases[i] + 2) % 4

    def _cnot(self, c: int, t: int):
        bc = 1 << (c - 1)
        bt = 1 << (t - 1)
        for i in range(2 * self.n):
            xc = bool(self.xs[i] & bc)
            zc = bool(self.zs[i] & bc)
            xt = bool(self.xs[i] & bt)
            zt = bool(self.zs[i] & bt)
            if xc and zt and (xt == zc):
                self.phases[i] = (self.phases[i] + 2) % 4
            if xc:
                self.xs[i] ^= bt
            if zt:
                self.zs[i] ^= bc

    def _swap(self, a: int, b: int):
        ba = 1 << (a - 1)
        bb = 1 << (b - 1)
        for arr in (self.xs, self.zs):
            for i in range(2 * self.n):
                va = bool(arr[i] & ba)
                vb = bool(arr[i] & bb)
                if va != vb:
                    arr[i] ^= ba | bb

    def apply_pauli(self, p: PauliString) -> Tableau:
        """Conjugate by a Pauli error string: pure sign flips."""
        if p.n != self.n:
            raise ValueError(f"operator is {p.n}-qubit, tableau is {self.n}-qubit")
        for i in range(2 * self.n):
            if self._anticommutes(i, p):
                self.phases[i] = (self.phases[i] + 2) % 4
        return self

    # -- measurement -----------------------------------------------------

    def measure(self, p: PauliString, force: int | None = None) -> tuple[int, bool]:
        """Measure a Hermitian Pauli; returns (outcome +/-1, deterministic).

        Deterministic when +/-p is in the stabilizer group (the outcome
        is read off without touching the state); otherwise the outcome
        is sampled from the seeded generator (or pinned by ``force``)
        and the tableau collapses.
        """
        if p.n != self.n:
            raise ValueError(f"operator is {p.n}-qubit, tableau is {self.n}-qubit")
        if not p.is_hermitian:
            raise ValueError(f"cannot measure non-Hermitian operator {p}")
        pivot = next((i for i in range(self.n, 2 * self.n)
                      if self._anticommutes(i, p)), None)
        if pivot is None:
            return self._deterministic_outcome(p), True

        for j in range(2 * self.n):
            if j != pivot and self._anticommutes(j, p):
                self._rowmult(j, pivot)
        d = pivot - self.n
        self.xs[d] = self.xs[pivot]
        self.zs[d] = self.zs[pivot]
        self.phases[d] = self.phases[pivot]
        if force is None:
            outcome = 1 if self._rng.integers(0, 2) == 0 else -1
        else:
            outcome = force
        self.xs[pivot] = p.x_mask
        self.zs[pivot] = p.z_mask
        self.phases[pivot] = (p.phase_exp + (0 if outcome == 1 else 2)) % 4
        self._version += 1
        return outcome, False

    def _det_entry(self, p: PauliString) -> tuple[tuple[int, ...], int]:
        if self._det_cache_version != self._version:
            self._det_cache.clear()
            self._det_cache_version = self._version
        key = (p.x_mask, p.z_mask)
        entry = self._det_cache.get(key)
        if entry is None:
            if any(self._anticommutes(i, p) for i in range(self.n, 2 * self.n)):
                raise ValueError("operator is not deterministic on this tableau")
            sel = tuple(i for i in range(self.n) if self._anticommutes(i, p))
            ax = az = acc = 0
            for i in sel:
                row = self.n + i
                acc = (acc + mul_phase_exp(ax, az, self.xs[row], self.zs[row])) % 4
                ax ^= self.xs[row]
                az ^= self.zs[row]
            if ax != p.x_mask or az != p.z_mask:
                raise AssertionError("commuting operator not in stabilizer group")
            entry = (sel, acc)
            self._det_cache[key] = entry
        return entry

    def _deterministic_outcome(self, p: PauliString) -> int:
        sel, acc = self._det_entry(p)
        e = (acc + sum(self.phases[self.n + i] for i in sel)) % 4
        diff = (e - p.phase_exp) % 4
        if diff not in (0, 2):
            raise AssertionError("non-Hermitian accumulation in deterministic outcome")
        return 1 if diff == 0 else -1

    # -- conversion --------------------------------------------------------

    def to_statevector(self, dense_limit: int = DEFAULT_DENSE_LIMIT) -> StateVector:
        """Dense +1 joint eigenvector of all stabilizer rows (deterministic)."""
        if self.n > dense_limit:
            raise ValueError(
                f"{self.n} qubits exceeds the dense limit of {dense_limit}")
        rows = self.stabilizer_paulis()
        for start in range(2 ** self.n):
            amps = np.zeros(2 ** self.n, dtype=complex)
            amps[start] = 1.0
            state = StateVector(self.n, amps)
            for r in rows:
                state = StateVector(
                    self.n, 0.5 * (state.amps + dense_apply_pauli(state, r).amps))
            nrm = state.norm()
            if nrm > 1e-9:
                amps = state.amps / nrm
                lead = np.argmax(np.abs(amps) > 1e-12)
                amps = amps * (abs(amps[lead]) / amps[lead])
                return StateVector(self.n, amps)
        raise AssertionError("projector annihilated every basis state")


# -- toric ground state --------------------------------------------------


def logical_z_loops(model: LatticeModel) -> tuple[PauliString, PauliString]:
    """Non-contractible Z loops: horizontal bonds of row 0, vertical of column 0."""
    k = model.torus_k
    if k is None:
        raise ValueError("logical loops are defined for torus models only")
    n = model.n_qubits
    loop_h = PauliString.z_on(n, *(model.qubit_layout[("h", 0, c)] for c in range(k)))
    loop_v = PauliString.z_on(n, *(model.qubit_layout[("v", r, 0)] for r in range(k)))
    return loop_h, loop_v


def logical_x_strings(model: LatticeModel) -> tuple[PauliString, PauliString]:
    """Dual X strings crossing each Z loop exactly once."""
    k = model.torus_k
    if k is None:
        raise ValueError("logical strings are defined for torus models only")
    n = model.n_qubits
    x1 = PauliString.x_on(n, *(model.qubit_layout[("h", r, 0)] for r in range(k)))
    x2 = PauliString.x_on(n, *(model.qubit_layout[("v", 0, c)] for c in range(k)))
    return x1, x2


def init_toric_ground(model: LatticeModel, logical_choice: tuple[int, int] = (0, 0),
                      seed: int | None = None) -> Tableau:
    """Toric ground-state tableau with the Z-loop signs set by logical_choice.

    Built by forcing every vertex operator to +1 starting from |0...0>
    (already a +1 eigenstate of all face operators and both Z loops),
    then flipping loop signs with dual X strings as requested.
    """
    if model.torus_k is None:
        raise ValueError(f"toric ground init needs a torus model, got {model.geometry}")
    if len(logical_choice) != 2 or any(b not in (0, 1) for b in logical_choice):
        raise ValueError(f"logical_choice must be two bits, got {logical_choice}")
    t = Tableau(model.n_qubits, seed=seed)
    for av in model.vertex_ops:
        t.measure(av, force=1)
    for bit, xstr in zip(logical_choice, logical_x_strings(model)):
        if bit:
            t.apply_pauli(xstr)
    return t


def syndrome_sweep(t: Tableau, model: LatticeModel) -> list[tuple[str, int]]:
    """Deterministic eigenvalue of every generator, in generator order."""
    if t.n != model.n_qubits:
        raise ValueError(f"tableau is {t.n}-qubit, model needs {model.n_qubits}")
    out = []
    for gid, g in zip(model.generator_ids, model.generators):
        try:
            out.append((gid, t._deterministic_outcome(g)))
        except ValueError as err:
            raise ValueError(f"generator {gid}: {err}") from None
    return out
