"""Signed multi-qubit Pauli operators in symplectic (bit-mask) form.

Conventions, fixed once for the whole package:

 *  Qubits are numbered 1..n.  Bit ``q-1`` of ``x_mask`` / ``z_mask``
    belongs to qubit ``q``.
 *  The per-qubit symbol encoded by the bit pair (x, z) is
    (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y, with no hidden phase: the mask
    pair (1,1) *is* the Hermitian Y.  Equivalently sigma_x sigma_z =
    -i sigma_y, so storing XZ as Y costs a factor -i which lives in
    ``phase_exp``.
 *  ``phase_exp`` is the exponent e of the unit prefactor i**e, e in
    {0,1,2,3}.  Hermitian strings have e in {0,2}.
 *  Products follow the single-qubit algebra XY=iZ, YZ=iX, ZX=iY (and
    the reversed orders pick up -i).

Masks are plain Python ints, so popcounts and XORs run on machine words
regardless of qubit count.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

PHASE_LABELS = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PHASE_FROM_LABEL = {"+": 0, "": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_PHASE_VALUES = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

DEFAULT_DENSE_LIMIT = 12


def mul_phase_exp(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent of i picked up when multiplying mask pairs (x1,z1)*(x2,z2).

    Counts, per qubit, the cyclic products XY, YZ, ZX (each +i) against
    the anti-cyclic ones YX, ZY, XZ (each -i).
    """
    y1 = x1 & z1
    y2 = x2 & z2
    xo1 = x1 & ~z1
    xo2 = x2 & ~z2
    zo1 = z1 & ~x1
    zo2 = z2 & ~x2
    plus = (y1 & zo2) | (xo1 & y2) | (zo1 & xo2)
    minus = (y1 & xo2) | (xo1 & zo2) | (zo1 & y2)
    return (plus.bit_count() - minus.bit_count()) % 4


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli operator ``i**phase_exp * P_1 (x) ... (x) P_n``."""

    n: int
    x_mask: int
    z_mask: int
    phase_exp: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        full = (1 << self.n) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError(f"mask has bits outside 1..{self.n}")
        if self.phase_exp not in (0, 1, 2, 3):
            raise ValueError(f"phase exponent must be in 0..3, got {self.phase_exp}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n, 0, 0, 0)

    @classmethod
    def from_ops(cls, n: int, ops: dict[int, str], phase_exp: int = 0) -> PauliString:
        """Build from a mapping {qubit (1-based): 'X'|'Y'|'Z'|'I'}."""
        x = z = 0
        for q, sym in ops.items():
            if not 1 <= q <= n:
                raise ValueError(f"qubit {q} outside 1..{n}")
            bit = 1 << (q - 1)
            if sym == "X":
                x |= bit
            elif sym == "Z":
                z |= bit
            elif sym == "Y":
                x |= bit
                z |= bit
            elif sym != "I":
                raise ValueError(f"unknown Pauli symbol {sym!r}")
        return cls(n, x, z, phase_exp % 4)

    @classmethod
    def x_on(cls, n: int, *qubits: int) -> PauliString:
        return cls.from_ops(n, {q: "X" for q in qubits})

    @classmethod
    def z_on(cls, n: int, *qubits: int) -> PauliString:
        return cls.from_ops(n, {q: "Z" for q in qubits})

    @classmethod
    def y_on(cls, n: int, *qubits: int) -> PauliString:
        return cls.from_ops(n, {q: "Y" for q in qubits})

    @classmethod
    def parse(cls, text: str, n: int) -> PauliString:
        """Parse the text form, e.g. ``"+X1 Z3 Z4"`` or ``"-i Y2"``.

        Factors are 1-based ``<letter><index>`` tokens; a leading +, -, +i
        or -i sets the phase; ``I`` (or an empty factor list) is identity.
        """
        tokens = text.split()
        if not tokens:
            raise ValueError("empty Pauli string")
        phase_exp = 0
        if tokens[0] in _PHASE_FROM_LABEL:
            phase_exp = _PHASE_FROM_LABEL[tokens[0]]
            tokens = tokens[1:]
        else:
            m = re.match(r"^(\+i|-i|\+|-)(.+)$", tokens[0])
            if m:
                phase_exp = _PHASE_FROM_LABEL[m.group(1)]
                tokens[0] = m.group(2)
        ops: dict[int, str] = {}
        for tok in tokens:
            if tok == "I":
                continue
            m = re.fullmatch(r"([XYZ])(\d+)", tok)
            if not m:
                raise ValueError(f"bad Pauli factor {tok!r}")
            q = int(m.group(2))
            if q in ops:
                raise ValueError(f"qubit {q} appears twice")
            ops[q] = m.group(1)
        return cls.from_ops(n, ops, phase_exp)

    # -- basic queries -----------------------------------------------------

    @property
    def phase(self) -> complex:
        """The unit prefactor as a complex number."""
        return _PHASE_VALUES[self.phase_exp]

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return (self.x_mask | self.z_mask).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0 and self.phase_exp == 0

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp in (0, 2)

    def symbol(self, q: int) -> str:
        """Pauli letter on qubit q (1-based)."""
        bit = 1 << (q - 1)
        x = bool(self.x_mask & bit)
        z = bool(self.z_mask & bit)
        return "IXZY"[x + 2 * z]

    def support(self) -> tuple[int, ...]:
        """1-based qubits carrying a non-identity factor, ascending."""
        mask = self.x_mask | self.z_mask
        return tuple(q for q in range(1, self.n + 1) if mask & (1 << (q - 1)))

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: PauliString) -> PauliString:
        if not isinstance(other, PauliString):
            return NotImplemented
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n} qubits")
        e = (self.phase_exp + other.phase_exp
             + mul_phase_exp(self.x_mask, self.z_mask, other.x_mask, other.z_mask)) % 4
        return PauliString(self.n, self.x_mask ^ other.x_mask,
                           self.z_mask ^ other.z_mask, e)

    def commutes(self, other: PauliString) -> bool:
        """True iff the symplectic inner product is even."""
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n} qubits")
        return ((self.x_mask & other.z_mask) ^ (self.z_mask & other.x_mask)).bit_count() % 2 == 0

    def adjoint(self) -> PauliString:
        return PauliString(self.n, self.x_mask, self.z_mask, (-self.phase_exp) % 4)

    def with_phase_exp(self, phase_exp: int) -> PauliString:
        return PauliString(self.n, self.x_mask, self.z_mask, phase_exp % 4)

    def negated(self) -> PauliString:
        return self.with_phase_exp(self.phase_exp + 2)

    def same_mask(self, other: PauliString) -> bool:
        """Equality up to phase."""
        return (self.n == other.n and self.x_mask == other.x_mask
                and self.z_mask == other.z_mask)

    # -- conversion --------------------------------------------------------

    def to_dense(self, dense_limit: int = DEFAULT_DENSE_LIMIT) -> np.ndarray:
        """Dense 2^n x 2^n matrix; qubit 1 is the most significant bit."""
        if self.n > dense_limit:
            raise ValueError(
                f"{self.n} qubits exceeds the dense limit of {dense_limit}")
        mat = np.array([[self.phase]], dtype=complex)
        for q in range(1, self.n + 1):
            mat = np.kron(mat, _PAULI_MATS[self.symbol(q)])
        return mat

    def __str__(self) -> str:
        factors = [f"{self.symbol(q)}{q}" for q in self.support()]
        body = " ".join(factors) if factors else "I"
        return f"{PHASE_LABELS[self.phase_exp]}{body}" if self.phase_exp in (0, 2) \
            else f"{PHASE_LABELS[self.phase_exp]} {body}"
