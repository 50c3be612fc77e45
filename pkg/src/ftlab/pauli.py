"""n-qubit Pauli operators in symplectic bit-pair form, plus Pauli-sum
operator expressions.

A Pauli is stored as `phase * X^x Z^z` with x, z in {0,1}^n and phase in
{1, -1, 1j, -1j}.  The letter Y on a qubit corresponds to x = z = 1 with
an extra factor i, so Y = i X Z holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatch, ZeroOperator
from .gf2 import as_gf2

PHASES = (1, -1, 1j, -1j)

_LABEL_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_LABEL = {v: k for k, v in _LABEL_TO_BITS.items()}


@dataclass(frozen=True)
class PauliOp:
    """`phase * X^x Z^z` on n qubits."""

    x: np.ndarray
    z: np.ndarray
    phase: complex = 1

    def __post_init__(self):
        object.__setattr__(self, "x", as_gf2(self.x))
        object.__setattr__(self, "z", as_gf2(self.z))
        if self.x.shape != self.z.shape or self.x.ndim != 1:
            raise LengthMismatch("x and z bit-vectors must be equal-length 1-D")
        if self.phase not in PHASES:
            raise ValueError(f"phase must be one of {PHASES}")
        self.x.setflags(write=False)
        self.z.setflags(write=False)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def identity(n: int) -> "PauliOp":
        return PauliOp(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @staticmethod
    def from_label(label: str, phase: complex = 1) -> "PauliOp":
        """Build from a string like 'XIZY' (qubit 0 is the first letter)."""
        x = np.zeros(len(label), dtype=np.uint8)
        z = np.zeros(len(label), dtype=np.uint8)
        for i, ch in enumerate(label.upper()):
            try:
                xb, zb = _LABEL_TO_BITS[ch]
            except KeyError:
                raise ValueError(f"unknown Pauli letter {ch!r}") from None
            x[i], z[i] = xb, zb
            if ch == "Y":
                phase = phase * 1j
        return PauliOp(x, z, phase)

    @staticmethod
    def single(n: int, kind: str, qubit: int) -> "PauliOp":
        """Weight-1 Pauli of the given kind ('X'/'Y'/'Z') on one qubit."""
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        xb, zb = _LABEL_TO_BITS[kind.upper()]
        x[qubit], z[qubit] = xb, zb
        phase = 1j if kind.upper() == "Y" else 1
        return PauliOp(x, z, phase)

    @staticmethod
    def x_type(bits) -> "PauliOp":
        bits = as_gf2(bits)
        return PauliOp(bits, np.zeros_like(bits))

    @staticmethod
    def z_type(bits) -> "PauliOp":
        bits = as_gf2(bits)
        return PauliOp(np.zeros_like(bits), bits)

    # -- structure ---------------------------------------------------------

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def support(self) -> np.ndarray:
        return np.nonzero(self.x | self.z)[0]

    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def is_identity(self) -> bool:
        return self.weight() == 0

    def bare(self) -> "PauliOp":
        """Same symplectic content with phase reset to +1."""
        return PauliOp(self.x, self.z, 1)

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        if self.n != other.n:
            raise LengthMismatch("Pauli lengths differ")
        sign = (-1) ** (int(np.dot(self.z, other.x)) % 2)
        return PauliOp(self.x ^ other.x, self.z ^ other.z, self.phase * other.phase * sign)

    def commutes_with(self, other: "PauliOp") -> bool:
        if self.n != other.n:
            raise LengthMismatch("Pauli lengths differ")
        sym = (int(np.dot(self.x, other.z)) + int(np.dot(self.z, other.x))) % 2
        return sym == 0

    def conjugate_transpose(self) -> "PauliOp":
        """Adjoint: (phase X^x Z^z)^dag = conj(phase) (-1)^(x.z) X^x Z^z."""
        sign = (-1) ** (int(np.dot(self.x, self.z)) % 2)
        return PauliOp(self.x, self.z, np.conj(self.phase) * sign)

    def tensor(self, other: "PauliOp") -> "PauliOp":
        return PauliOp(
            np.concatenate([self.x, other.x]),
            np.concatenate([self.z, other.z]),
            self.phase * other.phase,
        )

    def embed(self, n: int, offset: int) -> "PauliOp":
        """Place this Pauli on wires [offset, offset + self.n) of n wires."""
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        x[offset : offset + self.n] = self.x
        z[offset : offset + self.n] = self.z
        return PauliOp(x, z, self.phase)

    def restricted(self, wires) -> "PauliOp":
        return PauliOp(self.x[wires], self.z[wires], self.phase)

    # -- misc ---------------------------------------------------------------

    def label(self) -> str:
        return "".join(_BITS_TO_LABEL[(int(a), int(b))] for a, b in zip(self.x, self.z))

    def key(self) -> bytes:
        """Hashable symplectic key ignoring phase."""
        return self.x.tobytes() + self.z.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOp):
            return NotImplemented
        return (
            self.n == other.n
            and bool(np.array_equal(self.x, other.x))
            and bool(np.array_equal(self.z, other.z))
            and self.phase == other.phase
        )

    def __hash__(self) -> int:
        return hash((self.key(), self.phase))

    def __repr__(self) -> str:
        sign = {1: "+", -1: "-", 1j: "+i", -1j: "-i"}[self.phase]
        return f"PauliOp({sign}{self.label()})"

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix (for small-n oracles only)."""
        X = np.array([[0, 1], [1, 0]], dtype=complex)
        Z = np.array([[1, 0], [0, -1]], dtype=complex)
        out = np.array([[self.phase]], dtype=complex)
        for xb, zb in zip(self.x, self.z):
            m = np.eye(2, dtype=complex)
            if xb:
                m = m @ X
            if zb:
                m = m @ Z
            out = np.kron(out, m)
        return out


@dataclass(frozen=True)
class LinearOperatorExpr:
    """A linear operator as a complex Pauli sum over n wires.

    When used against a code block, the block occupies the *last*
    `block_size` wires and any auxiliary system the leading ones.
    """

    n: int
    terms: tuple[tuple[complex, PauliOp], ...] = field(default_factory=tuple)

    PRUNE_TOL = 1e-12

    def __post_init__(self):
        for _, p in self.terms:
            if p.n != self.n:
                raise LengthMismatch("term length differs from expression width")

    @staticmethod
    def from_terms(n: int, terms) -> "LinearOperatorExpr":
        return LinearOperatorExpr(n, tuple((complex(c), p) for c, p in terms))

    def simplified(self) -> "LinearOperatorExpr":
        """Combine like terms (phases folded into coefficients), prune tiny ones."""
        acc: dict[bytes, tuple[complex, PauliOp]] = {}
        for c, p in self.terms:
            bare = p.bare()
            k = bare.key()
            coeff = c * p.phase
            if k in acc:
                acc[k] = (acc[k][0] + coeff, bare)
            else:
                acc[k] = (coeff, bare)
        kept = tuple((c, p) for c, p in acc.values() if abs(c) > self.PRUNE_TOL)
        return LinearOperatorExpr(self.n, kept)

    def nonzero_terms(self) -> tuple[tuple[complex, PauliOp], ...]:
        s = self.simplified()
        if not s.terms:
            raise ZeroOperator("all coefficients vanish below tolerance")
        return s.terms

    def to_matrix(self) -> np.ndarray:
        out = np.zeros((2**self.n, 2**self.n), dtype=complex)
        for c, p in self.terms:
            out += c * p.to_matrix()
        return out
