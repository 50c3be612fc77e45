"""CSS/QLDPC code construction and stabilizer-reduced weights.

Conventions
-----------
* hx rows are X-type stabilizer generators, hz rows Z-type.
* The declared generator order is: all Z-checks (rows of hz) first, then
  all X-checks (rows of hx).  A syndrome vector is laid out accordingly:
  ``sigma = (hz @ e_x ; hx @ e_z) mod 2``, so bit i reports whether the
  error anticommutes with generator i.
* The stabilizer-reduced weight of e = (e_x, e_z) is
  ``max(min weight over e_x + rowspace(hx), min weight over e_z + rowspace(hz))``,
  computed by exhaustive coset enumeration (exact, capped).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import gf2
from .errors import (
    CommutationViolation,
    DimensionMismatch,
    EnumerationTooLarge,
    LengthMismatch,
)
from .pauli import LinearOperatorExpr, PauliOp

COSET_CAP = 1 << 20
DMIN_WIRE_LIMIT = 30


@dataclass(frozen=True)
class LdpcProfile:
    """(r, s): max generator weight and max per-qubit generator degree."""

    r: int
    s: int


class CssCode:
    """A CSS code defined by orthogonal parity-check matrices (hx, hz).

    Stabilizers, logical operators and the logical count m are derived at
    construction; all arrays are frozen afterwards so instances can be
    shared freely across workers.
    """

    def __init__(self, hx, hz, name: str = "css", d_min: int | None = None):
        hx = gf2.as_gf2(np.atleast_2d(hx))
        hz = gf2.as_gf2(np.atleast_2d(hz))
        if hx.size == 0:
            hx = hx.reshape(0, hz.shape[1] if hz.size else hx.shape[1])
        if hz.size == 0:
            hz = hz.reshape(0, hx.shape[1])
        if hx.shape[1] != hz.shape[1]:
            raise DimensionMismatch(
                f"hx has {hx.shape[1]} columns but hz has {hz.shape[1]}"
            )
        if hx.shape[0] and hz.shape[0] and ((hx @ hz.T) % 2).any():
            raise CommutationViolation("hx @ hz.T != 0 over GF(2)")

        self.name = name
        self.hx = hx
        self.hz = hz
        self.n = int(hx.shape[1])
        self.rank_hx = gf2.rank(hx)
        self.rank_hz = gf2.rank(hz)
        self.m = self.n - self.rank_hx - self.rank_hz
        self.lx, self.lz = self._logical_bases()
        self._declared_d_min = d_min
        for a in (self.hx, self.hz, self.lx, self.lz):
            a.setflags(write=False)

    # -- derived structure ---------------------------------------------------

    def _logical_bases(self) -> tuple[np.ndarray, np.ndarray]:
        """Paired logical bases: lx[i] anticommutes with lz[i] only."""
        n, m = self.n, self.m
        if m == 0:
            empty = np.zeros((0, n), dtype=np.uint8)
            return empty, empty.copy()
        # X logicals: ker(hz) modulo rowspace(hx); Z logicals symmetrically.
        lx = _quotient_basis(gf2.null_space(self.hz), self.hx, m)
        lz = _quotient_basis(gf2.null_space(self.hx), self.hz, m)
        pairing = (lx @ lz.T) % 2
        lz = (gf2.inverse(pairing).T @ lz) % 2
        return lx.astype(np.uint8), lz.astype(np.uint8)

    @property
    def num_generators(self) -> int:
        return int(self.hz.shape[0] + self.hx.shape[0])

    @cached_property
    def z_stabilizers(self) -> list[PauliOp]:
        return [PauliOp.z_type(row) for row in self.hz]

    @cached_property
    def x_stabilizers(self) -> list[PauliOp]:
        return [PauliOp.x_type(row) for row in self.hx]

    @cached_property
    def generators(self) -> list[PauliOp]:
        """Declared generator order: Z-checks then X-checks."""
        return self.z_stabilizers + self.x_stabilizers

    @cached_property
    def x_logicals(self) -> list[PauliOp]:
        return [PauliOp.x_type(row) for row in self.lx]

    @cached_property
    def z_logicals(self) -> list[PauliOp]:
        return [PauliOp.z_type(row) for row in self.lz]

    @cached_property
    def d_min(self) -> int | None:
        if self._declared_d_min is not None:
            return self._declared_d_min
        if self.m == 0:
            return None
        if self.n > DMIN_WIRE_LIMIT:
            return None
        dx = _min_logical_weight(self.hz, self.hx)
        dz = _min_logical_weight(self.hx, self.hz)
        return min(dx, dz)

    # -- coset machinery -------------------------------------------------------

    @cached_property
    def _x_span(self) -> np.ndarray:
        self._check_coset_cap()
        return gf2.span(gf2.row_basis(self.hx), cap=COSET_CAP)

    @cached_property
    def _z_span(self) -> np.ndarray:
        self._check_coset_cap()
        return gf2.span(gf2.row_basis(self.hz), cap=COSET_CAP)

    def _check_coset_cap(self):
        if 2 ** (self.rank_hx + self.rank_hz) > COSET_CAP:
            raise EnumerationTooLarge(
                f"stabilizer group 2^{self.rank_hx + self.rank_hz} exceeds cap {COSET_CAP}"
            )

    # -- queries ---------------------------------------------------------------

    def check_length(self, p: PauliOp):
        if p.n != self.n:
            raise LengthMismatch(f"Pauli on {p.n} qubits, code has {self.n}")

    def syndrome(self, p: PauliOp) -> np.ndarray:
        """(hz @ e_x ; hx @ e_z) mod 2 in declared generator order."""
        self.check_length(p)
        sz = (self.hz @ p.x) % 2 if self.hz.shape[0] else np.zeros(0, dtype=np.uint8)
        sx = (self.hx @ p.z) % 2 if self.hx.shape[0] else np.zeros(0, dtype=np.uint8)
        return np.concatenate([sz, sx]).astype(np.uint8)

    def syndrome_of_bits(self, e_x: np.ndarray, e_z: np.ndarray) -> np.ndarray:
        return self.syndrome(PauliOp(e_x, e_z))

    def split_syndrome(self, sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Split a full syndrome into (Z-check bits, X-check bits)."""
        lz = self.hz.shape[0]
        sigma = gf2.as_gf2(sigma)
        if sigma.shape[0] != self.num_generators:
            raise LengthMismatch("syndrome length differs from generator count")
        return sigma[:lz], sigma[lz:]

    def reduced_x_weight(self, e_x: np.ndarray) -> int:
        """Min Hamming weight of e_x over the rowspace(hx) coset."""
        coset = self._x_span ^ gf2.as_gf2(e_x)
        return int(coset.sum(axis=1).min())

    def reduced_z_weight(self, e_z: np.ndarray) -> int:
        coset = self._z_span ^ gf2.as_gf2(e_z)
        return int(coset.sum(axis=1).min())

    def reduced_weight(self, p: PauliOp) -> int:
        """max of the X- and Z-part coset minima (Def. by exhaustive search)."""
        self.check_length(p)
        return max(self.reduced_x_weight(p.x), self.reduced_z_weight(p.z))

    def is_stabilizer(self, p: PauliOp) -> bool:
        return self.reduced_weight(p) == 0

    def logical_action(self, p: PauliOp) -> bool:
        """True if p (assumed zero-syndrome) acts nontrivially on logicals."""
        for lz in self.lz:
            if int(np.dot(lz, p.x)) % 2:
                return True
        for lx in self.lx:
            if int(np.dot(lx, p.z)) % 2:
                return True
        return False

    def is_logical_failure(self, p: PauliOp) -> bool:
        """Nonzero syndrome or nontrivial logical action."""
        return bool(self.syndrome(p).any()) or self.logical_action(p)

    def __repr__(self) -> str:
        d = self.d_min
        return f"CssCode({self.name}: [[{self.n},{self.m}{',' + str(d) if d else ''}]])"


def new_css(hx, hz, name: str = "css", d_min: int | None = None) -> CssCode:
    """Validated CSS code from a parity-check pair."""
    return CssCode(hx, hz, name=name, d_min=d_min)


def _quotient_basis(kernel: np.ndarray, checks: np.ndarray, want: int) -> np.ndarray:
    """`want` kernel vectors independent modulo the row space of `checks`."""
    stack = gf2.row_basis(checks)
    picked = []
    for v in kernel:
        cand = np.vstack([stack, v]) if stack.size else v.reshape(1, -1)
        if gf2.rank(cand) > stack.shape[0]:
            picked.append(v)
            stack = gf2.row_basis(cand)
        if len(picked) == want:
            break
    assert len(picked) == want, "logical basis extraction failed"
    return np.array(picked, dtype=np.uint8)


def _min_logical_weight(h_kernel_of: np.ndarray, h_modulo: np.ndarray) -> int:
    """Min weight over ker(h_kernel_of) \\ rowspace(h_modulo), by enumeration."""
    kernel = gf2.null_space(h_kernel_of)
    if 2 ** kernel.shape[0] > COSET_CAP:
        raise EnumerationTooLarge("kernel too large for distance enumeration")
    elements = gf2.span(kernel, cap=COSET_CAP)
    modulo_rref, modulo_pivots = gf2.rref(h_modulo)
    modulo_rref = modulo_rref[: len(modulo_pivots)]
    best = None
    weights = elements.sum(axis=1)
    for idx in np.argsort(weights):
        v = elements[idx]
        w = int(weights[idx])
        if w == 0:
            continue
        if best is not None and w >= best:
            break
        if not gf2.in_row_space(v, modulo_rref, modulo_pivots):
            best = w
            break
    assert best is not None, "no logical element found"
    return best


# -- spec'd operations over codes ---------------------------------------------


def hypergraph_product(h1, h2, name: str | None = None) -> CssCode:
    """Standard hypergraph-product CSS code of two classical checks.

    hx = [h1 (x) I_n2 | I_r1 (x) h2^T], hz = [I_n1 (x) h2 | h1^T (x) I_r2];
    orthogonality holds by construction, n = n1*n2 + r1*r2.
    """
    h1 = gf2.as_gf2(np.atleast_2d(h1))
    h2 = gf2.as_gf2(np.atleast_2d(h2))
    if h1.size == 0 or h2.size == 0:
        raise DimensionMismatch("hypergraph product needs nonempty factors")
    r1, n1 = h1.shape
    r2, n2 = h2.shape
    hx = np.concatenate(
        [np.kron(h1, np.eye(n2, dtype=np.uint8)), np.kron(np.eye(r1, dtype=np.uint8), h2.T)],
        axis=1,
    )
    hz = np.concatenate(
        [np.kron(np.eye(n1, dtype=np.uint8), h2), np.kron(h1.T, np.eye(r2, dtype=np.uint8))],
        axis=1,
    )
    label = name or f"hgp_{n1 * n2 + r1 * r2}"
    return CssCode(hx, hz, name=label)


def ldpc_profile(code: CssCode) -> LdpcProfile:
    """r = max generator weight; s = max column weight of stacked (hx; hz)."""
    rows = [code.hx, code.hz]
    weights = [m.sum(axis=1) for m in rows if m.shape[0]]
    r = int(max((w.max() for w in weights), default=0))
    stacked = np.concatenate([code.hx, code.hz], axis=0)
    s = int(stacked.sum(axis=0).max()) if stacked.shape[0] else 0
    return LdpcProfile(r=r, s=s)


def syndrome(code: CssCode, p: PauliOp) -> np.ndarray:
    return code.syndrome(p)


def reduced_weight(code: CssCode, p: PauliOp) -> int:
    return code.reduced_weight(p)


def operator_reduced_weight(code: CssCode, expr: LinearOperatorExpr) -> int:
    """Max reduced weight over Pauli terms with surviving coefficients.

    The code block occupies the last `code.n` wires of the expression; any
    leading wires are auxiliary and do not count toward the weight.
    """
    if expr.n < code.n:
        raise LengthMismatch("expression narrower than the code block")
    offset = expr.n - code.n
    best = 0
    for _, p in expr.nonzero_terms():
        block = PauliOp(p.x[offset:], p.z[offset:])
        best = max(best, code.reduced_weight(block))
    return best


# -- bundled codes and file format ---------------------------------------------

_HAMMING_743 = np.array(
    [
        [0, 0, 0, 1, 1, 1, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [1, 0, 1, 0, 1, 0, 1],
    ],
    dtype=np.uint8,
)


def repetition_check(k: int) -> np.ndarray:
    """(k-1) x k chain-style repetition-code parity checks."""
    h = np.zeros((k - 1, k), dtype=np.uint8)
    for i in range(k - 1):
        h[i, i] = 1
        h[i, i + 1] = 1
    return h


def steane_code() -> CssCode:
    return CssCode(_HAMMING_743, _HAMMING_743, name="steane")


def hgp5_code() -> CssCode:
    """[[5,1,2]] hypergraph product of two length-2 repetition checks."""
    h = np.array([[1, 1]], dtype=np.uint8)
    return hypergraph_product(h, h, name="hgp5")


def hgp13_code() -> CssCode:
    """[[13,1,3]] surface code: hypergraph product of 3-bit repetition checks."""
    h = repetition_check(3)
    return hypergraph_product(h, h, name="hgp13")


def bundled_codes() -> dict[str, CssCode]:
    return {"steane": steane_code(), "hgp5": hgp5_code(), "hgp13": hgp13_code()}


def get_code(name: str) -> CssCode:
    codes = bundled_codes()
    if name not in codes:
        raise KeyError(f"unknown code {name!r}; bundled: {sorted(codes)}")
    return codes[name]


def code_to_json(code: CssCode) -> str:
    payload = {
        "name": code.name,
        "n": code.n,
        "hx": code.hx.astype(int).tolist(),
        "hz": code.hz.astype(int).tolist(),
    }
    if code.d_min is not None:
        payload["d_min"] = code.d_min
    return json.dumps(payload, indent=2)


def code_from_json(text: str) -> CssCode:
    payload = json.loads(text)
    return CssCode(
        np.array(payload["hx"], dtype=np.uint8).reshape(-1, payload["n"]),
        np.array(payload["hz"], dtype=np.uint8).reshape(-1, payload["n"]),
        name=payload.get("name", "css"),
        d_min=payload.get("d_min"),
    )


def enumerate_paulis_up_to_weight(n: int, max_weight: int):
    """All Paulis of weight <= max_weight, in (weight, lexicographic) order."""
    yield PauliOp.identity(n)
    for w in range(1, max_weight + 1):
        for support in itertools.combinations(range(n), w):
            for kinds in itertools.product("XYZ", repeat=w):
                p = PauliOp.identity(n)
                for q, kind in zip(support, kinds):
                    p = p * PauliOp.single(n, kind, q)
                yield p
