"""Dense statevector simulation: circuit execution, projector algebra,
non-Pauli single-shot verification, and gate teleportation.

States live on up to 22 wires as complex arrays of shape (2,) * q with
axis i = wire i.  All equality checks are global-phase-insensitive
(|<a|b>|^2) with tolerance 1e-10 unless noted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import GateKind, LayeredCircuit, SyndromeCircuit
from .codes import CssCode, operator_reduced_weight
from .errors import (
    DimensionMismatch,
    SizeLimit,
    StateNotNormalized,
    WeightPreconditionViolated,
)
from .gf2 import as_gf2, span, row_basis
from .pauli import LinearOperatorExpr, PauliOp

WIRE_LIMIT = 22
ATOL = 1e-10

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class StateVector:
    """Mutable dense state on `num_wires` wires."""

    def __init__(self, amplitudes: np.ndarray, num_wires: int | None = None):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        q = int(np.log2(amplitudes.size))
        if 2**q != amplitudes.size:
            raise DimensionMismatch("amplitude count is not a power of two")
        if q > WIRE_LIMIT:
            raise SizeLimit(f"{q} wires exceed the {WIRE_LIMIT}-wire limit")
        if num_wires is not None and num_wires != q:
            raise DimensionMismatch("wire count disagrees with amplitudes")
        self.num_wires = q
        self.amps = amplitudes.reshape((2,) * q).copy()

    @staticmethod
    def zeros(num_wires: int) -> "StateVector":
        if num_wires > WIRE_LIMIT:
            raise SizeLimit(f"{num_wires} wires exceed the {WIRE_LIMIT}-wire limit")
        amps = np.zeros((2,) * num_wires, dtype=complex)
        amps[(0,) * num_wires] = 1.0
        return StateVector(amps)

    def copy(self) -> "StateVector":
        return StateVector(self.amps.copy())

    def vector(self) -> np.ndarray:
        return self.amps.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "StateVector":
        out = self.copy()
        out.amps /= self.norm()
        return out

    def require_normalized(self):
        if abs(self.norm() - 1.0) > 1e-8:
            raise StateNotNormalized(f"norm is {self.norm():.6g}")

    # -- gates --------------------------------------------------------------

    def apply_1q(self, u: np.ndarray, wire: int):
        self.amps = np.moveaxis(
            np.tensordot(u, self.amps, axes=([1], [wire])), 0, wire
        )

    def apply_h(self, wire: int):
        self.apply_1q(_H, wire)

    def apply_x(self, wire: int):
        self.amps = np.flip(self.amps, axis=wire)

    def apply_z(self, wire: int):
        idx = [slice(None)] * self.num_wires
        idx[wire] = 1
        self.amps[tuple(idx)] *= -1

    def apply_cnot(self, control: int, target: int):
        idx = [slice(None)] * self.num_wires
        idx[control] = 1
        sub = self.amps[tuple(idx)]
        self.amps[tuple(idx)] = np.flip(sub, axis=target if target < control else target - 1)

    def apply_cz(self, a: int, b: int):
        idx = [slice(None)] * self.num_wires
        idx[a] = 1
        idx[b] = 1
        self.amps[tuple(idx)] *= -1

    def apply_pauli(self, p: PauliOp, offset: int = 0):
        """Apply phase * X^x Z^z with wire i of p mapped to offset + i."""
        # Z before X so that X^x Z^z acts with Z first on kets.
        for i in np.nonzero(p.z)[0]:
            self.apply_z(offset + int(i))
        for i in np.nonzero(p.x)[0]:
            self.apply_x(offset + int(i))
        if p.phase != 1:
            self.amps *= p.phase

    # -- measurement ----------------------------------------------------------

    def prob_of_outcome(self, wire: int, outcome: int) -> float:
        idx = [slice(None)] * self.num_wires
        idx[wire] = outcome
        return float(np.linalg.norm(self.amps[tuple(idx)]) ** 2)

    def measure(self, wire: int, rng=None, forced: int | None = None) -> tuple[int, float]:
        """Projective Z measurement keeping the wire (collapsed in place).

        With `forced`, post-selects that outcome (its probability must be
        nonzero).  Without `forced` and without `rng`, requires the outcome
        to be deterministic within ATOL.
        """
        p1 = self.prob_of_outcome(wire, 1)
        if forced is not None:
            outcome = forced
        elif rng is not None:
            outcome = int(rng.random() < p1)
        else:
            if p1 > 1 - ATOL:
                outcome = 1
            elif p1 < ATOL:
                outcome = 0
            else:
                raise ValueError("outcome is random; pass rng or forced")
        prob = p1 if outcome == 1 else 1 - p1
        if prob <= ATOL * ATOL:
            raise ValueError("forced outcome has zero probability")
        idx = [slice(None)] * self.num_wires
        idx[wire] = 1 - outcome
        self.amps[tuple(idx)] = 0
        self.amps /= np.sqrt(prob)
        return outcome, prob

    def remove_wire(self, wire: int, outcome: int):
        """Drop a collapsed wire (amplitudes on the other branch must be 0)."""
        idx = [slice(None)] * self.num_wires
        idx[wire] = outcome
        self.amps = self.amps[tuple(idx)].copy()
        self.num_wires -= 1

    # -- overlaps ---------------------------------------------------------------

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.vector(), other.vector()))

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(self.overlap(other)) ** 2)


# -- codeword construction ------------------------------------------------------


def encode_logical_state(code: CssCode, logical_amps: np.ndarray) -> StateVector:
    """V |psi_L> for a CSS code: superposition over X-stabilizer cosets.

    `logical_amps` has length 2^m in the computational basis of the m
    logical qubits (logical bit k toggled by x_logicals[k]).
    """
    if code.n > WIRE_LIMIT:
        raise SizeLimit(f"{code.n} wires exceed the {WIRE_LIMIT}-wire limit")
    logical_amps = np.asarray(logical_amps, dtype=complex).reshape(-1)
    if logical_amps.size != 2**code.m:
        raise DimensionMismatch("logical amplitude count != 2^m")
    coset = span(row_basis(code.hx))
    vec = np.zeros(2**code.n, dtype=complex)
    weights = [1 << (code.n - 1 - w) for w in range(code.n)]
    weights = np.array(weights, dtype=np.int64)
    for b in range(2**code.m):
        if logical_amps[b] == 0:
            continue
        shift = np.zeros(code.n, dtype=np.uint8)
        for k in range(code.m):
            if (b >> (code.m - 1 - k)) & 1:
                shift ^= code.lx[k]
        rows = coset ^ shift
        idx = rows.astype(np.int64) @ weights
        vec[idx] += logical_amps[b] / np.sqrt(coset.shape[0])
    sv = StateVector(vec)
    sv.amps /= sv.norm()
    return sv


def logical_zero(code: CssCode) -> StateVector:
    amps = np.zeros(2**code.m, dtype=complex)
    amps[0] = 1
    return encode_logical_state(code, amps)


# -- circuit execution ------------------------------------------------------------


@dataclass
class RunRecord:
    outcomes: dict[int, int]
    probabilities: dict[int, float]

    def outcome_bits(self, wires) -> np.ndarray:
        return np.array([self.outcomes[w] for w in wires], dtype=np.uint8)


def run_circuit(
    state: StateVector,
    circuit: LayeredCircuit,
    faults=(),
    rng=None,
    forced_outcomes: dict[int, int] | None = None,
) -> RunRecord:
    """Execute a circuit in place with ideal gate semantics.

    `faults` are FaultEvent-like objects (location, pauli, flip_measurement);
    a Pauli fault applies after its location's gate, a measurement flip
    XORs the recorded outcome.  Preparation resets the wire via a collapse
    (outcome discarded) followed by state injection, so it is valid on
    entangled inputs as well.
    """
    forced_outcomes = forced_outcomes or {}
    by_loc: dict[tuple[int, int], list] = {}
    for f in faults:
        by_loc.setdefault((f.location.layer, f.location.pos), []).append(f)
    outcomes: dict[int, int] = {}
    probs: dict[int, float] = {}
    for i, layer in enumerate(circuit.layers):
        for j, g in enumerate(layer):
            flip = 0
            w = g.operands[0]
            if g.kind == GateKind.IDLE:
                pass
            elif g.kind == GateKind.H:
                state.apply_h(w)
            elif g.kind == GateKind.CNOT:
                state.apply_cnot(*g.operands)
            elif g.kind == GateKind.CZ:
                state.apply_cz(*g.operands)
            elif g.kind == GateKind.PAULI:
                for k, wire in enumerate(g.operands):
                    state.apply_pauli(g.pauli.restricted([k]).bare(), offset=wire)
            elif g.kind in (GateKind.PREP_Z, GateKind.PREP_X):
                out, _ = state.measure(w, rng=rng, forced=forced_outcomes.get(w))
                if out == 1:
                    state.apply_x(w)
                if g.kind == GateKind.PREP_X:
                    state.apply_h(w)
            elif g.kind in (GateKind.MEAS_Z, GateKind.MEAS_X):
                if g.kind == GateKind.MEAS_X:
                    state.apply_h(w)
                out, prob = state.measure(w, rng=rng, forced=forced_outcomes.get(w))
                outcomes[w] = out
                probs[w] = prob
            else:  # pragma: no cover
                raise ValueError(f"unhandled gate kind {g.kind}")
            for f in by_loc.get((i, j), ()):
                if f.flip_measurement:
                    flip ^= 1
                elif f.pauli is not None:
                    for k, wire in enumerate(g.operands):
                        state.apply_pauli(f.pauli.restricted([k]).bare(), offset=wire)
            if flip and g.kind in (GateKind.MEAS_Z, GateKind.MEAS_X):
                outcomes[w] ^= 1
    return RunRecord(outcomes=outcomes, probabilities=probs)


def syndrome_outcome_bits(sc: SyndromeCircuit, record: RunRecord) -> np.ndarray:
    wires = [sc.ancilla_wire(g) for g in range(sc.num_generators)]
    return record.outcome_bits(wires)


def run_syndrome_circuit_compact(
    sc: SyndromeCircuit,
    data_state: StateVector,
    faults=(),
    rng=None,
    forced_outcomes: dict[int, int] | None = None,
) -> tuple[np.ndarray, StateVector]:
    """Exact syndrome-circuit run with lazily materialized ancillas.

    Semantically identical to `run_circuit` on the full register: each
    ancilla is injected right before its first interaction (or first fault
    on its wires) and measured right after its last one, which is sound
    because gates on disjoint wires commute.  Peak width is n plus the
    widest concurrent ancilla window instead of n + l, which is what makes
    the 13-qubit codes simulable.

    Returns (syndrome bits in generator order, post-circuit data state).
    """
    circuit = sc.circuit
    n = sc.n
    forced_outcomes = forced_outcomes or {}
    by_loc: dict[tuple[int, int], list] = {}
    for f in faults:
        by_loc.setdefault((f.location.layer, f.location.pos), []).append(f)

    # A wire matters at layer i if a unitary gate acts on it there, or a
    # fault (of any kind, including on prep or idle locations) references a
    # location containing it.
    triggers: dict[int, set[int]] = {w: set() for w in range(circuit.num_wires)}
    prep_kind: dict[int, GateKind] = {}
    meas_layer: dict[int, int] = {}
    meas_kind: dict[int, GateKind] = {}
    for i, layer in enumerate(circuit.layers):
        for j, g in enumerate(layer):
            unitary = g.kind in (GateKind.CNOT, GateKind.CZ, GateKind.H, GateKind.PAULI)
            faulted = (i, j) in by_loc
            for w in g.operands:
                if unitary or faulted:
                    triggers[w].add(i)
            if g.kind in (GateKind.PREP_Z, GateKind.PREP_X):
                prep_kind[g.operands[0]] = g.kind
            if g.kind in (GateKind.MEAS_Z, GateKind.MEAS_X):
                meas_layer[g.operands[0]] = i
                meas_kind[g.operands[0]] = g.kind

    first_need: dict[int, int] = {}
    last_need: dict[int, int] = {}
    for w in range(n, circuit.num_wires):
        live = sorted(t for t in triggers[w] if t < meas_layer[w])
        first_need[w] = live[0] if live else meas_layer[w] - 1
        last_need[w] = live[-1] if live else meas_layer[w] - 1

    sv = data_state.copy()
    axis_of: dict[int, int] = {w: w for w in range(n)}
    outcome_by_wire: dict[int, int] = {}

    def inject(w: int):
        basis = np.array([1.0, 0.0], dtype=complex)
        sv.amps = np.multiply.outer(sv.amps, basis)
        sv.num_wires += 1
        axis_of[w] = sv.num_wires - 1
        if prep_kind[w] == GateKind.PREP_X:
            sv.apply_h(axis_of[w])

    def retire(w: int):
        if meas_kind[w] == GateKind.MEAS_X:
            sv.apply_h(axis_of[w])
        out, _ = sv.measure(axis_of[w], rng=rng, forced=forced_outcomes.get(w))
        sv.remove_wire(axis_of[w], out)
        gone = axis_of.pop(w)
        for k in axis_of:
            if axis_of[k] > gone:
                axis_of[k] -= 1
        outcome_by_wire[w] = out

    for i, layer in enumerate(circuit.layers):
        for w in sorted(first_need):
            if first_need[w] == i:
                inject(w)
        for j, g in enumerate(layer):
            w0 = g.operands[0]
            retired = any(w >= n and w not in axis_of for w in g.operands)
            if g.kind == GateKind.CNOT and not retired:
                sv.apply_cnot(axis_of[g.operands[0]], axis_of[g.operands[1]])
            elif g.kind == GateKind.CZ and not retired:
                sv.apply_cz(axis_of[g.operands[0]], axis_of[g.operands[1]])
            elif g.kind == GateKind.H and not retired:
                sv.apply_h(axis_of[w0])
            elif g.kind == GateKind.PAULI and not retired:
                for k, w in enumerate(g.operands):
                    sv.apply_pauli(g.pauli.restricted([k]).bare(), offset=axis_of[w])
            for f in by_loc.get((i, j), ()):
                if f.flip_measurement:
                    if g.kind in (GateKind.MEAS_Z, GateKind.MEAS_X):
                        outcome_by_wire[w0] ^= 1
                elif not retired:
                    for k, w in enumerate(g.operands):
                        sv.apply_pauli(f.pauli.restricted([k]).bare(), offset=axis_of[w])
        for w in sorted(last_need):
            if last_need[w] == i and w in axis_of:
                retire(w)

    bits = np.array(
        [outcome_by_wire[sc.ancilla_wire(g)] for g in range(sc.num_generators)],
        dtype=np.uint8,
    )
    return bits, sv


# -- projector algebra ------------------------------------------------------------


def apply_generator(code: CssCode, state: StateVector, g: int, offset: int = 0) -> StateVector:
    out = state.copy()
    out.apply_pauli(code.generators[g], offset=offset)
    return out


def project_syndrome(
    code: CssCode, state: StateVector, sigma, offset: int = 0
) -> StateVector:
    """Unnormalized Pi_sigma |state> = prod_i (1 + (-1)^sigma_i M_i)/2 |state>.

    `offset` locates the code block within a wider register (block wires
    are offset..offset+n-1).
    """
    sigma = as_gf2(sigma)
    out = state.copy()
    for i in range(code.num_generators):
        flipped = apply_generator(code, out, i, offset=offset)
        sign = -1.0 if sigma[i] else 1.0
        out.amps = (out.amps + sign * flipped.amps) / 2
    return out


@dataclass
class MeasurementBranch:
    sigma: np.ndarray
    probability: float
    state: StateVector


def enumerate_branches(
    code: CssCode, state: StateVector, offset: int = 0, tol: float = 1e-12
) -> list[MeasurementBranch]:
    """All syndrome branches with probability > tol, normalized.

    Splits recursively generator by generator, pruning zero-norm branches,
    so the cost scales with the number of surviving branches rather than
    2^l.
    """
    state.require_normalized()
    branches: list[MeasurementBranch] = []

    def descend(current: StateVector, bits: list[int], g: int):
        if g == code.num_generators:
            p = current.norm() ** 2
            branches.append(
                MeasurementBranch(
                    sigma=np.array(bits, dtype=np.uint8),
                    probability=float(p),
                    state=current.normalized(),
                )
            )
            return
        flipped = apply_generator(code, current, g, offset=offset)
        for bit, sign in ((0, 1.0), (1, -1.0)):
            half = StateVector((current.amps + sign * flipped.amps) / 2)
            if half.norm() ** 2 > tol:
                descend(half, bits + [bit], g + 1)

    descend(state.copy(), [], 0)
    return branches


# -- non-Pauli single-shot verification ---------------------------------------------


@dataclass
class BranchReport:
    sigma_real: np.ndarray
    sigma_recorded: np.ndarray
    probability: float
    fidelity: float
    residual: PauliOp
    residual_reduced_weight: int
    pauli_class_collapse: bool


@dataclass
class NonPauliReport:
    branches: list[BranchReport]
    total_probability: float

    @property
    def ok(self) -> bool:
        return all(b.pauli_class_collapse for b in self.branches)


def verify_nonpauli_single_shot(
    code: CssCode,
    state: StateVector,
    expr: LinearOperatorExpr,
    e_syn,
    decoder,
    collapse_tol: float = 1e-8,
) -> NonPauliReport:
    """Branch-by-branch check of single-shot correction for a linear error.

    Applies `expr` to the code state, enumerates syndrome branches, shifts
    the recorded syndrome by `e_syn`, applies the decoder's correction for
    the recorded syndrome, and compares each corrected branch against
    (residual Pauli) |state>.  Requires operator reduced weight < d_min/2.
    """
    if expr.n != code.n:
        raise DimensionMismatch("expression width must equal the block size")
    w = operator_reduced_weight(code, expr)
    if code.d_min is None or not w < code.d_min / 2:
        raise WeightPreconditionViolated(
            f"operator reduced weight {w} not below d_min/2"
        )
    e_syn = as_gf2(e_syn)
    state.require_normalized()

    corrupted = StateVector(np.zeros_like(state.amps))
    for c, p in expr.nonzero_terms():
        piece = state.copy()
        piece.apply_pauli(p)
        corrupted.amps += c * piece.amps
    total = corrupted.norm() ** 2
    corrupted.amps /= np.sqrt(total)

    term_by_syndrome: dict[bytes, PauliOp] = {}
    for _, p in expr.nonzero_terms():
        term_by_syndrome.setdefault(code.syndrome(p).tobytes(), p)

    reports = []
    for br in enumerate_branches(code, corrupted):
        sigma_rec = br.sigma ^ e_syn
        correction = decoder.decode(sigma_rec).pauli
        corrected = br.state.copy()
        corrected.apply_pauli(correction)
        term = term_by_syndrome.get(br.sigma.tobytes())
        if term is None:
            # Branch created by the correction path, not by a term of E.
            residual = correction
        else:
            residual = (term * correction).bare()
        reference = state.copy()
        reference.apply_pauli(residual)
        fid = corrected.fidelity(reference)
        reports.append(
            BranchReport(
                sigma_real=br.sigma,
                sigma_recorded=sigma_rec,
                probability=br.probability,
                fidelity=fid,
                residual=residual,
                residual_reduced_weight=code.reduced_weight(residual),
                pauli_class_collapse=bool(fid >= 1 - collapse_tol),
            )
        )
    return NonPauliReport(branches=reports, total_probability=float(total))


# -- encoded ancillas and gate teleportation ------------------------------------------


@dataclass(frozen=True)
class LogicalClifford:
    """A logical Clifford on m logical qubits with its Pauli conjugation rule."""

    name: str
    matrix: np.ndarray

    @property
    def m(self) -> int:
        return int(np.log2(self.matrix.shape[0]))

    def conjugated_pauli(self, x: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Symplectic image (x', z') of U X^x Z^z U^dag, phases dropped."""
        if self.name == "identity":
            return x, z
        if self.m != 1:
            raise DimensionMismatch("non-identity corrections supported for m=1 only")
        x_out = np.zeros_like(x)
        z_out = np.zeros_like(z)
        if x[0]:
            xb, zb = _conjugate_single(self.matrix, "x")
            x_out[0] ^= xb
            z_out[0] ^= zb
        if z[0]:
            xb, zb = _conjugate_single(self.matrix, "z")
            x_out[0] ^= xb
            z_out[0] ^= zb
        return x_out, z_out


def _conjugate_single(u: np.ndarray, which: str) -> tuple[int, int]:
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Z = np.array([[1, 0], [0, -1]], dtype=complex)
    p = X if which == "x" else Z
    img = u @ p @ u.conj().T
    for xb, zb in ((1, 0), (0, 1), (1, 1)):
        cand = X if (xb, zb) == (1, 0) else Z if (xb, zb) == (0, 1) else X @ Z
        ratio = img @ np.linalg.inv(cand)
        if np.allclose(ratio, ratio[0, 0] * np.eye(2), atol=1e-9):
            return xb, zb
    raise DimensionMismatch("matrix does not normalize the Pauli group")


def logical_identity(m: int = 1) -> LogicalClifford:
    return LogicalClifford("identity", np.eye(2**m, dtype=complex))


def logical_hadamard() -> LogicalClifford:
    return LogicalClifford("hadamard", _H.copy())


def logical_phase() -> LogicalClifford:
    return LogicalClifford("phase", np.diag([1, 1j]).astype(complex))


LOGICAL_GATES = {
    "identity": logical_identity,
    "hadamard": logical_hadamard,
    "phase": logical_phase,
}


def prepare_ancilla_ideal(code: CssCode, gate: LogicalClifford) -> StateVector:
    """Encoded two-block ancilla (V (x) V)(1 (x) U_g) |Phi+>^(x)m."""
    if 2 * code.n > WIRE_LIMIT:
        raise SizeLimit(f"two blocks need {2 * code.n} wires > {WIRE_LIMIT}")
    if gate.matrix.shape != (2**code.m, 2**code.m):
        raise DimensionMismatch(
            f"gate acts on {gate.m} logical qubits, code has m={code.m}"
        )
    dim = 2**code.n
    total = np.zeros(dim * dim, dtype=complex)
    basis = [encode_logical_state(code, _unit(code.m, b)).vector() for b in range(2**code.m)]
    for a in range(2**code.m):
        right = np.zeros(dim, dtype=complex)
        for b in range(2**code.m):
            if gate.matrix[b, a] != 0:
                right += gate.matrix[b, a] * basis[b]
        total += np.kron(basis[a], right) / np.sqrt(2**code.m)
    return StateVector(total)


def _unit(m: int, b: int) -> np.ndarray:
    v = np.zeros(2**m, dtype=complex)
    v[b] = 1
    return v


@dataclass
class TeleportOutcome:
    data_bits: np.ndarray
    ancilla_bits: np.ndarray
    logical_x_outcome: np.ndarray
    logical_z_outcome: np.ndarray
    correction: PauliOp


def teleport_gate(
    data_state: StateVector,
    ancilla_state: StateVector,
    code: CssCode,
    gate: LogicalClifford,
    rng=None,
    forced_outcomes: dict[int, int] | None = None,
) -> tuple[StateVector, TeleportOutcome]:
    """Teleport `gate` onto the data block via a transversal Bell measurement.

    Layout: wires 0..n-1 data, n..2n-1 first ancilla block, 2n..3n-1 second.
    Performs transversal CNOT(data -> block1), transversal H on data,
    transversal Z measurement of data and block1, then the Pauli correction
    for the measured logical Bell outcome.  Returns the corrected output
    block and the outcome record.
    """
    n = code.n
    if 3 * n > WIRE_LIMIT:
        raise SizeLimit(f"teleportation needs {3 * n} wires > {WIRE_LIMIT}")
    data_state.require_normalized()
    ancilla_state.require_normalized()
    if ancilla_state.num_wires != 2 * n or data_state.num_wires != n:
        raise DimensionMismatch("state widths must be n and 2n")

    joint = StateVector(np.kron(data_state.vector(), ancilla_state.vector()))
    for i in range(n):
        joint.apply_cnot(i, n + i)
    for i in range(n):
        joint.apply_h(i)

    forced_outcomes = forced_outcomes or {}
    bits = np.zeros(2 * n, dtype=np.uint8)
    for w in range(2 * n - 1, -1, -1):
        out, _ = joint.measure(w, rng=rng, forced=forced_outcomes.get(w))
        bits[w] = out
        joint.remove_wire(w, out)

    u_d, u_a = bits[:n], bits[n:]
    # X-bar readout of the data block (transversal H turned X^lx into Z^lx)
    # and Z-bar readout of the first ancilla block.
    x_readout = (code.lx @ u_d) % 2
    z_readout = (code.lz @ u_a) % 2

    # Output block carries U (X^z_readout Z^x_readout) |psi>; undo the
    # conjugated Pauli, as in bare teleportation where the target picks up
    # X^(ancilla bit) Z^(data bit).
    cx, cz = gate.conjugated_pauli(z_readout.copy(), x_readout.copy())
    correction = _transversal_logical_pauli(code, cx, cz)
    joint.apply_pauli(correction)
    return joint, TeleportOutcome(
        data_bits=u_d,
        ancilla_bits=u_a,
        logical_x_outcome=x_readout,
        logical_z_outcome=z_readout,
        correction=correction,
    )


def _transversal_logical_pauli(code: CssCode, xexp: np.ndarray, zexp: np.ndarray) -> PauliOp:
    x = np.zeros(code.n, dtype=np.uint8)
    z = np.zeros(code.n, dtype=np.uint8)
    for k in range(code.m):
        if xexp[k]:
            x ^= code.lx[k]
        if zexp[k]:
            z ^= code.lz[k]
    return PauliOp(x, z)
