"""Layered circuit IR, syndrome-extraction synthesis, light cones,
and sequentialization.

A circuit is a list of layers over `num_wires` wires.  Within a layer every
not-yet-measured wire is touched exactly once (Idle fills gaps); measuring
a wire turns it classical and it may not be touched again.  Locations are
(layer, position) pairs; each gate, including Idle, is one location.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from .codes import CssCode
from .errors import EmptyCode, IndexOutOfRange, LengthMismatch
from .pauli import PauliOp


class GateKind(str, Enum):
    PREP_Z = "prep_z"
    PREP_X = "prep_x"
    CNOT = "cnot"
    CZ = "cz"
    H = "h"
    MEAS_Z = "meas_z"
    MEAS_X = "meas_x"
    IDLE = "idle"
    PAULI = "pauli"


TWO_QUBIT_KINDS = {GateKind.CNOT, GateKind.CZ}
MEAS_KINDS = {GateKind.MEAS_Z, GateKind.MEAS_X}
PREP_KINDS = {GateKind.PREP_Z, GateKind.PREP_X}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    operands: tuple[int, ...]
    pauli: PauliOp | None = None

    def __post_init__(self):
        arity = 2 if self.kind in TWO_QUBIT_KINDS else len(self.operands)
        if self.kind in TWO_QUBIT_KINDS and len(self.operands) != 2:
            raise ValueError(f"{self.kind.value} takes 2 operands")
        if self.kind not in TWO_QUBIT_KINDS and self.kind != GateKind.PAULI:
            if len(self.operands) != 1:
                raise ValueError(f"{self.kind.value} takes 1 operand")
        if self.kind == GateKind.PAULI:
            if self.pauli is None or self.pauli.n != len(self.operands):
                raise ValueError("pauli gate needs a PauliOp matching its operands")
        del arity


@dataclass(frozen=True)
class Location:
    layer: int
    pos: int


class LayeredCircuit:
    """Immutable layered circuit; validates wire discipline on construction."""

    def __init__(self, num_wires: int, layers: list[list[Gate]]):
        self.num_wires = int(num_wires)
        self.layers = [tuple(layer) for layer in layers]
        self._measured_at: dict[int, int] = {}
        self._validate()

    def _validate(self):
        measured: set[int] = set()
        for i, layer in enumerate(self.layers):
            seen: set[int] = set()
            for g in layer:
                for w in g.operands:
                    if not 0 <= w < self.num_wires:
                        raise IndexOutOfRange(f"wire {w} outside 0..{self.num_wires - 1}")
                    if w in measured:
                        raise ValueError(f"wire {w} used after measurement (layer {i})")
                    if w in seen:
                        raise ValueError(f"wire {w} touched twice in layer {i}")
                    seen.add(w)
            expected = set(range(self.num_wires)) - measured
            if seen != expected:
                missing = sorted(expected - seen)
                raise ValueError(f"layer {i} does not cover wires {missing}")
            for g in layer:
                if g.kind in MEAS_KINDS:
                    measured.add(g.operands[0])
                    self._measured_at[g.operands[0]] = i
        self._measured = measured

    @staticmethod
    def from_gate_layers(num_wires: int, gate_layers) -> "LayeredCircuit":
        """Build from layers of non-idle gates, auto-filling Idles."""
        measured: set[int] = set()
        layers: list[list[Gate]] = []
        for gates in gate_layers:
            used = {w for g in gates for w in g.operands}
            idle = [
                Gate(GateKind.IDLE, (w,))
                for w in range(num_wires)
                if w not in used and w not in measured
            ]
            layers.append(list(gates) + idle)
            measured |= {g.operands[0] for g in gates if g.kind in MEAS_KINDS}
        return LayeredCircuit(num_wires, layers)

    # -- structure ----------------------------------------------------------

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def size(self) -> int:
        """Total location count |Phi|, idles included."""
        return sum(len(layer) for layer in self.layers)

    def locations(self):
        for i, layer in enumerate(self.layers):
            for j, g in enumerate(layer):
                yield Location(i, j), g

    def gate_at(self, loc: Location) -> Gate:
        try:
            return self.layers[loc.layer][loc.pos]
        except IndexError:
            raise IndexOutOfRange(f"no location {loc}") from None

    @cached_property
    def measured_wires(self) -> tuple[int, ...]:
        """Measured wires in gate order (layer-major)."""
        out = []
        for _, g in self.locations():
            if g.kind in MEAS_KINDS:
                out.append(g.operands[0])
        return tuple(out)

    @property
    def classical_wires(self) -> int:
        return len(self._measured)

    @property
    def quantum_wires(self) -> int:
        return self.num_wires - len(self._measured)

    def layer_location_counts(self) -> list[int]:
        return [len(layer) for layer in self.layers]

    def __eq__(self, other):
        if not isinstance(other, LayeredCircuit):
            return NotImplemented
        return self.num_wires == other.num_wires and self.layers == other.layers

    def __repr__(self):
        return f"LayeredCircuit({self.num_wires} wires, depth {self.depth}, size {self.size})"

    # -- serialization: JSON lines, one layer per line ------------------------

    def to_jsonl(self) -> str:
        lines = [json.dumps({"num_wires": self.num_wires})]
        for layer in self.layers:
            entries = []
            for g in sorted(layer, key=lambda g: min(g.operands)):
                entry = {"kind": g.kind.value, "operands": list(g.operands)}
                if g.pauli is not None:
                    entry["pauli"] = {
                        "x": g.pauli.x.astype(int).tolist(),
                        "z": g.pauli.z.astype(int).tolist(),
                        "phase": _PHASE_CODE[g.pauli.phase],
                    }
                entries.append(entry)
            lines.append(json.dumps(entries))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_jsonl(text: str) -> "LayeredCircuit":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = json.loads(lines[0])
        layers = []
        for ln in lines[1:]:
            layer = []
            for entry in json.loads(ln):
                pauli = None
                if "pauli" in entry:
                    p = entry["pauli"]
                    pauli = PauliOp(p["x"], p["z"], _CODE_PHASE[p["phase"]])
                layer.append(Gate(GateKind(entry["kind"]), tuple(entry["operands"]), pauli))
            layers.append(layer)
        return LayeredCircuit(header["num_wires"], layers)


_PHASE_CODE = {1: "+1", -1: "-1", 1j: "+i", -1j: "-i"}
_CODE_PHASE = {v: k for k, v in _PHASE_CODE.items()}


# -- syndrome-extraction synthesis ---------------------------------------------


@dataclass(frozen=True)
class SyndromeCircuit:
    """A syndrome-extraction circuit plus its wire bookkeeping.

    Wires 0..n-1 are data; wire n+g is the ancilla of generator g in the
    code's declared order (Z-checks then X-checks).  The measurement order
    equals the generator order, so outcome flips line up with syndromes.
    """

    circuit: LayeredCircuit
    code: CssCode = field(repr=False)

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def num_generators(self) -> int:
        return self.code.num_generators

    def ancilla_wire(self, generator: int) -> int:
        return self.code.n + generator

    @property
    def data_wires(self) -> range:
        return range(self.code.n)


def build_syndrome_circuit(
    code: CssCode,
    phase_order: str = "x_then_z",
    edge_orders: dict[int, list[int]] | None = None,
) -> SyndromeCircuit:
    """Prep / entangle / measure circuit realizing the projective syndrome
    measurement of `code`.

    Z-checks use PrepZ ancillas with CNOT(data -> ancilla) and MeasZ;
    X-checks use PrepX ancillas with CNOT(ancilla -> data) and MeasX.
    The X-check and Z-check CNOTs are scheduled as two disjoint phases,
    each greedily edge-colored on its own Tanner subgraph (no wire twice
    per layer).  Keeping the phases disjoint makes the schedule valid for
    any CSS code: every overlapping X/Z generator pair crosses on all of
    its (even-sized) qubit overlap, so the circuit measures exactly the
    declared generators.  Interleaving the phases is not sound in general.

    `phase_order` is "x_then_z" or "z_then_x".  `edge_orders` optionally
    fixes, per generator index, the time order of that generator's CNOT
    qubits (default ascending); this is the knob that orients hook errors.
    """
    n = code.n
    l = code.num_generators
    if l == 0:
        raise EmptyCode("code has no stabilizer generators")
    n_z = code.hz.shape[0]

    def color_phase(edges: list[tuple[int, int]]) -> list[list[tuple[int, int]]]:
        # Greedy, with colors strictly increasing within a generator so the
        # temporal CNOT order of each generator equals its edge order.
        used_by_qubit: dict[int, set[int]] = {}
        last_color: dict[int, int] = {}
        layers: list[list[tuple[int, int]]] = []
        for gen, qubit in edges:
            uq = used_by_qubit.setdefault(qubit, set())
            c = last_color.get(gen, -1) + 1
            while c in uq:
                c += 1
            uq.add(c)
            last_color[gen] = c
            while len(layers) <= c:
                layers.append([])
            layers[c].append((gen, qubit))
        return layers

    z_edges, x_edges = tanner_edges(code, edge_orders)
    x_layers = color_phase(x_edges)
    z_layers = color_phase(z_edges)
    phases = (
        x_layers + z_layers if phase_order == "x_then_z" else z_layers + x_layers
    )
    if phase_order not in ("x_then_z", "z_then_x"):
        raise ValueError(f"unknown phase order {phase_order!r}")

    prep = [
        Gate(GateKind.PREP_Z if g < n_z else GateKind.PREP_X, (n + g,))
        for g in range(l)
    ]
    entangling = []
    for colored in phases:
        layer = []
        for gen, qubit in colored:
            anc = n + gen
            if gen < n_z:
                layer.append(Gate(GateKind.CNOT, (qubit, anc)))
            else:
                layer.append(Gate(GateKind.CNOT, (anc, qubit)))
        entangling.append(layer)
    meas = [
        Gate(GateKind.MEAS_Z if g < n_z else GateKind.MEAS_X, (n + g,))
        for g in range(l)
    ]

    circuit = LayeredCircuit.from_gate_layers(n + l, [prep, *entangling, meas])
    if l < n:
        for t in circuit.layer_location_counts():
            assert n <= t < 2 * n, f"layer location count {t} violates [n, 2n) bound"
    return SyndromeCircuit(circuit=circuit, code=code)


def tanner_edges(
    code: CssCode, edge_orders: dict[int, list[int]] | None = None
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """(Z-edges, X-edges) as (generator, qubit) pairs, generator-major.

    Within a generator, qubits run ascending unless `edge_orders` supplies
    an explicit qubit order for that generator index.
    """

    def support(gen: int, row) -> list[int]:
        qubits = [int(q) for q in row.nonzero()[0]]
        if edge_orders and gen in edge_orders:
            custom = list(edge_orders[gen])
            if sorted(custom) != qubits:
                raise ValueError(f"edge order for generator {gen} must permute {qubits}")
            return custom
        return qubits

    n_z = code.hz.shape[0]
    z_edges = [(g, q) for g in range(n_z) for q in support(g, code.hz[g])]
    x_edges = [
        (n_z + g, q)
        for g in range(code.hx.shape[0])
        for q in support(n_z + g, code.hx[g])
    ]
    return z_edges, x_edges


# -- light cones -----------------------------------------------------------------


def shade(circuit: LayeredCircuit, seed, from_layer: int, to_layer: int) -> frozenset[int]:
    """Wires after `to_layer` reachable from `seed` (a wire set at the
    boundary after `from_layer`); two-qubit gates merge cones.

    Boundaries run 0..depth: boundary b sits after layer b (so boundary 0
    precedes the circuit).
    """
    if not 0 <= from_layer <= to_layer <= circuit.depth:
        raise IndexOutOfRange(
            f"need 0 <= {from_layer} <= {to_layer} <= depth {circuit.depth}"
        )
    cone = set(seed)
    for w in cone:
        if not 0 <= w < circuit.num_wires:
            raise IndexOutOfRange(f"seed wire {w} outside circuit")
    for layer in circuit.layers[from_layer:to_layer]:
        grown = set(cone)
        for g in layer:
            ops = set(g.operands)
            if len(ops) > 1 and ops & cone:
                grown |= ops
        cone = grown
    return frozenset(cone)


# -- sequentialization -------------------------------------------------------------


def sequentialize(circuit: LayeredCircuit) -> LayeredCircuit:
    """One non-Idle gate per layer, per-wire gate order preserved.

    All-idle layers pass through unchanged (their idle locations still
    count as noise locations).  Size grows at most by a factor of the wire
    count.
    """
    out_layers: list[list[Gate]] = []
    measured: set[int] = set()
    for layer in circuit.layers:
        actives = [g for g in layer if g.kind != GateKind.IDLE]
        if not actives:
            out_layers.append([g for g in layer if g.operands[0] not in measured])
            continue
        for g in actives:
            idle = [
                Gate(GateKind.IDLE, (w,))
                for w in range(circuit.num_wires)
                if w not in measured and w not in g.operands
            ]
            out_layers.append([g] + idle)
            if g.kind in MEAS_KINDS:
                measured.add(g.operands[0])
    seq = LayeredCircuit(circuit.num_wires, out_layers)
    assert seq.size <= max(1, circuit.num_wires) * max(1, circuit.size)
    return seq
