"""Pauli-frame propagation, terminal-error pushing, and multi-block
error-correction rounds.

Frames track an accumulated Pauli relative to the ideal circuit: CNOT
conjugation spreads X control->target and Z target->control, H swaps the
bits, preparations clear them, and a measurement's recorded flip is the
frame bit that anticommutes with its basis.  Phases are ignored (they are
irrelevant to syndromes and logical action); Y faults enter as X and Z
bits set together.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import GateKind, LayeredCircuit, SyndromeCircuit, shade
from .codes import CssCode
from .decoders import Decoder
from .errors import InvalidLocation
from .gf2 import as_gf2
from .noise import FaultEvent, NoiseModel, sample_faults, substream
from .pauli import PauliOp


@dataclass
class PauliFrame:
    """x/z bit-vectors over a wire register."""

    x: np.ndarray
    z: np.ndarray

    @staticmethod
    def zeros(num_wires: int) -> "PauliFrame":
        return PauliFrame(
            np.zeros(num_wires, dtype=np.uint8), np.zeros(num_wires, dtype=np.uint8)
        )

    @staticmethod
    def from_pauli(p: PauliOp, num_wires: int | None = None) -> "PauliFrame":
        if num_wires is None or num_wires == p.n:
            return PauliFrame(p.x.copy(), p.z.copy())
        f = PauliFrame.zeros(num_wires)
        f.x[: p.n] = p.x
        f.z[: p.n] = p.z
        return f

    def copy(self) -> "PauliFrame":
        return PauliFrame(self.x.copy(), self.z.copy())

    def to_pauli(self) -> PauliOp:
        return PauliOp(self.x, self.z)

    def restricted(self, wires) -> PauliOp:
        return PauliOp(self.x[wires], self.z[wires])

    def __eq__(self, other):
        if not isinstance(other, PauliFrame):
            return NotImplemented
        return bool(
            np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)
        )


@dataclass
class PropagationResult:
    frame: PauliFrame
    flips: dict[int, int]  # measured wire -> recorded-outcome flip bit

    def flip_bits(self, wires) -> np.ndarray:
        return np.array([self.flips[w] for w in wires], dtype=np.uint8)


def propagate(
    circuit: LayeredCircuit, initial: PauliFrame, faults=()
) -> PropagationResult:
    """Conjugate a frame layer by layer, injecting faults after their gates."""
    frame = initial.copy()
    by_loc: dict[tuple[int, int], list[FaultEvent]] = {}
    for f in faults:
        key = (f.location.layer, f.location.pos)
        if f.location.layer >= circuit.depth:
            raise InvalidLocation(f"layer {f.location.layer} outside circuit")
        if f.location.pos >= len(circuit.layers[f.location.layer]):
            raise InvalidLocation(f"no position {key}")
        by_loc.setdefault(key, []).append(f)
    flips: dict[int, int] = {}
    for i, layer in enumerate(circuit.layers):
        for j, g in enumerate(layer):
            w = g.operands[0]
            if g.kind == GateKind.CNOT:
                c, t = g.operands
                frame.x[t] ^= frame.x[c]
                frame.z[c] ^= frame.z[t]
            elif g.kind == GateKind.CZ:
                a, b = g.operands
                frame.z[b] ^= frame.x[a]
                frame.z[a] ^= frame.x[b]
            elif g.kind == GateKind.H:
                frame.x[w], frame.z[w] = frame.z[w], frame.x[w]
            elif g.kind in (GateKind.PREP_Z, GateKind.PREP_X):
                frame.x[w] = 0
                frame.z[w] = 0
            elif g.kind == GateKind.MEAS_Z:
                flips[w] = int(frame.x[w])
            elif g.kind == GateKind.MEAS_X:
                flips[w] = int(frame.z[w])
            elif g.kind == GateKind.PAULI:
                for k, wire in enumerate(g.operands):
                    frame.x[wire] ^= g.pauli.x[k]
                    frame.z[wire] ^= g.pauli.z[k]
            for f in by_loc.get((i, j), ()):
                if f.flip_measurement:
                    if g.kind not in (GateKind.MEAS_Z, GateKind.MEAS_X):
                        raise InvalidLocation("flip fault on a non-measurement location")
                    flips[w] ^= 1
                elif f.pauli is not None:
                    if f.pauli.n != len(g.operands):
                        raise InvalidLocation("fault arity differs from location arity")
                    for k, wire in enumerate(g.operands):
                        frame.x[wire] ^= f.pauli.x[k]
                        frame.z[wire] ^= f.pauli.z[k]
    return PropagationResult(frame=frame, flips=flips)


@dataclass
class TerminalError:
    """Pushed-to-end equivalent of a fault set on a syndrome circuit."""

    data_pauli: PauliOp  # over the data wires only
    syndrome_flips: np.ndarray  # one bit per generator, declared order

    def is_trivial(self) -> bool:
        return self.data_pauli.is_identity() and not self.syndrome_flips.any()


def push_to_end(sc: SyndromeCircuit, faults) -> TerminalError:
    """Equivalent terminal error: data Pauli before the measurement layer
    plus classical syndrome flips.

    Implemented as zero-frame propagation of the faults, which realizes
    the layer-by-layer conjugation argument; the terminal support is
    contained in the shade of the fault supports (checked exhaustively in
    the test suite, not here).
    """
    res = propagate(sc.circuit, PauliFrame.zeros(sc.circuit.num_wires), faults)
    data = res.frame.restricted(list(sc.data_wires))
    wires = [sc.ancilla_wire(g) for g in range(sc.num_generators)]
    return TerminalError(data_pauli=data, syndrome_flips=res.flip_bits(wires))


def fault_support(circuit: LayeredCircuit, faults) -> set[int]:
    out: set[int] = set()
    for f in faults:
        g = circuit.layers[f.location.layer][f.location.pos]
        if f.pauli is not None:
            for k, w in enumerate(g.operands):
                if f.pauli.x[k] or f.pauli.z[k]:
                    out.add(w)
    return out


def terminal_within_shade(sc: SyndromeCircuit, faults, term: TerminalError) -> bool:
    """Support containment check against the light cone of the faults."""
    cone: set[int] = set()
    for f in faults:
        g = sc.circuit.layers[f.location.layer][f.location.pos]
        wires = {
            w
            for k, w in enumerate(g.operands)
            if f.pauli is not None and (f.pauli.x[k] or f.pauli.z[k])
        }
        cone |= shade(sc.circuit, wires, f.location.layer + 1, sc.circuit.depth)
    support = set(int(q) for q in term.data_pauli.support())
    flipped = {
        sc.ancilla_wire(g) for g in np.nonzero(term.syndrome_flips)[0]
    }
    flip_faults = {
        sc.circuit.layers[f.location.layer][f.location.pos].operands[0]
        for f in faults
        if f.flip_measurement
    }
    return support <= cone and flipped <= (cone | flip_faults)


# -- error-correction rounds --------------------------------------------------------


@dataclass
class EcRoundResult:
    observed_syndromes: list[np.ndarray]
    residual_pauli: list[PauliOp]
    logical_failure: list[bool]
    heralded: list[bool] = field(default_factory=list)


def run_ec_round(
    blocks: list[tuple[CssCode, SyndromeCircuit, Decoder]],
    frames: list[PauliFrame],
    model: NoiseModel,
    seed: int,
    trial: int = 0,
    round_index: int = 0,
    block_ids: list[int] | None = None,
) -> tuple[EcRoundResult, list[PauliFrame]]:
    """One noisy syndrome-extraction + decode + correct round per block.

    Blocks are processed independently; the rng substream of block b is
    keyed by (seed; trial, block_ids[b], round_index), so permuting the
    block list together with its ids reproduces results bitwise.  Frames
    are data-width (n bits per block) and may be correlated across blocks
    by the caller.

    The per-block logical_failure flag reports whether the block's
    residual, if cleaned up by one noiseless round, would act as a
    nontrivial logical.
    """
    if block_ids is None:
        block_ids = list(range(len(blocks)))
    observed, residuals, failures, heralds = [], [], [], []
    new_frames = []
    for (code, sc, decoder), frame, bid in zip(blocks, frames, block_ids):
        rng = substream(seed, trial, bid, round_index)
        faults = sample_faults(sc.circuit, model, rng)
        term = push_to_end(sc, faults)
        sigma_obs = (code.syndrome(frame.to_pauli()) ^ term.syndrome_flips).astype(
            np.uint8
        )
        outcome = decoder.decode(sigma_obs)
        new_x = frame.x ^ term.data_pauli.x ^ outcome.pauli.x
        new_z = frame.z ^ term.data_pauli.z ^ outcome.pauli.z
        new_frame = PauliFrame(new_x, new_z)
        residual = new_frame.to_pauli()
        observed.append(sigma_obs)
        residuals.append(residual)
        failures.append(_fails_after_cleanup(code, decoder, residual))
        heralds.append(outcome.heralded)
        new_frames.append(new_frame)
    return (
        EcRoundResult(
            observed_syndromes=observed,
            residual_pauli=residuals,
            logical_failure=failures,
            heralded=heralds,
        ),
        new_frames,
    )


def _fails_after_cleanup(code: CssCode, decoder: Decoder, residual: PauliOp) -> bool:
    sigma = code.syndrome(residual)
    if not sigma.any():
        return code.logical_action(residual)
    cleaned = residual * decoder.decode(sigma).pauli
    return code.is_logical_failure(cleaned)


# -- memory experiment ----------------------------------------------------------------


def wilson_interval(failures: int, trials: int, z: float = 1.959963984540054):
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return (0.0, 1.0)
    phat = failures / trials
    denom = 1 + z**2 / trials
    center = (phat + z**2 / (2 * trials)) / denom
    half = z * np.sqrt(phat * (1 - phat) / trials + z**2 / (4 * trials**2)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass
class MemoryStats:
    code_name: str
    delta: float
    rounds: int
    trials: int
    failures: int
    seed: int
    ci_low: float
    ci_high: float
    residual_weight_histogram: dict[int, int]

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0


def run_memory_experiment(
    code: CssCode,
    sc: SyndromeCircuit,
    decoder: Decoder,
    model: NoiseModel,
    rounds: int,
    trials: int,
    seed: int,
    collect_histogram: bool = True,
) -> MemoryStats:
    """T noisy EC rounds then one noiseless round per trial.

    A trial fails when the post-cleanup residual acts as a nontrivial
    logical (or retains a nonzero syndrome, which cannot happen with an
    exact decoder).  The histogram counts per-round residual reduced
    weights across all trials.
    """
    assert rounds >= 1 and trials >= 1
    failures = 0
    hist: dict[int, int] = {}
    delta = getattr(model, "delta", None)
    block = [(code, sc, decoder)]
    for trial in range(trials):
        frame = PauliFrame.zeros(code.n)
        for r in range(rounds):
            result, (frame,) = run_ec_round(
                block, [frame], model, seed, trial=trial, round_index=r
            )
            if collect_histogram:
                w = code.reduced_weight(result.residual_pauli[0])
                hist[w] = hist.get(w, 0) + 1
        residual = frame.to_pauli()
        sigma = code.syndrome(residual)
        if sigma.any():
            residual = residual * decoder.decode(sigma).pauli
        if code.is_logical_failure(residual):
            failures += 1
    lo, hi = wilson_interval(failures, trials)
    return MemoryStats(
        code_name=code.name,
        delta=float(delta) if delta is not None else float("nan"),
        rounds=rounds,
        trials=trials,
        failures=failures,
        seed=seed,
        ci_low=lo,
        ci_high=hi,
        residual_weight_histogram=dict(sorted(hist.items())),
    )


def run_unencoded_baseline(
    delta: float, rounds: int, trials: int, seed: int
) -> MemoryStats:
    """Single bare qubit idling for `rounds` locations at rate delta.

    Failure is any net non-identity Pauli, the T*delta-scale yardstick the
    encoded memories are compared against.
    """
    failures = 0
    for trial in range(trials):
        rng = substream(seed, trial, 0, 0)
        hits = rng.random(rounds) < delta
        x = z = 0
        for hit in hits:
            if not hit:
                continue
            kind = rng.integers(3)
            if kind in (0, 1):
                x ^= 1
            if kind in (1, 2):
                z ^= 1
        if x or z:
            failures += 1
    lo, hi = wilson_interval(failures, trials)
    return MemoryStats(
        code_name="unencoded",
        delta=delta,
        rounds=rounds,
        trials=trials,
        failures=failures,
        seed=seed,
        ci_low=lo,
        ci_high=hi,
        residual_weight_histogram={},
    )
