"""Circuit-noise models, fault sampling, and the truncation mathematics
for adversarial channels.

Tails are evaluated exactly over the rationals (floats are exact
rationals, so Fraction(delta) loses nothing); the certification chain
compares against exp terms at 60 significant digits via mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .circuits import GateKind, LayeredCircuit, Location, MEAS_KINDS, TWO_QUBIT_KINDS
from .errors import DegenerateInput, NonStochasticModel
from .pauli import PauliOp

_ONE_QUBIT_PAULIS = ("X", "Y", "Z")
_TWO_QUBIT_PAULIS = tuple(
    a + b for a in "IXYZ" for b in "IXYZ" if not (a == "I" and b == "I")
)


@dataclass(frozen=True)
class DepolarizingCircuit:
    """Each location faulty independently with probability delta."""

    delta: float

    def __post_init__(self):
        if not 0 <= self.delta <= 1:
            raise ValueError("delta must lie in [0, 1]")


@dataclass(frozen=True)
class MeasFlip:
    """Only measurement outcomes flip, each with probability delta."""

    delta: float

    def __post_init__(self):
        if not 0 <= self.delta <= 1:
            raise ValueError("delta must lie in [0, 1]")


@dataclass(frozen=True)
class CoherentOverrotation:
    """exp(-i theta/2 P_axis) after every location (exact simulation only)."""

    axis: str
    theta: float

    def __post_init__(self):
        if self.axis.upper() not in ("X", "Y", "Z"):
            raise ValueError("axis must be X, Y or Z")


@dataclass(frozen=True)
class AdversarialBudget:
    """Worst-case injected Pauli of the given reduced weight per block."""

    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be >= 0")


@dataclass(frozen=True)
class Composite:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


NoiseModel = DepolarizingCircuit | MeasFlip | CoherentOverrotation | AdversarialBudget | Composite


@dataclass(frozen=True)
class FaultEvent:
    """A fault at one location: a Pauli on its operands or an outcome flip."""

    location: Location
    pauli: PauliOp | None = None
    flip_measurement: bool = False


def substream(seed: int, *path: int) -> np.random.Generator:
    """Counter-based Philox substream keyed by (seed; path).

    Streams for distinct paths are independent and reproducible regardless
    of execution order, which is what makes parallel trials and block
    permutations bit-stable.
    """
    if len(path) > 4:
        raise ValueError("substream path is at most 4 counters")
    counter = list(path) + [0] * (4 - len(path))
    return np.random.Generator(np.random.Philox(counter=counter, key=[seed, 0]))


def sample_faults(
    circuit: LayeredCircuit, model: NoiseModel, rng: np.random.Generator | int
) -> list[FaultEvent]:
    """Independent per-location faults for a stochastic model.

    One-qubit locations (preps, idles, H) draw uniformly from {X, Y, Z},
    two-qubit locations from the 15 nontrivial pairs, both applied after
    the location's gate; measurement locations flip the recorded outcome.
    """
    if isinstance(rng, (int, np.integer)):
        rng = substream(int(rng))
    if isinstance(model, Composite):
        out: list[FaultEvent] = []
        for part in model.parts:
            out.extend(sample_faults(circuit, part, rng))
        return out
    if isinstance(model, (CoherentOverrotation, AdversarialBudget)):
        raise NonStochasticModel(f"{type(model).__name__} has no stochastic sampler")

    meas_only = isinstance(model, MeasFlip)
    delta = model.delta
    events: list[FaultEvent] = []
    locations = list(circuit.locations())
    if delta == 0:
        return events
    draws = rng.random(len(locations))
    for (loc, gate), u in zip(locations, draws):
        if u >= delta:
            continue
        if gate.kind in MEAS_KINDS:
            events.append(FaultEvent(loc, flip_measurement=True))
        elif meas_only:
            continue
        elif gate.kind in TWO_QUBIT_KINDS:
            label = _TWO_QUBIT_PAULIS[rng.integers(15)]
            events.append(FaultEvent(loc, pauli=PauliOp.from_label(label)))
        else:
            label = _ONE_QUBIT_PAULIS[rng.integers(3)]
            events.append(FaultEvent(loc, pauli=PauliOp.from_label(label)))
    return events


# -- exact tails and the pushing/truncation bound --------------------------------


def binomial_tail_raw(n: int, delta: float | Fraction, t: float) -> Fraction:
    """Sum_{j > t} C(n, j) delta^j, exactly over the rationals."""
    d = Fraction(delta)
    lo = math.floor(t) + 1
    total = Fraction(0)
    for j in range(max(lo, 0), n + 1):
        total += math.comb(n, j) * d**j
    return total


def binomial_tail_probability(n: int, delta: float | Fraction, t: float) -> Fraction:
    """Pr(X > t) for X ~ Binomial(n, delta / (1 + delta)), exactly.

    This is the normalized form of the raw tail: with p = delta/(1+delta),
    sum_{j>t} C(n,j) p^j (1-p)^(n-j) = raw_tail / (1+delta)^n termwise.
    """
    d = Fraction(delta)
    a, b = d.numerator, d.denominator
    lo = math.floor(t) + 1
    num = 0
    for j in range(max(lo, 0), n + 1):
        num += math.comb(n, j) * a**j * b ** (n - j)
    return Fraction(num, (a + b) ** n)


@dataclass(frozen=True)
class TruncationBound:
    """Weight cutoff and diamond-norm bound for one adversarial channel."""

    n: int
    delta: float
    t: int
    bound: float
    threshold: float
    tail: Fraction
    certified: bool

    @property
    def lhs(self) -> float:
        """e^(n delta) * Pr(X > threshold), the quantity certified <= bound."""
        with mpmath.workdps(60):
            nd = mpmath.mpf(self.n) * mpmath.mpf(self.delta)
            val = mpmath.exp(nd) * _frac_to_mpf(self.tail)
            return float(val)


def _frac_to_mpf(f: Fraction):
    return mpmath.mpf(f.numerator) / mpmath.mpf(f.denominator)


def truncation_bound(n: int, delta: float) -> TruncationBound:
    """Weight-5*n*delta truncation of an adversarial channel.

    Returns t = ceil(5 n delta) and the bound exp(-n delta / 3), and
    certifies, by exact tail evaluation at 60 digits, the chain
    e^(n delta) * Pr(X > 5 n delta / (1+delta)) <= exp(-n delta / 3)
    with X ~ Binomial(n, delta/(1+delta)).  The threshold is the beta = 4
    point t = (1 + beta) n delta / (1 + delta) of the Chernoff argument,
    evaluated without Chernoff slack.
    """
    if n <= 0 or delta <= 0:
        raise DegenerateInput("need n * delta > 0")
    nd = Fraction(n) * Fraction(delta)
    threshold = 5 * nd / (1 + Fraction(delta))
    tail = binomial_tail_probability(n, delta, float(threshold))
    with mpmath.workdps(60):
        nd_mp = _frac_to_mpf(nd)
        lhs = mpmath.exp(nd_mp) * _frac_to_mpf(tail)
        rhs = mpmath.exp(-nd_mp / 3)
        certified = bool(lhs <= rhs)
    return TruncationBound(
        n=n,
        delta=delta,
        t=math.ceil(5 * n * delta),
        bound=float(mpmath.exp(-float(nd) / 3)),
        threshold=float(threshold),
        tail=tail,
        certified=certified,
    )


CERTIFICATION_NS = (10, 30, 100, 300, 1000)
CERTIFICATION_DELTAS = (1e-3, 1e-2, 0.05, 0.1)


def certification_grid(
    ns=CERTIFICATION_NS, deltas=CERTIFICATION_DELTAS
) -> list[TruncationBound]:
    """The bound-certification grid used by the acceptance suite."""
    return [truncation_bound(n, d) for n in ns for d in deltas]
