"""Choi matrices, diamond-norm sandwich bounds, and Naimark factoring of
noisy measurements.

Superoperators are represented as callables on density matrices together
with their input dimension; helpers build the common cases.  The Choi
convention is unnormalized: J(T) = sum_ij |i><j| (x) T(|i><j|), so a
trace-preserving map has tr J = d_in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionTooLarge, NotAPovm

MapFn = Callable[[np.ndarray], np.ndarray]

QUBIT_DIM_LIMIT = 4  # two system qubits


def kraus_map(kraus: list[np.ndarray]) -> MapFn:
    def apply(rho: np.ndarray) -> np.ndarray:
        return sum(k @ rho @ k.conj().T for k in kraus)

    return apply


def unitary_difference_map(u: np.ndarray) -> MapFn:
    def apply(rho: np.ndarray) -> np.ndarray:
        return u @ rho @ u.conj().T - rho

    return apply


def depolarizing_minus_identity(delta: float, dim: int = 2) -> MapFn:
    def apply(rho: np.ndarray) -> np.ndarray:
        return delta * (np.trace(rho) * np.eye(dim) / dim - rho)

    return apply


def measurement_channel(povm: list[np.ndarray]) -> MapFn:
    """rho -> sum_a tr(P_a rho) |a><a| (classical register as a dephased qubit)."""

    def apply(rho: np.ndarray) -> np.ndarray:
        out = np.zeros((len(povm), len(povm)), dtype=complex)
        for a, p in enumerate(povm):
            out[a, a] = np.trace(p @ rho)
        return out

    return apply


def compose(outer: MapFn, inner: MapFn) -> MapFn:
    return lambda rho: outer(inner(rho))


def choi_matrix(map_fn: MapFn, d_in: int) -> np.ndarray:
    """Unnormalized Choi matrix, block (i, j) = T(|i><j|)."""
    basis = np.eye(d_in, dtype=complex)
    sample = map_fn(np.outer(basis[0], basis[0].conj()))
    d_out = sample.shape[0]
    j = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for a in range(d_in):
        for b in range(d_in):
            block = map_fn(np.outer(basis[a], basis[b].conj()))
            j[a * d_out : (a + 1) * d_out, b * d_out : (b + 1) * d_out] = block
    return j


def trace_norm(m: np.ndarray) -> float:
    return float(np.linalg.svd(m, compute_uv=False).sum())


def choi_distance(a: np.ndarray, b: np.ndarray) -> float:
    return trace_norm(a - b)


@dataclass(frozen=True)
class DiamondBounds:
    lower: float
    upper: float


def channel_distance_bounds(
    map_fn: MapFn | np.ndarray,
    d_in: int | None = None,
    samples: int = 64,
    seed: int = 7,
) -> DiamondBounds:
    """Certified sandwich around the diamond norm of a superoperator.

    upper: ||J(T)||_1.  Any input with an equal-size reference factors as
    (A (x) 1) Phi (A^dag (x) 1) with tr A A^dag = 1, so the output trace
    norm is at most ||A||_inf^2 ||J||_1 <= ||J||_1.

    lower: max over the maximally entangled input (giving ||J||_1 / d_in
    exactly) and a seeded sample of Haar-random pure inputs with an
    equal-dimension reference; every such value is an achievable
    ||(I (x) T)(phi)||_1, hence a true lower bound.
    """
    if isinstance(map_fn, np.ndarray):
        j = map_fn
        if d_in is None:
            raise ValueError("d_in required with an explicit Choi matrix")
        d_out = j.shape[0] // d_in
    else:
        if d_in is None:
            raise ValueError("d_in required")
        j = choi_matrix(map_fn, d_in)
        d_out = j.shape[0] // d_in
    if d_in > QUBIT_DIM_LIMIT:
        raise DimensionTooLarge(f"d_in = {d_in} exceeds {QUBIT_DIM_LIMIT}")

    upper = trace_norm(j)
    lower = upper / d_in  # maximally entangled input

    rng = np.random.default_rng(seed)
    for _ in range(samples):
        # |phi> = (A (x) 1)|Omega> for random A with tr A A^dag = 1.
        a = rng.normal(size=(d_in, d_in)) + 1j * rng.normal(size=(d_in, d_in))
        a /= np.sqrt(np.trace(a @ a.conj().T).real)
        # (I (x) T)(|phi><phi|) has blocks (r, s) = T applied with weights
        # from A: rho_out = (A (x) 1) J (A (x) 1)^dag re-grouped.
        big = np.kron(a, np.eye(d_out, dtype=complex))
        rho_out = big @ j @ big.conj().T
        lower = max(lower, trace_norm(rho_out))
    return DiamondBounds(lower=lower, upper=upper)


def naimark_factor(povm: list[np.ndarray], atol: float = 1e-10) -> list[np.ndarray]:
    """Kraus operators N with M_ideal(N(rho)) = sum_a tr(P_a rho)|a><a|.

    Realizes W = sum_a sqrt(P_a) (x) |a> followed by tracing out the input
    system, so composing the ideal projective measurement after N
    reproduces the noisy POVM measurement exactly.
    """
    if len(povm) != 2:
        raise NotAPovm("expected a two-outcome POVM")
    dim = povm[0].shape[0]
    total = np.zeros((dim, dim), dtype=complex)
    roots = []
    for p in povm:
        p = np.asarray(p, dtype=complex)
        if p.shape != (dim, dim) or not np.allclose(p, p.conj().T, atol=atol):
            raise NotAPovm("POVM elements must be Hermitian and same-sized")
        vals, vecs = np.linalg.eigh(p)
        if vals.min() < -atol:
            raise NotAPovm(f"negative eigenvalue {vals.min():.3e}")
        vals = np.clip(vals, 0.0, None)
        roots.append((vecs * np.sqrt(vals)) @ vecs.conj().T)
        total += p
    if not np.allclose(total, np.eye(dim), atol=atol):
        raise NotAPovm("POVM elements do not sum to identity")
    # K_i = sum_a |a><i| sqrt(P_a): row i of each root, stacked as outcomes.
    return [np.array([roots[a][i, :] for a in range(2)]) for i in range(dim)]


def noisy_measurement_map(povm: list[np.ndarray]) -> MapFn:
    return measurement_channel(povm)


def ideal_measurement_map(dim: int = 2) -> MapFn:
    projectors = [np.zeros((dim, dim), dtype=complex) for _ in range(dim)]
    for a in range(dim):
        projectors[a][a, a] = 1
    return measurement_channel(projectors)
