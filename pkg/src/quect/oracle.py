"""Deliberately naive reference computations used to check the engine.

Nothing here imports the rest of the package: every matrix is built entry by
entry from the bit-level definition, so agreement with the structured engine
is real evidence.
"""
from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np


def _bits(i: int, k: int) -> str:
    return format(i, f"0{k}b")


def embed_dense(g, targets: Sequence[int], k: int) -> np.ndarray:
    """Full 2^k matrix of gate ``g`` on qubit ``targets`` (position 0 = MSB)."""
    g = np.asarray(g, dtype=complex)
    dim = 1 << k
    out = np.zeros((dim, dim), dtype=complex)
    rest = [q for q in range(k) if q not in targets]
    for i in range(dim):
        bi = _bits(i, k)
        for j in range(dim):
            bj = _bits(j, k)
            if all(bi[q] == bj[q] for q in rest):
                gi = int("".join(bi[q] for q in targets), 2)
                gj = int("".join(bj[q] for q in targets), 2)
                out[i, j] = g[gi, gj]
    return out


def swap_dense(block_a: Sequence[int], block_b: Sequence[int], k: int) -> np.ndarray:
    dim = 1 << k
    out = np.zeros((dim, dim))
    for j in range(dim):
        b = list(_bits(j, k))
        for x, y in zip(block_a, block_b):
            b[x], b[y] = b[y], b[x]
        out[int("".join(b), 2), j] = 1
    return out


def dense_eval(circuit: Sequence[np.ndarray], initial) -> np.ndarray:
    """Left-multiply ``initial`` by each matrix of ``circuit`` in order."""
    z = np.asarray(initial, dtype=complex)
    for m in circuit:
        m = np.asarray(m)
        if m.shape != (len(z), len(z)):
            raise ValueError(f"matrix of shape {m.shape} cannot act on a vector of length {len(z)}")
        z = m @ z
    return z


def wrapper_matrix(table: Sequence[int], m: int, n: int) -> np.ndarray:
    """U(f) straight from the entrywise rule on the split bit strings of i and j."""
    dim = 1 << (m + n)
    out = np.zeros((dim, dim), dtype=int)
    for i in range(dim):
        ix, iy = divmod(i, 1 << n)
        for j in range(dim):
            jx, jy = divmod(j, 1 << n)
            if ix == jx and table[ix] == iy ^ jy:
                out[i, j] = 1
    return out


def dft_matrix(n: int) -> np.ndarray:
    N = 1 << n
    w = cmath.exp(2j * math.pi / N)
    return np.array([[w ** ((j * k) % N) for k in range(N)] for j in range(N)]) / math.sqrt(N)


def grover_closed_form(n: int, t: int) -> float:
    """Probability of the single marked item after ``t`` Grover iterations."""
    theta = math.asin(2 ** (-n / 2))
    return math.sin((2 * t + 1) * theta) ** 2


def measure_dist(state, positions: Sequence[int]) -> np.ndarray:
    """Pattern probabilities by enumerating every basis index."""
    z = np.asarray(state, dtype=complex)
    k = len(z).bit_length() - 1
    total = sum(abs(c) ** 2 for c in z)
    out = np.zeros(1 << len(positions))
    for i, c in enumerate(z):
        b = _bits(i, k)
        out[int("".join(b[q] for q in positions), 2)] += abs(c) ** 2
    return out / total


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(k: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=1 << k) + 1j * rng.normal(size=1 << k)
    return z / np.linalg.norm(z)
