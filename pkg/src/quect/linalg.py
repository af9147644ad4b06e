"""Dense complex linear algebra on 2^k dimensional registers.

Conventions used throughout the package:

* A k-qubit state is a 1-D complex ``numpy`` array of length ``2**k``.
* Qubit position 0 is the top circuit line and the *most* significant bit of
  a basis-state index, so ``|1>|0>`` is index 2 (``0b10``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, DomainError

UNITARY_TOL = 1e-10
MAX_QUBITS = 12


def num_qubits_of(dim: int) -> int:
    k = int(dim).bit_length() - 1
    if k < 0 or (1 << k) != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return k


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """An order-2^a unitary. Unitarity is checked on construction."""

    matrix: np.ndarray
    arity: int = field(init=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"gate matrix must be square, got shape {m.shape}")
        arity = num_qubits_of(m.shape[0])
        if arity < 1:
            raise DimensionError("gate must act on at least one qubit")
        if not np.all(np.isfinite(m)):
            raise DomainError("gate matrix has non-finite entries")
        err = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
        if err > UNITARY_TOL:
            raise DomainError(f"matrix is not unitary (max |UU^+ - I| = {err:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "arity", arity)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "UnitaryMatrix":
        return UnitaryMatrix(self.matrix.conj().T)

    def __matmul__(self, other: "UnitaryMatrix") -> "UnitaryMatrix":
        return UnitaryMatrix(self.matrix @ other.matrix)

    def allclose(self, other, tol: float = UNITARY_TOL) -> bool:
        other = other.matrix if isinstance(other, UnitaryMatrix) else np.asarray(other)
        return other.shape == self.matrix.shape and bool(np.max(np.abs(self.matrix - other)) <= tol)

    def __repr__(self) -> str:
        return f"UnitaryMatrix(arity={self.arity})"


def as_state(state) -> np.ndarray:
    """Validate and return ``state`` as a complex vector of length 2^k, k >= 1."""
    z = np.asarray(state, dtype=complex)
    if z.ndim != 1:
        raise DimensionError(f"state must be a vector, got shape {z.shape}")
    if num_qubits_of(z.shape[0]) < 1:
        raise DimensionError("a register holds at least one qubit")
    if not np.all(np.isfinite(z)):
        raise DomainError("state has non-finite amplitudes")
    if not np.any(z):
        raise DomainError("the zero vector is not a register")
    return z


def state_qubits(state: np.ndarray) -> int:
    return num_qubits_of(len(state))


def basis_state(k: int, index: int = 0) -> np.ndarray:
    if not 0 <= index < (1 << k):
        raise DomainError(f"basis index {index} out of range for {k} qubits")
    z = np.zeros(1 << k, dtype=complex)
    z[index] = 1.0
    return z


def ket(bits: str) -> np.ndarray:
    """``ket("010")`` is the basis state |0>|1>|0>."""
    return basis_state(len(bits), int(bits, 2))


def normalize(state: np.ndarray) -> np.ndarray:
    return state / np.linalg.norm(state)


def kron(a: UnitaryMatrix, b: UnitaryMatrix) -> UnitaryMatrix:
    return UnitaryMatrix(np.kron(a.matrix, b.matrix))


def kron_state(u, v) -> np.ndarray:
    """Tensor product ``u (x) v``; ``u`` occupies the more significant positions."""
    return np.kron(as_state(u), as_state(v))


def check_targets(targets: Sequence[int], k: int) -> tuple[int, ...]:
    t = tuple(int(q) for q in targets)
    if len(set(t)) != len(t):
        raise DomainError(f"duplicate qubit positions in {list(t)}")
    for q in t:
        if not 0 <= q < k:
            raise DimensionError(f"qubit position {q} out of range for {k} qubits")
    return t


def _apply_columns(block: np.ndarray, k: int, g: np.ndarray, targets: tuple[int, ...]) -> np.ndarray:
    # block has shape (2^k, B); every column is a state
    a = len(targets)
    b = block.shape[1]
    t = block.reshape([2] * k + [b])
    t = np.moveaxis(t, targets, range(a))
    shape = t.shape
    t = (g @ t.reshape(1 << a, -1)).reshape(shape)
    t = np.moveaxis(t, range(a), targets)
    return t.reshape(1 << k, b)


def apply_on_subset(state, g: UnitaryMatrix, targets: Sequence[int]) -> np.ndarray:
    """Apply ``g`` to the qubits at ``targets``; the rest see the identity.

    ``targets[0]`` is fed to the gate's most significant input. Positions need
    not be adjacent or sorted.
    """
    z = as_state(state)
    k = state_qubits(z)
    t = check_targets(targets, k)
    if g.arity != len(t):
        raise DimensionError(f"gate of arity {g.arity} applied to {len(t)} target qubit(s)")
    return _apply_columns(z[:, None], k, g.matrix, t)[:, 0]


def embed(g: UnitaryMatrix, targets: Sequence[int], k: int) -> UnitaryMatrix:
    """The full 2^k matrix of ``g`` acting on ``targets``."""
    t = check_targets(targets, k)
    if g.arity != len(t):
        raise DimensionError(f"gate of arity {g.arity} applied to {len(t)} target qubit(s)")
    return UnitaryMatrix(_apply_columns(np.eye(1 << k, dtype=complex), k, g.matrix, t))


def _check_perm(perm: Sequence[int], k: int) -> tuple[int, ...]:
    p = tuple(int(x) for x in perm)
    if len(p) != k or sorted(p) != list(range(k)):
        raise DomainError(f"{list(p)} is not a permutation of range({k})")
    return p


def permute_qubits(state, perm: Sequence[int]) -> np.ndarray:
    """Move the qubit at position ``p`` to position ``perm[p]``."""
    z = as_state(state)
    k = state_qubits(z)
    p = _check_perm(perm, k)
    inv = [0] * k
    for src, dst in enumerate(p):
        inv[dst] = src
    return np.transpose(z.reshape([2] * k), inv).reshape(-1)


def block_swap_perm(block_a: Sequence[int], block_b: Sequence[int], k: int) -> list[int]:
    if len(block_a) != len(block_b):
        raise DimensionError(f"cannot swap blocks of {len(block_a)} and {len(block_b)} qubits")
    perm = list(range(k))
    for x, y in zip(block_a, block_b):
        perm[x], perm[y] = y, x
    return perm


def marginal_distribution(state, positions: Sequence[int]) -> np.ndarray:
    """Probabilities of the bit patterns at ``positions`` (first position = MSB)."""
    z = as_state(state)
    k = state_qubits(z)
    pos = check_targets(positions, k)
    probs = (np.abs(z) ** 2).reshape([2] * k)
    rest = tuple(q for q in range(k) if q not in pos)
    marg = probs.sum(axis=rest) if rest else probs
    # sum() keeps the measured axes in ascending order; reorder to `pos`
    order = sorted(pos)
    marg = np.transpose(marg, [order.index(q) for q in pos])
    dist = marg.reshape(-1)
    return dist / dist.sum()


def pattern_mask(k: int, positions: Sequence[int], value: int) -> np.ndarray:
    """Boolean mask over basis indices whose bits at ``positions`` spell ``value``."""
    idx = np.arange(1 << k)
    mask = np.ones(1 << k, dtype=bool)
    p = len(positions)
    for j, q in enumerate(positions):
        bit = (value >> (p - 1 - j)) & 1
        mask &= ((idx >> (k - 1 - q)) & 1) == bit
    return mask


def collapse(state, positions: Sequence[int], value: int) -> np.ndarray:
    """Zero amplitudes inconsistent with ``value`` at ``positions``, renormalize."""
    z = as_state(state)
    k = state_qubits(z)
    pos = check_targets(positions, k)
    w = np.where(pattern_mask(k, pos, value), z, 0)
    norm = np.linalg.norm(w)
    if norm == 0:
        raise DomainError(f"outcome {value} has probability zero")
    return w / norm
