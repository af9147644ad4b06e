"""Standard gates, the classical-function wrapper U(f), and the QFT."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import CapacityError, DomainError
from .linalg import MAX_QUBITS, UnitaryMatrix, embed, kron

_S = 1 / math.sqrt(2)

H = UnitaryMatrix(np.array([[_S, _S], [_S, -_S]]))
X = UnitaryMatrix(np.array([[0, 1], [1, 0]]))
Y = UnitaryMatrix(np.array([[0, -1j], [1j, 0]]))
Z = UnitaryMatrix(np.array([[1, 0], [0, -1]]))
I = UnitaryMatrix(np.eye(2))

CATALOG: dict[str, UnitaryMatrix] = {"H": H, "X": X, "Y": Y, "Z": Z, "I": I}


def identity(n: int) -> UnitaryMatrix:
    _cap(n)
    return UnitaryMatrix(np.eye(1 << n))


def tensor_power(g: UnitaryMatrix, n: int) -> UnitaryMatrix:
    """``g`` tensored with itself ``n`` times, e.g. ``H^(x)n``."""
    if n < 1:
        raise DomainError(f"tensor power needs n >= 1, got {n}")
    _cap(g.arity * n)
    return reduce(kron, [g] * n)


def _cap(n: int, limit: int = MAX_QUBITS) -> None:
    if n > limit:
        raise CapacityError(f"{n} qubits exceeds the cap of {limit}")


@dataclass(frozen=True)
class ClassicalFunction:
    """A total function {0,1}^m -> {0,1}^n stored as a truth table.

    ``table[x]`` is f(x), with bit strings read most significant bit first.
    """

    in_bits: int
    out_bits: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.in_bits < 1 or self.out_bits < 1:
            raise DomainError("a classical function needs m >= 1 and n >= 1")
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if len(self.table) != 1 << self.in_bits:
            raise DomainError(f"truth table has {len(self.table)} rows, expected {1 << self.in_bits}")
        top = 1 << self.out_bits
        for x, y in enumerate(self.table):
            if not 0 <= y < top:
                raise DomainError(f"f({x}) = {y} does not fit in {self.out_bits} bit(s)")

    @classmethod
    def from_callable(cls, in_bits: int, out_bits: int, f: Callable[[int], int]) -> "ClassicalFunction":
        return cls(in_bits, out_bits, tuple(f(x) for x in range(1 << in_bits)))

    def __call__(self, x: int) -> int:
        return self.table[x]

    @classmethod
    def load(cls, path) -> "ClassicalFunction":
        """Read the truth-table file format.

        First non-comment line is ``m n``; then 2^m lines ``input output`` in
        decimal, each input appearing exactly once. ``#`` starts a comment.
        """
        path = Path(path)
        rows = []
        for lineno, raw in enumerate(path.read_text().splitlines(), 1):
            text = raw.split("#", 1)[0].strip()
            if text:
                rows.append((lineno, text.split()))
        if not rows:
            raise DomainError(f"{path}: empty truth table")
        lineno, head = rows[0]
        try:
            m, n = (int(v) for v in head)
        except ValueError:
            raise DomainError(f"header must be 'm n', got {' '.join(head)!r}", row=lineno, col=1,
                              path=str(path)) from None
        _cap(m + n)
        table: dict[int, int] = {}
        for lineno, parts in rows[1:]:
            try:
                x, y = (int(v) for v in parts)
            except ValueError:
                raise DomainError(f"expected 'input output', got {' '.join(parts)!r}", row=lineno,
                                  col=1, path=str(path)) from None
            if not 0 <= x < (1 << m):
                raise DomainError(f"input {x} out of range for m={m}", row=lineno, col=1, path=str(path))
            if x in table:
                raise DomainError(f"input {x} listed twice", row=lineno, col=1, path=str(path))
            table[x] = y
        missing = sorted(set(range(1 << m)) - table.keys())
        if missing:
            raise DomainError(f"truth table is missing inputs {missing[:8]}", path=str(path))
        return cls(m, n, tuple(table[x] for x in range(1 << m)))

    def dump(self) -> str:
        lines = [f"{self.in_bits} {self.out_bits}"]
        lines += [f"{x} {y}" for x, y in enumerate(self.table)]
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=8)
def wrap_classical(f: ClassicalFunction) -> UnitaryMatrix:
    """The permutation unitary |x>|y> -> |x>|y xor f(x)>."""
    m, n = f.in_bits, f.out_bits
    _cap(m + n)
    dim = 1 << (m + n)
    u = np.zeros((dim, dim))
    cols = np.arange(dim)
    xs, ys = cols >> n, cols & ((1 << n) - 1)
    fx = np.asarray(f.table)[xs]
    u[(xs << n) | (ys ^ fx), cols] = 1.0
    return UnitaryMatrix(u)


def r_gate(theta: float) -> UnitaryMatrix:
    """Single-qubit phase gate diag(1, e^{i theta})."""
    if not math.isfinite(theta):
        raise DomainError("R gate angle must be finite")
    return UnitaryMatrix(np.diag([1, np.exp(1j * theta)]))


def controlled_phase(theta: float) -> UnitaryMatrix:
    if not math.isfinite(theta):
        raise DomainError("controlled-phase angle must be finite")
    return UnitaryMatrix(np.diag([1, 1, 1, np.exp(1j * theta)]))


def inversion_about_mean(n: int) -> UnitaryMatrix:
    """Grover diffusion 2|s><s| - I on n qubits, |s> uniform."""
    if n < 1:
        raise DomainError(f"inversion about mean needs n >= 1, got {n}")
    _cap(n)
    dim = 1 << n
    return UnitaryMatrix(np.full((dim, dim), 2 / dim) - np.eye(dim))


def qft(n: int) -> UnitaryMatrix:
    """The n-qubit quantum Fourier transform, equal to the unitary DFT matrix.

    Built as the Hadamard / controlled-phase ladder followed by a reversal of
    qubit order.
    """
    if n < 1:
        raise DomainError(f"QFT needs n >= 1, got {n}")
    _cap(n, 10)
    u = np.eye(1 << n, dtype=complex)
    for j in range(n):
        u = embed(H, [j], n).matrix @ u
        for d in range(1, n - j):
            u = embed(controlled_phase(math.pi / (1 << d)), [j, j + d], n).matrix @ u
    return UnitaryMatrix(_reversal(n).matrix @ u)


def _reversal(n: int) -> UnitaryMatrix:
    dim = 1 << n
    p = np.zeros((dim, dim))
    for i in range(dim):
        p[int(format(i, f"0{n}b")[::-1], 2), i] = 1
    return UnitaryMatrix(p)
