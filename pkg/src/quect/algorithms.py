"""Deutsch, Deutsch-Jozsa, Simon, Grover and the QFT, written as chunk programs.

Every algorithm is driven by ASCII chunks parsed at import time and bound
against a small symbol table, in the same way a user program would be.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from .binder import Bindings, BoundProgram, bind
from .errors import ConvergenceError, DomainError, UsageError
from .gates import (
    H,
    ClassicalFunction,
    controlled_phase,
    inversion_about_mean,
    tensor_power,
)
from .machine import Machine, program_unitary
from .parser import parse

DEUTSCH_CHUNK = """\
QBEGIN(qm)
|0>--[H]--|Uf|--[H]-->
|1>--[H]--|Uf|--------
QEND
"""

DEUTSCH_JOZSA_CHUNK = """\
QBEGIN(qm)
|0>-/n/-[Hn]--|Uf|--[Hn]-->
|1>-----[H]---|Uf|---------
QEND
"""

SIMON_CHUNK = """\
QBEGIN(qm)
|0>-/n/-[Hn]--|Uf|--[Hn]-->
|0>-/n/-------|Uf|---------
QEND
"""

GROVER_PREPARE = """\
QBEGIN(qm)
|0>-/n/-[Hn]--
|1>-----[H]---
QEND
"""

GROVER_ITERATE = """\
QBEGIN(qm)
-/n/-|Uf|-[IM]--
-----|Uf|-------
QEND
"""

GROVER_MEASURE = """\
QBEGIN(qm)
-/n/--->
--------
QEND
"""

_deutsch = parse(DEUTSCH_CHUNK)
_dj = parse(DEUTSCH_JOZSA_CHUNK)
_simon = parse(SIMON_CHUNK)
_grover = [parse(t) for t in (GROVER_PREPARE, GROVER_ITERATE, GROVER_MEASURE)]


def _require(f: ClassicalFunction, m: int | None, n: int | None, what: str) -> None:
    if (m is not None and f.in_bits != m) or (n is not None and f.out_bits != n):
        raise UsageError(f"{what} needs f: {{0,1}}^{m or 'm'} -> {{0,1}}^{n or 'n'}, "
                         f"got m={f.in_bits}, n={f.out_bits}")


# -- Deutsch ----------------------------------------------------------------

def deutsch_machine(f: ClassicalFunction, seed: int = 0) -> Machine:
    """Machine after the Deutsch chunk ran, top qubit marked for measurement."""
    _require(f, 1, 1, "Deutsch")
    return Machine(2, seed).run_chunk(bind(_deutsch, Bindings(functions={"Uf": f})))


def deutsch(f: ClassicalFunction, seed: int = 0) -> bool:
    """True iff ``f`` is one-to-one, decided with a single query."""
    return deutsch_machine(f, seed).get_obs().value == 1


# -- Deutsch-Jozsa ----------------------------------------------------------

class Verdict(Enum):
    CONSTANT = "CONSTANT"
    BALANCED = "BALANCED"


def deutsch_jozsa_machine(f: ClassicalFunction, seed: int = 0) -> Machine:
    _require(f, None, 1, "Deutsch-Jozsa")
    m = f.in_bits
    if m > 8:
        raise UsageError(f"Deutsch-Jozsa is limited to m <= 8, got {m}")
    b = Bindings(gates={"Hn": tensor_power(H, m)}, vars={"n": m}, functions={"Uf": f})
    return Machine(m + 1, seed).run_chunk(bind(_dj, b))


def deutsch_jozsa(f: ClassicalFunction, seed: int = 0) -> Verdict:
    """Classify ``f``, promised to be constant or balanced.

    A function breaking the promise gets an arbitrary verdict.
    """
    value = deutsch_jozsa_machine(f, seed).get_obs().value
    return Verdict.CONSTANT if value == 0 else Verdict.BALANCED


# -- GF(2) linear algebra ---------------------------------------------------

def to_bits(value: int, n: int) -> np.ndarray:
    return np.array([(value >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


def from_bits(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def gf2_rref(rows) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2) and its pivot columns."""
    a = (np.atleast_2d(np.asarray(rows, dtype=np.uint8)) & 1).copy()
    r = 0
    pivots = []
    for c in range(a.shape[1]):
        hits = np.flatnonzero(a[r:, c]) if r < a.shape[0] else []
        if len(hits) == 0:
            continue
        p = r + int(hits[0])
        a[[r, p]] = a[[p, r]]
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def gf2_rank(rows) -> int:
    return len(gf2_rref(rows)[1])


def gf2_nullspace(rows, n: int | None = None) -> np.ndarray:
    """Basis (one vector per row) of {v : M v = 0 over GF(2)}.

    ``rows`` is an (r, n) 0/1 array; pass ``n`` when there are no rows.
    """
    a = np.asarray(rows, dtype=np.uint8)
    if n is None:
        if a.ndim != 2:
            raise DomainError("width n is required when rows are empty")
        n = a.shape[1]
    if a.size == 0:
        return np.eye(n, dtype=np.uint8)
    rref, pivots = gf2_rref(a.reshape(-1, n))
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for t, fc in enumerate(free):
        basis[t, fc] = 1
        for i, pc in enumerate(pivots):
            basis[t, pc] = rref[i, fc]
    return basis


# -- Simon ------------------------------------------------------------------

def periodic_function(n: int, period: int, rng: np.random.Generator) -> ClassicalFunction:
    """A random 2-to-1 f on n bits with f(x ^ period) = f(x)."""
    if not 0 < period < (1 << n):
        raise DomainError(f"period must be a nonzero {n}-bit value, got {period}")
    labels = rng.permutation(1 << n)
    table = [0] * (1 << n)
    for x in range(1 << n):
        table[x] = int(labels[min(x, x ^ period)])
    return ClassicalFunction(n, n, tuple(table))


def has_period(f: ClassicalFunction, b: int) -> bool:
    return all(f(x ^ b) == f(x) for x in range(1 << f.in_bits))


@dataclass(frozen=True)
class SimonResult:
    period: int
    samples: tuple[int, ...]

    def bits(self, n: int) -> str:
        return format(self.period, f"0{n}b")


def simon_machine(f: ClassicalFunction, seed: int = 0) -> tuple[Machine, BoundProgram]:
    _require(f, None, f.in_bits, "Simon")
    n = f.in_bits
    if n > 6:
        raise UsageError(f"Simon is limited to n <= 6, got {n}")
    b = Bindings(gates={"Hn": tensor_power(H, n)}, vars={"n": n}, functions={"Uf": f})
    return Machine(2 * n, seed), bind(_simon, b)


def simon(f: ClassicalFunction, seed: int = 0, max_iter: int | None = None) -> SimonResult:
    """Recover the hidden period of ``f`` (f(x ^ b) = f(x), b != 0).

    Re-runs the chunk, each run starting from |0...0>, until the sampled y's
    span an (n-1)-dimensional space, then solves y . b = 0 over GF(2).
    """
    qm, program = simon_machine(f, seed)
    n = f.in_bits
    max_iter = 50 * n if max_iter is None else max_iter
    samples: list[int] = []
    for _ in range(max_iter):
        samples.append(qm.run_chunk(program).get_obs().value)
        rows = np.array([to_bits(y, n) for y in samples])
        rank = gf2_rank(rows)
        if rank == n:
            raise DomainError("f has no nonzero period (sampled y's span the whole space)")
        if rank == n - 1:
            basis = gf2_nullspace(rows, n)
            b = from_bits(basis[0])
            if not has_period(f, b):
                raise DomainError(f"candidate period {b:0{n}b} fails f(x ^ b) = f(x)")
            return SimonResult(b, tuple(samples))
    raise ConvergenceError(f"rank stayed below {n - 1} after {max_iter} runs")


# -- Grover -----------------------------------------------------------------

def grover_iterations(n: int) -> int:
    return math.floor(math.pi / 4 * math.sqrt(1 << n))


@dataclass(frozen=True)
class GroverResult:
    found: int
    probability: float  # exact pre-measurement probability of `found`
    iterations: int
    distribution: np.ndarray


def grover_machine(f: ClassicalFunction, iterations: int | None = None, seed: int = 0) -> Machine:
    _require(f, None, 1, "Grover")
    n = f.in_bits
    if n > 8:
        raise UsageError(f"Grover is limited to n <= 8, got {n}")
    t = grover_iterations(n) if iterations is None else iterations
    b = Bindings(gates={"Hn": tensor_power(H, n), "IM": inversion_about_mean(n)},
                 vars={"n": n}, functions={"Uf": f})
    prepare, iterate, measure = (bind(c, b) for c in _grover)
    qm = Machine(n + 1, seed).run_chunk(prepare)
    for _ in range(t):
        qm.run_chunk(iterate)
    return qm.run_chunk(measure)


def grover(f: ClassicalFunction, seed: int = 0, iterations: int | None = None) -> GroverResult:
    """Search for the unique x with f(x) = 1.

    Uses floor(pi/4 * sqrt(2^n)) iterations unless told otherwise.
    """
    t = grover_iterations(f.in_bits) if iterations is None else iterations
    qm = grover_machine(f, t, seed)
    dist = qm.get_obs_dist()
    found = qm.get_obs().value
    return GroverResult(found, float(dist[found]), t, dist)


def marked(n: int, target: int) -> ClassicalFunction:
    return ClassicalFunction.from_callable(n, 1, lambda x: int(x == target))


# -- QFT --------------------------------------------------------------------

def _rows(*specs: tuple[str, int, str]) -> str:
    # (repeat variable, its value, gate token); lines whose count is 0 are dropped
    out = []
    for var, count, token in specs:
        if count == 0:
            continue
        if var:
            out.append(f"--/{var}/" + "-" * 8)
        else:
            out.append("-----" + token + "----")
    return "QBEGIN(qm)\n" + "\n".join(out) + "\nQEND\n"


def _reversal_chunk(n: int) -> str:
    rows = ["--"] * n
    for i in range(n // 2):
        for r in range(n):
            rows[r] += ("X" if r in (i, n - 1 - i) else "-") + "-"
    return "QBEGIN(qm)\n" + "\n".join(rows) + "\nQEND\n"


def qft_chunks(n: int) -> Iterator[tuple[str, Bindings]]:
    """The chunk sequence of the QFT, with the bindings for each chunk.

    A bit-reversal swap chunk is followed by n steps. Step r adds qubit
    p = n-r-1 to the transform already built on the r qubits below it:
    controlled phases pi/2^(k+1) between p and p+k+1 for k = 0..r-1, then a
    Hadamard on p.
    """
    if not 1 <= n <= 8:
        raise UsageError(f"QFT program needs 1 <= n <= 8, got {n}")
    if n > 1:
        yield _reversal_chunk(n), Bindings()
    for r in range(n):
        p = n - (r + 1)
        for k in range(r):
            m = r - (k + 1)
            text = _rows(("p", p, ""), ("", 1, "|R|"), ("k", k, ""), ("", 1, "|R|"), ("m", m, ""))
            yield text, Bindings(gates={"R": controlled_phase(math.pi / (2 << k))},
                                 vars={"p": p, "k": k, "m": m})
        q = r
        yield _rows(("p", p, ""), ("", 1, "[H]"), ("q", q, "")), Bindings(vars={"p": p, "q": q})


def build_qft_program(n: int) -> BoundProgram:
    program = None
    for text, b in qft_chunks(n):
        step = bind(parse(text), b)
        program = step if program is None else program.then(step)
    return program


def qft_max_error(n: int) -> float:
    """Largest entrywise gap between the chunk-built QFT and the analytic DFT."""
    from .oracle import dft_matrix

    return float(np.max(np.abs(program_unitary(build_qft_program(n)).matrix - dft_matrix(n))))
