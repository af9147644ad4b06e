"""Stage-based intermediate representation of a parsed chunk.

A chunk is described by its lines (each with a repeat count and optional
initial bit), an ordered list of stages holding gate and swap placements, and
the lines marked for measurement. Placements refer to *line* indices; line
indices become qubit indices only once repeat counts are known (see
:func:`qubit_layout`).

Column spans and source rows are provenance only and are excluded from
equality, so two chunks compare equal iff they describe the same circuit.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Union

from .errors import BindingError, ChunkSyntaxError, Diagnostic, DomainError

Repeat = Union[int, str]

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class LineSpec:
    repeat: Repeat = 1
    init: int | None = None
    row: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class GatePlacement:
    gate_id: str
    lines: tuple[int, ...]
    column_span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class SwapPlacement:
    line_a: int
    line_b: int
    column: int = field(default=0, compare=False)

    @property
    def lines(self) -> tuple[int, ...]:
        return (self.line_a, self.line_b)


Placement = Union[GatePlacement, SwapPlacement]


@dataclass(frozen=True)
class Stage:
    gates: tuple[GatePlacement, ...] = ()
    swaps: tuple[SwapPlacement, ...] = ()

    def placements(self) -> list[Placement]:
        """Gates and swaps together, sorted by first line."""
        return sorted([*self.gates, *self.swaps], key=lambda p: min(p.lines))


@dataclass(frozen=True)
class Chunk:
    lines: tuple[LineSpec, ...]
    stages: tuple[Stage, ...] = ()
    measured_lines: tuple[int, ...] = ()
    machine_name: str | None = None
    path: str = field(default="<input>", compare=False)
    header_row: int = field(default=0, compare=False)

    @property
    def num_lines(self) -> int:
        return len(self.lines)

    @property
    def repeats(self) -> tuple[Repeat, ...]:
        return tuple(ls.repeat for ls in self.lines)

    @property
    def has_init(self) -> bool:
        return any(ls.init is not None for ls in self.lines)

    def variables(self) -> set[str]:
        return {r for r in self.repeats if isinstance(r, str)}

    def gate_ids(self) -> set[str]:
        return {g.gate_id for s in self.stages for g in s.gates}


@dataclass(frozen=True)
class Layout:
    widths: tuple[int, ...]
    offsets: tuple[int, ...]
    total: int

    def qubits(self, line: int) -> range:
        return range(self.offsets[line], self.offsets[line] + self.widths[line])


def resolve_repeat(repeat: Repeat, variables: Mapping[str, int]) -> int:
    if isinstance(repeat, str):
        if repeat not in variables:
            raise BindingError(f"repeat count variable '{repeat}' is not bound")
        value = int(variables[repeat])
    else:
        value = repeat
    if value < 1:
        raise DomainError(f"repeat count {repeat} resolves to {value}; must be >= 1")
    return value


def qubit_layout(chunk: Chunk, variables: Mapping[str, int] | None = None) -> Layout:
    """Per-line qubit offsets (prefix sums of repeat counts, top line first)."""
    variables = variables or {}
    widths = []
    for i, ls in enumerate(chunk.lines):
        try:
            widths.append(resolve_repeat(ls.repeat, variables))
        except (BindingError, DomainError) as exc:
            exc.row, exc.col, exc.path = ls.row or 0, 1, chunk.path
            raise
    offsets, acc = [], 0
    for w in widths:
        offsets.append(acc)
        acc += w
    return Layout(tuple(widths), tuple(offsets), acc)


def validate(chunk: Chunk) -> list[Diagnostic]:
    """Check the structural invariants of ``chunk``; return diagnostics, never raise."""
    out: list[Diagnostic] = []
    n = chunk.num_lines

    def row_of(line: int) -> int:
        if 0 <= line < n and chunk.lines[line].row is not None:
            return chunk.lines[line].row
        return chunk.header_row

    def diag(msg: str, line: int = -1, col: int = 0) -> None:
        out.append(Diagnostic(msg, row_of(line), col, chunk.path))

    if n == 0:
        diag("chunk has no lines")
    for i, ls in enumerate(chunk.lines):
        if isinstance(ls.repeat, str):
            if not IDENT_RE.match(ls.repeat):
                diag(f"invalid repeat variable name '{ls.repeat}'", i, 1)
        elif ls.repeat < 1:
            diag(f"repeat count must be >= 1, got {ls.repeat}", i, 1)
        if ls.init not in (None, 0, 1):
            diag(f"initial value must be 0 or 1, got {ls.init}", i, 1)

    for s, stage in enumerate(chunk.stages):
        seen: dict[int, Placement] = {}
        for p in stage.placements():
            col = (p.column_span[0] if isinstance(p, GatePlacement) else p.column) + 1
            if isinstance(p, GatePlacement):
                if not p.lines:
                    diag(f"gate {p.gate_id} has no lines", col=col)
                elif any(b <= a for a, b in zip(p.lines, p.lines[1:])):
                    diag(f"gate {p.gate_id} lines {list(p.lines)} are not strictly increasing",
                         p.lines[0], col)
                if not IDENT_RE.match(p.gate_id):
                    diag(f"invalid gate identifier '{p.gate_id}'", min(p.lines, default=-1), col)
            elif p.line_a == p.line_b:
                diag(f"swap connects line {p.line_a} to itself", p.line_a, col)
            for line in p.lines:
                if not 0 <= line < n:
                    diag(f"placement refers to line {line} of a {n}-line chunk", -1, col)
                elif line in seen:
                    diag(f"line {line} is used by two placements in stage {s}", line, col)
                else:
                    seen[line] = p

    m = chunk.measured_lines
    if any(b <= a for a, b in zip(m, m[1:])):
        diag(f"measured lines {list(m)} are not strictly increasing")
    for line in m:
        if not 0 <= line < n:
            diag(f"measured line {line} out of range for a {n}-line chunk")
    return out


# -- canonical text form ----------------------------------------------------

def to_text(chunk: Chunk) -> str:
    """Canonical, diff-able text form of ``chunk``. Inverse of :func:`from_text`."""
    out = [f"chunk {chunk.machine_name or '-'}", f"lines {chunk.num_lines}"]
    out.append("repeats " + " ".join(str(r) for r in chunk.repeats))
    out.append("init " + " ".join("-" if ls.init is None else str(ls.init) for ls in chunk.lines))
    for s, stage in enumerate(chunk.stages):
        out.append(f"stage {s}")
        for p in stage.placements():
            if isinstance(p, GatePlacement):
                lines = " ".join(map(str, p.lines))
                out.append(f"  gate {p.gate_id} lines {lines} cols {p.column_span[0]} {p.column_span[1]}")
            else:
                out.append(f"  swap {p.line_a} {p.line_b} col {p.column}")
    out.append("measured " + (" ".join(map(str, chunk.measured_lines)) or "-"))
    out.append("end")
    return "\n".join(out) + "\n"


def from_text(text: str) -> list[Chunk]:
    """Parse one or more chunks in canonical text form."""
    chunks: list[Chunk] = []
    cur: dict | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        words = raw.split()
        if not words:
            continue

        def bad(msg: str = "malformed IR line"):
            return ChunkSyntaxError(f"{msg}: {raw.strip()!r}", row=lineno, col=1)

        key, args = words[0], words[1:]
        try:
            if key == "chunk":
                if cur is not None:
                    raise bad("missing 'end' before")
                cur = {"name": None if args[0] == "-" else args[0], "stages": [], "measured": ()}
                continue
            if cur is None:
                raise bad("content outside a chunk")
            if key == "lines":
                cur["n"] = int(args[0])
            elif key == "repeats":
                cur["repeats"] = [int(a) if a.isdigit() else a for a in args]
            elif key == "init":
                cur["init"] = [None if a == "-" else int(a) for a in args]
            elif key == "stage":
                if int(args[0]) != len(cur["stages"]):
                    raise bad("stages out of order")
                cur["stages"].append(([], []))
            elif key == "gate":
                i = args.index("cols")
                lines = tuple(int(a) for a in args[2:i])
                span = (int(args[i + 1]), int(args[i + 2]))
                cur["stages"][-1][0].append(GatePlacement(args[0], lines, span))
            elif key == "swap":
                cur["stages"][-1][1].append(SwapPlacement(int(args[0]), int(args[1]), int(args[3])))
            elif key == "measured":
                cur["measured"] = () if args == ["-"] else tuple(int(a) for a in args)
            elif key == "end":
                n = cur["n"]
                inits = cur.get("init", [None] * n)
                repeats = cur.get("repeats", [1] * n)
                if len(inits) != n or len(repeats) != n:
                    raise bad("line count disagrees with")
                chunks.append(Chunk(
                    lines=tuple(LineSpec(r, v) for r, v in zip(repeats, inits)),
                    stages=tuple(Stage(tuple(g), tuple(w)) for g, w in cur["stages"]),
                    measured_lines=cur["measured"],
                    machine_name=cur["name"],
                ))
                cur = None
            else:
                raise bad("unknown IR keyword")
        except (IndexError, ValueError, KeyError):
            raise bad() from None
    if cur is not None:
        raise ChunkSyntaxError("IR text ends inside a chunk", row=len(text.splitlines()), col=1)
    return chunks
