"""Parser for ASCII-art circuit chunks delimited by ``QBEGIN(name)`` / ``QEND``.

Chunk grammar, one circuit line per non-blank row::

    row      := [init] { filler | repeat | gate | swap } [">"]
    init     := "|0>" | "|1>"            (first token of the row only)
    filler   := "-"+ | " "+
    repeat   := "/" (integer | ident) "/"
    gate     := "[" ident "]"            (single-line gate)
              | "|" ident "|"            (multi-line gate, see below)
    swap     := "X"
    ident    := letter { letter | digit | "_" }

Bar gates with the same identifier and the same column span on several rows
form one gate over those rows; rows in between that lack the token pass
through. Same identifier with overlapping but unequal spans is an alignment
error. Every column holds zero or exactly two ``X`` marks. Stages are
assigned as soon as possible along each line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import ChunkSyntaxError, Diagnostic, InvariantError
from .ir import IDENT_RE, Chunk, GatePlacement, LineSpec, Stage, SwapPlacement, validate


class TokenKind(Enum):
    DASH_RUN = "dash"
    REPEAT = "repeat"
    INIT = "init"
    SQUARE_GATE = "square"
    BAR_GATE = "bar"
    SWAP_X = "swap"
    MEASURE_MARK = "measure"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    row: int
    span: tuple[int, int]  # inclusive source columns, 0-based


@dataclass(frozen=True)
class SourceGrid:
    rows: tuple[str, ...]
    first_row: int = 1  # 1-based source line number of rows[0]
    header: str = "QBEGIN"
    machine_name: str | None = None
    path: str = "<input>"

    def cell(self, row: int, col: int) -> str:
        text = self.rows[row]
        return text[col] if 0 <= col < len(text) else " "

    @property
    def width(self) -> int:
        return max((len(r) for r in self.rows), default=0)


def _error(msg: str, col: int) -> ChunkSyntaxError:
    return ChunkSyntaxError(msg, col=col + 1)


def _ident(text: str, col: int, what: str) -> str:
    if not text:
        raise _error(f"empty {what} identifier", col)
    if not IDENT_RE.match(text):
        raise _error(f"invalid {what} identifier '{text}'", col)
    return text


def tokenize_line(row: str, row_index: int = 0, keep_filler: bool = False) -> list[Token]:
    """Split one chunk row into tokens, left to right.

    Dash runs are structural filler and are only returned when
    ``keep_filler`` is set. Raises :class:`ChunkSyntaxError` with the 1-based
    column of the first offending character.
    """
    toks: list[Token] = []
    i, n = 0, len(row)
    first = True
    while i < n:
        c = row[i]
        if c.isspace():
            i += 1
            continue
        if c == "-":
            j = i
            while j < n and row[j] == "-":
                j += 1
            if keep_filler:
                toks.append(Token(TokenKind.DASH_RUN, row[i:j], row_index, (i, j - 1)))
            i = j
        elif c == "|" and first and row.startswith(("|0>", "|1>"), i):
            toks.append(Token(TokenKind.INIT, row[i + 1], row_index, (i, i + 2)))
            i += 3
        elif c == "|" and row.startswith(("|0>", "|1>"), i):
            raise _error("initial state marker must be the first token of the line", i)
        elif c in "|[/":
            close = {"|": "|", "[": "]", "/": "/"}[c]
            j = row.find(close, i + 1)
            if j < 0:
                what = {"|": "vertical bar", "[": "bracket", "/": "repeat count"}[c]
                raise _error(f"unterminated {what}: missing closing '{close}'", i)
            body = row[i + 1:j]
            if c == "/":
                if not body:
                    raise _error("empty repeat count", i)
                if not body.isdigit():
                    _ident(body, i + 1, "repeat variable")
                toks.append(Token(TokenKind.REPEAT, body, row_index, (i, j)))
            else:
                kind = TokenKind.BAR_GATE if c == "|" else TokenKind.SQUARE_GATE
                toks.append(Token(kind, _ident(body, i + 1, "gate"), row_index, (i, j)))
            i = j + 1
        elif c == "X":
            if i + 1 < n and (row[i + 1].isalnum() or row[i + 1] == "_"):
                raise _error("identifier outside gate brackets (a swap is a lone 'X')", i)
            toks.append(Token(TokenKind.SWAP_X, "X", row_index, (i, i)))
            i += 1
        elif c == ">":
            if row[i + 1:].strip():
                raise _error("measurement mark '>' must be the last character of the line", i)
            toks.append(Token(TokenKind.MEASURE_MARK, ">", row_index, (i, i)))
            i += 1
        else:
            raise _error(f"unexpected character {c!r}", i)
        first = False
    return toks


def _overlap(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def parse_chunk(grid: SourceGrid) -> Chunk:
    """Parse the rows of one chunk into a :class:`Chunk`."""
    diags: list[Diagnostic] = []

    def err(msg: str, row: int, col: int) -> None:
        diags.append(Diagnostic(msg, grid.first_row + row, col + 1, grid.path))

    lines: list[LineSpec] = []
    line_tokens: list[list[Token]] = []
    for r, text in enumerate(grid.rows):
        if not text.strip():
            continue
        try:
            toks = tokenize_line(text, r)
        except ChunkSyntaxError as exc:
            diags.append(Diagnostic(exc.message, grid.first_row + r, exc.col, grid.path))
            toks = []
        repeat: int | str = 1
        init = None
        reps = [t for t in toks if t.kind is TokenKind.REPEAT]
        for t in reps[1:]:
            err("a line may carry only one repeat count", r, t.span[0])
        if reps:
            t = reps[0]
            repeat = int(t.text) if t.text.isdigit() else t.text
            if repeat == 0:
                err("repeat count must be at least 1", r, t.span[0])
        for t in toks:
            if t.kind is TokenKind.INIT:
                init = int(t.text)
        lines.append(LineSpec(repeat, init, grid.first_row + r))
        line_tokens.append(toks)

    if not lines:
        diags.append(Diagnostic("chunk has no lines", grid.first_row - 1, 1, grid.path))

    # (start column, placement) for scheduling
    placed: list[tuple[int, GatePlacement | SwapPlacement]] = []

    bars: dict[tuple[str, int, int], list[int]] = {}
    swaps: dict[int, list[int]] = {}
    for li, toks in enumerate(line_tokens):
        for t in toks:
            if t.kind is TokenKind.SQUARE_GATE:
                placed.append((t.span[0], GatePlacement(t.text, (li,), t.span)))
            elif t.kind is TokenKind.BAR_GATE:
                bars.setdefault((t.text, *t.span), []).append(li)
            elif t.kind is TokenKind.SWAP_X:
                swaps.setdefault(t.span[0], []).append(li)

    groups = sorted(bars.items(), key=lambda kv: (kv[0][1], kv[1][0]))
    for gi, ((ident, a, b), members) in enumerate(groups):
        for (ident2, a2, b2), members2 in groups[:gi]:
            if ident2 == ident and _overlap((a, b), (a2, b2)):
                err(f"gate |{ident}| is not vertically aligned with |{ident}| on the line "
                    f"at row {lines[members2[0]].row} (columns {a + 1}-{b + 1} vs {a2 + 1}-{b2 + 1})",
                    lines[members[0]].row - grid.first_row, a)
                break
        placed.append((a, GatePlacement(ident, tuple(members), (a, b))))

    for col, members in sorted(swaps.items()):
        row0 = lines[members[0]].row - grid.first_row
        if len(members) != 2:
            err(f"column {col + 1} has {len(members)} swap mark(s) 'X'; a swap needs exactly 2",
                row0, col)
            continue
        la, lb = members
        ra, rb = lines[la].repeat, lines[lb].repeat
        if type(ra) is not type(rb) or ra != rb:
            err(f"cannot swap lines with different repeat counts ({ra} and {rb})", row0, col)
            continue
        placed.append((col, SwapPlacement(la, lb, col)))

    measured = tuple(li for li, toks in enumerate(line_tokens)
                     if any(t.kind is TokenKind.MEASURE_MARK for t in toks))

    if diags:
        raise ChunkSyntaxError(diags[0].message, row=diags[0].row, col=diags[0].col,
                               path=grid.path, diagnostics=diags)

    chunk = Chunk(
        lines=tuple(lines),
        stages=schedule([p for _, p in sorted(placed, key=lambda cp: (cp[0], min(cp[1].lines)))]),
        measured_lines=measured,
        machine_name=grid.machine_name,
        path=grid.path,
        header_row=grid.first_row - 1,
    )
    problems = validate(chunk)
    if problems:
        raise InvariantError(f"parser produced an invalid chunk: {problems[0]}")
    return chunk


def schedule(placements) -> tuple[Stage, ...]:
    """ASAP stage assignment; ``placements`` must be in left-to-right order."""
    last: dict[int, int] = {}
    staged: list[list] = []
    for p in placements:
        s = max((last[line] + 1 for line in p.lines if line in last), default=0)
        for line in p.lines:
            last[line] = s
        while len(staged) <= s:
            staged.append([])
        staged[s].append(p)
    return tuple(make_stage(ps) for ps in staged)


def make_stage(placements) -> Stage:
    gates = sorted((p for p in placements if isinstance(p, GatePlacement)), key=lambda g: g.lines[0])
    swaps = sorted((p for p in placements if isinstance(p, SwapPlacement)), key=lambda w: w.line_a)
    return Stage(tuple(gates), tuple(swaps))


_BEGIN = re.compile(r"\s*QBEGIN\b")
_BEGIN_FULL = re.compile(r"\s*QBEGIN\s*(?:\(\s*([A-Za-z_]\w*)?\s*\))?\s*;?\s*\Z")
_END = re.compile(r"\s*QEND\b")
_END_FULL = re.compile(r"\s*QEND\s*;?\s*\Z")


def extract_chunks(source: str, path: str = "<input>") -> list[tuple[SourceGrid, tuple[int, int]]]:
    """Find every ``QBEGIN ... QEND`` region in ``source``.

    Returns each chunk's grid with the byte range ``[start, end)`` of the
    region in the UTF-8 encoding of ``source`` (delimiter lines included).
    """
    found = []
    open_at = None  # (line number, byte offset, header, name)
    rows: list[str] = []
    offset = 0
    for lineno, raw in enumerate(source.splitlines(keepends=True), 1):
        text = raw.rstrip("\r\n")
        nbytes = len(raw.encode())
        if _BEGIN.match(text):
            m = _BEGIN_FULL.match(text)
            if m is None:
                raise ChunkSyntaxError("malformed chunk header; expected QBEGIN(name)",
                                       row=lineno, col=text.index("QBEGIN") + 1, path=path)
            if open_at is not None:
                raise ChunkSyntaxError(f"nested QBEGIN; the chunk opened on line {open_at[0]} "
                                       "is still open", row=lineno, col=text.index("QBEGIN") + 1,
                                       path=path)
            open_at = (lineno, offset, text.strip(), m.group(1))
            rows = []
        elif _END.match(text):
            if not _END_FULL.match(text):
                raise ChunkSyntaxError("malformed chunk terminator; expected QEND", row=lineno,
                                       col=text.index("QEND") + 1, path=path)
            if open_at is None:
                raise ChunkSyntaxError("stray QEND without a matching QBEGIN", row=lineno,
                                       col=text.index("QEND") + 1, path=path)
            begin_line, begin_off, header, name = open_at
            grid = SourceGrid(tuple(rows), begin_line + 1, header, name, path)
            found.append((grid, (begin_off, offset + len(text.encode()))))
            open_at = None
        elif open_at is not None:
            rows.append(text.expandtabs(8))
        offset += nbytes
    if open_at is not None:
        raise ChunkSyntaxError(f"unterminated chunk: QBEGIN on line {open_at[0]} has no QEND",
                               row=open_at[0], col=1, path=path)
    return found


def parse_document(source: str, path: str = "<input>") -> list[Chunk]:
    """Parse every chunk in ``source``; diagnostics from all chunks are combined."""
    chunks, diags = [], []
    for grid, _ in extract_chunks(source, path):
        try:
            chunks.append(parse_chunk(grid))
        except ChunkSyntaxError as exc:
            diags.extend(exc.diagnostics(path))
    if diags:
        raise ChunkSyntaxError(diags[0].message, row=diags[0].row, col=diags[0].col, path=path,
                               diagnostics=diags)
    return chunks


def parse(source: str, path: str = "<input>") -> Chunk:
    """Parse a document holding exactly one chunk, or bare chunk rows."""
    if "QBEGIN" in source:
        chunks = parse_document(source, path)
        if len(chunks) != 1:
            raise ChunkSyntaxError(f"expected exactly one chunk, found {len(chunks)}", path=path)
        return chunks[0]
    return parse_chunk(SourceGrid(tuple(l.expandtabs(8) for l in source.splitlines()), path=path))


def render_ascii(chunk: Chunk, indent: str = "") -> str:
    """Render ``chunk`` as canonical chunk art that parses back to an equal chunk.

    Each placement gets its own column slot, stage by stage.
    """
    n = chunk.num_lines
    rows = [indent for _ in range(n)]
    if chunk.has_init:
        rows = [r + ("---" if ls.init is None else f"|{ls.init}>") for r, ls in zip(rows, chunk.lines)]
    marks = [f"/{ls.repeat}/" if ls.repeat != 1 else "" for ls in chunk.lines]
    w = max((len(m) for m in marks), default=0)
    rows = [r + "-" + m.ljust(w, "-") + "--" for r, m in zip(rows, marks)]
    for stage in chunk.stages:
        for p in stage.placements():
            if isinstance(p, GatePlacement):
                tok = f"[{p.gate_id}]" if len(p.lines) == 1 else f"|{p.gate_id}|"
            else:
                tok = "X"
            rows = [r + (tok if i in p.lines else "-" * len(tok)) + "--" for i, r in enumerate(rows)]
    rows = [r + "-" + (">" if i in chunk.measured_lines else "") for i, r in enumerate(rows)]
    head = f"{indent}QBEGIN({chunk.machine_name})" if chunk.machine_name else f"{indent}QBEGIN"
    return "\n".join([head, *rows, f"{indent}QEND"]) + "\n"
