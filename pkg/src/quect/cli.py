"""Command-line front end.

A program file holds declarations followed by (or mixed with) chunks::

    # comments start with '#'
    machine 2                 # register size (default: taken from the chunks)
    seed 7                    # default RNG seed
    var n=3                   # repeat-count variable
    gate Hn builtin:H^n       # H, X, Y, Z, I, optionally ^int or ^var
    gate R builtin:R(pi/4)    # also CP(angle), IM(n), QFT(n)
    gate S matrix:1 0; 0 i    # rows split by ';', entries like 0.5-0.5i
    fn Uf table:not.tt        # truth-table file, relative to this file
    QBEGIN(qm)
    |0>--[H]--|Uf|--[H]-->
    |1>--[H]--|Uf|--------
    QEND
"""
from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import algorithms, gates
from .binder import Bindings, bind
from .errors import ChunkSyntaxError, DomainError, QuectError, UsageError
from .ir import IDENT_RE, Chunk, to_text
from .linalg import UnitaryMatrix
from .machine import Machine
from .parser import extract_chunks, parse_chunk

PROB_EPS = 1e-12


@dataclass
class ProgramFile:
    path: str
    chunks: list[Chunk]
    machine: int | None = None
    seed: int | None = None
    vars: dict[str, int] = field(default_factory=dict)
    gate_specs: dict[str, tuple[str, int]] = field(default_factory=dict)  # name -> (spec, row)
    functions: dict[str, gates.ClassicalFunction] = field(default_factory=dict)

    def bindings(self, overrides: dict[str, int] | None = None) -> Bindings:
        variables = {**self.vars, **(overrides or {})}
        built = {}
        for name, (spec, row) in self.gate_specs.items():
            try:
                built[name] = gate_from_spec(spec, variables)
            except QuectError as exc:
                raise DomainError(f"gate {name}: {exc.message}", row=row, col=1, path=self.path) from None
        return Bindings(built, variables, self.functions)


_ANGLE = re.compile(r"(-?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\Z")


def parse_angle(text: str) -> float:
    text = text.strip()
    m = _ANGLE.match(text)
    if m:
        scale = m.group(1)
        value = (float(scale) if scale not in ("", "-") else (-1.0 if scale == "-" else 1.0)) * math.pi
        return value / float(m.group(2)) if m.group(2) else value
    try:
        return float(text)
    except ValueError:
        raise DomainError(f"cannot read angle {text!r}") from None


def _count(text: str, variables: dict[str, int]) -> int:
    text = text.strip()
    if text.isdigit():
        return int(text)
    if text in variables:
        return int(variables[text])
    raise DomainError(f"'{text}' is neither an integer nor a declared variable")


def parse_matrix(text: str) -> UnitaryMatrix:
    rows = [r.split() for r in text.split(";") if r.strip()]
    if not rows or len({len(r) for r in rows}) != 1:
        raise DomainError("matrix rows are missing or have different lengths")
    try:
        m = np.array([[complex(e.replace("i", "j")) for e in r] for r in rows])
    except ValueError as exc:
        raise DomainError(f"bad matrix entry ({exc})") from None
    return UnitaryMatrix(m)


def gate_from_spec(spec: str, variables: dict[str, int]) -> UnitaryMatrix:
    kind, _, body = spec.partition(":")
    body = body.strip()
    if kind == "matrix":
        return parse_matrix(body)
    if kind != "builtin":
        raise DomainError(f"unknown gate kind '{kind}' (expected builtin: or matrix:)")
    m = re.fullmatch(r"([A-Za-z]+)\s*(?:\^\s*(\w+))?", body)
    if m and m.group(1) in gates.CATALOG:
        g = gates.CATALOG[m.group(1)]
        return gates.tensor_power(g, _count(m.group(2), variables)) if m.group(2) else g
    m = re.fullmatch(r"(R|CP|IM|QFT)\s*\((.*)\)", body)
    if not m:
        raise DomainError(f"unknown builtin gate '{body}'")
    name, arg = m.groups()
    if name == "R":
        return gates.r_gate(parse_angle(arg))
    if name == "CP":
        return gates.controlled_phase(parse_angle(arg))
    if name == "IM":
        return gates.inversion_about_mean(_count(arg, variables))
    return gates.qft(_count(arg, variables))


def load_program(path: str | Path) -> ProgramFile:
    path = Path(path)
    source = path.read_text(encoding="utf-8")
    name = str(path)
    grids = extract_chunks(source, name)
    in_chunk = set()
    for grid, _ in grids:
        in_chunk.update(range(grid.first_row - 1, grid.first_row + len(grid.rows) + 1))

    chunks, diags = [], []
    for grid, _ in grids:
        try:
            chunks.append(parse_chunk(grid))
        except ChunkSyntaxError as exc:
            diags.extend(exc.diagnostics(name))
    if diags:
        raise ChunkSyntaxError(diags[0].message, row=diags[0].row, col=diags[0].col, path=name,
                               diagnostics=diags)

    prog = ProgramFile(name, chunks)
    for row, raw in enumerate(source.splitlines(), 1):
        if row in in_chunk:
            continue
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        key, _, rest = text.partition(" ")
        rest = rest.strip()
        col = raw.index(key) + 1

        def fail(msg: str):
            return DomainError(msg, row=row, col=col, path=name)

        try:
            if key == "machine":
                prog.machine = int(rest)
            elif key == "seed":
                prog.seed = int(rest)
            elif key == "var":
                var, _, value = rest.partition("=")
                if not IDENT_RE.match(var.strip()):
                    raise fail(f"invalid variable name '{var.strip()}'")
                prog.vars[var.strip()] = int(value)
            elif key == "gate":
                gname, _, spec = rest.partition(" ")
                if not IDENT_RE.match(gname):
                    raise fail(f"invalid gate name '{gname}'")
                prog.gate_specs[gname] = (spec.strip(), row)
            elif key == "fn":
                fname, _, spec = rest.partition(" ")
                kind, _, table = spec.strip().partition(":")
                if not IDENT_RE.match(fname) or kind != "table" or not table:
                    raise fail("expected 'fn NAME table:PATH'")
                tpath = path.parent / table.strip()
                try:
                    prog.functions[fname] = gates.ClassicalFunction.load(tpath)
                except OSError as exc:
                    raise fail(f"cannot read truth table {tpath}: {exc.strerror}") from None
            else:
                raise fail(f"unknown declaration '{key}'")
        except ValueError as exc:
            if isinstance(exc, QuectError):
                raise
            raise fail(f"bad value in '{text}'") from None
    return prog


def _kv(text: str) -> tuple[str, int]:
    name, sep, value = text.partition("=")
    if not sep or not IDENT_RE.match(name):
        raise argparse.ArgumentTypeError(f"expected NAME=INT, got {text!r}")
    try:
        return name, int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NAME=INT, got {text!r}") from None


def _report(exc: QuectError, path: str, err) -> int:
    for d in exc.diagnostics(path):
        print(d, file=err)
    return 1


def cmd_emit_ir(args, out, err) -> int:
    prog = load_program(args.file)
    out.write("".join(to_text(c) for c in prog.chunks))
    return 0


def cmd_run(args, out, err) -> int:
    if args.emit_ir:
        return cmd_emit_ir(args, out, err)
    prog = load_program(args.file)
    if not prog.chunks:
        raise UsageError("file contains no chunks", row=1, col=1, path=prog.path)
    b = prog.bindings(dict(args.var or []))
    programs = [bind(c, b) for c in prog.chunks]
    k = prog.machine or programs[0].total_qubits
    seed = args.seed if args.seed is not None else (prog.seed or 0)
    qm = Machine(k, seed)

    def run_all():
        for chunk, p in zip(prog.chunks, programs):
            try:
                qm.run_chunk(p)
            except QuectError as exc:
                exc.row, exc.col, exc.path = chunk.header_row, 1, prog.path
                raise

    run_all()
    if (args.dist or args.shots) and not qm.pending_measure:
        last = prog.chunks[-1]
        raise UsageError("the final chunk marks no qubits for measurement",
                         row=last.header_row, col=1, path=prog.path)
    if args.dist:
        for value, p in enumerate(qm.get_obs_dist()):
            if p > PROB_EPS:
                out.write(f"{value} {p:.6f}\n")
    if args.shots:
        if args.dist:
            out.write("\n")
        for shot in range(args.shots):
            if shot:
                qm.reset()
                run_all()
            out.write(f"{qm.get_obs().value}\n")
    if not args.dist and not args.shots and qm.pending_measure:
        out.write(f"{qm.get_obs().value}\n")
    return 0


_DEUTSCH_FNS = {"zero": (0, 0), "one": (1, 1), "identity": (0, 1), "not": (1, 0)}


def _load_fn(args) -> gates.ClassicalFunction | None:
    return gates.ClassicalFunction.load(args.table) if args.table else None


def cmd_algo(args, out, err) -> int:
    name = args.name
    if name == "deutsch":
        if args.fn and args.fn not in _DEUTSCH_FNS:
            raise UsageError(f"deutsch --fn must be one of {', '.join(_DEUTSCH_FNS)}")
        f = _load_fn(args) or gates.ClassicalFunction(1, 1, _DEUTSCH_FNS[args.fn or "not"])
        out.write("1-1\n" if algorithms.deutsch(f, args.seed) else "not 1-1\n")
    elif name == "deutsch-jozsa":
        f = _load_fn(args)
        if f is None:
            n = args.n or 4
            fns = {"zero": lambda x: 0, "one": lambda x: 1, "lsb": lambda x: x & 1,
                   "parity": lambda x: bin(x).count("1") & 1}
            if (args.fn or "lsb") not in fns:
                raise UsageError(f"deutsch-jozsa --fn must be one of {', '.join(fns)}")
            f = gates.ClassicalFunction.from_callable(n, 1, fns[args.fn or "lsb"])
        out.write(f"{algorithms.deutsch_jozsa(f, args.seed).value}\n")
    elif name == "simon":
        f = _load_fn(args)
        if f is None:
            n = args.n or 3
            if args.period is None:
                raise UsageError("simon needs --table or --period BITS")
            period = int(args.period, 2)
            f = algorithms.periodic_function(n, period, np.random.default_rng(args.instance_seed))
        res = algorithms.simon(f, args.seed)
        out.write(f"period {res.bits(f.in_bits)}\nqueries {len(res.samples)}\n")
    elif name == "grover":
        f = _load_fn(args)
        if f is None:
            if args.target is None:
                raise UsageError("grover needs --table or --target")
            f = algorithms.marked(args.n or 6, args.target)
        res = algorithms.grover(f, args.seed, args.iterations)
        out.write(f"found {res.found}\nprobability {res.probability:.6f}\n"
                  f"iterations {res.iterations}\n")
    elif name == "qft-check":
        e = algorithms.qft_max_error(args.n or 4)
        out.write(f"max_error {e:.3e}\n{'ok' if e < 1e-9 else 'FAIL'}\n")
        return 0 if e < 1e-9 else 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quect", description="Run ASCII-art quantum circuit chunks.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a program file")
    run.add_argument("file")
    run.add_argument("--dist", action="store_true", help="print the exact outcome distribution")
    run.add_argument("--shots", type=int, default=0, metavar="S", help="print S sampled outcomes")
    run.add_argument("--seed", type=int, default=None, metavar="N")
    run.add_argument("--var", type=_kv, action="append", metavar="NAME=INT")
    run.add_argument("--emit-ir", action="store_true", help="print the canonical IR and stop")
    run.set_defaults(func=cmd_run)

    ir = sub.add_parser("emit-ir", help="print the canonical IR of every chunk")
    ir.add_argument("file")
    ir.set_defaults(func=cmd_emit_ir)

    algo = sub.add_parser("algo", help="run a bundled algorithm")
    algo.add_argument("name", choices=["deutsch", "deutsch-jozsa", "simon", "grover", "qft-check"])
    algo.add_argument("--table", help="truth-table file for f")
    algo.add_argument("--fn", help="builtin function: zero, one, identity, not, lsb, parity")
    algo.add_argument("--n", type=int)
    algo.add_argument("--target", type=int)
    algo.add_argument("--period", help="Simon period as a bit string, e.g. 101")
    algo.add_argument("--iterations", type=int)
    algo.add_argument("--instance-seed", type=int, default=0, help="seed for the random Simon f")
    algo.add_argument("--seed", type=int, default=0)
    algo.set_defaults(func=cmd_algo)
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if getattr(args, "shots", 0) < 0:
        print("quect: error: --shots must be >= 0", file=err)
        return 2
    try:
        return args.func(args, out, err)
    except QuectError as exc:
        return _report(exc, getattr(args, "file", None) or getattr(args, "table", None) or "<cli>", err)
    except OSError as exc:
        print(f"{exc.filename or '<cli>'}:0:0: error: {exc.strerror}", file=err)
        return 1


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
