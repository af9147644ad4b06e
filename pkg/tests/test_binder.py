import numpy as np
import pytest

from quect.binder import Bindings, BoundProgram, GateStep, SwapStep, bind, bind_all
from quect.errors import BindingError, DimensionError, DomainError
from quect.gates import CATALOG, H, ClassicalFunction, tensor_power
from quect.linalg import UnitaryMatrix
from quect.oracle import random_unitary
from quect.parser import parse, parse_document

TWO_STAGE = """\
QBEGIN(qm)
-/n/--|A|----|Uf|---
--------[B]--|Uf|--->
------|A|----------
QEND
"""


def _two_stage_bindings(n=1, seed=3):
    rng = np.random.default_rng(seed)
    return Bindings(
        gates={
            "A": UnitaryMatrix(random_unitary(1 << (n + 1), rng)),
            "B": UnitaryMatrix(random_unitary(2, rng)),
            "Uf": UnitaryMatrix(random_unitary(1 << (n + 1), rng)),
        },
        vars={"n": n},
    )


def test_two_stage_bind_n1():
    p = bind(parse(TWO_STAGE), _two_stage_bindings())
    assert p.total_qubits == 3
    assert [(s.gate_id, s.targets) for s in p.steps] == [("A", (0, 2)), ("B", (1,)), ("Uf", (0, 1))]
    assert p.measured == (1,)
    assert p.initial_index is None and p.machine_name == "qm"


def test_two_stage_bind_n2_widens_top_line():
    p = bind(parse(TWO_STAGE), _two_stage_bindings(n=2))
    assert p.total_qubits == 4
    assert [s.targets for s in p.steps] == [(0, 1, 3), (2,), (0, 1, 2)]
    assert p.measured == (2,)


def test_deutsch_bind():
    p = bind(parse("|0>--[H]--|Uf|--[H]-->\n|1>--[H]--|Uf|--------\n"),
             Bindings(functions={"Uf": ClassicalFunction(1, 1, (1, 0))}))
    assert p.total_qubits == 2
    assert p.measured == (0,)
    assert p.initial_index == 0b01
    assert [s.targets for s in p.steps] == [(0,), (1,), (0, 1), (0,)]


def test_arity_mismatch_names_the_gate():
    chunk = parse_document("QBEGIN(q)\n-/2/-[H]--\nQEND\n", "f.qct")[0]
    with pytest.raises(DimensionError, match="gate 'H' acts on 1 qubit") as info:
        bind(chunk, Bindings())
    assert (info.value.row, info.value.col, info.value.path) == (2, 6, "f.qct")


def test_unknown_gate_and_variable():
    with pytest.raises(BindingError, match="unknown gate identifier 'Q'"):
        bind(parse("--[Q]--\n"), Bindings())
    with pytest.raises(BindingError, match="'n'"):
        bind(parse("-/n/-[H]--\n"), Bindings())
    with pytest.raises(BindingError):
        bind(parse("--[H]--\n"), Bindings(builtins=False))


def test_user_gate_shadows_builtin():
    p = bind(parse("--[H]--\n"), Bindings(gates={"H": CATALOG["X"]}))
    assert p.steps[0].unitary is CATALOG["X"]


def test_swap_steps_cover_whole_lines():
    p = bind(parse("-/n/-X--\n--------\n-/n/-X--\n"), Bindings(vars={"n": 2}))
    (step,) = p.steps
    assert isinstance(step, SwapStep)
    assert step.block_a == (0, 1) and step.block_b == (3, 4)


def test_bind_is_pure():
    chunk = parse(TWO_STAGE)
    b = _two_stage_bindings()
    assert bind(chunk, b) == bind(chunk, b)
    assert chunk == parse(TWO_STAGE)


def test_then_and_bind_all():
    b = Bindings(gates={"Hn": tensor_power(H, 2)}, vars={"n": 2})
    first, second = bind_all(parse_document(
        "QBEGIN(q)\n|0>-/n/-[Hn]--\nQEND\nQBEGIN(q)\n-/n/-[Hn]-->\nQEND\n"), b)
    joined = first.then(second)
    assert len(joined.steps) == 2 and joined.measured == (0, 1) and joined.initial_index == 0
    with pytest.raises(DimensionError):
        first.then(BoundProgram(3))
    with pytest.raises(DomainError, match="register size"):
        bind_all([parse("--[H]--\n"), parse("--[H]--\n--[H]--\n")], Bindings())


def test_steps_within_stage_sorted_by_first_qubit():
    p = bind(parse("--|A|--\n--[X]--\n--|A|--\n"), Bindings(gates={"A": tensor_power(H, 2)}))
    assert [s.targets for s in p.steps] == [(0, 2), (1,)]
    assert all(isinstance(s, GateStep) for s in p.steps)
