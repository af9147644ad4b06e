import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quect.errors import BindingError, DomainError
from quect.ir import (
    Chunk,
    GatePlacement,
    LineSpec,
    Stage,
    SwapPlacement,
    from_text,
    qubit_layout,
    to_text,
    validate,
)
from quect.parser import parse

TWO_STAGE = Chunk(
    lines=(LineSpec("n"), LineSpec(1), LineSpec(1)),
    stages=(
        Stage((GatePlacement("A", (0, 2), (6, 8)), GatePlacement("B", (1,), (8, 10)))),
        Stage((GatePlacement("Uf", (0, 1), (13, 16)),)),
    ),
    measured_lines=(1,),
)


def test_two_stage_valid():
    assert validate(TWO_STAGE) == []


def test_overlap_diagnostic():
    c = Chunk(
        lines=(LineSpec(), LineSpec(), LineSpec()),
        stages=(Stage((GatePlacement("G", (0, 1)),), (SwapPlacement(1, 2),)),),
    )
    (d,) = validate(c)
    assert "line 1 is used by two placements" in d.message


def test_out_of_range_diagnostic():
    c = Chunk(lines=(LineSpec(),) * 3, stages=(Stage((GatePlacement("G", (5,)),)),))
    (d,) = validate(c)
    assert "line 5" in d.message


def test_other_invariants():
    c = Chunk(
        lines=(LineSpec(0), LineSpec("9x"), LineSpec(1, init=2)),
        stages=(Stage((GatePlacement("G", (1, 0)),), (SwapPlacement(2, 2),)),),
        measured_lines=(2, 1),
    )
    messages = " | ".join(d.message for d in validate(c))
    for fragment in ["must be >= 1", "invalid repeat variable", "must be 0 or 1",
                     "not strictly increasing", "to itself", "measured lines"]:
        assert fragment in messages
    assert validate(c) == validate(c)


def test_layout():
    chunk = Chunk(lines=(LineSpec("n"), LineSpec(1), LineSpec(1)))
    lay = qubit_layout(chunk, {"n": 2})
    assert lay.offsets == (0, 2, 3) and lay.total == 4
    lay = qubit_layout(Chunk(lines=(LineSpec(),) * 3))
    assert lay.offsets == (0, 1, 2) and lay.total == 3


def test_layout_two_stage_n1():
    lay = qubit_layout(TWO_STAGE, {"n": 1})
    assert lay.total == 3
    assert [q for line in TWO_STAGE.measured_lines for q in lay.qubits(line)] == [1]


def test_layout_errors():
    with pytest.raises(BindingError, match="'n'"):
        qubit_layout(TWO_STAGE, {})
    with pytest.raises(DomainError):
        qubit_layout(TWO_STAGE, {"n": 0})


@settings(max_examples=50)
@given(st.lists(st.one_of(st.integers(1, 5), st.sampled_from(["a", "b"])), min_size=1, max_size=8),
       st.integers(1, 4), st.integers(1, 4))
def test_layout_total_is_sum(repeats, a, b):
    chunk = Chunk(lines=tuple(LineSpec(r) for r in repeats))
    lay = qubit_layout(chunk, {"a": a, "b": b})
    resolved = [{"a": a, "b": b}.get(r, r) for r in repeats]
    assert lay.total == sum(resolved)
    assert list(lay.widths) == resolved


def test_text_round_trip_keeps_columns():
    text = to_text(TWO_STAGE)
    (back,) = from_text(text)
    assert back == TWO_STAGE
    assert to_text(back) == text


def test_text_round_trip_with_swaps_and_init():
    c = parse("|1>-/k/-X--[H]-->\n|0>-/k/-X-------\n")
    (back,) = from_text(to_text(c))
    assert back == c and back.has_init
    assert back.stages[0].swaps[0].column == c.stages[0].swaps[0].column


def test_from_text_multiple_and_errors():
    two = to_text(TWO_STAGE) + to_text(TWO_STAGE)
    assert len(from_text(two)) == 2
    with pytest.raises(Exception, match="ends inside"):
        from_text("chunk qm\nlines 1\n")
    with pytest.raises(Exception, match="unknown IR keyword"):
        from_text("chunk qm\nbogus\nend\n")


def test_equality_ignores_provenance():
    a = Chunk(lines=(LineSpec(1, row=3),), stages=(Stage((GatePlacement("H", (0,), (2, 4)),)),))
    b = Chunk(lines=(LineSpec(1, row=9),), stages=(Stage((GatePlacement("H", (0,), (7, 9)),)),))
    assert a == b
