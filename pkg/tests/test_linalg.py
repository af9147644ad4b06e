import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quect.errors import DimensionError, DomainError
from quect.gates import H, I, X
from quect.linalg import (
    UnitaryMatrix,
    apply_on_subset,
    basis_state,
    embed,
    ket,
    kron,
    kron_state,
    marginal_distribution,
    permute_qubits,
)
from quect.oracle import embed_dense, random_state, random_unitary


def test_kron_identity():
    assert kron(I, I).allclose(np.eye(4))


def test_kron_x_identity_swaps_halves():
    # |x0 y> -> |(1-x0) y>: basis 0<->2, 1<->3
    expected = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    assert kron(X, I).allclose(expected)


def test_kron_builds_stage_product():
    rng = np.random.default_rng(0)
    a, c = (UnitaryMatrix(random_unitary(2, rng)) for _ in range(2))
    b = UnitaryMatrix(random_unitary(4, rng))
    c2 = UnitaryMatrix(random_unitary(4, rng))
    # (C (x) I2)(A (x) B) with C on the top two qubits, B on the bottom two
    got = kron(c2, I).matrix @ kron(a, b).matrix
    dense = embed_dense(c2.matrix, [0, 1], 3) @ embed_dense(a.matrix, [0], 3) @ embed_dense(b.matrix, [1, 2], 3)
    assert np.allclose(got, dense, atol=1e-10)
    assert kron(c, I).arity == 2


def test_kron_state_ordering():
    assert np.array_equal(kron_state(ket("1"), ket("0")), [0, 0, 1, 0])
    assert np.array_equal(kron_state(ket("0"), ket("0")), [1, 0, 0, 0])
    # top factor is the most significant bit: |0>|1>|0> is index 2
    three = kron_state(kron_state(ket("0"), ket("1")), ket("0"))
    assert np.array_equal(three, basis_state(3, 0b010))


def test_unitary_rejects_non_unitary():
    with pytest.raises(DomainError):
        UnitaryMatrix(np.array([[1, 1], [0, 1]]))
    with pytest.raises(DimensionError):
        UnitaryMatrix(np.eye(3))


def test_apply_x_on_low_qubit():
    out = apply_on_subset(ket("00"), X, [1])
    assert np.allclose(out, [0, 1, 0, 0])


def test_apply_h_on_zero():
    s = 1 / math.sqrt(2)
    assert np.allclose(apply_on_subset(ket("0"), H, [0]), [s, s])


def test_apply_arity_mismatch():
    with pytest.raises(DimensionError, match="arity 1 applied to 2"):
        apply_on_subset(ket("00"), H, [0, 1])


def test_apply_on_non_adjacent_matches_dense():
    rng = np.random.default_rng(5)
    a = UnitaryMatrix(random_unitary(4, rng))
    z = random_state(3, rng)
    assert np.allclose(apply_on_subset(z, a, [0, 2]), embed_dense(a.matrix, [0, 2], 3) @ z, atol=1e-12)
    # reversed target order feeds qubit 2 to the gate's high input
    assert np.allclose(apply_on_subset(z, a, [2, 0]), embed_dense(a.matrix, [2, 0], 3) @ z, atol=1e-12)


def test_apply_all_targets_is_matvec():
    rng = np.random.default_rng(9)
    u = UnitaryMatrix(random_unitary(8, rng))
    z = random_state(3, rng)
    assert np.allclose(apply_on_subset(z, u, [0, 1, 2]), u.matrix @ z, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.data())
def test_apply_agrees_with_dense_oracle(k, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    a = data.draw(st.integers(1, k))
    targets = data.draw(st.permutations(range(k)))[:a]
    g = UnitaryMatrix(random_unitary(1 << a, rng))
    z = random_state(k, rng)
    assert np.max(np.abs(apply_on_subset(z, g, targets) - embed_dense(g.matrix, targets, k) @ z)) <= 1e-10
    assert embed(g, targets, k).allclose(embed_dense(g.matrix, targets, k))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.data())
def test_apply_preserves_norm(k, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    a = data.draw(st.integers(1, min(k, 4)))
    targets = data.draw(st.permutations(range(k)))[:a]
    z = random_state(k, rng)
    out = apply_on_subset(z, UnitaryMatrix(random_unitary(1 << a, rng)), targets)
    assert abs(np.linalg.norm(out) - 1) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_kron_of_unitaries_is_unitary(a, b, seed):
    rng = np.random.default_rng(seed)
    u = kron(UnitaryMatrix(random_unitary(1 << a, rng)), UnitaryMatrix(random_unitary(1 << b, rng)))
    assert u.arity == a + b
    assert np.max(np.abs(u.matrix @ u.matrix.conj().T - np.eye(u.dim))) <= 1e-10


def test_permute_identity_and_swap():
    z = ket("01")
    assert np.array_equal(permute_qubits(z, [0, 1]), z)
    assert np.array_equal(permute_qubits(z, [1, 0]), ket("10"))


def test_permute_moves_bits():
    # qubit 0 -> position 2, 1 -> 0, 2 -> 1: |abc> becomes |b c a>
    assert np.array_equal(permute_qubits(ket("100"), [2, 0, 1]), ket("001"))
    assert np.array_equal(permute_qubits(ket("010"), [2, 0, 1]), ket("100"))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.data())
def test_permute_inverse_law(k, data):
    perm = data.draw(st.permutations(range(k)))
    inv = [0] * k
    for p, q in enumerate(perm):
        inv[q] = p
    z = random_state(k, np.random.default_rng(data.draw(st.integers(0, 2**32 - 1))))
    assert np.max(np.abs(permute_qubits(permute_qubits(z, perm), inv) - z)) <= 1e-12


def test_permute_rejects_non_bijection():
    with pytest.raises(DomainError):
        permute_qubits(ket("00"), [0, 0])


def test_marginal_orders_bits_by_position_list():
    z = ket("110")
    assert np.allclose(marginal_distribution(z, [0, 2]), [0, 0, 1, 0])
    assert np.allclose(marginal_distribution(z, [2, 0]), [0, 1, 0, 0])
