import ast
import math
from pathlib import Path

import numpy as np

import quect.oracle as oracle
from quect.oracle import dft_matrix, grover_closed_form, measure_dist, swap_dense, wrapper_matrix


def test_dft_small():
    s = 1 / math.sqrt(2)
    assert np.allclose(dft_matrix(1), [[s, s], [s, -s]])
    assert abs(dft_matrix(2)[3, 3] - 0.5j) < 1e-12


def test_dft_unitary():
    for n in range(1, 9):
        d = dft_matrix(n)
        assert np.max(np.abs(d @ d.conj().T - np.eye(1 << n))) <= 1e-12


def test_grover_closed_form():
    assert abs(grover_closed_form(1, 0) - 0.5) < 1e-15
    assert abs(grover_closed_form(2, 1) - 1.0) < 1e-12
    assert grover_closed_form(6, 6) > 0.9


def test_measure_dist_unnormalized_input():
    assert np.allclose(measure_dist([0, 2, 0, 0], [1]), [0, 1])


def test_swap_dense():
    # swap qubits 0 and 2 of |100> gives |001>
    z = np.zeros(8)
    z[0b100] = 1
    assert (swap_dense([0], [2], 3) @ z)[0b001] == 1


def test_wrapper_matrix_identity_function():
    # f(x) = x on one bit is the CNOT
    assert wrapper_matrix([0, 1], 1, 1).tolist() == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]


def test_oracle_is_isolated_from_engine():
    tree = ast.parse(Path(oracle.__file__).read_text())
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.Import):
            imported |= {a.name.split(".")[0] for a in node.names}
        elif isinstance(node, ast.ImportFrom):
            assert node.level == 0, "oracle must not use relative imports"
            imported.add(node.module.split(".")[0])
    assert imported <= {"__future__", "cmath", "math", "typing", "numpy"}
