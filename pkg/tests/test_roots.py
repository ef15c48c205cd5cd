import numpy as np
import pytest

from plankton_dynamics.analysis.roots import bisect_root, scan_roots, sign_change_brackets
from plankton_dynamics.utils.errors import NumericalFailureError


def test_bisect_root():
    assert bisect_root(lambda x: x * x - 2.0, 0.0, 2.0) == pytest.approx(np.sqrt(2.0), abs=1e-13)


def test_bisect_without_sign_change():
    with pytest.raises(NumericalFailureError):
        bisect_root(lambda x: x * x + 1.0, -1.0, 1.0)


def test_brackets_and_exact_zeros():
    grid = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    values = np.array([1.0, -1.0, 0.0, 2.0, -3.0])
    brackets, exact = sign_change_brackets(grid, values)
    assert brackets == [(0.0, 1.0), (3.0, 4.0)]
    assert exact == [2.0]


def test_scan_finds_all_roots_in_order():
    roots = scan_roots(lambda u: (u - 0.2) * (u - 0.5) * (u - 0.9), 0.01, 0.99, 1000)
    np.testing.assert_allclose(roots, [0.2, 0.5, 0.9], atol=1e-12)
