"""Bracket scanning and bisection for scalar roots."""
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import optimize

from plankton_dynamics.utils.config import Config, NumericalTolerances
from plankton_dynamics.utils.errors import NumericalFailureError
from plankton_dynamics.utils.logger import StructuredLogger

logger = StructuredLogger(__name__)


def bisect_root(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    tolerances: Optional[NumericalTolerances] = None
) -> float:
    """Bisect a strict sign-change bracket [lo, hi]."""
    tol = tolerances or Config.get_tolerances()
    try:
        return float(optimize.bisect(
            fn, lo, hi,
            xtol=tol.bisection_xtol,
            maxiter=tol.bisection_maxiter,
        ))
    except (ValueError, RuntimeError) as e:
        logger.error(f"Bisection failed on [{lo}, {hi}]: {e}", error=e, lo=lo, hi=hi)
        raise NumericalFailureError(f"bisection failed on [{lo}, {hi}]: {e}") from e


def sign_change_brackets(grid: np.ndarray, values: np.ndarray) -> Tuple[List[Tuple[float, float]], List[float]]:
    """Strict sign-change brackets of sampled values, plus grid points that are exact zeros."""
    exact = [float(x) for x, y in zip(grid, values) if y == 0.0]
    signs = np.sign(values)
    idx = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    brackets = [(float(grid[i]), float(grid[i + 1])) for i in idx]
    return brackets, exact


def scan_roots(
    fn: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    points: int,
    tolerances: Optional[NumericalTolerances] = None
) -> List[float]:
    """All roots of a vectorized fn on [lo, hi] found by grid bracketing and bisection."""
    grid = np.linspace(lo, hi, points)
    values = np.asarray(fn(grid), dtype=float)
    brackets, exact = sign_change_brackets(grid, values)
    roots = exact + [bisect_root(lambda x: float(fn(x)), a, b, tolerances) for a, b in brackets]
    logger.debug("Root scan complete", lo=lo, hi=hi, points=points, roots=len(roots))
    return sorted(roots)
