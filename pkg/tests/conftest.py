"""Shared fixtures and cached solves for the test suite.

The reference control problem (length 4, horizon 1, equal quadratic
weights, affine initial profile 1 + y) appears in many tests; its solves
are memoized so repeated criteria reuse the same cell results.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest

from gegopt.cli import OcpSolution, RunRecord, run_single
from gegopt.polycore import BasisSpec
from gegopt.nodes import QuadratureRule, sgg_rule
from gegopt.transcribe import DiffusionOcp


def reference_ocp() -> DiffusionOcp:
    """The benchmark problem used throughout: L=4, t_f=1, r1=r2=1/2, f=1+y."""
    return DiffusionOcp(
        length=4.0, t_final=1.0, r1=0.5, r2=0.5, initial=lambda y: 1.0 + y
    )


@lru_cache(maxsize=None)
def solve_reference_cell(n: int, alpha: float) -> tuple[RunRecord, OcpSolution]:
    """Solve the benchmark problem on an n-by-n grid, memoized per (n, alpha)."""
    return run_single(reference_ocp(), n, n, alpha)


@lru_cache(maxsize=None)
def cached_rule(alpha: float, length: float, degree: int) -> QuadratureRule:
    return sgg_rule(BasisSpec(alpha=alpha, length=length, degree=degree))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(42)
