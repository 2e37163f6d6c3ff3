"""Gauss nodes, Christoffel numbers and barycentric weights for the shifted
Gegenbauer family.

Nodes on [0, length] are the images of the Gauss points of the weight
(1 - z^2)^(alpha - 1/2) on [-1, 1] under z -> (z + 1) length / 2.  The
Christoffel numbers are kept in the unshifted convention: they are the
[-1, 1] Gauss weights, reused unchanged for the shifted nodes.  Every
interval-length factor lives explicitly in the barycentric-weight formula
and in the integration operators, never inside the stored weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln

from .polycore import BasisSpec, gegenbauer_with_derivative

__all__ = [
    "QuadratureRule",
    "RootSolveError",
    "sgg_rule",
    "barycentric_weights",
    "shifted_weight_moment",
]


class RootSolveError(RuntimeError):
    """Raised when a Gauss node fails to converge under Newton polishing."""

    def __init__(self, node_index: int, residual: float):
        self.node_index = node_index
        self.residual = residual
        super().__init__(
            f"node {node_index} failed to converge (Newton step {residual:.3e})"
        )


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule of spec.degree + 1 points for one (alpha, length, degree).

    nodes: ascending, strictly inside (0, length).
    christoffel: positive [-1, 1] Gauss weights (shift invariant convention).
    bary_weights: explicit barycentric weights for the node set.
    """

    spec: BasisSpec
    nodes: np.ndarray
    christoffel: np.ndarray
    bary_weights: np.ndarray

    @property
    def standard_nodes(self) -> np.ndarray:
        """The node set pulled back to [-1, 1]."""
        return 2.0 * self.nodes / self.spec.length - 1.0


def _recurrence_offdiag(alpha: float, count: int) -> np.ndarray:
    """Off-diagonal entries of the symmetric Jacobi matrix for the weight
    (1 - z^2)^(alpha - 1/2): sqrt of the monic three-term coefficients."""
    if count == 0:
        return np.zeros(0)
    k = np.arange(1, count + 1, dtype=float)
    beta = np.empty(count)
    beta[0] = 1.0 / (2.0 * (1.0 + alpha))
    if count > 1:
        kk = k[1:]
        beta[1:] = kk * (kk + 2.0 * alpha - 1.0) / (4.0 * (kk + alpha) * (kk + alpha - 1.0))
    return np.sqrt(beta)


def shifted_weight_moment(alpha: float, length: float, k: int) -> float:
    """Closed-form moment of x^k against the shifted family weight on [0, length].

    Normalized so that k = 0 gives the total mass carried by the Christoffel
    numbers: 4^alpha B(alpha + 1/2, alpha + 1/2) length^k B(k + a + 1/2, a + 1/2)
    / B(a + 1/2, a + 1/2), evaluated in the log domain.
    """
    a = alpha + 0.5
    return float(np.exp(2.0 * alpha * np.log(2.0) + k * np.log(length) + betaln(k + a, a)))


def sgg_rule(spec: BasisSpec) -> QuadratureRule:
    """Gauss rule on [0, spec.length]: nodes are the roots of the shifted
    degree-(spec.degree + 1) family member.

    Eigenvalues of the symmetric Jacobi matrix seed the roots; two Newton
    corrections polish them to round-off.
    """
    n = spec.degree
    npts = n + 1
    mass = shifted_weight_moment(spec.alpha, spec.length, 0)
    if npts == 1:
        z = np.zeros(1)
        w = np.array([mass])
    else:
        z, vecs = eigh_tridiagonal(np.zeros(npts), _recurrence_offdiag(spec.alpha, n))
        w = mass * vecs[0, :] ** 2
    # Newton polish on the unshifted interval, then enforce exact symmetry.
    for _ in range(2):
        val, der = gegenbauer_with_derivative(spec.alpha, npts, z)
        step = np.where(der != 0.0, val / np.where(der != 0.0, der, 1.0), 0.0)
        z = z - step
    val, der = gegenbauer_with_derivative(spec.alpha, npts, z)
    final_step = np.abs(np.where(der != 0.0, val / np.where(der != 0.0, der, 1.0), val))
    worst = int(np.argmax(final_step))
    if final_step[worst] > 1e-12:
        raise RootSolveError(worst, float(final_step[worst]))
    z = 0.5 * (z - z[::-1])
    w = 0.5 * (w + w[::-1])
    x = (z + 1.0) * (0.5 * spec.length)
    if np.any(np.diff(x) <= 0.0) or x[0] <= 0.0 or x[-1] >= spec.length:
        raise RootSolveError(0, float("nan"))
    rule = QuadratureRule(spec, x, w, np.zeros(npts))
    xi = barycentric_weights(rule)
    return QuadratureRule(spec, x, w, xi)


def barycentric_weights(rule: QuadratureRule) -> np.ndarray:
    """Explicit barycentric weights for the rule's node set:

        xi_i = 2 (-1)^i sqrt(4^alpha length^(-2(1+alpha)) (length - x_i) x_i w_i)

    with w_i the stored (unshifted) Christoffel numbers.  Any common scaling
    of the weights leaves barycentric interpolation unchanged; this fixes one
    concrete normalization with xi_0 > 0.
    """
    spec = rule.spec
    x, w = rule.nodes, rule.christoffel
    radicand = (
        4.0**spec.alpha
        * spec.length ** (-2.0 * (1.0 + spec.alpha))
        * (spec.length - x)
        * x
        * w
    )
    if np.any(radicand < 0.0):
        raise ValueError("negative radicand in barycentric weight formula")
    signs = np.where(np.arange(x.size) % 2 == 0, 1.0, -1.0)
    return 2.0 * signs * np.sqrt(radicand)
