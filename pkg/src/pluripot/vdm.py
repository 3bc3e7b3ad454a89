"""Log-domain Vandermonde determinants (plain, weighted, homogeneous).

Raw determinants of monomial Vandermonde matrices overflow binary64 by
degree ~10, so every determinant here is the sum of log-magnitudes of the
R diagonal from a column-pivoted QR factorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .basis import MultiIndexBasis, dimension_counts, enumerate_basis
from .domains import AdmissibleWeight
from .errors import InvalidInputError

# R-diagonal entries below max|diag| * this factor mean numerical rank loss.
_RANK_TOL = 1e-13
# Diagonal-decay ratio beyond which the value is flagged as ill-conditioned.
_CONDITION_FLAG = 1e6


@dataclass(frozen=True)
class LogDet:
    """log |det| of a Vandermonde-type matrix; -inf encoded via is_zero."""

    log_abs: float
    is_zero: bool
    condition: float

    @property
    def value(self) -> float:
        return -math.inf if self.is_zero else self.log_abs

    @property
    def flagged(self) -> bool:
        return self.condition > _CONDITION_FLAG


def monomial_values(indices, points: np.ndarray) -> np.ndarray:
    """Matrix [e_i(z_j)] of monomials (rows) at points (columns)."""
    points = np.asarray(points, dtype=complex)
    if points.ndim == 1:
        points = points[:, None]
    rows = [np.prod(points ** np.asarray(alpha), axis=1) for alpha in indices]
    return np.array(rows)


def _logdet_qr(mat: np.ndarray) -> LogDet:
    if mat.shape[0] != mat.shape[1]:
        raise InvalidInputError("square matrix required")
    if mat.shape[0] == 0:
        return LogDet(0.0, False, 1.0)
    _, r, _ = scipy.linalg.qr(mat, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    dmax = diag.max(initial=0.0)
    if dmax == 0.0 or np.any(diag <= _RANK_TOL * dmax):
        return LogDet(-math.inf, True, math.inf)
    cond = dmax / diag.min()
    return LogDet(float(np.sum(np.log(diag))), False, float(cond))


def log_abs_vdm(points: np.ndarray, n: int) -> LogDet:
    """log |VDM| for N = m_n points in C^d at degree n."""
    points = np.asarray(points, dtype=complex)
    if points.ndim == 1:
        points = points[:, None]
    d = points.shape[1]
    m_n = dimension_counts(n, d)[0]
    if points.shape[0] != m_n:
        raise InvalidInputError(
            f"degree {n} in dimension {d} needs {m_n} points, got {points.shape[0]}"
        )
    basis = enumerate_basis(n, d)
    return _logdet_qr(monomial_values(basis.indices, points))


def log_abs_weighted_vdm(
    points: np.ndarray, n: int, weight: AdmissibleWeight
) -> LogDet:
    """log |W| = log |VDM| - n * sum_i Q(z_i)."""
    points = np.asarray(points, dtype=complex)
    if points.ndim == 1:
        points = points[:, None]
    q = weight(points)
    if not np.all(np.isfinite(q)):
        return LogDet(-math.inf, True, math.inf)
    unweighted = log_abs_vdm(points, n)
    if unweighted.is_zero:
        return unweighted
    return LogDet(
        unweighted.log_abs - n * float(q.sum()), False, unweighted.condition
    )


def diameter_exponent(n: int, d: int) -> float:
    """(d+1)/(d*n*N), the root that normalizes log |W| to a length scale."""
    m_n = dimension_counts(n, d)[0]
    return (d + 1) / (d * n * m_n)


def nth_order_diameter(
    points: np.ndarray, n: int, weight: AdmissibleWeight
) -> float:
    """Sample value of the n-th order diameter at one configuration."""
    if n < 1:
        raise InvalidInputError("degree must be >= 1")
    points = np.asarray(points, dtype=complex)
    if points.ndim == 1:
        points = points[:, None]
    logw = log_abs_weighted_vdm(points, n, weight)
    if logw.is_zero:
        return 0.0
    return math.exp(diameter_exponent(n, points.shape[1]) * logw.log_abs)


def homogeneous_basis(n: int, d: int) -> MultiIndexBasis:
    """The degree-n block of the graded-lex basis (h_n monomials)."""
    full = enumerate_basis(n, d)
    block = tuple(a for a in full.indices if sum(a) == n)
    return MultiIndexBasis(dimension=d, degree=n, indices=block)


def log_abs_homogeneous_vdm(points: np.ndarray, n: int) -> LogDet:
    """log |det| over the degree-n monomials at h_n points in C^d."""
    points = np.asarray(points, dtype=complex)
    if points.ndim == 1:
        points = points[:, None]
    d = points.shape[1]
    h_n = dimension_counts(n, d)[1]
    if points.shape[0] != h_n:
        raise InvalidInputError(
            f"homogeneous degree {n} in dimension {d} needs {h_n} points,"
            f" got {points.shape[0]}"
        )
    basis = homogeneous_basis(n, d)
    return _logdet_qr(monomial_values(basis.indices, points))
