"""Weighted Gram systems, Bergman functions, and free energy.

The Gram matrix of a discrete measure in the monomial basis is the
information matrix of D-optimal design; everything here routes through its
Cholesky factor (triangular solves only, never an explicit inverse).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .basis import enumerate_basis
from .domains import AdmissibleWeight, CandidateSet
from .errors import DegenerateMeasureError, InvalidInputError
from .vdm import monomial_values

MASS_TOL = 1e-12

# Monomial Grams go numerically rank-deficient beyond these degrees.
DEGREE_CAPS = {1: 30, 2: 12, 3: 8}


def check_degree_cap(n: int, d: int, override: bool = False) -> None:
    cap = DEGREE_CAPS.get(d, 8)
    if n > cap and not override:
        raise InvalidInputError(
            f"degree {n} exceeds the default cap {cap} for dimension {d};"
            " pass override to proceed"
        )


@dataclass(frozen=True)
class DiscreteMeasure:
    """Probability measure riding on a CandidateSet."""

    candidates: CandidateSet
    masses: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.masses, dtype=float)
        if w.shape != (len(self.candidates),):
            raise InvalidInputError("one mass per candidate point required")
        if np.any(w < 0):
            raise InvalidInputError("masses must be nonnegative")
        if abs(w.sum() - 1.0) > MASS_TOL:
            raise InvalidInputError(f"masses must sum to 1, got {w.sum()!r}")
        object.__setattr__(self, "masses", w)

    @staticmethod
    def uniform(candidates: CandidateSet) -> "DiscreteMeasure":
        m = len(candidates)
        return DiscreteMeasure(candidates, np.full(m, 1.0 / m))

    @staticmethod
    def from_reference(candidates: CandidateSet) -> "DiscreteMeasure":
        if candidates.masses is None:
            raise InvalidInputError("candidate set carries no quadrature masses")
        return DiscreteMeasure(candidates, candidates.masses.copy())

    def support(self) -> np.ndarray:
        return np.nonzero(self.masses > 0)[0]


@dataclass(frozen=True)
class GramSystem:
    """Degree-n Gram matrix for (mu, Q) with its Cholesky factor."""

    degree: int
    dimension: int
    weight: AdmissibleWeight
    matrix: np.ndarray = field(repr=False)
    chol: np.ndarray = field(repr=False)
    log_det: float
    basis_indices: tuple = field(repr=False)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def gram_matrix(
    mu: DiscreteMeasure,
    weight: AdmissibleWeight,
    n: int,
    override_degree_cap: bool = False,
) -> GramSystem:
    """G_ij = sum_k mass_k e_i(z_k) conj(e_j(z_k)) exp(-2 n Q(z_k))."""
    cand = mu.candidates
    d = cand.dimension
    check_degree_cap(n, d, override_degree_cap)
    basis = enumerate_basis(n, d)
    q = weight(cand.points)
    w2n = np.where(np.isfinite(q), np.exp(-2.0 * n * q), 0.0)
    scale = mu.masses * w2n
    active = scale > 0
    emat = monomial_values(basis.indices, cand.points[active])
    g = (emat * scale[active]) @ emat.conj().T
    g = 0.5 * (g + g.conj().T)
    try:
        chol = scipy.linalg.cholesky(g, lower=True)
    except scipy.linalg.LinAlgError:
        eigs = scipy.linalg.eigvalsh(g)
        rank = int(np.sum(eigs > max(eigs.max(), 0.0) * len(eigs) * 1e-15))
        raise DegenerateMeasureError(
            f"measure is degenerate for degree {n}: numerical rank {rank} < {len(g)}",
            rank=rank,
        )
    log_det = 2.0 * float(np.sum(np.log(np.real(np.diag(chol)))))
    return GramSystem(
        degree=n,
        dimension=d,
        weight=weight,
        matrix=g,
        chol=chol,
        log_det=log_det,
        basis_indices=basis.indices,
    )


def bergman_function(sys: GramSystem, eval_points: np.ndarray) -> np.ndarray:
    """B(z) = exp(-2nQ(z)) P(z)* G^{-1} P(z) at each evaluation point."""
    pts = np.asarray(eval_points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[:, None]
    p = monomial_values(sys.basis_indices, pts)
    y = scipy.linalg.solve_triangular(sys.chol, p, lower=True)
    b = np.sum(np.abs(y) ** 2, axis=0)
    q = sys.weight(pts)
    return np.where(np.isfinite(q), b * np.exp(-2.0 * sys.degree * q), 0.0)


def bm_constant(sys: GramSystem, cand: CandidateSet) -> tuple[float, np.ndarray]:
    """Best sup-over-L2 constant M_n = max_K sqrt(B), with the argmax point."""
    b = bergman_function(sys, cand.points)
    k = int(np.argmax(b))
    return float(np.sqrt(b[k])), cand.points[k]


def normalized_log_det(sys: GramSystem) -> float:
    """(d+1)/(2 d n N) * log det G; estimates log of the transfinite diameter."""
    if sys.degree < 1:
        raise InvalidInputError("normalized log-det needs degree >= 1")
    d, n, n_dim = sys.dimension, sys.degree, sys.size
    return (d + 1) / (2.0 * d * n * n_dim) * sys.log_det


def free_energy(
    mu: DiscreteMeasure,
    weight: AdmissibleWeight,
    n: int,
    override_degree_cap: bool = False,
) -> float:
    """log Z_n = log N! + log det G (standard-monomial Gram)."""
    sys = gram_matrix(mu, weight, n, override_degree_cap)
    return math.lgamma(sys.size + 1) + sys.log_det


def export_gram_csv(sys: GramSystem, path) -> None:
    """Row-major dump with re/im interleaved, for debugging."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in sys.matrix:
            out = []
            for z in row:
                out += [repr(float(z.real)), repr(float(z.imag))]
            writer.writerow(out)
