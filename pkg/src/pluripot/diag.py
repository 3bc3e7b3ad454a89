"""Asymptotics diagnostics: perturbation paths, concavity, weak-* distances.

The perturbation path tilts the weight by exp(-t u) and tracks the
normalized log-det; its analytic derivative is a Bergman average of u, and
concavity of the path is a structural fact checked numerically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .domains import AdmissibleWeight
from .energy import ExtremalModel, equilibrium_cdf
from .errors import InvalidInputError, PluripotError
from .gram import DiscreteMeasure, bergman_function, gram_matrix

DEFAULT_T_GRID = np.linspace(-0.5, 0.5, 11)
FD_STEP = 1e-4


def _tilted_weight(
    base: AdmissibleWeight, u_fn: Callable[[np.ndarray], np.ndarray], t: float
) -> AdmissibleWeight:
    """Weight with Q_t = Q + t*u, i.e. w_t = w exp(-t u)."""
    if t == 0.0:
        return base
    return AdmissibleWeight.custom(
        lambda pts: base(pts) + t * np.asarray(u_fn(pts), dtype=float)
    )


@dataclass
class PathReport:
    degree: int
    t_grid: np.ndarray
    values: np.ndarray
    analytic_derivatives: np.ndarray
    fd_derivatives: np.ndarray
    second_differences: np.ndarray = field(repr=False)

    def max_second_difference(self) -> float:
        if len(self.second_differences) == 0:
            raise InvalidInputError("need >= 3 grid points for second differences")
        return float(np.max(self.second_differences))

    def to_dict(self) -> dict:
        return {
            "n": self.degree,
            "t": self.t_grid.tolist(),
            "f": self.values.tolist(),
            "f_prime_analytic": self.analytic_derivatives.tolist(),
            "f_prime_fd": self.fd_derivatives.tolist(),
            "second_differences": self.second_differences.tolist(),
        }


def f_n_path(
    mu: DiscreteMeasure,
    weight: AdmissibleWeight,
    u_fn: Callable[[np.ndarray], np.ndarray],
    n: int,
    t_grid: np.ndarray | None = None,
    fd_step: float = FD_STEP,
    override_degree_cap: bool = False,
) -> PathReport:
    """Path t -> -(d+1)/(2dnN) log det G(w e^{-tu}) with both derivatives."""
    if t_grid is None:
        t_grid = DEFAULT_T_GRID.copy()
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise InvalidInputError("t grid must be strictly increasing")
    cand = mu.candidates
    d = cand.dimension
    u_vals = np.asarray(u_fn(cand.points), dtype=float)

    def f_at(t: float) -> float:
        try:
            sys = gram_matrix(mu, _tilted_weight(weight, u_fn, t), n,
                              override_degree_cap)
        except PluripotError as exc:
            raise PluripotError(f"degenerate Gram at t = {t}: {exc}") from exc
        n_dim = sys.size
        return -(d + 1) / (2.0 * d * n * n_dim) * sys.log_det

    values = np.array([f_at(t) for t in t_grid])
    analytic = []
    for t in t_grid:
        sys = gram_matrix(mu, _tilted_weight(weight, u_fn, t), n,
                          override_degree_cap)
        b = bergman_function(sys, cand.points)
        analytic.append(
            (d + 1) / (d * sys.size) * float(np.sum(mu.masses * u_vals * b))
        )
    fd = np.array([
        (f_at(t + fd_step) - f_at(t - fd_step)) / (2 * fd_step) for t in t_grid
    ])
    if len(t_grid) >= 3:
        h = t_grid[1] - t_grid[0]
        second = (values[:-2] - 2 * values[1:-1] + values[2:]) / h**2
    else:
        second = np.zeros(0)
    return PathReport(
        degree=n,
        t_grid=t_grid,
        values=values,
        analytic_derivatives=np.array(analytic),
        fd_derivatives=fd,
        second_differences=second,
    )


def concavity_check(report: PathReport) -> float:
    """Max interior second difference; must be <= 1e-8 (nonpositive + noise)."""
    return report.max_second_difference()


def _moment_indices(d: int, max_moment: int):
    ranges = [range(max_moment + 1)] * d
    return [
        alpha for alpha in itertools.product(*ranges) if sum(alpha) <= max_moment
    ]


def _measure_moment(mu: DiscreteMeasure, alpha, beta) -> complex:
    pts = mu.candidates.points
    za = np.prod(pts ** np.asarray(alpha), axis=1)
    zb = np.prod(pts ** np.asarray(beta), axis=1)
    return complex(np.sum(mu.masses * za * np.conj(zb)))


def _model_moment(model: ExtremalModel, alpha, beta) -> complex:
    if alpha != beta:
        return 0.0
    if model.kind == "disk":
        return model.radius ** (2 * sum(alpha))
    if model.kind == "weighted_disk":
        a = sum(alpha)
        return 2.0 ** (-a) / (a + 1)
    if model.kind in ("torus", "polydisk"):
        r = 1.0 if model.kind == "torus" else model.radius
        return r ** (2 * sum(alpha))
    raise InvalidInputError(f"no closed-form moments for {model.kind}")


def weak_star_distance(
    mu_a: DiscreteMeasure,
    ref: "DiscreteMeasure | ExtremalModel",
    max_moment: int = 5,
) -> float:
    """Sup over bounded-degree mixed moments of the moment mismatch."""
    d = mu_a.candidates.dimension
    if isinstance(ref, ExtremalModel) and ref.dimension != d:
        raise InvalidInputError("dimension mismatch")
    if isinstance(ref, DiscreteMeasure) and ref.candidates.dimension != d:
        raise InvalidInputError("dimension mismatch")
    worst = 0.0
    for alpha in _moment_indices(d, max_moment):
        for beta in _moment_indices(d, max_moment):
            ma = _measure_moment(mu_a, alpha, beta)
            if isinstance(ref, DiscreteMeasure):
                mr = _measure_moment(ref, alpha, beta)
            else:
                mr = _model_moment(ref, alpha, beta)
            worst = max(worst, abs(ma - mr))
    return worst


def radial_cdf_distance(mu: DiscreteMeasure, model: ExtremalModel) -> float:
    """Sup distance between the radial CDF of mu and the model's closed form."""
    if mu.candidates.dimension != 1:
        raise InvalidInputError("radial CDF distance is one-dimensional")
    rho = np.abs(mu.candidates.points[:, 0])
    order = np.argsort(rho)
    rho = rho[order]
    cum = np.cumsum(mu.masses[order])
    ref = equilibrium_cdf(model, rho)
    below = np.concatenate([[0.0], cum[:-1]])
    return float(np.max(np.maximum(np.abs(cum - ref), np.abs(below - ref))))


def bergman_measure(
    mu: DiscreteMeasure,
    weight: AdmissibleWeight,
    n: int,
    override_degree_cap: bool = False,
) -> DiscreteMeasure:
    """The probability measure (1/N) B dmu (trace identity gives mass 1)."""
    sys = gram_matrix(mu, weight, n, override_degree_cap)
    b = bergman_function(sys, mu.candidates.points)
    masses = mu.masses * b / sys.size
    total = masses.sum()
    if not math.isclose(total, 1.0, rel_tol=1e-9):
        raise PluripotError(f"trace identity violated: mass {total!r}")
    return DiscreteMeasure(mu.candidates, masses / total)
