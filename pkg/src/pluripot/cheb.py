"""Directional Chebyshev constants and the homogeneous lift.

The discrete minimax over a candidate grid is solved as a linear program:
the complex modulus is outer-approximated by half-plane facets, and facets
are added at the phases where the current polynomial peaks until the
re-evaluated maximum matches the LP bound.  Reported values are therefore
true achieved maxima of an explicit polynomial (upper bounds on the
continuous optimum over the grid within 1e-9 relative).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .basis import dimension_counts, enumerate_basis
from .domains import AdmissibleWeight, CandidateSet
from .errors import InvalidInputError, PluripotError
from .fekete import search_fekete
from .vdm import (
    diameter_exponent,
    homogeneous_basis,
    log_abs_homogeneous_vdm,
    log_abs_weighted_vdm,
    monomial_values,
)

CLASSES = ("plain", "homogeneous", "weighted")
INITIAL_FACETS = 16
_REFINE_ROUNDS = 60
_REFINE_TOL = 1e-9


@dataclass(frozen=True)
class ChebyshevRecord:
    """Minimal sup-norm over a monic polynomial class, with its witness."""

    alpha: tuple[int, ...]
    class_tag: str
    value: float
    tau: float
    coefficients: np.ndarray = field(repr=False)
    facet_bound: float = 1.0  # sec(pi/facets) outer-approximation factor


def _class_monomials(alpha: tuple[int, ...], d: int, class_tag: str):
    """Monomials that may be recombined with e_alpha, per class rules."""
    deg = sum(alpha)
    full = enumerate_basis(deg, d).indices
    i = full.index(alpha)
    earlier = full[:i]
    if class_tag == "homogeneous":
        earlier = tuple(a for a in earlier if sum(a) == deg)
    return earlier


def _solve_minimax(
    target: np.ndarray, lower: np.ndarray, scale: np.ndarray
) -> tuple[float, np.ndarray, float]:
    """min over c of max_k scale_k |target_k + lower_k . c|.

    Returns (achieved max, c, facet bound used). ``lower`` is (M, J).
    """
    m, j = lower.shape
    keep = scale > 0
    t = target[keep] * scale[keep]
    e = lower[keep] * scale[keep, None]
    if j == 0:
        return float(np.max(np.abs(t))), np.zeros(0, dtype=complex), 1.0

    real_case = (
        np.max(np.abs(t.imag)) == 0.0 and np.max(np.abs(e.imag), initial=0.0) == 0.0
    )
    if real_case:
        phases = [np.zeros(len(t)), np.full(len(t), np.pi)]
    else:
        phases = [np.full(len(t), 2 * np.pi * f / INITIAL_FACETS)
                  for f in range(INITIAL_FACETS)]

    rows_a: list[np.ndarray] = []
    rows_b: list[np.ndarray] = []

    def add_facets(theta: np.ndarray, idx: np.ndarray) -> None:
        rot = np.exp(-1j * theta)[:, None]
        ee = e[idx] * rot
        block = np.concatenate(
            [ee.real, -ee.imag, -np.ones((len(idx), 1))], axis=1
        )
        rows_a.append(block)
        rows_b.append(-(t[idx] * rot[:, 0]).real)

    all_idx = np.arange(len(t))
    for th in phases:
        add_facets(th, all_idx)

    cost = np.zeros(2 * j + 1)
    cost[-1] = 1.0
    bounds = [(None, None)] * (2 * j) + [(0, None)]
    c_best = np.zeros(j, dtype=complex)
    for _ in range(_REFINE_ROUNDS):
        res = linprog(
            cost,
            A_ub=np.concatenate(rows_a),
            b_ub=np.concatenate(rows_b),
            bounds=bounds,
            method="highs",
        )
        if res.status != 0:
            raise PluripotError(f"minimax LP failed: {res.message}")
        x = res.x
        c_best = x[:j] + 1j * x[j : 2 * j]
        s_opt = x[-1]
        vals = t + e @ c_best
        r = np.abs(vals)
        peak = float(r.max())
        if real_case or peak <= s_opt * (1 + _REFINE_TOL) + 1e-300:
            break
        cut = np.nonzero(r > s_opt * (1 + 1e-12))[0]
        if len(cut) == 0:
            break
        add_facets(np.angle(vals[cut]), cut)
    n_facets = INITIAL_FACETS if not real_case else 2
    return peak, c_best, 1.0 / math.cos(math.pi / max(n_facets, 3))


def chebyshev_constant(
    cand: CandidateSet,
    alpha: tuple[int, ...],
    class_tag: str = "plain",
    weight: AdmissibleWeight | None = None,
) -> ChebyshevRecord:
    """Discrete Chebyshev constant Y(alpha) on the candidate grid."""
    if class_tag not in CLASSES:
        raise InvalidInputError(f"unknown class {class_tag!r}")
    alpha = tuple(int(a) for a in alpha)
    d = cand.dimension
    if len(alpha) != d:
        raise InvalidInputError("multi-index length must match the dimension")
    deg = sum(alpha)
    if deg == 0:
        raise InvalidInputError("degree-0 monomial has an empty class")
    if class_tag == "weighted":
        if weight is None:
            raise InvalidInputError("weighted class needs a weight")
        q = weight(cand.points)
        scale = np.where(np.isfinite(q), np.exp(-deg * q), 0.0)
    else:
        scale = np.ones(len(cand))
    lower_idx = _class_monomials(alpha, d, class_tag)
    target = monomial_values([alpha], cand.points)[0]
    lower = monomial_values(lower_idx, cand.points).T if lower_idx else (
        np.zeros((len(cand), 0), dtype=complex)
    )
    value, coeffs, bound = _solve_minimax(target, lower, scale)
    return ChebyshevRecord(
        alpha=alpha,
        class_tag=class_tag,
        value=value,
        tau=value ** (1.0 / deg),
        coefficients=coeffs,
        facet_bound=bound,
    )


def submultiplicativity_audit(
    records: list[ChebyshevRecord], slack: float = 1e-9
) -> list[dict]:
    """Flag pairs with Y(a+b) > Y(a) Y(b) (1 + slack); should be empty."""
    by_alpha: dict[tuple, ChebyshevRecord] = {}
    for rec in records:
        by_alpha[rec.alpha] = rec
    violations = []
    alphas = sorted(by_alpha)
    for a, b in itertools.combinations_with_replacement(alphas, 2):
        ab = tuple(x + y for x, y in zip(a, b))
        if ab not in by_alpha:
            continue
        lhs = by_alpha[ab].value
        rhs = by_alpha[a].value * by_alpha[b].value
        if lhs > rhs * (1 + slack):
            violations.append(
                {"alpha": list(a), "beta": list(b), "lhs": lhs, "rhs": rhs}
            )
    return violations


def tau_geometric_mean(
    cand: CandidateSet,
    weight: AdmissibleWeight | None,
    class_tag: str,
    n: int,
) -> tuple[float, list[ChebyshevRecord]]:
    """Geometric mean of tau(alpha) over the degree-n block."""
    if n < 1:
        raise InvalidInputError("degree must be >= 1")
    block = homogeneous_basis(n, cand.dimension).indices
    records = [chebyshev_constant(cand, a, class_tag, weight) for a in block]
    logs = [math.log(r.tau) for r in records]
    return math.exp(sum(logs) / len(logs)), records


def homogeneous_lift(
    cand: CandidateSet,
    weight: AdmissibleWeight,
    m_t: int,
) -> tuple[CandidateSet, int]:
    """Points (t, t*lambda) with |t| = w(lambda), m_t phases per base point.

    Returns the lifted set in C^{d+1} and the number of dropped (w = 0)
    base points.
    """
    if m_t < 1:
        raise InvalidInputError("phase resolution must be >= 1")
    q = weight(cand.points)
    keep = np.isfinite(q)
    dropped = int((~keep).sum())
    if keep.sum() == 0:
        raise InvalidInputError("weight vanishes on every candidate point")
    w = np.exp(-q[keep])
    lam = cand.points[keep]
    phases = np.exp(2j * np.pi * np.arange(m_t) / m_t)
    t = (w[:, None] * phases[None, :]).ravel()
    base = np.repeat(lam, m_t, axis=0)
    lifted = np.column_stack([t, base * t[:, None]])
    return CandidateSet(cand.dimension + 1, lifted, None, "custom"), dropped


def _exhaustive_max(points: np.ndarray, count: int, logdet_fn) -> float:
    best = -math.inf
    for combo in itertools.combinations(range(points.shape[0]), count):
        ld = logdet_fn(points[list(combo)])
        if not ld.is_zero and ld.log_abs > best:
            best = ld.log_abs
    return best


def lift_identity_check(
    cand: CandidateSet,
    weight: AdmissibleWeight,
    n_max: int,
    m_t: int = 4,
    exhaustive_cap: int = 200_000,
) -> list[dict]:
    """Compare the weighted-VDM max on K against the homogeneous max on the lift.

    At any fixed degree the two maxima agree exactly (phase factors carry
    modulus w^n); the reported gap measures search error only.
    """
    d = cand.dimension
    lift, _ = homogeneous_lift(cand, weight, m_t)
    out = []
    for n in range(1, n_max + 1):
        n_pts = dimension_counts(n, d)[0]
        assert dimension_counts(n, d + 1)[1] == n_pts  # h_n^{(d+1)} = m_n^{(d)}

        if math.comb(len(cand), n_pts) <= exhaustive_cap:
            lhs_log = _exhaustive_max(
                cand.points, n_pts,
                lambda p, n=n: log_abs_weighted_vdm(p, n, weight),
            )
            lhs_method = "exhaustive"
        else:
            cfg = search_fekete(cand, n, weight)
            lhs_log = cfg.log_weighted_vdm
            lhs_method = "search"
        if math.comb(len(lift), n_pts) <= exhaustive_cap:
            rhs_log = _exhaustive_max(
                lift.points, n_pts,
                lambda p, n=n: log_abs_homogeneous_vdm(p, n),
            )
            rhs_method = "exhaustive"
        else:
            rhs_log = _lift_search(lift, cand, weight, n)
            rhs_method = "search"

        expo = diameter_exponent(n, d)
        lhs = math.exp(expo * lhs_log)
        rhs = math.exp(expo * rhs_log)
        out.append(
            {
                "n": n,
                "lhs_log": lhs_log,
                "rhs_log": rhs_log,
                "delta_lhs": lhs,
                "delta_rhs": rhs,
                "relative_gap": abs(lhs - rhs) / max(lhs, rhs),
                "lhs_method": lhs_method,
                "rhs_method": rhs_method,
            }
        )
    return out


def _lift_search(
    lift: CandidateSet,
    cand: CandidateSet,
    weight: AdmissibleWeight,
    n: int,
) -> float:
    """Heuristic max of |VDMH_n| over the lift via the base-set Fekete search.

    A base configuration maximizing |W| lifts to a configuration with the
    same determinant modulus, so reuse the weighted search.
    """
    cfg = search_fekete(cand, n, weight)
    return cfg.log_weighted_vdm
