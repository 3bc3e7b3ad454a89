"""Graded-lexicographic multi-index bases for the full polynomial space.

Everything downstream (Vandermonde matrices, Gram systems, Chebyshev
classes) is expressed in the monomial basis enumerated here, so the order
is fixed once and for all: ascending total degree, lexicographic within
each degree block with the first coordinate weighted heaviest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidInputError


def _homogeneous_indices(degree: int, d: int) -> list[tuple[int, ...]]:
    """All multi-indices in N^d with |alpha| = degree, lex order.

    First coordinate descends fastest, matching e.g. (2,0), (1,1), (0,2).
    """
    if d == 1:
        return [(degree,)]
    out = []
    for a0 in range(degree, -1, -1):
        for tail in _homogeneous_indices(degree - a0, d - 1):
            out.append((a0,) + tail)
    return out


@dataclass(frozen=True)
class MultiIndexBasis:
    """Ordered monomial basis of polynomials of degree <= n in d variables."""

    dimension: int
    degree: int
    indices: tuple[tuple[int, ...], ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def size(self) -> int:
        """N = m_n, the number of basis monomials."""
        return len(self.indices)

    def degrees(self) -> list[int]:
        return [sum(a) for a in self.indices]

    def block(self, k: int) -> list[tuple[int, ...]]:
        """The multi-indices of total degree exactly k."""
        return [a for a in self.indices if sum(a) == k]


def enumerate_basis(n: int, d: int) -> MultiIndexBasis:
    """Enumerate the graded-lex monomial basis of P_n in d variables.

    Deterministic; degrees are nondecreasing along the list.
    """
    if d < 1:
        raise InvalidInputError(f"dimension must be >= 1, got {d}")
    if n < 0:
        raise InvalidInputError(f"degree must be >= 0, got {n}")
    indices: list[tuple[int, ...]] = []
    for k in range(n + 1):
        indices.extend(_homogeneous_indices(k, d))
    return MultiIndexBasis(dimension=d, degree=n, indices=tuple(indices))


def dimension_counts(n: int, d: int) -> tuple[int, int, int, int]:
    """Return (m_n, h_n, l_n, r_n) for degree n in d variables.

    m_n = C(n+d, n) counts monomials of degree <= n, h_n those of degree
    exactly n, l_n the sum of degrees over all m_n monomials, and
    r_n = n * h_n the degree sum over the top block.  Exact integers.
    """
    if d < 1:
        raise InvalidInputError(f"dimension must be >= 1, got {d}")
    if n < 0:
        raise InvalidInputError(f"degree must be >= 0, got {n}")
    m_n = math.comb(n + d, n)
    h_n = 1 if n == 0 else m_n - math.comb(n - 1 + d, n - 1)
    l_n = d * math.comb(d + n, d + 1)
    r_n = n * h_n
    return m_n, h_n, l_n, r_n
