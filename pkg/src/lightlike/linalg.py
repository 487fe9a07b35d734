"""Indefinite inner-product algebra on small dense coordinate vectors.

Metrics are diagonal with entries ``(e1, e1, e2, e2, ..., en, en, 1)``.
Vectors are 1-d numpy arrays; most functions also accept stacks of vectors
along the leading axis and act on the last axis.

Rank and independence decisions always use the coordinate (Euclidean)
norm, since null vectors have zero indefinite norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSpan, DimensionMismatch

DEFAULT_TOL = 1e-9

__all__ = [
    "DEFAULT_TOL",
    "MetricTensor",
    "Subspace",
    "inner",
    "raise_index",
    "lower_index",
    "orthocomplement",
    "gram_det2",
    "nullspace",
    "euclid_rank",
]


@dataclass(frozen=True)
class MetricTensor:
    """Flat metric ``diag(signs..., 1)`` on R^(2n+1).

    ``signs`` has length 2n and must come in equal adjacent pairs.
    """

    signs: tuple[int, ...]
    diag: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if len(signs) == 0 or len(signs) % 2:
            raise ValueError(f"need an even, non-zero number of signs, got {len(signs)}")
        if any(s not in (-1, 1) for s in signs):
            raise ValueError(f"signs must be +1 or -1, got {signs}")
        if any(signs[2 * k] != signs[2 * k + 1] for k in range(len(signs) // 2)):
            raise ValueError(f"signs must come in equal adjacent pairs, got {signs}")
        if -1 not in signs:
            raise ValueError("metric is Riemannian: no lightlike hypersurfaces exist")
        object.__setattr__(self, "signs", signs)
        d = np.array(signs + (1,), dtype=float)
        d.setflags(write=False)
        object.__setattr__(self, "diag", d)

    @classmethod
    def from_pairs(cls, pair_signs) -> "MetricTensor":
        return cls(tuple(s for s in pair_signs for _ in range(2)))

    @property
    def dim(self) -> int:
        return len(self.signs) + 1

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diag)


def _check(g: MetricTensor, *vs):
    for v in vs:
        if np.shape(v)[-1] != g.dim:
            raise DimensionMismatch(f"vector of length {np.shape(v)[-1]} in a {g.dim}-dim space")


def inner(g: MetricTensor, u, v):
    """Return ``sum_i e_i u_i v_i`` (broadcasts over leading axes)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _check(g, u, v)
    return np.sum(g.diag * u * v, axis=-1)


def raise_index(g: MetricTensor, covector):
    covector = np.asarray(covector, dtype=float)
    _check(g, covector)
    return covector / g.diag


def lower_index(g: MetricTensor, vector):
    vector = np.asarray(vector, dtype=float)
    _check(g, vector)
    return vector * g.diag


def gram_det2(g: MetricTensor, u, v) -> float:
    """Determinant of the 2x2 Gram matrix of ``u, v``."""
    uu = inner(g, u, u)
    vv = inner(g, v, v)
    uv = inner(g, u, v)
    return float(uu * vv - uv * uv)


def euclid_rank(vectors, tol: float = DEFAULT_TOL) -> int:
    a = np.atleast_2d(np.asarray(vectors, dtype=float))
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def nullspace(a, tol: float = DEFAULT_TOL, pivots=None):
    """Right null space of ``a`` by Gauss-Jordan elimination.

    Complete pivoting on the largest remaining absolute entry unless
    ``pivots`` (a sequence of column indices) forces the pivot columns.
    Returns ``(basis, pivot_columns)`` where ``basis`` has one row per free
    column ``j`` of the form ``e_j - sum_r rref[r, j] e_{pivot_r}``.
    """
    a = np.array(np.atleast_2d(a), dtype=float)
    rows, cols = a.shape
    scale = np.abs(a).max() if a.size else 0.0
    thresh = tol * scale
    piv: list[int] = []
    used_rows: list[int] = []
    if pivots is None:
        for _ in range(min(rows, cols)):
            free_rows = [r for r in range(rows) if r not in used_rows]
            free_cols = [c for c in range(cols) if c not in piv]
            sub = np.abs(a[np.ix_(free_rows, free_cols)])
            if sub.size == 0 or sub.max() <= thresh or scale == 0.0:
                break
            i, j = np.unravel_index(np.argmax(sub), sub.shape)
            r, c = free_rows[i], free_cols[j]
            _eliminate(a, r, c)
            piv.append(c)
            used_rows.append(r)
    else:
        for c in pivots:
            free_rows = [r for r in range(rows) if r not in used_rows]
            col = np.abs(a[free_rows, c])
            i = int(np.argmax(col))
            if col[i] <= thresh or scale == 0.0:
                raise DegenerateSpan(f"forced pivot column {c} has no usable entry")
            r = free_rows[i]
            _eliminate(a, r, c)
            piv.append(c)
            used_rows.append(r)
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((len(free), cols))
    for k, j in enumerate(free):
        basis[k, j] = 1.0
        for r, c in zip(used_rows, piv):
            basis[k, c] = -a[r, j]
    return basis, tuple(sorted(piv))


def _eliminate(a, r, c):
    a[r] /= a[r, c]
    for i in range(a.shape[0]):
        if i != r and a[i, c] != 0.0:
            a[i] -= a[i, c] * a[r]


@dataclass(frozen=True)
class Subspace:
    """A span given by a (k, m) array of basis rows."""

    basis: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.ndim == 1:
            b = b.reshape(0, b.shape[0]) if b.size == 0 else b[None, :]
        if b.shape[0] and euclid_rank(b, self.tol) < b.shape[0]:
            raise ValueError("basis vectors are linearly dependent")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def empty(cls, dim: int) -> "Subspace":
        return cls(np.zeros((0, dim)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1]

    def gram(self, g: MetricTensor) -> np.ndarray:
        return (self.basis * g.diag) @ self.basis.T

    def contains(self, v, tol: float = DEFAULT_TOL) -> bool:
        return self.distance(v) <= tol * max(1.0, float(np.linalg.norm(v)))

    def distance(self, v) -> float:
        """Euclidean distance from ``v`` to the span."""
        v = np.asarray(v, dtype=float)
        if self.dim == 0:
            return float(np.linalg.norm(v))
        coef, *_ = np.linalg.lstsq(self.basis.T, v, rcond=None)
        return float(np.linalg.norm(self.basis.T @ coef - v))


def orthocomplement(g: MetricTensor, span: Subspace, within: Subspace,
                    tol: float = DEFAULT_TOL, direct_sum: bool = False) -> Subspace:
    """Vectors of ``within`` that are g-orthogonal to every vector of ``span``.

    With ``direct_sum=True`` the restriction of ``g`` to ``span`` must be
    non-degenerate, so that ``within = span (+) result``.
    """
    if span.dim == 0:
        return within
    if direct_sum:
        gs = span.gram(g)
        s = np.linalg.svd(gs, compute_uv=False)
        if s[-1] <= tol * max(1.0, s[0]):
            raise DegenerateSpan("metric restricted to the span is singular")
    constraints = (span.basis * g.diag) @ within.basis.T
    coef, _ = nullspace(constraints, tol)
    return Subspace(coef @ within.basis, tol)
