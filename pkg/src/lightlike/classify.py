"""Decomposition of the structure vector field against a null frame.

``zeta = W' + f1 phi_bar N + f2 phi_bar xi + a xi + b N`` with ``W'`` in D'.
The coefficients come from plain linear solves; the hand identities that
relate them (unit norm, the two ``f`` relations, the ``(2ab-1) f`` relations)
are evaluated afterwards as independent cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import DimensionTooSmall, FrameInvalid, Inconsistent, LightlikeError
from .hypersurface import Hypersurface, NullFrame, ScreenPolicy, build_null_frame
from .linalg import DEFAULT_TOL, euclid_rank, gram_det2, inner
from .structure import AmbientStructure

__all__ = [
    "ZetaDecomposition",
    "Classification",
    "decompose_zeta",
    "classify",
    "verify_calin",
    "check_independence",
    "ASCREEN",
    "INASCREEN",
]

ASCREEN = "ascreen"
INASCREEN = "inascreen"


@dataclass
class ZetaDecomposition:
    a: float
    b: float
    f1: float
    f2: float
    W: np.ndarray
    Wprime: np.ndarray
    gram_det: float
    residual: float
    lam: Optional[float] = None
    identities: dict = field(default_factory=dict)

    @property
    def two_ab_minus_one(self) -> float:
        return 2.0 * self.a * self.b - 1.0


@dataclass
class Classification:
    label: str
    tangential: bool
    proper: bool
    diagnostics: dict = field(default_factory=dict)


def decompose_zeta(S: AmbientStructure, frame: NullFrame,
                   tol: float = DEFAULT_TOL) -> ZetaDecomposition:
    if not frame.check(S, tol):
        raise FrameInvalid(f"frame constraints violated: {frame.invariant_residuals(S)}")
    g = S.metric
    zeta = S.zeta
    xi, N, pxi, pN = frame.xi, frame.N, frame.phi_xi, frame.phi_N
    a = float(inner(g, N, zeta))
    b = float(inner(g, xi, zeta))
    W = zeta - a * xi - b * N
    det = gram_det2(g, pxi, pN)
    lam = None
    if abs(2.0 * a * b - 1.0) > tol:
        gram = np.array([[inner(g, pN, pN), inner(g, pN, pxi)],
                         [inner(g, pxi, pN), inner(g, pxi, pxi)]])
        rhs = np.array([inner(g, W, pN), inner(g, W, pxi)])
        f1, f2 = np.linalg.solve(gram, rhs)
        f1, f2 = float(f1), float(f2)
        Wp = W - f1 * pN - f2 * pxi
    else:
        # span{phi xi, phi N} collapses to a line; W is already g-orthogonal to it.
        f1 = f2 = 0.0
        Wp = W.copy()
        lam = float(pxi @ pN / (pN @ pN))
    residual = float(np.linalg.norm(zeta - Wp - f1 * pN - f2 * pxi - a * xi - b * N))

    one_m_ab = 1.0 - a * b
    identities = {
        "unit": abs(float(inner(g, W, W)) + 2.0 * a * b - 1.0),
        "mu2_xi": abs(b * b * f2 - f1 * one_m_ab),
        "mu2_N": abs(a * a * f1 - f2 * one_m_ab),
        "c4_f1": abs((2.0 * a * b - 1.0) * f1),
        "c4_f2": abs((2.0 * a * b - 1.0) * f2),
        "gram_det": abs(det - (2.0 * a * b - 1.0)),
        "phi_xi_norm": abs(float(inner(g, pxi, pxi)) + b * b),
        "phi_N_norm": abs(float(inner(g, pN, pN)) + a * a),
        "phi_xi_phi_N": abs(float(inner(g, pxi, pN)) - one_m_ab),
    }
    nw = float(np.linalg.norm(Wp))
    scale = nw if nw > tol else 1.0
    identities["wprime_orthogonal"] = max(
        abs(float(inner(g, Wp, v))) / (scale * np.linalg.norm(v)) for v in (pxi, pN, xi, N))
    if lam is not None:
        identities["lambda_fit"] = float(np.linalg.norm(pxi - lam * pN))
    return ZetaDecomposition(a, b, f1, f2, W, Wp, det, residual, lam, identities)


def classify(dec: ZetaDecomposition, tol: float = DEFAULT_TOL) -> Classification:
    """Ascreen when ``2ab = 1`` and ``W' = 0``; inascreen when ``W' != 0``."""
    wnorm = float(np.linalg.norm(dec.Wprime))
    degenerate = abs(dec.two_ab_minus_one) <= tol
    diagnostics = {"two_ab_minus_one": dec.two_ab_minus_one, "wprime_norm": wnorm,
                   "residual": dec.residual}
    if wnorm > tol:
        return Classification(INASCREEN, abs(dec.a) <= tol and abs(dec.b) <= tol,
                              abs(dec.b) > tol, diagnostics)
    if degenerate:
        return Classification(ASCREEN, False, False, diagnostics)
    raise Inconsistent(f"W' = 0 but 2ab - 1 = {dec.two_ab_minus_one:.3e}: "
                       f"g(W,W) + 2ab = 1 cannot hold, the frame is broken")


def verify_calin(S: AmbientStructure, H: Hypersurface, points: Iterable,
                 tol: float = DEFAULT_TOL) -> dict:
    """Check that ``b = 0`` forces ``a = 0`` under the basis-scan policy."""
    checked = 0
    violations = []
    failures = []
    for i, p in enumerate(points):
        try:
            frame = build_null_frame(S, H, p, ScreenPolicy(), tol)
        except LightlikeError as exc:
            failures.append({"index": i, "error": f"{type(exc).__name__}: {exc}"})
            continue
        if abs(frame.b) <= tol:
            checked += 1
            if abs(frame.a) > tol:
                violations.append({"index": i, "a": frame.a, "b": frame.b})
    return {"tangential_points": checked, "violations": violations, "failures": failures,
            "passed": not violations}


def check_independence(S: AmbientStructure, frame: NullFrame, dec: ZetaDecomposition,
                       tol: float = DEFAULT_TOL) -> dict:
    """Independence certificates for a proper inascreen frame.

    Returns ``{"skipped": True}`` when the frame is not proper inascreen.
    """
    cls = classify(dec, tol)
    if not (cls.label == INASCREEN and cls.proper):
        return {"skipped": True, "reason": f"{cls.label}, proper={cls.proper}"}
    if S.dim < 5:
        raise DimensionTooSmall(f"proper inascreen frame in a {S.dim}-dim model")
    det = gram_det2(S.metric, frame.phi_xi, frame.phi_N)
    cols = np.vstack([frame.tangent_basis, S.zeta[None, :]])
    rank = euclid_rank(cols, tol)
    return {
        "skipped": False,
        "gram_det": det,
        "phi_independent": abs(det) > tol,
        "zeta_rank": rank,
        "zeta_transverse": rank == cols.shape[0],
        "dim_ok": S.dim >= 5,
        "passed": abs(det) > tol and rank == cols.shape[0] and S.dim >= 5,
    }
