"""Second fundamental data by finite differences of frame fields.

In the flat model the ambient connection is the coordinate derivative, so
``nabla_X Y`` at ``p`` is a central difference of the frame field along a
tangent direction. Probe points are pulled back onto the hypersurface by one
Newton step so every probe frame is a genuine null frame.

All tensors use the tangent basis ``T = (xi, s_1, ..., s_{2n-1})`` of the
base frame; ``tau`` is relative to the gradient-normalized ``xi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvaluationFailure, LightlikeError, PivotInstability
from .hypersurface import Hypersurface, NullFrame, ScreenPolicy, build_null_frame
from .linalg import DEFAULT_TOL, inner
from .structure import AmbientStructure

__all__ = [
    "FrameField",
    "SecondFundamentalData",
    "retract",
    "ambient_derivative",
    "second_fundamental",
    "verify_gw_identities",
    "gw_convergence",
]

DEFAULT_STEP = 1e-5


def retract(H: Hypersurface, q) -> np.ndarray:
    """One Newton step ``q - (F(q) - c) grad F / |grad F|^2``."""
    q = np.asarray(q, dtype=float)
    grad = H.gradient(q)
    return q - H.residual(q) * grad / float(grad @ grad)


class FrameField:
    """Frames near a base point, certified to use the base point's pivots."""

    def __init__(self, S: AmbientStructure, H: Hypersurface, p, policy: ScreenPolicy = None,
                 tol: float = DEFAULT_TOL):
        self.S = S
        self.H = H
        self.policy = policy or ScreenPolicy()
        self.tol = tol
        self.base = build_null_frame(S, H, p, self.policy, tol)
        self.pivots = self.base.pivots

    def __call__(self, q) -> NullFrame:
        frame = build_null_frame(self.S, self.H, q, self.policy, self.tol)
        if frame.pivots != self.pivots:
            raise PivotInstability(f"pivots changed from {self.pivots} to {frame.pivots} "
                                   f"at {np.asarray(q).tolist()}")
        return frame

    def probes(self, X, h):
        p = self.base.point
        X = np.asarray(X, dtype=float)
        try:
            return (self(retract(self.H, p + h * X)), self(retract(self.H, p - h * X)))
        except PivotInstability:
            raise
        except LightlikeError as exc:
            raise EvaluationFailure(f"frame construction failed at a probe point: {exc}") from exc


def ambient_derivative(field, p, X, h: float = DEFAULT_STEP, retraction=None):
    """Central difference ``(field(p + hX) - field(p - hX)) / 2h``.

    ``retraction`` (optional) maps each probe point back onto the surface.
    """
    p = np.asarray(p, dtype=float)
    X = np.asarray(X, dtype=float)
    qp, qm = p + h * X, p - h * X
    if retraction is not None:
        qp, qm = retraction(qp), retraction(qm)
    try:
        fp, fm = np.asarray(field(qp), dtype=float), np.asarray(field(qm), dtype=float)
    except LightlikeError as exc:
        raise EvaluationFailure(f"field evaluation failed: {exc}") from exc
    return (fp - fm) / (2.0 * h)


@dataclass
class SecondFundamentalData:
    """Gauss-Weingarten data at one point, indexed by the tangent basis.

    ``A_N`` and ``A_star_xi`` hold tangent coordinates column by column;
    the ``*_ambient`` arrays keep the same images as ambient row vectors.
    """

    B: np.ndarray
    C: np.ndarray
    A_N: np.ndarray
    A_star_xi: np.ndarray
    tau: np.ndarray
    theta: np.ndarray
    A_N_ambient: np.ndarray
    A_star_ambient: np.ndarray
    # dT[i, j] = nabla-bar along T_i of the field T_j (ambient vector)
    dT: np.ndarray
    # dgram[i, j, k] = T_i(g(T_j, T_k)) by central difference
    dgram: np.ndarray
    frame: NullFrame
    metric_diag: np.ndarray
    h: float

    def to_dict(self) -> dict:
        return {"B": self.B.tolist(), "C": self.C.tolist(), "tau": self.tau.tolist(),
                "A_N": self.A_N.tolist(), "A_star_xi": self.A_star_xi.tolist(),
                "theta": self.theta.tolist(), "h": self.h}


def second_fundamental(S: AmbientStructure, H: Hypersurface, p, policy: ScreenPolicy = None,
                       h: float = DEFAULT_STEP, tol: float = DEFAULT_TOL) -> SecondFundamentalData:
    field = FrameField(S, H, p, policy, tol)
    base = field.base
    g = S.metric
    T = base.tangent_basis
    k, m = T.shape
    xi, N = base.xi, base.N

    dT = np.empty((k, k, m))
    dxi = np.empty((k, m))
    dN = np.empty((k, m))
    dgram = np.empty((k, k, k))
    for i in range(k):
        fp, fm = field.probes(T[i], h)
        Tp, Tm = fp.tangent_basis, fm.tangent_basis
        dT[i] = (Tp - Tm) / (2.0 * h)
        dxi[i] = (fp.xi - fm.xi) / (2.0 * h)
        dN[i] = (fp.N - fm.N) / (2.0 * h)
        dgram[i] = ((Tp * g.diag) @ Tp.T - (Tm * g.diag) @ Tm.T) / (2.0 * h)

    B = inner(g, dT, xi)
    tau = inner(g, dN, xi)
    A_N_amb = -(dN - tau[:, None] * N)
    A_star_amb = -dxi - tau[:, None] * xi
    C = inner(g, dT[:, 1:, :], N)
    theta = inner(g, T, N)

    A_N, *_ = np.linalg.lstsq(T.T, A_N_amb.T, rcond=None)
    A_star, *_ = np.linalg.lstsq(T.T, A_star_amb.T, rcond=None)
    return SecondFundamentalData(B, C, A_N, A_star, tau, theta, A_N_amb, A_star_amb, dT,
                                 dgram, base, g.diag.copy(), h)


def verify_gw_identities(data: SecondFundamentalData, tol: float = 1e-5) -> dict:
    """Residuals of the structural identities; report only.

    Each residual is divided by ``max(1, |u| |v|)`` for the Euclidean norms of
    the vectors paired to form it, so large frames near ``b = 0`` are judged
    at floating-point scale. Unscaled maxima are under ``"absolute"``.
    """
    d = data.metric_diag
    T = data.frame.tangent_basis
    S_ = T[1:]
    xi, N = data.frame.xi, data.frame.N
    nrm = np.linalg.norm

    def g(u, v):
        return np.sum(d * u * v, axis=-1)

    B, theta = data.B, data.theta
    nT = nrm(T, axis=1)
    ndT = nrm(data.dT, axis=2)
    b_scale = np.maximum(1.0, ndT * nrm(xi))
    sym = np.abs(B - B.T)
    bxi = np.abs(B[:, 0])
    shape_b = np.abs(g(data.A_star_ambient[:, None, :], T[None, :, :]) - B)
    shape_b_scale = np.maximum(np.outer(nrm(data.A_star_ambient, axis=1), nT), b_scale)
    shape_c = np.abs(g(data.A_N_ambient[:, None, :], S_[None, :, :]) - data.C)
    shape_c_scale = np.maximum(1.0, np.maximum(np.outer(nrm(data.A_N_ambient, axis=1), nT[1:]),
                                               ndT[:, 1:] * nrm(N)))
    # (nabla_X g)(Y, Z) with nabla_X Y = nabla-bar_X Y - B(X, Y) N
    nab = data.dT - B[:, :, None] * N
    gnY = g(nab[:, :, None, :], T[None, None, :, :])    # g(nabla_i T_j, T_l)
    expected = B[:, :, None] * theta[None, None, :] + B[:, None, :] * theta[None, :, None]
    nabla_g = np.abs(data.dgram - gnY - np.swapaxes(gnY, 1, 2) - expected)
    nn = nrm(nab, axis=2)[:, :, None] * nT[None, None, :]
    nabla_scale = np.maximum(1.0, np.maximum(nn, np.swapaxes(nn, 1, 2)))

    absolute = {"symmetry": sym.max(), "B_xi": bxi.max(), "shape_B": shape_b.max(),
                "shape_C": shape_c.max(), "nabla_g": nabla_g.max()}
    res = {
        "symmetry": (sym / np.maximum(b_scale, b_scale.T)).max(),
        "B_xi": (bxi / b_scale[:, 0]).max(),
        "shape_B": (shape_b / shape_b_scale).max(),
        "shape_C": (shape_c / shape_c_scale).max(),
        "nabla_g": (nabla_g / nabla_scale).max(),
    }
    res = {k: float(v) for k, v in res.items()}
    res["passed"] = all(v <= tol for v in res.values())
    res["absolute"] = {k: float(v) for k, v in absolute.items()}
    return res


def gw_convergence(S: AmbientStructure, H: Hypersurface, p, policy: ScreenPolicy = None,
                   steps=(1e-4, 5e-5, 2.5e-5), tol: float = DEFAULT_TOL,
                   floor: float = 1e-10) -> dict:
    """Residuals at successive step sizes and the observed order per halving.

    Orders are only meaningful above ``floor``, where rounding noise does not
    dominate; residuals already below it count as converged.
    """
    table = {}
    for h in steps:
        r = verify_gw_identities(second_fundamental(S, H, p, policy, h, tol))
        r.pop("passed")
        r.pop("absolute")
        table[h] = r
    names = list(table[steps[0]])
    orders = {}
    ok = True
    for name in names:
        seq = [table[h][name] for h in steps]
        ords = []
        for r0, r1, h0, h1 in zip(seq, seq[1:], steps, steps[1:]):
            if r0 <= floor or r1 <= floor:
                ords.append(None)
            else:
                ords.append(float(np.log(r0 / r1) / np.log(h0 / h1)))
        orders[name] = ords
        ok &= all(o is None or o >= 1.5 for o in ords)
    return {"steps": list(steps), "residuals": {str(h): table[h] for h in steps},
            "orders": orders, "second_order": ok}
