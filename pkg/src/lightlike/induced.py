"""Induced almost complex structure on proper inascreen hypersurfaces.

When ``b = eta(xi) != 0`` the structure field is transverse, so every
tangent ``X`` splits as ``phi_bar X = phi X + omega(X) zeta``. Pairing with
``xi`` gives ``omega(X) = g(phi_bar X, xi) / b``. Everything here works in
coordinates of the tangent basis ``(xi, s_1, ..., s_{2n-1})``; index 0 is xi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import ZetaDecomposition
from .errors import FrameInvalid, ZetaTangent
from .hypersurface import NullFrame
from .linalg import DEFAULT_TOL, inner
from .structure import AmbientStructure

__all__ = [
    "InducedStructure",
    "induced_phi_omega",
    "g_tilde",
    "verify_hermitian",
    "nonexistence_witness",
]


@dataclass(frozen=True)
class InducedStructure:
    tangent_basis: np.ndarray   # (2n, m) ambient rows
    phi: np.ndarray             # (2n, 2n); column j holds phi(T_j)
    omega: np.ndarray           # (2n,)
    eta_restricted: np.ndarray  # (2n,)
    gram: np.ndarray            # induced metric g on tangent coordinates
    b: float

    @property
    def rank(self) -> int:
        return self.tangent_basis.shape[0]

    @property
    def xi_coords(self) -> np.ndarray:
        e = np.zeros(self.rank)
        e[0] = 1.0
        return e

    def apply_phi(self, X):
        """phi on tangent coordinates; ``X`` may be a stack of rows."""
        return np.asarray(X, dtype=float) @ self.phi.T

    def g(self, X, Y):
        return np.einsum("...i,ij,...j->...", X, self.gram, Y)

    def omega_of(self, X):
        return np.asarray(X, dtype=float) @ self.omega

    def eta_of(self, X):
        return np.asarray(X, dtype=float) @ self.eta_restricted

    def to_ambient(self, X):
        return np.asarray(X, dtype=float) @ self.tangent_basis

    def invariant_residuals(self) -> dict[str, float]:
        eye = np.eye(self.rank)
        phi_xi = self.apply_phi(self.xi_coords)
        return {
            "phi_squared": float(np.abs(self.phi @ self.phi + eye).max()),
            "omega_phi_eta": float(np.abs(self.omega @ self.phi - self.eta_restricted).max()),
            "omega_xi": abs(float(self.omega[0])),
            "g_tilde_xi": float(np.abs(self.g(eye, self.xi_coords)
                                       + self.omega * self.omega[0]).max()),
            "g_tilde_phi_xi": float(np.abs(self.g(eye, phi_xi)
                                           + self.omega * self.omega_of(phi_xi)).max()),
        }


def induced_phi_omega(S: AmbientStructure, frame: NullFrame, dec: ZetaDecomposition,
                      tol: float = DEFAULT_TOL) -> InducedStructure:
    b = dec.b
    if abs(b) <= tol:
        raise ZetaTangent(f"b = eta(xi) = {b:.3e}: zeta is tangent and omega is undefined")
    g = S.metric
    T = frame.tangent_basis
    phibarT = S.phi(T)
    omega = inner(g, phibarT, frame.xi) / b
    phiT = phibarT - omega[:, None] * S.zeta
    off = np.abs(inner(g, phiT, frame.xi))
    scale = np.linalg.norm(phiT, axis=1) * np.linalg.norm(frame.xi)
    if np.any(off > tol * np.maximum(scale, 1.0)):
        raise FrameInvalid("phi X is not tangent to the hypersurface")
    coords, *_ = np.linalg.lstsq(T.T, phiT.T, rcond=None)
    # lstsq returns coordinates column by column, i.e. column j = phi(T_j).
    fit = float(np.abs(T.T @ coords - phiT.T).max())
    if fit > tol * max(1.0, float(np.abs(phiT).max())):
        raise FrameInvalid(f"phi X is not in the span of the tangent basis (misfit {fit:.3e})")
    gram = (T * g.diag) @ T.T
    return InducedStructure(T, coords, omega, S.eta_of(T), gram, b)


def g_tilde(ind: InducedStructure, X, Y):
    """``g(X, Y) + omega(X) omega(Y)`` on tangent coordinates."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return ind.g(X, Y) + ind.omega_of(X) * ind.omega_of(Y)


def verify_hermitian(ind: InducedStructure, trials: int = 1000, tol: float = DEFAULT_TOL,
                     seed: int = 0) -> dict:
    """Max residuals of the Hermitian identities over random tangent pairs."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((trials, ind.rank))
    Y = rng.standard_normal((trials, ind.rank))
    return hermitian_residuals(ind, X, Y, tol)


def hermitian_residuals(ind: InducedStructure, X, Y, tol: float = DEFAULT_TOL) -> dict:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    pX, pY = ind.apply_phi(X), ind.apply_phi(Y)
    wX, wY = ind.omega_of(X), ind.omega_of(Y)
    eX, eY = ind.eta_of(X), ind.eta_of(Y)
    xi = ind.xi_coords
    phi_xi = ind.apply_phi(xi)
    res = {
        "g_tilde_hermitian": float(np.abs(g_tilde(ind, pX, pY) - g_tilde(ind, X, Y)).max()),
        "g_phi_phi": float(np.abs(ind.g(pX, pY) - ind.g(X, Y) + eX * eY - wX * wY).max()),
        "skew_defect": float(np.abs(ind.g(pX, Y) + wX * eY + ind.g(X, pY) + wY * eX).max()),
        "phi_squared": float(np.abs(ind.apply_phi(pX) + X).max()),
        "omega_phi_eta": float(np.abs(ind.omega_of(pX) - eX).max()),
        "g_tilde_xi": float(np.abs(g_tilde(ind, X, xi)).max()),
        "g_tilde_phi_xi": float(np.abs(g_tilde(ind, X, phi_xi)).max()),
    }
    res["passed"] = all(v <= tol for v in res.values())
    return res


def nonexistence_witness(ind: InducedStructure, dec: ZetaDecomposition,
                         tol: float = DEFAULT_TOL) -> dict:
    """Concrete obstruction values that must stay away from zero.

    ``omega(phi xi) = b`` rules out omega = 0; the (g, phi) Hermitian defect
    at (xi, xi) and the skewness defect at (phi xi, xi) both equal ``b**2``.
    """
    xi = ind.xi_coords
    phi_xi = ind.apply_phi(xi)
    b = dec.b
    omega_phi_xi = float(ind.omega_of(phi_xi))
    herm = abs(float(ind.g(phi_xi, phi_xi) - ind.g(xi, xi)))
    skew = abs(float(ind.g(ind.apply_phi(phi_xi), xi) + ind.g(phi_xi, phi_xi)))
    return {
        "omega_phi_xi": omega_phi_xi,
        "omega_phi_xi_minus_b": abs(omega_phi_xi - b),
        "hermitian_defect_xi_xi": herm,
        "hermitian_defect_minus_b2": abs(herm - b * b),
        "skew_defect": skew,
        "skew_defect_minus_b2": abs(skew - b * b),
        "passed": (abs(b) > tol and abs(omega_phi_xi - b) <= tol
                   and abs(herm - b * b) <= tol and skew > tol * tol),
    }
