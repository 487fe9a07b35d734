"""Implicit hypersurfaces and pointwise null frames.

A hypersurface is a level set ``F(x) = level``. At a lightlike point the
index-raised gradient ``xi`` is null and tangent. The frame builder picks an
auxiliary vector ``V`` orthogonal to ``phi_bar xi`` and forms the unique null
transversal ``N = (V - g(V,V)/(2 g(V,xi)) xi) / g(V,xi)``, then completes the
screen and the ``D'`` block by linear elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (ConfigError, DegenerateScreen, NotLightlike, NotOnHypersurface,
                     PolicyFailure)
from .linalg import DEFAULT_TOL, Subspace, inner, lower_index, nullspace, orthocomplement, raise_index
from .structure import AmbientStructure

__all__ = [
    "Hypersurface",
    "AffineHypersurface",
    "QuadricHypersurface",
    "NullCone",
    "ScreenPolicy",
    "NullFrame",
    "InvarianceReport",
    "normal_xi",
    "build_null_frame",
    "check_dprime_invariance",
    "project_to_surface",
]


class Hypersurface:
    """Level set ``F(x) = level`` with a closed-form gradient."""

    level: float = 0.0

    def value(self, x) -> float:
        raise NotImplementedError

    def gradient(self, x) -> np.ndarray:
        raise NotImplementedError

    def scaled(self, alpha: float) -> "Hypersurface":
        """The same set described by ``alpha * F = alpha * level``."""
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError

    def residual(self, x) -> float:
        return float(self.value(x) - self.level)


@dataclass(frozen=True)
class AffineHypersurface(Hypersurface):
    covector: np.ndarray
    constant: float = 0.0
    level: float = 0.0

    def __post_init__(self):
        c = np.array(self.covector, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "covector", c)

    def value(self, x):
        return float(self.covector @ np.asarray(x, dtype=float) + self.constant)

    def gradient(self, x):
        return self.covector.copy()

    def scaled(self, alpha):
        return AffineHypersurface(alpha * self.covector, alpha * self.constant, alpha * self.level)

    def to_config(self):
        return {"kind": "affine", "covector": self.covector.tolist(),
                "constant": self.constant, "level": self.level}


@dataclass(frozen=True)
class QuadricHypersurface(Hypersurface):
    """``F(x) = x^T A x + c^T x + constant`` with ``A`` symmetric."""

    matrix: np.ndarray
    covector: np.ndarray
    constant: float = 0.0
    level: float = 0.0

    def __post_init__(self):
        a = np.array(self.matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ConfigError(f"quadric matrix must be square, got shape {a.shape}")
        a = 0.5 * (a + a.T)
        c = np.array(self.covector, dtype=float)
        if c.shape != (a.shape[0],):
            raise ConfigError("quadric covector length does not match matrix")
        a.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "covector", c)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return float(x @ self.matrix @ x + self.covector @ x + self.constant)

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        return 2.0 * self.matrix @ x + self.covector

    def scaled(self, alpha):
        return QuadricHypersurface(alpha * self.matrix, alpha * self.covector,
                                   alpha * self.constant, alpha * self.level)

    def to_config(self):
        return {"kind": "quadric", "matrix": self.matrix.tolist(),
                "covector": self.covector.tolist(), "constant": self.constant,
                "level": self.level}


@dataclass(frozen=True)
class NullCone(QuadricHypersurface):
    """``g(x, x) = 0`` with the vertex excluded."""

    vertex_radius: float = 1e-6

    @classmethod
    def for_structure(cls, S: AmbientStructure, alpha: float = 1.0) -> "NullCone":
        m = S.dim
        return cls(alpha * np.diag(S.metric.diag), np.zeros(m), 0.0, 0.0)

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        if np.linalg.norm(x) < self.vertex_radius:
            raise NotLightlike("point is at the vertex of the null cone")
        return super().gradient(x)

    def scaled(self, alpha):
        return NullCone(alpha * self.matrix, alpha * self.covector, alpha * self.constant,
                        alpha * self.level, self.vertex_radius)

    def to_config(self):
        return {"kind": "builtin", "name": "null-cone"}


def project_to_surface(H: Hypersurface, x, tol: float = 1e-13, max_iter: int = 50):
    """Newton iteration along the Euclidean gradient until ``|F - level|`` is tiny."""
    q = np.array(x, dtype=float)
    for _ in range(max_iter):
        r = H.residual(q)
        grad = H.gradient(q)
        gg = float(grad @ grad)
        if gg == 0.0:
            raise NotOnHypersurface("gradient vanishes during projection")
        if abs(r) <= tol * max(1.0, np.sqrt(gg) * np.linalg.norm(q)):
            return q
        q = q - r * grad / gg
    raise NotOnHypersurface(f"projection did not converge (residual {H.residual(q):.3e})")


@dataclass(frozen=True)
class ScreenPolicy:
    kind: str = "basis-scan"
    auxiliary: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in ("basis-scan", "auxiliary-vector"):
            raise ConfigError(f"unknown screen policy {self.kind!r}")
        if (self.kind == "auxiliary-vector") != (self.auxiliary is not None):
            raise ConfigError("auxiliary vector is required exactly for the auxiliary-vector policy")
        if self.auxiliary is not None:
            v = np.array(self.auxiliary, dtype=float)
            v.setflags(write=False)
            object.__setattr__(self, "auxiliary", v)

    def to_config(self):
        d = {"kind": self.kind}
        if self.auxiliary is not None:
            d["auxiliary"] = self.auxiliary.tolist()
        return d


@dataclass(frozen=True)
class NullFrame:
    point: np.ndarray
    xi: np.ndarray
    N: np.ndarray
    phi_xi: np.ndarray
    phi_N: np.ndarray
    screen_basis: np.ndarray
    dprime_basis: np.ndarray
    auxiliary: np.ndarray
    a: float
    b: float
    # True when |2ab - 1| <= tol and D' is the complement of phi_xi alone.
    degenerate: bool
    # Scan choice and elimination pivot columns; used to certify smoothness.
    pivots: tuple = field(default=())

    @property
    def dim(self) -> int:
        return self.xi.shape[0]

    @property
    def tangent_basis(self) -> np.ndarray:
        """Rows ``xi, s_1, ..., s_{2n-1}``."""
        return np.vstack([self.xi[None, :], self.screen_basis])

    def screen(self) -> Subspace:
        return Subspace(self.screen_basis)

    def invariant_residuals(self, S: AmbientStructure) -> dict[str, float]:
        """Euclidean-relative residuals of the frame constraints.

        ``screen_sigma_min`` is the smallest absolute eigenvalue of the metric
        on a Euclidean-orthonormal screen basis and must stay *above* tol.
        """
        g = S.metric
        nrm = np.linalg.norm
        xi, N = self.xi, self.N
        res = {
            "xi_null": abs(float(inner(g, xi, xi))) / nrm(xi) ** 2,
            "N_null": abs(float(inner(g, N, N))) / nrm(N) ** 2,
            "xi_N_pairing": abs(float(inner(g, xi, N)) - 1.0),
        }
        scr = self.screen_basis
        sn = nrm(scr, axis=1)
        res["screen_orthogonal"] = float(max(
            np.max(np.abs(inner(g, scr, xi)) / (sn * nrm(xi))),
            np.max(np.abs(inner(g, scr, N)) / (sn * nrm(N)))))
        screen = self.screen()
        res["phi_in_screen"] = max(screen.distance(v) / nrm(v) for v in (self.phi_xi, self.phi_N))
        if self.dprime_basis.shape[0]:
            dn = nrm(self.dprime_basis, axis=1)
            res["dprime_orthogonal"] = float(max(
                np.max(np.abs(inner(g, self.dprime_basis, v)) / (dn * nrm(v)))
                for v in (self.phi_xi, self.phi_N)))
        else:
            res["dprime_orthogonal"] = 0.0
        res["screen_sigma_min"] = _screen_sigma_min(g, scr)
        return res

    def check(self, S: AmbientStructure, tol: float = DEFAULT_TOL) -> bool:
        res = self.invariant_residuals(S)
        sigma = res.pop("screen_sigma_min")
        return sigma > tol and all(v <= tol for v in res.values())

    def to_dict(self) -> dict:
        return {
            "point": self.point.tolist(), "xi": self.xi.tolist(), "N": self.N.tolist(),
            "phi_xi": self.phi_xi.tolist(), "phi_N": self.phi_N.tolist(),
            "screen_basis": self.screen_basis.tolist(),
            "dprime_basis": self.dprime_basis.tolist(),
            "auxiliary": self.auxiliary.tolist(), "a": self.a, "b": self.b,
            "degenerate_split": self.degenerate,
        }


def _screen_sigma_min(g, basis) -> float:
    if basis.shape[0] == 0:
        return np.inf
    q, _ = np.linalg.qr(basis.T)
    gram = (q.T * g.diag) @ q
    return float(np.min(np.abs(np.linalg.eigvalsh(gram))))


def normal_xi(S: AmbientStructure, H: Hypersurface, p, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Index-raised gradient at ``p``; raises unless ``H`` is lightlike there."""
    p = np.asarray(p, dtype=float)
    if p.shape != (S.dim,):
        raise NotOnHypersurface(f"point has shape {p.shape}, expected ({S.dim},)")
    if not np.all(np.isfinite(p)):
        raise NotOnHypersurface("point has non-finite coordinates")
    r = H.residual(p)
    if not abs(r) <= tol:
        raise NotOnHypersurface(f"|F(p) - c| = {abs(r):.3e} exceeds {tol:g}")
    grad = H.gradient(p)
    if np.linalg.norm(grad) <= tol:
        raise NotLightlike("gradient vanishes: singular point")
    xi = raise_index(S.metric, grad)
    if abs(float(inner(S.metric, xi, xi))) > tol * float(xi @ xi):
        raise NotLightlike(f"g(xi, xi) = {float(inner(S.metric, xi, xi)):.3e}: hypersurface is not null here")
    return xi


# First candidate with |g(V, xi)| >= CONDITIONING * |V| |xi| is accepted.
CONDITIONING = 0.1


def _candidates(S, xi, phi_xi, policy, nonnull, tol):
    """Yield ``(choice, V)`` with ``g(V, phi_xi) = 0``, in policy order."""
    g = S.metric
    m = S.dim
    pp = float(inner(g, phi_xi, phi_xi))

    def orthogonalize(v):
        if nonnull:
            return v - float(inner(g, v, phi_xi)) / pp * phi_xi
        if abs(float(inner(g, v, phi_xi))) <= tol * np.linalg.norm(v) * np.linalg.norm(phi_xi):
            return v
        return None

    if policy.kind == "auxiliary-vector":
        v = orthogonalize(np.asarray(policy.auxiliary, dtype=float))
        if v is not None:
            yield ("aux", nonnull), v
        return
    eye = np.eye(m)
    for i in range(m):
        v = orthogonalize(eye[i])
        if v is not None:
            yield ("basis", nonnull, i), v
    # Pair combinations are orthogonal to phi_xi without dividing by g(phi_xi, phi_xi).
    c = lower_index(g, phi_xi)
    for i in range(m):
        for j in range(i + 1, m):
            if c[i] == 0.0 and c[j] == 0.0:
                continue
            yield ("pair", nonnull, i, j), c[j] * eye[i] - c[i] * eye[j]


def _choose_auxiliary(S, xi, phi_xi, policy, nonnull, tol):
    g = S.metric
    nxi = np.linalg.norm(xi)
    best = None
    for choice, V in _candidates(S, xi, phi_xi, policy, nonnull, tol):
        gvx = float(inner(g, V, xi))
        if abs(gvx) <= tol:
            continue
        ratio = abs(gvx) / (np.linalg.norm(V) * nxi)
        if policy.kind == "auxiliary-vector" or ratio >= CONDITIONING:
            return choice, V, gvx
        if best is None or ratio > best[0]:
            best = (ratio, choice, V, gvx)
    if best is None:
        raise PolicyFailure(f"no auxiliary vector orthogonal to phi_bar xi with g(V, xi) != 0 "
                            f"({policy.kind} policy)")
    return best[1:]


def build_null_frame(S: AmbientStructure, H: Hypersurface, p, policy: ScreenPolicy = None,
                     tol: float = DEFAULT_TOL) -> NullFrame:
    """Null frame at ``p`` with ``phi_bar xi`` and ``phi_bar N`` in the screen."""
    policy = policy or ScreenPolicy()
    g = S.metric
    p = np.asarray(p, dtype=float)
    xi = normal_xi(S, H, p, tol)
    phi_xi = S.phi(xi)
    b = float(S.eta_of(xi))
    nonnull = abs(b) > tol

    choice, V, gvx = _choose_auxiliary(S, xi, phi_xi, policy, nonnull, tol)

    N = (V - float(inner(g, V, V)) / (2.0 * gvx) * xi) / gvx
    phi_N = S.phi(N)
    a = float(S.eta_of(N))

    constraints = np.vstack([lower_index(g, xi), lower_index(g, N)])
    screen_basis, screen_piv = nullspace(constraints, tol)
    if screen_basis.shape[0] != S.dim - 2:
        raise DegenerateScreen("xi and N do not impose two independent constraints")
    if _screen_sigma_min(g, screen_basis) <= tol:
        raise DegenerateScreen("metric restricted to the screen is singular")

    degenerate = abs(2.0 * a * b - 1.0) <= tol
    # The branch is decided by |2ab - 1| alone, which equals the Gram determinant.
    span = Subspace(phi_xi[None, :] if degenerate else np.vstack([phi_xi, phi_N]), tol)
    dprime = orthocomplement(g, span, Subspace(screen_basis, tol), tol)

    return NullFrame(point=p.copy(), xi=xi, N=N, phi_xi=phi_xi, phi_N=phi_N,
                     screen_basis=screen_basis, dprime_basis=np.array(dprime.basis),
                     auxiliary=V, a=a, b=b, degenerate=degenerate,
                     pivots=(choice, screen_piv))


@dataclass
class InvarianceReport:
    invariant: bool
    in_screen: bool
    # Largest relative component of phi_bar d outside D' (along phi xi, phi N, xi, N).
    max_outside_component: float
    c11_residuals: dict[str, float]


def check_dprime_invariance(S: AmbientStructure, frame: NullFrame,
                            tol: float = DEFAULT_TOL) -> InvarianceReport:
    """Test whether ``phi_bar`` maps ``D'`` into itself."""
    g = S.metric
    D = frame.dprime_basis
    if D.shape[0] == 0:
        return InvarianceReport(True, True, 0.0, {"phi_N": 0.0, "phi_xi": 0.0})
    others = [frame.phi_xi] if frame.degenerate else [frame.phi_xi, frame.phi_N]
    others += [frame.xi, frame.N]
    basis = np.vstack(others + list(D))
    k = len(others)
    phiD = S.phi(D)
    coef = np.linalg.solve(basis.T, phiD.T).T
    outside = np.abs(coef[:, :k]) * np.linalg.norm(basis[:k], axis=1)
    outside = outside / np.linalg.norm(D, axis=1)[:, None]
    max_out = float(outside.max())

    nd = np.linalg.norm(phiD, axis=1)
    nd = np.where(nd == 0.0, 1.0, nd)
    in_screen = bool(np.all(np.abs(inner(g, phiD, frame.xi)) <= tol * nd * np.linalg.norm(frame.xi))
                     and np.all(np.abs(inner(g, phiD, frame.N)) <= tol * nd * np.linalg.norm(frame.N)))
    etaD = S.eta_of(D)
    c11 = {
        "phi_N": float(np.abs(inner(g, phiD, frame.phi_N) + frame.a * etaD).max()),
        "phi_xi": float(np.abs(inner(g, phiD, frame.phi_xi) + frame.b * etaD).max()),
    }
    return InvarianceReport(max_out <= tol, in_screen, max_out, c11)
