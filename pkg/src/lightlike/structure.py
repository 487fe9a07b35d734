"""Flat indefinite almost contact metric model spaces.

The model on R^(2n+1) pairs coordinates ``(x_{2k-1}, x_{2k})`` into complex
lines rotated by ``phi_bar`` and keeps a unit ``z`` direction for the
structure vector field ``zeta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidStructure
from .linalg import MetricTensor, inner

__all__ = ["AmbientStructure", "ValidationReport", "standard_model", "validate_structure"]


@dataclass(frozen=True)
class AmbientStructure:
    metric: MetricTensor
    phi_bar: np.ndarray
    zeta: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        m = self.metric.dim
        for name, shape in (("phi_bar", (m, m)), ("zeta", (m,)), ("eta", (m,))):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise InvalidStructure(f"{name} has shape {arr.shape}, expected {shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.metric.dim

    @property
    def n(self) -> int:
        return (self.dim - 1) // 2

    def phi(self, v):
        """Apply ``phi_bar`` to a vector or a stack of row vectors."""
        return np.asarray(v, dtype=float) @ self.phi_bar.T

    def eta_of(self, v):
        return np.asarray(v, dtype=float) @ self.eta

    def inner(self, u, v):
        return inner(self.metric, u, v)


def standard_model(n: int, signs) -> AmbientStructure:
    """The product model with metric ``diag(s1, s1, ..., sn, sn, 1)``."""
    signs = tuple(int(s) for s in signs)
    if n < 1 or len(signs) != n:
        raise InvalidStructure(f"need n >= 1 and n signs, got n={n}, signs={signs}")
    try:
        metric = MetricTensor.from_pairs(signs)
    except ValueError as exc:
        raise InvalidStructure(str(exc)) from exc
    m = 2 * n + 1
    phi = np.zeros((m, m))
    for k in range(n):
        i, j = 2 * k, 2 * k + 1
        phi[j, i] = 1.0   # e_i -> e_j
        phi[i, j] = -1.0  # e_j -> -e_i
    zeta = np.zeros(m)
    zeta[-1] = 1.0
    return AmbientStructure(metric, phi, zeta, zeta.copy())


@dataclass
class ValidationReport:
    residuals: dict[str, float]
    tol: float
    trials: int
    seed: int
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = all(r <= self.tol for r in self.residuals.values())

    def to_dict(self) -> dict:
        return {"residuals": dict(self.residuals), "tol": self.tol, "trials": self.trials,
                "seed": self.seed, "passed": self.passed}


def validate_structure(S: AmbientStructure, trials: int = 1000, tol: float = 1e-12,
                       seed: int = 0) -> ValidationReport:
    """Evaluate every almost contact metric axiom on basis and random pairs.

    Residuals are maximum absolute values; failures are reported, not raised.
    """
    m = S.dim
    rng = np.random.default_rng(seed)
    eye = np.eye(m)
    ii, jj = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    U = np.vstack([eye[ii.ravel()], rng.standard_normal((trials, m))])
    V = np.vstack([eye[jj.ravel()], rng.standard_normal((trials, m))])

    g = S.metric
    pU, pV = S.phi(U), S.phi(V)
    eU, eV = S.eta_of(U), S.eta_of(V)

    res = {}
    res["eta_zeta"] = abs(float(S.eta @ S.zeta) - 1.0)
    expected = -U + eU[:, None] * S.zeta
    res["phi_squared"] = float(np.abs(S.phi(pU) - expected).max())
    res["phi_zeta"] = float(np.abs(S.phi(S.zeta)).max())
    res["eta_phi"] = float(np.abs(S.eta_of(pU)).max())
    res["compatibility"] = float(np.abs(inner(g, pU, pV) - inner(g, U, V) + eU * eV).max())
    res["eta_metric_dual"] = float(np.abs(inner(g, U, S.zeta) - eU).max())
    res["skew"] = float(np.abs(inner(g, pU, V) + inner(g, U, pV)).max())
    return ValidationReport(res, tol, trials, seed)
