"""Named hypersurfaces and seeded random corpora."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .hypersurface import AffineHypersurface, Hypersurface, NullCone, ScreenPolicy, project_to_surface
from .structure import AmbientStructure, standard_model

__all__ = [
    "fixture_a",
    "fixture_b",
    "builtin",
    "random_null_vector",
    "random_lightlike_hyperplane",
    "sample_points",
    "Case",
    "frame_corpus",
]

SQRT2 = float(np.sqrt(2.0))


def _require_5d(S: AmbientStructure, name: str):
    if S.dim != 5 or S.metric.signs != (-1, -1, 1, 1):
        raise ConfigError(f"{name} is defined on the 5-dim model with signs (-1, +1)")


def fixture_a(S: AmbientStructure) -> AffineHypersurface:
    """``x3 - x1 = 0``: tangent to zeta."""
    _require_5d(S, "fixture-a")
    return AffineHypersurface([-1.0, 0.0, 1.0, 0.0, 0.0])


def fixture_b(S: AmbientStructure) -> AffineHypersurface:
    """``-sqrt(2) x1 + x3 + z = 0``: proper inascreen under basis-scan."""
    _require_5d(S, "fixture-b")
    return AffineHypersurface([-SQRT2, 0.0, 1.0, 0.0, 1.0])


BUILTINS = {
    "null-cone": NullCone.for_structure,
    "fixture-a": fixture_a,
    "fixture-b": fixture_b,
}


def builtin(name: str, S: AmbientStructure) -> Hypersurface:
    try:
        make = BUILTINS[name]
    except KeyError:
        raise ConfigError(f"unknown builtin hypersurface {name!r}; "
                          f"choose from {sorted(BUILTINS)}") from None
    return make(S)


# Generic draws keep |z-component| >= MIN_TRANSVERSE * |v|; near-tangential
# normals make omega ~ 1/b and swamp absolute tolerances with rounding.
MIN_TRANSVERSE = 0.1


def random_null_vector(S: AmbientStructure, rng, tangential: bool = False,
                       min_transverse: float = MIN_TRANSVERSE) -> np.ndarray:
    """A random null vector; ``tangential`` forces a zero z-component."""
    neg = S.metric.diag < 0
    while True:
        v = rng.standard_normal(S.dim)
        if tangential:
            v[-1] = 0.0
        v[neg] *= np.linalg.norm(v[~neg]) / np.linalg.norm(v[neg])
        if tangential or abs(v[-1]) >= min_transverse * np.linalg.norm(v):
            return v


def random_lightlike_hyperplane(S: AmbientStructure, rng, tangential: bool = False,
                                min_transverse: float = MIN_TRANSVERSE):
    """Random affine null hyperplane through a random point ``p``.

    Returns ``(H, p)``; the gradient of ``H`` raises to a null normal.
    """
    xi = random_null_vector(S, rng, tangential, min_transverse)
    covector = xi * S.metric.diag
    p = rng.standard_normal(S.dim)
    return AffineHypersurface(covector, -float(covector @ p)), p


def sample_points(H: Hypersurface, dim: int, count: int, seed: int, box=(-1.0, 1.0)) -> list:
    """Uniform samples from ``box`` pulled onto ``H`` by Newton projection.

    ``box`` is ``[lo, hi]`` for every coordinate or a list of per-coordinate
    ``[lo, hi]`` pairs.
    """
    rng = np.random.default_rng(seed)
    box = np.asarray(box, dtype=float)
    if box.shape == (2,):
        lo, hi = np.full(dim, box[0]), np.full(dim, box[1])
    elif box.shape == (dim, 2):
        lo, hi = box[:, 0], box[:, 1]
    else:
        raise ConfigError(f"box must be [lo, hi] or {dim} such pairs")
    return [project_to_surface(H, rng.uniform(lo, hi)) for _ in range(count)]


@dataclass(frozen=True)
class Case:
    name: str
    S: AmbientStructure
    H: Hypersurface
    p: np.ndarray
    policy: ScreenPolicy


def frame_corpus(seed: int = 2024, per_model: int = 100, tangential: int = 10) -> list[Case]:
    """Fixtures A and B plus random null hyperplanes in the 5- and 7-dim models.

    Each model gets ``per_model`` generic hyperplanes under basis-scan,
    ``tangential`` hyperplanes containing zeta, and every generic hyperplane is
    also framed with ``V = zeta`` (which always lands on the ascreen branch).
    """
    rng = np.random.default_rng(seed)
    S5 = standard_model(2, (-1, 1))
    cases = [
        Case("fixture-a", S5, fixture_a(S5), np.zeros(5), ScreenPolicy()),
        Case("fixture-b", S5, fixture_b(S5), np.zeros(5), ScreenPolicy()),
        Case("fixture-b-ascreen", S5, fixture_b(S5), np.zeros(5),
             ScreenPolicy("auxiliary-vector", S5.zeta)),
    ]
    for S in (S5, standard_model(3, (-1, 1, 1)), standard_model(3, (-1, -1, 1))):
        tag = f"{S.dim}d{''.join('-' if s < 0 else '+' for s in S.metric.signs[::2])}"
        for k in range(per_model):
            H, p = random_lightlike_hyperplane(S, rng)
            cases.append(Case(f"{tag}-generic-{k}", S, H, p, ScreenPolicy()))
            cases.append(Case(f"{tag}-zeta-{k}", S, H, p, ScreenPolicy("auxiliary-vector", S.zeta)))
        for k in range(tangential):
            H, p = random_lightlike_hyperplane(S, rng, tangential=True)
            cases.append(Case(f"{tag}-tangential-{k}", S, H, p, ScreenPolicy()))
    return cases
