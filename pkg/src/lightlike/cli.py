"""Command-line front end: ``lightlike classify|verify|frame|examples``.

Exit codes: 0 when everything built and every checked residual is within
tolerance, 1 on frame, structure or identity failures, 2 on config errors.
"""

from __future__ import annotations

import argparse
import copy
import json
import sys
from pathlib import Path

import jsonschema
import numpy as np

from .classify import check_independence, classify, decompose_zeta
from .errors import ConfigError, InvalidStructure, LightlikeError
from .gauss_weingarten import DEFAULT_STEP, second_fundamental, verify_gw_identities
from .hypersurface import (AffineHypersurface, QuadricHypersurface, ScreenPolicy,
                           build_null_frame, check_dprime_invariance)
from .induced import induced_phi_omega, nonexistence_witness, verify_hermitian
from .linalg import DEFAULT_TOL
from .presets import builtin, sample_points
from .reporting import dumps
from .structure import standard_model, validate_structure

__all__ = ["main", "load_config", "run", "frame_dump", "EXAMPLES", "CONFIG_SCHEMA"]

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

_vector = {"type": "array", "items": {"type": "number"}, "minItems": 1}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["ambient", "hypersurface", "points"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "ambient": {
            "type": "object",
            "required": ["n_pairs", "signs"],
            "additionalProperties": False,
            "properties": {
                "n_pairs": {"type": "integer", "minimum": 1},
                "signs": {"type": "array", "items": {"enum": [-1, 1]}, "minItems": 1},
            },
        },
        "hypersurface": {
            "oneOf": [
                {"type": "object", "required": ["kind", "name"], "additionalProperties": False,
                 "properties": {"kind": {"const": "builtin"}, "name": {"type": "string"}}},
                {"type": "object", "required": ["kind", "covector"], "additionalProperties": False,
                 "properties": {"kind": {"const": "affine"}, "covector": _vector,
                                "constant": {"type": "number"}, "level": {"type": "number"}}},
                {"type": "object", "required": ["kind", "matrix", "covector"],
                 "additionalProperties": False,
                 "properties": {"kind": {"const": "quadric"},
                                "matrix": {"type": "array", "items": _vector},
                                "covector": _vector, "constant": {"type": "number"},
                                "level": {"type": "number"}}},
            ]
        },
        "screen_policy": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["basis-scan", "auxiliary-vector"]},
                "auxiliary": {"oneOf": [{"const": "zeta"}, _vector]},
            },
        },
        "points": {
            "oneOf": [
                {"type": "array", "items": _vector, "minItems": 1},
                {"type": "object", "required": ["sample"], "additionalProperties": False,
                 "properties": {"sample": {
                     "type": "object", "required": ["count"], "additionalProperties": False,
                     "properties": {
                         "count": {"type": "integer", "minimum": 1},
                         "seed": {"type": "integer", "minimum": 0},
                         "box": {"type": "array"},
                     }}}},
            ]
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: {"type": "number", "exclusiveMinimum": 0}
                           for k in ("null", "residual", "fd_step", "gw")},
        },
        "seed": {"type": "integer", "minimum": 0},
        "trials": {"type": "integer", "minimum": 1},
    },
}

DEFAULT_TOLERANCES = {"null": DEFAULT_TOL, "residual": DEFAULT_TOL, "fd_step": DEFAULT_STEP,
                      "gw": 1e-5}

_SQRT2 = float(np.sqrt(2.0))

EXAMPLES = {
    "fixture-a": {
        "name": "fixture-a",
        "ambient": {"n_pairs": 2, "signs": [-1, 1]},
        "hypersurface": {"kind": "builtin", "name": "fixture-a"},
        "screen_policy": {"kind": "basis-scan"},
        "points": [[0, 0, 0, 0, 0], [1, 0, 1, 0, 0], [0.5, 2, 0.5, -1, 3]],
    },
    "fixture-b": {
        "name": "fixture-b",
        "ambient": {"n_pairs": 2, "signs": [-1, 1]},
        "hypersurface": {"kind": "builtin", "name": "fixture-b"},
        "screen_policy": {"kind": "basis-scan"},
        "points": [[0, 0, 0, 0, 0], [0, 1, 0, -2, 0], [1, 0, 0, 0, _SQRT2]],
    },
    "fixture-b-ascreen": {
        "name": "fixture-b-ascreen",
        "ambient": {"n_pairs": 2, "signs": [-1, 1]},
        "hypersurface": {"kind": "builtin", "name": "fixture-b"},
        "screen_policy": {"kind": "auxiliary-vector", "auxiliary": "zeta"},
        "points": [[0, 0, 0, 0, 0], [0, 1, 0, -2, 0], [1, 0, 0, 0, _SQRT2]],
    },
    "null-cone": {
        "name": "null-cone",
        "ambient": {"n_pairs": 2, "signs": [-1, 1]},
        "hypersurface": {"kind": "builtin", "name": "null-cone"},
        "screen_policy": {"kind": "basis-scan"},
        "points": {"sample": {"count": 16, "seed": 7, "box": [-1, 1]}},
    },
    "hyperplane-7d": {
        "name": "hyperplane-7d",
        "ambient": {"n_pairs": 3, "signs": [-1, 1, 1]},
        "hypersurface": {"kind": "affine", "covector": [-1, -1, 1, 0, 0, 0, 1],
                         "constant": 0.5},
        "screen_policy": {"kind": "basis-scan"},
        "points": {"sample": {"count": 8, "seed": 3, "box": [-2, 2]}},
    },
}


# -- config -----------------------------------------------------------------

def load_config(path) -> dict:
    """Parsed JSON config; see ``normalize_config`` for validation."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return cfg


def normalize_config(cfg: dict, tol=None, fd_step=None, seed=None) -> dict:
    """Validate against the schema, fill defaults and apply overrides."""
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from None
    cfg = copy.deepcopy(cfg)
    amb = cfg["ambient"]
    if len(amb["signs"]) != amb["n_pairs"]:
        raise ConfigError(f"ambient.signs needs {amb['n_pairs']} entries, got {len(amb['signs'])}")
    cfg.setdefault("screen_policy", {"kind": "basis-scan"})
    cfg["tolerances"] = {**DEFAULT_TOLERANCES, **cfg.get("tolerances", {})}
    cfg.setdefault("seed", 0)
    cfg.setdefault("trials", 1000)
    if isinstance(cfg["points"], dict):
        sample = cfg["points"]["sample"]
        sample.setdefault("seed", cfg["seed"])
        sample.setdefault("box", [-1.0, 1.0])
    if tol is not None:
        cfg["tolerances"]["null"] = cfg["tolerances"]["residual"] = tol
    if fd_step is not None:
        cfg["tolerances"]["fd_step"] = fd_step
    if seed is not None:
        cfg["seed"] = seed
        if isinstance(cfg["points"], dict):
            cfg["points"]["sample"]["seed"] = seed
    return cfg


class Setup:
    """Objects built from a normalized config."""

    def __init__(self, cfg: dict):
        amb = cfg["ambient"]
        try:
            self.S = standard_model(amb["n_pairs"], amb["signs"])
        except InvalidStructure as exc:
            raise ConfigError(f"ambient: {exc}") from exc
        m = self.S.dim
        hs = cfg["hypersurface"]
        if hs["kind"] == "builtin":
            self.H = builtin(hs["name"], self.S)
        elif hs["kind"] == "affine":
            _require_len(hs["covector"], m, "hypersurface.covector")
            self.H = AffineHypersurface(hs["covector"], hs.get("constant", 0.0), hs.get("level", 0.0))
        else:
            _require_len(hs["covector"], m, "hypersurface.covector")
            self.H = QuadricHypersurface(hs["matrix"], hs["covector"], hs.get("constant", 0.0),
                                         hs.get("level", 0.0))
            if self.H.matrix.shape != (m, m):
                raise ConfigError(f"hypersurface.matrix must be {m}x{m}")
        sp = cfg["screen_policy"]
        aux = sp.get("auxiliary")
        if aux == "zeta":
            aux = self.S.zeta
        elif aux is not None:
            _require_len(aux, m, "screen_policy.auxiliary")
        self.policy = ScreenPolicy(sp["kind"], aux)
        self.tol = cfg["tolerances"]
        self.seed = cfg["seed"]
        self.trials = cfg["trials"]
        pts = cfg["points"]
        if isinstance(pts, dict):
            s = pts["sample"]
            try:
                self.points = sample_points(self.H, m, s["count"], s["seed"], s["box"])
            except LightlikeError as exc:
                raise ConfigError(f"points.sample: {exc}") from exc
        else:
            for i, p in enumerate(pts):
                _require_len(p, m, f"points[{i}]")
            self.points = [np.array(p, dtype=float) for p in pts]


def _require_len(v, m, where):
    if len(v) != m:
        raise ConfigError(f"{where} must have {m} entries, got {len(v)}")


# -- per-point analysis -----------------------------------------------------

def _error(exc) -> dict:
    return {"type": type(exc).__name__, "message": str(exc)}


def analyze_point(setup: Setup, index: int, p, with_gw: bool) -> dict:
    """Classification, induced structure and optionally GW data at one point.

    ``residuals`` maps group-qualified identity names to values checked
    against the residual tolerance; ``gw_residuals`` against the GW one.
    """
    S, tol = setup.S, setup.tol
    rec = {"index": index, "point": np.asarray(p, dtype=float)}
    try:
        frame = build_null_frame(S, setup.H, p, setup.policy, tol["null"])
        dec = decompose_zeta(S, frame, tol["null"])
        cls = classify(dec, tol["null"])
    except LightlikeError as exc:
        rec["error"] = _error(exc)
        return rec
    inv = frame.invariant_residuals(S)
    sigma = inv.pop("screen_sigma_min")
    dprime = check_dprime_invariance(S, frame, tol["null"])
    rec.update({
        "a": dec.a, "b": dec.b, "f1": dec.f1, "f2": dec.f2, "w_prime": dec.Wprime,
        "class": cls.label, "tangential": cls.tangential, "proper": cls.proper,
        "lambda": dec.lam, "gram_det": dec.gram_det,
        "dprime_invariant": dprime.invariant, "screen_sigma_min": sigma,
    })
    res = {f"frame.{k}": v for k, v in inv.items()}
    res.update({f"decomposition.{k}": v for k, v in dec.identities.items()})
    res["decomposition.residual"] = dec.residual
    res.update({f"dprime.c11_{k}": v for k, v in dprime.c11_residuals.items()})
    checks = {"screen_nondegenerate": sigma > tol["null"], "phi_dprime_in_screen": dprime.in_screen}

    if cls.proper and cls.label == "inascreen":
        try:
            ind = induced_phi_omega(S, frame, dec, tol["null"])
        except LightlikeError as exc:
            rec["induced"] = {"error": _error(exc)}
            checks["induced_built"] = False
        else:
            herm = verify_hermitian(ind, setup.trials, tol["residual"], setup.seed)
            herm.pop("passed")
            wit = nonexistence_witness(ind, dec, tol["residual"])
            indep = check_independence(S, frame, dec, tol["null"])
            rec["induced"] = {
                "phi_matrix": ind.phi, "omega": ind.omega,
                "hermitian_residual": herm["g_tilde_hermitian"],
                "degeneracy_residuals": {"g_tilde_xi": herm["g_tilde_xi"],
                                         "g_tilde_phi_xi": herm["g_tilde_phi_xi"]},
                "obstruction": {"omega_phi_xi": wit["omega_phi_xi"],
                                "hermitian_defect_xi_xi": wit["hermitian_defect_xi_xi"],
                                "skew_defect_phi_xi_xi": wit["skew_defect"]},
                "independence": {"gram_det": indep["gram_det"], "zeta_rank": indep["zeta_rank"]},
            }
            res.update({f"induced.{k}": v for k, v in herm.items()})
            res.update({f"induced.basis_{k}": v for k, v in ind.invariant_residuals().items()})
            res["witness.omega_phi_xi_minus_b"] = wit["omega_phi_xi_minus_b"]
            res["witness.hermitian_defect_minus_b2"] = wit["hermitian_defect_minus_b2"]
            res["witness.skew_defect_minus_b2"] = wit["skew_defect_minus_b2"]
            checks["witness_nonzero"] = abs(dec.b) > tol["residual"]
            checks["independence"] = bool(indep["passed"])
    rec["residuals"] = res
    rec["checks"] = checks

    if with_gw:
        try:
            data = second_fundamental(S, setup.H, p, setup.policy, tol["fd_step"], tol["null"])
        except LightlikeError as exc:
            rec["gauss_weingarten"] = {"error": _error(exc)}
        else:
            gw = verify_gw_identities(data, tol["gw"])
            gw.pop("passed")
            rec["gauss_weingarten"] = {
                "h": data.h, "B": data.B, "C": data.C, "tau": data.tau,
                "A_N": data.A_N, "A_star_xi": data.A_star_xi,
                "absolute": gw.pop("absolute"),
            }
            rec["gw_residuals"] = {f"gw.{k}": v for k, v in gw.items()}
    return rec


def _record_ok(rec: dict, tol: dict, with_gw: bool) -> bool:
    if "error" in rec or not all(rec["checks"].values()):
        return False
    if any(v > tol["residual"] for v in rec["residuals"].values()):
        return False
    if with_gw:
        if "error" in rec["gauss_weingarten"]:
            return False
        return all(v <= tol["gw"] for v in rec["gw_residuals"].values())
    return True


def run(cfg: dict, verify: bool = False) -> tuple[dict, int]:
    """Full report for a normalized config and the exit code it implies."""
    setup = Setup(cfg)
    tol = setup.tol
    records = [analyze_point(setup, i, p, verify) for i, p in enumerate(setup.points)]

    counts = {}
    for rec in records:
        key = "error" if "error" in rec else rec["class"]
        if "error" not in rec and rec["class"] == "inascreen":
            key += ", proper" if rec["proper"] else (", tangential" if rec["tangential"] else "")
        counts[key] = counts.get(key, 0) + 1

    identities = {}

    def note(name, value, index, limit):
        cur = identities.get(name)
        if cur is None or value > cur["max"]:
            identities[name] = {"max": value, "index": index, "tol": limit}

    for rec in records:
        for k, v in rec.get("residuals", {}).items():
            note(k, v, rec["index"], tol["residual"])
        for k, v in rec.get("gw_residuals", {}).items():
            note(k, v, rec["index"], tol["gw"])

    structure = None
    if verify:
        vr = validate_structure(setup.S, setup.trials, tol["residual"], setup.seed)
        structure = vr.to_dict()
        for k, v in vr.residuals.items():
            note(f"structure.{k}", v, None, tol["residual"])
    for item in identities.values():
        item["pass"] = item["max"] <= item["tol"]

    ok = all(_record_ok(r, tol, verify) for r in records)
    if structure is not None:
        ok &= structure["passed"]
    summary = {"class_counts": counts,
               "max_residuals": {k: v["max"] for k, v in identities.items()},
               "pass": bool(ok)}
    if verify:
        summary["identities"] = identities
    report = {"command": "verify" if verify else "classify", "config": cfg,
              "records": records, "summary": summary}
    if structure is not None:
        report["structure"] = structure
    return report, EXIT_OK if ok else EXIT_FAIL


def frame_dump(cfg: dict, point) -> tuple[dict, int]:
    setup = Setup(cfg)
    tol = setup.tol["null"]
    point = np.asarray(point, dtype=float)
    if point.shape != (setup.S.dim,):
        raise ConfigError(f"--point needs {setup.S.dim} coordinates, got {point.size}")
    try:
        frame = build_null_frame(setup.S, setup.H, point, setup.policy, tol)
        dec = decompose_zeta(setup.S, frame, tol)
        cls = classify(dec, tol)
    except LightlikeError as exc:
        return {"command": "frame", "point": point, "error": _error(exc)}, EXIT_FAIL
    out = frame.to_dict()
    out.update({"command": "frame", "w_prime": dec.Wprime, "f1": dec.f1, "f2": dec.f2,
                "lambda": dec.lam, "class": cls.label, "tangential": cls.tangential,
                "proper": cls.proper,
                "dprime_invariant": check_dprime_invariance(setup.S, frame, tol).invariant})
    return out, EXIT_OK


# -- entry point ------------------------------------------------------------

def _parse_point(text: str):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help="null and residual tolerance")
    common.add_argument("--fd-step", type=float, help="finite-difference step")
    common.add_argument("--seed", type=int, help="seed for sampling and random trials")

    parser = argparse.ArgumentParser(prog="lightlike",
                                     description="Null frames and structure-field position "
                                                 "on lightlike hypersurfaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("classify", "classify every configured point"),
                       ("verify", "classify and check every identity, GW included")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("config")
    p = sub.add_parser("frame", parents=[common], help="dump the null frame at one point")
    p.add_argument("config")
    p.add_argument("--point", type=_parse_point, required=True,
                   help="x1,...,xm (use --point=-1,... for a leading minus)")
    p = sub.add_parser("examples", help="list or write the bundled example configs")
    p.add_argument("--write", metavar="DIR", help="write each example as DIR/<name>.json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    out = sys.stdout
    try:
        if args.command == "examples":
            if args.write:
                dest = Path(args.write)
                dest.mkdir(parents=True, exist_ok=True)
                for name, cfg in EXAMPLES.items():
                    (dest / f"{name}.json").write_text(dumps(cfg))
            out.write(dumps({"examples": sorted(EXAMPLES)}))
            return EXIT_OK
        cfg = normalize_config(load_config(args.config), args.tol, args.fd_step, args.seed)
        if args.command == "frame":
            report, code = frame_dump(cfg, args.point)
        else:
            report, code = run(cfg, verify=args.command == "verify")
    except ConfigError as exc:
        print(f"lightlike: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out.write(dumps(report))
    if code != EXIT_OK:
        print("lightlike: one or more checks failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
