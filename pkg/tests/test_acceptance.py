"""The eleven acceptance criteria, one test each.

Every test records a one-line PASS/FAIL verdict; the lines are printed as
they are produced and again in the pytest terminal summary.
Run standalone with ``python3 tests/test_acceptance.py``.
"""

import itertools
import json
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from lightlike.classify import ASCREEN, INASCREEN, classify, decompose_zeta, verify_calin
from lightlike.cli import EXAMPLES, normalize_config, run
from lightlike.gauss_weingarten import gw_convergence, second_fundamental, verify_gw_identities
from lightlike.hypersurface import NullCone, ScreenPolicy, build_null_frame
from lightlike.induced import induced_phi_omega, nonexistence_witness, verify_hermitian
from lightlike.presets import fixture_a, fixture_b, sample_points
from lightlike.reporting import dumps
from lightlike.structure import standard_model, validate_structure

TOL = 1e-9
CRITERION_6 = ("phi_squared", "omega_phi_eta", "g_tilde_hermitian", "g_tilde_xi", "g_tilde_phi_xi")


def verdict(k: int, ok: bool, detail: str):
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    assert ok, line


def analyse(S, H, p, policy):
    frame = build_null_frame(S, H, p, policy)
    dec = decompose_zeta(S, frame)
    cls = classify(dec)
    out = {"frame": frame, "dec": dec, "cls": cls}
    if cls.label == INASCREEN and cls.proper:
        ind = induced_phi_omega(S, frame, dec)
        out["herm"] = verify_hermitian(ind, trials=1000)
        out["witness"] = nonexistence_witness(ind, dec)
    return out


@pytest.fixture(scope="module")
def analysed(corpus):
    return [(case, analyse(case.S, case.H, case.p, case.policy)) for case in corpus]


def test_criterion_01_ambient_axioms():
    start = time.perf_counter()
    worst, models = 0.0, 0
    for n in (1, 2, 3):
        for signs in itertools.product((-1, 1), repeat=n):
            if -1 not in signs:
                continue
            rep = validate_structure(standard_model(n, signs), trials=1000, tol=1e-12)
            worst = max(worst, max(rep.residuals.values()))
            models += 1
    elapsed = time.perf_counter() - start
    verdict(1, worst <= 1e-12 and elapsed < 5.0,
            f"{models} models, max axiom residual {worst:.1e}, {elapsed:.2f} s")


def test_criterion_02_frame_contract(analysed):
    worst, sigma = 0.0, np.inf
    for case, r in analysed:
        res = r["frame"].invariant_residuals(case.S)
        sigma = min(sigma, res.pop("screen_sigma_min"))
        worst = max(worst, max(res.values()))
    verdict(2, worst <= TOL and sigma > TOL,
            f"{len(analysed)} frames, max invariant residual {worst:.1e}, "
            f"min screen singular value {sigma:.2e}")


def test_criterion_03_unit_identity(analysed):
    worst = max(r["dec"].identities["unit"] for _, r in analysed)
    verdict(3, worst <= TOL, f"max |g(W,W) + 2ab - 1| = {worst:.1e} over {len(analysed)}")


def test_criterion_04_dichotomy(analysed):
    labels = {}
    for case, r in analysed:
        labels[case.name] = r["cls"]
    counts = {}
    for c in labels.values():
        counts[c.label] = counts.get(c.label, 0) + 1
    S5 = standard_model(2, (-1, 1))
    o = np.zeros(5)
    fa = analyse(S5, fixture_a(S5), o, ScreenPolicy())
    fb = analyse(S5, fixture_b(S5), o, ScreenPolicy())
    fz = analyse(S5, fixture_b(S5), o, ScreenPolicy("auxiliary-vector", S5.zeta))
    ok = (all(c.label in (ASCREEN, INASCREEN) for c in labels.values())
          and fa["cls"].label == INASCREEN and fa["cls"].tangential
          and fb["cls"].label == INASCREEN and fb["cls"].proper
          and abs(fb["dec"].a - 0.25) <= TOL and abs(fb["dec"].b - 1.0) <= TOL
          and fz["cls"].label == ASCREEN and abs(fz["dec"].lam + 2.0) <= TOL)
    verdict(4, ok, f"labels {counts}, no Inconsistent; fixture B a={fb['dec'].a:.12g} "
                   f"b={fb['dec'].b:.12g}; ascreen lambda={fz['dec'].lam:.12g}")


def test_criterion_05_identity_residuals(analysed):
    names = ("mu2_xi", "mu2_N", "c4_f1", "c4_f2", "gram_det")
    worst = {k: max(r["dec"].identities[k] for _, r in analysed) for k in names}
    iff = all((r["cls"].label == ASCREEN) == (abs(r["dec"].two_ab_minus_one) <= TOL)
              for _, r in analysed)
    verdict(5, max(worst.values()) <= TOL and iff,
            f"max {max(worst, key=worst.get)} = {max(worst.values()):.1e}; "
            f"ascreen <=> |2ab-1| <= 1e-9 on all: {iff}")


def test_criterion_06_induced_structure(analysed):
    proper = [r for _, r in analysed if "herm" in r]
    worst = max(max(r["herm"][k] for k in CRITERION_6) for r in proper)
    names = {case.name for case, r in analysed if "herm" in r}
    verdict(6, worst <= TOL and "fixture-b" in names,
            f"{len(proper)} proper-inascreen frames x 1000 tangent pairs, "
            f"max residual {worst:.1e}")


def test_criterion_07_nonexistence_witnesses(analysed):
    proper = [r for _, r in analysed if "witness" in r]
    dev = max(r["witness"]["omega_phi_xi_minus_b"] for r in proper)
    herm = max(r["witness"]["hermitian_defect_minus_b2"] for r in proper)
    bmin = min(abs(r["dec"].b) for r in proper)
    verdict(7, dev <= TOL and herm <= TOL and bmin > TOL,
            f"|omega(phi xi) - b| <= {dev:.1e}, |defect - b^2| <= {herm:.1e}, "
            f"min |b| = {bmin:.3f}")


def test_criterion_08_gauss_weingarten():
    start = time.perf_counter()
    S5 = standard_model(2, (-1, 1))
    o = np.zeros(5)
    flat = 0.0
    for H, pol in ((fixture_a(S5), None), (fixture_b(S5), None),
                   (fixture_b(S5), ScreenPolicy("auxiliary-vector", S5.zeta))):
        d = second_fundamental(S5, H, o, pol)
        flat = max(flat, *(float(np.abs(x).max()) for x in (d.B, d.C, d.tau, d.A_N, d.A_star_xi)))
    cone = NullCone.for_structure(S5)
    worst, second = 0.0, True
    for p in sample_points(cone, 5, 16, 7):
        res = verify_gw_identities(second_fundamental(S5, cone, p, h=1e-5))
        worst = max(worst, *(res[k] for k in ("symmetry", "shape_B", "shape_C", "nabla_g")))
        second &= gw_convergence(S5, cone, p)["second_order"]
    elapsed = time.perf_counter() - start
    verdict(8, flat <= TOL and worst <= 1e-5 and second and elapsed < 30.0,
            f"affine max {flat:.1e}; null cone 16 points max {worst:.1e} at h=1e-5, "
            f"O(h^2) decay {second}; {elapsed:.2f} s")


def test_criterion_09_scale_covariance(analysed):
    worst_ab, worst_res, label_ok = 0.0, 0.0, True
    for case, r in analysed:
        for alpha in (0.5, 2.0, -3.0):
            s = analyse(case.S, case.H.scaled(alpha), case.p, case.policy)
            label_ok &= (s["cls"].label == r["cls"].label)
            worst_ab = max(worst_ab, abs(s["dec"].a * s["dec"].b - r["dec"].a * r["dec"].b))
            if "herm" in r:
                worst_res = max(worst_res, *(abs(s["herm"][k] - r["herm"][k]) for k in CRITERION_6))
    verdict(9, label_ok and worst_ab <= TOL and worst_res <= TOL,
            f"alpha in (1/2, 2, -3): labels kept {label_ok}, max |d(ab)| {worst_ab:.1e}, "
            f"max residual change {worst_res:.1e}")


def test_criterion_10_calin_consistency(analysed):
    tangential = [r for case, r in analysed
                  if case.policy.kind == "basis-scan" and abs(r["dec"].b) <= TOL]
    bad = [r for r in tangential if abs(r["dec"].a) > TOL]
    S5 = standard_model(2, (-1, 1))
    cone = NullCone.for_structure(S5)
    rep = verify_calin(S5, cone, [np.array([1.0, 0, 1, 0, 0]), np.array([0, 1.0, 1, 0, 0])])
    verdict(10, not bad and rep["passed"] and rep["tangential_points"] == 2,
            f"{len(tangential)} corpus frames with b = 0, violations {len(bad)}; "
            f"null-cone points with z = 0: {rep['tangential_points']} checked")


def test_criterion_11_determinism(tmp_path):
    same = True
    for name, cfg in EXAMPLES.items():
        a = dumps(run(normalize_config(cfg), verify=True)[0])
        b = dumps(run(normalize_config(cfg), verify=True)[0])
        same &= a == b
    path = tmp_path / "null-cone.json"
    path.write_text(json.dumps(EXAMPLES["null-cone"]))
    outs = [subprocess.run([sys.executable, "-m", "lightlike", "verify", str(path)],
                           capture_output=True, check=False).stdout for _ in range(2)]
    same &= outs[0] == outs[1] and len(outs[0]) > 0
    verdict(11, same, f"{len(EXAMPLES)} example configs twice in-process and null-cone twice "
                      f"in separate processes: byte-identical {same}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
