"""One test per acceptance criterion, each at its stated tolerance.

Criteria 1-9 read the checks produced by ``confgeo verify all``; criterion 10
reruns the command and compares every output file byte for byte.
"""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import ACCEPTANCE_LINES

SEED = 7


def _verify_all(out: Path):
    cmd = [sys.executable, "-m", "confgeo.cli", "verify", "all", "--seed", str(SEED),
           "--out-dir", str(out)]
    res = subprocess.run(cmd, capture_output=True, text=True)
    return res.returncode, res.stdout


@pytest.fixture(scope="module")
def run(tmp_path_factory):
    out = tmp_path_factory.mktemp("verify-a")
    rc, log = _verify_all(out)
    reports = {p.name.split("__")[0]: json.loads(p.read_text())
               for p in out.glob("*__report.json")}
    return {"rc": rc, "log": log, "out": out, "reports": reports}


def _checks(run, scenario, *prefixes):
    found = [c for c in run["reports"][scenario]["checks"]
             if any(c["name"].startswith(p) for p in prefixes)]
    assert found, f"no {prefixes} checks on {scenario}"
    return found


def _record(n, title, checks):
    failed = [c for c in checks if not c["pass"]]
    status = "PASS" if not failed else "FAIL"
    extra = "" if not failed else "  failing: " + ", ".join(c["name"] for c in failed)
    line = f"{status} criterion {n}: {title} ({len(checks)} checks){extra}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failed, line


def test_criterion_01_conformal_invariance(run):
    _record(1, "third-order residual invariant under h -> e^(2x) h",
            _checks(run, "flat-circle", "invariance."))


def test_criterion_02_geodesic_integration(run):
    _record(2, "integrated flat circle stays on the unit circle with vanishing kappa",
            _checks(run, "flat-circle", "geodesic."))


def test_criterion_03_induced_metric_normal_form(run):
    _record(3, "induced metric deviation fits (2/3) kappa t^2, off-diagonal slope >= 3",
            _checks(run, "flat-circle", "normal-form."))


def test_criterion_04_k_decay(run):
    checks = _checks(run, "flat-parabola", "k-slope") + _checks(run, "flat-circle", "k-slope")
    _record(4, "|K| slope in [1.85, 2.15] on the parabola, >= 2.85 on the circle", checks)


def test_criterion_05_mean_curvature_contrast(run):
    _record(5, "wrong-v mean curvature limit within 2%, canonical slope >= 2",
            _checks(run, "flat-circle", "mean-curvature."))


def test_criterion_06_renormalized_area(run):
    checks = (_checks(run, "hemisphere-exact", "area.")
              + _checks(run, "flat-circle", "area.first-variation", "variation."))
    _record(6, "hemisphere area -2pi and c_-1 = 2pi, first variation, finite-difference variation",
            checks)


def test_criterion_07_tractor_identities(run):
    names = ("tractor.XX", "tractor.XU", "tractor.UA", "tractor.UU", "tractor.AA",
             "tractor.DA-integrated", "tractor.DA-perturbed")
    checks = []
    for sc in sorted(run["reports"]):
        if sc != "hemisphere-exact":
            checks += _checks(run, sc, *names)
    _record(7, "tractor identities on all scenarios, D_s A small on geodesics and large off them",
            checks)


def test_criterion_08_ambient_cross_checks(run):
    _record(8, "ambient graph matches surface jet, E-coefficients within 1%, round trip exact",
            _checks(run, "flat-circle", "ambient."))


def test_criterion_09_fg_metrics(run):
    checks = (_checks(run, "flat-circle", "fg.einstein-residual")
              + _checks(run, "sphere-great-circle", "fg.einstein-slope"))
    _record(9, "flat Einstein residual < 1e-8, sphere residual slope >= 2", checks)


def test_criterion_10_determinism(run, tmp_path):
    rc, log = _verify_all(tmp_path)
    first = {p.name: p.read_bytes() for p in sorted(run["out"].iterdir())}
    second = {p.name: p.read_bytes() for p in sorted(tmp_path.iterdir())}
    same = first == second and log == run["log"] and rc == run["rc"]
    checks = [{"name": "byte-identical outputs", "pass": same}]
    _record(10, f"repeated verify all --seed {SEED} is byte-identical ({len(first)} files)", checks)
