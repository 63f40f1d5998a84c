import math
import os

import numpy as np
import pytest

import ellipticity_lab as el

DATA = os.environ.get("ELLIPTICITY_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def choi_lam_terms(alpha7=-1.0):
    terms = []
    for s in range(3):
        u = np.zeros((3, 3))
        u[s, s] = 1.0
        terms.append((2.0, u))
    for s in range(3):
        u = np.zeros((3, 3))
        u[s, (s + 1) % 3] = 1.0
        terms.append((1.0, u))
    terms.append((alpha7, np.eye(3)))
    return terms


def test_tensor_round_trip_and_symmetry():
    a = el.tensor_choi_lam(1.0)
    arr = a.array()
    assert arr.shape == (3, 3, 3, 3)
    assert np.array_equal(arr, arr.transpose(1, 0, 2, 3))
    assert el.Elast4(arr) == a
    bad = np.zeros((3, 3, 3, 3))
    bad[0, 1, 0, 0] = 1.0
    with pytest.raises(el.SymmetryViolation):
        el.Elast4(bad)


def test_biquadratic_and_unfold():
    e = el.tensor_E()
    assert el.biquadratic(e, np.array([1.0, 0, 0]), np.array([0, 1.0, 0])) == pytest.approx(1.0)
    assert np.array_equal(el.unfold(e), np.eye(9))
    iso = el.tensor_isotropic(-3.0, 1.0)
    x = np.array([1.0, 0, 0])
    assert el.biquadratic(iso, x, x) == pytest.approx(-1.0)


def test_pocs_and_certificates():
    cx = el.tensor_mpsd_not_spsd()
    assert el.min_eigenvalue(cx) < 0
    cert = el.certify_mpsd(cx)
    assert cert["certificate"] == "CertifiedMPSD"
    assert cert["pocs"]["final_gap"] <= 1e-10
    assert el.run_pocs(el.tensor_choi_lam(1.0))["verdict"] == "GapPositive"
    assert el.certify_mpd(el.tensor_E(), epsilon=0.5)["certificate"] == "CertifiedMPD"
    with pytest.raises(el.InvalidEpsilon):
        el.certify_mpd(el.tensor_E(), epsilon=0.0)


def test_case2_choi_lam():
    rep = el.check_case(2, choi_lam_terms())
    assert rep["verdict"] == "MPSD"
    assert rep["eta_sup"] == pytest.approx(1.0, abs=1e-6)
    assert el.check_case(2, choi_lam_terms(-1.2))["verdict"] == "NotMPSD"
    with pytest.raises(el.CaseMismatch):
        el.check_case(3, choi_lam_terms())


def test_oracle_and_pipeline():
    assert el.oracle(el.tensor_E())["min_value"] == pytest.approx(1.0, abs=1e-12)
    iso = el.oracle(el.tensor_isotropic(-3.0, 1.0))
    assert iso["verdict"] == "NotMPSD"
    assert "witness" in iso
    rep = el.check(el.tensor_choi_lam(1.0), terms=choi_lam_terms())
    assert rep["overall"] == "MPSD"
    assert rep["provenance"] == "Case-2 theorem"


def test_file_io(tmp_path):
    path = str(tmp_path / "t.json")
    a = el.random_spd_tensor(3)
    el.save_tensor(a, path, "spd")
    assert el.load_tensor(path) == a
    assert el.is_spd(a)
    cl = el.load_tensor(os.path.join(DATA, "choi_lam_gamma1.json"))
    assert cl == el.tensor_choi_lam(1.0)
