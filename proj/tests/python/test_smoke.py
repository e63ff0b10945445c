import math

import pytest

import arealaw

TFIM = """
model:
  name: tfim
  params: {J: 1.0, g: 2.0}
  lattice: {d: 1, n: 6, boundary: periodic}
grid: {min: 0.05, max: 10, points: 30}
regions:
  l: [2, 3]
"""


def test_constants():
    assert arealaw.prop1_constant("polynomial", 1.0, 1.0, 1.0, 2.0, 4) == 4.0
    assert arealaw.prop1_constant("exponential", 1.0, 1.0, 1.0, 2.0, 1) == 6.0
    assert arealaw.pepo_eta(1.0, 1.0, 2.0, 1.0, 4, 1) == pytest.approx(0.25)


def test_spectrum():
    sp = arealaw.Spectrum.from_config(TFIM)
    assert sp.n_sites == 6
    assert sp.degeneracy == 1
    assert sp.eigenvalues[0] == 0.0
    assert sp.gap > 1.0
    T = 0.7
    h = 1e-5 * T
    du = (sp.energy_density(T + h) - sp.energy_density(T - h)) / (2 * h)
    assert sp.specific_heat(T) == pytest.approx(du, rel=1e-6)
    assert math.exp(sp.log_specific_heat(T)) == pytest.approx(sp.specific_heat(T), rel=1e-12)
    tc = sp.solve_Tc(0.5)
    assert sp.energy_density(tc) == pytest.approx(0.5, rel=1e-8)
    assert sp.trace_distance_to_groundspace(1e-3) < 1e-12
    rows = sp.entropy_scan([2, 3])
    assert [r["l"] for r in rows] == [2, 3]


def test_run_config():
    rec = arealaw.run_config(TFIM)
    assert rec["tool"]["name"] == "arealaw"
    assert len(rec["certificates"]) == 2
    assert all(c["verdict"] == "holds" for c in rec["certificates"])


def test_fit_and_data_certificate():
    T = [0.02 + 0.005 * i for i in range(37)]
    c = [(1 / t) ** 2 * math.exp(-1 / t) / (1 + math.exp(-1 / t)) ** 2 for t in T]
    fit = arealaw.fit(T, c)
    assert abs(fit["delta"] - 1.0) < 0.05
    rec = arealaw.certify_from_data(T, c, 1, 1, 2, 8, 1.0, 0.1, 0.0, "exponential")
    assert rec["certificate"]["data_driven"] is True


def test_errors():
    with pytest.raises(ValueError):
        arealaw.Spectrum.from_config("model: {name: nope}")
    with pytest.raises(arealaw.UnsatisfiableError):
        arealaw.Spectrum.from_config(TFIM).solve_Tc(1e9)
