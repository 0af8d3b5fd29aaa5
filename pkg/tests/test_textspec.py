import math

import numpy as np
import pytest

import kobex as kx
from kobex import textspec

SAMPLE = """
# the corner-sum pair and a rate function
domain triangle2
  dim 2
  flags convex reinhardt
  radius 1.0
  constraint abs(z1) + abs(z2) - 1
end

domain curve_cap
  dim 2
  flags reinhardt
  radius 1.0
  constraint abs(z1)^2 + abs(z2) - 1
end

modulus sqrt_rate
  domain_end 1.0
  expr sqrt(r)
end

chart flat2
  dim 2
  base 0 0
  unitary 1 0 ; 0 1
  radius 0.5
  regularity c1_dini
  phi 0 * x
end
"""


def test_loads_all_kinds():
    objs = textspec.loads(SAMPLE)
    assert set(objs) == {"triangle2", "curve_cap", "sqrt_rate", "flat2"}
    assert isinstance(objs["triangle2"], kx.DomainSpec)
    assert isinstance(objs["sqrt_rate"], kx.ModulusOfContinuity)
    assert isinstance(objs["flat2"], kx.GraphChart)


def test_loaded_domain_matches_bundled(omega21):
    D = textspec.loads(SAMPLE)["triangle2"]
    assert D.is_convex and D.is_reinhardt
    z = kx.cpoint(0.3 * np.exp(0.4j), 0.2)
    assert bool(kx.contains(D, z)) == bool(kx.contains(omega21, z))
    got = kx.boundary_distance(D, z, method="reinhardt")
    assert got == pytest.approx((1 - 0.5) / math.sqrt(2.0), abs=1e-8)


def test_loaded_modulus_integrates():
    w = textspec.loads(SAMPLE)["sqrt_rate"]
    res = kx.dini_integral(w, 1.0)
    assert res.value == pytest.approx(2.0, abs=1e-6)


def test_loaded_chart_is_consistent():
    ch = textspec.loads(SAMPLE)["flat2"]
    rep = kx.chart_consistency(kx.halfspace(np.array([0.0, -1j]), 0.0), ch)
    assert rep["passes"]


def test_expression_powers_and_functions():
    fn = textspec.compile_expr("exp(-1/abs(z1)^2) - re(z2)", ["z1", "z2"])
    val = fn({"z1": np.array(0.5 + 0j), "z2": np.array(0.25 + 1j)})
    assert float(np.real(val)) == pytest.approx(math.exp(-4.0) - 0.25)


def test_expression_rejects_unknown_names():
    with pytest.raises(textspec.ParseError):
        textspec.compile_expr("z1 + q", ["z1"])


def test_expression_rejects_calls_and_attributes():
    for bad in ("__import__('os')", "z1.real", "open('x')", "(lambda: 1)()",
                "[1,2][0]", "z1 if 1 else 2"):
        with pytest.raises(textspec.ParseError):
            textspec.compile_expr(bad, ["z1"])


def test_unterminated_block():
    with pytest.raises(textspec.ParseError):
        textspec.loads("domain d\n  dim 2\n  constraint abs(z1) - 1\n")


def test_duplicate_names_rejected():
    text = SAMPLE + "\nmodulus sqrt_rate\n  domain_end 1.0\n  expr r\nend\n"
    with pytest.raises(textspec.ParseError):
        textspec.loads(text)


def test_bad_key_rejected():
    with pytest.raises(textspec.ParseError):
        textspec.loads("domain d\n  dim 2\n  color red\nend\n")


def test_load_from_file(tmp_path):
    path = tmp_path / "defs.kx"
    path.write_text(SAMPLE)
    objs = textspec.load(str(path))
    assert "triangle2" in objs
