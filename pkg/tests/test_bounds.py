import csv
import io
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import sample_shapes
from oracles import CHEEGER_UNIT_SQUARE, J01_SQUARED, cheeger_unit_square
from plapbounds.bounds import (
    CSV_COLUMNS,
    ball_eigenvalue,
    ball_upper,
    cheeger_lower,
    faber_krahn_lower,
    geometric_check,
    gns_theta,
    hardy_lower,
    hersch_protter_lower,
    isoperimetric_lower,
    isoperimetric_upper,
    pi_p_value,
    superhomogeneous_lower,
    verdict,
    verdicts_to_csv,
    verdicts_to_json,
)
from plapbounds.exceptions import InadmissibleExponent
from plapbounds.geometry import ShapeFamily, inradius

PI2 = math.pi**2


def test_hersch_protter_values():
    assert hersch_protter_lower(2, 0.5, source="reference").value == pytest.approx(PI2, rel=1e-14)
    assert hersch_protter_lower(2, 1.0, source="reference").value == pytest.approx(PI2 / 4, rel=1e-14)
    # default source is the 1D estimate, slightly above the closed form
    est = hersch_protter_lower(2, 0.5).value
    assert PI2 <= est == pytest.approx(PI2, rel=1e-5)
    assert hersch_protter_lower(2, 0.5).inputs["pi_p_source"] == "estimate"


def test_hardy_values():
    assert hardy_lower(2, 0.5).value == pytest.approx(1.0, rel=1e-14)
    # both constants have p-th roots tending to one, so the rooted ratio approaches one
    def rooted(p):
        return (hardy_lower(p, 1.0).value / hersch_protter_lower(p, 1.0, source="reference").value) ** (1 / p)

    assert 0.75 < rooted(20) < 1.0
    assert rooted(5) < rooted(20) < rooted(50)
    assert rooted(50) > 0.9


def test_ball_upper_value():
    rep = ball_upper(2, 1.0, 5.7832)
    assert rep.value == pytest.approx(5.7832, rel=1e-14)
    assert rep.side == "upper"
    assert ball_upper(2, 0.5).value == pytest.approx(4 * J01_SQUARED, rel=1e-12)


def test_ball_eigenvalue_p2_exact():
    value, prov = ball_eigenvalue(2.0)
    assert value == pytest.approx(J01_SQUARED, rel=1e-14)
    assert prov["source"] == "bessel j01^2"


def test_faber_krahn_values():
    assert faber_krahn_lower(2, 2, math.pi, 5.7832).value == pytest.approx(5.7832, rel=1e-14)
    assert faber_krahn_lower(2, 2, 2.0, 5.7832).value == pytest.approx(math.pi * 5.7832 / 2, rel=1e-14)
    assert faber_krahn_lower(2, 2, 2.0, 5.7832).value == pytest.approx(9.08, abs=0.01)
    with pytest.raises(ValueError):
        faber_krahn_lower(2, 3, 1.0)


def test_isoperimetric_values():
    assert isoperimetric_lower(2, 2, 4.0, 1.0, source="reference").value == pytest.approx(PI2, rel=1e-14)
    up = isoperimetric_upper(2, 4.0, 1.0, source="reference").value
    assert up == pytest.approx(4 * PI2, rel=1e-14)
    assert up > 2 * PI2
    rect = isoperimetric_upper(2, 18.0, 8.0, source="reference").value
    assert rect == pytest.approx((math.pi / 2) ** 2 * (18 / 8) ** 2, rel=1e-14)
    assert rect == pytest.approx(12.49, abs=0.01)
    assert rect > PI2 * (1 + 1 / 64)


def test_cheeger_values():
    assert cheeger_lower(2, 4.0, 1.0).value == 2.0
    assert cheeger_unit_square() == pytest.approx(CHEEGER_UNIT_SQUARE, rel=1e-10)
    assert CHEEGER_UNIT_SQUARE >= cheeger_lower(2, 4.0, 1.0).value


def test_superhomogeneous():
    rep = superhomogeneous_lower(2, 4, 2, 0.5)
    assert rep.inputs["theta"] == pytest.approx(0.5)
    assert rep.inputs["R_exponent"] == pytest.approx(1.0)
    assert "non-sharp constant" in rep.notes
    same = superhomogeneous_lower(2, 2, 2, 0.5, source="reference")
    assert same.value == pytest.approx(hersch_protter_lower(2, 0.5, source="reference").value, rel=1e-14)
    assert gns_theta(3, 3, 2) == 1.0
    with pytest.raises(InadmissibleExponent):
        superhomogeneous_lower(2, 1.5, 2, 0.5)


@settings(max_examples=50, deadline=None)
@given(st.floats(1.1, 20.0), st.floats(0.05, 20.0), st.floats(0.1, 10.0))
def test_homogeneity(p, R, t):
    for make in (
        lambda r: hersch_protter_lower(p, r, source="reference"),
        lambda r: hardy_lower(p, r),
        lambda r: ball_upper(p, r, 3.0),
    ):
        assert make(t * R).value == pytest.approx(t**-p * make(R).value, rel=1e-10)
    V, P = R * R, 4 * R
    assert isoperimetric_lower(p, 2, t * P, t * t * V, source="reference").value == pytest.approx(
        t**-p * isoperimetric_lower(p, 2, P, V, source="reference").value, rel=1e-10
    )


@settings(max_examples=50, deadline=None)
@given(st.floats(1.05, 50.0))
def test_hardy_below_hersch_protter(p):
    assert hardy_lower(p, 1.0).value < hersch_protter_lower(p, 1.0, source="reference").value


@pytest.mark.parametrize("p", [1.2, 1.5, 2.0, 3.0, 8.0, 30.0])
def test_pi_p_estimate_vs_reference(p):
    est, ref = pi_p_value(p), pi_p_value(p, "reference")
    assert est == pytest.approx(ref, rel=5e-3)
    assert est >= ref * (1 - 1e-12)


@pytest.mark.parametrize("name", sorted(sample_shapes()))
def test_ordering_chain(name):
    poly = sample_shapes()[name]
    R, P, V = inradius(poly), poly.perimeter, poly.area
    for p in (1.5, 2.0, 4.0):
        hardy = hardy_lower(p, R).value
        hp = hersch_protter_lower(p, R, source="reference").value
        iso_lo = isoperimetric_lower(p, 2, P, V, source="reference").value
        iso_up = isoperimetric_upper(p, P, V, source="reference").value
        # R <= N V / P makes the isoperimetric form the weaker lower bound
        assert hardy <= hp and iso_lo <= hp * (1 + 1e-12)
        assert hp < iso_up
    assert geometric_check(R, 2, P, V).passed


@pytest.mark.parametrize("alpha", [0.5, 0.1, 0.01, 1e-4])
def test_geometric_tight_on_pyramids(alpha):
    s = ShapeFamily.collapsing_pyramid(2, alpha)
    v = geometric_check(s.inradius, 2, s.perimeter, s.measure)
    assert v.passed
    assert v.measured <= v.report.value


def test_geometric_equality_for_tangential_polygons():
    # every triangle has an incircle, so V = R P / 2 holds exactly
    for alpha in (0.5, 0.1, 0.01, 1e-4):
        s = ShapeFamily.collapsing_pyramid(2, alpha)
        assert (s.measure / s.perimeter) / (s.inradius / 2) == pytest.approx(1.0, rel=1e-12)
    rect = sample_shapes()["rectangle"]
    assert (rect.area / rect.perimeter) / (inradius(rect) / 2) > 1.4


def test_verdicts():
    hp = hersch_protter_lower(2, 0.5, source="reference")
    v = verdict(hp, 19.74)
    assert v.passed and v.margin == pytest.approx(1.0, abs=1e-3)
    assert verdict(ball_upper(2, 0.5, J01_SQUARED), 19.74).passed
    assert ball_upper(2, 0.5, J01_SQUARED).value == pytest.approx(23.13, abs=0.01)
    bad = verdict(hp, 5.0)
    assert not bad.passed and bad.margin < 0
    # the upper allowance is 2%
    up = ball_upper(2, 1.0, 10.0)
    assert verdict(up, 10.19).passed
    assert not verdict(up, 10.21).passed


def test_report_validation():
    with pytest.raises(ValueError):
        hersch_protter_lower(2, 0.0)
    with pytest.raises(ValueError):
        hersch_protter_lower(2, 1.0, source="guess")
    with pytest.raises(ValueError):
        verdict(hardy_lower(2, 1.0), -1.0)


def test_serialization():
    vs = [
        verdict(hersch_protter_lower(2, 0.5, source="reference"), 19.74),
        verdict(hardy_lower(2, 0.5), 19.74),
        verdict(ball_upper(2, 0.5, J01_SQUARED), 19.74),
    ]
    text = verdicts_to_csv(vs)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert [r["pass"] for r in rows] == ["true"] * 3
    assert float(rows[0]["value"]) == pytest.approx(PI2, rel=1e-15)
    data = json.loads(verdicts_to_json(vs))
    assert data[0]["inputs"]["R"] == 0.5
    assert data[2]["side"] == "upper"
