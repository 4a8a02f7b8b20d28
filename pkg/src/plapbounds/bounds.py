"""Closed-form eigenvalue bounds and verdicts against measured values.

Every function returns a :class:`BoundReport`; :func:`verdict` compares a
report with a measured eigenvalue. Lower bounds are checked with zero slack
against discrete eigenvalues, which already overestimate the continuum
ones. Upper bounds get a 2% allowance for the same reason.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

from scipy.special import jn_zeros

from ._validation import check_exponent, check_positive, check_q_admissible
from .eigensolver import SolverConfig, minimize_lambda_p
from .exceptions import InadmissibleExponent
from .geometry import ConvexPolygon
from .poincare1d import pi_p_estimate, pi_p_reference

LOWER_SLACK = 0.0
UPPER_SLACK = 0.02
GEOMETRIC_TOL = 1e-12
PI_P_GRID = 2000
BALL_POLYGON_SIDES = 256
BALL_MESH_H = 1.0 / 64.0

CSV_COLUMNS = ("name", "side", "value", "measured", "margin", "pass", "citation")


@dataclass(frozen=True)
class BoundReport:
    """One evaluated inequality.

    ``side`` says whether ``value`` bounds the target quantity from below or
    above. ``inputs`` records every number that went into ``value``.
    """

    name: str
    side: str
    value: float
    inputs: dict
    citation: str
    notes: tuple = ()

    def __post_init__(self):
        if self.side not in ("lower", "upper"):
            raise ValueError(f"side must be 'lower' or 'upper', got {self.side!r}")
        if not (math.isfinite(self.value) and self.value > 0):
            raise ValueError(f"bound value must be finite and positive, got {self.value}")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Verdict:
    report: BoundReport
    measured: float
    margin: float
    passed: bool
    slack: float = 0.0

    def row(self):
        r = self.report
        return {
            "name": r.name,
            "side": r.side,
            "value": r.value,
            "measured": self.measured,
            "margin": self.margin,
            "pass": self.passed,
            "citation": r.citation,
        }

    def to_dict(self):
        d = self.row()
        d["slack"] = self.slack
        d["inputs"] = dict(self.report.inputs)
        d["notes"] = list(self.report.notes)
        return d


# -- reference constants --------------------------------------------------------


@lru_cache(maxsize=None)
def _pi_p_estimate_cached(p, n):
    return pi_p_estimate(p, n)


def pi_p_value(p, source="estimate", n=PI_P_GRID):
    """pi_p from the 1D solver (``"estimate"``) or the closed form (``"reference"``)."""
    if source == "estimate":
        return _pi_p_estimate_cached(float(check_exponent(p)), int(n))
    if source == "reference":
        return pi_p_reference(p)
    raise ValueError(f"unknown pi_p source {source!r}")


@lru_cache(maxsize=None)
def _ball_eigenvalue_cached(p, sides, h):
    # the positive eigenfunction is unique, so restarts buy nothing here
    res = minimize_lambda_p(ConvexPolygon.regular(sides), p, SolverConfig(p=p, n_restarts=0), h=h)
    return res.value, res.converged


def ball_eigenvalue(p, *, sides=BALL_POLYGON_SIDES, h=BALL_MESH_H, measured=False):
    """lambda_p of the unit disk with its provenance.

    For p = 2 the exact value j_{0,1}^2 is used unless ``measured`` is set.
    Otherwise the value is solved on an inscribed regular ``sides``-gon,
    which is biased upward. Returns ``(value, provenance)``.
    """
    p = check_exponent(p)
    if p == 2.0 and not measured:
        return float(jn_zeros(0, 1)[0] ** 2), {"source": "bessel j01^2"}
    value, converged = _ball_eigenvalue_cached(p, int(sides), float(h))
    return value, {"source": "solver", "polygon_sides": int(sides), "h": float(h), "converged": converged}


def _resolve_pi_p(p, pi_p, source):
    if pi_p is not None:
        return float(pi_p), "given"
    return pi_p_value(p, source), source


# -- bounds -------------------------------------------------------------------------


def hersch_protter_lower(p, R, *, pi_p=None, source="estimate"):
    """(pi_p / 2)^p / R^p, valid for convex sets of inradius R."""
    p = check_exponent(p)
    R = check_positive(R, "R")
    pp, src = _resolve_pi_p(p, pi_p, source)
    return BoundReport(
        name="hersch_protter",
        side="lower",
        value=(pp / 2.0) ** p / R**p,
        inputs={"p": p, "R": R, "pi_p": pp, "pi_p_source": src},
        citation="lambda_p >= (pi_p/2)^p / R^p",
    )


def hardy_lower(p, R):
    p = check_exponent(p)
    R = check_positive(R, "R")
    return BoundReport(
        name="hardy",
        side="lower",
        value=((p - 1.0) / p) ** p / R**p,
        inputs={"p": p, "R": R},
        citation="lambda_p >= ((p-1)/p)^p / R^p",
    )


def ball_upper(p, R, lambda_ball=None, *, provenance=None):
    """lambda_p(B_1) / R^p: the inball is a subset, so its eigenvalue is larger."""
    p = check_exponent(p)
    R = check_positive(R, "R")
    if lambda_ball is None:
        lambda_ball, provenance = ball_eigenvalue(p)
    lambda_ball = check_positive(lambda_ball, "lambda_ball")
    return BoundReport(
        name="ball_upper",
        side="upper",
        value=lambda_ball / R**p,
        inputs={"p": p, "R": R, "lambda_ball": lambda_ball, "lambda_ball_source": (provenance or {"source": "given"})},
        citation="lambda_p <= lambda_p(B_1) / R^p",
    )


def faber_krahn_lower(p, N, V, lambda_ball=None, ball_volume=None, *, provenance=None):
    """|B|^(p/N) lambda_p(B) / |Omega|^(p/N); defaults to the unit disk for N = 2."""
    p = check_exponent(p)
    V = check_positive(V, "V")
    if lambda_ball is None:
        if N != 2:
            raise ValueError("lambda_ball must be supplied for N != 2")
        lambda_ball, provenance = ball_eigenvalue(p)
    if ball_volume is None:
        ball_volume = math.pi ** (N / 2.0) / math.gamma(N / 2.0 + 1.0)
    return BoundReport(
        name="faber_krahn",
        side="lower",
        value=ball_volume ** (p / N) * lambda_ball / V ** (p / N),
        inputs={
            "p": p, "N": N, "V": V, "lambda_ball": lambda_ball, "ball_volume": ball_volume,
            "lambda_ball_source": (provenance or {"source": "given"}),
        },
        citation="lambda_p >= |B|^(p/N) lambda_p(B) / |Omega|^(p/N)",
    )


def isoperimetric_lower(p, N, P, V, *, pi_p=None, source="estimate"):
    p = check_exponent(p)
    P, V = check_positive(P, "P"), check_positive(V, "V")
    pp, src = _resolve_pi_p(p, pi_p, source)
    return BoundReport(
        name="isoperimetric_lower",
        side="lower",
        value=(pp / (2.0 * N)) ** p * (P / V) ** p,
        inputs={"p": p, "N": N, "P": P, "V": V, "pi_p": pp, "pi_p_source": src},
        citation="lambda_p >= (pi_p/(2N))^p (P/|Omega|)^p",
    )


def isoperimetric_upper(p, P, V, *, pi_p=None, source="estimate"):
    """Strict upper bound (pi_p / 2)^p (P / V)^p for bounded convex sets."""
    p = check_exponent(p)
    P, V = check_positive(P, "P"), check_positive(V, "V")
    pp, src = _resolve_pi_p(p, pi_p, source)
    return BoundReport(
        name="isoperimetric_upper",
        side="upper",
        value=(pp / 2.0) ** p * (P / V) ** p,
        inputs={"p": p, "P": P, "V": V, "pi_p": pp, "pi_p_source": src},
        citation="lambda_p < (pi_p/2)^p (P/|Omega|)^p",
    )


def cheeger_lower(N, P, V):
    """P / (N V), a lower bound for the Cheeger constant of a convex set."""
    P, V = check_positive(P, "P"), check_positive(V, "V")
    return BoundReport(
        name="cheeger",
        side="lower",
        value=P / (N * V),
        inputs={"N": N, "P": P, "V": V},
        citation="h_1 >= P / (N |Omega|)",
    )


def gns_theta(p, q, N):
    return N / q - N / p + 1.0


def superhomogeneous_lower(p, q, N, R, lambda_p_lower=None, *, pi_p=None, source="estimate"):
    """lambda_p_lower^theta with theta = N/q - N/p + 1 and a unit interpolation constant.

    The constant is not sharp, so the value is a scaling statement rather
    than a numeric certificate. ``q = p`` gives back the Hersch-Protter
    value; ``q < p`` raises :class:`InadmissibleExponent`.
    """
    p = check_exponent(p)
    R = check_positive(R, "R")
    q = check_q_admissible(p, q, N)
    if q < p:
        raise InadmissibleExponent(f"q={q} < p={p}: no inradius lower bound in the sub-homogeneous range")
    if lambda_p_lower is None:
        lambda_p_lower = hersch_protter_lower(p, R, pi_p=pi_p, source=source).value
    theta = gns_theta(p, q, N)
    return BoundReport(
        name="superhomogeneous",
        side="lower",
        value=lambda_p_lower**theta,
        inputs={
            "p": p, "q": q, "N": N, "R": R, "lambda_p_lower": lambda_p_lower,
            "theta": theta, "R_exponent": N * p / q - N + p,
        },
        citation="lambda_{p,q} >= C / R^(Np/q - N + p), C = 1",
        notes=("non-sharp constant",),
    )


# -- verdicts ------------------------------------------------------------------------


def margin(report: BoundReport, measured):
    if report.side == "lower":
        return (measured - report.value) / report.value
    return (report.value - measured) / report.value


def verdict(report: BoundReport, measured, slack=None) -> Verdict:
    """Compare a bound with a measured value; pass iff margin >= -slack."""
    measured = check_positive(measured, "measured")
    if slack is None:
        slack = LOWER_SLACK if report.side == "lower" else UPPER_SLACK
    m = margin(report, measured)
    return Verdict(report=report, measured=measured, margin=m, passed=bool(m >= -slack), slack=slack)


def geometric_check(R, N, P, V) -> Verdict:
    """R / N <= V / P for convex sets (up to 1e-12 relative)."""
    R, P, V = check_positive(R, "R"), check_positive(P, "P"), check_positive(V, "V")
    rep = BoundReport(
        name="geometric",
        side="upper",
        value=V / P,
        inputs={"R": R, "N": N, "P": P, "V": V},
        citation="R/N <= |Omega|/P",
    )
    return verdict(rep, R / N, slack=GEOMETRIC_TOL)


# -- serialization ----------------------------------------------------------------------


def verdicts_to_csv(verdicts, fh=None):
    """Write verdict rows with the fixed column order; returns the text."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for v in verdicts:
        row = v.row()
        row["value"] = repr(float(row["value"]))
        row["measured"] = repr(float(row["measured"]))
        row["margin"] = repr(float(row["margin"]))
        row["pass"] = str(row["pass"]).lower()
        w.writerow(row)
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def verdicts_to_json(verdicts):
    return json.dumps([v.to_dict() for v in verdicts], indent=2, default=str)
