"""Parameter sweeps, pointwise Hardy checks and bound reports.

Each ``run_*`` function returns a list of row dicts with a fixed key order.
:func:`write_table` stores rows as CSV or JSON and draws a static SVG next
to them.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds as B
from .eigensolver import DiscreteField, SolverConfig, minimize_lambda_p, minimize_lambda_pq
from .geometry import ConvexPolygon, ShapeFamily, chebyshev_center, collapsing_pyramid, distance_to_boundary
from .mesh import triangulate

EXPERIMENTS = ("pyramid", "slab", "subhom", "pinfty", "hardy", "report")

CITATIONS = {
    "pyramid": "lim_{alpha->0} R^p lambda_p(C_alpha) = (pi_p/2)^p",
    "slab": "lambda_p(omega x R^{N-1}) = lambda_p(omega); lambda_p((0,1)) = pi_p^p",
    "subhom": "q < p: inf R^(Np/q-N+p) lambda_{p,q} = 0 over convex sets",
    "pinfty": "lim_{p->inf} lambda_p^(1/p) = 1/R",
    "hardy": "((p-1)/p)^p int |u/d|^p <= int |grad u|^p",
}


@dataclass
class SweepSpec:
    """What to run and where to write it."""

    experiment: str
    p: float = 2.0
    q: float | None = None
    alphas: list = field(default_factory=lambda: [0.8, 0.4, 0.2, 0.1])
    Ls: list = field(default_factory=lambda: [1.0, 2.0, 4.0, 8.0])
    ps: list = field(default_factory=lambda: [2.0, 5.0, 10.0, 20.0])
    h: float | None = None
    n_fields: int = 50
    seed: int = 0
    tol: float = 1e-10
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be 'csv' or 'json'")
        for name in ("alphas", "Ls", "ps"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be nonempty")

    def config(self, p, q=None, n_restarts=3):
        return SolverConfig(p=p, q=q, tol=self.tol, seed=self.seed, n_restarts=n_restarts)


def run_pyramid_sweep(p, alphas, *, h_per_alpha=1.0 / 40.0, config=None, pi_p_source="estimate"):
    """R^p lambda_p on the planar collapsing pyramids C_alpha.

    The mesh size is ``h_per_alpha * alpha`` so the height is resolved by
    the same number of cells at every alpha.
    """
    alphas = sorted((float(a) for a in alphas), reverse=True)
    if any(not 0 < a <= 1 for a in alphas):
        raise ValueError("alphas must lie in (0, 1]")
    target = (B.pi_p_value(p, pi_p_source) / 2.0) ** p
    rows = []
    for a in alphas:
        c = collapsing_pyramid(2, a)
        res = minimize_lambda_p(c.polygon, p, config, h=h_per_alpha * a)
        scaled = c.R**p * res.value
        rows.append(
            {
                "alpha": a, "h": h_per_alpha * a, "R": c.R, "lambda": res.value,
                "R^p*lambda": scaled, "target": target, "ratio": scaled / target,
                "converged": res.converged, "citation": CITATIONS["pyramid"],
            }
        )
    return rows


def run_slab_sweep(p, Ls, *, h=1.0 / 64.0, config=None, pi_p_source="estimate"):
    """lambda_p of the boxes L x 1 against the infinite-slab value pi_p^p."""
    Ls = sorted(float(L) for L in Ls)
    target = B.pi_p_value(p, pi_p_source) ** p
    rows = []
    for L in Ls:
        res = minimize_lambda_p(ShapeFamily.slab_section(2, L).polygon(), p, config, h=h)
        rows.append(
            {
                "L": L, "h": h, "lambda": res.value, "target": target, "gap": res.value / target - 1.0,
                "converged": res.converged, "citation": CITATIONS["slab"],
            }
        )
    return rows


def run_subhomogeneous(p, q, Ls, *, h=1.0 / 32.0, config=None):
    """lambda_{p,q} of the boxes L x 1, scaled to be invariant under dilation.

    The scaled column is R^(Np/q - N + p) lambda_{p,q}; for q < p it tends
    to zero as the boxes grow, for q = p it levels off.
    """
    Ls = sorted(float(L) for L in Ls)
    N = 2
    exponent = N * p / q - N + p
    rows = []
    for L in Ls:
        fam = ShapeFamily.slab_section(N, L)
        res = minimize_lambda_pq(fam.polygon(), p, q, config, h=h)
        R = fam.inradius
        rows.append(
            {
                "L": L, "h": h, "p": p, "q": q, "R": R, "lambda_pq": res.value, "R_exponent": exponent,
                "scaled": R**exponent * res.value, "converged": res.converged, "citation": CITATIONS["subhom"],
            }
        )
    return rows


def run_pinfty_trend(poly, ps, *, h=1.0 / 32.0, config=None, pi_p_source="estimate"):
    """lambda_p^(1/p) against 1/R for growing p."""
    poly = poly.polygon() if isinstance(poly, ShapeFamily) else poly
    R = chebyshev_center(poly.to_halfspaces()).radius
    rows = []
    for p in sorted(float(p) for p in ps):
        res = minimize_lambda_p(poly, p, config, h=h)
        root = res.value ** (1.0 / p)
        hp_root = B.pi_p_value(p, pi_p_source) / 2.0 / R
        rows.append(
            {
                "p": p, "h": h, "lambda": res.value, "lambda^(1/p)": root, "1/R": 1.0 / R,
                "gap": abs(root - 1.0 / R), "hp_root": hp_root, "above_hp": bool(root >= hp_root),
                "converged": res.converged, "citation": CITATIONS["pinfty"],
            }
        )
    return rows


def hardy_sides(mesh, field, p, poly):
    """Both sides of the Hardy inequality by the centroid rule.

    Returns ``(lhs, rhs)`` with lhs = ((p-1)/p)^p sum |T| |u(c)/d(c)|^p and
    rhs = sum |T| |grad u|^p.
    """
    u = field.values if isinstance(field, DiscreteField) else np.asarray(field, dtype=float)
    c = mesh.centroids
    d = distance_to_boundary(poly, c)
    uc = mesh.centroid_operator @ u
    Gx, Gy = mesh.gradient_operators
    grad = np.hypot(Gx @ u, Gy @ u)
    lhs = ((p - 1.0) / p) ** p * float(mesh.areas @ np.abs(uc / d) ** p)
    rhs = float(mesh.areas @ grad**p)
    return lhs, rhs


def random_dirichlet_fields(mesh, n, rng):
    """Seeded fields vanishing on the boundary: half nodal noise, half smooth modes."""
    free = ~mesh.boundary
    x = mesh.nodes
    span = np.ptp(x, axis=0).max()
    out = []
    for k in range(n):
        v = np.zeros(mesh.n_nodes)
        if k % 2 == 0:
            v[free] = rng.uniform(-1.0, 1.0, size=free.sum())
        else:
            kk = rng.normal(size=(3, 2)) * (2.0 * np.pi / span)
            ph = rng.uniform(0, 2 * np.pi, size=3)
            a = rng.normal(size=3)
            v[free] = (np.cos(x[free] @ kk.T + ph) @ a) + rng.uniform(-2, 2)
        out.append(DiscreteField(mesh, v))
    return out


def run_hardy_pointwise(poly, p, n_fields=50, *, h=None, seed=0, include_eigenfunction=True, config=None):
    """Check the Hardy inequality field by field.

    Fields: ``n_fields`` seeded random Dirichlet fields, one interior hat
    function and (optionally) the discrete first eigenfunction.
    """
    poly = poly.polygon() if isinstance(poly, ShapeFamily) else poly
    h = poly.diameter / 24.0 if h is None else h
    mesh = triangulate(poly, h)
    rng = np.random.default_rng(seed)
    fields = [("random", f) for f in random_dirichlet_fields(mesh, n_fields, rng)]
    interior = np.flatnonzero(~mesh.boundary)
    centre = chebyshev_center(poly.to_halfspaces()).center
    hat = np.zeros(mesh.n_nodes)
    hat[interior[np.argmin(np.linalg.norm(mesh.nodes[interior] - centre, axis=1))]] = 1.0
    fields.append(("hat", DiscreteField(mesh, hat)))
    if include_eigenfunction:
        fields.append(("eigenfunction", minimize_lambda_p(poly, p, config, mesh=mesh).field))
    rows = []
    for i, (kind, f) in enumerate(fields):
        lhs, rhs = hardy_sides(mesh, f, p, poly)
        rows.append(
            {
                "index": i, "kind": kind, "p": p, "lhs": lhs, "rhs": rhs,
                "margin": (rhs - lhs) / rhs, "pass": bool(lhs <= rhs), "citation": CITATIONS["hardy"],
            }
        )
    return rows


def shape_quantities(shape):
    """(polygon, R, P, V) for a planar shape."""
    if isinstance(shape, ShapeFamily):
        poly = shape.polygon()
        if shape.kind == "disk":
            return poly, shape.inradius, shape.perimeter, shape.measure
    else:
        poly = shape
    R = chebyshev_center(poly.to_halfspaces()).radius
    return poly, R, poly.perimeter, poly.area


def run_bounds_report(shape, p=2.0, h=None, *, r_scale=1.0, config=None, pi_p_source="estimate"):
    """Solve lambda_p on ``shape`` and grade every applicable bound.

    ``r_scale`` multiplies the inradius fed to the bounds, for fault
    injection. Returns ``(verdicts, result)``.
    """
    poly, R, P, V = shape_quantities(shape)
    if isinstance(shape, ShapeFamily) and shape.kind == "disk":
        # the polygonal stand-in is what gets solved, so grade against its geometry
        R = chebyshev_center(poly.to_halfspaces()).radius
        P, V = poly.perimeter, poly.area
    res = minimize_lambda_p(poly, p, config, h=h)
    R_used = R * r_scale
    N = 2
    pp = B.pi_p_value(p, pi_p_source)
    reports = [
        B.hardy_lower(p, R_used),
        B.hersch_protter_lower(p, R_used, pi_p=pp),
        B.faber_krahn_lower(p, N, V),
        B.isoperimetric_lower(p, N, P, V, pi_p=pp),
        B.ball_upper(p, R_used),
        B.isoperimetric_upper(p, P, V, pi_p=pp),
    ]
    verdicts = [B.verdict(r, res.value) for r in reports]
    verdicts.append(B.geometric_check(R_used, N, P, V))
    return verdicts, res


def report_exit_code(verdicts, results=()):
    """0 iff every verdict passes and every solve converged."""
    ok = all(v.passed for v in verdicts) and all(r.converged for r in results)
    return 0 if ok else 1


def rows_exit_code(rows):
    ok = all(r.get("converged", True) and r.get("pass", True) for r in rows)
    return 0 if ok else 1


# -- output ------------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def rows_to_csv(rows):
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    keys = list(rows[0])
    w.writerow(keys)
    for r in rows:
        w.writerow([_fmt(r[k]) for k in keys])
    return buf.getvalue()


def rows_to_json(rows):
    def conv(v):
        if isinstance(v, (np.floating, np.integer)):
            return v.item()
        if isinstance(v, np.bool_):
            return bool(v)
        return v

    return json.dumps([{k: conv(v) for k, v in r.items()} for r in rows], indent=2)


PLOT_COLUMNS = {
    "pyramid": ("alpha", "R^p*lambda", "target"),
    "slab": ("L", "lambda", "target"),
    "subhom": ("L", "scaled", None),
    "pinfty": ("p", "lambda^(1/p)", "1/R"),
    "hardy": ("index", "lhs", "rhs"),
    "report": ("name", "margin", None),
}


def plot_svg(experiment, rows, path):
    """Static SVG of the main column; deterministic bytes for equal rows."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x, y, ref = PLOT_COLUMNS[experiment]
    plt.rcParams["svg.hashsalt"] = "plapbounds"
    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs = [r[x] for r in rows]
    ys = [r[y] for r in rows]
    if experiment == "report":
        colors = ["tab:green" if r["pass"] else "tab:red" for r in rows]
        ax.bar(range(len(xs)), ys, color=colors)
        ax.set_xticks(range(len(xs)), xs, rotation=45, ha="right")
        ax.axhline(0.0, color="k", lw=0.8)
    else:
        ax.plot(xs, ys, "o-", label=y)
        if ref is not None:
            ax.plot(xs, [r[ref] for r in rows], "--", label=ref)
        ax.legend()
        if experiment == "pyramid":
            ax.invert_xaxis()
    ax.set_xlabel(x)
    ax.set_title(experiment)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def write_table(experiment, rows, out=None, fmt="csv"):
    """Write rows as CSV/JSON plus an SVG named ``<experiment>-<hash>.svg``.

    ``out`` is a directory; the hash is taken from the CSV text, so equal
    tables give equal file names. Returns the paths written.
    """
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    if out is None:
        return {"table": None, "svg": None, "text": text}
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    digest = hashlib.sha256(rows_to_csv(rows).encode()).hexdigest()[:12]
    table = out / f"{experiment}-{digest}.{fmt}"
    table.write_text(text)
    svg = plot_svg(experiment, rows, out / f"{experiment}-{digest}.svg")
    return {"table": table, "svg": svg, "text": text}


def run_sweep(spec: SweepSpec):
    """Dispatch on ``spec.experiment``; returns (rows, exit_code)."""
    e = spec.experiment
    if e == "pyramid":
        rows = run_pyramid_sweep(spec.p, spec.alphas, config=spec.config(spec.p))
    elif e == "slab":
        rows = run_slab_sweep(spec.p, spec.Ls, h=spec.h or 1.0 / 64.0, config=spec.config(spec.p))
    elif e == "subhom":
        q = 1.0 if spec.q is None else spec.q
        rows = run_subhomogeneous(spec.p, q, spec.Ls, h=spec.h or 1.0 / 32.0, config=spec.config(spec.p, q))
    elif e == "pinfty":
        rows = run_pinfty_trend(
            ConvexPolygon.unit_square(), spec.ps, h=spec.h or 1.0 / 32.0, config=spec.config(spec.ps[0])
        )
    elif e == "hardy":
        rows = run_hardy_pointwise(
            ConvexPolygon.unit_square(), spec.p, spec.n_fields, h=spec.h, seed=spec.seed, config=spec.config(spec.p)
        )
    else:
        raise ValueError("use run_bounds_report for reports")
    return rows, rows_exit_code(rows)


def verdict_rows(verdicts):
    return [v.row() for v in verdicts]

