"""First Dirichlet p-Laplacian eigenvalues on polygons by P1 elements.

The discrete quotient of a piecewise-linear field uses the exact
``int |grad u|^p`` and the centroid rule ``sum |T| |u(c_T)|^q`` for the
denominator. The centroid rule never exceeds ``int |u|^q`` (Jensen), so the
quotient of *any* admissible field is an upper bound for the continuum
infimum, and the computed minimum is one too.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import eigh
from matplotlib.tri import LinearTriInterpolator, Triangulation
from sklearn.base import BaseEstimator

from ._functional import DEFAULT_EPS_SCHEDULE, DiscreteQuotient, continuation_path, minimize_quotient
from ._validation import check_exponent, check_integer, check_q_admissible
from .exceptions import ConvergenceWarning, GeometryError, ZeroDenominator
from .geometry import ConvexPolygon, ShapeFamily
from .mesh import TriangleMesh, refine, triangulate

logger = logging.getLogger(__name__)

__all__ = [
    "SolverConfig",
    "DiscreteField",
    "SolveResult",
    "TriangleMesh",
    "triangulate",
    "refine",
    "rayleigh_pq",
    "minimize_lambda_p",
    "minimize_lambda_pq",
    "minimize_mixed",
    "gradient_check",
    "PLaplacianEigensolver",
]


@dataclass(frozen=True)
class SolverConfig:
    """Settings for the discrete minimization.

    ``q=None`` means q equals p. ``n_restarts`` extra runs start from seeded
    perturbations of the p = 2 eigenfunction; their values must agree with
    the main run to ``restart_rtol`` or the result is flagged unconverged.
    """

    p: float = 2.0
    q: float | None = None
    eps_schedule: tuple = DEFAULT_EPS_SCHEDULE
    max_iter: int = 50_000
    tol: float = 1e-10
    seed: int = 0
    n_restarts: int = 3
    restart_rtol: float = 1e-6

    def __post_init__(self):
        check_exponent(self.p)
        if self.q is not None:
            check_q_admissible(self.p, self.q, 2)
        check_integer(self.max_iter, "max_iter", lo=1)
        check_integer(self.n_restarts, "n_restarts", lo=0)
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.eps_schedule or any(not e > 0 for e in self.eps_schedule):
            raise ValueError("eps_schedule must be a nonempty sequence of positive values")

    @property
    def q_value(self):
        return self.p if self.q is None else float(self.q)


class DiscreteField:
    """Nodal values on a mesh with the Dirichlet nodes forced to zero."""

    def __init__(self, mesh: TriangleMesh, values, dirichlet_edges=None):
        values = np.array(values, dtype=float)
        if values.shape != (mesh.n_nodes,):
            raise ValueError(f"expected {mesh.n_nodes} nodal values, got shape {values.shape}")
        self.mesh = mesh
        self.dirichlet_edges = None if dirichlet_edges is None else tuple(sorted(dirichlet_edges))
        self.mask = mesh.dirichlet_mask(dirichlet_edges)
        values[self.mask] = 0.0
        self.values = values

    @classmethod
    def from_free(cls, mesh, free_values, dirichlet_edges=None):
        mask = mesh.dirichlet_mask(dirichlet_edges)
        v = np.zeros(mesh.n_nodes)
        v[~mask] = free_values
        return cls(mesh, v, dirichlet_edges)

    @property
    def free_values(self):
        return self.values[~self.mask]

    def __call__(self, points):
        """Piecewise-linear interpolation at points inside the mesh."""
        tri = Triangulation(self.mesh.nodes[:, 0], self.mesh.nodes[:, 1], self.mesh.triangles)
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.asarray(LinearTriInterpolator(tri, self.values)(pts[:, 0], pts[:, 1]).filled(np.nan))
        return float(out[0]) if np.ndim(points) == 1 else out


@dataclass
class SolveResult:
    value: float
    iterations: int
    residual: float
    converged: bool
    field: DiscreteField
    p: float
    q: float
    restart_values: tuple = ()
    info: dict = field(default_factory=dict)

    @property
    def mesh(self):
        return self.field.mesh


def _quotient(mesh: TriangleMesh, free, p, q):
    Gx, Gy = mesh.gradient_operators
    return DiscreteQuotient([Gx[:, free], Gy[:, free]], mesh.centroid_operator[:, free], mesh.areas, p, q)


def rayleigh_pq(mesh: TriangleMesh, field, p, q=None):
    """Discrete quotient sum|T||grad u|^p / (sum|T||u(c_T)|^q)^(p/q).

    ``field`` is a :class:`DiscreteField` or an array of nodal values (taken
    as given, so boundary values should already be zero).
    """
    values = field.values if isinstance(field, DiscreteField) else np.asarray(field, dtype=float)
    Gx, Gy = mesh.gradient_operators
    Q = DiscreteQuotient([Gx, Gy], mesh.centroid_operator, mesh.areas, p, q)
    try:
        return Q.value(values)
    except ZeroDivisionError as exc:
        raise ZeroDenominator(str(exc)) from None


def _linear_eigenpair(Q: DiscreteQuotient):
    """Smallest eigenpair of K u = lam M u for p = q = 2."""
    G = Q.grads
    w = sp.diags(Q.weights)
    K = sum(g.T @ w @ g for g in G).tocsc()
    M = (Q.avg.T @ w @ Q.avg).tocsc()
    n = K.shape[0]
    if n < 3:
        vals, vecs = _dense_eig(K, M)
    else:
        vals, vecs = spla.eigsh(K, k=1, M=M, sigma=0.0, which="LM", tol=1e-14, v0=np.ones(n))
    u = vecs[:, 0]
    return u if u.sum() >= 0 else -u


def _dense_eig(K, M):
    vals, vecs = eigh(M.toarray(), K.toarray())
    return 1.0 / vals[-1:], vecs[:, -1:]


def _q_path(p, q, factor=2.0):
    if q == p:
        return []
    n = max(1, math.ceil(abs(math.log(q / p)) / math.log(factor)))
    return [p * (q / p) ** (k / n) for k in range(1, n + 1)]


def _smooth_bump(x, rng, n_modes=4, amplitude=0.5):
    """Random positive factor built from a few long-wavelength cosines."""
    span = max(np.ptp(x, axis=0).max(), 1e-12)
    k = rng.normal(size=(n_modes, 2)) * (np.pi / span)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=n_modes)
    a = rng.uniform(-1.0, 1.0, size=n_modes) * (amplitude / n_modes)
    return np.exp(np.cos(x @ k.T + phase) @ a)


def _run_path(mesh, free, p, q, u, cfg):
    """Continuation p: 2 -> p (with q = p), then q: p -> q."""
    path = [(pk, pk) for pk in continuation_path(p)] if p != 2.0 else [(2.0, 2.0)]
    path += [(p, qk) for qk in _q_path(p, q)]
    iters, out = 0, None
    for k, (pk, qk) in enumerate(path):
        last = k == len(path) - 1
        if (pk, qk) == (2.0, 2.0):
            continue
        out = minimize_quotient(
            _quotient(mesh, free, pk, qk),
            u,
            tol=cfg.tol,
            max_iter=max(cfg.max_iter - iters, 1),
            eps_schedule=cfg.eps_schedule if last else cfg.eps_schedule[:1],
        )
        u, iters = out.u, iters + out.iterations
    return out, iters


def _solve(mesh: TriangleMesh, dirichlet_edges, cfg: SolverConfig) -> SolveResult:
    p, q = cfg.p, cfg.q_value
    free = ~mesh.dirichlet_mask(dirichlet_edges)
    if not free.any():
        raise GeometryError("mesh has no free nodes; refine it")
    u2 = _linear_eigenpair(_quotient(mesh, free, 2.0, 2.0))
    Q = _quotient(mesh, free, p, q)
    # one free node: the quotient is constant on the only ray
    if (p == 2.0 and q == 2.0) or free.sum() == 1:
        u = Q.normalize(u2)
        fld = DiscreteField.from_free(mesh, u, dirichlet_edges)
        val = rayleigh_pq(mesh, fld, p, q)
        return SolveResult(value=val, iterations=1, residual=0.0, converged=True, field=fld, p=p, q=q,
                           restart_values=(val,))

    out, iters = _run_path(mesh, free, p, q, u2, cfg)
    runs = [(out, iters)]
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.n_restarts):
        runs.append(_run_path(mesh, free, p, q, np.abs(u2) * _smooth_bump(mesh.nodes[free], rng), cfg))
    values = tuple(r[0].value for r in runs)
    best, _ = min(runs, key=lambda r: r[0].value)
    converged = all(r[0].converged for r in runs)
    spread = (max(values) - min(values)) / min(values)
    if spread > cfg.restart_rtol:
        converged = False
    if not converged:
        warnings.warn(
            f"p={p}, q={q}: solve not converged (restart spread {spread:.2e})", ConvergenceWarning, stacklevel=3
        )
    u = best.u if best.u.sum() >= 0 else -best.u
    fld = DiscreteField.from_free(mesh, u, dirichlet_edges)
    val = rayleigh_pq(mesh, fld, p, q)
    return SolveResult(
        value=val,
        iterations=sum(r[1] for r in runs),
        residual=best.residual,
        converged=converged,
        field=fld,
        p=p,
        q=q,
        restart_values=values,
        info={"restart_spread": spread},
    )


def _as_polygon(shape):
    if isinstance(shape, ConvexPolygon):
        return shape
    if isinstance(shape, ShapeFamily):
        return shape.polygon()
    return ConvexPolygon(shape)


def _config(config, **kw):
    if config is None:
        return SolverConfig(**kw)
    return replace(config, **kw)


def minimize_lambda_p(poly, p=2.0, config: SolverConfig | None = None, *, h=None, mesh=None):
    """Discrete lambda_p of a polygon with zero values on the whole boundary.

    Pass ``mesh`` to reuse a triangulation (for instance a refined one);
    otherwise the polygon is meshed with ``h`` (default diameter / 64).
    """
    cfg = _config(config, p=check_exponent(p), q=None)
    if mesh is None:
        mesh = triangulate(_as_polygon(poly), h)
    return _solve(mesh, None, cfg)


def minimize_lambda_pq(poly, p, q, config: SolverConfig | None = None, *, h=None, mesh=None):
    """Discrete lambda_{p,q}: gradient exponent p, function exponent q."""
    p = check_exponent(p)
    q = check_q_admissible(p, q, 2)
    cfg = _config(config, p=p, q=q)
    if mesh is None:
        mesh = triangulate(_as_polygon(poly), h)
    return _solve(mesh, None, cfg)


def minimize_mixed(poly, dirichlet_edges, p=2.0, config: SolverConfig | None = None, *, h=None, mesh=None):
    """Discrete first eigenvalue with zero values only on the listed edges.

    The remaining edges carry the natural (zero-flux) condition.
    """
    poly = _as_polygon(poly)
    edges = sorted(set(int(e) for e in dirichlet_edges))
    if not edges:
        raise ValueError("dirichlet_edges must be nonempty")
    if any(e < 0 or e >= len(poly) for e in edges):
        raise ValueError(f"edge indices must lie in [0, {len(poly)})")
    cfg = _config(config, p=check_exponent(p), q=None)
    if mesh is None:
        mesh = triangulate(poly, h)
    return _solve(mesh, None if len(edges) == len(poly) else edges, cfg)


def gradient_check(mesh: TriangleMesh, field, p, q=None, delta=1e-6, *, eps=1e-4, n_coords=20, seed=0):
    """Largest relative gap between the analytic gradient of the smoothed
    quotient and central differences, over random free coordinates.

    ``eps`` is the relative smoothing parameter.
    """
    if not 1e-7 <= delta <= 1e-4:
        raise ValueError("delta must lie in [1e-7, 1e-4]")
    fld = field if isinstance(field, DiscreteField) else DiscreteField(mesh, field)
    free = ~fld.mask
    Q = _quotient(mesh, free, p, p if q is None else q)
    u = fld.free_values
    eps_g, eps_m = Q._smoothing(u, eps)
    g = Q.smoothed_quotient_grad(u, eps_g, eps_m)
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(u), size=min(n_coords, len(u)), replace=False)
    step = delta * max(np.abs(u).max(), 1.0)
    scale = np.abs(g).max()
    worst = 0.0
    for i in idx:
        up, um = u.copy(), u.copy()
        up[i] += step
        um[i] -= step
        fd = (Q.smoothed_quotient(up, eps_g, eps_m) - Q.smoothed_quotient(um, eps_g, eps_m)) / (2.0 * step)
        worst = max(worst, abs(fd - g[i]) / max(abs(g[i]), abs(fd), 1e-8 * scale))
    return worst


class PLaplacianEigensolver(BaseEstimator):
    """Estimator interface to the P1 eigenvalue solvers.

    ``fit`` takes a polygon (a :class:`ConvexPolygon`, a planar
    :class:`ShapeFamily` or a vertex array) and stores the discrete
    eigenvalue in ``eigenvalue_``. ``predict`` evaluates the normalized
    minimizer at query points.

    Parameters
    ----------
    p, q : exponents (q=None for q = p)
    h : target mesh size, default diameter / 64
    dirichlet_edges : edge indices with zero data, default all
    tol, max_iter, n_restarts, random_state : solver controls
    """

    def __init__(
        self,
        p=2.0,
        q=None,
        h=None,
        dirichlet_edges=None,
        tol=1e-10,
        max_iter=50_000,
        n_restarts=3,
        random_state=0,
    ):
        self.p = p
        self.q = q
        self.h = h
        self.dirichlet_edges = dirichlet_edges
        self.tol = tol
        self.max_iter = max_iter
        self.n_restarts = n_restarts
        self.random_state = random_state

    def fit(self, X, y=None):
        poly = _as_polygon(X)
        cfg = SolverConfig(
            p=self.p, q=self.q, tol=self.tol, max_iter=self.max_iter,
            seed=self.random_state, n_restarts=self.n_restarts,
        )
        mesh = triangulate(poly, self.h)
        if self.dirichlet_edges is None or len(set(self.dirichlet_edges)) == len(poly):
            res = _solve(mesh, None, cfg)
        else:
            res = minimize_mixed(poly, self.dirichlet_edges, self.p, cfg, mesh=mesh)
        self.polygon_ = poly
        self.mesh_ = mesh
        self.result_ = res
        self.eigenvalue_ = res.value
        self.eigenfunction_ = res.field
        self.converged_ = res.converged
        self.n_iter_ = res.iterations
        return self

    def predict(self, X):
        pts = np.atleast_2d(np.asarray(X, dtype=float))
        if pts.shape[1] != 2:
            raise ValueError("query points must have two coordinates")
        return self.eigenfunction_(pts)

    def score(self, X=None, y=None):
        """Negative eigenvalue, so that larger is better in model selection."""
        return -self.eigenvalue_
