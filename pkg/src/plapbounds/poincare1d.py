"""One-dimensional p-Poincare constants on uniform grids.

``pi_p`` is the best constant in ``||phi'||_p >= pi_p ||phi||_p`` for
functions on [0, 1] vanishing at both ends. The half-interval constant
``(pi_p / 2)^p / a^p`` bounds the p-quotient of functions on [0, a] that
vanish at the left end only.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator

from ._functional import DEFAULT_EPS_SCHEDULE, DiscreteQuotient, continuation_path, minimize_quotient
from ._validation import check_exponent, check_integer, check_positive
from .exceptions import ConvergenceWarning


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid with ``n`` unknown nodes on [0, a].

    With ``left_only`` the right endpoint is an unknown too; otherwise both
    endpoints are pinned to zero.
    """

    n: int
    a: float = 1.0
    left_only: bool = False

    def __post_init__(self):
        check_integer(self.n, "n", lo=8)
        check_positive(self.a, "a")

    @property
    def h(self):
        return self.a / (self.n if self.left_only else self.n + 1)

    @property
    def x(self):
        """Coordinates of the unknown nodes."""
        return self.h * np.arange(1, self.n + 1)

    def refine(self):
        """Nested grid with every cell halved."""
        return Grid1D(2 * self.n if self.left_only else 2 * self.n + 1, self.a, self.left_only)

    def operators(self):
        """Difference and midpoint-averaging matrices, one row per cell."""
        n, h = self.n, self.h
        m = n if self.left_only else n + 1
        j = np.arange(n)
        # cell k spans nodes k-1 .. k, with node -1 the pinned left end
        rows = np.concatenate([j, j + 1])
        cols = np.concatenate([j, j])
        keep = rows < m
        sign = np.concatenate([np.ones(n), -np.ones(n)])
        G = sp.csr_matrix((sign[keep] / h, (rows[keep], cols[keep])), shape=(m, n))
        C = sp.csr_matrix((np.full(keep.sum(), 0.5), (rows[keep], cols[keep])), shape=(m, n))
        return G, C, np.full(m, h)

    def initial_guess(self):
        if self.left_only:
            return np.sin(0.5 * np.pi * self.x / self.a)
        return np.sin(np.pi * self.x / self.a)


@dataclass
class DiscreteFunction1D:
    grid: Grid1D
    values: np.ndarray

    def full(self):
        """Nodal values including pinned endpoints."""
        if self.grid.left_only:
            return np.concatenate([[0.0], self.values])
        return np.concatenate([[0.0], self.values, [0.0]])

    def nodes(self):
        m = self.grid.n + (1 if self.grid.left_only else 2)
        return np.linspace(0.0, self.grid.a, m)


@dataclass
class Poincare1DResult:
    value: float
    minimizer: DiscreteFunction1D
    iterations: int
    converged: bool


def solve_1d(grid: Grid1D, p, *, tol=1e-10, max_iter=50_000, eps_schedule=DEFAULT_EPS_SCHEDULE, continuation=True):
    """Minimize the discrete p-quotient sum|phi'|^p / sum|phi_mid|^p on ``grid``.

    The minimizer for ``p`` is reached through a chain of exponents from 2,
    warm-starting each solve from the previous one (only the last exponent
    runs the full smoothing schedule).
    """
    p = check_exponent(p)
    G, C, w = grid.operators()
    u = grid.initial_guess()
    path = continuation_path(p) if continuation else [p]
    iters = 0
    for k, pk in enumerate(path):
        last = k == len(path) - 1
        out = minimize_quotient(
            DiscreteQuotient([G], C, w, pk),
            u,
            tol=tol,
            max_iter=max_iter - iters,
            eps_schedule=eps_schedule if last else eps_schedule[:1],
        )
        u, iters = out.u, iters + out.iterations
    u = u if np.sum(u) >= 0 else -u
    if not out.converged:
        warnings.warn(f"1D solve for p={p} stopped after {iters} iterations", ConvergenceWarning, stacklevel=2)
    return Poincare1DResult(
        value=out.value, minimizer=DiscreteFunction1D(grid, u), iterations=iters, converged=out.converged
    )


def pi_p_estimate(p, n=2000, **kwargs):
    """Discrete pi_p on [0, 1] with ``n`` interior nodes (an upper estimate)."""
    res = solve_1d(Grid1D(check_integer(n, "n", lo=8)), p, **kwargs)
    return res.value ** (1.0 / float(p))


def half_poincare_estimate(p, n=2000, a=1.0, **kwargs):
    """Discrete best constant in sum|phi'|^p >= c sum|phi|^p with phi(0) = 0 on [0, a].

    Returned in p-th power form; it approaches (pi_p / 2)^p / a^p.
    """
    return solve_1d(Grid1D(check_integer(n, "n", lo=8), a, left_only=True), p, **kwargs).value


def pi_p_reference(p):
    """Closed form 2 pi (p-1)^(1/p) / (p sin(pi/p)) for 1 < p < inf.

    Meant as a cross-check; ``p = inf`` returns the limit 2.
    """
    p = float(p)
    if not p > 1.0:
        raise ValueError(f"pi_p is defined for p > 1, got {p}")
    if math.isinf(p):
        return 2.0
    return 2.0 * math.pi * (p - 1.0) ** (1.0 / p) / (p * math.sin(math.pi / p))


class PoincareConstant1D(BaseEstimator):
    """Estimator wrapper around the 1D solver.

    Parameters
    ----------
    p : float
        Exponent in [1.05, 50].
    n : int
        Number of unknown grid nodes.
    a : float
        Interval length.
    boundary : {"both", "left"}
        Which endpoints carry the zero condition.
    tol, max_iter : stopping controls.

    Attributes
    ----------
    constant_ : float
        Best constant in p-th power form.
    pi_p_ : float
        ``constant_ ** (1/p)`` scaled to the unit interval (``boundary="both"``)
        or ``2 * a * constant_ ** (1/p)`` (``boundary="left"``).
    minimizer_ : DiscreteFunction1D
    """

    def __init__(self, p=2.0, n=2000, a=1.0, boundary="both", tol=1e-10, max_iter=50_000):
        self.p = p
        self.n = n
        self.a = a
        self.boundary = boundary
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X=None, y=None):
        if self.boundary not in ("both", "left"):
            raise ValueError(f"boundary must be 'both' or 'left', got {self.boundary!r}")
        grid = Grid1D(check_integer(self.n, "n", lo=8), check_positive(self.a, "a"), self.boundary == "left")
        res = solve_1d(grid, self.p, tol=self.tol, max_iter=self.max_iter)
        self.constant_ = res.value
        root = res.value ** (1.0 / self.p) * self.a
        self.pi_p_ = 2.0 * root if self.boundary == "left" else root
        self.minimizer_ = res.minimizer
        self.converged_ = res.converged
        self.n_iter_ = res.iterations
        return self

    def predict(self, X):
        """Interpolate the normalized minimizer at points in [0, a]."""
        f = self.minimizer_
        return np.interp(np.asarray(X, dtype=float), f.nodes(), f.full())
