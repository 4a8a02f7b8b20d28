"""Discrete p-Dirichlet quotients on element meshes and their minimization.

Both the 1D interval problems and the 2D P1 problems reduce to the same
algebraic form. With per-element weights ``w`` (lengths or areas), sparse
gradient operators ``G_k`` (one per space dimension) and an element
averaging operator ``C`` (value at the element midpoint / centroid)::

    N(u) = sum_e w_e |G u|_e^p
    D(u) = sum_e w_e |C u|_e^q
    Q(u) = N(u) / D(u)^(p/q)

Because ``u`` is piecewise linear, ``N`` is the exact integral of
``|grad u|^p`` and, by Jensen, ``D`` never exceeds the exact integral of
``|u|^q``. The discrete quotient therefore dominates the continuum
Rayleigh quotient of the same function.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

logger = logging.getLogger(__name__)

DEFAULT_EPS_SCHEDULE = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8)


class NonConvergence(RuntimeWarning):
    """Raised or warned when an iterative solve stops before its tolerance."""


@dataclass
class MinimizeOutput:
    u: np.ndarray
    value: float
    iterations: int
    residual: float
    converged: bool


class DiscreteQuotient:
    """Smoothed/unsmoothed evaluation of ``N(u) / D(u)^(p/q)``.

    Parameters
    ----------
    grads : list of sparse matrices, each (n_elements, n_free)
    avg : sparse matrix (n_elements, n_free)
    weights : array (n_elements,)
    p, q : exponents, both >= 1
    """

    def __init__(self, grads, avg, weights, p, q=None):
        self.grads = [sp.csr_matrix(g) for g in grads]
        self.avg = sp.csr_matrix(avg)
        self.weights = np.asarray(weights, dtype=float)
        self.p = float(p)
        self.q = float(p if q is None else q)
        self.n = self.avg.shape[1]

    # -- plain (unsmoothed) functionals ------------------------------------
    def grad_norms(self, u):
        sq = sum((g @ u) ** 2 for g in self.grads)
        return np.sqrt(sq)

    def numerator(self, u):
        return float(self.weights @ self.grad_norms(u) ** self.p)

    def denominator(self, u):
        return float(self.weights @ np.abs(self.avg @ u) ** self.q)

    def value(self, u):
        d = self.denominator(u)
        if not d > 0.0:
            raise ZeroDivisionError("denominator vanishes: field is zero on every element")
        return self.numerator(u) / d ** (self.p / self.q)

    # -- smoothed functionals with derivatives -------------------------------
    def _smoothing(self, u, eps_rel):
        wsum = self.weights.sum()
        gscale = (self.numerator(u) / wsum) ** (1.0 / self.p)
        mscale = (self.denominator(u) / wsum) ** (1.0 / self.q)
        return eps_rel * gscale, eps_rel * mscale

    def smoothed(self, u, eps_g, eps_m, hessian=True):
        """Return (N, gradN, HN, D, gradD, HD) of the smoothed functionals."""
        p, q, w = self.p, self.q, self.weights
        gs = [g @ u for g in self.grads]
        s = sum(c * c for c in gs) + eps_g * eps_g
        sp2 = s ** (p / 2.0 - 1.0)
        N = float(w @ (s * sp2))
        gradN = sum(g.T @ (p * w * sp2 * c) for g, c in zip(self.grads, gs))

        m = self.avg @ u
        t = m * m + eps_m * eps_m
        tq2 = t ** (q / 2.0 - 1.0)
        D = float(w @ (t * tq2))
        gradD = self.avg.T @ (q * w * tq2 * m)
        if not hessian:
            return N, gradN, None, D, gradD, None

        sp4 = s ** (p / 2.0 - 2.0)
        HN = None
        for k, gk in enumerate(self.grads):
            for l, gl in enumerate(self.grads):
                coeff = (p - 2.0) * sp4 * gs[k] * gs[l]
                if k == l:
                    coeff = coeff + sp2
                block = gk.T @ sp.diags(p * w * coeff) @ gl
                HN = block if HN is None else HN + block
        hd = q * w * (tq2 + (q - 2.0) * t ** (q / 2.0 - 2.0) * m * m)
        HD = self.avg.T @ sp.diags(hd) @ self.avg
        return N, gradN, HN.tocsc(), D, gradD, HD.tocsc()

    def smoothed_quotient(self, u, eps_g, eps_m):
        N, _, _, D, _, _ = self.smoothed(u, eps_g, eps_m, hessian=False)
        return N / D ** (self.p / self.q)

    def smoothed_quotient_grad(self, u, eps_g, eps_m):
        """Analytic gradient of the smoothed quotient (any normalization)."""
        r = self.p / self.q
        N, gN, _, D, gD, _ = self.smoothed(u, eps_g, eps_m, hessian=False)
        return gN / D**r - r * N * D ** (-r - 1.0) * gD

    def kacanov(self, u, eps_g):
        """Positive definite part of the numerator Hessian (frozen coefficients)."""
        gs = [g @ u for g in self.grads]
        s = sum(c * c for c in gs) + eps_g * eps_g
        coeff = self.p * self.weights * s ** (self.p / 2.0 - 1.0)
        H = None
        for g in self.grads:
            block = g.T @ sp.diags(coeff) @ g
            H = block if H is None else H + block
        return H.tocsc()

    def normalize(self, u, eps_m=0.0):
        m = self.avg @ u
        D = float(self.weights @ (m * m + eps_m * eps_m) ** (self.q / 2.0))
        return u / D ** (1.0 / self.q)


def _newton_direction(Q, u, lam, eps_g, eps_m):
    r = Q.p / Q.q
    N, gN, HN, D, gD, HD = Q.smoothed(u, eps_g, eps_m)
    F1 = gN - lam * r * gD
    F2 = D - 1.0
    A = HN - (lam * r) * HD
    col = sp.csc_matrix((-r * gD).reshape(-1, 1))
    row = sp.csc_matrix(gD.reshape(1, -1))
    J = sp.bmat([[A, col], [row, None]], format="csc")
    rhs = -np.concatenate([F1, [F2]])
    try:
        sol = spla.spsolve(J, rhs)
    except RuntimeError:
        return None, F1
    if not np.all(np.isfinite(sol)):
        return None, F1
    return sol[:-1], F1


def _precond_direction(Q, u, eps_g, grad):
    P = Q.kacanov(u, eps_g)
    P = P + sp.identity(P.shape[0], format="csc") * (1e-12 * abs(P.diagonal()).max())
    return -spla.spsolve(P, grad)


def minimize_quotient(
    Q: DiscreteQuotient,
    u0,
    *,
    tol=1e-10,
    max_iter=50_000,
    eps_schedule=DEFAULT_EPS_SCHEDULE,
):
    """Minimize the discrete quotient starting from ``u0``.

    Each smoothing stage runs safeguarded Newton iterations on the
    normalized stationarity system ``grad N = lam (p/q) grad D, D = 1``.
    Steps are accepted only if they decrease the smoothed quotient; when the
    Newton step fails to, a Kacanov-preconditioned gradient step is taken
    instead. A stage ends when the relative decrease of the quotient drops
    below ``tol`` twice in a row, when the step length vanishes, or when no
    descent step exists. ``max_iter`` bounds the total iteration count over
    all stages. The returned value is the *unsmoothed* quotient of the final
    iterate.
    """
    u = np.asarray(u0, dtype=float).copy()
    if not np.any(u):
        raise ValueError("initial field is identically zero")
    total = 0
    converged = True
    residual = np.inf
    for eps_rel in eps_schedule:
        eps_g, eps_m = Q._smoothing(u, eps_rel)
        u = Q.normalize(u, eps_m)
        q_cur = Q.smoothed_quotient(u, eps_g, eps_m)
        stalls = 0
        stage_done = False
        while total < max_iter:
            total += 1
            du, F1 = _newton_direction(Q, u, q_cur, eps_g, eps_m)
            scale = np.linalg.norm(Q.smoothed(u, eps_g, eps_m, hessian=False)[1])
            residual = float(np.linalg.norm(F1) / max(scale, 1e-300))
            step = _line_search(Q, u, q_cur, du, F1, eps_g, eps_m)
            if step is None:
                stage_done = True
                break
            cand, q_new, step_len = step
            change = (q_cur - q_new) / q_cur
            u, q_cur = cand, q_new
            stalls = stalls + 1 if change < tol else 0
            if stalls >= 2 or (change < tol and step_len < 1e-9):
                stage_done = True
                break
        if not stage_done:
            converged = False
            logger.warning("quotient minimization hit max_iter=%d (eps=%g)", max_iter, eps_rel)
            break
    value = Q.value(u)
    return MinimizeOutput(u=u, value=value, iterations=total, residual=residual, converged=converged)


def _line_search(Q, u, q_cur, du, grad, eps_g, eps_m):
    unorm = np.linalg.norm(u)
    for direction in (du, "precond"):
        if isinstance(direction, str):
            direction = _precond_direction(Q, u, eps_g, grad)
        if direction is None or not np.all(np.isfinite(direction)):
            continue
        t = 1.0
        while t > 1e-10:
            cand = Q.normalize(u + t * direction, eps_m)
            q_new = Q.smoothed_quotient(cand, eps_g, eps_m)
            if np.isfinite(q_new) and q_new <= q_cur * (1.0 + 1e-15):
                return cand, q_new, t * np.linalg.norm(direction) / unorm
            t *= 0.5
    return None


def continuation_path(p, p_start=2.0, factor=2.0):
    """Exponents from ``p_start`` to ``p`` with geometric steps in ``p - 1``."""
    p = float(p)
    a, b = np.log(p_start - 1.0), np.log(p - 1.0)
    n_steps = int(np.ceil(abs(b - a) / np.log(factor)))
    if n_steps == 0:
        return [p]
    path = 1.0 + np.exp(np.linspace(a, b, n_steps + 1))[1:]
    path[-1] = p
    return list(path)
