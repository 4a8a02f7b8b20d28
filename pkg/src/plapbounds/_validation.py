"""Input validation helpers shared by the estimators and functional API."""

from __future__ import annotations

import math
import numbers

import numpy as np

from .exceptions import InadmissibleExponent, Unsupported

P_MIN, P_MAX = 1.05, 50.0


def check_scalar(x, name, *, lo=None, hi=None, lo_inclusive=True, hi_inclusive=True):
    if not isinstance(x, numbers.Real) or isinstance(x, bool):
        raise TypeError(f"{name} must be a real number, got {type(x).__name__}")
    x = float(x)
    if math.isnan(x):
        raise ValueError(f"{name} is NaN")
    if lo is not None and (x < lo or (x == lo and not lo_inclusive)):
        raise ValueError(f"{name}={x} below allowed range (lower end {lo})")
    if hi is not None and (x > hi or (x == hi and not hi_inclusive)):
        raise ValueError(f"{name}={x} above allowed range (upper end {hi})")
    return x


def check_positive(x, name):
    return check_scalar(x, name, lo=0.0, lo_inclusive=False)


def check_exponent(p, name="p"):
    """Exponent for the discrete solvers: finite and within [1.05, 50]."""
    x = check_scalar(p, name)
    if not P_MIN <= x <= P_MAX:
        raise InadmissibleExponent(f"{name}={x} outside the supported range [{P_MIN}, {P_MAX}]")
    return x


def check_integer(n, name, *, lo):
    if not isinstance(n, numbers.Integral) or isinstance(n, bool):
        raise TypeError(f"{name} must be an integer")
    if n < lo:
        raise ValueError(f"{name}={n} must be >= {lo}")
    return int(n)


def sobolev_exponent(p, N):
    """Critical exponent N p / (N - p), infinite when p >= N."""
    return math.inf if p >= N else N * p / (N - p)


def check_q_admissible(p, q, N=2, *, allow_infinite=False):
    """Check ``q`` against the Sobolev window for gradient exponent ``p``.

    For p <= N the window is 1 <= q < Np/(N-p); for p > N any q in
    [1, inf] is admissible. ``q = inf`` is recognised but rejected with
    :class:`Unsupported` unless ``allow_infinite`` is set.
    """
    q = float(q)
    if math.isnan(q) or q < 1.0:
        raise InadmissibleExponent(f"q={q} must be >= 1")
    p_star = sobolev_exponent(p, N)
    if math.isinf(q):
        if p > N:
            if allow_infinite:
                return q
            raise Unsupported(f"q=inf is admissible for p={p} > N={N} but not supported by the solver")
        raise InadmissibleExponent(f"q=inf requires p > N (p={p}, N={N})")
    if p <= N and not q < p_star:
        raise InadmissibleExponent(f"q={q} must be < p*={p_star:g} for p={p}, N={N}")
    return q


def as_points(x, dim=2):
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.shape[1] != dim:
        raise ValueError(f"expected points with {dim} coordinates, got shape {np.shape(x)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("points must be finite")
    return arr, single
