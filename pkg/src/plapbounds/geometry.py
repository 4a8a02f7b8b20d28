"""Convex geometry: polygons, halfspace sets, inballs, envelopes, pyramids.

General polygon operations are planar. Analytic shape families
(boxes, truncated slabs, collapsing pyramids) carry closed-form inradius,
measure and perimeter in any dimension.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import linprog

from ._validation import as_points, check_integer, check_positive
from .exceptions import (
    DegenerateContact,
    EnvelopeFailure,
    GeometryError,
    Infeasible,
    OutsideDomain,
    TangencyViolation,
    UnboundedInradius,
)

TOL = 1e-9
MAX_ASPECT = 1e6


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices.

    Parameters
    ----------
    vertices : array-like of shape (k, 2)
        Vertices in counterclockwise order, k >= 3. Collinear triples,
        clockwise orientation and needles (diameter^2 / area > 1e6) are
        rejected.
    """

    def __init__(self, vertices):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise GeometryError(f"vertices must have shape (k, 2), got {v.shape}")
        if len(v) < 3:
            raise GeometryError("a polygon needs at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise GeometryError("vertices must be finite")
        e = np.roll(v, -1, axis=0) - v
        if np.any(np.hypot(e[:, 0], e[:, 1]) == 0.0):
            raise GeometryError("repeated vertex")
        area2 = float(np.sum(_cross(v, np.roll(v, -1, axis=0))))
        if area2 <= 0.0:
            raise GeometryError("vertices must be counterclockwise (positive signed area)")
        turns = _cross(e, np.roll(e, -1, axis=0))
        scale = np.hypot(e[:, 0], e[:, 1]) * np.roll(np.hypot(e[:, 0], e[:, 1]), -1)
        if np.any(turns <= 1e-12 * scale):
            raise GeometryError("polygon must turn strictly left at every vertex (convex, no collinear triples)")
        self._v = v
        self._v.setflags(write=False)
        diam = self.diameter
        if diam * diam / self.area > MAX_ASPECT:
            raise GeometryError(
                f"needle-like polygon rejected: diameter^2/area = {diam * diam / self.area:.3g} > {MAX_ASPECT:g}"
            )

    @property
    def vertices(self):
        return self._v

    def __len__(self):
        return len(self._v)

    def __repr__(self):
        return f"ConvexPolygon({self._v.tolist()!r})"

    def __eq__(self, other):
        return isinstance(other, ConvexPolygon) and np.array_equal(self._v, other._v)

    def __hash__(self):
        return hash(self._v.tobytes())

    @property
    def edges(self):
        """Array (k, 2, 2) of edge endpoints; edge i runs from vertex i to i+1."""
        return np.stack([self._v, np.roll(self._v, -1, axis=0)], axis=1)

    @cached_property
    def edge_lengths(self):
        e = np.roll(self._v, -1, axis=0) - self._v
        return np.hypot(e[:, 0], e[:, 1])

    @cached_property
    def outward_normals(self):
        e = np.roll(self._v, -1, axis=0) - self._v
        n = np.column_stack([e[:, 1], -e[:, 0]])
        return n / np.hypot(n[:, 0], n[:, 1])[:, None]

    @cached_property
    def offsets(self):
        return np.einsum("ij,ij->i", self.outward_normals, self._v)

    @cached_property
    def area(self):
        v = self._v
        return 0.5 * float(np.sum(_cross(v, np.roll(v, -1, axis=0))))

    @cached_property
    def perimeter(self):
        return float(self.edge_lengths.sum())

    @cached_property
    def diameter(self):
        d = self._v[:, None, :] - self._v[None, :, :]
        return float(np.sqrt((d**2).sum(-1)).max())

    @cached_property
    def centroid(self):
        v, w = self._v, np.roll(self._v, -1, axis=0)
        c = _cross(v, w)
        return (((v + w) * c[:, None]).sum(0)) / (3.0 * c.sum())

    def slacks(self, x):
        """Signed distances b_i - <n_i, x> to every edge line (positive inside)."""
        pts, _ = as_points(x)
        return self.offsets[None, :] - pts @ self.outward_normals.T

    def contains(self, x, tol=TOL):
        s = self.slacks(x)
        out = np.all(s >= -tol, axis=1)
        return bool(out[0]) if np.ndim(x) == 1 else out

    def scaled(self, t, about=None):
        about = np.zeros(2) if about is None else np.asarray(about, float)
        return ConvexPolygon(about + t * (self._v - about))

    def translated(self, shift):
        return ConvexPolygon(self._v + np.asarray(shift, float))

    def to_halfspaces(self):
        return to_halfspaces(self)

    def to_json(self):
        return json.dumps({"vertices": self._v.tolist()})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        return cls(data["vertices"])

    # common shapes -----------------------------------------------------------
    @classmethod
    def rectangle(cls, width, height, origin=(0.0, 0.0)):
        x0, y0 = origin
        return cls([[x0, y0], [x0 + width, y0], [x0 + width, y0 + height], [x0, y0 + height]])

    @classmethod
    def unit_square(cls):
        return cls.rectangle(1.0, 1.0)

    @classmethod
    def regular(cls, k, circumradius=1.0, center=(0.0, 0.0), phase=0.0):
        k = check_integer(k, "k", lo=3)
        th = phase + 2.0 * np.pi * np.arange(k) / k
        return cls(np.column_stack([center[0] + circumradius * np.cos(th), center[1] + circumradius * np.sin(th)]))

    @classmethod
    def random(cls, rng, n_vertices=None, *, min_vertices=3, max_vertices=9, max_aspect=8.0):
        """Random convex polygon: hull of points on a jittered ellipse.

        Shapes with diameter / (2 * inradius) above ``max_aspect`` are
        resampled, so the draw stays within desk-scale mesh sizes.
        """
        rng = np.random.default_rng(rng)
        while True:
            k = n_vertices or int(rng.integers(min_vertices, max_vertices + 1))
            th = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=k))
            if np.max(np.diff(np.concatenate([th, [th[0] + 2 * np.pi]]))) > 0.9 * np.pi:
                continue
            ax, ay = rng.uniform(0.5, 1.5, size=2)
            pts = np.column_stack([ax * np.cos(th), ay * np.sin(th)])
            pts = pts + rng.uniform(-1.0, 1.0, size=2)
            try:
                poly = cls(pts)
            except GeometryError:
                continue
            if poly.edge_lengths.min() < 0.05 * poly.diameter:
                continue
            if poly.diameter / (2.0 * chebyshev_center(poly.to_halfspaces()).radius) > max_aspect:
                continue
            return poly


@dataclass(frozen=True)
class HalfspaceSet:
    """Intersection of halfspaces ``<a_i, x> <= b_i``.

    ``A`` has shape (m, dim) and ``b`` shape (m,). Every normal must be
    nonzero.
    """

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise GeometryError("A and b have different numbers of rows")
        if A.shape[0] == 0:
            raise GeometryError("need at least one halfspace")
        if np.any(np.linalg.norm(A, axis=1) == 0.0):
            raise GeometryError("zero normal in halfspace row")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def dim(self):
        return self.A.shape[1]

    def __len__(self):
        return self.A.shape[0]

    @property
    def unit_normals(self):
        return self.A / np.linalg.norm(self.A, axis=1)[:, None]

    @property
    def unit_offsets(self):
        return self.b / np.linalg.norm(self.A, axis=1)

    def slacks(self, x):
        """Euclidean distances to each hyperplane, positive on the inside."""
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        return self.unit_offsets[None, :] - pts @ self.unit_normals.T

    def contains(self, x, tol=TOL):
        return np.all(self.slacks(x) >= -tol, axis=1)

    def is_bounded(self):
        """True when every coordinate is bounded on the region (LP check)."""
        for k in range(self.dim):
            for sign in (1.0, -1.0):
                c = np.zeros(self.dim)
                c[k] = sign
                res = linprog(c, A_ub=self.A, b_ub=self.b, bounds=[(None, None)] * self.dim, method="highs")
                if res.status == 2:
                    raise Infeasible("empty halfspace intersection")
                if res.status == 3:
                    return False
        return True

    def vertices_2d(self, tol=TOL):
        """Counterclockwise vertices of a bounded planar region."""
        if self.dim != 2:
            raise GeometryError("vertices_2d needs dim == 2")
        n, c = self.unit_normals, self.unit_offsets
        pts = []
        m = len(c)
        for i in range(m):
            for j in range(i + 1, m):
                M = np.array([n[i], n[j]])
                det = np.linalg.det(M)
                if abs(det) < 1e-12:
                    continue
                x = np.linalg.solve(M, [c[i], c[j]])
                if np.all(c - n @ x >= -tol * max(1.0, np.abs(x).max())):
                    pts.append(x)
        if len(pts) < 3:
            raise GeometryError("region is unbounded or degenerate")
        pts = np.array(pts)
        center = pts.mean(0)
        order = np.argsort(np.arctan2(pts[:, 1] - center[1], pts[:, 0] - center[0]))
        pts = pts[order]
        keep = [pts[0]]
        for x in pts[1:]:
            if np.linalg.norm(x - keep[-1]) > 1e-9 * max(1.0, np.abs(x).max()):
                keep.append(x)
        if np.linalg.norm(keep[0] - keep[-1]) <= 1e-9 * max(1.0, np.abs(keep[0]).max()):
            keep.pop()
        return np.array(keep)

    def to_polygon(self):
        return ConvexPolygon(self.vertices_2d())

    def to_json(self):
        rows = [{"a": a.tolist(), "b": float(bi)} for a, bi in zip(self.A, self.b)]
        return json.dumps({"dim": self.dim, "rows": rows})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        A = np.array([r["a"] for r in data["rows"]], dtype=float)
        b = np.array([r["b"] for r in data["rows"]], dtype=float)
        if A.shape[1] != data["dim"]:
            raise GeometryError("row length does not match dim")
        return cls(A, b)


@dataclass(frozen=True)
class InballResult:
    """Center and radius of a maximal inscribed ball, plus active rows."""

    center: np.ndarray
    radius: float
    active: tuple = ()

    def certificate_ok(self, H, tol=1e-7):
        """Optimality certificate: 0 lies in the convex hull of active normals."""
        if len(self.active) < 2:
            return False
        n = H.unit_normals[list(self.active)]
        k = len(n)
        res = linprog(
            np.zeros(k),
            A_eq=np.vstack([n.T, np.ones((1, k))]),
            b_eq=np.concatenate([np.zeros(H.dim), [1.0]]),
            bounds=[(0, None)] * k,
            method="highs",
        )
        return res.status == 0 and np.abs(n.T @ res.x).max() < tol


def to_halfspaces(poly: ConvexPolygon) -> HalfspaceSet:
    """One row per edge with unit outward normal."""
    return HalfspaceSet(poly.outward_normals.copy(), poly.offsets.copy())


def chebyshev_center(H: HalfspaceSet, tol=TOL) -> InballResult:
    """Largest ball inside ``H`` via the LP  max r  s.t.  <a_i,x> + r|a_i| <= b_i."""
    if isinstance(H, ConvexPolygon):
        H = to_halfspaces(H)
    m, n = H.A.shape
    norms = np.linalg.norm(H.A, axis=1)
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([H.A, norms[:, None]])
    res = linprog(c, A_ub=A_ub, b_ub=H.b, bounds=[(None, None)] * n + [(0, None)], method="highs")
    if res.status == 2:
        raise Infeasible("halfspace intersection is empty")
    if res.status == 3:
        raise UnboundedInradius("inradius is unbounded")
    if res.status != 0:
        raise GeometryError(f"LP failed: {res.message}")
    x, r = res.x[:n], float(res.x[-1])
    if r <= tol * max(1.0, np.abs(H.unit_offsets).max()):
        raise Infeasible("halfspace intersection has empty interior")
    slack = H.unit_offsets - H.unit_normals @ x - r
    active = tuple(int(i) for i in np.flatnonzero(np.abs(slack) <= 1e-7 * max(1.0, r)))
    return InballResult(center=x, radius=r, active=active)


def inradius(shape) -> float:
    if isinstance(shape, ShapeFamily):
        return shape.inradius
    return chebyshev_center(to_halfspaces(shape)).radius


def measure(shape) -> float:
    """Area of a polygon, or the closed-form N-measure of a shape family."""
    return shape.measure if isinstance(shape, ShapeFamily) else shape.area


def perimeter(shape) -> float:
    return shape.perimeter


def distance_to_boundary(poly: ConvexPolygon, x, tol=TOL):
    """Distance from interior point(s) to the boundary of a convex polygon.

    For points inside a convex polygon the nearest boundary point lies on
    the nearest edge line, so the distance is the smallest edge slack.
    """
    s = poly.slacks(x)
    if np.any(s.min(axis=1) < -tol):
        raise OutsideDomain("point outside polygon")
    d = np.maximum(s.min(axis=1), 0.0)
    return float(d[0]) if np.ndim(x) == 1 else d


@dataclass(frozen=True)
class ContactPoint:
    point: np.ndarray
    edge: int


def contact_set(poly: ConvexPolygon, inball: InballResult, tol=1e-7):
    """Boundary points at distance R from the inball center, with edge indices."""
    xi, R = np.asarray(inball.center, float), inball.radius
    out = []
    for i, (a, b) in enumerate(poly.edges):
        e = b - a
        t = np.clip(np.dot(xi - a, e) / np.dot(e, e), 0.0, 1.0)
        foot = a + t * e
        if abs(np.linalg.norm(foot - xi) - R) <= tol * max(1.0, R):
            out.append(ContactPoint(point=foot, edge=i))
    if len(out) < 2:
        raise DegenerateContact(f"only {len(out)} contact point(s) within tol={tol}")
    return out


def _largest_gap(angles):
    a = np.sort(np.mod(angles, 2.0 * np.pi))
    gaps = np.diff(np.concatenate([a, [a[0] + 2.0 * np.pi]]))
    return float(gaps.max())


@dataclass(frozen=True)
class Envelope:
    """Tangent-halfplane envelope of a polygon and the contacts it uses."""

    halfspaces: HalfspaceSet
    inball: InballResult
    contacts: tuple
    radius: float

    @property
    def m(self):
        return len(self.contacts)


def polyhedral_envelope(poly: ConvexPolygon, tol=TOL) -> Envelope:
    """Intersection of supporting halfplanes at contact points of the inball.

    Contacts are added greedily, each time picking the one that leaves the
    smallest largest angular gap between selected outward normals (ties go
    to the lower edge index). The first subset whose normals leave no gap
    of pi or more (so the intersection is bounded) and whose Chebyshev
    radius equals the inradius of ``poly`` within ``tol`` is returned. When
    the contacts cannot enclose a bounded set (a rectangle touched on two
    sides only) the same rule is applied with gaps of exactly pi allowed,
    which yields a strip.
    """
    H = to_halfspaces(poly)
    ball = chebyshev_center(H)
    contacts = contact_set(poly, ball)
    normals = poly.outward_normals
    angles = np.array([math.atan2(normals[c.edge][1], normals[c.edge][0]) for c in contacts])

    for max_gap in (np.pi - 1e-9, np.pi + 1e-9):
        chosen, remaining = [], list(range(len(contacts)))
        while remaining:
            best = min(
                remaining,
                key=lambda j: (_largest_gap(angles[chosen + [j]]) if chosen else 0.0, contacts[j].edge),
            )
            chosen.append(best)
            remaining.remove(best)
            if len(chosen) < 2 or _largest_gap(angles[chosen]) >= max_gap:
                continue
            rows = [contacts[j] for j in sorted(chosen, key=lambda j: contacts[j].edge)]
            T = HalfspaceSet(
                np.array([normals[c.edge] for c in rows]),
                np.array([normals[c.edge] @ c.point for c in rows]),
            )
            try:
                r_T = chebyshev_center(T).radius
            except UnboundedInradius:
                continue
            if abs(r_T - ball.radius) <= tol * max(1.0, ball.radius):
                return Envelope(halfspaces=T, inball=ball, contacts=tuple(rows), radius=r_T)
    raise EnvelopeFailure("no subset of contact halfplanes reproduces the inradius")


@dataclass(frozen=True)
class PyramidPiece:
    """Cone over one face of a tangential polygon with apex at the inball center."""

    face: int
    apex: np.ndarray
    measure: float
    base: np.ndarray = field(repr=False)

    @property
    def height(self):
        a, b = self.base
        n = np.array([b[1] - a[1], a[0] - b[0]])
        return abs(np.dot(self.apex - a, n)) / np.linalg.norm(n)

    def polygon(self):
        """The piece as a triangle; its edge 0 is the base face."""
        return ConvexPolygon([self.base[0], self.base[1], self.apex])


def pyramid_decomposition(T, inball: InballResult, tol=1e-7):
    """Split a bounded polygon whose faces all touch the inball into cones.

    Returns one :class:`PyramidPiece` per face, with apex at the inball
    center; the piece measures add up to the area of ``T``.
    """
    H = T.to_halfspaces() if isinstance(T, ConvexPolygon) else T
    if H.dim != 2:
        raise GeometryError("pyramid_decomposition is planar")
    xi = np.asarray(inball.center, float)
    R = inball.radius
    dist = H.unit_offsets - H.unit_normals @ xi
    bad = np.flatnonzero(np.abs(dist - R) > tol * max(1.0, R))
    if bad.size:
        raise TangencyViolation(f"faces {bad.tolist()} are not tangent to the inball")
    if not H.is_bounded():
        raise GeometryError("pyramid_decomposition requires a bounded region")
    verts = H.vertices_2d()
    k = len(verts)
    pieces = []
    for i in range(k):
        a, b = verts[i], verts[(i + 1) % k]
        mid = 0.5 * (a + b)
        face = int(np.argmin(np.abs(H.unit_offsets - H.unit_normals @ mid)))
        area = 0.5 * abs(_cross(a - xi, b - xi))
        pieces.append(PyramidPiece(face=face, apex=xi.copy(), measure=float(area), base=np.array([a, b])))
    return pieces


# -- analytic families ---------------------------------------------------------


@dataclass(frozen=True)
class ShapeFamily:
    """Parametric convex shapes with closed-form R, |Omega| and P.

    ``kind`` is one of ``box``, ``slab_section``, ``collapsing_pyramid``,
    ``regular_polygon``, ``disk``; ``params`` holds the matching parameters.
    Use the classmethod constructors rather than building this directly.
    """

    kind: str
    params: dict

    @classmethod
    def box(cls, *lengths):
        lengths = tuple(check_positive(L, "L") for L in lengths)
        if len(lengths) < 1:
            raise GeometryError("box needs at least one side length")
        return cls("box", {"lengths": lengths})

    @classmethod
    def slab_section(cls, N, L, width=1.0):
        """The box (-L/2, L/2)^(N-1) x (0, width): a truncated slab."""
        N = check_integer(N, "N", lo=2)
        return cls("slab_section", {"N": N, "L": check_positive(L, "L"), "width": check_positive(width, "width")})

    @classmethod
    def collapsing_pyramid(cls, N, alpha):
        N = check_integer(N, "N", lo=2)
        if not alpha > 0:
            raise GeometryError(f"alpha must be > 0, got {alpha}")
        return cls("collapsing_pyramid", {"N": N, "alpha": float(alpha)})

    @classmethod
    def regular_polygon(cls, k, circumradius=1.0):
        return cls("regular_polygon", {"k": check_integer(k, "k", lo=3), "circumradius": check_positive(circumradius, "circumradius")})

    @classmethod
    def disk(cls, r=1.0):
        return cls("disk", {"r": check_positive(r, "r")})

    @property
    def dim(self):
        if self.kind == "box":
            return len(self.params["lengths"])
        if self.kind in ("slab_section", "collapsing_pyramid"):
            return self.params["N"]
        return 2

    def _box_lengths(self):
        if self.kind == "box":
            return self.params["lengths"]
        N, L, w = self.params["N"], self.params["L"], self.params["width"]
        return (L,) * (N - 1) + (w,)

    @property
    def inradius(self):
        k = self.kind
        if k in ("box", "slab_section"):
            return min(self._box_lengths()) / 2.0
        if k == "collapsing_pyramid":
            a = self.params["alpha"]
            return a / (1.0 + math.sqrt(1.0 + a * a))
        if k == "regular_polygon":
            return self.params["circumradius"] * math.cos(math.pi / self.params["k"])
        return self.params["r"]

    @property
    def measure(self):
        k = self.kind
        if k in ("box", "slab_section"):
            return float(np.prod(self._box_lengths()))
        if k == "collapsing_pyramid":
            N, a = self.params["N"], self.params["alpha"]
            return a * 2.0 ** (N - 1) / N
        if k == "regular_polygon":
            n, rho = self.params["k"], self.params["circumradius"]
            return 0.5 * n * rho * rho * math.sin(2.0 * math.pi / n)
        return math.pi * self.params["r"] ** 2

    @property
    def perimeter(self):
        k = self.kind
        if k in ("box", "slab_section"):
            L = np.array(self._box_lengths())
            return float(2.0 * sum(np.prod(np.delete(L, i)) for i in range(len(L))))
        if k == "collapsing_pyramid":
            # base (N-1)-cube plus 2(N-1) lateral cones of slant height sqrt(1 + alpha^2)
            N, a = self.params["N"], self.params["alpha"]
            return 2.0 ** (N - 1) * (1.0 + math.sqrt(1.0 + a * a))
        if k == "regular_polygon":
            n, rho = self.params["k"], self.params["circumradius"]
            return 2.0 * n * rho * math.sin(math.pi / n)
        return 2.0 * math.pi * self.params["r"]

    def polygon(self, n_disk=256):
        """Planar realization; disks become inscribed regular ``n_disk``-gons."""
        if self.dim != 2:
            raise GeometryError(f"{self.kind} in dimension {self.dim} has no polygon")
        k = self.kind
        if k in ("box", "slab_section"):
            Lx, Ly = self._box_lengths()
            x0 = -Lx / 2.0
            y0 = 0.0 if k == "slab_section" else -Ly / 2.0
            return ConvexPolygon.rectangle(Lx, Ly, origin=(x0, y0))
        if k == "collapsing_pyramid":
            a = self.params["alpha"]
            return ConvexPolygon([[-1.0, 0.0], [1.0, 0.0], [0.0, a]])
        if k == "regular_polygon":
            return ConvexPolygon.regular(self.params["k"], self.params["circumradius"])
        return ConvexPolygon.regular(n_disk, self.params["r"])

    def to_json(self):
        d = {"kind": self.kind}
        for key, val in self.params.items():
            d["alpha" if key == "alpha" else key] = list(val) if isinstance(val, tuple) else val
        return json.dumps(d)

    @classmethod
    def from_json(cls, text):
        d = dict(json.loads(text) if isinstance(text, str) else text)
        kind = d.pop("kind")
        if kind == "box":
            return cls.box(*d["lengths"])
        if kind == "slab_section":
            return cls.slab_section(d["N"], d["L"], d.get("width", 1.0))
        if kind == "collapsing_pyramid":
            return cls.collapsing_pyramid(d["N"], d["alpha"])
        if kind == "regular_polygon":
            return cls.regular_polygon(d["k"], d.get("circumradius", 1.0))
        if kind == "disk":
            return cls.disk(d.get("r", 1.0))
        raise GeometryError(f"unknown shape kind {kind!r}")


@dataclass(frozen=True)
class CollapsingPyramid:
    """Inradius, measure and perimeter of conv((-1,1)^(N-1) x {0} and (0,...,0,alpha))."""

    N: int
    alpha: float
    R: float
    measure: float
    perimeter: float
    perimeter_exact: bool = True

    @property
    def polygon(self):
        """The planar triangle (N = 2 only; needles below alpha ~ 4e-6 are rejected)."""
        return ShapeFamily.collapsing_pyramid(self.N, self.alpha).polygon()


def collapsing_pyramid(N, alpha) -> CollapsingPyramid:
    fam = ShapeFamily.collapsing_pyramid(N, alpha)
    return CollapsingPyramid(
        N=fam.params["N"],
        alpha=fam.params["alpha"],
        R=fam.inradius,
        measure=fam.measure,
        perimeter=fam.perimeter,
    )


def load_shape(text):
    """Parse polygon or shape-family JSON."""
    data = json.loads(text) if isinstance(text, str) else text
    if "vertices" in data:
        return ConvexPolygon(data["vertices"])
    if "rows" in data:
        return HalfspaceSet.from_json(data)
    return ShapeFamily.from_json(data)
