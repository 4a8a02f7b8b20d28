"""Conforming triangle meshes of convex polygons."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.spatial import Delaunay

from .exceptions import MeshFailure
from .geometry import ConvexPolygon

# longest_edge^2 / area above this counts as a needle
NEEDLE_RATIO = 1e3


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    """Triangulation of a polygon with boundary bookkeeping.

    ``node_edges[i]`` holds the polygon edge indices node ``i`` lies on
    (two for a polygon vertex, one on an edge interior, none inside), padded
    with -1.
    """

    nodes: np.ndarray
    triangles: np.ndarray
    node_edges: np.ndarray
    n_polygon_edges: int
    h: float

    @property
    def n_nodes(self):
        return len(self.nodes)

    @cached_property
    def areas(self):
        a, b, c = (self.nodes[self.triangles[:, k]] for k in range(3))
        return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))

    @cached_property
    def centroids(self):
        return self.nodes[self.triangles].mean(axis=1)

    @property
    def boundary(self):
        return np.any(self.node_edges >= 0, axis=1)

    def dirichlet_mask(self, dirichlet_edges=None):
        """Nodes on the closure of the marked edges (all edges if None)."""
        if dirichlet_edges is None:
            return self.boundary
        marked = np.array(sorted(set(int(e) for e in dirichlet_edges)))
        return np.isin(self.node_edges, marked).any(axis=1)

    def marks(self, dirichlet_edges=None):
        return np.where(self.dirichlet_mask(dirichlet_edges), "Dirichlet", "Free")

    @cached_property
    def edges(self):
        """Unique undirected edges as sorted node pairs."""
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        return np.unique(np.sort(e, axis=1), axis=0)

    @property
    def max_edge(self):
        d = self.nodes[self.edges[:, 0]] - self.nodes[self.edges[:, 1]]
        return float(np.hypot(d[:, 0], d[:, 1]).max())

    @cached_property
    def gradient_operators(self):
        """Sparse (n_tri, n_nodes) matrices giving the constant gradient per triangle."""
        t = self.triangles
        x, y = self.nodes[t, 0], self.nodes[t, 1]
        two_a = 2.0 * self.areas
        # d(phi_k)/dx = (y_{k+1} - y_{k+2}) / 2A,  d(phi_k)/dy = (x_{k+2} - x_{k+1}) / 2A
        bx = (np.roll(y, -1, axis=1) - np.roll(y, -2, axis=1)) / two_a[:, None]
        by = (np.roll(x, -2, axis=1) - np.roll(x, -1, axis=1)) / two_a[:, None]
        rows = np.repeat(np.arange(len(t)), 3)
        shape = (len(t), self.n_nodes)
        Gx = sp.csr_matrix((bx.ravel(), (rows, t.ravel())), shape=shape)
        Gy = sp.csr_matrix((by.ravel(), (rows, t.ravel())), shape=shape)
        return Gx, Gy

    @cached_property
    def centroid_operator(self):
        t = self.triangles
        rows = np.repeat(np.arange(len(t)), 3)
        return sp.csr_matrix((np.full(t.size, 1.0 / 3.0), (rows, t.ravel())), shape=(len(t), self.n_nodes))

    def to_json(self, dirichlet_edges=None):
        return json.dumps(
            {
                "nodes": self.nodes.tolist(),
                "triangles": self.triangles.tolist(),
                "marks": self.marks(dirichlet_edges).tolist(),
            }
        )


def _boundary_points(poly: ConvexPolygon, h):
    pts, tags = [], []
    k = len(poly)
    for i, (a, b) in enumerate(poly.edges):
        m = max(1, math.ceil(poly.edge_lengths[i] / h - 1e-9))
        for j in range(m):
            pts.append(a + (b - a) * (j / m))
            tags.append((i, (i - 1) % k) if j == 0 else (i, -1))
    return np.array(pts), np.array(tags, dtype=int)


def _delaunay(nodes):
    tri = Delaunay(nodes)
    if len(tri.coplanar):
        raise MeshFailure(f"{len(tri.coplanar)} nodes dropped by the triangulator")
    return tri.simplices.astype(np.int64)


def triangulate(poly: ConvexPolygon, h=None, *, interior_margin=0.5, max_edge_factor=1.45, max_passes=20):
    """Conforming triangulation with target edge length ``h``.

    Each polygon edge is split into ``ceil(length / h)`` equal segments;
    interior nodes come from a square lattice of spacing ``h`` anchored at
    the bounding-box corner, dropping lattice points closer than
    ``interior_margin * h`` to the boundary. The node set is triangulated
    by Delaunay, and edges longer than ``max_edge_factor * h`` are split at
    their midpoints until none remain. Deterministic in (polygon, h).

    The default ``h`` is diameter / 64, reduced below the shortest edge
    when needed (many-sided disk stand-ins).
    """
    if h is None:
        h = min(poly.diameter / 64.0, 0.9 * poly.edge_lengths.min())
    h = float(h)
    if not h > 0:
        raise ValueError("h must be positive")
    if h >= poly.edge_lengths.min():
        raise MeshFailure(f"h={h:g} must be below the shortest polygon edge {poly.edge_lengths.min():g}")
    bpts, btags = _boundary_points(poly, h)

    lo = poly.vertices.min(0)
    hi = poly.vertices.max(0)
    gx = lo[0] + h * np.arange(1, int(np.floor((hi[0] - lo[0]) / h)) + 1)
    gy = lo[1] + h * np.arange(1, int(np.floor((hi[1] - lo[1]) / h)) + 1)
    X, Y = np.meshgrid(gx, gy)
    lattice = np.column_stack([X.ravel(), Y.ravel()])
    if len(lattice):
        lattice = lattice[poly.slacks(lattice).min(axis=1) > interior_margin * h]
    nodes = np.vstack([bpts, lattice])
    tags = np.vstack([btags, -np.ones((len(lattice), 2), dtype=int)])

    # staircase gaps between lattice and slanted edges: split long edges
    for _ in range(max_passes):
        t = _delaunay(nodes)
        e = np.unique(np.sort(np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1), axis=0)
        length = np.linalg.norm(nodes[e[:, 0]] - nodes[e[:, 1]], axis=1)
        ta, tb = tags[e[:, 0]], tags[e[:, 1]]
        same_side = ((ta[:, :1] == tb) & (ta[:, :1] >= 0)).any(1) | ((ta[:, 1:] == tb) & (ta[:, 1:] >= 0)).any(1)
        # edges along one polygon side only appear in flat hull slivers
        long = e[(length > max_edge_factor * h) & ~same_side]
        if len(long) == 0:
            break
        mid = 0.5 * (nodes[long[:, 0]] + nodes[long[:, 1]])
        nodes = np.vstack([nodes, mid])
        tags = np.vstack([tags, -np.ones((len(mid), 2), dtype=int)])
    else:
        raise MeshFailure("edge splitting did not reach the target edge length")
    a, b, c = (nodes[t[:, k]] for k in range(3))
    area = 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
    # collinear boundary triples can produce flat slivers on the hull
    keep = np.abs(area) > 1e-12 * h * h
    t, area = t[keep], area[keep]
    t[area < 0] = t[area < 0][:, [0, 2, 1]]
    mesh = TriangleMesh(nodes=nodes, triangles=t, node_edges=tags, n_polygon_edges=len(poly), h=h)
    _check_mesh(mesh, poly)
    return mesh


def _check_mesh(mesh: TriangleMesh, poly: ConvexPolygon):
    area = mesh.areas
    if np.any(area <= 1e-14):
        raise MeshFailure("triangle with non-positive area")
    if abs(area.sum() - poly.area) > 1e-12 * max(1.0, poly.area) * 10:
        raise MeshFailure(f"triangles cover area {area.sum():.15g}, polygon has {poly.area:.15g}")
    e = mesh.nodes[mesh.triangles] - np.roll(mesh.nodes[mesh.triangles], 1, axis=1)
    longest2 = (e**2).sum(-1).max(1)
    ratio = longest2 / area
    if ratio.max() > NEEDLE_RATIO:
        raise MeshFailure(f"needle triangle: longest_edge^2/area = {ratio.max():.3g}")


def refine(mesh: TriangleMesh) -> TriangleMesh:
    """Split every triangle into four through its edge midpoints.

    The coarse P1 space is contained in the refined one, so discrete
    minima can only decrease.
    """
    edges = mesh.edges
    n0 = mesh.n_nodes
    mid = 0.5 * (mesh.nodes[edges[:, 0]] + mesh.nodes[edges[:, 1]])
    ea, eb = mesh.node_edges[edges[:, 0]], mesh.node_edges[edges[:, 1]]
    mid_tags = -np.ones((len(edges), 2), dtype=int)
    for k in range(2):
        common = (ea[:, [k]] == eb).any(axis=1) & (ea[:, k] >= 0)
        mid_tags[common, 0] = ea[common, k]
    index = {(int(a), int(b)): n0 + i for i, (a, b) in enumerate(edges)}

    def m(i, j):
        return index[(i, j) if i < j else (j, i)]

    tris = []
    for a, b, c in mesh.triangles.tolist():
        ab, bc, ca = m(a, b), m(b, c), m(c, a)
        tris += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
    return TriangleMesh(
        nodes=np.vstack([mesh.nodes, mid]),
        triangles=np.array(tris, dtype=np.int64),
        node_edges=np.vstack([mesh.node_edges, mid_tags]),
        n_polygon_edges=mesh.n_polygon_edges,
        h=mesh.h / 2.0,
    )
