import numpy as np

from plapbounds.geometry import ConvexPolygon

# inball touches only three of the five edges; the three tangent lines form
# the 3-4-5 triangle with incircle centre (1, 1)
PENTAGON = [(0.0, 0.0), (3.6, 0.0), (3.6, 0.3), (0.4, 2.7), (0.0, 2.7)]


def random_polygons(n, seed=0):
    rng = np.random.default_rng(seed)
    return [ConvexPolygon.random(rng) for _ in range(n)]


def sample_shapes():
    """Polygons used by the chain and Hardy checks."""
    return {
        "square": ConvexPolygon.unit_square(),
        "right_triangle": ConvexPolygon([(0, 0), (4, 0), (0, 3)]),
        "hexagon": ConvexPolygon.regular(6),
        "pentagon": ConvexPolygon(PENTAGON),
        "rectangle": ConvexPolygon.rectangle(3.0, 1.0),
    }


def hand_mesh():
    """Unit square split into 8 right triangles on a 3 x 3 grid, every
    diagonal parallel to (1, 1). The centre node touches six triangles."""
    from plapbounds.mesh import TriangleMesh

    nodes = np.array([(i / 2, j / 2) for j in range(3) for i in range(3)], dtype=float)
    tris = []
    for j in range(2):
        for i in range(2):
            a, b, c, d = i + 3 * j, i + 1 + 3 * j, i + 1 + 3 * (j + 1), i + 3 * (j + 1)
            tris += [(a, b, c), (a, c, d)]
    edges = np.full((9, 2), -1)
    for k, (x, y) in enumerate(nodes):
        tags = [e for e, on in ((0, y == 0), (1, x == 1), (2, y == 1), (3, x == 0)) if on]
        edges[k, : len(tags)] = tags
    return TriangleMesh(nodes, np.array(tris), edges, 4, 0.5)
