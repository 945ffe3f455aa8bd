"""2D simplicial meshes: connectivity, orientation, refinement, geometry.

Edges carry a global orientation from the low vertex index to the high
one; each triangle records, for its three local edges (v0,v1), (v1,v2),
(v2,v0), the global edge index and a sign telling whether the local
traversal agrees with the global orientation.  That sign table is what
reconciles element-local 1-form coefficients with the shared edge
degrees of freedom during assembly.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTriangleError, MeshError, NonManifoldEdgeError


@dataclass
class SimplicialMesh2D:
    vertices: np.ndarray        # (V, 2) float
    triangles: np.ndarray       # (F, 3) int, CCW
    edges: np.ndarray           # (E, 2) int, low index -> high index
    triangle_edges: np.ndarray  # (F, 3) int, global edge per local edge
    triangle_edge_signs: np.ndarray  # (F, 3) int in {+1, -1}
    boundary_edges: np.ndarray  # indices into edges with one incident triangle
    vertex_markers: np.ndarray  # (V,) int
    edge_markers: np.ndarray    # (E,) int
    triangle_markers: np.ndarray = field(default=None)

    @property
    def num_vertices(self):
        return len(self.vertices)

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def num_triangles(self):
        return len(self.triangles)

    def boundary_vertices(self):
        """Indices of vertices lying on at least one boundary edge."""
        return np.unique(self.edges[self.boundary_edges].ravel())

    def vertices_of_marked_edges(self, marker):
        """Vertex indices touched by edges carrying ``marker``."""
        sel = np.nonzero(self.edge_markers == marker)[0]
        return np.unique(self.edges[sel].ravel())


@dataclass
class ElementGeometry:
    """Affine map data of one triangle.

    ``T`` has the first and second vertex offsets from the base vertex
    as columns, det(T) = 2*area, and ``grad_lambda`` holds the constant
    Cartesian gradients of the three barycentric coordinates (they sum
    to zero componentwise).
    """
    vertex_coords: np.ndarray  # (3, 2)
    T: np.ndarray              # (2, 2)
    area: float
    grad_lambda: np.ndarray    # (3, 2)


def build_mesh(vertices, triangles, vertex_markers=None, triangle_markers=None):
    """Assemble the full connectivity from vertices and CCW triangles.

    Raises ``DegenerateTriangleError`` for non-positive triangle areas
    and ``NonManifoldEdgeError`` when an edge has three or more incident
    triangles.  Duplicate triangles are rejected.
    """
    vertices = np.asarray(vertices, dtype=float).reshape(-1, 2)
    triangles = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    nv = len(vertices)
    if triangles.size and (triangles.min() < 0 or triangles.max() >= nv):
        raise MeshError("triangle refers to a vertex outside 0..%d" % (nv - 1))
    seen = set()
    for t, tri in enumerate(triangles):
        key = tuple(sorted(tri))
        if len(key) != len(set(key)):
            raise MeshError("triangle %d repeats a vertex" % t)
        if key in seen:
            raise MeshError("duplicate triangle %d" % t)
        seen.add(key)

    p = vertices[triangles]
    areas = 0.5 * np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    bad = np.nonzero(areas <= 0.0)[0]
    if bad.size:
        raise DegenerateTriangleError(
            "triangle %d has non-positive area %g" % (bad[0], areas[bad[0]]))

    edge_index = {}
    edge_list = []
    incidence = []
    tri_edges = np.empty((len(triangles), 3), dtype=np.int64)
    tri_signs = np.empty((len(triangles), 3), dtype=np.int64)
    for t, tri in enumerate(triangles):
        for k, (i, j) in enumerate(((0, 1), (1, 2), (2, 0))):
            a, b = int(tri[i]), int(tri[j])
            key = (a, b) if a < b else (b, a)
            e = edge_index.get(key)
            if e is None:
                e = len(edge_list)
                edge_index[key] = e
                edge_list.append(key)
                incidence.append(0)
            incidence[e] += 1
            if incidence[e] > 2:
                raise NonManifoldEdgeError(
                    "edge %s has more than two incident triangles" % (key,))
            tri_edges[t, k] = e
            tri_signs[t, k] = 1 if a < b else -1

    edges = np.array(edge_list, dtype=np.int64).reshape(-1, 2)
    boundary = np.nonzero(np.array(incidence) == 1)[0]

    if vertex_markers is None:
        vertex_markers = np.zeros(nv, dtype=np.int64)
    else:
        vertex_markers = np.asarray(vertex_markers, dtype=np.int64).copy()
    if triangle_markers is not None:
        triangle_markers = np.asarray(triangle_markers, dtype=np.int64).copy()

    return SimplicialMesh2D(
        vertices=vertices,
        triangles=triangles,
        edges=edges,
        triangle_edges=tri_edges,
        triangle_edge_signs=tri_signs,
        boundary_edges=boundary,
        vertex_markers=vertex_markers,
        edge_markers=np.zeros(len(edges), dtype=np.int64),
        triangle_markers=triangle_markers,
    )


def element_geometry(mesh, tri_index):
    """Per-triangle affine map data; errors on degenerate triangles."""
    coords = mesh.vertices[mesh.triangles[tri_index]]
    T = np.column_stack((coords[1] - coords[0], coords[2] - coords[0]))
    det = T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0]
    scale2 = max(np.abs(T).max() ** 2, 1.0e-300)
    if abs(det) < 1e-14 * scale2:
        raise DegenerateTriangleError(
            "triangle %d is degenerate (det T = %g)" % (tri_index, det))
    Tinv = np.array([[T[1, 1], -T[0, 1]], [-T[1, 0], T[0, 0]]]) / det
    gl = np.empty((3, 2))
    gl[1] = Tinv[0]
    gl[2] = Tinv[1]
    gl[0] = -gl[1] - gl[2]
    return ElementGeometry(vertex_coords=coords, T=T, area=0.5 * det,
                           grad_lambda=gl)


def all_grad_lambda(mesh):
    """Vectorized geometry for assembly: (grad_lambda (F,3,2), areas (F,))."""
    p = mesh.vertices[mesh.triangles]
    e1 = p[:, 1] - p[:, 0]
    e2 = p[:, 2] - p[:, 0]
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    if np.any(det <= 0.0):
        t = int(np.nonzero(det <= 0.0)[0][0])
        raise DegenerateTriangleError("triangle %d has det T = %g" % (t, det[t]))
    gl = np.empty((len(det), 3, 2))
    gl[:, 1, 0] = e2[:, 1] / det
    gl[:, 1, 1] = -e2[:, 0] / det
    gl[:, 2, 0] = -e1[:, 1] / det
    gl[:, 2, 1] = e1[:, 0] / det
    gl[:, 0] = -gl[:, 1] - gl[:, 2]
    return gl, 0.5 * det


def refine_uniform(mesh):
    """Split every triangle into four by the edge midpoints.

    Vertex markers are kept; a midpoint inherits the marker of its
    parent edge, and child edges lying on a parent edge inherit that
    edge's marker.  Triangle markers propagate to all four children.
    """
    V = mesh.num_vertices
    mid = V + np.arange(mesh.num_edges)
    new_vertices = np.vstack([
        mesh.vertices,
        0.5 * (mesh.vertices[mesh.edges[:, 0]] + mesh.vertices[mesh.edges[:, 1]]),
    ])

    tris = []
    for t in range(mesh.num_triangles):
        v0, v1, v2 = mesh.triangles[t]
        m01 = mid[mesh.triangle_edges[t, 0]]
        m12 = mid[mesh.triangle_edges[t, 1]]
        m20 = mid[mesh.triangle_edges[t, 2]]
        tris.extend([(v0, m01, m20), (v1, m12, m01), (v2, m20, m12),
                     (m01, m12, m20)])

    vmark = np.concatenate([mesh.vertex_markers, mesh.edge_markers])
    tmark = None
    if mesh.triangle_markers is not None:
        tmark = np.repeat(mesh.triangle_markers, 4)
    fine = build_mesh(new_vertices, np.array(tris, dtype=np.int64),
                      vertex_markers=vmark, triangle_markers=tmark)

    lookup = {tuple(e): i for i, e in enumerate(map(tuple, fine.edges))}
    for e in range(mesh.num_edges):
        m = mesh.edge_markers[e]
        if m == 0:
            continue
        a, b = mesh.edges[e]
        c = mid[e]
        for half in ((a, c), (c, b)):
            key = (min(half), max(half))
            fine.edge_markers[lookup[key]] = m
    return fine


def _structured_grid(nx, ny, corner_fn):
    """Triangulated logical grid; corner_fn maps (i/nx, j/ny) to xy."""
    verts = np.empty(((nx + 1) * (ny + 1), 2))
    for j in range(ny + 1):
        for i in range(nx + 1):
            verts[j * (nx + 1) + i] = corner_fn(i / nx, j / ny)
    tris = []
    for j in range(ny):
        for i in range(nx):
            a = j * (nx + 1) + i
            b = a + 1
            c = a + nx + 1
            d = c + 1
            tris.append((a, b, d))
            tris.append((a, d, c))
    return verts, np.array(tris, dtype=np.int64)


def _mark_edges(mesh, marker, predicate):
    """Set ``marker`` on boundary edges whose both endpoints satisfy
    ``predicate`` (a function of the vertex coordinates); the endpoints
    get the same vertex marker."""
    for e in mesh.boundary_edges:
        a, b = mesh.edges[e]
        if predicate(mesh.vertices[a]) and predicate(mesh.vertices[b]):
            mesh.edge_markers[e] = marker
            mesh.vertex_markers[a] = marker
            mesh.vertex_markers[b] = marker


# edge markers used by the benchmark generators
MARK_CLAMP = 1    # fully or symmetry-constrained in x
MARK_LOAD = 2     # loaded (traction) or prescribed-extension face
MARK_SYM_Y = 3    # symmetry-constrained in y
MARK_HOLE = 5     # hole arc (traction free)


def generate_cook(refinement, length=48.0, height_left=44.0, height_right=16.0):
    """Tapered cantilever panel: clamped edge at x=0 (marker 1), loaded
    edge at x=length (marker 2).  Lengths in mm."""
    n = 4 * 2 ** refinement

    def corner(s, t):
        x = length * s
        ybot = height_left * s
        ytop = height_left + height_right * s
        return (x, ybot + (ytop - ybot) * t)

    verts, tris = _structured_grid(n, n, corner)
    mesh = build_mesh(verts, tris)
    _mark_edges(mesh, MARK_CLAMP, lambda p: abs(p[0]) < 1e-12 * length)
    _mark_edges(mesh, MARK_LOAD, lambda p: abs(p[0] - length) < 1e-12 * length)
    return mesh


def generate_block(refinement, width=10.0, height=10.0, footprint=5.0):
    """Half model of a compressed rectangular block: symmetry plane at
    x=0 (marker 1), supported bottom y=0 (marker 3), pressure footprint
    on top for x <= footprint (marker 2).  Lengths in mm."""
    n = 4 * 2 ** refinement
    verts, tris = _structured_grid(
        n, n, lambda s, t: (width * s, height * t))
    mesh = build_mesh(verts, tris)
    tol = 1e-12 * max(width, height)
    _mark_edges(mesh, MARK_CLAMP, lambda p: abs(p[0]) < tol)
    _mark_edges(mesh, MARK_SYM_Y, lambda p: abs(p[1]) < tol)
    _mark_edges(mesh, MARK_LOAD,
                lambda p: abs(p[1] - height) < tol and p[0] <= footprint + tol)
    return mesh


def generate_plate_with_hole(refinement, side=1.0, hole_radius=0.5):
    """Quarter model of a square plate with a central circular hole.

    The quarter domain is [0, side]^2 minus the quarter disk at the
    origin; hole vertices lie exactly on the circle and their count
    grows with refinement.  Markers: x=0 symmetry (1), y=0 symmetry
    (3), extension face x=side (2), hole arc (5).  Lengths in cm.
    """
    n = 4 * 2 ** refinement

    def outer(phi):
        if phi <= np.pi / 4.0:
            return np.array([side, side * np.tan(phi)])
        return np.array([side * np.tan(np.pi / 2.0 - phi), side])

    def corner(s, t):
        phi = 0.5 * np.pi * t
        inner = hole_radius * np.array([np.cos(phi), np.sin(phi)])
        return tuple(inner + s * (outer(phi) - inner))

    verts, tris = _structured_grid(n, n, corner)
    mesh = build_mesh(verts, tris)
    tol = 1e-9 * side
    _mark_edges(mesh, MARK_CLAMP, lambda p: abs(p[0]) < tol)
    _mark_edges(mesh, MARK_SYM_Y, lambda p: abs(p[1]) < tol)
    _mark_edges(mesh, MARK_LOAD, lambda p: abs(p[0] - side) < tol)
    _mark_edges(mesh, MARK_HOLE,
                lambda p: abs(np.hypot(p[0], p[1]) - hole_radius) < tol)
    return mesh


def write_m2d(mesh, path):
    """ASCII mesh file: "m2d 1", "<nv> <nt>", vertex lines "x y", then
    triangle lines "i j k [marker]".  Coordinates round-trip bit-exactly."""
    lines = ["m2d 1", "%d %d" % (mesh.num_vertices, mesh.num_triangles)]
    for x, y in mesh.vertices:
        lines.append("%.17g %.17g" % (x, y))
    with_markers = (mesh.triangle_markers is not None
                    and np.any(mesh.triangle_markers != 0))
    for t in range(mesh.num_triangles):
        i, j, k = mesh.triangles[t]
        if with_markers:
            lines.append("%d %d %d %d" % (i, j, k, mesh.triangle_markers[t]))
        else:
            lines.append("%d %d %d" % (i, j, k))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_m2d(path):
    """Read a mesh file written by ``write_m2d``.

    The format carries no vertex or edge markers, so every boundary
    vertex and boundary edge is tagged with marker 1 (boundary-condition
    files address the whole boundary through that marker).
    """
    with open(path) as fh:
        tokens = fh.read().split("\n")
    tokens = [ln for ln in tokens if ln.strip()]
    if tokens[0].split() != ["m2d", "1"]:
        raise MeshError("not an m2d version-1 file: %r" % tokens[0])
    nv, nt = (int(w) for w in tokens[1].split())
    verts = np.array([[float(w) for w in tokens[2 + i].split()]
                      for i in range(nv)])
    tris = []
    tmark = []
    for i in range(nt):
        words = tokens[2 + nv + i].split()
        tris.append([int(w) for w in words[:3]])
        tmark.append(int(words[3]) if len(words) > 3 else 0)
    tmark = np.array(tmark, dtype=np.int64)
    mesh = build_mesh(verts, np.array(tris, dtype=np.int64),
                      triangle_markers=tmark if np.any(tmark) else None)
    for v in mesh.boundary_vertices():
        mesh.vertex_markers[v] = 1
    mesh.edge_markers[mesh.boundary_edges] = 1
    return mesh
