import numpy as np
import pytest

from formelast.errors import DegenerateTriangleError, MeshError, NonManifoldEdgeError
from formelast.mesh import (
    all_grad_lambda,
    build_mesh,
    element_geometry,
    generate_block,
    generate_cook,
    generate_plate_with_hole,
    read_m2d,
    refine_uniform,
    write_m2d,
)

SQUARE = build_mesh(
    [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
    [[0, 1, 2], [0, 2, 3]],
)


def euler_boundary_loops(mesh, loops=1):
    return mesh.num_vertices - mesh.num_edges + mesh.num_triangles == 2 - loops


def test_single_triangle_counts():
    mesh = build_mesh([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [[0, 1, 2]])
    assert mesh.num_vertices == 3
    assert mesh.num_edges == 3
    assert mesh.num_triangles == 1
    assert len(mesh.boundary_edges) == 3


def test_two_triangle_square_counts():
    assert SQUARE.num_vertices == 4
    assert SQUARE.num_edges == 5
    assert SQUARE.num_triangles == 2
    assert len(SQUARE.boundary_edges) == 4
    interior = set(range(5)) - set(SQUARE.boundary_edges.tolist())
    assert len(interior) == 1
    (e,) = interior
    assert sorted(SQUARE.edges[e]) == [0, 2]


def test_edges_low_to_high():
    for mesh in (SQUARE, generate_cook(0)):
        assert np.all(mesh.edges[:, 0] < mesh.edges[:, 1])


def test_interior_edge_opposite_orientations():
    mesh = refine_uniform(generate_cook(0))
    sums = np.zeros(mesh.num_edges)
    for t in range(mesh.num_triangles):
        for k in range(3):
            sums[mesh.triangle_edges[t, k]] += mesh.triangle_edge_signs[t, k]
    interior = np.setdiff1d(np.arange(mesh.num_edges), mesh.boundary_edges)
    assert np.all(sums[interior] == 0)
    assert np.all(np.abs(sums[mesh.boundary_edges]) == 1)


def test_euler_formula_disk():
    for mesh in (SQUARE, generate_cook(1), generate_block(0)):
        assert euler_boundary_loops(mesh, loops=1)


def test_build_rejects_negative_area():
    with pytest.raises(DegenerateTriangleError):
        build_mesh([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [[0, 2, 1]])


def test_build_rejects_non_manifold():
    with pytest.raises(NonManifoldEdgeError):
        build_mesh(
            [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, -1.0], [-1.0, 0.5]],
            [[0, 1, 2], [0, 3, 1], [0, 1, 4]])


def test_build_rejects_duplicates_and_bad_indices():
    with pytest.raises(MeshError):
        build_mesh([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
                   [[0, 1, 2], [0, 1, 2]])
    with pytest.raises(MeshError):
        build_mesh([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [[0, 1, 3]])


def test_element_geometry_reference():
    mesh = build_mesh([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [[0, 1, 2]])
    g = element_geometry(mesh, 0)
    assert g.area == pytest.approx(0.5)
    assert np.allclose(g.grad_lambda[1], [1.0, 0.0])
    assert np.allclose(g.grad_lambda[2], [0.0, 1.0])
    assert np.allclose(g.grad_lambda[0], [-1.0, -1.0])
    assert np.linalg.det(g.T) == pytest.approx(2.0 * g.area)


def test_element_geometry_scaling():
    mesh = build_mesh([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]], [[0, 1, 2]])
    g = element_geometry(mesh, 0)
    assert g.area == pytest.approx(2.0)
    assert np.allclose(g.grad_lambda[1], [0.5, 0.0])


def test_element_geometry_right_triangle():
    mesh = build_mesh([[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]], [[0, 1, 2]])
    g = element_geometry(mesh, 0)
    assert g.area == pytest.approx(1.0)
    assert np.linalg.det(g.T) == pytest.approx(2.0)


def test_grad_lambda_invariants_random():
    rng = np.random.default_rng(2)
    for _ in range(20):
        coords = rng.uniform(-3.0, 3.0, size=(3, 2))
        if np.cross(coords[1] - coords[0], coords[2] - coords[0]) < 0:
            coords[[1, 2]] = coords[[2, 1]]
        if 0.5 * abs(np.cross(coords[1] - coords[0], coords[2] - coords[0])) < 0.1:
            continue
        mesh = build_mesh(coords, [[0, 1, 2]])
        g = element_geometry(mesh, 0)
        assert np.allclose(g.grad_lambda.sum(axis=0), 0.0, atol=1e-13)
        # barycentric reproduction: lam_i(P_j) = delta_ij through the map
        for j in range(3):
            lam = g.grad_lambda @ (coords[j] - coords[0])
            lam[0] += 1.0
            assert np.allclose(lam, np.eye(3)[j], atol=1e-12)


def test_all_grad_lambda_matches_element_geometry():
    mesh = generate_cook(0)
    gl, areas = all_grad_lambda(mesh)
    for t in (0, 5, mesh.num_triangles - 1):
        g = element_geometry(mesh, t)
        assert np.allclose(gl[t], g.grad_lambda, atol=1e-14)
        assert areas[t] == pytest.approx(g.area)


def test_refine_single_triangle():
    mesh = build_mesh([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [[0, 1, 2]])
    fine = refine_uniform(mesh)
    assert fine.num_triangles == 4
    assert fine.num_vertices == 6
    assert fine.num_edges == 9
    assert euler_boundary_loops(fine, loops=1)


def test_refine_square_counts_and_areas():
    fine = refine_uniform(SQUARE)
    assert fine.num_triangles == 8
    assert fine.num_vertices == SQUARE.num_vertices + SQUARE.num_edges
    _, coarse_areas = all_grad_lambda(SQUARE)
    _, fine_areas = all_grad_lambda(fine)
    for t in range(SQUARE.num_triangles):
        children = fine_areas[4 * t:4 * t + 4].sum()
        assert abs(children - coarse_areas[t]) < 1e-12 * coarse_areas[t]


def test_refine_inherits_markers():
    mesh = generate_block(0)
    fine = refine_uniform(mesh)
    for marker in (1, 2, 3):
        coarse_len = _marked_length(mesh, marker)
        fine_len = _marked_length(fine, marker)
        assert fine_len == pytest.approx(coarse_len)


def _marked_length(mesh, marker):
    sel = mesh.edge_markers == marker
    d = mesh.vertices[mesh.edges[sel, 1]] - mesh.vertices[mesh.edges[sel, 0]]
    return np.hypot(d[:, 0], d[:, 1]).sum()


def test_generate_cook_geometry():
    mesh = generate_cook(0)
    x = mesh.vertices[:, 0]
    y = mesh.vertices[:, 1]
    assert x.min() == pytest.approx(0.0)
    assert x.max() == pytest.approx(48.0)
    assert y.max() == pytest.approx(60.0)
    assert _marked_length(mesh, 1) == pytest.approx(44.0)
    assert _marked_length(mesh, 2) == pytest.approx(16.0)
    # probe corner exists at every refinement
    for r in (0, 1):
        m = generate_cook(r)
        d = np.hypot(m.vertices[:, 0] - 48.0, m.vertices[:, 1] - 60.0)
        assert d.min() < 1e-9


def test_generate_block_geometry():
    mesh = generate_block(0)
    assert _marked_length(mesh, 2) == pytest.approx(5.0)
    assert _marked_length(mesh, 1) == pytest.approx(10.0)
    assert _marked_length(mesh, 3) == pytest.approx(10.0)
    assert euler_boundary_loops(mesh, loops=1)


def test_generate_plate_geometry():
    mesh = generate_plate_with_hole(0)
    r = np.hypot(mesh.vertices[:, 0], mesh.vertices[:, 1])
    assert r.min() == pytest.approx(0.5, abs=1e-12)
    hole = mesh.edge_markers == 5
    for e in np.nonzero(hole)[0]:
        for v in mesh.edges[e]:
            assert np.hypot(*mesh.vertices[v]) == pytest.approx(0.5, abs=1e-12)
    n_hole_coarse = hole.sum()
    n_hole_fine = (generate_plate_with_hole(1).edge_markers == 5).sum()
    assert n_hole_fine == 2 * n_hole_coarse
    assert euler_boundary_loops(mesh, loops=1)
    # all three boundary-condition groups are present
    for marker in (1, 2, 3):
        assert np.any(mesh.edge_markers == marker)


def test_m2d_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(41)
    mesh = generate_plate_with_hole(0)
    # perturb to exercise full 17-digit coordinates
    mesh.vertices[:, 0] += rng.uniform(0, 1e-13, size=mesh.num_vertices)
    path = tmp_path / "mesh.m2d"
    write_m2d(mesh, path)
    back = read_m2d(path)
    assert np.array_equal(back.vertices, mesh.vertices)
    assert np.array_equal(back.triangles, mesh.triangles)
    write_m2d(back, tmp_path / "again.m2d")
    assert (tmp_path / "again.m2d").read_text() == path.read_text()


def test_m2d_reader_marks_boundary(tmp_path):
    path = tmp_path / "square.m2d"
    write_m2d(SQUARE, path)
    back = read_m2d(path)
    assert np.all(back.vertex_markers == 1)
    assert np.all(back.edge_markers[back.boundary_edges] == 1)
    interior = np.setdiff1d(np.arange(back.num_edges), back.boundary_edges)
    assert np.all(back.edge_markers[interior] == 0)
