import struct

import numpy as np
import pytest

from meshqc import (
    OBJ,
    STL_ASCII,
    STL_BINARY,
    EmptyMeshError,
    IndexOutOfRangeError,
    MalformedFileError,
    detect_format,
    parse_mesh,
    total_surface,
    write_mesh,
)
from helpers import cube_mesh, random_mesh, tetra_mesh

MINIMAL_ASCII_STL = """solid one
  facet normal 0 0 1
    outer loop
      vertex 0 0 0
      vertex 1 0 0
      vertex 0 1 0
    endloop
  endfacet
endsolid one
"""


def corners(mesh):
    v0, v1, v2 = mesh.corners()
    return np.stack([v0, v1, v2], axis=1)


def test_parse_minimal_ascii_stl():
    mesh = parse_mesh(MINIMAL_ASCII_STL.encode(), STL_ASCII)
    assert mesh.vertex_count == 3
    assert mesh.face_count == 1
    assert mesh.name == "one"


def test_parse_obj_quad_fan_triangulated():
    obj = b"v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n"
    mesh = parse_mesh(obj, OBJ)
    assert mesh.face_count == 2
    assert mesh.faces.tolist() == [[0, 1, 2], [0, 2, 3]]


def test_binary_stl_cube_built_by_hand():
    """Assemble the 12-facet cube file from analytic data, then parse it."""
    cube = cube_mesh()
    v0, v1, v2 = cube.corners()
    blob = b"\x00" * 80 + struct.pack("<I", 12)
    for a, b, c in zip(v0, v1, v2):
        blob += struct.pack("<3f", 0.0, 0.0, 0.0)  # normal ignored by parser
        for corner in (a, b, c):
            blob += struct.pack("<3f", *corner)
        blob += struct.pack("<H", 0)
    mesh = parse_mesh(blob, STL_BINARY)
    assert mesh.face_count == 12
    assert mesh.vertex_count == 8  # exact duplicates welded
    assert total_surface(mesh) == 6.0


def test_one_triangle_ascii_roundtrip_identical():
    mesh = parse_mesh(MINIMAL_ASCII_STL.encode(), STL_ASCII)
    back = parse_mesh(write_mesh(mesh, STL_ASCII), STL_ASCII)
    assert np.array_equal(corners(mesh), corners(back))


def test_cube_binary_roundtrip_exact():
    cube = cube_mesh()  # all coordinates are float32-representable
    back = parse_mesh(write_mesh(cube, STL_BINARY), STL_BINARY)
    assert np.array_equal(corners(cube), corners(back))


def test_random_mesh_obj_roundtrip():
    rng = np.random.default_rng(3)
    mesh = random_mesh(rng, 1000)
    back = parse_mesh(write_mesh(mesh, OBJ), OBJ)
    assert back.face_count == mesh.face_count
    assert np.abs(corners(back) - corners(mesh)).max() < 1e-6
    # repr-printed floats actually recover the doubles exactly
    assert np.array_equal(back.vertices, mesh.vertices)


@pytest.mark.parametrize("fmt", [STL_BINARY, STL_ASCII, OBJ])
def test_roundtrip_preserves_face_order(fmt):
    rng = np.random.default_rng(4)
    mesh = random_mesh(rng, 60)
    back = parse_mesh(write_mesh(mesh, fmt), fmt)
    want = corners(mesh).astype(np.float32) if fmt == STL_BINARY else corners(mesh)
    assert np.array_equal(corners(back), np.asarray(want, dtype=np.float64))


@pytest.mark.parametrize("fmt", [STL_BINARY, STL_ASCII, OBJ])
def test_name_survives_roundtrip(fmt):
    mesh = tetra_mesh(name="spool_piece")
    back = parse_mesh(write_mesh(mesh, fmt), fmt)
    assert back.name == "spool_piece"


def test_binary_stl_truncated():
    cube = cube_mesh()
    data = write_mesh(cube, STL_BINARY)
    with pytest.raises(MalformedFileError):
        parse_mesh(data[:200], STL_BINARY)
    with pytest.raises(MalformedFileError):
        parse_mesh(data[:50], STL_BINARY)


def test_binary_stl_zero_facets():
    with pytest.raises(EmptyMeshError):
        parse_mesh(b"\x00" * 80 + struct.pack("<I", 0), STL_BINARY)


def test_ascii_stl_garbled():
    with pytest.raises(MalformedFileError):
        parse_mesh(b"solid x\n  facet normal 0 0 oops\n", STL_ASCII)
    with pytest.raises(MalformedFileError):
        parse_mesh(b"not an stl at all", STL_ASCII)


def test_ascii_stl_truncated():
    text = MINIMAL_ASCII_STL[: MINIMAL_ASCII_STL.index("endloop")]
    with pytest.raises(MalformedFileError):
        parse_mesh(text.encode(), STL_ASCII)


def test_ascii_stl_no_facets_is_empty():
    with pytest.raises(EmptyMeshError):
        parse_mesh(b"solid nothing\nendsolid nothing\n", STL_ASCII)


def test_obj_no_faces_is_empty():
    with pytest.raises(EmptyMeshError):
        parse_mesh(b"v 0 0 0\nv 1 0 0\nv 0 1 0\n", OBJ)


def test_obj_index_out_of_range():
    with pytest.raises(IndexOutOfRangeError):
        parse_mesh(b"v 0 0 0\nv 1 0 0\nf 1 2 3\n", OBJ)
    with pytest.raises(IndexOutOfRangeError):
        parse_mesh(b"v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n", OBJ)


def test_obj_negative_indices_resolve():
    obj = b"v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n"
    mesh = parse_mesh(obj, OBJ)
    assert mesh.faces.tolist() == [[0, 1, 2]]


def test_obj_slash_references_and_comments():
    obj = b"# scan export\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nvt 0 0\nf 1/1/1 2/1/1 3/1/1\n"
    mesh = parse_mesh(obj, OBJ)
    assert mesh.face_count == 1


def test_obj_bad_vertex_line():
    with pytest.raises(MalformedFileError):
        parse_mesh(b"v 0 0\nf 1 1 1\n", OBJ)


def test_non_finite_coordinates_rejected():
    with pytest.raises(MalformedFileError):
        parse_mesh(b"v 0 0 nan\nv 1 0 0\nv 0 1 0\nf 1 2 3\n", OBJ)


def test_detect_format():
    cube = cube_mesh()
    assert detect_format(write_mesh(cube, STL_BINARY), "cube.stl") == STL_BINARY
    assert detect_format(write_mesh(cube, STL_ASCII), "cube.stl") == STL_ASCII
    assert detect_format(write_mesh(cube, OBJ), "cube.obj") == OBJ
    # no filename: sniff content
    assert detect_format(write_mesh(cube, STL_ASCII)) == STL_ASCII
    assert detect_format(write_mesh(cube, STL_BINARY)) == STL_BINARY
    assert detect_format(write_mesh(cube, OBJ)) == OBJ
    with pytest.raises(MalformedFileError):
        detect_format(b"\x01\x02\x03")


def test_unknown_format_rejected():
    with pytest.raises(ValueError):
        parse_mesh(b"", "ply")
    with pytest.raises(ValueError):
        write_mesh(cube_mesh(), "ply")
