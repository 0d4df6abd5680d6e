"""STL and OBJ readers and writers.

Three formats are supported:

* binary STL: 80-byte header, uint32 facet count, then 50-byte facet
  records (12 little-endian float32 + uint16 attribute),
* ASCII STL: ``solid`` / ``facet`` / ``vertex`` keyword structure,
* OBJ: ``v`` and ``f`` records; every other record type is skipped
  except ``o``, which supplies the mesh name.

Normals stored in files are ignored on read and recomputed from the
vertex winding on write: scan exports carry unreliable normals, and all
downstream metrics derive normals from geometry anyway. STL triangles
are welded on exact coordinate equality so a cube file yields 8 vertices
rather than 36. OBJ polygon faces are fan-triangulated from their first
vertex. Text output prints floats with ``repr`` so a write/read cycle is
lossless; binary STL rounds coordinates to float32 by design.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import EmptyMeshError, IndexOutOfRangeError, MalformedFileError
from .mesh import TriangleMesh, face_cross_products

STL_BINARY = "stl-binary"
STL_ASCII = "stl-ascii"
OBJ = "obj"
FORMATS = (STL_BINARY, STL_ASCII, OBJ)

# normal (3f4) + three vertices (9f4) + attribute count = 50 bytes, packed
_FACET_DTYPE = np.dtype([
    ("normal", "<3f4"),
    ("verts", "<f4", (3, 3)),
    ("attr", "<u2"),
])
assert _FACET_DTYPE.itemsize == 50


def parse_mesh(data: bytes, fmt: str) -> TriangleMesh:
    """Parse mesh bytes in the stated format.

    Raises MalformedFileError for truncated or garbled input,
    EmptyMeshError for zero faces, and IndexOutOfRangeError for OBJ
    faces referencing missing vertices.
    """
    if fmt == STL_BINARY:
        return _parse_stl_binary(data)
    if fmt == STL_ASCII:
        return _parse_stl_ascii(data)
    if fmt == OBJ:
        return _parse_obj(data)
    raise ValueError(f"unknown mesh format {fmt!r}")


def write_mesh(mesh: TriangleMesh, fmt: str) -> bytes:
    if fmt == STL_BINARY:
        return _write_stl_binary(mesh)
    if fmt == STL_ASCII:
        return _write_stl_ascii(mesh)
    if fmt == OBJ:
        return _write_obj(mesh)
    raise ValueError(f"unknown mesh format {fmt!r}")


def detect_format(data: bytes, filename: str | None = None) -> str:
    """Best-effort format detection from extension and content."""
    ext = Path(filename).suffix.lower() if filename else ""
    if ext == ".obj":
        return OBJ
    stripped = data.lstrip()
    looks_ascii_stl = stripped.startswith(b"solid") and b"endsolid" in data
    if ext == ".stl":
        return STL_ASCII if looks_ascii_stl else STL_BINARY
    if looks_ascii_stl:
        return STL_ASCII
    if len(data) >= 84:
        (count,) = struct.unpack_from("<I", data, 80)
        if len(data) == 84 + 50 * count:
            return STL_BINARY
    head = stripped[:1]
    if head in (b"v", b"f", b"#", b"o", b"g", b"s", b"m", b"u"):
        return OBJ
    raise MalformedFileError("cannot detect mesh format; pass it explicitly")


def load_mesh(path: str | Path, fmt: str = "auto") -> TriangleMesh:
    path = Path(path)
    data = path.read_bytes()
    if fmt == "auto":
        fmt = detect_format(data, path.name)
    mesh = parse_mesh(data, fmt)
    if not mesh.name:
        mesh = TriangleMesh(mesh.vertices, mesh.faces, path.stem)
    return mesh


def save_mesh(mesh: TriangleMesh, path: str | Path, fmt: str = "auto") -> None:
    path = Path(path)
    if fmt == "auto":
        ext = path.suffix.lower()
        if ext == ".obj":
            fmt = OBJ
        elif ext == ".stl":
            fmt = STL_BINARY
        else:
            raise ValueError(f"cannot infer format for {path.name!r}")
    path.write_bytes(write_mesh(mesh, fmt))


# ---------------------------------------------------------------------------
# STL


def _weld(triangles: np.ndarray, name: str) -> TriangleMesh:
    """Build an indexed mesh from an (M, 3, 3) corner array.

    Vertices equal bit-for-bit are merged; face order is preserved, so
    welding is stable under face shuffles of the input file.
    """
    flat = triangles.reshape(-1, 3)
    vertices, inverse = np.unique(flat, axis=0, return_inverse=True)
    faces = inverse.reshape(-1, 3)
    return TriangleMesh(vertices, faces, name)


def _parse_stl_binary(data: bytes) -> TriangleMesh:
    if len(data) < 84:
        raise MalformedFileError(f"binary STL needs at least 84 bytes, got {len(data)}")
    (count,) = struct.unpack_from("<I", data, 80)
    if count == 0:
        raise EmptyMeshError("binary STL declares zero facets")
    need = 84 + 50 * count
    if len(data) < need:
        raise MalformedFileError(
            f"binary STL truncated: {count} facets need {need} bytes, got {len(data)}"
        )
    records = np.frombuffer(data, dtype=_FACET_DTYPE, count=count, offset=84)
    triangles = records["verts"].astype(np.float64)
    if not np.isfinite(triangles).all():
        raise MalformedFileError("binary STL contains non-finite coordinates")
    name = data[:80].split(b"\0", 1)[0].decode("latin-1", "replace").strip()
    if name.lower().startswith("binary stl"):
        name = name[10:].strip()
    return _weld(triangles, name)


def _parse_stl_ascii(data: bytes) -> TriangleMesh:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedFileError(f"ASCII STL is not valid UTF-8: {exc}") from None

    tokens = text.split()
    pos = 0

    def take(expect: str | None = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise MalformedFileError("ASCII STL truncated")
        tok = tokens[pos]
        pos += 1
        if expect is not None and tok.lower() != expect:
            raise MalformedFileError(f"ASCII STL: expected {expect!r}, got {tok!r}")
        return tok

    def take_float() -> float:
        tok = take()
        try:
            value = float(tok)
        except ValueError:
            raise MalformedFileError(f"ASCII STL: bad number {tok!r}") from None
        if not np.isfinite(value):
            raise MalformedFileError(f"ASCII STL: non-finite coordinate {tok!r}")
        return value

    take("solid")
    # optional free-text name, up to the first structural keyword
    name_parts = []
    while pos < len(tokens) and tokens[pos].lower() not in ("facet", "endsolid"):
        name_parts.append(take())
    name = " ".join(name_parts)

    corners: list[list[float]] = []
    while True:
        tok = take()
        low = tok.lower()
        if low == "endsolid":
            break
        if low != "facet":
            raise MalformedFileError(f"ASCII STL: expected 'facet', got {tok!r}")
        take("normal")
        for _ in range(3):
            take_float()  # stored normal is ignored
        take("outer")
        take("loop")
        for _ in range(3):
            take("vertex")
            corners.append([take_float(), take_float(), take_float()])
        take("endloop")
        take("endfacet")

    if not corners:
        raise EmptyMeshError("ASCII STL contains no facets")
    triangles = np.array(corners, dtype=np.float64).reshape(-1, 3, 3)
    return _weld(triangles, name)


def _facet_records(mesh: TriangleMesh) -> tuple[np.ndarray, np.ndarray]:
    """Per-face unit normals (zeros when degenerate) and corner array."""
    cross = face_cross_products(mesh)
    norms = np.linalg.norm(cross, axis=1)
    normals = np.zeros_like(cross)
    good = norms > 0
    normals[good] = cross[good] / norms[good, None]
    v0, v1, v2 = mesh.corners()
    corners = np.stack([v0, v1, v2], axis=1)
    return normals, corners


def _write_stl_binary(mesh: TriangleMesh) -> bytes:
    normals, corners = _facet_records(mesh)
    # header must not start with "solid" or readers mistake it for ASCII
    header = f"binary stl {mesh.name}".encode("latin-1", "replace")[:80]
    header = header.ljust(80, b"\0")
    records = np.zeros(mesh.face_count, dtype=_FACET_DTYPE)
    records["normal"] = normals.astype(np.float32)
    records["verts"] = corners.astype(np.float32)
    return header + struct.pack("<I", mesh.face_count) + records.tobytes()


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_stl_ascii(mesh: TriangleMesh) -> bytes:
    normals, corners = _facet_records(mesh)
    name = " ".join(mesh.name.split())  # keep the solid line single-line
    out = [f"solid {name}".rstrip()]
    for n, tri in zip(normals, corners):
        out.append(f"  facet normal {_fmt(n[0])} {_fmt(n[1])} {_fmt(n[2])}")
        out.append("    outer loop")
        for v in tri:
            out.append(f"      vertex {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}")
        out.append("    endloop")
        out.append("  endfacet")
    out.append(f"endsolid {name}".rstrip())
    out.append("")
    return "\n".join(out).encode("utf-8")


# ---------------------------------------------------------------------------
# OBJ


def _parse_obj(data: bytes) -> TriangleMesh:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedFileError(f"OBJ is not valid UTF-8: {exc}") from None

    vertices: list[list[float]] = []
    faces: list[tuple[int, int, int]] = []
    name = ""

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        if key == "v":
            if len(parts) < 4:
                raise MalformedFileError(f"OBJ line {lineno}: vertex needs 3 coordinates")
            try:
                coords = [float(p) for p in parts[1:4]]
            except ValueError:
                raise MalformedFileError(f"OBJ line {lineno}: bad vertex coordinate") from None
            if not all(np.isfinite(coords)):
                raise MalformedFileError(f"OBJ line {lineno}: non-finite coordinate")
            vertices.append(coords)
        elif key == "f":
            refs = parts[1:]
            if len(refs) < 3:
                raise MalformedFileError(f"OBJ line {lineno}: face needs at least 3 vertices")
            idx = [_obj_index(ref, len(vertices), lineno) for ref in refs]
            for a, b in zip(idx[1:], idx[2:]):
                faces.append((idx[0], a, b))
        elif key == "o" and len(parts) > 1 and not name:
            name = " ".join(parts[1:])
        # vn/vt/g/s/mtllib/usemtl and anything else: ignored

    if not faces:
        raise EmptyMeshError("OBJ contains no faces")
    face_arr = np.array(faces, dtype=np.int64)
    bad = (face_arr < 0) | (face_arr >= len(vertices))
    if bad.any():
        first = face_arr[bad.any(axis=1)][0]
        raise IndexOutOfRangeError(
            f"OBJ face references vertex {int(first.max()) + 1} of {len(vertices)}"
        )
    return TriangleMesh(np.array(vertices, dtype=np.float64), face_arr, name)


def _obj_index(ref: str, vertex_count: int, lineno: int) -> int:
    """Resolve one face vertex reference ('7', '7/1', '7//2', '-1') to 0-based."""
    field = ref.split("/", 1)[0]
    try:
        value = int(field)
    except ValueError:
        raise MalformedFileError(f"OBJ line {lineno}: bad face reference {ref!r}") from None
    if value == 0:
        raise IndexOutOfRangeError(f"OBJ line {lineno}: face index 0 is not valid")
    if value < 0:
        return vertex_count + value  # relative to vertices defined so far
    return value - 1


def _write_obj(mesh: TriangleMesh) -> bytes:
    out = []
    if mesh.name:
        out.append(f"o {' '.join(mesh.name.split())}")
    for v in mesh.vertices:
        out.append(f"v {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}")
    for f in mesh.faces:
        out.append(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}")
    out.append("")
    return "\n".join(out).encode("utf-8")
