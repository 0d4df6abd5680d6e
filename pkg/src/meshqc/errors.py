"""Exception types shared across the package."""


class MeshQcError(Exception):
    """Base class for all meshqc errors."""


class MalformedFileError(MeshQcError):
    """Mesh file is truncated, garbled, or not the stated format."""


class EmptyMeshError(MalformedFileError):
    """Mesh file parsed cleanly but contains zero faces."""


class IndexOutOfRangeError(MalformedFileError):
    """A face references a vertex that does not exist."""


class DegenerateTriangleError(MeshQcError):
    """Normal requested for a triangle at or below the area epsilon."""


class AllDegenerateError(MeshQcError):
    """Every face of the mesh is degenerate; normals are undefined."""


class InvalidThresholdError(MeshQcError, ValueError):
    """Quality threshold outside (0, 1]."""


class InvalidSceneError(MeshQcError):
    """Scene manifest has dangling references, missing assets, or bad values."""


class MalformedEventError(MeshQcError, ValueError):
    """Session event record has an unknown kind or missing fields."""


class OutOfOrderEventError(MeshQcError):
    """Event timestamp precedes the last applied event."""


class UnknownPartError(MeshQcError):
    """Event references a part id that is not in the session."""


class SessionEndedError(MeshQcError):
    """Event arrived after the session was ended."""


class SessionNotEndedError(MeshQcError):
    """Grading requested for a session that has not ended."""
