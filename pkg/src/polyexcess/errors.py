"""Exception hierarchy shared by every module."""


class PolytopeError(Exception):
    """Base class for all errors raised by polyexcess."""


class InputError(PolytopeError, ValueError):
    """Malformed input: bad indices, violated preconditions, unknown names."""


class NonPolytopalError(PolytopeError):
    """The incidence data does not describe the face lattice of a polytope."""


class ResourceLimitError(PolytopeError):
    """A configured cap (vertices, faces, search nodes) was exceeded."""
