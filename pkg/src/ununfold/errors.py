"""Exception types raised across the package.

Validation errors (mesh construction, parameters, cutting admissibility)
all derive from :class:`ValidationError`; the CLI maps them to exit code 2.
"""


class UnunfoldError(Exception):
    """Base class for all package errors."""


class ValidationError(UnunfoldError):
    """Invalid input data or parameters (CLI exit code 2)."""


# --- mesh construction ---------------------------------------------------

class NonManifoldEdge(ValidationError):
    """An edge is shared by more than two faces."""


class NonManifoldVertex(ValidationError):
    """Incident faces of a vertex do not form a single fan."""


class NonPlanarFace(ValidationError):
    """A face's vertices are not coplanar within tolerance."""


class NonConvexFace(ValidationError):
    """A face has an interior angle >= pi (or a degenerate angle)."""


class DisconnectedSurface(ValidationError):
    """The face adjacency graph is not connected."""


class InconsistentOrientation(ValidationError):
    """Face loops are not consistently counterclockwise from outside."""


# --- mesh queries ---------------------------------------------------------

class BoundaryVertex(UnunfoldError):
    """Curvature requested at a boundary vertex, where it is undefined."""


class OpenMesh(UnunfoldError):
    """Operation requires a closed mesh."""


# --- constructions ---------------------------------------------------------

class OutOfRange(ValidationError):
    """Construction parameters outside their documented bounds."""


class DegenerateRealization(ValidationError):
    """Parameters admit no strictly positive-height 3D realization."""


class InsufficientAngle(ValidationError):
    """Fan apex angles do not sum past a full turn."""


# --- cuttings and layouts ---------------------------------------------------

class BoundaryEdgeInCutting(ValidationError):
    """A cutting may not contain boundary edges."""


class InadmissibleCutting(UnunfoldError):
    """Cutting disconnects the surface (or is otherwise unusable)."""


class InconsistentLayout(UnunfoldError):
    """Layout failed the shared-edge consistency check."""


class BandCollision(UnunfoldError):
    """A connector band intersects a spike hole, another band, or leaves
    its brim; the band parameters need adjusting."""


# --- search ------------------------------------------------------------------

class DisconnectedGraph(UnunfoldError):
    """Graph operation requires a connected graph."""


class ModeUnsupported(UnunfoldError):
    """Enumeration mode not supported for this mesh size/kind."""


class SearchBudgetExceeded(UnunfoldError):
    """Candidate enumeration exceeded the configured budget (CLI exit 4)."""


class NotASpikedSolid(UnunfoldError):
    """Mesh does not have the spiked tetrahedron/octahedron structure."""


# --- file I/O ------------------------------------------------------------------

class ParseError(UnunfoldError):
    """Malformed input file; carries a line number when available."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
