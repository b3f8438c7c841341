"""Exception hierarchy for the conetime library.

Every error raised by the library derives from :class:`ConetimeError`.
The CLI maps error classes onto its stable exit codes: file problems are
exit 1, invalid input is exit 2, failed checks exit 3, exhausted search
budgets exit 4.
"""


class ConetimeError(Exception):
    """Base class for all conetime errors."""


class FormatError(ConetimeError):
    """A document (surface, omega, signal, records) failed to parse."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


# --- surface construction -------------------------------------------------

class DegenerateTriangle(ConetimeError):
    """Triangle vertices are collinear or negatively oriented."""


class MismatchedEdgeLength(ConetimeError):
    """A gluing pairs two edges of different length."""


class UnpairedEdge(ConetimeError):
    """An edge slot has no gluing partner; the surface is not closed."""


class DisconnectedSurface(ConetimeError):
    """The glued triangles do not form a single connected surface."""


class GaussBonnetViolation(ConetimeError):
    """Total angle defect is inconsistent with the Euler characteristic.

    For a correctly glued closed surface this is automatic, so seeing it
    signals corrupted input or numerics beyond tolerance.
    """


class UnknownVertex(ConetimeError):
    """A vertex-class or cone-point id does not exist on the surface."""


# --- searches and tracing -------------------------------------------------

class SearchBudgetExceeded(ConetimeError):
    """The unfolding search hit its chart-expansion cap before finishing."""


class InvalidStart(ConetimeError):
    """Trace start state is not a valid in-triangle point/direction."""


class PathThroughVertex(ConetimeError):
    """A path crosses a triangulation vertex; edge crossings undecidable."""


# --- analytic single-particle model ---------------------------------------

class NonpositiveRadius(ConetimeError):
    """Radial coordinate must be strictly positive."""


class AngleOutOfRange(ConetimeError):
    """Angle argument outside the admissible open interval."""


class InexactAngle(ConetimeError):
    """Operation requires an exact angle, got a plain float."""


class InadmissibleWinding(ConetimeError):
    """Winding number outside the admissible range for this cone angle."""


class DegenerateGeometry(ConetimeError):
    """Measured return data is outside the geometrically meaningful range."""


# --- one-forms -------------------------------------------------------------

class ResidueSumNonzero(ConetimeError):
    """Residues do not sum to zero; no closed 1-form realises them."""


class IncompleteResidues(ConetimeError):
    """A cone point is missing from the residue table."""


class InconsistentPeriods(ConetimeError):
    """Prescribed periods over-determine the cochain inconsistently."""


# --- signals ---------------------------------------------------------------

class DisconnectedLegs(ConetimeError):
    """Consecutive signal legs do not share endpoints within tolerance."""


class NotClosed(ConetimeError):
    """Signal is not closed (or is degenerate), so the query is undefined."""
