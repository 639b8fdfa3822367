"""Exception types shared by every module of the package."""

from __future__ import annotations


class ArtifactError(Exception):
    """Base class for all errors raised by the package."""

    code = "error"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class ParseError(ArtifactError):
    code = "parse_error"


class StructuralError(ArtifactError):
    code = "structural_error"


class GeneralPositionWarning(UserWarning):
    """Emitted when a domain is accepted although two vertices share a coordinate."""


class PerturbationFailed(ArtifactError):
    code = "perturbation_failed"


class CrossFlavorError(ArtifactError):
    code = "cross_flavor"


class OutOfUniverse(ArtifactError):
    code = "out_of_universe"


class Unreachable(ArtifactError):
    code = "unreachable"


class OutsidePolygon(ArtifactError):
    code = "outside_polygon"


class NoDominantVertex(ArtifactError):
    code = "no_dominant_vertex"


class MissingContext(ArtifactError):
    code = "missing_context"


class OutOfDomain(ArtifactError):
    code = "out_of_domain"


class InternalInvariantViolation(ArtifactError):
    code = "internal_invariant_violation"
