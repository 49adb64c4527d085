"""betti_regions.exceptions"""

from typing import Any, Dict, Optional


class BettiRegionsException(Exception):
    """
    Base class for betti_regions exceptions

    Every subclass carries a stable machine readable `code` and an optional `witness` -- some
    json-able blob (usually a point or a generator) that shows *where* things went wrong. The cli
    renders both to stderr so scripts can branch on the code rather than on message text.

    """

    code = "betti_regions_error"

    def __init__(self, message: str, witness: Optional[Any] = None) -> None:
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_dict(self) -> Dict[str, Any]:
        """
        Render the exception as the cli error document

        Args:
            N/A

        Returns:
            dict: {code, message, witness?}

        Raises:
            N/A

        """
        payload: Dict[str, Any] = {"code": self.code, "message": self.message}
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


class DimensionMismatchError(BettiRegionsException):
    """Exception for shape/dimension/variable count mismatches"""

    code = "dimension_mismatch"


class RankDeficientError(BettiRegionsException):
    """Exception for matrices that must have full row rank but do not"""

    code = "rank_deficient"


class UnboundedPolyhedronError(BettiRegionsException):
    """Exception for enumeration requests on unbounded polyhedra"""

    code = "unbounded"


class DegenerateInputError(BettiRegionsException):
    """Exception for degenerate input, e.g. zero area polygons or negative powers"""

    code = "degenerate_input"


class NotExpandableError(BettiRegionsException):
    """Exception for generating function terms that cannot be expanded over a box"""

    code = "not_expandable"


class InterpolationError(BettiRegionsException):
    """Exception for singular or inconsistent interpolation systems"""

    code = "interpolation_singular"


class ValidationMismatchError(BettiRegionsException):
    """Exception for fitted objects that disagree with exact data on a validation window"""

    code = "validation_mismatch"


class BoundExceededError(BettiRegionsException):
    """Exception for computations refusing to run past a configured size bound"""

    code = "bound_exceeded"


class NotContainedError(BettiRegionsException):
    """Exception for ideal containment preconditions that do not hold"""

    code = "not_contained"


class ContainmentViolationError(BettiRegionsException):
    """Exception for filtrations violating I*J_t in J_(t+1)"""

    code = "containment_violation"


class HorizonError(BettiRegionsException):
    """Exception for filtration terms requested past what can be materialized"""

    code = "horizon"


class RegionDetectionError(BettiRegionsException):
    """Exception for support boundaries that admit no line with an admissible slope"""

    code = "no_admissible_line"


class ThresholdError(BettiRegionsException):
    """Exception for predictions requested below a region description threshold"""

    code = "below_threshold"


class IntegralityError(BettiRegionsException):
    """Exception for predictions that evaluate to a negative or non integral value"""

    code = "non_integral"


class InputDocumentError(BettiRegionsException):
    """Exception for malformed input documents/settings files"""

    code = "input_error"
