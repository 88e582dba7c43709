"""Exception types shared across the package.

Every error carries a stable ``code`` string so the service layer can
report machine-readable failures without string-matching messages.
"""


class ProvExplainError(Exception):
    code = "ERROR"


class MalformedTreeError(ProvExplainError):
    """Question tree does not match any supported shape."""

    code = "MALFORMED_TREE"

    def __init__(self, message, node_ids=()):
        super().__init__(message)
        self.node_ids = tuple(node_ids)


class ArityMismatchError(ProvExplainError):
    code = "ARITY_MISMATCH"


class TypeMismatchError(ProvExplainError):
    code = "TYPE_MISMATCH"


class UnknownRelationError(ProvExplainError):
    code = "UNKNOWN_RELATION"


class InvalidMappingError(ProvExplainError):
    code = "INVALID_MAPPING"


class UnmappedHeadError(ProvExplainError):
    code = "UNMAPPED_HEAD"


class LeafNotFoundError(ProvExplainError):
    code = "LEAF_NOT_FOUND"


class AmbiguousResolutionError(ProvExplainError):
    """A monomial matches several circuit expansions with different depths."""

    code = "AMBIGUOUS_RESOLUTION"


class TemplateMismatchError(ProvExplainError):
    code = "TEMPLATE_MISMATCH"


class UnhandledShapeError(ProvExplainError):
    code = "UNHANDLED_SHAPE"


class NoSiblingMappingError(ProvExplainError):
    code = "NO_SIBLING_MAPPING"


class LookupFailedError(ProvExplainError):
    code = "LOOKUP_FAILED"


class RangeOnNonNumericError(ProvExplainError):
    code = "RANGE_ON_NON_NUMERIC"


class InvalidParamsError(ProvExplainError):
    code = "INVALID_PARAMS"
