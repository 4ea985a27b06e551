"""Exception types shared across the package."""


class QcskewError(Exception):
    """Base class for all qcskew errors."""


class DegenerateTriangleError(QcskewError):
    """Skew requested for a triangle with a repeated vertex (shortest side 0)."""


class DomainError(QcskewError):
    """Evaluation or sampling outside a map's declared domain, or a
    guaranteed-range precondition (e.g. the subtended-angle bound's
    admissible set) violated."""


class NonInjectiveImageError(QcskewError):
    """An image degeneracy at sampling resolution: coincident image points,
    zero minimum circle distance, or zero enclosed area."""


class GridFormatError(QcskewError):
    """Malformed grid-map document: bad JSON, missing fields, wrong point
    count, or non-finite entries."""


class MapSpecError(QcskewError):
    """Unparseable map or region spec string on the command line."""
