"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for all errors raised by extremal_sites."""


class InvalidInputError(GeometryError):
    """Malformed point data: wrong shape, non-finite coordinates, bad JSON fields."""


class DegenerateError(GeometryError):
    """The configuration is degenerate for the requested operation.

    Examples are a zero diameter, a flat simplex or a collinear triple where
    a convex-position test was asked for.
    """


class SingularityError(GeometryError):
    """A closed-form expression was evaluated at one of its poles."""
