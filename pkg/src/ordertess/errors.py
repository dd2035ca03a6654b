"""Exception types shared across the package."""


class OrdertessError(Exception):
    """Base class for all package-specific errors."""


class CollinearError(OrdertessError):
    """Three collinear points admit no circumcircle."""


class DegenerateAngleError(OrdertessError):
    """Angle is 0 or pi (collinear configuration) or a leg has zero length."""


class GenericityFailure(OrdertessError):
    """Generator could not produce a generic set within the retry budget."""


class WindowTooSmallError(OrdertessError):
    """The requested depth needs circles that cannot fit the outer window.

    Carries the attainable order so callers can retry with a feasible k.
    """

    def __init__(self, requested_depth, k_max_usable):
        self.requested_depth = requested_depth
        self.k_max_usable = k_max_usable
        super().__init__(
            f"depth cap {requested_depth} exceeds the window; "
            f"attainable k_max_usable is {k_max_usable}"
        )


class DiskOutsideWindowError(OrdertessError):
    """Closed disk of the queried circle is not contained in the outer window."""


class DepthUnpopulatedError(OrdertessError):
    """A requested depth has no contributing angle inside the window."""

    def __init__(self, depth):
        self.depth = depth
        super().__init__(f"no angle contributes at depth {depth} inside the window")


class NonGenericUnsupportedError(OrdertessError):
    """Operation is defined for generic inputs only (some circle has >= 4 sites)."""


class OrderOutOfRangeError(OrdertessError):
    """Order k falls outside the valid range for this event or window."""


class EmptySampleError(OrdertessError):
    """Empirical density requested for an empty sample."""


class DomainError(OrdertessError):
    """Density evaluated outside [0, pi]."""


class InvalidParamsError(OrdertessError):
    """Counterexample parameters violate k >= 6 or 0 < tau < 1/4."""


class ConstructionFailureError(OrdertessError):
    """Satellite placement search exhausted without meeting all conditions."""


class OracleInconsistencyError(OrdertessError):
    """A proposed hull facet failed exact verification."""


class IncompleteCorrespondenceError(OrdertessError):
    """Dual-candidate tilings share no usable interior correspondence."""
