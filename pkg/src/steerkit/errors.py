"""Exception hierarchy. Every library error derives from :class:`SteerkitError`."""


class SteerkitError(ValueError):
    pass


class NotHermitian(SteerkitError):
    pass


class DimensionMismatch(SteerkitError):
    pass


class InvalidState(SteerkitError):
    pass


class InvalidParameter(SteerkitError):
    pass


class InvalidDimension(InvalidParameter):
    pass


class UnsupportedDimension(InvalidParameter):
    pass


class NotAResolution(SteerkitError):
    """Effects do not sum to the identity."""


class NotProjector(SteerkitError):
    pass


class NonHermitianCoefficients(SteerkitError):
    pass


class IncompleteStrategy(SteerkitError):
    pass


class StrategySpaceTooLarge(SteerkitError):
    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(
            f"{count} deterministic strategies exceed the enumeration cap {cap}; "
            "for permutation-symmetric operators use symmetric_gmst_threshold"
        )


class NotSymmetric(SteerkitError):
    pass


class SchemaError(SteerkitError):
    def __init__(self, message, pointer=""):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


class InvariantError(SteerkitError):
    def __init__(self, invariant, message):
        self.invariant = invariant
        self.detail = message
        super().__init__(f"{invariant}: {message}")
