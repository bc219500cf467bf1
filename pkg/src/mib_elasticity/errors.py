"""Exception hierarchy for the solver pipeline."""


class MIBError(Exception):
    """Base class for all solver errors."""


class GeometryError(MIBError):
    pass


class NoBracket(GeometryError):
    """Endpoint classifications disagree but no sign change was located."""


class MultiCross(GeometryError):
    """A mesh line is crossed more than once inside a single cell."""


class DegenerateNormal(GeometryError):
    pass


class BadSpec(MIBError):
    pass


class Incompressible(MIBError):
    pass


class CoincidentNodes(MIBError):
    pass


class Singular(MIBError):
    pass


class InsufficientSupport(MIBError):
    """Not enough same-side nodes to build an interpolation stencil."""


class NoDonorRep(MIBError):
    pass


class NoDonors(MIBError):
    pass


class MissingRep(MIBError):
    pass


class Unconverged(MIBError):
    def __init__(self, message, x=None, stats=None):
        super().__init__(message)
        self.x = x
        self.stats = stats


class Breakdown(MIBError):
    pass
