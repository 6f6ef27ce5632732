"""Exception hierarchy shared by every module."""


class KnotDimerError(Exception):
    """Base class for all errors raised by knotdimer."""


class DiagramError(KnotDimerError, ValueError):
    """The input does not describe a usable knot diagram."""


class PDSyntaxError(DiagramError):
    pass


class LabelError(DiagramError):
    """Edge labels are not a pairing of 1..2k."""


class PlanarityError(DiagramError):
    pass


class ReducednessError(DiagramError):
    pass


class ComponentError(DiagramError):
    """The code describes a link with more than one component."""


class ColoringError(KnotDimerError, ValueError):
    pass


class WeightingError(KnotDimerError, ValueError):
    pass


class CostCapError(KnotDimerError):
    """A brute-force or subset-enumeration step would exceed its cap."""


class CrossCheckError(KnotDimerError):
    """Independent computation routes disagree.

    Never raised on valid input unless the implementation is wrong.
    """
