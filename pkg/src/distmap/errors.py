"""Exception types shared across the package.

Every domain error raised by the library derives from DistmapError, so
callers (and the CLI) can distinguish domain failures from config/usage
problems.
"""


class DistmapError(Exception):
    """Base class for all library errors."""


# field
class MixedFields(DistmapError):
    """Operands belong to different field specs."""


class DivisionByZero(DistmapError):
    pass


class NotPrime(DistmapError):
    pass


# curve
class MixedCurves(DistmapError):
    pass


class OffCurve(DistmapError):
    pass


class FieldTooLarge(DistmapError):
    """Naive point counting refused: field exceeds the configured bound."""


class OrderNotDividing(DistmapError):
    pass


class TorsionNotRational(DistmapError):
    """E[m] is not fully defined over the requested field."""


class BadInput(DistmapError):
    pass


# pairing
class NotTorsion(DistmapError):
    pass


class FieldLacksRoots(DistmapError):
    """The working field does not contain the m-th roots of unity."""


class NotRootOfUnity(DistmapError):
    pass


class DegeneratePairing(DistmapError):
    """Pairing on the diagonal has order < m: the map does not distort."""


# isogeny
class BadKernel(DistmapError):
    pass


class KernelNotRationalAsSet(DistmapError):
    pass


class InseparableDegree(DistmapError):
    pass


class CurveMismatch(DistmapError):
    pass


class BasisInvalid(DistmapError):
    pass


class DegreeBoundOverflow(DistmapError):
    pass


# distortion
class PrimeEqualsCharacteristic(DistmapError):
    pass


class OrderMismatch(DistmapError):
    pass


class CurveSupersingular(DistmapError):
    """Verheul's criterion only applies to ordinary curves."""


class EigenvaluesCoincide(DistmapError):
    """Frobenius eigenvalues 1 and q coincide mod ell (q = 1 mod ell)."""


# catalogue
class BadCongruence(DistmapError):
    pass


class ElementInSubfield(DistmapError):
    pass


class NoneFound(DistmapError):
    pass


# cli / fixtures
class SchemaError(DistmapError):
    pass
