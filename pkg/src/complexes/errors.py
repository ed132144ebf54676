"""Exceptions raised by the complex, walk, spectral and certificate code."""


class HdxError(ValueError):
    pass


# complex construction and navigation
class EmptyComplex(HdxError):
    pass


class DuplicateFacet(HdxError):
    pass


class ArityMismatch(HdxError):
    pass


class ZeroWeight(HdxError):
    pass


class UncoveredVertex(HdxError):
    pass


class FaceNotInComplex(HdxError):
    pass


class OverlappingFaces(HdxError):
    pass


class LevelOutOfRange(HdxError):
    pass


class SideOutOfRange(HdxError):
    pass


# distributions
class InvalidDistribution(HdxError):
    pass


class SupportViolation(HdxError):
    pass


class DomainMismatch(HdxError):
    pass


# operators
class NotStochastic(HdxError):
    pass


class StationarityViolation(HdxError):
    pass


class NotAPermutation(HdxError):
    pass


class OverlappingColorSets(HdxError):
    pass


class FaceTooLarge(HdxError):
    pass


class ZeroMassState(HdxError):
    pass


class MeasureMismatch(HdxError):
    pass


class DegenerateDivergence(HdxError):
    pass


# certificates and bounds
class InstanceTooLarge(HdxError):
    pass


class ZeroGap(HdxError):
    pass


# generators
class NoProperColoring(HdxError):
    pass


class TooLarge(HdxError):
    pass


class EmptySide(HdxError):
    pass


class GenerationFailed(HdxError):
    pass


class ManifestError(HdxError):
    pass


# sampler
class BudgetExceeded(HdxError):
    pass
