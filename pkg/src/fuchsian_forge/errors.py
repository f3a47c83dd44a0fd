"""Exception types raised across the package."""

from __future__ import annotations


class ForgeError(Exception):
    """Base class for every error raised by fuchsian_forge."""


class NonSquarefree(ForgeError):
    pass


class NoSuchRealEmbedding(ForgeError):
    pass


class ZeroElement(ForgeError):
    pass


class ReducibleModulus(ForgeError):
    """A nonzero element turned out to be a zero divisor.

    ``factor`` is the nontrivial common factor of the element's lift and the
    modulus, i.e. evidence that the modulus is not irreducible.
    """

    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"modulus is reducible: shares factor {factor}")


class IllegalStep(ForgeError):
    pass


class NotRealSplit(ForgeError):
    pass


class DegenerateSymbol(ForgeError):
    pass


class SingularDirection(ForgeError):
    pass


class UnitA(ForgeError):
    pass


class ZeroU(ForgeError):
    pass


class UnitPole(ForgeError):
    pass


class SearchExhausted(ForgeError):
    pass


class BudgetExhausted(ForgeError):
    def __init__(self, stage: str, message: str = ""):
        self.stage = stage
        super().__init__(f"budget exhausted in stage {stage!r}" + (f": {message}" if message else ""))


class ConsistencyError(ForgeError):
    pass


class TheoremViolation(ForgeError):
    def __init__(self, word: str, reason: str):
        self.word = word
        super().__init__(f"{word}: {reason}")


class IdentityViolation(ForgeError):
    pass


class InvalidCertificate(ForgeError):
    pass


class NonpositiveM(ForgeError):
    pass


class UnknownFormat(ForgeError):
    pass
