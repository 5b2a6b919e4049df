"""Exception hierarchy.

Two families matter to callers.  ``LdoError`` subclasses signal bad input or
an exhausted budget.  ``TheoremViolation`` subclasses signal that a proven
statement failed at runtime; the CLI maps them to exit status 2 and they must
never be swallowed.
"""


class LdoError(Exception):
    pass


class TheoremViolation(Exception):
    pass


# numfield
class NotMonic(LdoError):
    pass


class Reducible(LdoError):
    pass


class RootIsolationFailed(LdoError):
    pass


class DivisionByZero(LdoError, ZeroDivisionError):
    pass


class BadWitness(LdoError):
    pass


# sunits
class NotAUnit(LdoError):
    pass


class NeedSuppliedUnits(LdoError):
    pass


class DegenerateLattice(LdoError):
    pass


class InconclusivePrecision(LdoError):
    pass


# weylcomb
class HypothesisViolated(LdoError):
    pass


class NoSplitFound(TheoremViolation):
    pass


# exactlin
class Singular(LdoError):
    pass


class CoverageFailure(TheoremViolation):
    """No Weyl coset representative gave a relative Bruhat factorization."""


# strata / closure3
class NotAdmissible(LdoError):
    pass


class BudgetExceeded(LdoError):
    pass


class SearchBudgetExceeded(BudgetExceeded):
    pass


class SpecViolatesHypotheses(LdoError):
    pass


# forms
class NoWitness(LdoError):
    pass


class TrialsExhausted(LdoError):
    pass


class NotUnimodularizable(LdoError):
    pass


class NotOverF(LdoError):
    pass


class CmBoundViolation(TheoremViolation):
    pass


class SpiralDetected(TheoremViolation):
    """A spiral closure for a non-CM field with more than three places."""


# cli
class ConfigInvalid(LdoError):
    pass
