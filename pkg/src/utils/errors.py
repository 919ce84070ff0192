"""Exception hierarchy shared by every module of the engine."""


class PCanonError(Exception):
    """Base class for all errors raised by the engine."""


class ConfigurationError(PCanonError):
    """A run configuration or command-line option is invalid."""


class RealizationError(PCanonError):
    """Coxeter or Cartan data do not define a valid realization."""


class BudgetExceeded(PCanonError):
    """An enumeration grew past its configured cap."""


class AlgebraError(PCanonError):
    """An exactness assumption failed (division, polynomiality, homogeneity)."""


class NotApplicable(PCanonError):
    """The nil Hecke formula was asked to handle a D1 step."""


class RelationError(PCanonError):
    """A diagrammatic relation does not hold as a matrix identity."""

    def __init__(self, relation: str, detail: str = ""):
        self.relation = relation
        super().__init__(f"relation '{relation}' failed" + (f": {detail}" if detail else ""))


class PositivityError(PCanonError):
    """A p-canonical expansion produced a negative coefficient."""


class SpecializationError(PCanonError):
    """A denominator vanished at the modular evaluation point."""
