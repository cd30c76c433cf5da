"""Exception types raised by nmlgauss."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ConvergenceError(ArithmeticError):
    """An iterative or adaptive routine did not reach its tolerance."""


class IllConditionedProposalError(RuntimeError):
    """Importance weights collapsed: effective sample size too small."""
