"""Exception types raised across the package."""


class ConvApproxError(Exception):
    """Base class for package errors."""


class DomainError(ConvApproxError, ValueError):
    """An argument lies outside the domain of the operation."""


class DivergentTailError(DomainError):
    """A coefficient tail (or kernel series) does not converge absolutely."""


class ConfigurationError(ConvApproxError, ValueError):
    """Incompatible combination of options, e.g. a hypothesis tag for the wrong family."""


class HypothesisViolation(ConvApproxError):
    """A theorem hypothesis fails, so the corresponding bound is not asserted."""


class CertificationError(ConvApproxError):
    """A numerical certificate (sign alternation, equioscillation) could not be established."""
