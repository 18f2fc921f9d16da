"""Exception hierarchy shared by every module."""


class MixorderError(Exception):
    """Base class for all package errors."""


class DomainError(MixorderError, ValueError):
    """A functional was requested outside the set where it is defined."""


class ImproperModelError(DomainError):
    """The mixture density does not integrate to one."""


class InfeasibleScenarioError(DomainError):
    """Weights or counts violate a mixture's mass constraint."""
