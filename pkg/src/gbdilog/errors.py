"""Exception hierarchy shared by all modules."""


class GbError(Exception):
    """Base class for every library error."""


class DomainError(GbError, ValueError):
    pass


class StripViolation(GbError, ValueError):
    pass


class PoleHit(GbError, ArithmeticError):
    """Argument lies within the near-pole threshold of the pole lattice."""

    def __init__(self, z, n=None, m=None):
        self.z, self.n, self.m = z, n, m
        where = "" if n is None else f" (n={n}, m={m})"
        super().__init__(f"argument {z!r} is on the pole lattice{where}")


class BranchCut(GbError, ValueError):
    pass


class NonConvergence(GbError, RuntimeError):
    pass


class BadContour(GbError, ValueError):
    pass


class OutOfStrip(GbError, ValueError):
    pass


class ConvergenceViolation(GbError, ValueError):
    pass


class PinchedContour(GbError, ValueError):
    pass


class DegreeLimit(GbError, ValueError):
    pass


class NearDegenerateWarning(UserWarning):
    """b² is close to a rational with small denominator."""
