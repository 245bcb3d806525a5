"""Exception types shared across the package."""


class WienerFormsError(Exception):
    """Base class for all package-specific errors."""


class ShapeMismatchError(WienerFormsError, ValueError):
    """Operands disagree in grid, space dimension, axis count or order."""


class AxisError(WienerFormsError, ValueError):
    """An axis index is out of range or repeated where it must not be."""


class CapExceededError(WienerFormsError, RuntimeError):
    """A blow-up guard (atom count or axis count) was exceeded."""


class OutsideClassError(WienerFormsError, ValueError):
    """A contraction result is not piecewise constant on grid cells.

    Raised instead of silently returning a wrong kernel; the offending
    integral genuinely depends on the position of a free time argument
    inside its cell, so it has no representation in the kernel class.
    """


class DegreeOverflowError(WienerFormsError, RuntimeError):
    """A product would create a chaos level above the configured cap."""


class NotAdaptedError(WienerFormsError, ValueError):
    """An integrand fails the adaptedness precondition of the Ito integral."""


class NotSkewError(WienerFormsError, ValueError):
    """An operation requiring a skew-symmetric field received a non-skew one."""


class NotClosedError(WienerFormsError, ValueError):
    """Input to a closed-form reconstruction has a nonzero exterior derivative."""


class NotCoclosedError(WienerFormsError, ValueError):
    """Input to a co-closed reconstruction has a nonzero codifferential."""


class ConfigError(WienerFormsError, ValueError):
    """A suite or CLI configuration is invalid."""
