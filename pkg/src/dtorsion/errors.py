"""Exception hierarchy. Everything raised on bad input derives from DTorsionError,
which the command line maps to exit code 1."""


class DTorsionError(Exception):
    """Base class for all domain errors."""


class GroupSpecError(DTorsionError):
    """Unparseable or unsupported group specification."""


class GroupValidationError(DTorsionError):
    """Multiplication table fails the group axioms."""


class SizeCeilingError(DTorsionError):
    """Input exceeds a documented size ceiling."""


class DegreeError(DTorsionError):
    """Cochain degree outside the supported range."""


class ModulusError(DTorsionError):
    """Coefficient modulus invalid for the requested operation."""


class ShapeError(DTorsionError):
    """Cochain or matrix shape does not match the group/degree."""


class NotCocycleError(DTorsionError):
    """Operation requires a cocycle and the input is not one."""


class NotCommutingError(DTorsionError):
    """Operation requires commuting group elements."""


class UnimodularityError(DTorsionError):
    """Integer matrix argument must have determinant 1."""


class InadmissibleActionError(DTorsionError):
    """Group action on a complex violates admissibility or the axioms."""


class SiteError(DTorsionError):
    """Invalid site combinatorics or Cech data."""


class FormatError(DTorsionError):
    """Malformed input file."""
