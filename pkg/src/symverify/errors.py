"""Exception types shared across the package."""

# Threshold on the squared norm N^2(R) of the collapsed (unnormalized) state
# below which the post-detection state is treated as undefined.  This sits far
# below any physically meaningful amplitude on the supported grids but far
# above accumulated floating-point rounding (~1e-12 on amplitudes).
NODAL_EPS = 1e-24


class SymverifyError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(SymverifyError):
    """Malformed or inconsistent run configuration."""


class DegenerateGrid(SymverifyError):
    """Grid has too few points or non-positive spacing."""


class GridMismatch(SymverifyError):
    """Two objects that must share a grid do not."""


class TruncationError(SymverifyError):
    """Requested distribution does not fit on the grid (5-sigma rule)."""


class NormalizationError(SymverifyError):
    """Amplitude array failed a normalization invariant."""


class NodalPointUndefined(SymverifyError):
    """Both spatial amplitudes vanish at the detection point; the surviving
    state is undefined because the detection probability there is null."""


class NullStateError(SymverifyError):
    """Operation on a null (zero-norm) two-particle state."""


class EmptySupport(SymverifyError):
    """A density vanishes identically over the requested region."""


class SeparationTooSmall(SymverifyError):
    """Momentum peaks are closer than the required multiple of sigma."""


class ModelDegenerate(SymverifyError):
    """Competing model patterns are indistinguishable; no decision possible."""


class RedrawCapExceeded(SymverifyError):
    """A Monte Carlo trial exceeded its nodal-redraw budget."""
