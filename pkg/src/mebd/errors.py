"""Exception hierarchy shared across the package."""


class MebdError(Exception):
    """Base class for all package errors."""


class NotHermitian(MebdError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class ConvergenceFailure(MebdError):
    """The eigensolver failed to converge."""


class DimensionMismatch(MebdError):
    """Operands have incompatible dimensions."""


class BadLabel(MebdError):
    """Basis label is not a valid bitstring for the register."""


class NotNormalized(MebdError):
    """State amplitudes are not normalized."""


class EmptyKeepSet(MebdError):
    """Partial trace asked to keep no sites."""


class EmptySubset(MebdError):
    """Partial transpose asked to transpose no sites."""


class BadK(MebdError):
    """Excitation number outside 0..n_sites."""


class BadSize(MebdError):
    """Chain size outside the supported range."""


class BadPartition(MebdError):
    """Site sets do not form a valid partition."""


class BadLevel(MebdError):
    """Estimator level outside 1..J_max."""


class NoMaximumFound(MebdError):
    """No qualifying local maximum in the series."""


class GridTooLarge(MebdError):
    """Sweep grid exceeds the allowed number of points."""
