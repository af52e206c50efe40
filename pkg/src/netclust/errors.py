"""Exception and warning types raised across the package."""


class NetClustError(ValueError):
    """Base class for all input/contract errors."""


class CompactOnDirected(NetClustError):
    pass


class NonzeroDiagonal(NetClustError):
    pass


class ShapeMismatch(NetClustError):
    pass


class AsymmetricSlice(NetClustError):
    pass


class NegativeThreshold(NetClustError):
    pass


class InvalidK(NetClustError):
    pass


class InvalidT(NetClustError):
    pass


class SizeMismatch(NetClustError):
    pass


class EmptyWeights(NetClustError):
    pass


class NonFiniteIterate(NetClustError, ArithmeticError):
    """ADMM produced NaN/inf; usually a bad ``rho`` or non-finite data."""


class KNeverReached(NetClustError):
    pass


class InvalidGraphon(NetClustError):
    pass


class NotAPermutation(NetClustError):
    pass


class LengthMismatch(NetClustError):
    pass


class ParseError(NetClustError):
    def __init__(self, path, lineno, msg):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.path = path
        self.lineno = lineno


class NodeIdOutOfRange(NetClustError):
    pass


class AsymmetryError(NetClustError):
    pass


class MaxIterReached(RuntimeWarning):
    """ADMM stopped at ``max_iter`` before meeting its tolerances."""


class PathTruncated(RuntimeWarning):
    """Path hit ``max_points`` before full fusion."""


class DisconnectedWeights(RuntimeWarning):
    """Fusion graph has several components; they can never fuse."""


class DegenerateK(RuntimeWarning):
    """Fewer distinct rows than requested clusters."""
