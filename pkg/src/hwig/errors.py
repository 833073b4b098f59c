"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Operands live on different mode bases or have the wrong shape."""


class DomainError(ValueError):
    """A physical parameter is outside its allowed range."""


class InvalidPairError(ValueError):
    """Bogoliubov kernels do not produce a valid Gaussian state."""


class HeraldImpossibleError(RuntimeError):
    """The heralding event has (numerically) zero probability."""


class ReductionError(ValueError):
    """The polynomial prefactor has support outside the requested subspace."""


class OracleError(RuntimeError):
    """A brute-force check could not produce a trustworthy number."""


class ConfigError(ValueError):
    """A scenario configuration could not be parsed or validated."""
