"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration: bad parameters, malformed files, broken
    invariants caught at construction or load time."""


class UnboundedError(ValueError):
    """A minimizer was requested for a problem that is unbounded below."""
