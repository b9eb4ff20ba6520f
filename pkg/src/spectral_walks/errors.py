"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """An enumeration or dimension guard was exceeded."""


class NumericError(RuntimeError):
    """A numerical routine failed to meet its accuracy contract."""
