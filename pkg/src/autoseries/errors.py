"""Exception types shared across the package."""


class ResourceError(RuntimeError):
    """A construction exceeded its state or monoid cap."""

    def __init__(self, what, cap):
        super().__init__(f"{what} exceeded the cap of {cap} elements")
        self.what, self.cap = what, cap


class VerificationError(RuntimeError):
    """An internal self-check failed; this indicates a bug rather than bad input."""
