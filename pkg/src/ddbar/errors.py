"""Error types shared across the package."""


class PresentationError(Exception):
    """A presentation fails validation or closure requirements."""


class InternalInconsistencyError(Exception):
    """Two independent computations of the same quantity disagree."""
