"""Exception types shared across the toolkit.

Domain errors (bad arguments, malformed inputs) raise plain ``ValueError``;
the classes below cover runtime failures of the numeric machinery.
"""

from __future__ import annotations


class EstimationFailureError(RuntimeError):
    """An estimator could not produce a valid angle.

    Carries whatever diagnostics were available at the point of failure
    (the measured phase, candidate roots, the power-iteration result) so
    Monte-Carlo drivers can log failures without re-running the trial.
    """

    def __init__(self, message: str, *, method: str | None = None, **diagnostics):
        super().__init__(message)
        self.method = method
        self.diagnostics = diagnostics


class RootFindingError(RuntimeError):
    """Polynomial rooting did not reach the required residual tolerance.

    ``partial_roots`` holds the best root estimates found before giving up.
    """

    def __init__(self, message: str, partial_roots=None):
        super().__init__(message)
        self.partial_roots = partial_roots
