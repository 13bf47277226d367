"""Error taxonomy shared across the package.

Scene errors mean the input document itself is malformed.  Precondition
errors mean a kernel operation was called outside its contract.
Inconsistency errors flag states that the underlying theory excludes;
they are surfaced loudly instead of being patched over.
"""

from __future__ import annotations

__all__ = ["BerklineError", "SceneError", "PreconditionError", "InconsistencyError"]


class BerklineError(Exception):
    pass


class SceneError(BerklineError):
    """Malformed scene or input document."""


class PreconditionError(BerklineError):
    """An operation was invoked outside its stated preconditions."""


class InconsistencyError(BerklineError):
    """A state the theory rules out was reached; results would be unreliable."""
