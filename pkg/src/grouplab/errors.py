"""Exception hierarchy shared across the package.

Every failure mode is one of four kinds so callers (and the CLI exit-code
logic) can tell bad input, violated preconditions, blown resource caps and
unsuccessful-but-valid searches apart.
"""


class GroupError(Exception):
    """Base class for all errors raised by this package."""


class InputError(GroupError, ValueError):
    """Malformed or inconsistent caller input (bad degree, bad spec field...)."""


class PreconditionError(GroupError):
    """A documented operation precondition does not hold (e.g. N not normal)."""


class ResourceLimitError(GroupError):
    """A configured cap was exceeded; the message names the cap."""

    def __init__(self, cap_name: str, cap_value: int, needed) -> None:
        self.cap_name = cap_name
        self.cap_value = cap_value
        self.needed = needed
        super().__init__(
            f"cap {cap_name!r} exceeded: limit {cap_value}, needed {needed}"
        )


class NotFoundError(GroupError):
    """A bounded search completed without finding the requested object."""
