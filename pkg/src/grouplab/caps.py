"""Resource caps with stated defaults.

Exceeding a cap raises ResourceLimitError naming the cap; nothing is ever
silently truncated.  Caps can be overridden per call, via CLI flags, or via
environment variables (GROUPLAB_CAP_<NAME>).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Caps:
    enumeration: int = 100_000     # max elements listed by enumerate_elements
    quotient_degree: int = 10_000  # max index |G:N| realized as a coset action
    lattice: int = 5_000           # max |G| for full subgroup-lattice work
    coset_rows: int = 20_000       # max working rows in coset enumeration

    def with_overrides(self, **kw: int) -> "Caps":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_ENV_FIELDS = ("enumeration", "quotient_degree", "lattice", "coset_rows")


def caps_from_env(base: Caps | None = None) -> Caps:
    """Default caps with any GROUPLAB_CAP_* environment overrides applied."""
    caps = base or Caps()
    overrides = {}
    for field in _ENV_FIELDS:
        raw = os.environ.get("GROUPLAB_CAP_" + field.upper())
        if raw is not None:
            overrides[field] = int(raw)
    return caps.with_overrides(**overrides)


DEFAULT_CAPS = Caps()
