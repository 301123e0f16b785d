"""Size bounds for oracles and generators.

Defaults can be overridden with the ``AFT_BOUNDS`` environment variable,
a comma separated list of ``key=value`` pairs, e.g.
``AFT_BOUNDS="oracle_strict=200,closure_paths=20"``.
"""

from __future__ import annotations

import os

from .errors import DomainError

DEFAULT_BOUNDS = {
    "oracle_strict": 5000,
    "oracle_waiting": 20000,
    "dag_paths": 12,
    "closure_paths": 12,
    "dual_candidates": 2_000_000,
}


def bounds() -> dict[str, int]:
    result = dict(DEFAULT_BOUNDS)
    raw = os.environ.get("AFT_BOUNDS", "").strip()
    if not raw:
        return result
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in DEFAULT_BOUNDS:
            raise DomainError(f"AFT_BOUNDS: unknown entry {item!r}")
        try:
            result[key] = int(value)
        except ValueError:
            raise DomainError(f"AFT_BOUNDS: {key} needs an integer, got {value!r}") from None
    return result


def bound(key: str) -> int:
    return bounds()[key]
