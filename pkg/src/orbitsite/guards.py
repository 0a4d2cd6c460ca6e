"""Size guards.

Defaults can be overridden process-wide through the ``ORBIT_SITE_GUARDS``
environment variable (a JSON object) or locally with :func:`overrides`.
"""

from __future__ import annotations

import contextlib
import json
import os
from dataclasses import asdict, dataclass, replace

from .errors import OrbitSiteError


@dataclass(frozen=True)
class Guards:
    max_degree: int = 64
    max_order: int = 200
    max_chains: int = 10**7
    max_matrix: int = 4000
    max_sieves: int = 4096
    max_enumeration: int = 10**8
    max_rank: int = 20000
    max_morphisms: int = 6000

    def as_dict(self) -> dict:
        return asdict(self)


_stack: list[dict] = []


def _from_env() -> dict:
    raw = os.environ.get("ORBIT_SITE_GUARDS")
    if not raw:
        return {}
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise OrbitSiteError(f"ORBIT_SITE_GUARDS is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise OrbitSiteError("ORBIT_SITE_GUARDS must be a JSON object")
    unknown = set(data) - set(Guards.__dataclass_fields__)
    if unknown:
        raise OrbitSiteError(f"unknown guard keys: {sorted(unknown)}")
    return {k: int(v) for k, v in data.items()}


def get() -> Guards:
    g = replace(Guards(), **_from_env())
    for layer in _stack:
        g = replace(g, **layer)
    return g


@contextlib.contextmanager
def overrides(**kwargs):
    _stack.append(kwargs)
    try:
        yield get()
    finally:
        _stack.pop()
