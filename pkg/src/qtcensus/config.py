"""Budget caps.

Resolution order: :func:`overrides` context, then ``QTCENSUS_<NAME>``
environment variables, then the defaults below.
"""
import contextlib
import os

_DEFAULTS = {
    "window_cap": 1 << 26,  # entries per sieve window
    "profile_map_cap": 1 << 20,  # in-memory distinct profiles before spilling to disk
    "z_bound": 10**6,  # CRT search indices tried per congruence layout
    "work_cap": 1 << 26,  # generic enumeration budget (residuals, suffix scans)
    "scan_cap": 1 << 36,  # total oracle queries in one profile scan
}
_overrides: dict[str, int] = {}


def cap(name: str) -> int:
    if name in _overrides:
        return _overrides[name]
    env = os.environ.get("QTCENSUS_" + name.upper())
    if env:
        return int(env)
    return _DEFAULTS[name]


def defaults() -> dict:
    return {name: cap(name) for name in _DEFAULTS}


@contextlib.contextmanager
def overrides(**caps):
    unknown = set(caps) - set(_DEFAULTS)
    if unknown:
        raise KeyError(f"unknown caps: {sorted(unknown)}")
    saved = dict(_overrides)
    _overrides.update({k: int(v) for k, v in caps.items() if v is not None})
    try:
        yield
    finally:
        _overrides.clear()
        _overrides.update(saved)
