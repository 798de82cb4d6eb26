"""Global arity and weight caps.

All sums in this package are finite because every family is finitely
supported, but intermediate words can still grow.  The caps below bound
them; exceeding one raises :class:`~linfkit.errors.TruncationError` instead
of silently dropping terms.
"""

from contextlib import contextmanager
from dataclasses import dataclass, replace

from .errors import TruncationError


@dataclass(frozen=True)
class Caps:
    max_arity: int = 6
    max_weight: int = 6


_current = Caps()


def caps() -> Caps:
    return _current


@contextmanager
def configured(**kwargs):
    """Temporarily override the caps, e.g. ``with configured(max_weight=4):``."""
    global _current
    old = _current
    _current = replace(old, **kwargs)
    try:
        yield _current
    finally:
        _current = old


def check_weight(n, what="word"):
    if n > _current.max_weight:
        raise TruncationError(f"{what} of weight {n} exceeds max_weight={_current.max_weight}")


def check_arity(n, what="arity"):
    if n > _current.max_arity:
        raise TruncationError(f"{what} {n} exceeds max_arity={_current.max_arity}")
