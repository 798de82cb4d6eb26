"""Graded vector spaces, Koszul signs and unshuffles.

Scalars are :class:`fractions.Fraction` throughout; no floating point value
ever enters the kernel.  Permutations are tuples of 0-based images, so
``sigma[i]`` is the image of position ``i``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .config import check_arity
from .errors import MalformedInput

Scalar = Fraction


def scalar(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise MalformedInput(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"invalid rational literal {value!r}") from exc
    raise MalformedInput(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class GradedSpace:
    """Finite ordered basis of named, integer-graded vectors.

    The basis order is the canonical order used for symmetric monomials.
    ``degree_range`` is an optional declared window that every degree must
    fall into.
    """

    basis: tuple = ()
    degree_range: tuple = None
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        basis = tuple((str(n), int(d)) for n, d in self.basis)
        object.__setattr__(self, "basis", basis)
        names = [n for n, _ in basis]
        if len(set(names)) != len(names):
            raise MalformedInput(f"duplicate basis names in {names}")
        if self.degree_range is not None:
            lo, hi = self.degree_range
            object.__setattr__(self, "degree_range", (int(lo), int(hi)))
            for n, d in basis:
                if not lo <= d <= hi:
                    raise MalformedInput(f"degree {d} of {n!r} outside declared range [{lo}, {hi}]")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def from_pairs(cls, pairs: Iterable, degree_range=None):
        return cls(tuple(pairs), degree_range)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.basis)

    @property
    def degrees(self) -> tuple:
        return tuple(d for _, d in self.basis)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise MalformedInput(f"unknown basis element {name!r}") from None

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def name(self, i: int) -> str:
        return self.basis[i][0]

    def component(self, d: int) -> tuple:
        """Indices of the basis vectors of degree ``d``."""
        return tuple(i for i, (_, deg) in enumerate(self.basis) if deg == d)

    def __len__(self):
        return self.dim

    def __repr__(self):
        inner = ", ".join(f"{n}:{d}" for n, d in self.basis)
        return f"GradedSpace({inner})"


def shift(space: GradedSpace, k: int) -> GradedSpace:
    """``E[k]`` with ``E[k]_i = E_{i+k}``: every degree ``d`` becomes ``d - k``."""
    return GradedSpace(tuple((n, d - k) for n, d in space.basis))


def dual(space: GradedSpace) -> GradedSpace:
    """``E*`` with ``(E*)_i = (E_{-i})*``; basis ``n`` becomes ``n*``.

    Dualising a name that already ends in ``*`` strips it, so that
    ``dual(dual(E)) == E``.
    """
    out = []
    for n, d in space.basis:
        out.append((n[:-1] if n.endswith("*") else n + "*", -d))
    return GradedSpace(tuple(out))


def copy_space(space: GradedSpace, suffix: str = "'") -> GradedSpace:
    return GradedSpace(tuple((n + suffix, d) for n, d in space.basis))


@dataclass(frozen=True, repr=False)
class SumSpace(GradedSpace):
    """``E (+) V`` with all of E's basis first, then all of V's."""

    left_dim: int = 0

    @property
    def left(self) -> range:
        return range(self.left_dim)

    @property
    def right(self) -> range:
        return range(self.left_dim, self.dim)

    def is_left(self, i: int) -> bool:
        return i < self.left_dim


def direct_sum(E: GradedSpace, V: GradedSpace) -> SumSpace:
    return SumSpace(E.basis + V.basis, None, None, E.dim)


def left_part(S: SumSpace) -> GradedSpace:
    return GradedSpace(S.basis[: S.left_dim])


def right_part(S: SumSpace) -> GradedSpace:
    return GradedSpace(S.basis[S.left_dim:])


# -- permutations -----------------------------------------------------------


def is_permutation(sigma: Sequence[int]) -> bool:
    return sorted(sigma) == list(range(len(sigma)))


def compose(sigma, tau):
    """``(sigma o tau)(i) = sigma(tau(i))``."""
    return tuple(sigma[t] for t in tau)


def inverse(sigma):
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


def koszul_sign(sigma: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign ``e`` with ``x_{s(0)} . ... . x_{s(n-1)} = e * x_0 . ... . x_{n-1}``.

    Every pair of positions whose entries appear out of order contributes
    ``(-1)^{|x_a||x_b|}``.
    """
    n = len(sigma)
    if len(degrees) != n:
        raise MalformedInput(f"permutation of order {n} given {len(degrees)} degrees")
    if not is_permutation(sigma):
        raise MalformedInput(f"{tuple(sigma)} is not a permutation")
    odd = 0
    for a in range(n):
        da = degrees[sigma[a]] & 1
        if not da:
            continue
        for b in range(a + 1, n):
            if sigma[a] > sigma[b] and degrees[sigma[b]] & 1:
                odd ^= 1
    return -1 if odd else 1


def unshuffles(block_sizes: Sequence[int]) -> list:
    """All ``(k_1, ..., k_j)``-unshuffles, increasing within each block.

    Ordered lexicographically by the image tuple, i.e. by the first block's
    image set, then the second's, and so on.
    """
    sizes = [int(k) for k in block_sizes]
    if not sizes:
        raise MalformedInput("unshuffles needs at least one block")
    if any(k < 0 for k in sizes):
        raise MalformedInput(f"negative block size in {sizes}")
    n = sum(sizes)
    check_arity(n, "unshuffle order")
    return list(_unshuffles(tuple(sizes)))


@lru_cache(maxsize=None)
def _unshuffles(sizes):
    n = sum(sizes)
    out = []

    def rec(remaining, blocks_left, prefix):
        if not blocks_left:
            out.append(prefix)
            return
        k = blocks_left[0]
        for chosen in combinations(remaining, k):
            rest = tuple(x for x in remaining if x not in chosen)
            rec(rest, blocks_left[1:], prefix + chosen)

    rec(tuple(range(n)), sizes, ())
    return tuple(out)
