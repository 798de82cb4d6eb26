"""The reduced symmetric coalgebra on a graded space.

Elements of S(E) are plain dicts mapping canonical monomials to Fractions.
A monomial is a sorted tuple of basis indices; odd letters never repeat
(such words vanish).  Equal even letters are stored as a multiset but the
coproduct treats them as distinguishable positions, which reproduces the
binomial multiplicities of the polynomial coalgebra.

Families of multilinear maps (``q = sum q_k``) are :class:`Family` objects;
:class:`Coderivation` and :class:`Comorphism` wrap them and implement the
usual unique extensions.
"""

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial

from .config import caps, check_weight
from .errors import MalformedInput, TruncationError
from .graded import GradedSpace, scalar

ONE = Fraction(1)


# -- words and vectors --------------------------------------------------------


@lru_cache(maxsize=None)
def parities(space: GradedSpace) -> tuple:
    return tuple(d & 1 for d in space.degrees)


def mono_degree(space, mono) -> int:
    deg = space.degrees
    return sum(deg[i] for i in mono)


def _normalize(par, word):
    """Return ``(sign, sorted word)`` or ``(0, None)`` if the word vanishes."""
    n = len(word)
    odd = 0
    for a in range(n):
        wa = word[a]
        if not par[wa]:
            continue
        for b in range(a + 1, n):
            wb = word[b]
            if wa > wb and par[wb]:
                odd ^= 1
    mono = tuple(sorted(word))
    for a in range(n - 1):
        if mono[a] == mono[a + 1] and par[mono[a]]:
            return 0, None
    return (-1 if odd else 1), mono


def normalize_word(space: GradedSpace, factors) -> dict:
    """Canonicalize ``x_1 . ... . x_n`` (names or indices) into an element."""
    word = tuple(space.index(f) if isinstance(f, str) else int(f) for f in factors)
    if not word:
        raise MalformedInput("empty word is not in the reduced symmetric algebra")
    check_weight(len(word))
    sign, mono = _normalize(parities(space), word)
    return {mono: Fraction(sign)} if sign else {}


def _insert(par, letter, mono):
    """``letter . mono`` as ``(sign, monomial)``."""
    flip = 0
    if par[letter]:
        for m in mono:
            if m < letter:
                if par[m]:
                    flip ^= 1
            elif m == letter:
                return 0, None
            else:
                break
    return (-1 if flip else 1), tuple(sorted(mono + (letter,)))


def _append(par, mono, letter):
    """``mono . letter`` as ``(sign, monomial)``."""
    flip = 0
    if par[letter]:
        for m in mono:
            if m > letter and par[m]:
                flip ^= 1
            elif m == letter:
                return 0, None
    return (-1 if flip else 1), tuple(sorted(mono + (letter,)))


def add_into(acc, vec, coeff=ONE):
    for k, v in vec.items():
        acc[k] = acc.get(k, 0) + coeff * v
    return acc


def clean(vec) -> dict:
    return {k: v for k, v in vec.items() if v != 0}


def scale(vec, c) -> dict:
    c = scalar(c)
    if c == 0:
        return {}
    return {k: c * v for k, v in vec.items()}


def vsub(a, b) -> dict:
    out = dict(a)
    add_into(out, b, -ONE)
    return clean(out)


def vadd(*vecs) -> dict:
    out = {}
    for v in vecs:
        add_into(out, v)
    return clean(out)


def sym_product(space: GradedSpace, a: dict, b: dict) -> dict:
    """Graded commutative product ``a . b``."""
    par = parities(space)
    out = defaultdict(Fraction)
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            sign, mono = _normalize(par, m1 + m2)
            if sign:
                out[mono] += sign * c1 * c2
    return clean(out)


def letters_product(space: GradedSpace, vectors) -> dict:
    """Product of weight-one elements, left to right."""
    par = parities(space)
    acc = {(): ONE}
    for vec in vectors:
        nxt = defaultdict(Fraction)
        for mono, c in acc.items():
            for (letter,), a in vec.items():
                sign, m = _append(par, mono, letter)
                if sign:
                    nxt[m] += sign * c * a
        acc = nxt
        if not acc:
            return {}
    return clean(acc)


def element(space: GradedSpace, spec) -> dict:
    """Build an element from ``{"e f": "1/2", ...}`` or ``{("e", "f"): 1}``."""
    out = {}
    for key, coeff in spec.items():
        factors = key.split() if isinstance(key, str) else key
        add_into(out, normalize_word(space, factors), scalar(coeff))
    return clean(out)


def vector(space: GradedSpace, spec) -> dict:
    """Weight-one element from ``{"e": "2", "f": -1}``."""
    return clean({(space.index(n),): scalar(c) for n, c in spec.items()})


def mono_str(space, mono) -> str:
    return "⊙".join(space.name(i) for i in mono)


def vec_str(space, vec) -> str:
    if not vec:
        return "0"
    parts = []
    for mono in sorted(vec, key=lambda m: (len(m), m)):
        c = vec[mono]
        parts.append(f"{c}*{mono_str(space, mono)}")
    return " + ".join(parts)


def homogeneous_degree(space, vec):
    degs = {mono_degree(space, m) for m in vec}
    if len(degs) > 1:
        raise MalformedInput(f"element is not homogeneous (degrees {sorted(degs)})")
    return degs.pop() if degs else None


@lru_cache(maxsize=None)
def basis_monomials(space: GradedSpace, weight: int) -> tuple:
    """Canonical basis of ``S^weight(space)``."""
    par = parities(space)
    out = []
    for mono in combinations_with_replacement(range(space.dim), weight):
        if any(mono[a] == mono[a + 1] and par[mono[a]] for a in range(weight - 1)):
            continue
        out.append(mono)
    return tuple(out)


def monomials_up_to(space: GradedSpace, max_weight: int, min_weight: int = 1):
    out = []
    for w in range(min_weight, max_weight + 1):
        out.extend(basis_monomials(space, w))
    return out


# -- splittings (Sweedler sums) ----------------------------------------------


@lru_cache(maxsize=None)
def _split_patterns(par: tuple, k: int, allow_empty: bool):
    n = len(par)
    results = []
    labels = [0] * n
    counts = [0] * k

    def rec(pos, odd):
        if pos == n:
            if not allow_empty and 0 in counts:
                return
            blocks = tuple(tuple(p for p in range(n) if labels[p] == b) for b in range(k))
            results.append((-1 if odd else 1, blocks))
            return
        for b in range(k):
            labels[pos] = b
            flip = 0
            if par[pos]:
                for q in range(pos):
                    if labels[q] > b and par[q]:
                        flip ^= 1
            counts[b] += 1
            rec(pos + 1, odd ^ flip)
            counts[b] -= 1

    rec(0, 0)
    return tuple(results)


@lru_cache(maxsize=None)
def _partition_patterns(par: tuple):
    """Unordered set partitions, blocks listed by their smallest position."""
    n = len(par)
    results = []
    labels = [0] * n

    def rec(pos, nblocks, odd):
        if pos == n:
            blocks = tuple(tuple(p for p in range(n) if labels[p] == b) for b in range(nblocks))
            results.append((-1 if odd else 1, blocks))
            return
        for b in range(nblocks + 1):
            labels[pos] = b
            flip = 0
            if par[pos]:
                for q in range(pos):
                    if labels[q] > b and par[q]:
                        flip ^= 1
            rec(pos + 1, max(nblocks, b + 1), odd ^ flip)

    rec(0, 0, 0)
    return tuple(results)


def splittings(space: GradedSpace, mono, k: int, allow_empty: bool = False):
    """Signed ordered splittings of ``mono`` into ``k`` sub-words.

    Each entry is ``(sign, (m_1, ..., m_k))``; the sign is the Koszul sign of
    the unshuffle that brings the blocks to the front in order.
    """
    par = parities(space)
    pattern = _split_patterns(tuple(par[i] for i in mono), k, allow_empty)
    return [(s, tuple(tuple(mono[p] for p in blk) for blk in blocks)) for s, blocks in pattern]


def set_partitions(space: GradedSpace, mono):
    par = parities(space)
    pattern = _partition_patterns(tuple(par[i] for i in mono))
    return [(s, tuple(tuple(mono[p] for p in blk) for blk in blocks)) for s, blocks in pattern]


def coproduct(space: GradedSpace, x: dict, iterations: int = 1) -> dict:
    """Iterated reduced coproduct ``Delta^(n)`` as ``{(m_1,...,m_{n+1}): c}``."""
    if iterations < 1:
        raise MalformedInput("iterations must be >= 1")
    out = defaultdict(Fraction)
    for mono, c in x.items():
        if len(mono) <= iterations:
            continue
        for sign, blocks in splittings(space, mono, iterations + 1):
            out[blocks] += sign * c
    return clean(out)


def tensor_apply_left(space, delta: dict, fn) -> dict:
    """``(fn (x) id)`` on a two-fold tensor for an even map ``fn``."""
    out = defaultdict(Fraction)
    for (a, b), c in delta.items():
        for m, v in fn({a: ONE}).items():
            out[(m,) + (b,)] += c * v
    return clean(out)


# -- families -----------------------------------------------------------------


class Family:
    """Finitely supported family ``S(source) -> target`` of fixed degree.

    ``terms`` maps canonical input monomials to weight-one elements of the
    target.  Graded symmetry is automatic because keys are canonical.  A
    family computed only up to some weight carries that ``bound``;
    evaluating it above the bound raises :class:`TruncationError`.
    """

    __slots__ = ("source", "target", "degree", "terms", "bound")

    def __init__(self, source, target, degree, terms=None, bound=None, check=True):
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.bound = bound
        self.terms = {}
        for mono, val in (terms or {}).items():
            val = clean(val)
            if val:
                self.terms[tuple(mono)] = val
        if check:
            self._validate()

    def _validate(self):
        sdeg, tdeg = self.source.degrees, self.target.degrees
        for mono, val in self.terms.items():
            if list(mono) != sorted(mono):
                raise MalformedInput(f"non-canonical input monomial {mono}")
            if not mono:
                raise MalformedInput("families have no weight-zero component")
            want = sum(sdeg[i] for i in mono) + self.degree
            for out in val:
                if len(out) != 1:
                    raise MalformedInput("family outputs must have weight one")
                if tdeg[out[0]] != want:
                    raise MalformedInput(
                        f"term {mono_str(self.source, mono)} -> {mono_str(self.target, out)} "
                        f"violates family degree {self.degree}"
                    )

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, degree, {}, check=False)

    @classmethod
    def from_terms(cls, source, target, degree, spec, check=True):
        """``spec`` maps input words (strings ``"e f"`` or name tuples) to outputs.

        Inputs are normalized with their Koszul sign folded into the output.
        """
        terms = {}
        for key, out in spec.items():
            factors = key.split() if isinstance(key, str) else key
            word = normalize_word(source, factors)
            if not word:
                continue
            (mono, sign), = word.items()
            if isinstance(out, dict):
                val = vector(target, out)
            else:
                val = out
            acc = terms.setdefault(mono, {})
            add_into(acc, val, sign)
        return cls(source, target, degree, terms, check=check)

    @classmethod
    def from_function(cls, source, target, degree, fn, max_weight=None, min_weight=1, bound=True):
        """Tabulate ``fn(mono) -> weight-one element`` on all basis monomials."""
        W = caps().max_weight if max_weight is None else max_weight
        terms = {}
        for mono in monomials_up_to(source, W, min_weight):
            val = fn(mono)
            if val:
                terms[mono] = val
        return cls(source, target, degree, terms, bound=W if bound else None, check=False)

    # evaluation

    def value(self, mono) -> dict:
        if self.bound is not None and len(mono) > self.bound:
            raise TruncationError(f"family only known up to weight {self.bound}, asked for {len(mono)}")
        return self.terms.get(mono, {})

    def __call__(self, x: dict) -> dict:
        out = defaultdict(Fraction)
        for mono, c in x.items():
            for k, v in self.value(mono).items():
                out[k] += c * v
        return clean(out)

    # structure

    @property
    def arities(self):
        return sorted({len(m) for m in self.terms})

    @property
    def max_arity(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def component(self, k: int) -> "Family":
        return self.restrict(lambda m: len(m) == k)

    def restrict(self, predicate) -> "Family":
        return Family(self.source, self.target, self.degree,
                      {m: v for m, v in self.terms.items() if predicate(m)}, self.bound, check=False)

    def with_bound(self, bound) -> "Family":
        return Family(self.source, self.target, self.degree, self.terms, bound, check=False)

    def truncate(self, max_weight) -> "Family":
        f = self.restrict(lambda m: len(m) <= max_weight)
        f.bound = max_weight if self.bound is None else min(self.bound, max_weight)
        return f

    def _combine(self, other, c):
        if not isinstance(other, Family):
            return NotImplemented
        if other.source != self.source or other.target != self.target:
            raise MalformedInput("families over different spaces")
        if not self.is_zero() and not other.is_zero() and self.degree != other.degree:
            raise MalformedInput(f"adding families of degrees {self.degree} and {other.degree}")
        degree = self.degree if not self.is_zero() else other.degree
        terms = {m: dict(v) for m, v in self.terms.items()}
        for m, v in other.terms.items():
            add_into(terms.setdefault(m, {}), v, c)
        bounds = [b for b in (self.bound, other.bound) if b is not None]
        return Family(self.source, self.target, degree, terms, min(bounds) if bounds else None, check=False)

    def __add__(self, other):
        return self._combine(other, ONE)

    def __sub__(self, other):
        return self._combine(other, -ONE)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, c) -> "Family":
        c = scalar(c)
        return Family(self.source, self.target, self.degree,
                      {m: scale(v, c) for m, v in self.terms.items()}, self.bound, check=False)

    def __rmul__(self, c):
        return self.scaled(c)

    def __eq__(self, other):
        if not isinstance(other, Family):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        if self.terms != other.terms:
            return False
        return self.is_zero() or self.degree == other.degree

    __hash__ = None

    def first_difference(self, other):
        """Smallest canonical monomial on which two families differ, or None."""
        keys = sorted(set(self.terms) | set(other.terms), key=lambda m: (len(m), m))
        for m in keys:
            if self.terms.get(m, {}) != other.terms.get(m, {}):
                return m
        return None

    def __repr__(self):
        items = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            items.append(f"{mono_str(self.source, m)} -> {vec_str(self.target, self.terms[m])}")
        body = "; ".join(items) if items else "0"
        return f"Family(deg={self.degree}: {body})"


# -- coderivations and comorphisms ---------------------------------------------


def coderivation_apply(q: Family, x: dict) -> dict:
    """``Q(x) = q(x_(1)) . x_(2) + q(x)`` for the coderivation generated by q."""
    space = q.target
    par = parities(space)
    out = defaultdict(Fraction)
    for mono, c in x.items():
        check_weight(len(mono))
        for sign, (b1, b2) in splittings(space, mono, 2, allow_empty=True):
            if not b1:
                continue
            val = q.value(b1)
            if not val:
                continue
            for (letter,), a in val.items():
                s, m = _insert(par, letter, b2)
                if s:
                    out[m] += s * sign * c * a
    return clean(out)


def comorphism_apply(f: Family, x: dict, method: str = "partitions") -> dict:
    """``F(x) = sum_k 1/k! f(x_(1)) . ... . f(x_(k))`` for a degree-zero f.

    ``method="definition"`` sums over ordered splittings with the 1/k!
    weights exactly as written; the default sums over unordered set
    partitions, which is the same thing because f is even.
    """
    if f.degree != 0:
        raise MalformedInput("comorphisms are generated by degree-zero families")
    out = defaultdict(Fraction)
    src = f.source
    for mono, c in x.items():
        check_weight(len(mono))
        if method == "definition":
            for k in range(1, len(mono) + 1):
                w = Fraction(1, factorial(k))
                for sign, blocks in splittings(src, mono, k):
                    vals = [f.value(b) for b in blocks]
                    if all(vals):
                        add_into(out, letters_product(f.target, vals), sign * c * w)
        else:
            for sign, blocks in set_partitions(src, mono):
                vals = [f.value(b) for b in blocks]
                if all(vals):
                    add_into(out, letters_product(f.target, vals), sign * c)
    return clean(out)


class Coderivation:
    """Coderivation of S(E) generated by a family ``q: S(E) -> E``."""

    def __init__(self, family: Family):
        if family.source != family.target:
            raise MalformedInput("a coderivation needs source == target")
        self.family = family

    @property
    def space(self):
        return self.family.source

    @property
    def degree(self):
        return self.family.degree

    def __call__(self, x: dict) -> dict:
        return coderivation_apply(self.family, x)

    def on(self, mono) -> dict:
        return self({tuple(mono): ONE})

    def __repr__(self):
        return f"Coderivation({self.family!r})"


class Comorphism:
    """Coalgebra morphism ``S(E) -> S(V)`` generated by a degree-zero family."""

    def __init__(self, family: Family):
        if family.degree != 0:
            raise MalformedInput("comorphisms are generated by degree-zero families")
        self.family = family

    def __call__(self, x: dict, method: str = "partitions") -> dict:
        return comorphism_apply(self.family, x, method)

    def on(self, mono) -> dict:
        return self({tuple(mono): ONE})


def coderivation_from_family(q: Family) -> Coderivation:
    return Coderivation(q)


def comorphism_from_family(f: Family) -> Comorphism:
    return Comorphism(f)


def koszul_exp(a, b) -> int:
    return -1 if (a & 1) and (b & 1) else 1


def rn_bracket(f: Family, g: Family, max_weight=None) -> Family:
    """Richardson-Nijenhuis bracket ``f(G(x)) - (-1)^{|f||g|} g(F(x))``."""
    if f.source != g.source or f.source != f.target or g.source != g.target:
        raise MalformedInput("rn_bracket needs endomorphism families of one space")
    space = f.source
    W = caps().max_weight if max_weight is None else max_weight
    for h in (f, g):
        if h.bound is not None:
            W = min(W, h.bound)
    s = koszul_exp(f.degree, g.degree)

    def fn(mono):
        x = {mono: ONE}
        out = f(coderivation_apply(g, x))
        return vsub(out, scale(g(coderivation_apply(f, x)), s))

    return Family.from_function(space, space, f.degree + g.degree, fn, W)


def commutator(Q: Coderivation, P: Coderivation, max_weight=None) -> Coderivation:
    """``[Q, P]_c = Q P - (-1)^{deg Q deg P} P Q`` as a coderivation."""
    if Q.space != P.space:
        raise MalformedInput("commutator of coderivations on different spaces")
    return Coderivation(rn_bracket(Q.family, P.family, max_weight))


def commutator_apply(Q: Coderivation, P: Coderivation, x: dict) -> dict:
    """Evaluate ``[Q, P]_c`` on x by composing the two coderivations directly."""
    s = koszul_exp(Q.degree, P.degree)
    return vsub(Q(P(x)), scale(P(Q(x)), s))


def projection(space, x: dict) -> dict:
    """``p: S(E) -> E``, the weight-one part."""
    return {m: c for m, c in x.items() if len(m) == 1}
