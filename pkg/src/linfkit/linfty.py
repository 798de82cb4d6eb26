"""Symmetric Lie infinity structures.

A structure on E is a degree +1 family ``l = sum l_k`` whose coderivation
``M`` squares to zero.  The generalized Jacobi identities are checked two
ways (explicit unshuffle sum, and ``M o M`` on full words), which must
always agree.
"""

from collections import defaultdict
from fractions import Fraction
from math import factorial

from .config import caps, check_weight
from .errors import InvalidComplex, MalformedInput, NotMaurerCartan, TruncationError
from .graded import GradedSpace, dual, koszul_sign, scalar, shift, unshuffles
from .symcoalg import (
    ONE,
    Coderivation,
    Family,
    _insert,
    _normalize,
    add_into,
    basis_monomials,
    clean,
    coderivation_apply,
    koszul_exp,
    letters_product,
    mono_degree,
    mono_str,
    monomials_up_to,
    parities,
    rn_bracket,
    scale,
    sym_product,
    vec_str,
    vsub,
)
from .verdict import Verdict


class LieInftyStructure:
    """``(E, l)`` with ``l`` a degree +1 family on E.

    ``certified_to`` records the weight up to which ``[M, M]_c = 0`` has been
    verified (None until :meth:`certify` succeeds).
    """

    def __init__(self, space: GradedSpace, brackets: Family, name: str = None):
        if brackets.source != space or brackets.target != space:
            raise MalformedInput("brackets must be a family S(E) -> E on the given space")
        if not brackets.is_zero() and brackets.degree != 1:
            raise MalformedInput(f"brackets must have degree +1, got {brackets.degree}")
        if brackets.is_zero():
            brackets = Family.zero(space, space, 1)
        self.space = space
        self.brackets = brackets
        self.name = name
        self.certified_to = None

    @classmethod
    def abelian(cls, space):
        return cls(space, Family.zero(space, space, 1))

    @classmethod
    def from_terms(cls, space, spec, name=None):
        return cls(space, Family.from_terms(space, space, 1, spec), name)

    @property
    def coderivation(self) -> Coderivation:
        return Coderivation(self.brackets)

    def bracket(self, k):
        return self.brackets.component(k)

    def certify(self, max_weight=None) -> Verdict:
        v = check_jacobi(self, max_weight)
        if v:
            self.certified_to = v.bounds["max_weight"]
        return v

    def __repr__(self):
        return f"LieInftyStructure({self.space!r}, {self.brackets!r})"


def _as_family(l):
    return l.brackets if isinstance(l, LieInftyStructure) else l


def _jacobi_direct(l: Family, mono):
    """sum over i and (i, n-i)-unshuffles of l(l(x_s(1..i)) . x_s(i+1..n))."""
    space = l.source
    degs = [space.degree(i) for i in mono]
    par = parities(space)
    n = len(mono)
    out = defaultdict(Fraction)
    for i in range(1, n + 1):
        for sigma in unshuffles([i, n - i]):
            inner = l.value(tuple(sorted(mono[s] for s in sigma[:i])))
            if not inner:
                continue
            eps = koszul_sign(sigma, degs)
            rest = tuple(mono[s] for s in sigma[i:])
            for (letter,), c in inner.items():
                sign, word = _normalize(par, (letter,) + rest)
                if sign:
                    add_into(out, l.value(word), eps * sign * c)
    return clean(out)


def check_jacobi(l, n_max=None, method="direct") -> Verdict:
    """Generalized Jacobi identities on every basis monomial of weight <= n_max.

    ``method="direct"`` evaluates the unshuffle sum; ``method="square"``
    checks that ``M(M(x))`` vanishes as a full word.  The first failing
    monomial and its weight are reported; both methods agree on it.
    """
    fam = _as_family(l)
    space = fam.source
    W = caps().max_weight if n_max is None else n_max
    check_weight(W, "n_max")
    M = Coderivation(fam)
    for n in range(1, W + 1):
        for mono in basis_monomials(space, n):
            if method == "direct":
                val = _jacobi_direct(fam, mono)
            elif method == "square":
                val = M(M({mono: ONE}))
            else:
                raise MalformedInput(f"unknown method {method!r}")
            if val:
                return Verdict(f"jacobi[{method}]", False, mono_str(space, mono),
                               vec_str(space, val), "0", {"max_weight": W},
                               {"weight": n})
    return Verdict(f"jacobi[{method}]", True, bounds={"max_weight": W})


def is_square_zero(Q: Coderivation, max_weight=None) -> Verdict:
    W = caps().max_weight if max_weight is None else max_weight
    v = check_jacobi(Q.family, W, method="square")
    v.check = "square_zero"
    return v


# -- skew convention and décalage ------------------------------------------------


def _skew_normalize(degrees, word):
    """Sort a word under the skew rule ``x y = -(-1)^{|x||y|} y x``."""
    n = len(word)
    odd = 0
    for a in range(n):
        for b in range(a + 1, n):
            if word[a] > word[b]:
                odd ^= 1 ^ (degrees[word[a]] & degrees[word[b]] & 1)
    mono = tuple(sorted(word))
    for a in range(n - 1):
        if mono[a] == mono[a + 1] and degrees[mono[a]] % 2 == 0:
            return 0, None
    return (-1 if odd else 1), mono


class SkewBrackets:
    """Skew-symmetric brackets ``l'_k`` of degree ``2 - k`` on an unshifted space."""

    def __init__(self, space: GradedSpace, terms: dict):
        self.space = space
        self.terms = {}
        degs = space.degrees
        for word, val in terms.items():
            sign, mono = _skew_normalize(degs, tuple(word))
            if not sign:
                continue
            val = clean(val)
            k = len(mono)
            for (o,) in val:
                if degs[o] != sum(degs[i] for i in mono) + 2 - k:
                    raise MalformedInput(f"skew bracket of arity {k} must have degree {2 - k}")
            add_into(self.terms.setdefault(mono, {}), val, sign)
        self.terms = {m: clean(v) for m, v in self.terms.items() if clean(v)}

    @classmethod
    def from_terms(cls, space, spec):
        terms = {}
        for key, out in spec.items():
            names = key.split() if isinstance(key, str) else key
            word = tuple(space.index(n) for n in names)
            val = {(space.index(n),): scalar(c) for n, c in out.items()}
            sign, mono = _skew_normalize(space.degrees, word)
            if sign:
                add_into(terms.setdefault(mono, {}), val, sign)
        return cls(space, terms)

    def value(self, word) -> dict:
        sign, mono = _skew_normalize(self.space.degrees, tuple(word))
        if not sign:
            return {}
        return scale(self.terms.get(mono, {}), sign)

    def apply(self, vectors) -> dict:
        """Multilinear evaluation on weight-one elements."""
        out = defaultdict(Fraction)

        def rec(i, word, coeff):
            if i == len(vectors):
                add_into(out, self.value(word), coeff)
                return
            for (letter,), c in vectors[i].items():
                rec(i + 1, word + (letter,), coeff * c)

        rec(0, (), ONE)
        return clean(out)

    @property
    def max_arity(self):
        return max((len(m) for m in self.terms), default=0)

    def __eq__(self, other):
        return isinstance(other, SkewBrackets) and self.space == other.space and self.terms == other.terms


def _decalage_sign(degrees, mono):
    k = len(mono)
    e = 0
    for i, x in enumerate(mono[:-1]):
        e += (k - 1 - i) * degrees[x]
    return -1 if e & 1 else 1


def decalage(skew: SkewBrackets) -> LieInftyStructure:
    """Symmetric brackets on ``E[1]`` from skew brackets on E.

    ``l_k(x_1..x_k) = (-1)^{(k-1)|x_1| + ... + |x_{k-1}|} l'_k(x_1..x_k)``
    with degrees taken in ``E[1]``.
    """
    S = shift(skew.space, 1)
    degs = S.degrees
    terms = {}
    for mono, val in skew.terms.items():
        terms[mono] = scale(val, _decalage_sign(degs, mono))
    return LieInftyStructure(S, Family(S, S, 1, terms))


def undecalage(structure: LieInftyStructure) -> SkewBrackets:
    S = structure.space
    degs = S.degrees
    terms = {m: scale(v, _decalage_sign(degs, m)) for m, v in structure.brackets.terms.items()}
    return SkewBrackets(shift(S, -1), terms)


def check_skew_jacobi(skew: SkewBrackets) -> Verdict:
    """Classical DGLA identities for skew brackets of arity <= 2.

    ``d^2 = 0``, ``d[x,y] = [dx,y] + (-1)^{|x|}[x,dy]`` and
    ``[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]`` on all basis tuples.
    """
    if skew.max_arity > 2:
        raise MalformedInput("check_skew_jacobi only handles brackets of arity <= 2")
    E = skew.space
    degs = E.degrees
    basis = [{(i,): ONE} for i in range(E.dim)]

    def d(v):
        return skew.apply([v])

    def br(a, b):
        return skew.apply([a, b])

    for i, x in enumerate(basis):
        if d(d(x)):
            return Verdict("skew_jacobi", False, f"d^2({E.name(i)})", vec_str(E, d(d(x))), "0")
        for j, y in enumerate(basis):
            lhs = d(br(x, y))
            rhs = vadd_(br(d(x), y), scale(br(x, d(y)), (-1) ** (degs[i] & 1)))
            if lhs != rhs:
                return Verdict("skew_jacobi", False, f"d[{E.name(i)},{E.name(j)}]",
                               vec_str(E, lhs), vec_str(E, rhs))
            for k, z in enumerate(basis):
                lhs = br(x, br(y, z))
                rhs = vadd_(br(br(x, y), z), scale(br(y, br(x, z)), koszul_exp(degs[i], degs[j])))
                if lhs != rhs:
                    return Verdict("skew_jacobi", False,
                                   f"[{E.name(i)},[{E.name(j)},{E.name(k)}]]",
                                   vec_str(E, lhs), vec_str(E, rhs))
    return Verdict("skew_jacobi", True)


def vadd_(a, b):
    out = dict(a)
    add_into(out, b)
    return clean(out)


# -- endomorphism DGLA -------------------------------------------------------------


def endo_matrix(V: GradedSpace, fam: Family) -> dict:
    """Arity-one family V -> V as ``{(a, b): c}`` meaning ``v_b -> c v_a``."""
    out = {}
    for (b,), val in fam.terms.items():
        for (a,), c in val.items():
            out[(a, b)] = c
    return out


def matrix_family(V: GradedSpace, mat: dict, degree: int) -> Family:
    terms = {}
    for (a, b), c in mat.items():
        if c:
            add_into(terms.setdefault((b,), {}), {(a,): c})
    return Family(V, V, degree, terms)


def mat_mul(A: dict, B: dict) -> dict:
    out = defaultdict(Fraction)
    rows = defaultdict(list)
    for (b, c), y in B.items():
        rows[b].append((c, y))
    for (a, b), x in A.items():
        for c, y in rows.get(b, ()):
            out[(a, c)] += x * y
    return clean(out)


def mat_commutator(A, degA, B, degB) -> dict:
    """Graded commutator ``AB - (-1)^{|A||B|} BA``."""
    out = dict(mat_mul(A, B))
    add_into(out, mat_mul(B, A), -koszul_exp(degA, degB))
    return clean(out)


def end_space(V: GradedSpace) -> GradedSpace:
    """Basis ``E[a,b]`` (``v_b -> v_a``) of ``End(V)[1]``, degree ``|a| - |b| - 1``."""
    return GradedSpace(tuple((f"E[{V.name(a)},{V.name(b)}]", V.degree(a) - V.degree(b) - 1)
                             for a in range(V.dim) for b in range(V.dim)))


def end_index(V, a, b):
    return a * V.dim + b


def endo_dgla(V: GradedSpace, d: Family = None) -> LieInftyStructure:
    """``End(V)[1]`` with ``l_1 = -[d, .]_c`` and ``l_2 = (-1)^{deg phi}[phi, psi]_c``.

    ``d`` is a degree +1 arity-one family on V (None for ``d = 0``).
    """
    D = endo_matrix(V, d) if d is not None else {}
    if d is not None and (d.degree != 1 or d.max_arity > 1):
        raise InvalidComplex("differential must be an arity-one family of degree +1")
    if mat_mul(D, D):
        raise InvalidComplex("d does not square to zero")
    S = end_space(V)
    n = V.dim
    elem = [((a, b), V.degree(a) - V.degree(b)) for a in range(n) for b in range(n)]

    def to_vec(mat):
        return clean({(end_index(V, a, b),): c for (a, b), c in mat.items()})

    terms = {}
    for i, ((a, b), deg) in enumerate(elem):
        val = to_vec(scale(mat_commutator(D, 1, {(a, b): ONE}, deg), -1))
        if val:
            terms[(i,)] = val
    par = parities(S)
    for i, ((a, b), dphi) in enumerate(elem):
        for j in range(i, len(elem)):
            if i == j and par[i]:
                continue
            (c, e), dpsi = elem[j]
            com = mat_commutator({(a, b): ONE}, dphi, {(c, e): ONE}, dpsi)
            val = to_vec(scale(com, -1 if dphi & 1 else 1))
            if val:
                terms[(i, j)] = val
    return LieInftyStructure(S, Family(S, S, 1, terms), name="End")


class CoderDGLA:
    """``Coder(S(V))[1]`` with ``d Q = -[M_V, Q]_c`` and ``[[Q, P]] = (-1)^{deg Q}[Q, P]_c``.

    Coderivations are handled through their generating families, truncated
    at ``max_weight``; degrees are the unshifted degrees in ``Coder``.
    """

    def __init__(self, M_V, max_weight=None):
        fam = M_V.family if isinstance(M_V, Coderivation) else _as_family(M_V)
        self.M = fam
        self.space = fam.source
        self.max_weight = caps().max_weight if max_weight is None else max_weight

    def differential(self, q: Family) -> Family:
        return -rn_bracket(self.M, q, self.max_weight)

    def bracket(self, q: Family, p: Family) -> Family:
        b = rn_bracket(q, p, self.max_weight)
        return -b if q.degree & 1 else b


def coder_dgla(M_V, max_weight=None) -> CoderDGLA:
    return CoderDGLA(M_V, max_weight)


# -- cohomology ---------------------------------------------------------------------


def pairing_value(space: GradedSpace, mono) -> Fraction:
    """``<x_1* . ... . x_n*, x_1 . ... . x_n>`` for a canonical monomial.

    Symmetrize the right-hand word and pair tensors with the Koszul rule
    ``(a (x) b)(x (x) y) = (-1)^{|b||x|} a(x) b(y)``; only matching letters
    contribute, giving ``prod mult! * (-1)^{sum_{i<j} |x_i||x_j|}``.
    """
    degs = space.degrees
    odd = 0
    for i in range(len(mono)):
        for j in range(i + 1, len(mono)):
            odd ^= degs[mono[i]] & degs[mono[j]] & 1
    mult = 1
    run = 1
    for a in range(1, len(mono) + 1):
        if a < len(mono) and mono[a] == mono[a - 1]:
            run += 1
        else:
            mult *= factorial(run)
            run = 1
    return Fraction(-mult if odd else mult)


def cochain_to_functional(space, omega: dict) -> dict:
    """Element of ``S(E*)`` (indices shared with E) as values on E-monomials."""
    return clean({m: c * pairing_value(space, m) for m, c in omega.items()})


def functional_to_cochain(space, phi: dict) -> dict:
    return clean({m: c / pairing_value(space, m) for m, c in phi.items()})


class CohomologyDifferential:
    """``d_*`` on ``S(E*)`` with ``<d_* w, x> = (-1)^{|w|} <w, M_E(x)>``.

    Cochains are dicts over monomials of ``dual(E)``, which shares E's
    indices.  ``method="pairing"`` uses the defining formula;
    ``method="derivation"`` extends the value on generators as a degree +1
    derivation.  The two agree.
    """

    def __init__(self, structure, max_weight=None):
        self.l = _as_family(structure)
        self.space = self.l.source
        self.dual_space = dual(self.space)
        self.max_weight = caps().max_weight if max_weight is None else max_weight
        self._gen = {}

    def _pairing_route(self, omega):
        E = self.space
        out = {}
        for m, c in omega.items():
            deg_w = -mono_degree(E, m)
            phi = cochain_to_functional(E, {m: c})
            sign = -1 if deg_w & 1 else 1
            for n in range(1, self.max_weight + 1):
                for x in basis_monomials(E, n):
                    if mono_degree(E, x) != -deg_w - 1:
                        continue
                    Mx = coderivation_apply(self.l, {x: ONE})
                    val = sum((phi.get(k, 0) * v for k, v in Mx.items()), Fraction(0))
                    if val:
                        out[x] = out.get(x, 0) + sign * val
        return functional_to_cochain(E, clean(out))

    def generator(self, i):
        if i not in self._gen:
            self._gen[i] = self._pairing_route({(i,): ONE})
        return self._gen[i]

    def _derivation_route(self, omega):
        Es = self.dual_space
        degs = Es.degrees
        out = {}
        for m, c in omega.items():
            prefix_deg = 0
            for pos, i in enumerate(m):
                sign = -1 if prefix_deg & 1 else 1
                left = {m[:pos]: ONE} if pos else None
                right = {m[pos + 1:]: ONE} if pos + 1 < len(m) else None
                term = self.generator(i)
                if left:
                    term = sym_product(Es, left, term)
                if right:
                    term = sym_product(Es, term, right)
                add_into(out, term, sign * c)
                prefix_deg += degs[i]
        out = clean(out)
        return {k: v for k, v in out.items() if len(k) <= self.max_weight}

    def __call__(self, omega: dict, method="pairing") -> dict:
        if method == "pairing":
            return self._pairing_route(omega)
        if method == "derivation":
            return self._derivation_route(omega)
        raise MalformedInput(f"unknown method {method!r}")


def cohomology_differential(structure, max_weight=None) -> CohomologyDifferential:
    return CohomologyDifferential(structure, max_weight)


def is_cocycle(structure, omega: dict, max_weight=None) -> Verdict:
    """``d_* omega = 0`` up to ``max_weight``, witnessed on E-monomials."""
    l = _as_family(structure)
    E = l.source
    W = caps().max_weight if max_weight is None else max_weight
    phi = cochain_to_functional(E, omega)
    for n in range(1, W + 1):
        for x in basis_monomials(E, n):
            Mx = coderivation_apply(l, {x: ONE})
            val = sum((phi.get(k, 0) * v for k, v in Mx.items()), Fraction(0))
            if val:
                return Verdict("cocycle", False, mono_str(E, x), f"<w, M(x)> = {val}", "0",
                               {"max_weight": W}, {"weight": n})
    return Verdict("cocycle", True, bounds={"max_weight": W})


# -- Maurer-Cartan elements and twisting ----------------------------------------------


def _check_mc_candidate(space, z):
    for m in z:
        if len(m) != 1:
            raise MalformedInput("a Maurer-Cartan candidate must have weight one")
        if space.degree(m[0]) != 0:
            raise MalformedInput("a Maurer-Cartan candidate must have degree zero")


def curvature(structure, z: dict) -> dict:
    """``sum_k 1/k! l_k(z, ..., z)``."""
    l = _as_family(structure)
    E = l.source
    _check_mc_candidate(E, z)
    out = {}
    power = {(): ONE}
    for k in range(1, l.max_arity + 1):
        power = dict(z) if k == 1 else sym_product(E, power, z)
        add_into(out, l(power), Fraction(1, factorial(k)))
    return clean(out)


def is_maurer_cartan(structure, z: dict) -> Verdict:
    l = _as_family(structure)
    curv = curvature(l, z)
    if curv:
        return Verdict("maurer_cartan", False, vec_str(l.source, z), vec_str(l.source, curv), "0")
    return Verdict("maurer_cartan", True)


def twist(structure, z: dict, require_mc=False) -> LieInftyStructure:
    """``l^z_k(x) = sum_i 1/i! l_{k+i}(z, ..., z, x)``."""
    l = _as_family(structure)
    E = l.source
    _check_mc_candidate(E, z)
    if require_mc and not is_maurer_cartan(l, z):
        raise NotMaurerCartan("twisting element is not Maurer-Cartan")
    K = l.max_arity if l.bound is None else l.bound
    powers = [{(): ONE}]
    for i in range(1, K + 1):
        powers.append(sym_product(E, powers[-1], z) if i > 1 else dict(z))

    def fn(mono):
        out = {}
        for i in range(0, K - len(mono) + 1):
            if i == 0:
                arg = {mono: ONE}
            else:
                arg = sym_product(E, powers[i], {mono: ONE})
            add_into(out, l(arg), Fraction(1, factorial(i)))
        return clean(out)

    fam = Family.from_function(E, E, 1, fn, K, bound=l.bound is not None)
    return LieInftyStructure(E, fam)


# -- generic bracket algebras -----------------------------------------------------------


class BracketAlgebra:
    """Lie infinity algebra given by bracket callables on arbitrary elements.

    ``brackets(elems)`` returns ``l_k(elems)``; ``degree(x)`` gives the
    degree of a homogeneous element; ``zero`` is the additive unit.  Elements
    support ``+`` and ``.scaled(c)``.  Used for the infinite-looking algebras
    built from coderivations, whose brackets vanish above ``max_arity``.
    """

    def __init__(self, brackets, degree, zero, max_arity, is_zero=None):
        self._brackets = brackets
        self.degree = degree
        self.zero = zero
        self.max_arity = max_arity
        self._is_zero = is_zero or (lambda x: x.is_zero())

    def bracket(self, elems):
        if not elems or len(elems) > self.max_arity:
            return self.zero
        return self._brackets(list(elems))

    def is_zero(self, x):
        return self._is_zero(x)

    def curvature(self, z):
        out = self.zero
        for k in range(1, self.max_arity + 1):
            out = out + self.bracket([z] * k).scaled(Fraction(1, factorial(k)))
        return out

    def is_maurer_cartan(self, z) -> bool:
        return self.is_zero(self.curvature(z))

    def twist(self, z) -> "BracketAlgebra":
        K = self.max_arity

        def brackets(elems):
            out = self.zero
            for i in range(0, K - len(elems) + 1):
                out = out + self.bracket([z] * i + list(elems)).scaled(Fraction(1, factorial(i)))
            return out

        return BracketAlgebra(brackets, self.degree, self.zero, K, self._is_zero)

    def jacobi_defect(self, elems):
        """``sum_{i+j=n+1} sum_{Sh(i,n-i)} e(s) l_j(l_i(x_s..), x_s..)``."""
        n = len(elems)
        degs = [self.degree(x) for x in elems]
        out = self.zero
        for i in range(1, n + 1):
            for sigma in unshuffles([i, n - i]):
                eps = koszul_sign(sigma, degs)
                inner = self.bracket([elems[s] for s in sigma[:i]])
                if self.is_zero(inner):
                    continue
                outer = self.bracket([inner] + [elems[s] for s in sigma[i:]])
                out = out + outer.scaled(eps)
        return out


def cocycle_space(structure, degree=0, min_weight=2, max_weight=None) -> list:
    """Basis of closed functionals of the given degree, as ``{E-monomial: value}`` dicts.

    Functionals are supported on E-monomials of total degree ``-degree`` and
    weight in ``[min_weight, max_weight]``; closedness is tested on all
    monomials up to ``max_weight``.
    """
    import sympy

    l = _as_family(structure)
    E = l.source
    W = caps().max_weight if max_weight is None else max_weight
    unknowns = [m for m in monomials_up_to(E, W, min_weight) if mono_degree(E, m) == -degree]
    col = {m: j for j, m in enumerate(unknowns)}
    rows = []
    for x in monomials_up_to(E, W):
        Mx = coderivation_apply(l, {x: ONE})
        row = {col[k]: v for k, v in Mx.items() if k in col}
        if row:
            rows.append(row)
    if not unknowns:
        return []
    A = sympy.zeros(len(rows), len(unknowns))
    for i, row in enumerate(rows):
        for j, v in row.items():
            A[i, j] = sympy.Rational(v.numerator, v.denominator)
    basis = A.nullspace() if rows else [sympy.eye(len(unknowns))[:, j] for j in range(len(unknowns))]
    out = []
    for vec in basis:
        out.append({unknowns[j]: Fraction(int(c.p), int(c.q)) for j, c in enumerate(vec) if c != 0})
    return out
