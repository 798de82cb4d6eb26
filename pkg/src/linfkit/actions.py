"""Representations, Lie infinity morphisms and actions.

Maps out of ``S(E) (x) S(V)`` are stored as families on ``E (+) V`` whose
input monomials are mixed (E letters first, then V letters, which is the
canonical order) and whose outputs lie in V.  So ``Phi_x(v)`` for an
E-monomial x and a V-monomial v is the family value on ``x + v``.
"""

from collections import defaultdict
from fractions import Fraction

from .config import caps, check_weight
from .errors import InvalidComplex, MalformedInput
from .graded import GradedSpace, SumSpace, copy_space, direct_sum, dual
from .linfty import (
    LieInftyStructure,
    _as_family,
    check_jacobi,
    end_index,
    end_space,
    endo_dgla,
    endo_matrix,
    mat_commutator,
    mat_mul,
)
from .symcoalg import (
    ONE,
    Family,
    _normalize,
    add_into,
    basis_monomials,
    clean,
    coderivation_apply,
    comorphism_apply,
    koszul_exp,
    mono_degree,
    mono_str,
    parities,
    scale,
    splittings,
    vec_str,
    vsub,
)
from .verdict import Verdict


# -- index plumbing between E, V and E (+) V ---------------------------------------


def shift_vec(vec, offset):
    return {tuple(i + offset for i in m): c for m, c in vec.items()}


def embed_family(fam: Family, S: SumSpace, side: str) -> Family:
    """A family on E (side "left") or V (side "right") as a family on S."""
    off = 0 if side == "left" else S.left_dim
    terms = {tuple(i + off for i in m): shift_vec(v, off) for m, v in fam.terms.items()}
    return Family(S, S, fam.degree, terms, fam.bound, check=False)


def split_mono(S: SumSpace, mono):
    """``(E-part, V-part)`` of a canonical monomial on S, V-part in V indices."""
    k = sum(1 for i in mono if i < S.left_dim)
    return mono[:k], tuple(i - S.left_dim for i in mono[k:])


def join_mono(S: SumSpace, x, v):
    return tuple(x) + tuple(i + S.left_dim for i in v)


def _is_mixed(S, mono):
    x, v = split_mono(S, mono)
    return bool(x) and bool(v)


# -- Lie infinity morphisms -------------------------------------------------------


def check_linfty_morphism(f: Family, source, target, n_max=None, method="comorphism") -> Verdict:
    """``F o M_source = M_target o F`` for the comorphism F generated by f.

    ``method="comorphism"`` compares full values in ``S(target)``;
    ``method="unshuffle"`` compares only the projections
    ``f(M(x)) = sum_k 1/k! l'_k(f(x_(1)), ..., f(x_(k)))``, evaluated with the
    ordered-splitting definition of the comorphism.
    """
    ls, lt = _as_family(source), _as_family(target)
    if f.source != ls.source or f.target != lt.source:
        raise MalformedInput("morphism family does not match source/target spaces")
    if not f.is_zero() and f.degree != 0:
        raise MalformedInput("Lie infinity morphisms have degree zero")
    if f.is_zero():
        f = Family.zero(f.source, f.target, 0)
    E = ls.source
    W = caps().max_weight if n_max is None else n_max
    check_weight(W, "n_max")
    for n in range(1, W + 1):
        for mono in basis_monomials(E, n):
            x = {mono: ONE}
            if method == "comorphism":
                lhs = comorphism_apply(f, coderivation_apply(ls, x))
                rhs = coderivation_apply(lt, comorphism_apply(f, x))
            elif method == "unshuffle":
                lhs = f(coderivation_apply(ls, x))
                rhs = lt(comorphism_apply(f, x, method="definition"))
            else:
                raise MalformedInput(f"unknown method {method!r}")
            if lhs != rhs:
                return Verdict(f"linfty_morphism[{method}]", False, mono_str(E, mono),
                               vec_str(lt.source, lhs), vec_str(lt.source, rhs),
                               {"max_weight": W}, {"weight": n})
    return Verdict(f"linfty_morphism[{method}]", True, bounds={"max_weight": W})


# -- representations ---------------------------------------------------------------


class Representation:
    """``Phi_k: S^k(E) -> End(V)`` of total degree +1 on a complex ``(V, d)``.

    ``phi`` is a degree +1 family on ``E (+) V`` supported on monomials
    with exactly one V letter: ``Phi_k(x)(v) = phi(x . v)``.
    """

    def __init__(self, E, V: GradedSpace, d: Family = None, phi: Family = None):
        self.structure = E if isinstance(E, LieInftyStructure) else LieInftyStructure(E.source, E)
        self.E = self.structure.space
        self.V = V
        self.S = direct_sum(self.E, V)
        self.d = d if d is not None else Family.zero(V, V, 1)
        if self.d.source != V or self.d.target != V:
            raise MalformedInput("differential must be a family V -> V")
        if self.d.max_arity > 1 or (not self.d.is_zero() and self.d.degree != 1):
            raise InvalidComplex("differential must be an arity-one family of degree +1")
        if mat_mul(endo_matrix(V, self.d), endo_matrix(V, self.d)):
            raise InvalidComplex("d does not square to zero")
        phi = phi if phi is not None else Family.zero(self.S, self.S, 1)
        if phi.source != self.S:
            raise MalformedInput("representation family must live on E (+) V")
        for mono, val in phi.terms.items():
            x, v = split_mono(self.S, mono)
            if not x or len(v) != 1:
                raise MalformedInput(f"representation term {mono_str(self.S, mono)} needs one V letter")
            if any(self.S.is_left(o) for (o,) in val):
                raise MalformedInput("representation outputs must lie in V")
        self.phi = phi if not phi.is_zero() else Family.zero(self.S, self.S, 1)

    def matrix(self, x) -> dict:
        """``Phi(x)`` as ``{(a, b): c}`` in V indices, linear in an E-element x."""
        if isinstance(x, tuple):
            x = {x: ONE}
        out = defaultdict(Fraction)
        off = self.S.left_dim
        for xm, c in x.items():
            for b in range(self.V.dim):
                for (o,), val in self.phi.value(join_mono(self.S, xm, (b,))).items():
                    out[(o - off, b)] += c * val
        return clean(out)

    def as_morphism(self) -> Family:
        """The degree-zero family ``S(E) -> End(V)[1]``."""
        End = end_space(self.V)
        terms = defaultdict(dict)
        for mono in self.phi.terms:
            x, _ = split_mono(self.S, mono)
            if x in terms:
                continue
            terms[x] = {(end_index(self.V, a, b),): c for (a, b), c in self.matrix(x).items()}
        return Family(self.E, End, 0, terms)

    def endo(self) -> LieInftyStructure:
        return endo_dgla(self.V, self.d if not self.d.is_zero() else None)

    def __eq__(self, other):
        return (isinstance(other, Representation) and self.E == other.E and self.V == other.V
                and self.d == other.d and self.phi == other.phi
                and self.structure.brackets == other.structure.brackets)


def check_representation(rep: Representation, n_max=None, method="identity") -> Verdict:
    """Representation identities on basis monomials of E up to weight n_max.

    ``method="identity"`` evaluates
    ``Phi(M_E(x)) = d Phi(x) + 1/2 sum e [[Phi(x_(1)), Phi(x_(2))]]`` with
    plain matrix commutators; ``method="morphism"`` checks that Phi is a
    Lie infinity morphism into ``endo_dgla(V, d)``.
    """
    W = caps().max_weight if n_max is None else n_max
    if method == "morphism":
        v = check_linfty_morphism(rep.as_morphism(), rep.structure, rep.endo(), W)
        v.check = "representation[morphism]"
        return v
    if method != "identity":
        raise MalformedInput(f"unknown method {method!r}")
    check_weight(W, "n_max")
    E, V = rep.E, rep.V
    D = endo_matrix(V, rep.d)
    l = rep.structure.brackets
    for n in range(1, W + 1):
        for mono in basis_monomials(E, n):
            lhs = rep.matrix(coderivation_apply(l, {mono: ONE}))
            dx = mono_degree(E, mono) + 1
            rhs = scale(mat_commutator(D, 1, rep.matrix(mono), dx), -1)
            half = {}
            for sign, (b1, b2) in splittings(E, mono, 2):
                d1, d2 = mono_degree(E, b1) + 1, mono_degree(E, b2) + 1
                com = mat_commutator(rep.matrix(b1), d1, rep.matrix(b2), d2)
                add_into(half, com, sign * (-1 if d1 & 1 else 1))
            add_into(rhs, half, Fraction(1, 2))
            rhs = clean(rhs)
            if lhs != rhs:
                return Verdict("representation[identity]", False, mono_str(E, mono),
                               _mat_str(V, lhs), _mat_str(V, rhs), {"max_weight": W}, {"weight": n})
    return Verdict("representation[identity]", True, bounds={"max_weight": W})


def _mat_str(V, mat):
    if not mat:
        return "0"
    return " + ".join(f"{c}*[{V.name(a)}<-{V.name(b)}]" for (a, b), c in sorted(mat.items()))


def representation_from_matrices(E, V, d, matrices: dict) -> Representation:
    """``matrices`` maps E-monomials (tuples) to ``{(a, b): c}`` in V indices."""
    structure = E if isinstance(E, LieInftyStructure) else LieInftyStructure(E.source, E)
    S = direct_sum(structure.space, V)
    terms = {}
    for x, mat in matrices.items():
        for (a, b), c in mat.items():
            if c:
                add_into(terms.setdefault(join_mono(S, x, (b,)), {}), {(a + S.left_dim,): c})
    return Representation(structure, V, d, Family(S, S, 1, terms))


def dual_representation(rep: Representation) -> Representation:
    """``*Phi`` on ``(V*, d*)``.

    On dual bases, ``*Phi(e)[a, b] = -(-1)^{(|e|+1)|v_b*|} Phi(e)[b, a]``;
    ``d*`` is the ``e = 0``-degree instance of the same rule.
    """
    V = rep.V
    Vs = dual(V)

    def transpose(mat, e_deg):
        out = {}
        for (a, b), c in mat.items():
            # entry (b, a) of the dual; |v_a*| = -|v_a|
            out[(b, a)] = -c if ((e_deg + 1) * Vs.degree(a)) % 2 == 0 else c
        return out

    dmat = transpose(endo_matrix(V, rep.d), 0)
    terms = {}
    for (a, b), c in dmat.items():
        add_into(terms.setdefault((b,), {}), {(a,): c})
    d_star = Family(Vs, Vs, 1, terms)
    xs = {split_mono(rep.S, m)[0] for m in rep.phi.terms}
    mats = {x: transpose(rep.matrix(x), mono_degree(rep.E, x)) for x in sorted(xs)}
    return representation_from_matrices(rep.structure, Vs, d_star, mats)


def double_dual_matches(rep: Representation) -> bool:
    """``**Phi`` equals Phi under ``v -> (-1)^{|v|} v**``, entrywise."""
    dd = dual_representation(dual_representation(rep))
    V = rep.V
    if dd.V != V:
        return False
    xs = {split_mono(rep.S, m)[0] for m in rep.phi.terms} | {split_mono(dd.S, m)[0] for m in dd.phi.terms}

    def conj(mat):
        return clean({(a, b): c * (-1) ** ((V.degree(a) + V.degree(b)) % 2) for (a, b), c in mat.items()})

    if conj(endo_matrix(V, dd.d)) != endo_matrix(V, rep.d):
        return False
    return all(conj(dd.matrix(x)) == rep.matrix(x) for x in xs)


# -- actions -----------------------------------------------------------------------


class Action:
    """Lie infinity action of ``(E, l)`` on ``(V, m)`` by maps ``Phi_{k,i}``.

    ``phi`` is a degree +1 family on ``E (+) V`` supported on monomials with
    at least one letter from each side and valued in V.
    """

    def __init__(self, E: LieInftyStructure, V: LieInftyStructure, phi: Family = None):
        self.E_structure = E
        self.V_structure = V
        self.E, self.V = E.space, V.space
        self.S = direct_sum(self.E, self.V)
        phi = phi if phi is not None else Family.zero(self.S, self.S, 1)
        if phi.source != self.S or phi.target != self.S:
            raise MalformedInput("action family must live on E (+) V")
        if not phi.is_zero() and phi.degree != 1:
            raise MalformedInput("action family must have degree +1")
        slices = defaultdict(dict)
        for mono, val in phi.terms.items():
            x, v = split_mono(self.S, mono)
            if not x or not v:
                raise MalformedInput(f"action term {mono_str(self.S, mono)} is not mixed")
            if any(self.S.is_left(o) for (o,) in val):
                raise MalformedInput("action outputs must lie in V")
            slices[x][v] = shift_vec(val, -self.S.left_dim)
        self.phi = phi if not phi.is_zero() else Family.zero(self.S, self.S, 1)
        self._slices = dict(slices)

    def slice(self, x) -> Family:
        """``Phi_x`` as a family ``S(V) -> V`` of degree ``|x| + 1``."""
        deg = mono_degree(self.E, x) + 1
        return Family(self.V, self.V, deg, self._slices.get(tuple(x), {}), self.phi.bound, check=False)

    def apply(self, xel: dict, vel: dict) -> dict:
        """``Phi_x(v)`` with ``Phi_x`` extended as a coderivation of ``S(V)``."""
        out = {}
        for x, c in xel.items():
            if tuple(x) in self._slices:
                add_into(out, coderivation_apply(self.slice(x), vel), c)
        return clean(out)

    def semidirect(self) -> LieInftyStructure:
        return semidirect(self.E_structure, self, self.V_structure)

    @property
    def x_support(self):
        return sorted(self._slices, key=lambda m: (len(m), m))


def semidirect(M_E, action: Action, M_V) -> LieInftyStructure:
    """``M_E + Upsilon + M_V`` on ``E (+) V``, generated by ``l + Phi + m``."""
    lE, lV = _as_family(M_E), _as_family(M_V)
    if lE.source != action.E or lV.source != action.V:
        raise MalformedInput("semidirect: spaces do not match the action")
    S = action.S
    fam = embed_family(lE, S, "left") + embed_family(lV, S, "right") + action.phi
    if fam.is_zero():
        fam = Family.zero(S, S, 1)
    return LieInftyStructure(S, fam)


def check_action(action: Action, n_max=None, method="semidirect") -> Verdict:
    """Whether Phi is a Lie infinity action, up to total weight n_max.

    ``method="semidirect"``: the semidirect structure squares to zero.
    ``method="morphism"``: for E-monomials x and V-monomials v,
    ``Phi_{M_E(x)} = -[M_V, Phi_x]_c + 1/2 sum e (-1)^{|x_(1)|+1} [Phi_x(1), Phi_x(2)]_c``
    on v.  Both routes also require ``M_V`` itself to square to zero.
    """
    W = caps().max_weight if n_max is None else n_max
    check_weight(W, "n_max")
    if method == "semidirect":
        v = check_jacobi(action.semidirect(), W, method="square")
        v.check = "action[semidirect]"
        return v
    if method != "morphism":
        raise MalformedInput(f"unknown method {method!r}")
    E, V = action.E, action.V
    lE = action.E_structure.brackets
    lV = action.V_structure.brackets
    for name, fam in (("E", lE), ("V", lV)):
        v = check_jacobi(fam, W)
        if not v:
            v.check = f"action[morphism] ({name} structure)"
            return v
    for n in range(2, W + 1):
        for a in range(1, n):
            b = n - a
            for x in basis_monomials(E, a):
                xdeg = mono_degree(E, x)
                Mx = coderivation_apply(lE, {x: ONE})
                pairs = splittings(E, x, 2)
                for vm in basis_monomials(V, b):
                    v = {vm: ONE}
                    lhs = action.apply(Mx, v)
                    rhs = {}
                    add_into(rhs, coderivation_apply(lV, action.apply({x: ONE}, v)), -ONE)
                    add_into(rhs, action.apply({x: ONE}, coderivation_apply(lV, v)),
                             1 if xdeg & 1 else -1)
                    for sign, (b1, b2) in pairs:
                        d1, d2 = mono_degree(E, b1) + 1, mono_degree(E, b2) + 1
                        com = vsub(action.apply({b1: ONE}, action.apply({b2: ONE}, v)),
                                   scale(action.apply({b2: ONE}, action.apply({b1: ONE}, v)),
                                         koszul_exp(d1, d2)))
                        add_into(rhs, com, Fraction(sign * (-1 if d1 & 1 else 1), 2))
                    rhs = clean(rhs)
                    if lhs != rhs:
                        return Verdict("action[morphism]", False,
                                       f"{mono_str(E, x)} ; {mono_str(V, vm)}",
                                       vec_str(V, lhs), vec_str(V, rhs), {"max_weight": W},
                                       {"weight": n})
    return Verdict("action[morphism]", True, bounds={"max_weight": W})


def action_from_semidirect(E: LieInftyStructure, V: LieInftyStructure, structure) -> Action:
    """Read off the mixed part of a structure on ``E (+) V`` as an action."""
    fam = _as_family(structure)
    S = direct_sum(E.space, V.space)
    if fam.source.basis != S.basis:
        raise MalformedInput("structure does not live on E (+) V")
    terms = {}
    for mono, val in fam.terms.items():
        if _is_mixed(S, mono):
            if any(S.is_left(o) for (o,) in val):
                raise MalformedInput("mixed term with an E-valued output")
            terms[mono] = val
    return Action(E, V, Family(S, S, 1, terms, fam.bound, check=False))


def _to_copy(E: GradedSpace, fam: Family, suffix="'"):
    V = copy_space(E, suffix)
    return V, Family(V, V, fam.degree, fam.terms, fam.bound, check=False)


def adjoint_action(structure: LieInftyStructure, suffix="'") -> Action:
    """``Phi_{k,i}(x, v) = l_{k+i}(x, v)`` on a primed copy of E."""
    E = structure.space
    l = structure.brackets
    V, lV = _to_copy(E, l, suffix)
    S = direct_sum(E, V)
    par = parities(E)
    terms = {}
    for mono, val in l.terms.items():
        # every way of marking a sub-multiset of the letters as "V"
        for sign, (x, v) in splittings(E, mono, 2):
            if not x or not v:
                continue
            key = join_mono(S, x, v)
            if key in terms:
                continue
            s, m = _normalize(par, x + v)
            terms[key] = shift_vec(scale(l.value(m), s), S.left_dim)
    return Action(structure, LieInftyStructure(V, lV), Family(S, S, 1, terms, check=False))


def adjoint_representation(structure: LieInftyStructure, suffix="'") -> Representation:
    """``Phi_k(x)(v) = l_{k+1}(x, v)`` with ``d = l_1`` on a copy of E."""
    act = adjoint_action(structure, suffix)
    return action_to_linear_rep(act)


def rep_to_action(rep: Representation) -> Action:
    V = LieInftyStructure(rep.V, rep.d if not rep.d.is_zero() else Family.zero(rep.V, rep.V, 1))
    return Action(rep.structure, V, rep.phi)


def action_to_linear_rep(action: Action) -> Representation:
    S = action.S
    phi = action.phi.restrict(lambda m: len(split_mono(S, m)[1]) == 1)
    d = action.V_structure.brackets.component(1)
    return Representation(action.E_structure, action.V, d if not d.is_zero() else None, phi)


def direct_sum_structure(M_E, M_V) -> LieInftyStructure:
    lE, lV = _as_family(M_E), _as_family(M_V)
    return semidirect(M_E, Action(LieInftyStructure(lE.source, lE), LieInftyStructure(lV.source, lV)), M_V)


# -- the E (+) V structure built from a representation, slot by slot ------------------


def slotwise_value(rep: Representation, word) -> dict:
    """``Phi~_k`` on an ordered word of basis letters of ``E (+) V``.

    The E component is ``l_k`` on all-E words; the V component is
    ``sum_i (-1)^{|w_i|(|w_{i+1}| + ... + |w_k|)} phi_{k-1}(.., w_i^, .., v_i)``
    where ``phi_0 = d``.  Words with two or more V letters give zero.
    """
    S = rep.S
    degs = S.degrees
    par = parities(S)
    vpos = [p for p, w in enumerate(word) if not S.is_left(w)]
    if not vpos:
        xs = tuple(word)
        s, m = _normalize(par, xs)
        return scale(rep.structure.brackets.value(m), s) if s else {}
    if len(vpos) > 1:
        return {}
    (p,) = vpos
    k = len(word)
    exp = degs[word[p]] * sum(degs[w] for w in word[p + 1:])
    sign = -1 if exp & 1 else 1
    rest = tuple(w for q, w in enumerate(word) if q != p)
    vletter = word[p] - S.left_dim
    if not rest:
        return shift_vec(scale(rep.d.value((vletter,)), sign), S.left_dim)
    s, m = _normalize(parities(rep.E), rest)
    if not s:
        return {}
    val = rep.phi.value(join_mono(S, m, (vletter,)))
    return scale(val, sign * s)


def slotwise_structure(rep: Representation) -> Family:
    """The family ``Phi~`` tabulated on canonical monomials of ``E (+) V``."""
    S = rep.S
    K = max(rep.structure.brackets.max_arity, rep.phi.max_arity, 1)
    terms = {}
    for n in range(1, K + 1):
        for mono in basis_monomials(S, n):
            val = clean(slotwise_value(rep, mono))
            if val:
                terms[mono] = val
    return Family(S, S, 1, terms)
