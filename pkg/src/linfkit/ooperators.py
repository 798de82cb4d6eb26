"""O-operators with respect to Lie infinity actions.

A candidate is a degree-zero family ``t: S(V) -> E`` generating a
comorphism ``T: S(V) -> S(E)``.  It is an O-operator when
``M_E o T = T o (Phi^T + M_V)``.
"""

from collections import defaultdict
from fractions import Fraction
from itertools import product
from math import factorial

import sympy

from .actions import Action, adjoint_action, join_mono, split_mono
from .config import caps, check_weight
from .errors import MalformedInput, NotInvertible, NotOOperator, SymmetryViolation
from .graded import GradedSpace, koszul_sign, unshuffles
from .linfty import LieInftyStructure, _as_family, is_cocycle
from .symcoalg import (
    ONE,
    Family,
    _normalize,
    add_into,
    basis_monomials,
    clean,
    coderivation_apply,
    comorphism_apply,
    letters_product,
    mono_degree,
    mono_str,
    parities,
    scale,
    splittings,
    vec_str,
)
from .verdict import Verdict


def as_candidate(t: Family, action: Action) -> Family:
    if t.source != action.V or t.target != action.E:
        raise MalformedInput("candidate must be a family S(V) -> E")
    if not t.is_zero() and t.degree != 0:
        raise MalformedInput("candidate must have degree zero")
    return t if not t.is_zero() else Family.zero(action.V, action.E, 0)


def phi_T(action: Action, t: Family, max_weight=None) -> Family:
    """Generating family of ``Phi^T``: ``v -> sum e Phi(T(v_(1)) . v_(2))``."""
    t = as_candidate(t, action)
    S = action.S
    V = action.V
    W = caps().max_weight if max_weight is None else max_weight
    if t.bound is not None:
        W = min(W, t.bound)

    def fn(mono):
        out = {}
        if len(mono) < 2:
            return out
        for sign, (v1, v2) in splittings(V, mono, 2):
            for y, c in comorphism_apply(t, {v1: ONE}).items():
                val = action.phi.value(join_mono(S, y, v2))
                add_into(out, val, sign * c)
        return clean({(o - S.left_dim,): c for (o,), c in out.items()})

    return Family.from_function(V, V, 1, fn, W)


def phi_T_apply(action: Action, t: Family, v: dict) -> dict:
    """``Phi^T(v) = Phi_{T(v_(1))} v_(2)`` with each ``Phi_y`` a coderivation of ``S(V)``."""
    t = as_candidate(t, action)
    V = action.V
    out = {}
    for mono, c in v.items():
        for sign, (v1, v2) in splittings(V, mono, 2):
            add_into(out, action.apply(comorphism_apply(t, {v1: ONE}), {v2: ONE}), sign * c)
    return clean(out)


def check_ooperator(t: Family, action: Action, n_max=None, method="coalgebra") -> Verdict:
    """``M_E o T = T o (Phi^T + M_V)`` on basis monomials of ``S(V)``.

    ``method="coalgebra"`` compares the full values in ``S(E)``;
    ``method="projection"`` compares ``l(T(v))`` with
    ``t(Phi^T(v) + M_V(v))``.  ``details`` reports the weight-one and
    weight-two parts separately as ``item_i`` and ``item_ii``.
    """
    t = as_candidate(t, action)
    W = caps().max_weight if n_max is None else n_max
    check_weight(W, "n_max")
    E, V = action.E, action.V
    lE = action.E_structure.brackets
    lV = action.V_structure.brackets
    pT = phi_T(action, t, W)
    MVT = pT + lV if not lV.is_zero() else pT
    for n in range(1, W + 1):
        for mono in basis_monomials(V, n):
            v = {mono: ONE}
            if method == "coalgebra":
                lhs = coderivation_apply(lE, comorphism_apply(t, v))
                rhs = comorphism_apply(t, coderivation_apply(MVT, v))
            elif method == "projection":
                lhs = lE(comorphism_apply(t, v))
                rhs = t(coderivation_apply(MVT, v))
            else:
                raise MalformedInput(f"unknown method {method!r}")
            if lhs != rhs:
                return Verdict(f"ooperator[{method}]", False, mono_str(V, mono),
                               vec_str(E, lhs), vec_str(E, rhs), {"max_weight": W},
                               {"weight": n, "item_i": n > 1, "item_ii": n > 2})
    return Verdict(f"ooperator[{method}]", True, bounds={"max_weight": W},
                   details={"item_i": True, "item_ii": W >= 2})


def rota_baxter_candidate(structure: LieInftyStructure, fam: Family, suffix="'") -> Family:
    """Re-home a degree-zero family ``S(E) -> E`` onto the primed copy of E."""
    act = adjoint_action(structure, suffix)
    return Family(act.V, act.E, fam.degree, fam.terms, fam.bound, check=False)


def check_rota_baxter(t: Family, structure: LieInftyStructure, n_max=None, method="coalgebra") -> Verdict:
    """O-operator check against the adjoint action.

    ``t`` may be given on E itself or on its primed copy.
    """
    act = adjoint_action(structure)
    if t.source == structure.space:
        t = Family(act.V, act.E, t.degree, t.terms, t.bound, check=False)
    v = check_ooperator(t, act, n_max, method)
    v.check = v.check.replace("ooperator", "rota_baxter")
    return v


def induced_structure(t: Family, action: Action, n_max=None):
    """``M_{V^T} = Phi^T + M_V`` on V, with its certificates.

    Refuses (``NotOOperator``) if t fails ``check_ooperator``.  Returns
    ``(structure, jacobi_verdict, morphism_verdict)``.
    """
    from .actions import check_linfty_morphism
    from .linfty import check_jacobi

    W = caps().max_weight if n_max is None else n_max
    v = check_ooperator(t, action, W)
    if not v:
        raise NotOOperator(f"candidate is not an O-operator: {v.witness}")
    pT = phi_T(action, t, W)
    fam = pT + action.V_structure.brackets
    if fam.is_zero():
        fam = Family.zero(action.V, action.V, 1)
    structure = LieInftyStructure(action.V, fam)
    jac = structure.certify(W)
    mor = check_linfty_morphism(as_candidate(t, action), structure, action.E_structure, W)
    return structure, jac, mor


def _compositions(j):
    if j == 0:
        yield ()
        return
    for first in range(1, j + 1):
        for rest in _compositions(j - first):
            yield (first,) + rest


def induced_bracket_formula(t: Family, action: Action, mono) -> dict:
    """``m_n^T`` on a basis monomial from the unshuffle expansion.

    ``m_n(v) + sum_{j<n} sum_{(k_1..k_i) of j} sum_{Sh(k_1..k_i, n-j)} e(s) / i!
    Phi_{i, n-j}(t_{k_1}(..) . ... . t_{k_i}(..), v_s(j+1) . ... . v_s(n))``.
    """
    t = as_candidate(t, action)
    S, E, V = action.S, action.E, action.V
    n = len(mono)
    degs = [V.degree(i) for i in mono]
    out = dict(action.V_structure.brackets.value(mono))
    out = {(o + S.left_dim,): c for (o,), c in out.items()}
    for j in range(1, n):
        for comp in _compositions(j):
            i = len(comp)
            w = Fraction(1, factorial(i))
            for sigma in unshuffles(list(comp) + [n - j]):
                eps = koszul_sign(sigma, degs)
                blocks, pos = [], 0
                for k in comp:
                    blocks.append(tuple(mono[s] for s in sigma[pos:pos + k]))
                    pos += k
                vals = [t.value(b) for b in blocks]
                if not all(vals):
                    continue
                rest = tuple(mono[s] for s in sigma[j:])
                for y, c in letters_product(E, vals).items():
                    add_into(out, action.phi.value(join_mono(S, y, rest)), eps * w * c)
    return clean({(o - S.left_dim,): c for (o,), c in clean(out).items()})


# -- comorphism inversion -------------------------------------------------------------


def _to_sympy(mat, rows, cols):
    M = sympy.zeros(len(rows), len(cols))
    for (a, b), c in mat.items():
        M[rows.index(a), cols.index(b)] = sympy.Rational(c.numerator, c.denominator)
    return M


def invert_linear(fam: Family) -> Family:
    """Inverse of an arity-one degree-zero family, degree by degree."""
    A, B = fam.source, fam.target
    inv_terms = {}
    degrees = sorted(set(A.degrees) | set(B.degrees))
    for d in degrees:
        src, tgt = list(A.component(d)), list(B.component(d))
        if len(src) != len(tgt):
            raise NotInvertible(f"degree {d}: dimensions {len(src)} and {len(tgt)} differ")
        if not src:
            continue
        mat = {}
        for b in src:
            for (a,), c in fam.value((b,)).items():
                mat[(a, b)] = c
        M = _to_sympy(mat, tgt, src)
        if M.det() == 0:
            raise NotInvertible(f"linear component is singular in degree {d}")
        Mi = M.inv()
        for r, b in enumerate(src):
            for col, a in enumerate(tgt):
                c = Mi[r, col]
                if c != 0:
                    inv_terms.setdefault((a,), {})[(b,)] = Fraction(int(c.p), int(c.q))
    return Family(B, A, 0, inv_terms)


def invert_comorphism(t: Family, max_weight=None) -> Family:
    """Generating family of ``T^{-1}``, solved weight by weight.

    ``s_1 = t_1^{-1}`` and ``s_n(x) = -t_1^{-1}(t(S_{>=2 blocks}(x)))``.
    """
    W = caps().max_weight if max_weight is None else max_weight
    if t.degree != 0 and not t.is_zero():
        raise MalformedInput("comorphisms have degree zero")
    s1 = invert_linear(t.component(1))
    E = t.target
    terms = dict(s1.terms)
    for n in range(2, W + 1):
        partial = Family(E, t.source, 0, terms, check=False)
        for mono in basis_monomials(E, n):
            rest = comorphism_apply(partial, {mono: ONE})
            val = s1(t(rest))
            if val:
                terms[mono] = scale(val, -1)
    return Family(E, t.source, 0, terms, bound=W, check=False)


def check_inverse(t: Family, s: Family, max_weight=None) -> Verdict:
    """``T o S = id`` on ``S(E)`` and ``S o T = id`` on ``S(V)`` up to max_weight."""
    W = caps().max_weight if max_weight is None else max_weight
    for fam_a, fam_b, name in ((t, s, "T∘T⁻¹"), (s, t, "T⁻¹∘T")):
        X = fam_b.source
        for n in range(1, W + 1):
            for mono in basis_monomials(X, n):
                got = comorphism_apply(fam_a, comorphism_apply(fam_b, {mono: ONE}))
                if got != {mono: ONE}:
                    return Verdict("comorphism_inverse", False, f"{name}({mono_str(X, mono)})",
                                   vec_str(X, got), mono_str(X, mono), {"max_weight": W})
    return Verdict("comorphism_inverse", True, bounds={"max_weight": W})


# -- coadjoint O-operators and the cocycle omega ---------------------------------------


def _pair(vec, b) -> Fraction:
    """``<alpha, v_b>`` for alpha given in dual-basis coordinates."""
    return vec.get((b,), Fraction(0))


def _value_on_word(fam, word):
    s, m = _normalize(parities(fam.source), tuple(word))
    return scale(fam.value(m), s) if s else {}


def check_symmetric(t: Family, n_max=None) -> Verdict:
    """``<b, t_n(a_1..a_n)> = (-1)^{|a||b| + |a_n|(|a_1|+..+|a_{n-1}|)} <a_n, t_n(a_1..a_{n-1}, b)>``.

    Source is a dual space ``E*`` sharing E's indices; covectors pair with
    E-vectors by matching index.
    """
    Es = t.source
    W = caps().max_weight if n_max is None else n_max
    degs = Es.degrees
    for n in range(1, W + 1):
        for head in (basis_monomials(Es, n - 1) if n > 1 else [()]):
            for an, b in product(range(Es.dim), repeat=2):
                word = head + (an,)
                lhs = _pair(_value_on_word(t, word), b)
                rhs = _pair(_value_on_word(t, head + (b,)), an)
                da = sum(degs[i] for i in word)
                exp = da * degs[b] + degs[an] * sum(degs[i] for i in head)
                if lhs != (-rhs if exp & 1 else rhs):
                    w = "(" + ", ".join(Es.name(i) for i in word) + f"; {Es.name(b)})"
                    return Verdict("symmetric", False, w, str(lhs), str(rhs), {"max_weight": W})
    return Verdict("symmetric", True, bounds={"max_weight": W})


def check_inverse_symmetric(s: Family, n_max=None) -> Verdict:
    """``<s_n(x_1..x_n), y> = (-1)^{|y||x_n|} <s_n(x_1..x_{n-1}, y), x_n>``."""
    E = s.source
    W = caps().max_weight if n_max is None else n_max
    degs = E.degrees
    for n in range(1, W + 1):
        for head in (basis_monomials(E, n - 1) if n > 1 else [()]):
            for xn, y in product(range(E.dim), repeat=2):
                lhs = _pair(_value_on_word(s, head + (xn,)), y)
                rhs = _pair(_value_on_word(s, head + (y,)), xn)
                if lhs != (-rhs if degs[y] & degs[xn] & 1 else rhs):
                    w = "(" + ", ".join(E.name(i) for i in head + (xn,)) + f"; {E.name(y)})"
                    return Verdict("inverse_symmetric", False, w, str(lhs), str(rhs), {"max_weight": W})
    return Verdict("inverse_symmetric", True, bounds={"max_weight": W})


def omega_functional(s: Family, max_weight=None) -> dict:
    """Values ``<omega, x_1 . ... . x_{k+1}> = <s_k(x_1..x_k), x_{k+1}>`` on E-monomials."""
    E = s.source
    W = caps().max_weight if max_weight is None else max_weight
    out = {}
    for n in range(2, W + 1):
        for mono in basis_monomials(E, n):
            val = _pair(s.value(mono[:-1]), mono[-1])
            if val:
                out[mono] = val
    return out


def omega_cochain(s: Family, max_weight=None) -> dict:
    from .linfty import functional_to_cochain

    return functional_to_cochain(s.source, omega_functional(s, max_weight))


def inverse_from_omega(E: GradedSpace, Es: GradedSpace, omega: dict, max_weight=None) -> Family:
    """The family ``s_k(x)`` with ``<s_k(x), y> = <omega, x . y>`` (omega as a functional)."""
    W = caps().max_weight if max_weight is None else max_weight
    par = parities(E)
    terms = {}
    for n in range(1, W):
        for mono in basis_monomials(E, n):
            val = {}
            for y in range(E.dim):
                sign, m = _normalize(par, mono + (y,))
                if sign and omega.get(m):
                    val[(y,)] = sign * omega[m]
            if val:
                terms[mono] = val
    return Family(E, Es, 0, terms, bound=W - 1, check=False)


def coadjoint_cocycle_check(t: Family, action: Action, n_max=None) -> dict:
    """Both sides of the coadjoint equivalence for a symmetric invertible T.

    Returns a dict of verdicts: ``inverse`` (T o T^-1 = id), ``symmetric``,
    ``cocycle`` (omega closed) and ``ooperator``; the last two must agree.
    Raises ``SymmetryViolation`` on an asymmetric T and ``NotInvertible``
    when ``t_1`` is singular.
    """
    W = caps().max_weight if n_max is None else n_max
    t = as_candidate(t, action)
    sym = check_symmetric(t, W)
    if not sym:
        raise SymmetryViolation("candidate is not symmetric", sym.witness)
    s = invert_comorphism(t, W + 1)
    inv = check_inverse(t, s, W)
    lE = action.E_structure
    omega = omega_functional(s, W + 1)
    cocycle = _functional_is_closed(lE.brackets, omega, W + 1)
    oop = check_ooperator(t, action, W)
    return {"inverse": inv, "symmetric": sym, "inverse_symmetric": check_inverse_symmetric(s, W),
            "cocycle": cocycle, "ooperator": oop, "omega": omega, "inverse_family": s}


def _functional_is_closed(l: Family, phi: dict, max_weight) -> Verdict:
    """``<omega, M_E(x)> = 0`` for every E-monomial x of weight <= max_weight."""
    E = l.source
    for n in range(1, max_weight + 1):
        for x in basis_monomials(E, n):
            Mx = coderivation_apply(l, {x: ONE})
            val = sum((phi.get(k, 0) * c for k, c in Mx.items()), Fraction(0))
            if val:
                return Verdict("cocycle", False, mono_str(E, x), f"<w, M(x)> = {val}", "0",
                               {"max_weight": max_weight}, {"weight": n})
    return Verdict("cocycle", True, bounds={"max_weight": max_weight})
