"""Derived brackets on ``h = Hom(S(V), E)`` and the subalgebra ``L' = M + R``.

Everything lives inside ``L = Coder(S(E (+) V))``, handled through
generating families on ``E (+) V``.  An element of h is a family on pure
V-inputs with E outputs; ``P`` keeps exactly that part of a family.  An
element of ``L'`` is a pair ``(m, rho)`` with ``m`` on pure E-inputs valued
in E and ``rho`` on inputs with at least one V letter valued in V.
"""

from fractions import Fraction
from math import factorial

from .actions import Action, check_action, embed_family, join_mono, split_mono
from .config import caps
from .errors import MalformedInput, NotMaurerCartan
from .linfty import BracketAlgebra, LieInftyStructure, _as_family, check_jacobi
from .ooperators import as_candidate, check_ooperator
from .symcoalg import (
    ONE,
    Family,
    add_into,
    basis_monomials,
    clean,
    coderivation_apply,
    comorphism_apply,
    koszul_exp,
    letters_product,
    mono_degree,
    mono_str,
    monomials_up_to,
    rn_bracket,
    scale,
    splittings,
    sym_product,
    vec_str,
)
from .verdict import Verdict


# -- h and the projection P ------------------------------------------------------------


def h_ambient(t: Family, S) -> Family:
    """``t: S(V) -> E`` as a family on ``E (+) V``."""
    terms = {join_mono(S, (), v): dict(val) for v, val in t.terms.items()}
    return Family(S, S, t.degree, terms, t.bound, check=False)


def project_h(F: Family, S, V, E, bound=None) -> Family:
    """``P``: keep pure V-inputs, project outputs to E."""
    terms = {}
    for mono, val in F.terms.items():
        x, v = split_mono(S, mono)
        if x:
            continue
        out = {k: c for k, c in val.items() if S.is_left(k[0])}
        if out:
            terms[v] = out
    b = F.bound if bound is None else bound
    return Family(V, E, F.degree, terms, b, check=False)


def check_linear_over_SE(t: Family, S, max_weight=None) -> Verdict:
    """``t(x . v) = (-1)^{|x||t|} x . t(v)`` for the coderivation of an h element."""
    W = caps().max_weight if max_weight is None else max_weight
    F = h_ambient(t, S)
    E_idx = list(S.left)
    for n in range(2, W + 1):
        for mono in basis_monomials(S, n):
            x, v = split_mono(S, mono)
            if not x or not v:
                continue
            lhs = coderivation_apply(F, {mono: ONE})
            tv = coderivation_apply(F, {join_mono(S, (), v): ONE})
            rhs = {}
            add_into(rhs, sym_product(S, {x: ONE}, tv), koszul_exp(mono_degree(S, x), t.degree))
            rhs = clean(rhs)
            if lhs != rhs:
                return Verdict("S(E)-linear", False, mono_str(S, mono), vec_str(S, lhs), vec_str(S, rhs))
    return Verdict("S(E)-linear", True, bounds={"max_weight": W})


# -- L' = M + R ------------------------------------------------------------------------


class LPrimeElement:
    """``m (+) rho`` in ``L'``; homogeneous of family degree ``degree``."""

    __slots__ = ("E", "V", "S", "m", "rho", "degree")

    def __init__(self, E, V, m: Family = None, rho: Family = None, degree=None):
        from .graded import direct_sum

        self.E, self.V = E, V
        self.S = direct_sum(E, V)
        m = m if m is not None else Family.zero(E, E, 0)
        rho = rho if rho is not None else Family.zero(self.S, self.S, 0)
        if m.source != E or m.target != E:
            raise MalformedInput("m must be a family S(E) -> E")
        if rho.source != self.S:
            raise MalformedInput("rho must be a family on E (+) V")
        for mono, val in rho.terms.items():
            if not split_mono(self.S, mono)[1]:
                raise MalformedInput(f"rho term {mono_str(self.S, mono)} has no V letter")
            if any(self.S.is_left(k[0]) for k in val):
                raise MalformedInput("rho must be valued in V")
        degs = {f.degree for f in (m, rho) if not f.is_zero()}
        if len(degs) > 1:
            raise MalformedInput("m and rho must have the same degree")
        if degree is None:
            degree = degs.pop() if degs else 0
        elif degs and degs.pop() != degree:
            raise MalformedInput("declared degree does not match the blocks")
        self.degree = degree
        self.m = Family(E, E, degree, m.terms, m.bound, check=False)
        self.rho = Family(self.S, self.S, degree, rho.terms, rho.bound, check=False)

    @classmethod
    def from_structures(cls, M_E, action: Action, M_V=None) -> "LPrimeElement":
        """``Delta = l (+) (m + Phi)``, the semidirect structure split blockwise."""
        lE = _as_family(M_E)
        lV = _as_family(M_V) if M_V is not None else action.V_structure.brackets
        rho = embed_family(lV, action.S, "right") + action.phi
        return cls(action.E, action.V, lE, rho, 1)

    @classmethod
    def from_ambient(cls, F: Family, E, V) -> "LPrimeElement":
        from .graded import direct_sum

        S = direct_sum(E, V)
        m_terms, rho_terms = {}, {}
        for mono, val in F.terms.items():
            x, v = split_mono(S, mono)
            left = {k: c for k, c in val.items() if S.is_left(k[0])}
            right = {k: c for k, c in val.items() if not S.is_left(k[0])}
            if v:
                if left:
                    raise MalformedInput(f"not in L': {mono_str(S, mono)} has an E-valued output")
                rho_terms[mono] = right
            else:
                if right:
                    raise MalformedInput(f"not in L': {mono_str(S, mono)} has a V-valued output")
                m_terms[x] = left
        return cls(E, V, Family(E, E, F.degree, m_terms, F.bound, check=False),
                   Family(S, S, F.degree, rho_terms, F.bound, check=False), F.degree)

    def ambient(self) -> Family:
        return embed_family(self.m, self.S, "left") + self.rho

    def rho0(self) -> Family:
        """``rho`` restricted to ``S(V)``, as a family on V."""
        terms = {}
        for mono, val in self.rho.terms.items():
            x, v = split_mono(self.S, mono)
            if not x:
                terms[v] = {(k[0] - self.S.left_dim,): c for k, c in val.items()}
        return Family(self.V, self.V, self.degree, terms, self.rho.bound, check=False)

    def rho_x(self, x) -> Family:
        """``rho`` restricted to ``{x} (x) S(V)``, degree ``|x| + deg``."""
        x = tuple(x)
        terms = {}
        for mono, val in self.rho.terms.items():
            xm, v = split_mono(self.S, mono)
            if xm == x:
                terms[v] = {(k[0] - self.S.left_dim,): c for k, c in val.items()}
        return Family(self.V, self.V, self.degree + mono_degree(self.E, x), terms,
                      self.rho.bound, check=False)

    def __add__(self, other):
        return LPrimeElement(self.E, self.V, self.m + other.m, self.rho + other.rho,
                             self.degree if not self.is_zero() else other.degree)

    def scaled(self, c):
        return LPrimeElement(self.E, self.V, self.m.scaled(c), self.rho.scaled(c), self.degree)

    def is_zero(self):
        return self.m.is_zero() and self.rho.is_zero()

    def __eq__(self, other):
        return isinstance(other, LPrimeElement) and self.m == other.m and self.rho == other.rho

    __hash__ = None

    def __repr__(self):
        return f"LPrimeElement(deg={self.degree}, m={self.m!r}, rho={self.rho!r})"


def _rho_value(a: LPrimeElement, x, w: dict) -> dict:
    """``rho_x(w)`` with w an element of ``S(V)``; x an E-monomial (possibly empty)."""
    S = a.S
    out = {}
    for v, c in w.items():
        add_into(out, a.rho.value(join_mono(S, x, v)), c)
    return {(k[0] - S.left_dim,): c for k, c in clean(out).items()}


def _rho_D(a: LPrimeElement, x, v: dict) -> dict:
    """``rho_x^D(v)``: the coderivation of ``S(V)`` generated by ``rho_x``."""
    return coderivation_apply(a.rho_x(x) if x else a.rho0(), v)


def _block_rho_rho(a: LPrimeElement, b: LPrimeElement, x, v) -> dict:
    """``[rho, rho']`` on ``x (x) v`` from the blockwise expansion (x may be empty)."""
    E = a.E
    out = {}
    for p, q, s in ((a, b, 1), (b, a, -koszul_exp(a.degree, b.degree))):
        part = {}
        vel = {v: ONE}
        if not x:
            add_into(part, _rho_value(p, (), _rho_D(q, (), vel)))
        else:
            dx = mono_degree(E, x)
            add_into(part, _rho_value(p, x, _rho_D(q, (), vel)), koszul_exp(dx, q.degree))
            for sign, (x1, x2) in splittings(E, x, 2):
                add_into(part, _rho_value(p, x1, _rho_D(q, x2, vel)),
                         sign * koszul_exp(mono_degree(E, x1), q.degree))
            add_into(part, _rho_value(p, (), _rho_D(q, x, vel)))
        add_into(out, part, s)
    return clean(out)


def lprime_bracket(a: LPrimeElement, b: LPrimeElement, max_weight=None, method="blocks") -> LPrimeElement:
    """``[a, b]_RN`` in ``L'``.

    ``method="blocks"`` assembles ``[m,m'] (+) ([m,rho'] + [rho,m'] + [rho,rho'])``
    from the blockwise formulas; ``method="ambient"`` takes the commutator
    of the two coderivations of ``S(E (+) V)``.
    """
    W = caps().max_weight if max_weight is None else max_weight
    E, V, S = a.E, a.V, a.S
    if method == "ambient":
        F = rn_bracket(a.ambient(), b.ambient(), W)
        return LPrimeElement.from_ambient(F, E, V)
    if method != "blocks":
        raise MalformedInput(f"unknown method {method!r}")
    mm = rn_bracket(a.m, b.m, W)
    deg = a.degree + b.degree
    off = S.left_dim

    def rho_part(mono):
        x, v = split_mono(S, mono)
        if not v:
            return {}
        out = {}
        if x:
            # [m, rho'] = -(-1)^{|m||rho'|} rho'_{m^D(x)}, and [rho, m'] = rho_{m'^D(x)}
            for p, q, s in ((a, b, -koszul_exp(a.degree, b.degree)), (b, a, 1)):
                mx = coderivation_apply(p.m, {x: ONE})
                val = {}
                for y, c in mx.items():
                    add_into(val, q.rho.value(join_mono(S, y, v)), c)
                add_into(out, val, s)
        add_into(out, {(k[0] + off,): c for k, c in _block_rho_rho(a, b, x, v).items()})
        return clean(out)

    rho = Family.from_function(S, S, deg, rho_part, W)
    return LPrimeElement(E, V, mm, rho, deg)


def mc_check_lprime(a: LPrimeElement, max_weight=None) -> Verdict:
    """Three-part MC criterion for a degree +1 element of ``L'``.

    (i) ``m^D`` squares to zero; (ii) ``rho_0 rho_0^D = 0``; (iii)
    ``rho_{m^D(x)} = -[rho_0, rho_x] - 1/2 (-1)^{|x_(1)|} [rho_x(1), rho_x(2)]``.
    ``details["generic"]`` is ``[a, a]_RN = 0`` in the ambient algebra; the
    conjunction of the three parts must equal it.
    """
    W = caps().max_weight if max_weight is None else max_weight
    if a.degree != 1 and not a.is_zero():
        raise MalformedInput("Maurer-Cartan candidates in L' have degree +1")
    E, V, S = a.E, a.V, a.S
    part_i = check_jacobi(a.m, W)
    part_ii = check_jacobi(a.rho0(), W)
    part_iii = _curved_action_equation(a, W)
    generic = not rn_bracket(a.ambient(), a.ambient(), W).terms
    passed = bool(part_i) and bool(part_ii) and bool(part_iii)
    v = Verdict("mc_lprime", passed, bounds={"max_weight": W},
                details={"structure_E": bool(part_i), "structure_V": bool(part_ii),
                         "curved_action": bool(part_iii), "generic": generic})
    for part in (part_i, part_ii, part_iii):
        if not part:
            v.witness, v.lhs, v.rhs = part.witness, part.lhs, part.rhs
            break
    return v


def _curved_action_equation(a: LPrimeElement, W) -> Verdict:
    E, V = a.E, a.V
    r0 = a.rho0()
    for n in range(2, W + 1):
        for k in range(1, n):
            for x in basis_monomials(E, k):
                mx = coderivation_apply(a.m, {x: ONE})
                rx = a.rho_x(x)
                for vm in basis_monomials(V, n - k):
                    vel = {vm: ONE}
                    lhs = {}
                    for y, c in mx.items():
                        add_into(lhs, _rho_value(a, y, vel), c)
                    lhs = clean(lhs)
                    rhs = {}
                    add_into(rhs, r0(coderivation_apply(rx, vel)), -ONE)
                    add_into(rhs, rx(coderivation_apply(r0, vel)), koszul_exp(r0.degree, rx.degree))
                    for sign, (x1, x2) in splittings(E, x, 2):
                        r1, r2 = a.rho_x(x1), a.rho_x(x2)
                        br = {}
                        add_into(br, r1(coderivation_apply(r2, vel)))
                        add_into(br, r2(coderivation_apply(r1, vel)), -koszul_exp(r1.degree, r2.degree))
                        s = -1 if mono_degree(E, x1) & 1 else 1
                        add_into(rhs, br, Fraction(-s * sign, 2))
                    rhs = clean(rhs)
                    if lhs != rhs:
                        return Verdict("curved_action", False, f"{mono_str(E, x)} ; {mono_str(V, vm)}",
                                       vec_str(V, lhs), vec_str(V, rhs), {"max_weight": W})
    return Verdict("curved_action", True, bounds={"max_weight": W})


def lprime_dgla(max_arity=2) -> BracketAlgebra:
    """``L'[1]`` with ``l_2(x, y) = (-1)^{deg x} [x, y]_RN`` and no differential."""

    def brackets(elems):
        if len(elems) != 2:
            return _ZERO_L
        x, y = elems
        if x is _ZERO_L or y is _ZERO_L or x.is_zero() or y.is_zero():
            return _ZERO_L
        b = lprime_bracket(x, y)
        return b.scaled(-1) if x.degree & 1 else b

    return BracketAlgebra(brackets, lambda x: x.degree - 1, _ZERO_L, max_arity,
                          is_zero=lambda x: x is _ZERO_L or x.is_zero())


class _ZeroL:
    degree = 1

    def __add__(self, other):
        return other

    __radd__ = __add__

    def scaled(self, c):
        return self

    def is_zero(self):
        return True


_ZERO_L = _ZeroL()


def twisting_consistency(a: LPrimeElement, a2: LPrimeElement, max_weight=None) -> dict:
    """``a + a'`` is MC iff ``a'`` is MC in the twisting of ``L'`` by ``a``."""
    W = caps().max_weight if max_weight is None else max_weight
    with _weight(W):
        alg = lprime_dgla()
        direct = alg.is_maurer_cartan(a + a2)
        twisted = alg.twist(a).is_maurer_cartan(a2)
    return {"sum_is_mc": direct, "twisted_is_mc": twisted, "agree": direct == twisted}


def _weight(W):
    from .config import configured

    return configured(max_weight=max(W, 1))


# -- V-data and derived brackets ----------------------------------------------------------


class VData:
    """``(Coder(S(E (+) V)), h, P, Delta)`` with Delta assembled from an action."""

    def __init__(self, action: Action, max_weight=None):
        self.action = action
        self.E, self.V, self.S = action.E, action.V, action.S
        self.max_weight = caps().max_weight if max_weight is None else max_weight
        self.delta = LPrimeElement.from_structures(action.E_structure, action)
        self.delta_ambient = self.delta.ambient()

    def P(self, F: Family) -> Family:
        return project_h(F, self.S, self.V, self.E, self.max_weight)

    def h(self, t: Family) -> Family:
        return h_ambient(t, self.S)

    def check(self) -> Verdict:
        """Delta squares to zero and restricts to ``M_V`` on ``S(V)``."""
        v = check_action(self.action, self.max_weight)
        v.check = "vdata"
        return v


def derived_bracket(data: VData, ts, method="generic") -> Family:
    """``d_k(t_1..t_k) = P([..[Delta, t_1]_RN .., t_k]_RN)``.

    ``method="fast"`` (all arguments equal, degree zero) uses
    ``l_k(t(v_(1)),..,t(v_(k))) - k t(Phi_{t(v_(1)) . .. . t(v_(k-1))} v_(k))``.
    """
    ts = list(ts)
    if not ts:
        raise MalformedInput("derived brackets need at least one argument")
    W = data.max_weight
    if method == "fast":
        t = ts[0]
        if any(s is not t and s != t for s in ts) or (t.degree != 0 and not t.is_zero()):
            raise MalformedInput("fast path needs equal degree-zero arguments")
        return _derived_fast(data, as_candidate(t, data.action), len(ts))
    if method != "generic":
        raise MalformedInput(f"unknown method {method!r}")
    F = data.delta_ambient
    for t in ts:
        F = rn_bracket(F, data.h(t), W)
    return data.P(F)


def _derived_fast(data: VData, t: Family, k: int) -> Family:
    act = data.action
    E, V = data.E, data.V
    lE = act.E_structure.brackets
    lV = act.V_structure.brackets

    def fn(mono):
        if len(mono) < k:
            return {}
        out = {}
        for sign, blocks in splittings(V, mono, k):
            vals = [t.value(b) for b in blocks[:-1]]
            last = t.value(blocks[-1])
            if all(vals) and last:
                add_into(out, lE(letters_product(E, vals + [last])), sign)
            if all(vals):
                if k == 1:
                    inner = coderivation_apply(lV, {blocks[-1]: ONE})
                else:
                    inner = act.apply(letters_product(E, vals), {blocks[-1]: ONE})
                add_into(out, t(inner), -k * sign)
        return clean(out)

    return Family.from_function(V, E, 1, fn, data.max_weight)


def h_curvature(data: VData, t: Family, method="fast") -> Family:
    """``sum_k 1/k! d_k(t, ..., t)`` up to the data's weight bound."""
    out = Family.zero(data.V, data.E, 1)
    for k in range(1, data.max_weight + 1):
        out = out + derived_bracket(data, [t] * k, method).scaled(Fraction(1, factorial(k)))
    return out


def mc_check_h(data: VData, t: Family, method="fast") -> Verdict:
    """t is Maurer-Cartan in ``h_Delta``; ``details["ooperator"]`` is the independent O-operator verdict."""
    t = as_candidate(t, data.action)
    curv = h_curvature(data, t, method)
    oop = check_ooperator(t, data.action, data.max_weight)
    W = data.max_weight
    if curv.is_zero():
        v = Verdict(f"mc_h[{method}]", True, bounds={"max_weight": W})
    else:
        m = curv.first_difference(Family.zero(data.V, data.E, 1))
        v = Verdict(f"mc_h[{method}]", False, mono_str(data.V, m), vec_str(data.E, curv.value(m)), "0",
                    {"max_weight": W}, {"weight": len(m)})
    v.details["ooperator"] = bool(oop)
    v.details["agree"] = bool(oop) == v.passed
    return v


# -- the algebra L'[1] (+) h with brackets q_k ---------------------------------------------


class PairElement:
    """``(x, a)`` with x an ambient family in ``L'`` and a in h."""

    __slots__ = ("x", "a", "degree")

    def __init__(self, x: Family = None, a: Family = None, degree=None):
        self.x = x if x is not None and not x.is_zero() else None
        self.a = a if a is not None and not a.is_zero() else None
        degs = set()
        if self.x is not None:
            degs.add(self.x.degree - 1)
        if self.a is not None:
            degs.add(self.a.degree)
        if len(degs) > 1:
            raise MalformedInput("inhomogeneous pair element")
        self.degree = degs.pop() if degs else (0 if degree is None else degree)

    def __add__(self, other):
        return PairElement(_fadd(self.x, other.x), _fadd(self.a, other.a))

    def scaled(self, c):
        return PairElement(self.x.scaled(c) if self.x is not None else None,
                           self.a.scaled(c) if self.a is not None else None, self.degree)

    def is_zero(self):
        return self.x is None and self.a is None

    def __repr__(self):
        return f"PairElement(x={self.x!r}, a={self.a!r})"


def _fadd(f, g):
    if f is None:
        return g
    if g is None:
        return f
    s = f + g
    return s if not s.is_zero() else None


class PairAlgebra(BracketAlgebra):
    """``(L'[1] (+) h)_Delta`` with the brackets ``q_k^Delta``.

    ``q_1(x, a) = (-[Delta, x], P(x) + d_1 a)``, ``q_2(x, x') = (-1)^{deg x}[x, x']``,
    ``q_k(x, a_1..a_{k-1}) = P([..[x, a_1]..a_{k-1}])`` and ``q_k(a..) = d_k(a..)``.
    """

    def __init__(self, data: VData):
        self.data = data
        super().__init__(self._brackets, lambda e: e.degree, PairElement(), data.max_weight)

    def _nested(self, F, hs):
        W = self.data.max_weight
        for h in hs:
            F = rn_bracket(F, self.data.h(h), W)
        return F

    def _brackets(self, elems):
        d = self.data
        k = len(elems)
        x_out, a_out = None, None
        if k == 1:
            (e,) = elems
            if e.x is not None:
                x_out = rn_bracket(d.delta_ambient, e.x, d.max_weight).scaled(-1)
                a_out = _fadd(a_out, d.P(e.x))
            if e.a is not None:
                a_out = _fadd(a_out, derived_bracket(d, [e.a]))
            return PairElement(_nz(x_out), _nz(a_out))
        if k == 2 and elems[0].x is not None and elems[1].x is not None:
            x0 = elems[0].x
            b = rn_bracket(x0, elems[1].x, d.max_weight)
            x_out = b.scaled(-1) if x0.degree & 1 else b
        degs = [e.degree for e in elems]
        for j, e in enumerate(elems):
            if e.x is None:
                continue
            others = [f.a for i, f in enumerate(elems) if i != j]
            if any(o is None for o in others):
                continue
            odd = 0
            for i in range(j):
                odd ^= degs[i] & degs[j] & 1
            val = d.P(self._nested(e.x, others))
            a_out = _fadd(a_out, val.scaled(-1) if odd else val)
        hs = [e.a for e in elems]
        if all(h is not None for h in hs):
            a_out = _fadd(a_out, derived_bracket(d, hs))
        return PairElement(_nz(x_out), _nz(a_out))


def _nz(f):
    return f if f is not None and not f.is_zero() else None


def twisted_pair_structure(data: VData) -> PairAlgebra:
    """``(L'[1] (+) h)_Delta``; refuses unless Delta is Maurer-Cartan in ``L'``."""
    if rn_bracket(data.delta_ambient, data.delta_ambient, data.max_weight).terms:
        raise NotMaurerCartan("Delta is not a Maurer-Cartan element of L'")
    return PairAlgebra(data)


def pair_mc_check(data: VData, t: Family) -> dict:
    """``t`` in ``MC(h_Delta)`` versus ``(Delta, t)`` in ``MC(L'[1] (+) h)_Delta``."""
    alg = twisted_pair_structure(data)
    t = as_candidate(t, data.action)
    z = PairElement(data.delta_ambient, t)
    h = mc_check_h(data, t)
    pair = alg.is_maurer_cartan(z)
    return {"h": h.passed, "pair": pair, "zero_pair": alg.is_maurer_cartan(PairElement(None, t)),
            "agree": h.passed == pair}


def deformation_check(data: VData, t: Family, t2: Family) -> dict:
    """``T + T'`` is an O-operator iff ``(0, t')`` is MC after twisting by ``(Delta, t)``.

    ``details["literal"]`` also reports the reading with ``(Delta, t')``.
    """
    alg = twisted_pair_structure(data)
    t, t2 = as_candidate(t, data.action), as_candidate(t2, data.action)
    if not check_ooperator(t, data.action, data.max_weight):
        raise NotMaurerCartan("t is not an O-operator, so (Delta, t) cannot be used for twisting")
    twisted = alg.twist(PairElement(data.delta_ambient, t))
    total = t + t2
    if total.is_zero():
        total = Family.zero(data.V, data.E, 0)
    oop = bool(check_ooperator(total, data.action, data.max_weight))
    mc = twisted.is_maurer_cartan(PairElement(None, t2))
    literal = twisted.is_maurer_cartan(PairElement(data.delta_ambient, t2))
    return {"ooperator": oop, "twisted_mc": mc, "literal": literal, "agree": oop == mc}
