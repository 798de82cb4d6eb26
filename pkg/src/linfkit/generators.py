"""Seeded random instances with known verdicts.

"Guaranteed" generators build objects that pass their checks by
construction (décalage of classical Lie algebras, semidirect products with
honest modules, gauge transforms of certified structures).  Perturbations
inject a single extra term and are re-drawn until the targeted check fails,
so the recorded defect is always a real one.
"""

import random
from fractions import Fraction

from .actions import Action, action_from_semidirect
from .config import caps
from .errors import NotInvertible
from .graded import GradedSpace, direct_sum
from .linfty import LieInftyStructure, SkewBrackets, check_jacobi, decalage
from .ooperators import invert_comorphism
from .symcoalg import (
    ONE,
    Family,
    add_into,
    basis_monomials,
    clean,
    coderivation_apply,
    comorphism_apply,
    mono_degree,
    monomials_up_to,
)


def rng_for(seed) -> random.Random:
    return random.Random(seed)


def _coeff(rng, lo=-2, hi=2, nonzero=True):
    while True:
        c = rng.randint(lo, hi)
        if c or not nonzero:
            return Fraction(c)


def random_graded_space(rng, dim=None, degrees=(-2, 2), prefix="x") -> GradedSpace:
    dim = rng.randint(1, 4) if dim is None else dim
    return GradedSpace(tuple((f"{prefix}{i}", rng.randint(*degrees)) for i in range(dim)))


def random_family(rng, source, target, degree, max_arity=3, density=0.5, min_arity=1) -> Family:
    """Sparse degree-consistent family with small integer coefficients."""
    terms = {}
    tdeg = target.degrees
    for mono in monomials_up_to(source, max_arity, min_arity):
        want = mono_degree(source, mono) + degree
        outs = [o for o in range(target.dim) if tdeg[o] == want]
        if not outs or rng.random() > density:
            continue
        val = {}
        for o in outs:
            if rng.random() < 0.6:
                val[(o,)] = _coeff(rng)
        if val:
            terms[mono] = val
    return Family(source, target, degree, terms)


def random_term(rng, source, target, degree, max_arity=3, min_arity=1, avoid=None):
    """One ``(monomial, output)`` pair of the right degree, or None."""
    tdeg = target.degrees
    cands = []
    for mono in monomials_up_to(source, max_arity, min_arity):
        if avoid is not None and avoid(mono):
            continue
        want = mono_degree(source, mono) + degree
        cands.extend((mono, o) for o in range(target.dim) if tdeg[o] == want)
    return rng.choice(cands) if cands else None


# -- Lie algebras and Lie infinity structures ------------------------------------------


def _invertible_int_matrix(rng, n):
    import sympy

    while True:
        M = sympy.Matrix(n, n, lambda i, j: rng.randint(-2, 2))
        if M.det() != 0:
            return M


def random_classical_lie(rng, dim=None) -> SkewBrackets:
    """A non-abelian Lie algebra in degree 0: 2-dim or ``k ⋉_A k^2`` in a random basis.

    Every skew bracket on a 2-dim space satisfies Jacobi; in dim 3 the
    semidirect form makes Jacobi hold because ``k^2`` is an abelian ideal.
    """
    import sympy

    dim = rng.choice([2, 3]) if dim is None else dim
    space = GradedSpace(tuple((f"g{i}", 0) for i in range(dim)))
    if dim == 2:
        a, b = Fraction(0), Fraction(0)
        while not (a or b):
            a, b = _coeff(rng, nonzero=False), _coeff(rng, nonzero=False)
        return SkewBrackets(space, {(0, 1): clean({(0,): a, (1,): b})})
    if dim != 3:
        raise ValueError("random_classical_lie supports dim 2 or 3")
    A = sympy.zeros(2, 2)
    while A.is_zero_matrix:
        A = sympy.Matrix(2, 2, lambda i, j: rng.randint(-2, 2))
    # structure constants c[i][j] = [b_i, b_j] in the basis b_0, b_1, b_2
    c = {}
    for j in (1, 2):
        c[(0, j)] = [0, A[0, j - 1], A[1, j - 1]]
    P = _invertible_int_matrix(rng, 3)
    Pi = P.inv()

    def bracket_std(u, w):
        out = sympy.zeros(3, 1)
        for i in range(3):
            for j in range(3):
                if i == j or u[i] == 0 or w[j] == 0:
                    continue
                key, s = ((i, j), 1) if i < j else ((j, i), -1)
                if key in c:
                    out += s * u[i] * w[j] * sympy.Matrix(c[key])
        return out

    terms = {}
    for i in range(3):
        for j in range(i + 1, 3):
            val = Pi * bracket_std(P[:, i], P[:, j])
            vec = {(k,): Fraction(int(sympy.fraction(val[k])[0]), int(sympy.fraction(val[k])[1]))
                   for k in range(3) if val[k] != 0}
            if vec:
                terms[(i, j)] = vec
    return SkewBrackets(space, terms)


def random_non_lie(rng, dim=3) -> SkewBrackets:
    """Random skew brackets on degree-0 space that violate Jacobi."""
    from .linfty import check_skew_jacobi

    space = GradedSpace(tuple((f"g{i}", 0) for i in range(dim)))
    while True:
        terms = {}
        for i in range(dim):
            for j in range(i + 1, dim):
                vec = {(k,): _coeff(rng, nonzero=False) for k in range(dim)}
                vec = clean(vec)
                if vec:
                    terms[(i, j)] = vec
        sk = SkewBrackets(space, terms)
        if not check_skew_jacobi(sk):
            return sk


def random_complex(rng, dim=None, degrees=(-2, 1), prefix="c") -> tuple:
    """``(V, d)`` with ``d^2 = 0``: pairs ``u -> w`` in consecutive degrees, in a random basis."""
    dim = rng.randint(2, 3) if dim is None else dim
    degs = sorted(rng.randint(*degrees) for _ in range(dim))
    V = GradedSpace(tuple((f"{prefix}{i}", d) for i, d in enumerate(degs)))
    terms = {}
    used = set()
    for i in range(dim):
        for j in range(dim):
            if degs[j] == degs[i] + 1 and i not in used and j not in used and rng.random() < 0.7:
                terms[(i,)] = {(j,): _coeff(rng)}
                used |= {i, j}
    return V, Family(V, V, 1, terms)


def gauge_transform(structure: LieInftyStructure, f: Family, max_weight=None) -> LieInftyStructure:
    """``F M F^{-1}`` for an invertible comorphism generated by a degree-0 family f.

    The result is known up to ``max_weight`` and squares to zero there.
    """
    W = caps().max_weight if max_weight is None else max_weight
    g = invert_comorphism(f, W)
    l = structure.brackets
    E = structure.space

    def fn(mono):
        return f(coderivation_apply(l, comorphism_apply(g, {mono: ONE})))

    return LieInftyStructure(E, Family.from_function(E, E, 1, fn, W))


def random_linfty(rng, max_weight=4) -> LieInftyStructure:
    """A certified structure with brackets beyond arity 2.

    Starts from a décalage of a classical Lie algebra plus a complex, then
    applies a random gauge transform ``f = id + f_2``.
    """
    while True:
        g = decalage(random_classical_lie(rng))
        V, d = random_complex(rng, 2, degrees=(-2, 0))
        S = GradedSpace(g.space.basis + V.basis)
        n = g.space.dim
        terms = dict(g.brackets.terms)
        for (i,), v in d.terms.items():
            terms[(i + n,)] = {(o + n,): c for (o,), c in v.items()}
        base = Family(S, S, 1, terms)
        if random_term(rng, S, S, 0, max_arity=2, min_arity=2) is not None:
            break
    lin = {(i,): {(i,): ONE} for i in range(S.dim)}
    f2 = Family.zero(S, S, 0)
    while f2.is_zero():
        f2 = random_family(rng, S, S, 0, max_arity=2, density=0.3, min_arity=2)
    f = Family(S, S, 0, lin) + f2
    return gauge_transform(LieInftyStructure(S, base), f, max_weight)


def perturb_structure(rng, structure: LieInftyStructure, n_max=3, tries=200):
    """Add one random degree +1 term until Jacobi fails; returns ``(structure, defect)``."""
    E = structure.space
    for _ in range(tries):
        pick = random_term(rng, E, E, 1, max_arity=min(3, n_max))
        if pick is None:
            break
        mono, o = pick
        c = _coeff(rng)
        fam = structure.brackets + Family(E, E, 1, {mono: {(o,): c}})
        cand = LieInftyStructure(E, fam if not fam.is_zero() else Family.zero(E, E, 1))
        if not check_jacobi(cand, n_max):
            return cand, {"input": mono, "output": o, "coefficient": c}
    raise ValueError("no Jacobi-breaking perturbation found")


# -- modules and actions -------------------------------------------------------------------


def module_shape(rng, dim=None, degree_choices=(0,)) -> tuple:
    """Degrees, eigenvalues of ``rho(f)`` and a blockwise change of basis for a module."""
    import sympy

    dim = rng.randint(1, 3) if dim is None else dim
    degs = sorted(rng.choice(degree_choices) for _ in range(dim))
    a = [rng.randint(0, 2) for _ in range(dim)]
    P = sympy.eye(dim)
    for d in set(degs):
        idx = [i for i in range(dim) if degs[i] == d]
        B = _invertible_int_matrix(rng, len(idx))
        for r, i in enumerate(idx):
            for s, j in enumerate(idx):
                P[i, j] = B[r, s]
    return degs, a, P


def random_module_2d(rng, dim=None, degree_choices=(0,), shape=None) -> tuple:
    """Module of ``[e, f] = e``: ``rho(f) = diag(a)``, ``rho(e)`` raising ``a`` by one.

    ``[rho(e), rho(f)] = rho(e)`` forces ``N_ij != 0`` only when ``a_j - a_i = 1``.
    Each degree block is its own module.  Returns ``(lie, V0, rho_e, rho_f)``
    as matrices ``{(i, j): c}``.  Passing the same ``shape`` twice gives two
    modules on one space that differ only in ``rho(e)``.
    """
    import sympy

    degs, a, P = module_shape(rng, dim, degree_choices) if shape is None else shape
    dim = len(degs)
    N = {}
    for i in range(dim):
        for j in range(dim):
            if degs[i] == degs[j] and a[j] - a[i] == 1 and rng.random() < 0.8:
                N[(i, j)] = _coeff(rng)
    A = {(i, i): Fraction(a[i]) for i in range(dim) if a[i]}
    Pi = P.inv()

    def conj(M):
        X = sympy.zeros(dim, dim)
        for (i, j), c in M.items():
            X[i, j] = sympy.Rational(c.numerator, c.denominator)
        Y = Pi * X * P
        return {(i, j): Fraction(str(Y[i, j])) for i in range(dim) for j in range(dim) if Y[i, j] != 0}

    lie = SkewBrackets(GradedSpace((("e", 0), ("f", 0))), {(0, 1): {(0,): ONE}})
    V0 = GradedSpace(tuple((f"v{i}", d) for i, d in enumerate(degs)))
    return lie, V0, conj(N), conj(A)


def module_semidirect(lie: SkewBrackets, V0: GradedSpace, rho: dict) -> SkewBrackets:
    """``g ⋉ V0`` as skew brackets: ``[x, v] = rho(x) v``, ``[v, w] = 0``."""
    g = lie.space
    S = GradedSpace(g.basis + V0.basis)
    terms = {m: dict(v) for m, v in lie.terms.items()}
    n = g.dim
    for x, mat in rho.items():
        for (i, j), c in mat.items():
            add_into(terms.setdefault((x, n + j), {}), {(n + i,): c})
    return SkewBrackets(S, terms)


def random_module_action(rng, dim=None, shape=None):
    """Action of Fixture-A-type algebra on a shifted module, via décalage of ``g ⋉ V0``."""
    lie, V0, Ne, Af = random_module_2d(rng, dim, (0, 0, 1), shape)
    sd = decalage(module_semidirect(lie, V0, {0: Ne, 1: Af}))
    gdim = lie.space.dim
    E = GradedSpace(sd.space.basis[:gdim])
    V = GradedSpace(sd.space.basis[gdim:])
    lE = Family(E, E, 1, {m: v for m, v in sd.brackets.terms.items() if max(m) < gdim})
    lV = LieInftyStructure.abelian(V)
    return action_from_semidirect(LieInftyStructure(E, lE), lV, sd)


def perturb_action(rng, action: Action, n_max=3, tries=200):
    """Add one mixed term to Phi until the semidirect structure stops squaring to zero."""
    from .actions import check_action, split_mono

    S = action.S
    for _ in range(tries):
        pick = random_term(rng, S, S, 1, max_arity=min(3, n_max),
                           avoid=lambda m: not all(split_mono(S, m)))
        if pick is None:
            break
        mono, o = pick
        if S.is_left(o):
            continue
        phi = action.phi + Family(S, S, 1, {mono: {(o,): _coeff(rng)}})
        cand = Action(action.E_structure, action.V_structure,
                      phi if not phi.is_zero() else Family.zero(S, S, 1))
        if not check_action(cand, n_max):
            return cand, {"input": mono, "output": o}
    raise ValueError("no defect found")


def random_candidate(rng, action: Action, max_arity=2, density=0.4, tries=20) -> Family:
    """Random degree-zero ``t: S(V) -> E``, nonzero whenever some term has the right degree."""
    for _ in range(tries):
        t = random_family(rng, action.V, action.E, 0, max_arity=max_arity, density=density)
        if not t.is_zero():
            return t
    return t


# -- coadjoint candidates -------------------------------------------------------------


def random_functional(rng, structure, max_weight, min_weight=2, density=0.5) -> dict:
    """Random degree-zero functional on E-monomials of weight in the given range."""
    E = structure.space
    out = {}
    for m in monomials_up_to(E, max_weight, min_weight):
        if mono_degree(E, m) == 0 and rng.random() < density:
            out[m] = _coeff(rng)
    return out


def coadjoint_candidate(rng, structure, action, closed=None, max_weight=4, tries=50):
    """Symmetric invertible T for the coadjoint action, from a functional omega.

    ``closed=True`` draws omega from the closed functionals, ``False`` adds a
    non-closed perturbation, ``None`` picks at random.  Returns ``(t, omega)``;
    raises ``NotInvertible`` if no nondegenerate omega is found.
    """
    from .linfty import cocycle_space
    from .ooperators import inverse_from_omega

    if closed is None:
        closed = rng.random() < 0.5
    basis = cocycle_space(structure, 0, 2, max_weight + 1)
    for _ in range(tries):
        omega = {}
        for b in basis:
            add_into(omega, b, _coeff(rng, nonzero=False))
        if not closed:
            add_into(omega, random_functional(rng, structure, max_weight + 1, density=0.3), ONE)
        omega = clean(omega)
        s = inverse_from_omega(structure.space, action.V, omega, max_weight + 1)
        try:
            t = invert_comorphism(s, max_weight)
        except NotInvertible:
            continue
        return t, omega
    raise NotInvertible("no nondegenerate functional found")


# -- structure files ------------------------------------------------------------------------

KINDS = ("graded-space", "family", "lie2-algebra", "linfty", "representation-from-module",
         "perturbation", "action-perturbation", "ooperator-candidate", "coadjoint")


def _caps_check(dim, max_arity):
    from .errors import TruncationError

    if dim is not None and not 1 <= dim <= 6:
        raise TruncationError(f"dimension {dim} outside 1..6")
    if max_arity is not None and max_arity > caps().max_arity:
        raise TruncationError(f"arity {max_arity} above cap {caps().max_arity}")


def random_instance(kind, seed, dim=None, max_arity=None, max_weight=4):
    """A :class:`~linfkit.io.StructureFile` of the requested kind, deterministic per seed.

    ``meta`` records the generator call and, for perturbations, the injected
    defect together with the check it is meant to break.
    """
    from .actions import adjoint_action
    from .fixtures import coadjoint_action, fixture_A, fixture_B, fixture_BB
    from .io import StructureFile
    from .symcoalg import mono_str

    _caps_check(dim, max_arity)
    rng = rng_for(f"{kind}:{seed}")
    m = StructureFile()
    m.meta = {"generator": {"kind": kind, "seed": seed}}
    if dim is not None:
        m.meta["generator"]["dim"] = dim

    if kind == "graded-space":
        m.add_space("E", random_graded_space(rng, dim, (-3, 3), "x"))
    elif kind == "family":
        E = random_graded_space(rng, dim, (-2, 2), "x")
        m.add_space("E", E)
        deg = rng.randint(-1, 1)
        m.add_family("f", random_family(rng, E, E, deg, max_arity or 3))
    elif kind == "lie2-algebra":
        st = decalage(random_classical_lie(rng, dim))
        m.put_structure("L", st, "E")
        m.meta["expect"] = {"check-jacobi": "pass"}
    elif kind == "linfty":
        st = random_linfty(rng, max_weight)
        m.put_structure("L", st, "E")
        m.meta["expect"] = {"check-jacobi": "pass"}
        m.meta["certified_max_weight"] = max_weight
    elif kind == "representation-from-module":
        act = random_module_action(rng, dim)
        m.put_structure("g", act.E_structure, "E")
        m.put_structure("V", act.V_structure, "V")
        m.put_action("rho", act, "g", "V", "E+V")
        m.meta["expect"] = {"check-representation": "pass", "check-action": "pass"}
    elif kind == "perturbation":
        if dim is None:
            base = adjoint_action(fixture_A())
            m.meta["generator"]["base"] = "A"
        else:
            base = random_module_action(rng, dim)
        act, defect = perturb_action(rng, base, 3)
        m.put_structure("g", act.E_structure, "E")
        m.put_structure("V", act.V_structure, "V")
        m.put_action("rho", act, "g", "V", "E+V")
        m.meta["defect"] = {"check": "check-action", "input": mono_str(act.S, defect["input"]),
                            "output": act.S.name(defect["output"])}
        m.meta["expect"] = {"check-action": "fail"}
    elif kind == "action-perturbation":
        return random_instance("perturbation", seed, dim, max_arity, max_weight)
    elif kind == "jacobi-perturbation":
        st, defect = perturb_structure(rng, random_linfty(rng, max_weight), 3)
        m.put_structure("L", st, "E")
        m.meta["defect"] = {"check": "check-jacobi", "input": mono_str(st.space, defect["input"]),
                            "output": st.space.name(defect["output"]),
                            "coefficient": str(defect["coefficient"])}
        m.meta["expect"] = {"check-jacobi": "fail"}
    elif kind == "ooperator-candidate":
        base = rng.choice(["A", "B", "module"])
        if base == "module":
            act = random_module_action(rng, dim)
        else:
            act = adjoint_action(fixture_A() if base == "A" else fixture_B())
        m.put_structure("g", act.E_structure, "E")
        m.put_structure("V", act.V_structure, "V")
        m.put_action("act", act, "g", "V", "E+V")
        m.put_candidate("t", random_candidate(rng, act, max_arity or 2), action="act")
        m.meta["generator"]["base"] = base
    elif kind == "coadjoint":
        st = rng.choice([fixture_B, fixture_BB])()
        co = coadjoint_action(st)
        m.put_structure("g", st, "E")
        m.put_structure("g*", co.V_structure, "E*")
        m.put_action("coad", co, "g", "g*", "E+E*")
        t, _ = coadjoint_candidate(rng, st, co, max_weight=max_weight)
        m.put_candidate("t", t, action="coad")
    else:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS + ('jacobi-perturbation',))}")
    return m


# -- elements of L' -------------------------------------------------------------------------


def module_action_pair(rng, dim=None):
    """Two actions of one algebra on one module space, differing in ``rho(e)``."""
    shape = module_shape(rng, dim, (0, 0, 1))
    return random_module_action(rng, shape=shape), random_module_action(rng, shape=shape)


def lprime_of(action):
    from .voronov import LPrimeElement

    return LPrimeElement.from_structures(action.E_structure, action)


def random_lprime_term(rng, a, part=None):
    """A degree +1 element of L' with one random term in ``m`` or in ``rho``."""
    from .actions import split_mono
    from .voronov import LPrimeElement

    part = part or rng.choice(["m", "rho", "rho0"])
    E, V, S = a.E, a.V, a.S
    for _ in range(200):
        if part == "m":
            pick = random_term(rng, E, E, 1, max_arity=3)
            if pick is None:
                part = "rho"
                continue
            mono, o = pick
            return LPrimeElement(E, V, Family(E, E, 1, {mono: {(o,): _coeff(rng)}}), None, 1)
        want_x = part == "rho"
        pick = random_term(rng, S, S, 1, max_arity=3,
                           avoid=lambda m: not split_mono(S, m)[1] or bool(split_mono(S, m)[0]) != want_x)
        if pick is None or S.is_left(pick[1]):
            if pick is None:
                part = "rho0" if part == "rho" else "m"
            continue
        mono, o = pick
        return LPrimeElement(E, V, None, Family(S, S, 1, {mono: {(o,): _coeff(rng)}}), 1)
    raise ValueError("no degree +1 term available")
