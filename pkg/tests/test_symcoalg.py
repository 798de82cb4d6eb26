import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import (
    apply_tensor_both,
    apply_tensor_left,
    apply_tensor_right,
    coderivation_oracle,
    coproduct_of,
    coproduct_oracle,
)
from linfkit.errors import MalformedInput, TruncationError
from linfkit.generators import random_family, random_graded_space
from linfkit.graded import GradedSpace
from linfkit.symcoalg import (
    ONE,
    Coderivation,
    Comorphism,
    Family,
    coderivation_apply,
    commutator,
    commutator_apply,
    comorphism_apply,
    coproduct,
    monomials_up_to,
    normalize_word,
    projection,
    rn_bracket,
)

EF = GradedSpace((("e", -1), ("f", -1)))


def test_normalize_examples():
    assert normalize_word(EF, ["f", "e"]) == {(0, 1): Fraction(-1)}
    assert normalize_word(EF, ["e", "e"]) == {}
    G = GradedSpace((("g", 2),))
    assert normalize_word(G, ["g", "g"]) == {(0, 0): Fraction(1)}


def test_normalize_empty_word():
    with pytest.raises(MalformedInput):
        normalize_word(EF, [])


def test_coproduct_examples():
    assert coproduct(EF, {(0,): ONE}) == {}
    assert coproduct(EF, {(0, 1): ONE}) == {((0,), (1,)): 1, ((1,), (0,)): -1}
    assert coproduct(EF, {(0, 1): ONE}, 2) == {}


def test_weight_cap_is_enforced():
    E = GradedSpace((("g", 0),))
    q = Family.zero(E, E, 1)
    with pytest.raises(TruncationError):
        coderivation_apply(q, {(0,) * 7: ONE})


def spaces(max_dim=3):
    return st.integers(0, 10**6).map(lambda s: random_graded_space(random.Random(s), random.Random(s).randint(1, max_dim)))


@given(spaces())
def test_coproduct_matches_unshuffle_oracle(E):
    for mono in monomials_up_to(E, 4, 2):
        assert coproduct(E, {mono: ONE}) == coproduct_oracle(E, mono)
        if len(mono) >= 3:
            assert coproduct(E, {mono: ONE}, 2) == coproduct_oracle(E, mono, 3)


@given(spaces())
def test_coassociative_and_cocommutative(E):
    for mono in monomials_up_to(E, 4, 2):
        d = coproduct(E, {mono: ONE})
        left = {}
        for (a, b), c in d.items():
            for (a1, a2), c2 in coproduct(E, {a: ONE}).items():
                left[(a1, a2, b)] = left.get((a1, a2, b), 0) + c * c2
        right = {}
        for (a, b), c in d.items():
            for (b1, b2), c2 in coproduct(E, {b: ONE}).items():
                right[(a, b1, b2)] = right.get((a, b1, b2), 0) + c * c2
        clean = lambda v: {k: x for k, x in v.items() if x}
        assert clean(left) == clean(right) == coproduct(E, {mono: ONE}, 2)
        for (a, b), c in d.items():
            s = -1 if (sum(E.degree(i) for i in a) * sum(E.degree(i) for i in b)) % 2 else 1
            assert d.get((b, a)) == s * c


@given(st.integers(0, 10**6))
def test_coderivation_matches_oracle_and_law(seed):
    rng = random.Random(seed)
    E = random_graded_space(rng, rng.randint(1, 3))
    q = random_family(rng, E, E, rng.randint(-1, 1), max_arity=3)
    Q = Coderivation(q)
    for mono in monomials_up_to(E, 4):
        x = {mono: ONE}
        Qx = Q(x)
        assert Qx == coderivation_oracle(q, mono)
        assert projection(E, Qx) == q.value(mono)
        lhs = coproduct_of(E, Qx)
        d = coproduct_of(E, x)
        rhs = apply_tensor_left(Q, d)
        for k, v in apply_tensor_right(E, Q, q.degree, d).items():
            rhs[k] = rhs.get(k, 0) + v
        assert lhs == {k: v for k, v in rhs.items() if v}


def test_coderivation_examples():
    E = GradedSpace((("e", -1), ("f", -1), ("h", -2)))
    q1 = Family.from_terms(E, E, 1, {"h": {"e": 1}})
    Q = Coderivation(q1)
    # Q(f.h) = q1(f).h + (-1)^{|f||h|} q1(h).f = e.f
    assert Q({(0, 1): ONE}) == {}
    assert Q({(1, 2): ONE}) == normalize_word(E, ["e", "f"])
    assert Q({(2,): ONE}) == {(0,): ONE}
    assert Coderivation(Family.zero(E, E, 1))({(0, 1, 2): ONE}) == {}


@given(st.integers(0, 10**6))
def test_comorphism_methods_and_law(seed):
    rng = random.Random(seed)
    E = random_graded_space(rng, rng.randint(1, 3))
    T = random_graded_space(rng, rng.randint(1, 3), prefix="y")
    f = random_family(rng, E, T, 0, max_arity=3)
    F = Comorphism(f)
    for mono in monomials_up_to(E, 4):
        x = {mono: ONE}
        Fx = F(x)
        assert Fx == comorphism_apply(f, x, method="definition")
        assert projection(T, Fx) == f.value(mono)
        assert coproduct_of(T, Fx) == apply_tensor_both(F, coproduct_of(E, x))


def test_comorphism_examples():
    E = GradedSpace((("e", -1), ("f", -1)))
    swap = Family.from_terms(E, E, 0, {"e": {"f": 1}, "f": {"e": 1}})
    F = Comorphism(swap)
    assert F({(0, 1): ONE}) == normalize_word(E, ["f", "e"])
    assert F({(0,): ONE}) == {(1,): ONE}
    assert Comorphism(Family.zero(E, E, 0))({(0, 1): ONE}) == {}


def test_comorphism_needs_degree_zero():
    E = GradedSpace((("e", -1),))
    with pytest.raises(MalformedInput):
        comorphism_apply(Family.zero(E, E, 1), {(0,): ONE})


@given(st.integers(0, 10**6))
def test_rn_bracket_is_the_commutator(seed):
    rng = random.Random(seed)
    E = random_graded_space(rng, rng.randint(1, 3))
    q = random_family(rng, E, E, rng.randint(-1, 1), max_arity=2)
    p = random_family(rng, E, E, rng.randint(-1, 1), max_arity=2)
    Q, P = Coderivation(q), Coderivation(p)
    br = commutator(Q, P, 3)
    for mono in monomials_up_to(E, 3):
        assert br({mono: ONE}) == commutator_apply(Q, P, {mono: ONE})


@given(st.integers(0, 10**6))
def test_rn_bracket_antisymmetry_and_jacobi(seed):
    rng = random.Random(seed)
    E = random_graded_space(rng, rng.randint(1, 3))
    f, g, h = (random_family(rng, E, E, rng.randint(-1, 1), max_arity=2) for _ in range(3))
    W = 3
    fg, gf = rn_bracket(f, g, W), rn_bracket(g, f, W)
    s = -1 if (f.degree * g.degree) % 2 else 1
    assert fg == gf.scaled(-s)
    lhs = rn_bracket(f, rn_bracket(g, h, W), W)
    rhs = rn_bracket(fg, h, W) + rn_bracket(g, rn_bracket(f, h, W), W).scaled(s)
    assert lhs == rhs


def test_odd_square_is_twice_the_composite():
    E = GradedSpace((("e", -1), ("f", -1), ("g", -1), ("h", -2)))
    q = Family.from_terms(E, E, 1, {"e f": {"g": 1}, "h": {"e": 1}, "f h": {"h": 1}})
    Q = Coderivation(q)
    QQ = commutator(Q, Q, 3)
    for mono in monomials_up_to(E, 3):
        x = {mono: ONE}
        assert QQ(x) == {k: 2 * v for k, v in Q(Q(x)).items()}
    zero = Coderivation(Family.zero(E, E, 0))
    assert commutator(Q, zero, 3).family.is_zero()
