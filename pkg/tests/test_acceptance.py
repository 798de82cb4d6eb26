"""Acceptance criteria 1 to 10.

Each test prints one line ``criterion N: PASS|FAIL (elapsed / limit) ...``;
the lines are collected again in the terminal summary.  A criterion passes
only if every property holds exactly and the time limit is met.
"""

import contextlib
import io
import json
import os
import random
import time
from fractions import Fraction

import pytest

from helpers import apply_tensor_left, apply_tensor_right, coderivation_oracle, coproduct_of
from linfkit.actions import adjoint_action, check_action, check_linfty_morphism
from linfkit.cli import main
from linfkit.fixtures import all_fixtures, coadjoint_action, fixture_A, fixture_B, fixture_BB, fixture_files, negid_candidate
from linfkit.generators import (
    coadjoint_candidate,
    lprime_of,
    module_action_pair,
    module_shape,
    perturb_action,
    perturb_structure,
    random_candidate,
    random_classical_lie,
    random_family,
    random_graded_space,
    random_instance,
    random_linfty,
    random_lprime_term,
    random_module_action,
    random_non_lie,
    rng_for,
)
from linfkit.io import save
from linfkit.linfty import check_jacobi, cohomology_differential, decalage, is_cocycle, undecalage
from linfkit.ooperators import (
    check_inverse,
    check_ooperator,
    coadjoint_cocycle_check,
    induced_bracket_formula,
    induced_structure,
    invert_comorphism,
    omega_cochain,
)
from linfkit.symcoalg import ONE, Coderivation, coproduct, monomials_up_to, projection
from linfkit.voronov import VData, deformation_check, derived_bracket, mc_check_h, mc_check_lprime, twisting_consistency

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


class Criterion:
    def __init__(self, number, limit, record):
        self.number, self.limit, self.record = number, limit, record
        self.failures = []
        self.counts = {}

    def check(self, ok, what):
        if not ok and len(self.failures) < 5:
            self.failures.append(what)
        return ok

    def count(self, key, n=1):
        self.counts[key] = self.counts.get(key, 0) + n

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        ok = not self.failures and elapsed < self.limit
        summary = ", ".join(f"{k}={v}" for k, v in self.counts.items())
        line = f"criterion {self.number}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s / {self.limit}s) {summary}"
        if self.failures:
            line += " | " + "; ".join(self.failures)
        self.record(line)
        self.ok = ok
        return False


def _finish(c):
    assert c.ok, c.failures or "time limit exceeded"


# -- 1: coalgebra laws --------------------------------------------------------------------------------


def test_criterion_1_coalgebra_laws(record_criterion):
    with Criterion(1, 10, record_criterion) as c:
        for seed in range(50):
            rng = rng_for(f"acc1:{seed}")
            E = random_graded_space(rng, rng.randint(1, 4), (-3, 3))
            c.count("spaces")
            for mono in monomials_up_to(E, 5, 2):
                c.count("monomials")
                d = coproduct(E, {mono: ONE})
                left, right = {}, {}
                for (a, b), x in d.items():
                    for (a1, a2), y in coproduct(E, {a: ONE}).items():
                        left[(a1, a2, b)] = left.get((a1, a2, b), 0) + x * y
                    for (b1, b2), y in coproduct(E, {b: ONE}).items():
                        right[(a, b1, b2)] = right.get((a, b1, b2), 0) + x * y
                left = {k: v for k, v in left.items() if v}
                right = {k: v for k, v in right.items() if v}
                c.check(left == right, f"coassociativity on {mono}")
                for (a, b), x in d.items():
                    s = -1 if (sum(E.degree(i) for i in a) * sum(E.degree(i) for i in b)) & 1 else 1
                    c.check(d.get((b, a)) == s * x, f"cocommutativity on {mono}")
    _finish(c)


# -- 2: coderivation correspondence -----------------------------------------------------------------


def test_criterion_2_coderivations(record_criterion):
    with Criterion(2, 10, record_criterion) as c:
        for seed in range(50):
            rng = rng_for(f"acc2:{seed}")
            E = random_graded_space(rng, rng.randint(1, 3), (-3, 3))
            q = random_family(rng, E, E, rng.randint(-1, 1), max_arity=3)
            Q = Coderivation(q)
            c.count("families")
            for mono in monomials_up_to(E, 4):
                x = {mono: ONE}
                Qx = Q(x)
                c.check(projection(E, Qx) == q.value(mono), f"p∘Q on {mono}")
                c.check(Qx == coderivation_oracle(q, mono), f"two constructions on {mono}")
                rhs = apply_tensor_left(Q, coproduct_of(E, x))
                for k, v in apply_tensor_right(E, Q, q.degree, coproduct_of(E, x)).items():
                    rhs[k] = rhs.get(k, 0) + v
                c.check(coproduct_of(E, Qx) == {k: v for k, v in rhs.items() if v}, f"co-Leibniz on {mono}")
    _finish(c)


# -- 3: two-path Jacobi --------------------------------------------------------------------------------


def test_criterion_3_two_path_jacobi(record_criterion):
    with Criterion(3, 20, record_criterion) as c:
        for seed in range(50):
            rng = rng_for(f"acc3:{seed}")
            L = random_linfty(rng, 4)
            a, b = check_jacobi(L, 4), check_jacobi(L, 4, method="square")
            c.check(bool(a) and bool(b), f"certified seed {seed}")
            c.count("certified")
            P, _ = perturb_structure(rng, L, 3)
            a, b = check_jacobi(P, 3), check_jacobi(P, 3, method="square")
            c.check(not a and not b, f"perturbed seed {seed} passed")
            c.check(a.details.get("weight") == b.details.get("weight"), f"minimal weight seed {seed}")
            c.count("perturbed")
    _finish(c)


# -- 4: décalage --------------------------------------------------------------------------------------


def classical_jacobi(skew):
    n = skew.space.dim
    for x in range(n):
        for y in range(n):
            for z in range(n):
                total = {}
                for a, b, cc in ((x, y, z), (y, z, x), (z, x, y)):
                    for (k,), v in skew.value((a, b)).items():
                        for o, w in skew.value((k, cc)).items():
                            total[o] = total.get(o, 0) + v * w
                if any(total.values()):
                    return False
    return True


def test_criterion_4_decalage(record_criterion):
    with Criterion(4, 5, record_criterion) as c:
        for seed in range(20):
            rng = rng_for(f"acc4:{seed}")
            skew = random_classical_lie(rng) if seed % 2 == 0 else random_non_lie(rng, 3)
            classical = classical_jacobi(skew)
            s = decalage(skew)
            c.check(classical == bool(check_jacobi(s, 3)) == bool(check_jacobi(s, 3, method="square")),
                    f"seed {seed}")
            c.check(classical == (seed % 2 == 0), f"generator seed {seed}")
            c.check(undecalage(s) == skew, f"roundtrip seed {seed}")
            c.count("lie" if classical else "non-lie")
    _finish(c)


# -- 5: action iff semidirect -------------------------------------------------------------------------


def test_criterion_5_actions(record_criterion):
    with Criterion(5, 20, record_criterion) as c:
        for name, s in all_fixtures().items():
            act = adjoint_action(s)
            c.check(check_action(act, 4) and check_action(act, 4, method="morphism"), f"adjoint {name}")
            c.count("fixtures")
        for seed in range(20):
            act = random_module_action(rng_for(f"acc5:{seed}"))
            c.check(check_action(act, 4) and check_action(act, 4, method="morphism"), f"module {seed}")
            c.count("modules")
        for seed in range(20):
            rng = rng_for(f"acc5-defect:{seed}")
            base = random_module_action(rng) if seed % 2 else adjoint_action(fixture_A())
            bad, _ = perturb_action(rng, base, 3)
            c.check(not check_action(bad, 3) and not check_action(bad, 3, method="morphism"), f"defect {seed}")
            c.count("defects")
    _finish(c)


# -- 6: O-operators iff MC in h ----------------------------------------------------------------------


def test_criterion_6_ooperators_are_mc(record_criterion):
    with Criterion(6, 30, record_criterion) as c:
        for name, s in all_fixtures().items():
            data = VData(adjoint_action(s), 3)
            for scale in (-1, 1):
                t = negid_candidate(s, scale)
                oop = check_ooperator(t, data.action, 3)
                mc = mc_check_h(data, t)
                c.check(bool(oop) == mc.passed, f"{name} scale {scale}")
                c.check(bool(oop) == (scale == -1), f"{name} rota-baxter scale {scale}")
                c.count("fixture candidates")
        actions = [adjoint_action(fixture_A()), adjoint_action(fixture_B())]
        for i in range(3):
            rng = rng_for(f"acc6-module:{i}")
            # two module letters in degree -1, so strict candidates are 2x2 matrices
            actions.append(random_module_action(rng, shape=module_shape(rng, 2, (0,))))
        for seed in range(100):
            rng = rng_for(f"acc6:{seed}")
            data = VData(actions[seed % len(actions)], 3)
            t = random_candidate(rng, data.action, 2)
            oop = check_ooperator(t, data.action, 3)
            mc = mc_check_h(data, t)
            c.check(bool(oop) == mc.passed, f"candidate {seed}")
            c.count("passing" if oop else "failing")
            if seed % 5 == 0:
                for k in (1, 2, 3):
                    c.check(derived_bracket(data, [t] * k, "fast") == derived_bracket(data, [t] * k),
                            f"derived d_{k} seed {seed}")
                c.count("derived comparisons", 3)
    _finish(c)


# -- 7: induced structure ------------------------------------------------------------------------------


def test_criterion_7_induced_structure(record_criterion):
    with Criterion(7, 10, record_criterion) as c:
        passing = []
        for name, s in all_fixtures().items():
            passing.append((name, negid_candidate(s), adjoint_action(s)))
        BB = fixture_BB()
        co = coadjoint_action(BB)
        for seed in range(3):
            t, _ = coadjoint_candidate(rng_for(f"acc7:{seed}"), BB, co, closed=True, max_weight=4)
            passing.append((f"coadjoint {seed}", t, co))
        for seed in range(30):
            rng = rng_for(f"acc7-random:{seed}")
            act = random_module_action(rng, shape=module_shape(rng, 2, (0,))) if seed % 2 else adjoint_action(fixture_A())
            t = random_candidate(rng, act, 2)
            if check_ooperator(t, act, 3):
                passing.append((f"random {seed}", t, act))
        for name, t, act in passing:
            if not check_ooperator(t, act, 3):
                c.check(False, f"{name} is not an O-operator")
                continue
            induced, jac, mor = induced_structure(t, act, 3)
            c.check(bool(jac) and bool(check_jacobi(induced, 3, method="square")), f"{name} square zero")
            c.check(bool(mor) and bool(check_linfty_morphism(t, induced, act.E_structure, 3, method="unshuffle")),
                    f"{name} morphism")
            for mono in monomials_up_to(act.V, 2):
                c.check(induced_bracket_formula(t, act, mono) == induced.brackets.value(mono), f"{name} formula")
            c.count("certified")
    _finish(c)


# -- 8: coadjoint cocycles -----------------------------------------------------------------------------


def test_criterion_8_coadjoint(record_criterion):
    with Criterion(8, 20, record_criterion) as c:
        for seed in range(20):
            fx = fixture_B() if seed % 4 == 0 else fixture_BB()
            co = coadjoint_action(fx)
            rng = rng_for(f"acc8:{seed}")
            t, _ = coadjoint_candidate(rng, fx, co, closed=seed % 2 == 0, max_weight=4)
            s = invert_comorphism(t, 4)
            c.check(check_inverse(t, s, 4), f"inverse seed {seed}")
            res = coadjoint_cocycle_check(t, co, 3)
            omega = omega_cochain(res["inverse_family"], 4)
            cocycle = is_cocycle(fx, omega, 4)
            c.check(bool(cocycle) == bool(res["cocycle"]), f"cocycle routes seed {seed}")
            d = cohomology_differential(fx, 4)
            c.check(d(omega) == d(omega, method="derivation"), f"d_* routes seed {seed}")
            c.check(bool(res["ooperator"]) == bool(cocycle), f"equivalence seed {seed}")
            c.count("closed" if cocycle else "open")
    _finish(c)


# -- 9: L' Maurer-Cartan elements -------------------------------------------------------------------


def test_criterion_9_lprime(record_criterion):
    with Criterion(9, 30, record_criterion) as c:
        for seed in range(50):
            rng = rng_for(f"acc9:{seed}")
            act = random_module_action(rng) if seed % 3 else adjoint_action(rng.choice(list(all_fixtures().values())))
            a = lprime_of(act)
            v = mc_check_lprime(a, 3)
            c.check(v.passed and v.details["generic"], f"assembled {seed}")
            c.count("assembled")
            if seed % 2:
                bad, _ = perturb_action(rng, act, 3)
                b = lprime_of(bad)
            else:
                b = a + random_lprime_term(rng, a)
            v = mc_check_lprime(b, 3)
            c.check(v.passed == v.details["generic"], f"perturbed {seed}")
            c.count("perturbed mc" if v.passed else "perturbed non-mc")
        for seed in range(20):
            rng = rng_for(f"acc9-twist:{seed}")
            act1, act2 = module_action_pair(rng)
            a1 = lprime_of(act1)
            a2 = lprime_of(act2) + a1.scaled(-1) if seed % 2 else random_lprime_term(rng, a1)
            res = twisting_consistency(a1, a2, 3)
            c.check(res["agree"], f"twisting {seed}")
            c.count("twistings")
        data = VData(adjoint_action(fixture_A()), 3)
        t = negid_candidate(fixture_A())
        res = deformation_check(data, t, t.scaled(-1))
        c.check(res["agree"] and res["ooperator"] and res["twisted_mc"], "deformation t' = -t")
    _finish(c)


# -- 10: command line ---------------------------------------------------------------------------------

CHECKS_FOR = {
    "lie2-algebra": ["check-jacobi"],
    "linfty": ["check-jacobi"],
    "jacobi-perturbation": ["check-jacobi"],
    "representation-from-module": ["check-representation", "check-action", "mc-lprime"],
    "perturbation": ["check-action", "mc-lprime"],
    "ooperator-candidate": ["check-ooperator", "derived-brackets"],
    "coadjoint": ["coadjoint-cocycle"],
}

FIXTURE_CHECKS = [
    ("corrupted.json", "check-jacobi", ()),
    ("fixtureA.json", "check-jacobi", ()),
    ("fixtureA.json", "check-action", ()),
    ("fixtureA.json", "check-representation", ("--action", "adrep")),
    ("fixtureA.json", "check-rota-baxter", ("--candidate", "negid")),
    ("fixtureA.json", "check-rota-baxter", ("--candidate", "id")),
    ("fixtureA.json", "check-ooperator", ("--candidate", "id")),
    ("fixtureA.json", "check-morphism", ("--candidate", "negid_morphism")),
    ("fixtureA.json", "induced-structure", ("--candidate", "negid")),
    ("fixtureA.json", "derived-brackets", ("--candidate", "negid", "--max-weight", "3")),
    ("fixtureA.json", "mc-h", ("--candidate", "id")),
    ("fixtureA.json", "mc-lprime", ("--max-weight", "3")),
    ("fixtureA.json", "deform-check", ("--candidate", "negid", "--candidate2", "id", "--max-weight", "3")),
    ("fixtureB.json", "check-jacobi", ()),
    ("fixtureBB.json", "coadjoint-cocycle", ("--candidate", "closed", "--max-weight", "3")),
    ("fixtureBB.json", "coadjoint-cocycle", ("--candidate", "open", "--max-weight", "3")),
    ("fixtureSL2.json", "check-action", ("--max-weight", "3")),
    ("fixtureString.json", "check-jacobi", ("--max-weight", "3")),
    ("fixtureDGLA.json", "check-action", ("--max-weight", "3")),
    ("fixtureDGLA.json", "twist", ("--candidate", "z", "--max-weight", "3")),
]


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, out.getvalue()


def test_criterion_10_cli(record_criterion, tmp_path):
    with Criterion(10, 60, record_criterion) as c:
        for name, check, extra in FIXTURE_CHECKS:
            path = os.path.join(ROOT, "fixtures", name)
            first = _cli(check, path, "--format", "json", *extra)
            c.check(first == _cli(check, path, "--format", "json", *extra), f"determinism {check} {name}")
            c.check(first[0] in (0, 1), f"{check} {name} exit {first[0]}")
            c.check(_cli("oracle", check, path, *extra)[0] == 0, f"oracle {check} {name}")
            c.count("fixture runs")
        kinds = sorted(CHECKS_FOR)
        for seed in range(100):
            kind = kinds[seed % len(kinds)]
            path = tmp_path / f"{kind}-{seed}.json"
            code, text = _cli("random", "--kind", kind, "--seed", seed)
            c.check(code == 0 and text == _cli("random", "--kind", kind, "--seed", seed)[1], f"random {kind} {seed}")
            path.write_text(text, encoding="utf-8")
            meta = json.loads(text).get("meta", {})
            for check in CHECKS_FOR[kind]:
                extra = ("--max-weight", "3")
                code, report = _cli(check, path, "--format", "json", *extra)
                c.check((code, report) == _cli(check, path, "--format", "json", *extra), f"determinism {kind} {seed}")
                expect = meta.get("expect", {}).get(check)
                if expect is not None:
                    c.check(code == (0 if expect == "pass" else 1), f"{check} on {kind} {seed}: exit {code}")
                c.check(_cli("oracle", check, path, *extra)[0] == 0, f"oracle {check} {kind} {seed}")
                c.count("random runs")
    _finish(c)
