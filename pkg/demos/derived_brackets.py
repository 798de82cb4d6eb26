"""Higher derived brackets on ``h = Hom(S(V), E)``.

The action of A on itself is packed into one square-zero coderivation Delta
of ``S(E (+) V)``.  Nested commutators with Delta, projected back to h, give
brackets ``d_k``; a candidate is Maurer-Cartan for them exactly when it is
an O-operator.  The closed-form fast path is compared with the nested
commutators, and a deformation of ``-id`` is tested through the twisted pair
algebra.
"""

from linfkit.actions import adjoint_action
from linfkit.fixtures import fixture_A, negid_candidate
from linfkit.generators import random_candidate, rng_for
from linfkit.voronov import VData, deformation_check, derived_bracket, mc_check_h


def main():
    A = fixture_A()
    data = VData(adjoint_action(A), 3)
    print("Delta squares to zero:", data.check())
    rng = rng_for("derived-demo")
    for i in range(6):
        t = random_candidate(rng, data.action, 2)
        same = all(derived_bracket(data, [t] * k, "fast") == derived_bracket(data, [t] * k) for k in (1, 2, 3))
        v = mc_check_h(data, t)
        print(f"candidate {i}: fast = nested {same}, MC {v.passed}, O-operator {v.details['ooperator']}")
    t = negid_candidate(A)
    for label, t2 in (("t' = -t", t.scaled(-1)), ("t' = t", t)):
        print(label, deformation_check(data, t, t2))


if __name__ == "__main__":
    main()
