"""Symmetric O-operators for the coadjoint action and closed functionals.

On the balanced fixture BB a degree-zero functional omega on S(E) defines a
symmetric family ``s`` by ``<s(x), y> = <omega, x . y>``.  Inverting the
comorphism generated by ``s`` gives a candidate T for the coadjoint action.
T is an O-operator exactly when omega vanishes on the image of ``M_E``.
"""

from linfkit.fixtures import coadjoint_action, fixture_BB
from linfkit.generators import coadjoint_candidate, rng_for
from linfkit.ooperators import coadjoint_cocycle_check


def main():
    BB = fixture_BB()
    co = coadjoint_action(BB)
    print("BB brackets:", BB.brackets)
    for seed in range(6):
        closed = seed % 2 == 0
        t, omega = coadjoint_candidate(rng_for(f"demo:{seed}"), BB, co, closed=closed, max_weight=4)
        res = coadjoint_cocycle_check(t, co, 3)
        print(f"seed {seed}: omega drawn {'closed' if closed else 'perturbed'} with {len(omega)} terms")
        print(f"   inverse {bool(res['inverse'])}, symmetric {bool(res['symmetric'])}, "
              f"cocycle {bool(res['cocycle'])}, O-operator {bool(res['ooperator'])}")


if __name__ == "__main__":
    main()
