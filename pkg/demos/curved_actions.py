"""Structures plus actions as Maurer-Cartan elements of ``L' = M (+) R``.

An element of L' is a pair ``(m, rho)``: m acts on E alone and rho has at
least one V letter.  The pair coming from a structure and an action is
Maurer-Cartan; the three-part criterion (structure on E, structure on V,
curved action equation) is compared with ``[a, a] = 0`` in the ambient
algebra.  Two actions on the same module differ by an element that is
Maurer-Cartan in the twisted algebra.
"""

from linfkit.generators import lprime_of, module_action_pair, perturb_action, rng_for
from linfkit.voronov import mc_check_lprime, twisting_consistency


def main():
    rng = rng_for("demo-lprime")
    act1, act2 = module_action_pair(rng)
    a1 = lprime_of(act1)
    print("module letters:", act1.V.basis)
    print("assembled element:", mc_check_lprime(a1, 3).details)
    bad, defect = perturb_action(rng, act1, 3)
    print("after adding a defect term:", mc_check_lprime(lprime_of(bad), 3).details)
    diff = lprime_of(act2) + a1.scaled(-1)
    print("second action as a twist of the first:", twisting_consistency(a1, diff, 3))


if __name__ == "__main__":
    main()
