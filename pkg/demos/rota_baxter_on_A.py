"""Rota-Baxter operators on the two-dimensional algebra ``[e, f] = e``.

After décalage the algebra lives in degree -1 with ``l_2(e, f) = -e``.  The
adjoint action turns a linear map ``t: E' -> E`` into a candidate O-operator.
We test ``-id`` and ``id``, then build the structure that ``-id`` induces on
the primed copy and certify ``T`` as a Lie infinity morphism.
"""

from linfkit.actions import adjoint_action
from linfkit.fixtures import fixture_A, negid_candidate
from linfkit.ooperators import check_rota_baxter, induced_structure
from linfkit.symcoalg import vec_str


def main():
    A = fixture_A()
    print("brackets of A:", A.brackets)
    for scale in (-1, 1):
        v = check_rota_baxter(negid_candidate(A, scale), A, 4)
        print(f"t = {scale:+d} id:", v)

    act = adjoint_action(A)
    induced, jac, mor = induced_structure(negid_candidate(A), act, 4)
    print("induced brackets on A':", induced.brackets)
    print("square zero:", jac)
    print("T is a morphism:", mor)
    e, f = act.V.index("e'"), act.V.index("f'")
    print("m_2(e', f') =", vec_str(act.V, induced.brackets.value((e, f))))


if __name__ == "__main__":
    main()
