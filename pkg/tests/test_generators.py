import pytest

from linfkit.actions import check_action
from linfkit.errors import TruncationError
from linfkit.fixtures import coadjoint_action, fixture_BB
from linfkit.generators import (
    KINDS,
    coadjoint_candidate,
    module_action_pair,
    perturb_structure,
    random_classical_lie,
    random_complex,
    random_instance,
    random_linfty,
    random_module_action,
    rng_for,
)
from linfkit.io import dumps
from linfkit.linfty import check_jacobi, decalage
from linfkit.ooperators import check_symmetric
from linfkit.symcoalg import ONE, coderivation_apply, monomials_up_to


@pytest.mark.parametrize("kind", KINDS)
def test_instances_are_deterministic(kind):
    assert dumps(random_instance(kind, 7)) == dumps(random_instance(kind, 7))


def test_size_caps():
    with pytest.raises(TruncationError):
        random_instance("graded-space", 0, dim=7)
    with pytest.raises(TruncationError):
        random_instance("family", 0, max_arity=99)


def test_unknown_kind():
    with pytest.raises(ValueError):
        random_instance("nonsense", 0)


def test_lie2_instance_passes():
    m = random_instance("lie2-algebra", 1, dim=2)
    assert check_jacobi(m.structure("L"), 4)


def test_perturbation_records_the_defect():
    m = random_instance("perturbation", 1)
    assert m.meta["generator"]["base"] == "A"
    assert m.meta["defect"]["check"] == "check-action"
    assert not check_action(m.action("rho"), 3)


@pytest.mark.parametrize("seed", range(5))
def test_classical_lie_algebras_are_non_abelian(seed):
    skew = random_classical_lie(rng_for(f"lie:{seed}"))
    assert skew.terms
    assert check_jacobi(decalage(skew), 3)


@pytest.mark.parametrize("seed", range(5))
def test_complexes_square_to_zero(seed):
    V, d = random_complex(rng_for(f"complex:{seed}"))
    for mono in monomials_up_to(V, 1):
        assert coderivation_apply(d, coderivation_apply(d, {mono: ONE})) == {}


@pytest.mark.parametrize("seed", range(5))
def test_random_linfty_has_higher_brackets(seed):
    rng = rng_for(f"linfty:{seed}")
    L = random_linfty(rng, 4)
    assert L.brackets.max_arity >= 3
    P, defect = perturb_structure(rng, L, 3)
    assert not check_jacobi(P, 3)
    assert defect["coefficient"] != 0


@pytest.mark.parametrize("seed", range(5))
def test_module_actions_and_pairs(seed):
    rng = rng_for(f"pair:{seed}")
    a, b = module_action_pair(rng)
    assert a.V.basis == b.V.basis and a.E.basis == b.E.basis
    assert check_action(a, 3) and check_action(b, 3)
    assert check_action(random_module_action(rng), 3)


@pytest.mark.parametrize("closed", [True, False])
def test_coadjoint_candidates_are_symmetric(closed):
    BB = fixture_BB()
    t, omega = coadjoint_candidate(rng_for("sym"), BB, coadjoint_action(BB), closed=closed)
    assert omega
    assert check_symmetric(t, 3)
