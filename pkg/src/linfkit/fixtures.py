"""Small hand-checked structures used by the tests, demos and CLI."""

from fractions import Fraction

from .actions import Action, action_from_semidirect, adjoint_action, adjoint_representation, dual_representation, rep_to_action
from .graded import GradedSpace, shift
from .linfty import LieInftyStructure, SkewBrackets, decalage, endo_dgla
from .symcoalg import Family


def fixture_A() -> LieInftyStructure:
    """Décalage of the 2-dim Lie algebra ``[e, f] = e``: ``l_2(e, f) = -e`` in degree -1."""
    skew = SkewBrackets.from_terms(GradedSpace((("e", 0), ("f", 0))), {"e f": {"e": 1}})
    s = decalage(skew)
    s.name = "A"
    return s


def fixture_B() -> LieInftyStructure:
    """``E = {x: -1, y: 1}`` with ``l_2(x, y) = y``; balanced, so ``E* = E`` degreewise."""
    E = GradedSpace((("x", -1), ("y", 1)))
    return LieInftyStructure.from_terms(E, {"x y": {"y": 1}}, name="B")


def fixture_BB() -> LieInftyStructure:
    """Two coupled copies of B: ``l_2(x1, y1) = y1``, ``l_2(x1, y2) = y2``, ``l_2(x2, y2) = y1``."""
    E = GradedSpace((("x1", -1), ("x2", -1), ("y1", 1), ("y2", 1)))
    return LieInftyStructure.from_terms(
        E, {"x1 y1": {"y1": 1}, "x1 y2": {"y2": 1}, "x2 y2": {"y1": 1}}, name="BB")


def fixture_sl2() -> LieInftyStructure:
    """Décalage of sl2 with ``[h, e] = 2e``, ``[h, f] = -2f``, ``[e, f] = h``."""
    skew = SkewBrackets.from_terms(
        GradedSpace((("e", 0), ("f", 0), ("h", 0))),
        {"h e": {"e": 2}, "h f": {"f": -2}, "e f": {"h": 1}},
    )
    s = decalage(skew)
    s.name = "sl2"
    return s


def fixture_string() -> LieInftyStructure:
    """sl2 extended by ``b`` in degree -2 with ``l_3(e, f, h) = b``.

    The ternary bracket is the Cartan 3-cocycle ``<x, [y, z]>`` up to scale,
    which is all the generalized Jacobi identities ask of it here.
    """
    base = fixture_sl2()
    E = GradedSpace(base.space.basis + (("b", -2),))
    terms = {m: v for m, v in base.brackets.terms.items()}
    fam = Family(E, E, 1, terms) + Family.from_terms(E, E, 1, {"e f h": {"b": 1}})
    return LieInftyStructure(E, fam, name="string")


def fixture_dgla() -> LieInftyStructure:
    """``End(V)[1]`` for the complex ``a -> b`` with V = {a: 0, b: 1}."""
    V = GradedSpace((("a", 0), ("b", 1)))
    d = Family.from_terms(V, V, 1, {"a": {"b": 1}})
    s = endo_dgla(V, d)
    s.name = "dgla"
    return s


def coadjoint_action(structure: LieInftyStructure, suffix="~") -> Action:
    """The coadjoint representation viewed as an action on ``(E*, l_1*)``."""
    return rep_to_action(dual_representation(adjoint_representation(structure, suffix)))


def negid_candidate(structure: LieInftyStructure, scale=-1) -> Family:
    """``t_1 = scale * id`` on the primed copy of E (the Rota-Baxter test candidate)."""
    act = adjoint_action(structure)
    terms = {(i,): {(i,): Fraction(scale)} for i in range(structure.space.dim)}
    return Family(act.V, act.E, 0, terms)


def all_fixtures() -> dict:
    return {
        "A": fixture_A(),
        "B": fixture_B(),
        "BB": fixture_BB(),
        "sl2": fixture_sl2(),
        "string": fixture_string(),
        "dgla": fixture_dgla(),
    }


# -- shipped structure files -------------------------------------------------------------


def _with_adjoint(model, name, structure):
    act = adjoint_action(structure)
    model.put_structure(name, structure, name)
    model.put_structure(name + "'", act.V_structure, name + "'")
    model.put_action("ad", act, name, name + "'")
    return act


def fixture_files() -> dict:
    """``{file name: StructureFile}`` for every shipped fixture."""
    from .generators import coadjoint_candidate, rng_for
    from .io import StructureFile
    from .ooperators import induced_structure

    files = {}

    m = StructureFile()
    A = fixture_A()
    act = _with_adjoint(m, "A", A)
    for cname, scale in (("negid", -1), ("id", 1)):
        m.put_candidate(cname, negid_candidate(A, scale), action="ad")
    induced, _, _ = induced_structure(negid_candidate(A), act, 4)
    m.add_structure("A'negid", "A'", m.add_family("A'negid.l", induced.brackets))
    m.add_candidate("negid_morphism", family="negid.t", source="A'negid", target="A")
    rep = rep_to_action(adjoint_representation(A, "_"))
    m.put_structure("A_", rep.V_structure, "A_")
    m.put_action("adrep", rep, "A", "A_")
    m.meta = {"description": "2-dim algebra [e,f] = e after décalage, with its adjoint action 'ad', "
                             "the adjoint representation 'adrep' on an abelian copy, and candidates: "
                             "negid is a Rota-Baxter operator and id is not"}
    files["fixtureA.json"] = m

    m = StructureFile()
    bad = decalage(SkewBrackets.from_terms(
        GradedSpace((("e", 0), ("f", 0), ("h", 0))),
        {"h e": {"e": 3}, "h f": {"f": -2}, "e f": {"h": 1}},
    ))
    m.put_structure("sl2bad", bad, "E")
    m.meta = {"description": "sl2 with [h,e] = 3e: the Jacobi identity fails on e.f.h"}
    files["corrupted.json"] = m

    for fname, fx in (("fixtureB.json", fixture_B()), ("fixtureSL2.json", fixture_sl2()),
                      ("fixtureString.json", fixture_string()), ("fixtureDGLA.json", fixture_dgla())):
        m = StructureFile()
        _with_adjoint(m, fx.name, fx)
        m.meta = {"description": f"fixture {fx.name} with its adjoint action"}
        files[fname] = m
    dg = files["fixtureDGLA.json"]
    E = fixture_dgla().space
    dg.add_candidate("z", element={(E.index("E[b,a]"),): Fraction(1)}, structure="dgla")

    m = StructureFile()
    BB = fixture_BB()
    co = coadjoint_action(BB)
    m.put_structure("BB", BB, "BB")
    m.put_structure("BB*", co.V_structure, "BB*")
    m.put_action("coad", co, "BB", "BB*")
    for cname, closed in (("closed", True), ("open", False)):
        # a non-closed perturbation can land back on a closed functional; redraw until it does not
        seed = 0
        while True:
            t, omega = coadjoint_candidate(rng_for(seed), BB, co, closed=closed, max_weight=4)
            if is_closed(BB, omega, 5) == closed:
                break
            seed += 1
        m.put_candidate(cname, t, action="coad")
    m.meta = {"description": "balanced fixture BB with its coadjoint action; 'closed' comes from "
                             "a closed functional, 'open' from a non-closed one",
              "max_weight": 4}
    files["fixtureBB.json"] = m
    return files


def is_closed(structure, omega, max_weight) -> bool:
    """Whether the functional omega vanishes on the image of the coderivation."""
    from .ooperators import _functional_is_closed

    return bool(_functional_is_closed(structure.brackets, omega, max_weight))


def write_fixture_files(directory):
    import os

    from .io import save

    os.makedirs(directory, exist_ok=True)
    for name, model in fixture_files().items():
        save(model, os.path.join(directory, name))
