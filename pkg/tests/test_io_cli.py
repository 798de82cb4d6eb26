import json
import os
from fractions import Fraction

import pytest

from linfkit.cli import CHECKS, main
from linfkit.errors import ParseError
from linfkit.fixtures import fixture_A, fixture_files
from linfkit.generators import KINDS, random_instance
from linfkit.io import StructureFile, dumps, load, loads
from linfkit.linfty import check_jacobi

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "fixtures")


def fx(name):
    return os.path.join(FIXTURES, name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- file format --------------------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(fixture_files()))
def test_shipped_fixtures_are_current(name):
    with open(fx(name), encoding="utf-8") as fh:
        assert fh.read() == dumps(fixture_files()[name])


@pytest.mark.parametrize("name", sorted(fixture_files()))
def test_roundtrip(name):
    model = load(fx(name))
    assert dumps(loads(dumps(model))) == dumps(model)


@pytest.mark.parametrize("kind", KINDS)
def test_random_instances_roundtrip(kind):
    for seed in range(3):
        m = random_instance(kind, seed)
        assert loads(dumps(m)) == m


def test_structure_survives_roundtrip():
    m = StructureFile()
    m.put_structure("A", fixture_A(), "A")
    s = loads(dumps(m)).structure("A")
    assert s.brackets == fixture_A().brackets
    assert check_jacobi(s, 4)


MINIMAL = """{
  "spaces": {"E": {"basis": [["x", -1], ["y", 1]]}},
  "families": {
    "l": {"source": "E", "target": "E", "degree": 1,
          "terms": [{"inputs": ["x", "y"], "output": {"y": "COEFF"}}]}
  },
  "structures": {"B": {"space": "E", "brackets": "l"}}
}
"""


def test_minimal_file_loads():
    m = loads(MINIMAL.replace("COEFF", "3/4"))
    s = m.structure("B")
    assert s.brackets.value((0, 1)) == {(1,): Fraction(3, 4)}


def test_zero_denominator_is_a_parse_error():
    with pytest.raises(ParseError) as err:
        loads(MINIMAL.replace("COEFF", "1/0"))
    assert err.value.line is not None


@pytest.mark.parametrize("bad", ["0.5", "1/2/3", "x"])
def test_malformed_rationals(bad):
    with pytest.raises(ParseError):
        loads(MINIMAL.replace("COEFF", bad))


def test_json_syntax_error_has_position():
    with pytest.raises(ParseError) as err:
        loads(MINIMAL.replace('"COEFF"', "").replace("{\n  \"spaces", "{\n  \"spaces", 1))
    assert err.value.line is not None and err.value.column is not None


def test_unresolved_reference():
    with pytest.raises(ParseError) as err:
        loads(MINIMAL.replace("COEFF", "1").replace('"brackets": "l"', '"brackets": "nowhere"'))
    assert "nowhere" in str(err.value)


def test_unknown_basis_name():
    with pytest.raises(ParseError):
        loads(MINIMAL.replace("COEFF", "1").replace('"output": {"y"', '"output": {"z"'))


def test_degree_inconsistency_is_located():
    with pytest.raises(ParseError) as err:
        loads(MINIMAL.replace("COEFF", "1").replace('"output": {"y"', '"output": {"x"'))
    assert "families.l.terms[0]" in str(err.value)


def test_unknown_top_level_key():
    with pytest.raises(ParseError):
        loads(MINIMAL.replace('"spaces"', '"spacez"'))


# -- command line -------------------------------------------------------------------------------------


def test_rota_baxter_examples(capsys):
    assert run(capsys, "check-rota-baxter", fx("fixtureA.json"), "--candidate", "negid")[0] == 0
    code, out, _ = run(capsys, "check-rota-baxter", fx("fixtureA.json"), "--candidate", "id", "--format", "json")
    rep = json.loads(out)
    assert code == 1 and rep["pass"] is False and rep["witness"] == "e'⊙f'"


def test_corrupted_jacobi(capsys):
    code, out, _ = run(capsys, "check-jacobi", fx("corrupted.json"), "--format", "json")
    rep = json.loads(out)
    assert code == 1 and rep["witness"] == "e⊙f⊙h"
    assert set(rep) == {"check", "pass", "witness", "lhs", "rhs", "bounds", "details"}


@pytest.mark.parametrize("name", ["fixtureA.json", "fixtureB.json", "fixtureSL2.json",
                                  "fixtureString.json", "fixtureDGLA.json", "fixtureBB.json"])
def test_fixture_structures_and_actions(capsys, name):
    assert run(capsys, "check-jacobi", fx(name), "--max-weight", "3")[0] == 0
    assert run(capsys, "check-action", fx(name), "--max-weight", "3")[0] == 0


def test_ooperator_commands_agree(capsys):
    for cand in ("negid", "id"):
        a = run(capsys, "check-ooperator", fx("fixtureA.json"), "--candidate", cand)[0]
        b = run(capsys, "mc-h", fx("fixtureA.json"), "--candidate", cand)[0]
        c = run(capsys, "check-rota-baxter", fx("fixtureA.json"), "--candidate", cand)[0]
        assert a == b == c


def test_coadjoint_cocycle_command(capsys):
    assert run(capsys, "coadjoint-cocycle", fx("fixtureBB.json"), "--candidate", "closed")[0] == 0
    assert run(capsys, "coadjoint-cocycle", fx("fixtureBB.json"), "--candidate", "open")[0] == 1


def test_induced_and_morphism(capsys):
    assert run(capsys, "induced-structure", fx("fixtureA.json"), "--candidate", "negid")[0] == 0
    assert run(capsys, "check-morphism", fx("fixtureA.json"), "--candidate", "negid_morphism")[0] == 0
    assert run(capsys, "check-representation", fx("fixtureA.json"), "--action", "adrep")[0] == 0


def test_twist_and_deform(capsys):
    assert run(capsys, "twist", fx("fixtureDGLA.json"), "--candidate", "z", "--max-weight", "3")[0] == 0
    # -id + id = 0 is an O-operator, -id + (-id) = -2 id is not
    code, out, _ = run(capsys, "deform-check", fx("fixtureA.json"), "--candidate", "negid",
                       "--candidate2", "id", "--max-weight", "3", "--format", "json")
    assert code == 0 and json.loads(out)["details"]["agree"] is True
    code, out, _ = run(capsys, "deform-check", fx("fixtureA.json"), "--candidate", "negid",
                       "--candidate2", "negid", "--max-weight", "3", "--format", "json")
    assert code == 1 and json.loads(out)["details"]["agree"] is True


def test_usage_and_input_errors(capsys, tmp_path):
    assert run(capsys, "bogus", fx("fixtureA.json"))[0] == 2
    assert run(capsys, "check-jacobi", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(MINIMAL.replace("COEFF", "1/0"), encoding="utf-8")
    code, _, err = run(capsys, "check-jacobi", str(bad))
    assert code == 2 and "line" in err
    assert run(capsys, "check-representation", fx("fixtureA.json"), "--action", "ad")[0] == 2
    assert run(capsys, "deform-check", fx("fixtureA.json"), "--candidate", "negid")[0] == 2


def test_determinism(capsys):
    first = run(capsys, "check-rota-baxter", fx("fixtureA.json"), "--candidate", "id", "--format", "json")
    second = run(capsys, "check-rota-baxter", fx("fixtureA.json"), "--candidate", "id", "--format", "json")
    assert first == second
    r1 = run(capsys, "random", "--kind", "linfty", "--seed", "5")
    r2 = run(capsys, "random", "--kind", "linfty", "--seed", "5")
    assert r1 == r2 and r1[0] == 0


@pytest.mark.parametrize("check,name,extra", [
    ("check-jacobi", "corrupted.json", ()),
    ("check-jacobi", "fixtureString.json", ("--max-weight", "3")),
    ("check-action", "fixtureA.json", ()),
    ("check-rota-baxter", "fixtureA.json", ("--candidate", "id")),
    ("check-ooperator", "fixtureBB.json", ("--candidate", "open", "--max-weight", "3")),
    ("coadjoint-cocycle", "fixtureBB.json", ("--candidate", "closed", "--max-weight", "3")),
    ("derived-brackets", "fixtureA.json", ("--candidate", "negid", "--max-weight", "3")),
    ("mc-lprime", "fixtureB.json", ("--max-weight", "3")),
])
def test_oracle_on_fixtures(capsys, check, name, extra):
    assert run(capsys, "oracle", check, fx(name), *extra)[0] == 0


def test_random_examples(capsys, tmp_path):
    out = tmp_path / "lie.json"
    assert run(capsys, "random", "--kind", "lie2-algebra", "--seed", "1", "--dim", "2", "--output", str(out))[0] == 0
    assert run(capsys, "check-jacobi", str(out))[0] == 0
    pert = tmp_path / "pert.json"
    assert run(capsys, "random", "--kind", "perturbation", "--seed", "1", "--output", str(pert))[0] == 0
    assert load(str(pert)).meta["generator"]["base"] == "A"
    assert run(capsys, "check-action", str(pert))[0] == 1
    assert run(capsys, "random", "--kind", "graded-space", "--dim", "9")[0] == 2
    assert set(CHECKS) >= {"check-jacobi", "twist", "deform-check"}
