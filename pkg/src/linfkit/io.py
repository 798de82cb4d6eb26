"""Canonical JSON structure files.

A file has six top-level sections, always written in this order::

    {"spaces":     {"E": {"basis": [["e", -1], ["f", -1]]},
                    "S": {"sum": ["E", "Ep"]}},
     "families":   {"lA": {"source": "E", "target": "E", "degree": 1,
                           "terms": [{"inputs": ["e", "f"], "output": {"e": "-1"}}]}},
     "structures": {"A": {"space": "E", "brackets": "lA"}},
     "actions":    {"ad": {"structure": "A", "module": "Ap", "phi": "phi"}},
     "candidates": {"negid": {"family": "t", "action": "ad"},
                    "f":     {"family": "f", "source": "A", "target": "B"},
                    "z":     {"element": {"e": "1"}, "structure": "A"}},
     "meta":       {...}}

Coefficients are rationals written as strings ``"p/q"``.  Input words are
normalized on load with their Koszul sign folded into the output, so any
ordering of the inputs is accepted; :func:`dumps` writes the canonical form.
"""

import json
import re
from fractions import Fraction

from .actions import Action
from .errors import LinfError, ParseError
from .graded import GradedSpace, SumSpace, direct_sum
from .linfty import LieInftyStructure
from .symcoalg import Family, add_into, clean, normalize_word

SECTIONS = ("spaces", "families", "structures", "actions", "candidates", "meta")
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


class StructureFile:
    """Named spaces, families, structures, actions and candidates.

    Entries are stored by name so that a model saves back to the same
    references it was loaded from.  Resolved objects are built on demand.
    """

    def __init__(self):
        self.spaces = {}        # name -> GradedSpace | SumSpace
        self.space_refs = {}    # name -> (left, right) for sum spaces
        self.families = {}      # name -> Family
        self.family_refs = {}   # name -> (source name, target name)
        self.structure_refs = {}
        self.action_refs = {}
        self.candidate_refs = {}
        self.meta = {}

    # building

    def add_space(self, name, space):
        if isinstance(space, tuple):
            left, right = space
            self.space_refs[name] = (left, right)
            self.spaces[name] = direct_sum(self.spaces[left], self.spaces[right])
        else:
            self.spaces[name] = space
        return name

    def space_name(self, space):
        for name, s in self.spaces.items():
            if s == space and type(s) is type(space):
                return name
        raise LinfError(f"space {space!r} is not registered")

    def add_family(self, name, fam: Family):
        self.families[name] = fam
        self.family_refs[name] = (self.space_name(fam.source), self.space_name(fam.target))
        return name

    def add_structure(self, name, space, brackets=None):
        self.structure_refs[name] = {"space": space, "brackets": brackets}
        return name

    def add_action(self, name, structure, module, phi):
        self.action_refs[name] = {"structure": structure, "module": module, "phi": phi}
        return name

    def add_candidate(self, name, **entry):
        self.candidate_refs[name] = dict(entry)
        return name

    # registering whole objects

    def put_space(self, space, name):
        for n, s in self.spaces.items():
            if s == space and type(s) is type(space):
                return n
        if isinstance(space, SumSpace):
            left = self.space_name(GradedSpace(space.basis[:space.left_dim]))
            right = self.space_name(GradedSpace(space.basis[space.left_dim:]))
            return self.add_space(name, (left, right))
        return self.add_space(name, GradedSpace(space.basis))

    def put_structure(self, name, structure, space_name=None):
        sp = self.put_space(structure.space, space_name or f"{name}.space")
        fam = None
        if not structure.brackets.is_zero():
            fam = self.add_family(f"{name}.l", structure.brackets)
        return self.add_structure(name, sp, fam)

    def put_action(self, name, action, structure, module, sum_name=None):
        """Register an action between two already registered structures."""
        self.put_space(action.S, sum_name or f"{structure}+{module}")
        phi = None
        if not action.phi.is_zero():
            phi = self.add_family(f"{name}.phi", action.phi)
        return self.add_action(name, structure, module, phi)

    def put_candidate(self, name, fam, **refs):
        return self.add_candidate(name, family=self.add_family(f"{name}.t", fam), **refs)

    # resolving

    def structure(self, name=None) -> LieInftyStructure:
        name = self._pick(self.structure_refs, name, "structure")
        ref = self.structure_refs[name]
        E = self.spaces[ref["space"]]
        fam = self.families[ref["brackets"]] if ref.get("brackets") else Family.zero(E, E, 1)
        return LieInftyStructure(E, fam, name)

    def action(self, name=None) -> Action:
        name = self._pick(self.action_refs, name, "action")
        ref = self.action_refs[name]
        E, V = self.structure(ref["structure"]), self.structure(ref["module"])
        S = direct_sum(E.space, V.space)
        if ref.get("phi"):
            fam = self.families[ref["phi"]]
            if fam.source.basis != S.basis:
                raise ParseError(f"action {name}: phi does not live on E (+) V", key=f"actions.{name}.phi")
            phi = Family(S, S, fam.degree, fam.terms, fam.bound, check=False)
        else:
            phi = None
        return Action(E, V, phi)

    def candidate(self, name=None) -> dict:
        """The raw candidate entry with its family/element resolved."""
        name = self._pick(self.candidate_refs, name, "candidate")
        ref = dict(self.candidate_refs[name])
        ref["name"] = name
        if "family" in ref:
            ref["family"] = self.families[ref["family"]]
        return ref

    @staticmethod
    def _pick(table, name, what):
        if name is None:
            if not table:
                raise ParseError(f"file has no {what}s", key=f"{what}s")
            name = sorted(table)[0]
        if name not in table:
            raise ParseError(f"unknown {what} {name!r}", key=f"{what}s.{name}")
        return name

    # equality for roundtrip tests

    def __eq__(self, other):
        return isinstance(other, StructureFile) and dumps(self) == dumps(other)


# -- saving -------------------------------------------------------------------------------


def _q(c) -> str:
    return str(Fraction(c))


def _family_json(fam: Family, src: str, tgt: str) -> dict:
    terms = []
    for mono in sorted(fam.terms, key=lambda m: (len(m), m)):
        val = fam.terms[mono]
        out = {fam.target.name(o): _q(c) for (o,), c in sorted(val.items())}
        if out:
            terms.append({"inputs": [fam.source.name(i) for i in mono], "output": out})
    d = {"source": src, "target": tgt, "degree": fam.degree, "terms": terms}
    if fam.bound is not None:
        d["bound"] = fam.bound
    return d


def to_json(model: StructureFile) -> dict:
    spaces = {}
    for name in sorted(model.spaces):
        if name in model.space_refs:
            spaces[name] = {"sum": list(model.space_refs[name])}
        else:
            spaces[name] = {"basis": [[b, d] for b, d in model.spaces[name].basis]}
    families = {name: _family_json(model.families[name], *model.family_refs[name])
                for name in sorted(model.families)}
    structures = {n: {k: v for k, v in sorted(model.structure_refs[n].items()) if v is not None}
                  for n in sorted(model.structure_refs)}
    actions = {n: dict(sorted(model.action_refs[n].items())) for n in sorted(model.action_refs)}
    candidates = {}
    for n in sorted(model.candidate_refs):
        entry = {}
        for k, v in sorted(model.candidate_refs[n].items()):
            if k == "element":
                st = model.structure(model.candidate_refs[n]["structure"]).space
                v = {st.name(i): _q(c) for (i,), c in sorted(v.items())}
            entry[k] = v
        candidates[n] = entry
    return {"spaces": spaces, "families": families, "structures": structures,
            "actions": actions, "candidates": candidates, "meta": model.meta}


def _flat(obj) -> bool:
    if isinstance(obj, dict):
        return all(not isinstance(v, (dict, list)) or _flat(v) and isinstance(v, list) for v in obj.values()) \
            or set(obj) == {"inputs", "output"}
    if isinstance(obj, list):
        return all(not isinstance(v, (dict, list)) or isinstance(v, list) and _flat(v) for v in obj)
    return True


def _render(obj, indent=0) -> str:
    """JSON with one line per term, basis entry or short record."""
    if not isinstance(obj, (dict, list)) or _flat(obj) or not obj:
        return json.dumps(obj, ensure_ascii=False)
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_render(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    items = [inner + _render(v, indent + 1) for v in obj]
    return "[\n" + ",\n".join(items) + "\n" + pad + "]"


def dumps(model: StructureFile) -> str:
    return _render(to_json(model)) + "\n"


def save(model: StructureFile, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model))


# -- loading ------------------------------------------------------------------------------


def _locate(text, key):
    """Line/column of the last path component of ``key`` as a JSON string, best effort."""
    if not text or not key:
        return None, None
    leaf = re.split(r"[.\[\]]", key.rstrip("]"))
    leaf = [p for p in leaf if p and not p.isdigit()]
    if not leaf:
        return None, None
    pos = -1
    for part in leaf:
        nxt = text.find(json.dumps(part, ensure_ascii=False), pos + 1)
        if nxt < 0:
            break
        pos = nxt
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Loader:
    def __init__(self, text):
        self.text = text

    def fail(self, msg, key):
        line, col = _locate(self.text, key)
        raise ParseError(msg, key=key, line=line, column=col)

    def rational(self, raw, key) -> Fraction:
        if isinstance(raw, bool) or not isinstance(raw, (str, int)):
            self.fail(f"coefficient must be a rational string, got {raw!r}", key)
        s = str(raw).strip()
        if not _RATIONAL.match(s):
            self.fail(f"malformed rational {raw!r}", key)
        try:
            return Fraction(s)
        except ZeroDivisionError:
            self.fail(f"zero denominator in {raw!r}", key)

    def obj(self, raw, key, kind=dict):
        if not isinstance(raw, kind):
            self.fail(f"expected {'an object' if kind is dict else 'a list'}", key)
        return raw

    def integer(self, raw, key):
        if isinstance(raw, bool) or not isinstance(raw, int):
            self.fail("expected an integer", key)
        return raw

    def name_ref(self, raw, table, key, what):
        if not isinstance(raw, str) or raw not in table:
            self.fail(f"unresolved {what} reference {raw!r}", key)
        return raw

    def load(self, data) -> StructureFile:
        data = self.obj(data, "")
        for k in data:
            if k not in SECTIONS:
                self.fail(f"unknown top-level key {k!r}", k)
        model = StructureFile()
        self.spaces(model, self.obj(data.get("spaces", {}), "spaces"))
        fams = self.obj(data.get("families", {}), "families")
        for name, raw in fams.items():
            self.family(model, name, self.obj(raw, f"families.{name}"))
        for name, raw in self.obj(data.get("structures", {}), "structures").items():
            key = f"structures.{name}"
            raw = self.obj(raw, key)
            sp = self.name_ref(raw.get("space"), model.spaces, f"{key}.space", "space")
            br = raw.get("brackets")
            if br is not None:
                self.name_ref(br, model.families, f"{key}.brackets", "family")
                fam = model.families[br]
                if fam.source != model.spaces[sp] or fam.target != model.spaces[sp]:
                    self.fail("brackets must be a family on the structure's space", f"{key}.brackets")
                if not fam.is_zero() and fam.degree != 1:
                    self.fail("degree inconsistency: brackets must have degree 1", f"{key}.brackets")
            model.add_structure(name, sp, br)
        for name, raw in self.obj(data.get("actions", {}), "actions").items():
            key = f"actions.{name}"
            raw = self.obj(raw, key)
            st = self.name_ref(raw.get("structure"), model.structure_refs, f"{key}.structure", "structure")
            md = self.name_ref(raw.get("module"), model.structure_refs, f"{key}.module", "structure")
            phi = raw.get("phi")
            if phi is not None:
                self.name_ref(phi, model.families, f"{key}.phi", "family")
            model.add_action(name, st, md, phi)
            try:
                model.action(name)
            except LinfError as exc:
                self.fail(f"invalid action: {exc}", f"{key}.phi")
        for name, raw in self.obj(data.get("candidates", {}), "candidates").items():
            self.candidate(model, name, self.obj(raw, f"candidates.{name}"))
        model.meta = self.obj(data.get("meta", {}), "meta")
        return model

    def spaces(self, model, raw):
        pending = dict(raw)
        while pending:
            progress = False
            for name in list(pending):
                key = f"spaces.{name}"
                entry = self.obj(pending[name], key)
                if "basis" in entry:
                    basis = []
                    for i, b in enumerate(self.obj(entry["basis"], f"{key}.basis", list)):
                        if not (isinstance(b, list) and len(b) == 2 and isinstance(b[0], str)):
                            self.fail("basis entries are [name, degree] pairs", f"{key}.basis[{i}]")
                        basis.append((b[0], self.integer(b[1], f"{key}.basis[{i}]")))
                    try:
                        model.add_space(name, GradedSpace(tuple(basis)))
                    except LinfError as exc:
                        self.fail(str(exc), key)
                elif "sum" in entry:
                    parts = self.obj(entry["sum"], f"{key}.sum", list)
                    if len(parts) != 2 or not all(isinstance(p, str) for p in parts):
                        self.fail("a sum space names exactly two spaces", f"{key}.sum")
                    missing = [p for p in parts if p not in model.spaces]
                    if any(p not in raw for p in missing):
                        self.fail(f"unresolved space reference {missing[0]!r}", f"{key}.sum")
                    if missing:
                        continue
                    model.add_space(name, tuple(parts))
                else:
                    self.fail("a space has either a basis or a sum", key)
                del pending[name]
                progress = True
            if not progress:
                self.fail("cyclic sum spaces", "spaces")

    def family(self, model, name, raw):
        key = f"families.{name}"
        src = self.name_ref(raw.get("source"), model.spaces, f"{key}.source", "space")
        tgt = self.name_ref(raw.get("target"), model.spaces, f"{key}.target", "space")
        deg = self.integer(raw.get("degree"), f"{key}.degree")
        bound = raw.get("bound")
        if bound is not None:
            bound = self.integer(bound, f"{key}.bound")
        S, T = model.spaces[src], model.spaces[tgt]
        terms = {}
        for i, term in enumerate(self.obj(raw.get("terms", []), f"{key}.terms", list)):
            tkey = f"{key}.terms[{i}]"
            term = self.obj(term, tkey)
            inputs = self.obj(term.get("inputs"), f"{tkey}.inputs", list)
            for x in inputs:
                if not isinstance(x, str) or x not in S.names:
                    self.fail(f"unknown basis element {x!r} in inputs", f"{tkey}.inputs")
            if not inputs:
                self.fail("empty input word", f"{tkey}.inputs")
            try:
                word = normalize_word(S, inputs)
            except LinfError as exc:
                self.fail(str(exc), f"{tkey}.inputs")
            out = {}
            want = sum(S.degree(S.index(x)) for x in inputs) + deg
            for oname, c in self.obj(term.get("output"), f"{tkey}.output").items():
                if oname not in T.names:
                    self.fail(f"unknown basis element {oname!r} in output", f"{tkey}.output")
                o = T.index(oname)
                if T.degree(o) != want:
                    self.fail(f"degree inconsistency: {'.'.join(inputs)} -> {oname} "
                              f"does not have degree {deg}", f"{tkey}.output.{oname}")
                out[(o,)] = self.rational(c, f"{tkey}.output.{oname}")
            for mono, sign in word.items():
                add_into(terms.setdefault(mono, {}), out, sign)
        terms = {m: clean(v) for m, v in terms.items() if clean(v)}
        model.families[name] = Family(S, T, deg, terms, bound, check=False)
        model.family_refs[name] = (src, tgt)

    def candidate(self, model, name, raw):
        key = f"candidates.{name}"
        entry = {}
        if "family" in raw:
            entry["family"] = self.name_ref(raw["family"], model.families, f"{key}.family", "family")
        elif "element" in raw:
            st = self.name_ref(raw.get("structure"), model.structure_refs, f"{key}.structure", "structure")
            E = model.structure(st).space
            el = {}
            for bname, c in self.obj(raw["element"], f"{key}.element").items():
                if bname not in E.names:
                    self.fail(f"unknown basis element {bname!r}", f"{key}.element")
                if E.degree(E.index(bname)) != 0:
                    self.fail(f"degree inconsistency: element components have degree 0, {bname!r} does not",
                              f"{key}.element.{bname}")
                el[(E.index(bname),)] = self.rational(c, f"{key}.element.{bname}")
            entry["element"] = clean(el)
        else:
            self.fail("a candidate names a family or an element", key)
        for ref, table, what in (("action", model.action_refs, "action"),
                                 ("structure", model.structure_refs, "structure"),
                                 ("source", model.structure_refs, "structure"),
                                 ("target", model.structure_refs, "structure")):
            if ref in raw:
                entry[ref] = self.name_ref(raw[ref], table, f"{key}.{ref}", what)
        for k in raw:
            if k not in ("family", "element", "action", "structure", "source", "target", "note"):
                self.fail(f"unknown candidate field {k!r}", f"{key}.{k}")
        if "note" in raw:
            entry["note"] = str(raw["note"])
        model.candidate_refs[name] = entry


def loads(text: str) -> StructureFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", key=None, line=exc.lineno, column=exc.colno) from None
    return _Loader(text).load(data)


def load(path) -> StructureFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise ParseError(f"file is not UTF-8: {exc}") from None
    return loads(text)
