"""Batch command line: ``python3 -m linfkit <command> FILE [flags]``.

Exit codes: 0 when the check passes, 1 on a mathematical failure (the report
carries a witness), 2 on unreadable or inconsistent input.  ``oracle CMD``
re-runs CMD through its definition-level path and exits 0 iff both paths
give the same verdict.
"""

import argparse
import json
import sys
from fractions import Fraction
from math import factorial

from .config import configured
from .errors import LinfError, NotOOperator
from .verdict import Verdict

CHECKS = ("check-jacobi", "check-morphism", "check-representation", "check-action",
          "check-ooperator", "check-rota-baxter", "induced-structure", "coadjoint-cocycle",
          "derived-brackets", "mc-h", "mc-lprime", "twist", "deform-check")
COMMANDS = CHECKS + ("random", "oracle")


class InputError(Exception):
    pass


# -- helpers ----------------------------------------------------------------------------


def _family_lines(fam):
    from .symcoalg import mono_str, vec_str

    return {mono_str(fam.source, m): vec_str(fam.target, v) for m, v in sorted(fam.terms.items(), key=lambda t: (len(t[0]), t[0]))}


def _candidate(model, args, key="candidate"):
    c = model.candidate(getattr(args, key))
    return c


def _action_for(model, args, cand=None):
    name = args.action or (cand or {}).get("action")
    return model.action(name)


def _family_candidate(model, args, key="candidate"):
    c = _candidate(model, args, key)
    if "family" not in c:
        raise InputError(f"candidate {c['name']!r} is not a family")
    return c


# -- command handlers: (model, args, generic) -> Verdict -------------------------------------


def cmd_check_jacobi(model, args, generic):
    from .linfty import check_jacobi

    return check_jacobi(model.structure(args.structure), args.max_weight,
                        method="square" if generic else "direct")


def cmd_check_morphism(model, args, generic):
    from .actions import check_linfty_morphism

    c = _family_candidate(model, args)
    if "source" not in c or "target" not in c:
        raise InputError("a morphism candidate names its source and target structures")
    src, tgt = model.structure(c["source"]), model.structure(c["target"])
    return check_linfty_morphism(c["family"], src, tgt, args.max_weight,
                                 method="comorphism" if generic else "unshuffle")


def cmd_check_representation(model, args, generic):
    from .actions import action_to_linear_rep, check_representation, split_mono

    act = model.action(args.action)
    if any(len(split_mono(act.S, m)[1]) != 1 for m in act.phi.terms) or act.V_structure.brackets.max_arity > 1:
        raise InputError("action is not linear in V, so it is not a representation")
    rep = action_to_linear_rep(act)
    return check_representation(rep, args.max_weight, method="morphism" if generic else "identity")


def cmd_check_action(model, args, generic):
    from .actions import check_action

    return check_action(model.action(args.action), args.max_weight,
                        method="semidirect" if generic else "morphism")


def cmd_check_ooperator(model, args, generic):
    from .ooperators import check_ooperator

    c = _family_candidate(model, args)
    return check_ooperator(c["family"], _action_for(model, args, c), args.max_weight,
                           method="coalgebra" if generic else "projection")


def cmd_check_rota_baxter(model, args, generic):
    from .ooperators import check_rota_baxter

    c = _family_candidate(model, args)
    if args.structure:
        structure = model.structure(args.structure)
    else:
        structure = _action_for(model, args, c).E_structure
    return check_rota_baxter(c["family"], structure, args.max_weight,
                             method="coalgebra" if generic else "projection")


def cmd_induced_structure(model, args, generic):
    from .ooperators import induced_bracket_formula, induced_structure
    from .symcoalg import monomials_up_to, mono_str, vec_str

    c = _family_candidate(model, args)
    act = _action_for(model, args, c)
    W = args.max_weight
    try:
        structure, jac, mor = induced_structure(c["family"], act, W)
    except NotOOperator as exc:
        return Verdict("induced_structure", False, str(exc).split(": ", 1)[-1], bounds={"max_weight": W},
                       details={"reason": "candidate is not an O-operator"})
    if generic:
        fam = structure.brackets
        for mono in monomials_up_to(act.V, W):
            lhs = fam.value(mono)
            rhs = induced_bracket_formula(c["family"], act, mono)
            if lhs != rhs:
                return Verdict("induced_structure[formula]", False, mono_str(act.V, mono),
                               vec_str(act.V, lhs), vec_str(act.V, rhs), {"max_weight": W})
        return Verdict("induced_structure[formula]", True, bounds={"max_weight": W},
                       details={"brackets": _family_lines(structure.brackets)})
    passed = bool(jac) and bool(mor)
    v = Verdict("induced_structure", passed, bounds={"max_weight": W},
                details={"jacobi": bool(jac), "morphism": bool(mor),
                         "brackets": _family_lines(structure.brackets)})
    for part in (jac, mor):
        if not part:
            v.witness, v.lhs, v.rhs = part.witness, part.lhs, part.rhs
            break
    return v


def cmd_coadjoint_cocycle(model, args, generic):
    from .ooperators import coadjoint_cocycle_check

    c = _family_candidate(model, args)
    d = coadjoint_cocycle_check(c["family"], _action_for(model, args, c), args.max_weight)
    v = d["ooperator"] if generic else d["cocycle"]
    v.details = dict(v.details)
    v.details.update({"inverse": bool(d["inverse"]), "symmetric": bool(d["symmetric"]),
                      "ooperator": bool(d["ooperator"]), "cocycle": bool(d["cocycle"]),
                      "agree": bool(d["ooperator"]) == bool(d["cocycle"])})
    return v


def cmd_derived_brackets(model, args, generic):
    from .ooperators import as_candidate
    from .voronov import VData, derived_bracket

    c = _family_candidate(model, args)
    act = _action_for(model, args, c)
    data = VData(act, args.max_weight)
    t = as_candidate(c["family"], act)
    out = {}
    for k in range(1, args.max_arity + 1):
        d = derived_bracket(data, [t] * k, "generic" if generic else "fast")
        out[str(k)] = _family_lines(d)
    return Verdict("derived_brackets[generic]" if generic else "derived_brackets[fast]", True,
                   bounds={"max_weight": args.max_weight, "max_arity": args.max_arity},
                   details={"brackets": out})


def cmd_mc_h(model, args, generic):
    from .voronov import VData, mc_check_h

    c = _family_candidate(model, args)
    data = VData(_action_for(model, args, c), args.max_weight)
    return mc_check_h(data, c["family"], "generic" if generic else "fast")


def cmd_mc_lprime(model, args, generic):
    from .voronov import LPrimeElement, mc_check_lprime

    act = model.action(args.action)
    a = LPrimeElement.from_structures(act.E_structure, act)
    v = mc_check_lprime(a, args.max_weight)
    if generic:
        g = v.details["generic"]
        return Verdict("mc_lprime[generic]", g, None if g else "[a, a]_RN", bounds=v.bounds)
    return v


def cmd_twist(model, args, generic):
    from .linfty import check_jacobi, curvature, twist
    from .symcoalg import coderivation_apply, sym_product, vec_str

    c = _candidate(model, args)
    if "element" not in c:
        raise InputError(f"candidate {c['name']!r} is not an element")
    structure = model.structure(args.structure or c.get("structure"))
    E, z = structure.space, c["element"]
    if generic:
        # weight-one part of M(exp z)
        expz, power = {}, {}
        for k in range(1, structure.brackets.max_arity + 1):
            power = dict(z) if k == 1 else sym_product(E, power, z)
            for m, x in power.items():
                expz[m] = expz.get(m, 0) + x * Fraction(1, factorial(k))
        curv = {m: x for m, x in coderivation_apply(structure.brackets, expz).items() if len(m) == 1 and x}
    else:
        curv = curvature(structure, z)
    name = "twist[generic]" if generic else "twist"
    if curv:
        return Verdict(name, False, vec_str(E, z), vec_str(E, curv), "0", {"max_weight": args.max_weight},
                       {"reason": "element is not Maurer-Cartan"})
    tw = twist(structure, z)
    jac = check_jacobi(tw, args.max_weight)
    return Verdict(name, bool(jac), jac.witness, jac.lhs, jac.rhs, {"max_weight": args.max_weight},
                   {"brackets": _family_lines(tw.brackets)})


def cmd_deform_check(model, args, generic):
    from .voronov import VData, deformation_check

    c = _family_candidate(model, args)
    if not args.candidate2:
        raise InputError("deform-check needs --candidate2 for the deformation t'")
    c2 = _family_candidate(model, args, "candidate2")
    data = VData(_action_for(model, args, c), args.max_weight)
    d = deformation_check(data, c["family"], c2["family"])
    key = "twisted_mc" if generic else "ooperator"
    return Verdict("deform_check[twisted]" if generic else "deform_check", d[key],
                   None if d[key] else f"{c['name']} + {c2['name']}",
                   bounds={"max_weight": args.max_weight}, details=d)


HANDLERS = {
    "check-jacobi": cmd_check_jacobi,
    "check-morphism": cmd_check_morphism,
    "check-representation": cmd_check_representation,
    "check-action": cmd_check_action,
    "check-ooperator": cmd_check_ooperator,
    "check-rota-baxter": cmd_check_rota_baxter,
    "induced-structure": cmd_induced_structure,
    "coadjoint-cocycle": cmd_coadjoint_cocycle,
    "derived-brackets": cmd_derived_brackets,
    "mc-h": cmd_mc_h,
    "mc-lprime": cmd_mc_lprime,
    "twist": cmd_twist,
    "deform-check": cmd_deform_check,
}


# -- reporting ----------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, Verdict):
        return bool(x)
    return str(x)


def report(v: Verdict) -> dict:
    return {"check": v.check, "pass": bool(v.passed), "witness": v.witness, "lhs": v.lhs, "rhs": v.rhs,
            "bounds": _jsonable(v.bounds), "details": _jsonable(v.details)}


def render(v: Verdict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report(v), sort_keys=True, ensure_ascii=False, indent=2)
    lines = [str(v)]
    for k, val in sorted(_jsonable(v.details).items()):
        if isinstance(val, dict):
            lines.append(f"  {k}:")
            for kk, vv in val.items():
                if isinstance(vv, dict):
                    lines.append(f"    {kk}:")
                    lines.extend(f"      {a} -> {b}" for a, b in vv.items())
                else:
                    lines.append(f"    {kk} -> {vv}")
        else:
            lines.append(f"  {k}: {val}")
    return "\n".join(lines)


# -- argument parsing ----------------------------------------------------------------------


def _parser():
    p = argparse.ArgumentParser(prog="linfkit", description="Exact checks for Lie infinity structures, "
                                "actions, O-operators and derived brackets.")
    p.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    p.add_argument("args", nargs="*", help="structure file (for oracle: the check name, then the file)")
    p.add_argument("--max-weight", type=int, default=None, help="weight bound for checks (default 4 or file meta)")
    p.add_argument("--max-arity", type=int, default=None, help="arity bound (default: max weight)")
    p.add_argument("--seed", type=int, default=0, help="seed for the random command")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--structure", help="structure name in the file")
    p.add_argument("--action", help="action name in the file")
    p.add_argument("--candidate", help="candidate name in the file")
    p.add_argument("--candidate2", help="second candidate (deformation t' for deform-check)")
    p.add_argument("--kind", default="lie2-algebra", help="kind for the random command")
    p.add_argument("--dim", type=int, default=None, help="dimension for the random command")
    p.add_argument("--output", help="write the random instance here instead of stdout")
    return p


def _usage_error(parser, msg):
    parser.print_usage(sys.stderr)
    print(f"linfkit: error: {msg}", file=sys.stderr)
    return 2


def run_check(command, path, args, generic=False) -> Verdict:
    from .io import load

    model = load(path)
    if args.max_weight is None:
        args.max_weight = int(model.meta.get("max_weight", 4))
    if args.max_arity is None:
        args.max_arity = args.max_weight
    with configured(max_weight=max(args.max_weight + 1, 2), max_arity=max(args.max_arity + 1, 2)):
        return HANDLERS[command](model, args, generic)


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cmd = args.command
    if cmd not in COMMANDS:
        return _usage_error(parser, f"unknown command {cmd!r}; expected one of {', '.join(COMMANDS)}")
    try:
        if cmd == "random":
            return _random(args)
        if cmd == "oracle":
            if len(args.args) != 2 or args.args[0] not in CHECKS:
                return _usage_error(parser, "usage: oracle CHECK FILE [flags]")
            check, path = args.args
            fast = run_check(check, path, args, generic=False)
            slow = run_check(check, path, args, generic=True)
            same = bool(fast) == bool(slow)
            if same and "brackets" in fast.details:
                same = fast.details["brackets"] == slow.details.get("brackets")
            v = Verdict(f"oracle[{check}]", same, None if same else f"{fast.check} vs {slow.check}",
                        bounds=fast.bounds, details={"fast": report(fast), "generic": report(slow)})
            print(render(v, args.format))
            return 0 if same else 1
        if len(args.args) != 1:
            return _usage_error(parser, f"{cmd} takes exactly one structure file")
        v = run_check(cmd, args.args[0], args)
    except (LinfError, InputError, OSError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"linfkit: input error: {msg}", file=sys.stderr)
        return 2
    print(render(v, args.format))
    return 0 if v else 1


def _random(args) -> int:
    from .generators import random_instance
    from .io import dumps

    if args.args:
        raise InputError("random takes no positional arguments; use --kind, --seed, --dim")
    m = random_instance(args.kind, args.seed, args.dim, args.max_arity, args.max_weight or 4)
    text = dumps(m)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
