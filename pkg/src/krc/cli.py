"""The ``krc`` command line."""
from __future__ import annotations

import argparse
import random
import re
import sys
from pathlib import Path

from krc import bounds, expansions, inverse, lattices, morphisms, pointlikes, structure
from krc.core import (
    DEFAULT_ELEMENT_BUDGET,
    AlgebraError,
    BudgetExceeded,
    KRCError,
    ParseError,
    TransformationSemigroup,
    builtin,
    is_aperiodic,
    is_inverse_semigroup,
    parse_semigroup,
    parse_tgen,
)
from krc.products import divides
from krc.report import (
    SCHEMA_ID,
    classification_section,
    green_section,
    input_section,
    one_based,
    render,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3

_POINT = re.compile(r"\((\d+)\s*,\s*(\d+)\)")


class Budgets:
    def __init__(self, args):
        self.elements = args.budget_elements
        self.states = args.budget_states
        self.subsets = args.budget_subsets
        self.gen_cap = args.gen_cap
        self.seed = args.seed


def load_input(spec, budget=DEFAULT_ELEMENT_BUDGET):
    """Return (S, ts or None) from ``builtin:NAME``, a .tgen file or a .smt file."""
    if spec.startswith("builtin:"):
        ts = builtin(spec[len("builtin:"):], budget)
        return ts.abstract, ts
    path = Path(spec)
    try:
        text = path.read_text()
    except OSError as exc:
        raise KRCError(f"cannot read {spec}: {exc.strerror}") from None
    if path.suffix == ".tgen":
        ts = parse_tgen(text, budget)
        return ts.abstract, ts
    return parse_semigroup(text), None


# ---------------------------------------------------------------------------
# commands; each fills ``report`` and returns True when a budget ran out


def cmd_analyze(args, S, ts, report, b):
    report["classification"] = classification_section(S)
    report["green"] = green_section(S)
    out_of_budget = cmd_bounds(args, S, ts, report, b)
    cmd_typeii(args, S, ts, report, b)
    cmd_lprime(args, S, ts, report, b)
    report["transitivity"] = structure.classify_transitivity(S).as_dict()
    if is_inverse_semigroup(S):
        cmd_inverse(args, S, ts, report, b)
    return out_of_budget


def cmd_bounds(args, S, ts, report, b):
    iv = bounds.complexity_interval(S, ts, budget=b.subsets, gen_cap=b.gen_cap)
    report["bounds"] = iv.as_dict()
    return iv.truncated and not iv.exact


def cmd_green(args, S, ts, report, b):
    report["green"] = green_section(S)


def cmd_typeii(args, S, ts, report, b):
    sii = bounds.type_II(S)
    report["type_ii"] = {"elements": one_based(sii),
                         "aperiodic": is_aperiodic(S.restrict(sorted(sii))[0])}


def cmd_lprime(args, S, ts, report, b):
    T, sigma = morphisms.lprime_image(S)
    report["lprime"] = {"size": T.n, "map": [y + 1 for y in sigma.map],
                        "aperiodic": is_aperiodic(T),
                        "kind": morphisms.classify_morphism(sigma).as_dict()}


def cmd_gm(args, S, ts, report, b):
    tr = structure.classify_transitivity(S)
    report["transitivity"] = tr.as_dict()
    if tr.j_class is not None:
        rc = structure.rees_coordinates(S, tr.j_class)
        report["rees"] = {
            "A": len(rc.A), "B": len(rc.B), "group_order": rc.G.n,
            "C": [[None if c is None else c + 1 for c in row] for row in rc.C],
            "coordinates": {str(x + 1): [a + 1, g + 1, bb + 1]
                            for x, (a, g, bb) in sorted(rc.coords.items())},
        }
    report["gm_images"] = [
        {"j_class": one_based(S.green.j_members[img.j_class]), "size": img.quotient.n,
         "group_order": img.group_order,
         "is_gm": structure.classify_transitivity(img.quotient).is_gm}
        for img in structure.gm_images(S)]
    if args.dot and tr.j_class is not None:
        Path(args.dot).write_text(structure.eggbox_dot(S, tr.j_class))


def cmd_rlm(args, S, ts, report, b):
    gm = structure.gm_structure(S)
    r = structure.rlm(gm)
    tau = structure.tilson_congruence(gm.base)
    report["rlm"] = {"letters": r.ts.q, "size": r.ts.abstract.n,
                     "map": [y + 1 for y in r.morphism.map],
                     "maps": [[y + 1 if y >= 0 else 0 for y in m] for m in r.ts.elements],
                     "tilson_classes": [[q + 1 for q in blk] for blk in tau.blocks()]}
    if args.dot:
        Path(args.dot).write_text(structure.gb_dot(gm))


def cmd_theta(args, S, ts, report, b):
    greedy = morphisms.theta_upper_greedy(S)
    report["theta"] = {"greedy": greedy}
    try:
        th = morphisms.theta_exact(S)
    except BudgetExceeded as exc:
        report["theta"].update({"value": None, "exact": False})
        report["budget"] = {"what": exc.what, "limit": exc.limit}
        return True
    report["theta"].update(th.as_dict())


def cmd_pointlikes(args, S, ts, report, b):
    order = None
    if b.seed is not None:
        order = list(range(S.n))
        random.Random(b.seed).shuffle(order)
    fam = pointlikes.henckell_closure(S, cap=b.subsets, order=order)
    g = S.green
    report["pointlikes"] = {
        **fam.as_dict(),
        "subgroups": [pointlikes.max_pointlike_subgroup(S, J, fam).as_dict()
                      for J in range(g.n_j) if g.regular_j[J]],
    }


def cmd_expand(args, S, ts, report, b):
    op = args.op or "rkr"
    if op == "rkr":
        e = expansions.rkr(S, budget=b.states)
    elif op == "lkr":
        e = expansions.lkr(S, budget=b.states)
    elif op == "mc":
        e, _ = expansions.mc_rkr(S, budget=b.elements, cap=b.states)
    elif op == "gst":
        e = expansions.gst(S, budget=b.elements, cap=b.states)
    else:
        raise KRCError(f"unknown expansion {op!r}")
    audit = e.audit()
    report["expansion"] = {"op": op, **e.as_dict()}
    if e.stages:
        report["expansion"]["stages"] = e.stages
    if e.automaton is not None:
        report["expansion"]["automaton_vertices"] = e.automaton.n_vertices
        report["expansion"]["unique_simple_path"] = (
            expansions.has_unique_simple_path(e.automaton) if op == "mc" else None)
    if args.dot:
        g = e.automaton if e.automaton is not None else expansions.right_cayley(e.semigroup)
        Path(args.dot).write_text(g.to_dot(op))
    print(f"surjection audit: {'ok' if audit else 'FAILED'} "
          f"({e.semigroup.n} -> {S.n})", file=sys.stderr)


def _parse_spc(G, nb, text):
    """'b=g,b=g|b=g' with 1-based letters and group elements."""
    blocks = []
    for part in text.split("|"):
        part = part.strip()
        if not part:
            continue
        blk = {}
        for item in part.split(","):
            letter, g = item.split("=")
            blk[int(letter) - 1] = int(g) - 1
        blocks.append(blk)
    return lattices.make_spc(G, nb, blocks)


def _parse_sp(ng, nb, text):
    """'(g,b) (g,b)|(g,b)' with 1-based coordinates."""
    blocks = []
    for part in text.split("|"):
        pts = [(int(b_) - 1) * ng + int(g) - 1 for g, b_ in _POINT.findall(part)]
        blocks.append(pts)
    return lattices.SetPartitionElement.make(ng, nb, blocks)


def cmd_lattice(args, S, ts, report, b):
    from krc.core import is_group

    if not is_group(S):
        raise AlgebraError("lattice commands need a group as input")
    op = args.op or "crosssection"
    nb = args.letters
    if op == "crosssection":
        a = _parse_sp(S.n, nb, args.x or "")
        report["lattice"] = {"op": op, "element": str(a),
                             "cross_section": lattices.is_cross_section(a),
                             "invariant": lattices.is_invariant(S, a)}
        return
    x, y = _parse_spc(S, nb, args.x or ""), _parse_spc(S, nb, args.y or "")
    if op == "join":
        r = lattices.spc_join(x, y)
        report["lattice"] = {"op": op, "result": lattices.spc_as_dict(r), "text": str(r)}
    elif op == "meet":
        r = lattices.spc_meet(x, y)
        report["lattice"] = {"op": op, "result": lattices.spc_as_dict(r), "text": str(r)}
    elif op == "leq":
        report["lattice"] = {"op": op, "result": lattices.spc_leq(x, y)}
    else:
        raise KRCError(f"unknown lattice op {op!r}")


def cmd_inverse(args, S, ts, report, b):
    G, _ = inverse.max_group_image(S)
    eu = inverse.e_unitary(S)
    F, _ = inverse.fundamental_image(S)
    mc = inverse.mcalister_reilly_components(S, verify=args.verify_mcre)
    report["inverse"] = {"group_image_order": G.n, "e_unitary": eu.idempotent_pure,
                         "group_image_aperiodic": eu.aperiodic,
                         "fundamental_size": F.n, "fundamental": inverse.is_fundamental(S),
                         "mcalister_reilly": mc.as_dict()}


def cmd_divide(args, S, ts, report, b):
    if not args.by:
        raise KRCError("divide needs --by TARGET")
    T, _ = load_input(args.by, b.elements)
    res = divides(S, T, budget=args.search_budget)
    report["division"] = {"status": res.status, "target_size": T.n, "explored": res.explored,
                          "witness": res.witness.as_dict() if res.witness else None}
    return res.status == "unknown"


COMMANDS = {
    "analyze": cmd_analyze, "bounds": cmd_bounds, "green": cmd_green, "typeii": cmd_typeii,
    "lprime": cmd_lprime, "gm": cmd_gm, "rlm": cmd_rlm, "theta": cmd_theta,
    "pointlikes": cmd_pointlikes, "expand": cmd_expand, "lattice": cmd_lattice,
    "inverse": cmd_inverse, "divide": cmd_divide,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--budget-elements", type=int, default=DEFAULT_ELEMENT_BUDGET,
                        help="cap on generated semigroup sizes")
    common.add_argument("--budget-states", type=int, default=expansions.MC_VERTEX_CAP,
                        help="cap on automaton states in expansions")
    common.add_argument("--budget-subsets", type=int, default=bounds.SL_BUDGET,
                        help="cap on subsets examined (Sl candidates, pointlike sets)")
    common.add_argument("--gen-cap", type=int, default=bounds.GEN_CAP,
                        help="max generators of Sl candidate subsemigroups")
    common.add_argument("--seed", type=int, default=None,
                        help="fix the order of any randomized search")
    parser = argparse.ArgumentParser(prog="krc", description="Krohn-Rhodes complexity toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input", help="a .smt or .tgen file, or builtin:NAME (T3, SIS2, Z2, ...)")
        if name in ("gm", "rlm", "expand"):
            p.add_argument("--dot", help="write a DOT picture to this file")
        if name == "expand":
            p.add_argument("--op", choices=["rkr", "lkr", "mc", "gst"], default="rkr")
        if name == "lattice":
            p.add_argument("--op", choices=["join", "meet", "leq", "crosssection"],
                           default="crosssection")
            p.add_argument("--letters", type=int, default=2, help="size of B")
            p.add_argument("--x", help="SPC as 'b=g,b=g|b=g' or SP element as '(g,b) (g,b)|...'")
            p.add_argument("--y", help="second SPC")
        if name in ("inverse", "analyze"):
            p.add_argument("--verify-mcre", action="store_true",
                           help="check the McAlister-Reilly division with the oracle")
        if name == "divide":
            p.add_argument("--by", help="the candidate divisor target")
            p.add_argument("--search-budget", type=int, default=2_000_000)
    return parser


def _error_report(command, kind, exc):
    err = {"kind": kind, "message": str(exc)}
    if isinstance(exc, ParseError):
        err["line"], err["column"] = exc.line, exc.column
    if isinstance(exc, AlgebraError) and exc.witness is not None:
        w = exc.witness
        err["witness"] = [x + 1 for x in w] if isinstance(w, (tuple, list)) else w
    return {"schema": SCHEMA_ID, "command": command, "status": "error", "error": err}


def run(argv=None):
    """Run one invocation; returns (exit code, rendered report)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    b = Budgets(args)
    report = {"schema": SCHEMA_ID, "command": args.command, "status": "ok"}
    code = EXIT_OK
    try:
        S, ts = load_input(args.input, b.elements)
        report["input"] = input_section(args.input, S, ts)
        if args.seed is not None:
            report["input"]["seed"] = args.seed
        if COMMANDS[args.command](args, S, ts, report, b):
            report["status"] = "unknown"
            code = EXIT_BUDGET
    except BudgetExceeded as exc:
        report["status"] = "unknown"
        report["budget"] = {"what": exc.what, "limit": exc.limit}
        code = EXIT_BUDGET
    except ParseError as exc:
        report, code = _error_report(args.command, "parse", exc), EXIT_INPUT
    except AlgebraError as exc:
        report, code = _error_report(args.command, "algebra", exc), EXIT_INPUT
    except (KRCError, ValueError) as exc:
        report, code = _error_report(args.command, "input", exc), EXIT_INPUT
    text = render(report, args.format)
    if args.output and code != EXIT_INPUT:
        Path(args.output).write_text(text)
        return code, ""
    return code, text


def main(argv=None):
    code, text = run(argv)
    stream = sys.stdout if code != EXIT_INPUT else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
