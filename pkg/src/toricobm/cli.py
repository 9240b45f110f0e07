"""Command-line front end.

Exit codes: 0 success, 1 domain error (non-smooth input where a smooth fan
is required, unsupported descent, ...), 2 input or parse error. Errors print
one line ``error: <kind>: <reason>`` on stderr.
"""

import argparse
import ast
import json
import os
import sys

from .calculus import (
    NotSmoothError,
    calculus,
    check_gluing,
    equivariant_presentation,
    nonequivariant_presentation,
    ray_var,
    restrict_to_orbit,
    sr_ring,
)
from .coeff import CoefficientError, theory_fgl
from .descent import UnsupportedDescent, singular_presentation
from .duality import check_kunneth, dual_module
from .fan import (
    FanError,
    FanFormatError,
    classify_cone_map,
    is_complete,
    is_smooth,
    parse_fan,
    resolve,
)
from .poly import Poly
from .presentation import PresentationError, label_name, simplify

SUBCOMMANDS = ["present", "sr-ring", "resolve", "descent", "dual", "kunneth-check", "orbit-restrict"]


class InputError(Exception):
    pass


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theory", choices=["chow", "ktheory", "cobordism"], default="chow")
    common.add_argument("--truncation", type=int, default=None,
                        help="coefficient truncation D (default: fan dimension)")
    common.add_argument("--equivariant", action="store_true")
    common.add_argument("--beta", default="1",
                        help="K-theory parameter: an integer, or 'b' for the graded symbol")
    common.add_argument("--output", choices=["json", "text"], default="text")
    common.add_argument("--explain", action="store_true")
    common.add_argument("--allow-noncomplete-dual", action="store_true")

    parser = argparse.ArgumentParser(prog="toricobm", description="Oriented Borel-Moore homology of toric varieties.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("fan")
        if name == "kunneth-check":
            sp.add_argument("fan2")
        if name == "orbit-restrict":
            sp.add_argument("--class", dest="cls", required=True,
                            help="class in ray variables, e.g. 'r0^2 + 2*r1' or ray names")
            sp.add_argument("--cone", default=None,
                            help="comma-separated ray indices (default: every cone)")
    return parser


def read_fan(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return parse_fan(text)


def make_fgl(args, fan):
    d = fan.dim if args.truncation is None else args.truncation
    if d < 0:
        raise InputError("truncation must be nonnegative")
    beta = 1
    if args.theory == "ktheory":
        if args.beta == "b":
            beta = None
        else:
            try:
                beta = int(args.beta)
            except ValueError:
                raise InputError(f"bad --beta {args.beta!r}") from None
    return theory_fgl(args.theory, d, beta)


def seed_from_env():
    raw = os.environ.get("TORIC_OBM_SEED")
    if raw in (None, ""):
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"TORIC_OBM_SEED must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# class expressions


def parse_class(text, fan):
    """Integer polynomial in ray variables (``r0`` or the fan's ray names) and ``a<i><j>``."""
    names = {n: ray_var(i) for i, n in enumerate(fan.names or [])}
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError:
        raise InputError(f"cannot parse class {text!r}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Poly.const(node.value)
        if isinstance(node, ast.Name):
            name = names.get(node.id, node.id)
            if name.startswith("r") and name[1:].isdigit():
                if int(name[1:]) >= len(fan.rays):
                    raise InputError(f"no ray {name}")
                return Poly.var(name)
            if name.startswith("a") and name[1:].replace("_", "").isdigit():
                return Poly.var(name)
            raise InputError(f"unknown symbol {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise InputError("exponents must be integer literals")
                return ev(node.left).pow(node.right.value)
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
        raise InputError(f"unsupported expression in class {text!r}")

    return ev(tree)


def parse_cone(text):
    if text is None:
        return None
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(sorted(int(x) for x in text.split(",")))
    except ValueError:
        raise InputError(f"bad cone {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands


def _require_smooth(fan):
    if not is_smooth(fan)[0]:
        raise NotSmoothError("fan is not smooth; use 'descent' for singular fans")


def cmd_present(args, fan):
    _require_smooth(fan)
    fgl = make_fgl(args, fan)
    if args.equivariant:
        raw = equivariant_presentation(fan, fgl)
    else:
        raw = nonequivariant_presentation(fan, fgl)
    p = simplify(raw)
    report = {"presentation": p.to_dict(), "ranks": _ranks(p)}
    text = [p.to_text(), "generator ranks: " + _ranks_text(p)]
    if args.explain:
        report["unsimplified"] = raw.to_dict()
        text += ["", "before simplification:", raw.to_text()]
    return report, "\n".join(text)


def _ranks(p):
    return {str(d): r for d, r in p.generator_ranks().items()}


def _ranks_text(p):
    return ", ".join(f"degree {d}: {r}" for d, r in p.generator_ranks().items())


def cmd_sr_ring(args, fan):
    _require_smooth(fan)
    fgl = make_fgl(args, fan)
    ring = sr_ring(fan, fgl, args.equivariant)
    d = ring.to_dict()
    text = ["variables: " + ", ".join(d["variables"]),
            "ideal: " + (", ".join("*".join(m) for m in d["ideal"]) or "(none)")]
    if ring.linear_relations:
        text.append("linear relations:")
        text += [f"  {r} = 0" for r in ring.linear_relations]
    return d, "\n".join(text)


def cmd_resolve(args, fan):
    resolved, smap = resolve(fan, seed_from_env())
    report = {"fan": resolved.to_dict(), "smooth_input": resolved == fan}
    added = [list(r) for r in resolved.rays if tuple(r) not in {tuple(x) for x in fan.rays}]
    report["added_rays"] = added
    text = [f"rays added: {added if added else 'none'}", "resolved fan: " + resolved.to_json()]
    if args.explain:
        classes = []
        for c in resolved.cones:
            cls = classify_cone_map(smap, c)
            classes.append({"cone": list(c), **cls.to_dict()})
            text.append(f"  {list(c)} -> {list(cls.image)}: {cls.kind}"
                        + (f" fiber {list(cls.fiber)}" if cls.kind == "fibration" else ""))
        report["map"] = smap.to_dict()
        report["classes"] = classes
    return report, "\n".join(text)


def cmd_descent(args, fan):
    if args.equivariant:
        raise PresentationError("equivariant descent is not supported")
    fgl = make_fgl(args, fan)
    p, plan = singular_presentation(fan, fgl, seed_from_env(), with_plan=True)
    report = {"presentation": p.to_dict(), "ranks": _ranks(p)}
    text = [p.to_text(), "generator ranks: " + _ranks_text(p)]
    if args.explain:
        report["plan"] = plan.to_dict() if plan else None
        if plan:
            text += ["", "representatives:"]
            for t, s in sorted(plan.representative.items()):
                text.append(f"  {label_name(t, fan.names)} <- {list(s)}")
            text.append("descent relations:")
            text += ["  " + r["text"] for r in plan.to_dict()["extra_relations"]] or ["  (none)"]
        else:
            text.append("fan is smooth: no descent needed")
    return report, "\n".join(text)


def cmd_dual(args, fan):
    fgl = make_fgl(args, fan)
    p = singular_presentation(fan, fgl, seed_from_env())
    dm = dual_module(p, complete=is_complete(fan), allow_noncomplete=args.allow_noncomplete_dual)
    report = dm.to_dict()
    text = [f"degree {d}: free rank {x.free_rank}" + (f", torsion {x.torsion}" if x.torsion else "")
            for d, x in sorted(dm.degrees.items())]
    text += ["caveat: " + c for c in dm.caveats]
    return report, "\n".join(text)


def cmd_kunneth(args, fan, fan2):
    d = fan.dim + fan2.dim if args.truncation is None else args.truncation
    args.truncation = d
    fgl = make_fgl(args, fan)
    ok, rep = check_kunneth(fan, fan2, fgl, seed_from_env())
    report = {"isomorphic": ok, "degrees": {str(k): v for k, v in rep.items()}}
    text = [f"kunneth map is an isomorphism: {'yes' if ok else 'no'}"]
    for k, v in rep.items():
        text.append(f"  degree {k}: tensor {v['tensor']}  product {v['product']}")
    return report, "\n".join(text)


def cmd_orbit_restrict(args, fan):
    _require_smooth(fan)
    c = parse_class(args.cls, fan)
    fgl = make_fgl(args, fan)
    c = calculus(fan, fgl).sr_reduce(c)
    cone = parse_cone(args.cone)
    if cone is not None and cone not in fan.cone_set:
        raise FanError(f"{list(cone)} is not a cone of the fan")
    cones = [cone] if cone is not None else list(fan.cones)
    family = {s: restrict_to_orbit(fan, c, s) for s in cones}
    out = []
    text = [f"class: {c}"]
    for s, e in family.items():
        out.append({"cone": list(s), "value": e.value.to_json(), "killed_forms": [list(m) for m in e.killed]})
        text.append(f"  cone {list(s)}: {e.value}")
    report = {"class": c.to_json(), "restrictions": out}
    if cone is None:
        ok = check_gluing(fan, family)
        report["glues"] = ok
        text.append(f"restrictions glue: {'yes' if ok else 'no'}")
    return report, "\n".join(text)


def run(args):
    fan = read_fan(args.fan)
    if args.command == "present":
        return cmd_present(args, fan)
    if args.command == "sr-ring":
        return cmd_sr_ring(args, fan)
    if args.command == "resolve":
        return cmd_resolve(args, fan)
    if args.command == "descent":
        return cmd_descent(args, fan)
    if args.command == "dual":
        return cmd_dual(args, fan)
    if args.command == "kunneth-check":
        return cmd_kunneth(args, fan, read_fan(args.fan2))
    if args.command == "orbit-restrict":
        return cmd_orbit_restrict(args, fan)
    raise InputError(f"unknown command {args.command}")


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        report, text = run(args)
    except (InputError, FanFormatError) as e:
        print(f"error: input: {e}", file=stderr)
        return 2
    except UnsupportedDescent as e:
        print(f"error: unsupported: {e}", file=stderr)
        return 1
    except NotSmoothError as e:
        print(f"error: not-smooth: {e}", file=stderr)
        return 1
    except (FanError, PresentationError, CoefficientError) as e:
        print(f"error: domain: {e}", file=stderr)
        return 1
    if args.output == "json":
        stdout.write(json.dumps(report, sort_keys=True, indent=1) + "\n")
    else:
        stdout.write(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
