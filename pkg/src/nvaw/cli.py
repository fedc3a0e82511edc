"""Command-line driver.

Subcommands:

    nvaw list
    nvaw check <input> --suite S [--window a..b] [--kmax K]
                       [--twist NAME] [--smap NAME] [--json PATH]
    nvaw product <U> <V> --twist NAME -o FILE
    nvaw smash <action-input> <coaction-input> -o FILE
    nvaw extract-twist <input> --u LABELS --v LABELS [--json PATH]
    nvaw extract-smap <input> [--json PATH]

Inputs are registry names (see `nvaw list`) or paths to workbench files.
Exit status: 0 all checks pass, 1 verdict or precondition failures,
2 usage or parse errors.
"""

import argparse
import json
import sys

from .fileformat import ParseError, emit_nva, emit_smap, emit_twist, parse_file
from .nva import (
    CheckReport, DEFAULT_KMAX, adjoint_module, check_D_bracket, check_module,
    check_vacuum, check_weak_associativity,
)
from .series import DEFAULT_RANGE
from . import registry


class UsageError(ValueError):
    pass


def _parse_window(text):
    try:
        lo, hi = text.split("..")
        return (int(lo), int(hi))
    except ValueError:
        raise UsageError(f"bad window {text!r}, expected 'a..b'")


def _split_labels(text):
    from .fileformat import _split_top

    return [t.strip() for t in _split_top(text, ",") if t.strip()]


class Inputs:
    """Resolves names against a parsed file (if any) and the registry."""

    def __init__(self, path_or_name=None, rng=DEFAULT_RANGE):
        self.rng = rng
        self.file = None
        self.name = None
        if path_or_name is None:
            return
        if "/" in path_or_name or path_or_name.endswith(
                (".nva", ".wb", ".txt")):
            with open(path_or_name, encoding="utf-8") as fh:
                self.file = parse_file(fh.read(), rng)
        elif path_or_name in registry.builtin_algebras() \
                or path_or_name in registry.builtin_smash():
            self.name = path_or_name
        else:
            try:
                with open(path_or_name, encoding="utf-8") as fh:
                    self.file = parse_file(fh.read(), rng)
            except FileNotFoundError:
                raise UsageError(
                    f"{path_or_name!r} is neither a registry name nor a file")

    def algebra(self):
        if self.name is not None:
            return registry.builtin_algebras()[self.name]
        algs = self.file.algebras()
        if len(algs) != 1:
            raise UsageError(
                f"input declares {len(algs)} algebras, expected exactly one")
        return next(iter(algs.values()))

    def twist(self, name):
        if self.file is not None and ("twist", name) in self.file.blocks:
            return self.file.twist(name)
        table = registry.builtin_twists()
        if name in table:
            return table[name]
        raise UsageError(f"unknown twist {name!r} "
                         f"(file blocks and registry searched)")

    def smap(self, name, algebra=None):
        if self.file is not None and ("smap", name) in self.file.blocks:
            return self.file.smap(name)
        if name == "identity" and algebra is not None:
            return registry.identity_smap(algebra)
        table = registry.builtin_smaps()
        if name in table:
            return table[name]
        raise UsageError(f"unknown S-map {name!r}")

    def smash_halves(self):
        """(ModuleAlgebraData, ComoduleAlgebraData) from a registry datum or
        a file holding one action and one coaction block."""
        if self.name is not None and self.name in registry.builtin_smash():
            d = registry.builtin_smash()[self.name]
            return d.action, d.coaction
        actions = [n for (k, n) in self.file.blocks if k == "action"]
        coactions = [n for (k, n) in self.file.blocks if k == "coaction"]
        act = self.file.action(actions[0]) if actions else None
        coact = self.file.coaction(coactions[0]) if coactions else None
        return act, coact


# ---------------------------------------------------------------------------
# suites


def _suite_nva(alg, rng, kmax):
    rep = CheckReport(f"{alg.name}: nonlocal-vertex-algebra suite")
    rep.extend(check_vacuum(alg, rng))
    rep.extend(check_weak_associativity(alg, rng, kmax))
    rep.extend(check_D_bracket(alg, rng))
    return rep


def _suite_twist(inputs, alg, args, rng, kmax):
    if not args.twist:
        raise UsageError("--suite twist requires --twist NAME")
    t = inputs.twist(args.twist)
    from .twist import check_twisting_axioms

    return check_twisting_axioms(t, rng, kmax)


def _suite_qva(inputs, alg, args, rng, kmax):
    from .quantum import (
        check_S_locality, check_S_skew, check_qva_axioms, check_qyb_unitarity,
    )

    if not args.smap:
        raise UsageError("--suite qva requires --smap NAME")
    s = inputs.smap(args.smap, alg)
    rep = CheckReport(f"{alg.name}/{s.name}: quantum suite")
    rep.extend(check_qyb_unitarity(s, rng))
    rep.extend(check_S_locality(alg, s, rng, kmax))
    rep.extend(check_S_skew(alg, s, rng))
    rep.extend(check_qva_axioms(alg, s, rng))
    return rep


def _suite_product_props(inputs, alg, args, rng, kmax):
    from .products import (
        build_twisted_tensor, check_embeddings, check_invertible_relations,
        check_product_nva, check_product_properties,
    )
    from .twist import NotInvertibleError, with_inverse

    if not args.twist:
        raise UsageError("--suite product-props requires --twist NAME")
    t = inputs.twist(args.twist)
    p = build_twisted_tensor(t.first, t.second, t, rng)
    rep = CheckReport(f"{p.nva.name}: product suite")
    rep.extend(check_product_nva(p, rng, kmax))
    rep.extend(check_embeddings(p, rng))
    rep.extend(check_product_properties(p, rng))
    try:
        with_inverse(t, rng)
    except NotInvertibleError:
        pass
    else:
        rep.extend(check_invertible_relations(p, rng, kmax))
    return rep


def _suite_smash(inputs, rng, kmax):
    from .smash import SmashDatum, check_smash_datum

    act, coact = inputs.smash_halves()
    if act is None or coact is None:
        raise UsageError("--suite smash needs an action and a coaction")
    datum = SmashDatum(inputs.name or "file", act.bialgebra, act, coact)
    return check_smash_datum(datum, rng, kmax)


def _suite_module(inputs, alg, rng, kmax):
    rep = CheckReport(f"{alg.name}: module suite")
    mods = []
    if inputs.file is not None:
        mods = [inputs.file.module(n)
                for (k, n) in inputs.file.blocks if k == "module"]
    if not mods:
        mods = [adjoint_module(alg)]
    for mod in mods:
        rep.extend(check_module(mod, rng, kmax))
    return rep


# ---------------------------------------------------------------------------
# commands


def cmd_check(args):
    rng = _parse_window(args.window)
    kmax = args.kmax
    inputs = Inputs(args.input, rng)
    if args.suite == "smash":
        rep = _suite_smash(inputs, rng, kmax)
    else:
        alg = inputs.algebra()
        if args.suite == "nva":
            rep = _suite_nva(alg, rng, kmax)
        elif args.suite == "twist":
            rep = _suite_twist(inputs, alg, args, rng, kmax)
        elif args.suite == "qva":
            rep = _suite_qva(inputs, alg, args, rng, kmax)
        elif args.suite == "product-props":
            rep = _suite_product_props(inputs, alg, args, rng, kmax)
        elif args.suite == "module":
            rep = _suite_module(inputs, alg, rng, kmax)
        else:
            raise UsageError(f"unknown suite {args.suite!r}")
    _report(rep, args, rng, suite=args.suite)
    return 0 if rep.ok else 1


def cmd_product(args):
    from .products import PreconditionError, build_twisted_tensor, check_product_nva

    rng = _parse_window(args.window)
    inputs_u = Inputs(args.first, rng)
    inputs_v = Inputs(args.second, rng)
    twist = (inputs_u.twist(args.twist) if args.twist
             else None)
    if twist is None:
        raise UsageError("product requires --twist NAME")
    first, second = inputs_u.algebra(), inputs_v.algebra()
    if twist.first.space != first.space or twist.second.space != second.space:
        raise UsageError(
            f"twist {twist.name} is for ({twist.first.name},{twist.second.name})")
    try:
        p = build_twisted_tensor(first, second, twist, rng)
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 1
    rep = check_product_nva(p, rng, args.kmax)
    _report(rep, args, rng, suite="product")
    if args.output and rep.ok:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(emit_nva(p.nva))
    return 0 if rep.ok else 1


def cmd_smash(args):
    from .products import PreconditionError, check_product_nva
    from .smash import build_smash

    rng = _parse_window(args.window)
    act, _ = Inputs(args.action, rng).smash_halves()
    _, coact = Inputs(args.coaction, rng).smash_halves()
    if act is None or coact is None:
        raise UsageError("need one action block and one coaction block")
    try:
        p = build_smash(act, coact, rng)
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 1
    rep = check_product_nva(p, rng, args.kmax)
    _report(rep, args, rng, suite="smash")
    if args.output and rep.ok:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(emit_nva(p.nva))
    return 0 if rep.ok else 1


def cmd_extract_twist(args):
    from .products import extract_twisting
    from .linalg import UniqueSolution

    rng = _parse_window(args.window)
    host = Inputs(args.input, rng).algebra()
    u_labels = _split_labels(args.u)
    v_labels = _split_labels(args.v)
    u_vac = host.vacuum if host.vacuum in u_labels else u_labels[0]
    v_vac = host.vacuum if host.vacuum in v_labels else v_labels[0]
    res = extract_twisting(host, u_labels, v_labels, rng, args.kmax,
                           u_vacuum=u_vac, v_vacuum=v_vac)
    rep = CheckReport(f"{host.name}: twisting-operator extraction")
    from .nva import Outcome

    rep.add("linear solve", Outcome.EXACT_PASS
            if isinstance(res.solve, UniqueSolution) else Outcome.FAIL,
            type(res.solve).__name__)
    for sub in (res.axioms, res.theta, res.z2):
        if sub is not None:
            rep.extend(sub)
    _report(rep, args, rng, suite="extract-twist")
    if res.twist is not None and args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(emit_twist(res.twist))
    return 0 if res.ok else 1


def cmd_extract_smap(args):
    from .quantum import extract_S
    from .linalg import UniqueSolution
    from .nva import Outcome

    rng = _parse_window(args.window)
    alg = Inputs(args.input, rng).algebra()
    res = extract_S(alg, rng)
    rep = CheckReport(f"{alg.name}: S-map extraction")
    rep.add("columnwise solve", Outcome.EXACT_PASS
            if isinstance(res.solve, UniqueSolution) else Outcome.FAIL,
            type(res.solve).__name__)
    for sub in (res.axioms, res.d_relation, res.z2):
        if sub is not None:
            rep.extend(sub)
    _report(rep, args, rng, suite="extract-smap")
    if res.smap is not None and args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(emit_smap(res.smap))
    return 0 if res.ok else 1


def cmd_list(args):
    print("algebras:  " + " ".join(sorted(registry.builtin_algebras())))
    print("twists:    " + " ".join(sorted(registry.builtin_twists())))
    print("smaps:     " + " ".join(sorted(registry.builtin_smaps())) +
          "  (plus 'identity' for any algebra)")
    print("smash:     " + " ".join(sorted(registry.builtin_smash())))
    return 0


def _report(rep, args, rng, suite):
    print(rep.summary())
    path = getattr(args, "json", None)
    if path:
        payload = [
            {
                "suite": suite,
                "identity": item.name,
                "verdict": item.outcome.name,
                "detail": item.detail,
                "window": list(rng),
            }
            for item in rep.items
        ]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)


# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="nvaw",
        description="exact checks for nonlocal vertex algebras, twisted "
                    "tensor products, S-maps and smash products")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--window", default=f"{DEFAULT_RANGE[0]}..{DEFAULT_RANGE[1]}")
        p.add_argument("--kmax", type=int, default=DEFAULT_KMAX)
        p.add_argument("--json", default=None)

    p = sub.add_parser("check", help="run a check suite on an input")
    p.add_argument("input")
    p.add_argument("--suite", required=True,
                   choices=["nva", "twist", "qva", "smash", "product-props",
                            "module"])
    p.add_argument("--twist", default=None)
    p.add_argument("--smap", default=None)
    common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("product", help="build a twisted tensor product")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--twist", required=True)
    p.add_argument("-o", "--output", default=None)
    common(p)
    p.set_defaults(fn=cmd_product)

    p = sub.add_parser("smash", help="build a smash product")
    p.add_argument("action")
    p.add_argument("coaction")
    p.add_argument("-o", "--output", default=None)
    common(p)
    p.set_defaults(fn=cmd_smash)

    p = sub.add_parser("extract-twist",
                       help="solve for the twisting operator of a product")
    p.add_argument("input")
    p.add_argument("--u", required=True, help="comma-joined factor labels")
    p.add_argument("--v", required=True, help="comma-joined factor labels")
    p.add_argument("-o", "--output", default=None)
    common(p)
    p.set_defaults(fn=cmd_extract_twist)

    p = sub.add_parser("extract-smap", help="solve for the S-map")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    common(p)
    p.set_defaults(fn=cmd_extract_smap)

    p = sub.add_parser("list", help="list registry instances")
    p.set_defaults(fn=cmd_list)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
