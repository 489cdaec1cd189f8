"""Command-line front end.

Exit status: 0 on success or a passing check, 1 when a check fails or a
counterexample is found, 2 on usage or input errors, 3 when a check is
inconclusive because a search budget ran out.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import generate as gen
from . import parallel as par
from . import props
from . import reduction as red
from . import systemf as sf
from . import terms as ut

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

UNTYPED_RELATIONS = {"beta": red.BETA, "eta": red.ETA, "betaeta": red.BETAETA, "par": par.PAR}
TYPED_RELATIONS = ("typed-beta", "typed-par", "typed-eta-ext")
CALCULUS_FOR = {"typed-beta": "systemf", "typed-par": "systemf", "typed-eta-ext": "eta-ext"}


class UsageError(Exception):
    pass


class Session:
    """Parsed options plus the helpers every command needs."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.names = [n.strip() for n in args.ctx.split(",") if n.strip()] if args.ctx else []
        self.tctx = sf.parse_tctx(args.tctx) if args.tctx else None
        self.eta_rules = tuple(r.strip() for r in args.eta_rules.split(",")) if args.eta_rules else sf.ETA_RULES
        if len(set(self.names)) != len(self.names):
            raise UsageError("--ctx names must be distinct")

    @property
    def typed(self) -> bool:
        rel = self.args.rel or ""
        return self.tctx is not None or any(r in TYPED_RELATIONS for r in rel.split(","))

    @property
    def ctx(self) -> sf.TyCtx:
        return self.tctx or ()

    def term(self, text: str):
        if self.typed:
            t = sf.parse_tterm(text, self.ctx)
            sf.typecheck(self.ctx, t)
            return t
        return ut.parse(text, self.names)

    def show(self, t) -> str:
        return sf.pretty_tterm(t, self.ctx) if self.typed else ut.pretty(t, self.names)

    def encode(self, t) -> dict:
        return sf.tterm_to_json(t) if self.typed else ut.to_json(t)

    def relation(self, spec: str) -> red.Relation:
        parts = spec.split("+")
        rels = [self._one_relation(p.strip()) for p in parts]
        out = rels[0]
        for r in rels[1:]:
            out = red.union_rel(out, r)
        return out

    def _one_relation(self, name: str) -> red.Relation:
        if name in UNTYPED_RELATIONS:
            if self.typed:
                raise UsageError(f"relation {name!r} is untyped but a typed context was given")
            return UNTYPED_RELATIONS[name]
        if name in TYPED_RELATIONS:
            return sf.typed_relation(name, self.ctx, self.eta_rules)
        raise UsageError(f"unknown relation {name!r}")

    def relations(self) -> list[red.Relation]:
        if not self.args.rel:
            raise UsageError("--rel is required")
        return [self.relation(r) for r in self.args.rel.split(",")]

    def corpus(self) -> gen.CorpusSpec:
        a = self.args
        if a.height is None:
            raise UsageError("--height is required")
        if not self.typed:
            return gen.CorpusSpec(a.height, len(self.names))
        calculus = a.calculus
        if calculus is None:
            first = (a.rel or "typed-beta").split(",")[0].split("+")[0]
            calculus = CALCULUS_FOR.get(first, "systemf")
        target = sf.parse_type(a.target, self.ctx) if a.target else None
        return gen.CorpusSpec(a.height, calculus=calculus, context=self.ctx,
                              type_height=a.type_height, target_type=target)

    def emit(self, payload) -> None:
        print(json.dumps(payload, ensure_ascii=False))


def _terms_out(s: Session, ts) -> None:
    if s.args.json:
        s.emit([s.encode(t) for t in ts])
    else:
        for t in ts:
            print(s.show(t))


def cmd_parse(s: Session) -> int:
    t = s.term(s.args.term)
    s.emit({"term": s.encode(t), "pretty": s.show(t)})
    return EXIT_OK


def cmd_reducts(s: Session) -> int:
    rel, = s.relations()
    _terms_out(s, rel(s.term(s.args.term)))
    return EXIT_OK


def cmd_normalize(s: Session) -> int:
    rel, = s.relations()
    result = red.normalize(s.term(s.args.term), rel, s.args.fuel)
    if isinstance(result, red.NormalForm):
        if s.args.json:
            s.emit({"normal_form": s.encode(result.term), "steps": result.steps})
        else:
            print(s.show(result.term))
        return EXIT_OK
    if s.args.json:
        s.emit({"fuel_exhausted": s.encode(result.last)})
    else:
        print(f"fuel exhausted at: {s.show(result.last)}")
    return EXIT_FAIL


def cmd_develop(s: Session) -> int:
    t = s.term(s.args.term)
    out = sf.typed_complete_dev(s.ctx, t) if s.typed else par.complete_dev(t)
    if s.args.json:
        s.emit(s.encode(out))
    else:
        print(s.show(out))
    return EXIT_OK


def cmd_par_reducts(s: Session) -> int:
    t = s.term(s.args.term)
    out = sf.typed_par_reducts(s.ctx, t) if s.typed else par.par_reducts(t)
    s.emit([s.encode(u) for u in out])
    return EXIT_OK


def cmd_join(s: Session) -> int:
    rel, = s.relations()
    result = red.joinable(s.term(s.args.left), s.term(s.args.right), rel, s.args.depth, s.args.nodes)
    if isinstance(result, red.Join):
        s.emit(red.join_to_json(result, s.encode))
        return EXIT_OK
    s.emit({"outcome": "not-found-within-budget", "closures_complete": result.closures_complete})
    return EXIT_FAIL


def cmd_check(s: Session) -> int:
    a = s.args
    rels = s.relations()
    corpus = s.corpus()
    budget = dict(depth_budget=a.depth, node_budget=a.nodes)
    two = a.property in ("strong-comm", "comm")
    if two and len(rels) != 2:
        raise UsageError(f"{a.property} needs two relations: --rel R,S")
    if not two and len(rels) != 1:
        raise UsageError(f"{a.property} takes one relation")
    if a.property == "diamond":
        report = props.check_diamond(rels[0], corpus)
    elif a.property == "strong-comm":
        report = props.check_strong_commutation(rels[0], rels[1], corpus, **budget)
    elif a.property == "comm":
        report = props.check_commutation(rels[0], rels[1], corpus, **budget)
    elif a.property == "confluence":
        report = props.check_confluence(rels[0], corpus, **budget)
    else:
        report = props.check_strip(rels[0], corpus, **budget)
    payload = report.to_json(s.encode)
    if report.counterexample is not None:
        cx = report.counterexample
        payload["counterexample"]["pretty"] = {k: s.show(getattr(cx, k)) for k in ("peak", "left", "right")}
    s.emit(payload)
    return {props.PASS: EXIT_OK, props.FAIL: EXIT_FAIL}.get(report.outcome, EXIT_INCONCLUSIVE)


def cmd_cex(s: Session) -> int:
    rel, = s.relations()
    corpus = s.corpus()
    cx = gen.find_diamond_cex(rel, corpus)
    if cx is None:
        s.emit({"outcome": "none-found", "relation": rel.name, "height_bound": corpus.height_bound})
        return EXIT_OK
    payload = {
        "peak": s.encode(cx.peak),
        "left": s.encode(cx.left),
        "right": s.encode(cx.right),
        "relation": rel.name,
        "height_bound": corpus.height_bound,
        "reason": cx.reason,
        "pretty": {k: s.show(getattr(cx, k)) for k in ("peak", "left", "right")},
    }
    s.emit(payload)
    return EXIT_FAIL


def cmd_typecheck(s: Session) -> int:
    t = sf.parse_tterm(s.args.term, s.ctx)
    try:
        ty = sf.typecheck(s.ctx, t)
    except sf.TypeCheckError as e:
        print(f"type error at {list(e.location)}: {e}", file=sys.stderr)
        return EXIT_FAIL
    if s.args.json:
        s.emit(sf.type_to_json(ty))
    else:
        print(sf.pretty_type(ty, s.ctx))
    return EXIT_OK


def cmd_gen(s: Session) -> int:
    spec = s.corpus()
    stream = gen.corpus_terms(spec)
    if s.args.count:
        print(sum(1 for _ in stream))
        return EXIT_OK
    for t in stream:
        print(json.dumps(s.encode(t)) if s.args.json else s.show(t))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rel", help="beta | eta | betaeta | par | typed-beta | typed-par | typed-eta-ext; "
                                      "R,S for two relations, R+S for a union")
    common.add_argument("--height", type=int, help="corpus height bound")
    common.add_argument("--depth", type=int, default=props.DEFAULT_DEPTH, help="depth budget for closures")
    common.add_argument("--nodes", type=int, default=props.DEFAULT_NODES, help="node budget for closures")
    common.add_argument("--fuel", type=int, default=100, help="step limit for normalize")
    common.add_argument("--ctx", help='free variable names, e.g. "x,y" (x is index 0)')
    common.add_argument("--tctx", help='typing context, e.g. "b, p:Unit*Unit" (outermost first)')
    common.add_argument("--calculus", choices=gen.CALCULI, help="typed corpus calculus")
    common.add_argument("--type-height", type=int, default=1, help="height bound for generated annotations")
    common.add_argument("--target", help="only generate terms of this type")
    common.add_argument("--eta-rules", help="subset of fun,sp,unit for typed-eta-ext")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, help="reserved; generation is exhaustive and ignores it")

    p = argparse.ArgumentParser(prog="confluence-lab", description="Bounded confluence checking for lambda calculi.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, positional in [
        ("parse", cmd_parse, ["term"]),
        ("reducts", cmd_reducts, ["term"]),
        ("normalize", cmd_normalize, ["term"]),
        ("develop", cmd_develop, ["term"]),
        ("par-reducts", cmd_par_reducts, ["term"]),
        ("join", cmd_join, ["left", "right"]),
        ("typecheck", cmd_typecheck, ["term"]),
        ("gen", cmd_gen, []),
    ]:
        sp = sub.add_parser(name, parents=[common])
        for arg in positional:
            sp.add_argument(arg)
        sp.set_defaults(fn=fn)
    sp = sub.add_parser("check", parents=[common])
    sp.add_argument("property", choices=["diamond", "strong-comm", "comm", "confluence", "strip"])
    sp.set_defaults(fn=cmd_check)
    sp = sub.add_parser("cex", parents=[common])
    sp.add_argument("property", choices=["diamond"])
    sp.set_defaults(fn=cmd_cex)
    sub.choices["gen"].add_argument("--count", action="store_true", help="print only the number of terms")
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.depth <= 0 or args.nodes <= 0 or args.fuel <= 0:
        print("budgets must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.fn(Session(args))
    except (UsageError, ValueError, sf.TypeCheckError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
