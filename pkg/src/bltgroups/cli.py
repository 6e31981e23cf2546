"""Command line interface.

Exit codes: 0 when a verdict was computed (including negative ones), 1 on
usage or parse errors, 2 when an exhaustive routine's guard is exceeded,
3 when two independent routes disagree (an internal error). All JSON output uses sorted keys so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .altspace import AltSpace, build_tuple, independence_number_via_isotropic, max_rank, space_iso
from .baer import BaerGroup, group_iso, is_group_homomorphism
from .errors import BadPrime, GraphsIsomorphic, ParseError, TooLarge
from .fp import PrimeField
from .graph import Graph, graph_iso, independence_number, matching_number
from .prooflab import prop_key_oracle
from .pullback import PartialInjection, blt_morphism, max_pullback_hom, pullback_violation

log = logging.getLogger("bltgroups")

EXIT_OK, EXIT_USAGE, EXIT_GUARD, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _field(p: int) -> PrimeField:
    try:
        return PrimeField(p)
    except BadPrime as exc:
        raise UsageError(str(exc)) from None


def _load_graph(path: str) -> Graph:
    try:
        return Graph.load(path)
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def _dump(obj, out) -> None:
    out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def cmd_build(args, out):
    G = _load_graph(args.graph)
    F = _field(args.p)
    t = build_tuple(G, F)
    Gp = BaerGroup(t)
    doc = t.to_json()
    doc["group"] = {
        "order": Gp.order,
        "order_log_p": G.n + G.m,
        "abelian": Gp.is_abelian(),
        "nilpotency_class": 0 if Gp.order == 1 else (1 if Gp.is_abelian() else 2),
        "exponent": 1 if Gp.order == 1 else F.p,
    }
    _dump(doc, out)


def _graph_level(G, H):
    s = graph_iso(G, H)
    return s is not None, (None if s is None else [[x, s[x]] for x in G.vertices])


def _space_level(G, H, F, method):
    T = space_iso(G, H, F, method=method)
    return T is not None, (None if T is None else T.to_json())


def cmd_iso(args, out):
    G, H = _load_graph(args.g), _load_graph(args.h)
    F = _field(args.p)
    levels = ["graph", "space", "group"] if args.level == "all" else [args.level]
    doc = {"level": args.level, "p": F.p, "verdicts": {}, "witnesses": {}}
    for level in levels:
        if level == "graph":
            ok, w = _graph_level(G, H)
            doc["witnesses"]["graph"] = w
        elif level == "space":
            ok, w = _space_level(G, H, F, args.method)
            doc["witnesses"]["space"] = w
        else:
            ok = group_iso(G, H, F)
        doc["verdicts"][level] = ok
    verdicts = set(doc["verdicts"].values())
    doc["consistent"] = len(verdicts) == 1
    doc["isomorphic"] = verdicts == {True}
    _dump(doc, out)
    if not doc["consistent"]:
        log.error("verdicts disagree across levels: %s", doc["verdicts"])
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_invariants(args, out):
    G = _load_graph(args.graph)
    F = _field(args.p)
    sp = AltSpace.of_graph(G, F)
    doc = {
        "p": F.p,
        "matching_via_rank": max_rank(sp) // 2,
        "matching_classical": matching_number(G),
        "independence_via_isotropic": independence_number_via_isotropic(sp),
        "independence_classical": independence_number(G),
    }
    doc["agree"] = (
        doc["matching_via_rank"] == doc["matching_classical"]
        and doc["independence_via_isotropic"] == doc["independence_classical"]
    )
    _dump(doc, out)
    return EXIT_OK if doc["agree"] else EXIT_INTERNAL


def cmd_functor(args, out):
    G, H = _load_graph(args.g), _load_graph(args.h)
    F = _field(args.p)
    if args.map is None:
        if args.objective is None:
            raise UsageError("give a mapping file or --objective")
        res = max_pullback_hom(G, H, args.objective, surjective=args.surjective)
        doc = {"objective": args.objective, "surjective": args.surjective}
        doc.update({"value": None, "witness": None} if res is None else {"value": res[0], "witness": res[1].to_json()})
        _dump(doc, out)
        return EXIT_OK
    try:
        with open(args.map) as fh:
            f = PartialInjection.from_json(json.load(fh), G.vertices, H.vertices)
    except OSError as exc:
        raise ParseError(f"{args.map}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{args.map}: {exc}") from None
    bad = pullback_violation(f, G, H)
    doc = {"p": F.p, "mapping": f.to_json(), "pullback_hom": bad is None}
    if bad is not None:
        pair, image = bad
        doc["violation"] = {"pair": list(pair), "image": list(image)}
        print(
            f"not a pullback homomorphism: {{{image[0]}, {image[1]}}} is an edge of H "
            f"but {{{pair[0]}, {pair[1]}}} is not an edge of G",
            file=sys.stderr,
        )
        _dump(doc, out)
        return EXIT_OK
    hom = blt_morphism(f, G, H, F)
    doc["source_order"] = hom.source.order
    doc["target_order"] = hom.target.order
    doc["homomorphism_verified"] = is_group_homomorphism(hom.source, hom.target, hom)
    _dump(doc, out)
    if not doc["homomorphism_verified"]:
        log.error("internal error: the induced map is not a group homomorphism")
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_prooflab(args, out):
    G, H = _load_graph(args.g), _load_graph(args.h)
    F = _field(args.p)
    try:
        rep = prop_key_oracle(
            G, H, F, lemma_checks=args.lemma_checks, samples=args.samples, seed=args.seed, jobs=args.jobs
        )
    except GraphsIsomorphic as exc:
        raise UsageError(str(exc)) from None
    _dump(rep.to_json(), out)
    return EXIT_OK


def cmd_cayley(args, out):
    G = _load_graph(args.graph)
    F = _field(args.p)
    out.write(BaerGroup.of_graph(G, F).cayley_table_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bltgroups", description="p-groups of class 2 and exponent p from graphs")
    parser.add_argument("-o", "--output", help="write to this file instead of stdout")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def with_p(sp):
        sp.add_argument("-p", type=int, default=3, help="odd prime (default 3)")
        return sp

    sp = with_p(sub.add_parser("build", help="alternating matrices and group data of a graph"))
    sp.add_argument("graph")
    sp.set_defaults(func=cmd_build)

    sp = with_p(sub.add_parser("iso", help="isomorphism test at graph, space or group level"))
    sp.add_argument("g")
    sp.add_argument("h")
    sp.add_argument("--level", choices=["graph", "space", "group", "all"], default="all")
    sp.add_argument("--method", choices=["auto", "gl", "minors"], default="auto")
    sp.set_defaults(func=cmd_iso)

    sp = with_p(sub.add_parser("invariants", help="matching and independence numbers, both routes"))
    sp.add_argument("graph")
    sp.set_defaults(func=cmd_invariants)

    sp = with_p(sub.add_parser("functor", help="verify a pullback homomorphism or optimise over them"))
    sp.add_argument("g")
    sp.add_argument("h")
    sp.add_argument("map", nargs="?", help='JSON {"pairs": [[x, y], ...]}')
    sp.add_argument("--objective", choices=["order", "size"])
    sp.add_argument("--surjective", action="store_true")
    sp.set_defaults(func=cmd_functor)

    sp = with_p(sub.add_parser("prooflab", help="singularity scan over matrices meeting the minor condition"))
    sp.add_argument("action", choices=["verify"])
    sp.add_argument("--g", required=True)
    sp.add_argument("--h", required=True)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="scan every conforming matrix (default)")
    mode.add_argument("--samples", type=int, help="draw this many conforming matrices at random")
    sp.add_argument("--lemma-checks", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_prooflab)

    sp = with_p(sub.add_parser("cayley", help="export the Cayley table"))
    sp.add_argument("graph")
    sp.set_defaults(func=cmd_cayley)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        return args.func(args, out) or EXIT_OK
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TooLarge as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    finally:
        if out is not sys.stdout:
            out.close()


def prooflab_main(argv=None) -> int:
    return main(["prooflab"] + list(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    sys.exit(main())
