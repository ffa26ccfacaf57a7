"""oddsub command line.

Exit codes: 0 ok, 1 violations (invalid set, failed campaign), 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .campaign import CHECKS, CampaignConfig, run_campaign
from .decomposition import DecompositionError, StuckCore, recognize_tw2, to_nice
from .exact import SolverRefused, gallai_partition, mois_brute, mois_dp
from .generators import FAMILIES, FamilyError, FamilySpec, generate
from .graph import GraphError, is_even_set
from .io import format_edge_list, read_edge_list
from .reduction import OddCertificate, construct_odd, verify_certificate

AUTO_BRUTE_N = 20


class UsageError(Exception):
    pass


def _load(args):
    src = args.input
    try:
        if src in (None, "-"):
            return read_edge_list(sys.stdin)
        return read_edge_list(src)
    except OSError as e:
        raise UsageError(f"cannot read {src}: {e.strerror}") from None


def _emit(obj) -> None:
    json.dump(obj, sys.stdout)
    sys.stdout.write("\n")


def _parse_set(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"--set expects integers, got {text!r}") from None


def cmd_solve(args) -> int:
    G = _load(args)
    method = args.method
    if method == "auto":
        method = "brute" if G.n <= AUTO_BRUTE_N else "dp"
    res = mois_brute(G) if method == "brute" else mois_dp(G)
    _emit(res.to_json(method))
    print(f"f = {res.size} on {G.n} vertices ({method})", file=sys.stderr)
    return 0


def cmd_construct(args) -> int:
    G = _load(args)
    cert = construct_odd(G)
    ok, msg = verify_certificate(G, cert)
    _emit(cert.to_json())
    print(f"size {cert.size}/{G.n}, ratio {cert.ratio}, verify: {msg}"
          + (", FALLBACK USED" if cert.fallback_used else ""), file=sys.stderr)
    return 0 if ok and not cert.fallback_used else 1


def cmd_verify(args) -> int:
    G = _load(args)
    if args.set is None:
        raise UsageError("verify needs --set")
    S = _parse_set(args.set)
    if len(set(S)) != len(S):
        raise UsageError("--set lists a vertex twice")
    ok, msg = verify_certificate(G, OddCertificate(frozenset(S), G.n))
    _emit({"valid": ok, "diagnostic": msg, "size": len(S), "n": G.n})
    print(msg, file=sys.stderr)
    return 0 if ok else 1


def cmd_gallai(args) -> int:
    G = _load(args)
    part = gallai_partition(G)
    a, b = sorted(part.side_a), sorted(part.side_b)
    ok = is_even_set(G, a) and is_even_set(G, b)
    _emit({"side_a": a, "side_b": b, "both_even": ok,
           "max_side": max(len(a), len(b))})
    print(f"sides of size {len(a)} and {len(b)}", file=sys.stderr)
    return 0 if ok else 1


def cmd_recognize(args) -> int:
    G = _load(args)
    td = recognize_tw2(G)
    if isinstance(td, StuckCore):
        _emit({"tw_le_2": False, "core": list(td.core.vertices)})
        print(f"treewidth > 2 (core of {td.core.n} vertices)", file=sys.stderr)
        return 0
    out = {"tw_le_2": True, "width": td.width}
    out["decomposition"] = to_nice(td).to_json() if args.nice else td.to_json()
    _emit(out)
    print(f"treewidth <= 2, decomposition width {td.width}", file=sys.stderr)
    return 0


def cmd_gen(args) -> int:
    G = generate(FamilySpec(args.family, n=args.n, k=args.k, seed=args.seed, p2=args.p2,
                            index=args.index))
    sys.stdout.write(format_edge_list(G))
    return 0


def cmd_check(args) -> int:
    checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    n_max = args.n if args.n is not None else 200
    cfg = CampaignConfig(family=args.family, trials=args.trials, seed=args.seed,
                         n_min=min(args.n_min, n_max), n_max=n_max, p2=args.p2,
                         checks=checks, jobs=args.jobs)
    rep = run_campaign(cfg)
    if args.json:
        _emit(rep.to_json())
    print(rep.summary(), file=sys.stderr)
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oddsub", description="Odd induced subgraphs on small-treewidth graphs.")
    p.add_argument("-v", "--verbose", action="store_true", help="log reduction details to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(sp):
        sp.add_argument("--input", "-i", default=None, help="edge-list file (default: stdin)")
        return sp

    sp = with_input(sub.add_parser("solve", help="exact f(G) with a witness"))
    sp.add_argument("--method", choices=("auto", "brute", "dp"), default="auto")
    sp.set_defaults(func=cmd_solve)

    sp = with_input(sub.add_parser("construct", help="certified odd set of order >= 2n/5 (tw <= 2)"))
    sp.set_defaults(func=cmd_construct)

    sp = with_input(sub.add_parser("verify", help="check a vertex set is odd and of order >= 2n/5"))
    sp.add_argument("--set", help="vertices, comma or space separated")
    sp.set_defaults(func=cmd_verify)

    sp = with_input(sub.add_parser("gallai", help="split V into two even-inducing sides"))
    sp.set_defaults(func=cmd_gallai)

    sp = with_input(sub.add_parser("recognize", help="treewidth <= 2 test with a decomposition"))
    sp.add_argument("--nice", action="store_true", help="export the nice decomposition")
    sp.set_defaults(func=cmd_recognize)

    sp = sub.add_parser("gen", help="print a generated graph as an edge list")
    sp.add_argument("--family", required=True, choices=FAMILIES)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--p2", type=float, default=0.6)
    sp.add_argument("--index", type=int, default=None, help="instance index within a campaign")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("check", help="run a verification campaign")
    sp.add_argument("--family", required=True, choices=FAMILIES)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n", type=int, default=None, help="largest instance size (k for c5_union/hk)")
    sp.add_argument("--n-min", type=int, default=5)
    sp.add_argument("--p2", type=float, default=0.6)
    sp.add_argument("--checks", default="ratio", help=f"comma list from {','.join(CHECKS)}")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--json", action="store_true", help="print the report as JSON on stdout")
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, GraphError, FamilyError, SolverRefused, DecompositionError, ValueError) as e:
        print(f"oddsub {args.command}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
