"""Command-line front end: parse instance files, run the deciders and
reducers, and emit machine-readable certificate documents.

Exit codes are a stable contract: 0 for YES (or plain success), 1 for NO,
2 for input or usage errors, 3 when a rank question is asked of a
non-member (the promise fails).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .exactnum import (
    Error,
    ParseError,
    check_dnn,
    format_matrix,
    parse_matrix,
    parse_rational,
)
from .generators import boolean_vector, generator_matrix
from .hulls import (
    CUT_FAMILIES,
    DEFAULT_MAX_N,
    FAMILIES,
    DecompositionCertificate,
    HullSpec,
    decide_membership,
    verify_certificate,
)
from .ranks import rank_decision, rank_minimum, relaxed_rank, relaxed_rank_decision
from .reductions import (
    cor_to_cut,
    cut_to_cor,
    fcc_to_relaxed_rank_instance,
    format_threshold,
    lift_cor_to_conx,
    lift_to_normalized,
    parse_fcc,
    parse_x3c,
    x3c_to_rank_instance,
)
from .structured import (
    DecompositionFailure,
    clique_lp_solve,
    expand_bags,
    forest_decompose,
    support_clique_family,
)

DOCUMENT_FORMAT = "corpoly.certificate/1"


def _load_matrix(path):
    return parse_matrix(Path(path).read_text())


def _document(kind, family, n, answer, rho=None, threshold=None, value=None,
              certificate=None, screens=()):
    terms = []
    if certificate is not None:
        for k, w in certificate.terms:
            terms.append({
                "k": k,
                "bits": list(boolean_vector(k, certificate.n)),
                "weight": str(w),
            })
    return {
        "format": DOCUMENT_FORMAT,
        "problem": {
            "kind": kind,
            "family": family,
            "n": n,
            "rho": None if rho is None else str(rho),
            "threshold": None if threshold is None else str(threshold),
        },
        "answer": answer,
        "value": None if value is None else str(value),
        "terms": terms,
        "screen_failures": list(screens),
    }


def _emit(document, path):
    Path(path).write_text(json.dumps(document, sort_keys=True, indent=2) + "\n")


def _cmd_membership(args):
    gamma = _load_matrix(args.matrix)
    rho = parse_rational(args.rho) if args.rho is not None else None
    if args.set == "rho-cor" and rho is None:
        print("error: --rho is required with --set rho-cor", file=sys.stderr)
        return 2
    if args.set != "rho-cor" and rho is not None:
        print("error: --rho only applies to --set rho-cor", file=sys.stderr)
        return 2
    result = decide_membership(gamma, HullSpec(args.set, rho), args.max_n)
    if result.member:
        print(f"member of {args.set}: yes ({result.certificate.support_size()} generators)")
    else:
        print(f"member of {args.set}: no ({result.rejection})")
        for failure in result.screen_failures:
            print(f"  {failure}")
    if args.certificate:
        document = _document(
            "membership", args.set, gamma.n,
            "yes" if result.member else "no",
            rho=rho, certificate=result.certificate, screens=result.screen_failures,
        )
        _emit(document, args.certificate)
    return 0 if result.member else 1


def _cmd_rank(args):
    gamma = _load_matrix(args.matrix)
    if args.threshold is not None and args.threshold < 0:
        print("error: --threshold must be nonnegative", file=sys.stderr)
        return 2
    if args.threshold is None:
        result = rank_minimum(gamma, args.set, args.max_n)
        if result.status != "answered":
            print(f"not a member of {args.set}; rank is undefined")
            if args.certificate:
                _emit(_document("rank", args.set, gamma.n, "not-member"), args.certificate)
            return 3
        print(f"rank = {result.rank}")
        if args.certificate:
            document = _document("rank", args.set, gamma.n, "yes",
                                 value=result.rank, certificate=result.certificate)
            _emit(document, args.certificate)
        return 0
    result = rank_decision(gamma, args.set, args.threshold, args.max_n)
    if result.status != "answered":
        print(f"not a member of {args.set}; rank is undefined")
        if args.certificate:
            _emit(_document("rank", args.set, gamma.n, "not-member",
                            threshold=args.threshold), args.certificate)
        return 3
    met = bool(result.threshold_met)
    print(f"rank <= {args.threshold}: {'yes' if met else 'no'}")
    if args.certificate:
        document = _document("rank", args.set, gamma.n, "yes" if met else "no",
                             threshold=args.threshold, certificate=result.certificate)
        _emit(document, args.certificate)
    return 0 if met else 1


def _cmd_relaxed_rank(args):
    gamma = _load_matrix(args.matrix)
    if args.threshold is None:
        result = relaxed_rank(gamma, args.max_n)
        if result.status != "answered":
            print("not a member of conx; relaxed rank is undefined")
            if args.certificate:
                _emit(_document("relaxed-rank", "conx", gamma.n, "not-member"),
                      args.certificate)
            return 3
        print(f"relaxed rank = {result.value}")
        if args.certificate:
            document = _document("relaxed-rank", "conx", gamma.n, "yes",
                                 value=result.value, certificate=result.certificate)
            _emit(document, args.certificate)
        return 0
    rho = parse_rational(args.threshold)
    result = relaxed_rank_decision(gamma, rho, args.max_n)
    if result.status != "answered":
        print("not a member of conx; relaxed rank is undefined")
        if args.certificate:
            _emit(_document("relaxed-rank", "conx", gamma.n, "not-member",
                            threshold=rho), args.certificate)
        return 3
    met = bool(result.threshold_met)
    print(f"relaxed rank <= {rho}: {'yes' if met else 'no'}")
    if args.certificate:
        document = _document("relaxed-rank", "conx", gamma.n, "yes" if met else "no",
                             threshold=rho, value=result.value,
                             certificate=result.certificate)
        _emit(document, args.certificate)
    return 0 if met else 1


_MATRIX_MAPS = {
    "cor-to-conx": lift_cor_to_conx,
    "cor-to-ncor": lift_to_normalized,
    "cor-to-cut": cor_to_cut,
    "cut-to-cor": cut_to_cor,
}


def _cmd_reduce(args):
    text = Path(args.infile).read_text()
    out = Path(args.out)
    if args.source == "x3c":
        instance = parse_x3c(text)
        reduced = x3c_to_rank_instance(instance)
        out.write_text(format_matrix(reduced.matrix))
        sidecar = Path(str(out) + ".threshold")
        sidecar.write_text(format_threshold(reduced.threshold))
        print(
            f"x3c: universe {instance.universe_size}, {len(instance.triples)} triples"
            f" -> {reduced.matrix.n}x{reduced.matrix.n} matrix,"
            f" family {reduced.family}, rank threshold {reduced.threshold}"
        )
        print(f"wrote {out} and {sidecar}")
        return 0
    if args.source == "fcc":
        instance = parse_fcc(text)
        reduced = fcc_to_relaxed_rank_instance(instance)
        out.write_text(format_matrix(reduced.matrix))
        sidecar = Path(str(out) + ".threshold")
        sidecar.write_text(format_threshold(reduced.threshold))
        print(
            f"fcc: {instance.num_vertices} vertices, {len(instance.edges)} edges,"
            f" budget {instance.budget} -> {reduced.matrix.n}x{reduced.matrix.n} matrix,"
            f" family {reduced.family}, relaxed-rank threshold {reduced.threshold}"
        )
        print(f"wrote {out} and {sidecar}")
        return 0
    gamma = parse_matrix(text)
    mapped = _MATRIX_MAPS[args.source](gamma)
    out.write_text(format_matrix(mapped))
    print(f"{args.source}: {gamma.n}x{gamma.n} -> {mapped.n}x{mapped.n}")
    print(f"wrote {out}")
    return 0


def _cmd_check(args):
    gamma = _load_matrix(args.matrix)
    report = check_dnn(gamma)
    flag = lambda value: "yes" if value else "no"  # noqa: E731
    print(f"symmetric: {flag(report.symmetric)}")
    print(f"nonnegative: {flag(report.nonnegative)}")
    print(f"psd: {flag(report.psd)}")
    print(f"dnn: {flag(report.dnn)}")
    if report.first_violation is not None:
        name, detail = report.first_violation
        text = detail.describe() if name == "psd" else f"at {detail}"
        print(f"first violation: {name} ({text})")
    return 0


def _cmd_generators(args):
    if args.n < 1:
        print("error: --n must be at least 1", file=sys.stderr)
        return 2
    if args.n > args.max_n:
        print(f"error: --n {args.n} exceeds the configured cap {args.max_n}",
              file=sys.stderr)
        return 2
    n = args.n
    print(f"n={n}: {1 << n} generators")
    for k in range(1 << n):
        bits = boolean_vector(k, n)
        print(f"k={k} x=({','.join(str(b) for b in bits)})")
        for row in generator_matrix(k, n).rows():
            print("  " + " ".join(str(v) for v in row))
    return 0


def _parse_clique_file(text):
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty clique-family file", line=1)
    head = lines[0].split()
    if len(head) != 2 or not all(re.fullmatch(r"\d+", tok) for tok in head):
        raise ParseError("expected 'n num_cliques'", line=1)
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise ParseError(f"expected {m} clique lines, found {len(lines) - 1}",
                         line=len(lines))
    bags = []
    for r in range(m):
        tokens = lines[r + 1].split()
        if not tokens or not all(re.fullmatch(r"\d+", tok) for tok in tokens):
            raise ParseError("expected a space-separated vertex list", line=r + 2)
        vertices = [int(tok) for tok in tokens]
        if min(vertices) < 1:
            raise ParseError("vertices are numbered from 1", line=r + 2)
        bags.append([v - 1 for v in vertices])
    return n, bags


def _cmd_poly(args):
    gamma = _load_matrix(args.matrix)
    if args.method == "forest":
        result = forest_decompose(gamma)
        if isinstance(result, DecompositionFailure):
            print(f"no decomposition: slack {result.slack} at vertex {result.vertex}")
            return 1
        print("forest decomposition:")
        for (i, j), w in sorted(result.edge_weights.items()):
            print(f"  edge ({i},{j}): {w}")
        for i, w in sorted(result.loop_weights.items()):
            print(f"  loop ({i}): {w}")
        return 0
    if args.cliques:
        n, bags = _parse_clique_file(Path(args.cliques).read_text())
        if n != gamma.n:
            print(f"error: clique file is over {n} vertices but the matrix is "
                  f"{gamma.n}x{gamma.n}", file=sys.stderr)
            return 2
        family = expand_bags(gamma, bags)
    else:
        family = support_clique_family(gamma)
    if args.mode == "membership":
        result = clique_lp_solve(gamma, family, "membership")
        if result.member:
            print(f"member of conx (clique system): yes "
                  f"({result.certificate.support_size()} generators)")
            return 0
        print("member of conx (clique system): no (lp-infeasible)")
        return 1
    result = clique_lp_solve(gamma, family, "relaxed-rank")
    if result.status != "answered":
        print("not a member of conx; relaxed rank is undefined")
        return 3
    print(f"relaxed rank (clique system) = {result.value}")
    return 0


def _cmd_verify(args):
    gamma = _load_matrix(args.matrix)
    try:
        document = json.loads(Path(args.certificate).read_text())
    except ValueError as exc:
        print(f"error: unreadable certificate document: {exc}", file=sys.stderr)
        return 2
    try:
        answer = document["answer"]
        problem = document["problem"]
        family = problem["family"]
        n = problem["n"]
        terms = document["terms"]
        rho_text = problem.get("rho")
    except (KeyError, TypeError):
        print("error: certificate document is missing required fields", file=sys.stderr)
        return 2
    if answer != "yes":
        print(f"certificate answer is {answer!r}; nothing to verify", file=sys.stderr)
        return 2
    if family not in FAMILIES:
        print(f"error: unknown family {family!r}", file=sys.stderr)
        return 2
    if n != gamma.n:
        print(f"error: certificate is for n={n} but the matrix is {gamma.n}x{gamma.n}",
              file=sys.stderr)
        return 2
    kind = "cut" if family in CUT_FAMILIES else "boolean"
    weights = {}
    for term in terms:
        k = term["k"]
        weight = parse_rational(term["weight"])
        if term.get("bits") != list(boolean_vector(k, n)):
            print(f"error: bits of term k={k} do not match its id", file=sys.stderr)
            return 2
        weights[k] = weight
    certificate = DecompositionCertificate.from_weights(n, kind, weights)
    rho = parse_rational(rho_text) if rho_text is not None else None
    if verify_certificate(gamma, certificate, family, rho):
        print("certificate verifies: recomposition matches the matrix exactly")
        return 0
    print("certificate does NOT verify")
    return 1


def _add_max_n(parser):
    parser.add_argument("--max-n", type=int, default=DEFAULT_MAX_N,
                        help="dimension cap guarding generator materialization")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="corpoly",
        description="Exact membership, rank, and relaxed-rank computations "
                    "over correlation and cut polyhedra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("membership", help="decide hull membership")
    p.add_argument("--set", required=True, choices=FAMILIES)
    p.add_argument("--matrix", required=True)
    p.add_argument("--rho", help="scale for --set rho-cor, as a rational")
    p.add_argument("--certificate", help="write the certificate document here")
    _add_max_n(p)
    p.set_defaults(handler=_cmd_membership)

    p = sub.add_parser("rank", help="decomposition rank (minimum or decision)")
    p.add_argument("--set", required=True, choices=("conx", "cor"))
    p.add_argument("--matrix", required=True)
    p.add_argument("--threshold", type=int, help="decide rank <= threshold")
    p.add_argument("--certificate")
    _add_max_n(p)
    p.set_defaults(handler=_cmd_rank)

    p = sub.add_parser("relaxed-rank", help="least weight sum (minimum or decision)")
    p.add_argument("--set", choices=("conx",), default="conx")
    p.add_argument("--matrix", required=True)
    p.add_argument("--threshold", help="decide relaxed rank <= threshold (rational)")
    p.add_argument("--certificate")
    _add_max_n(p)
    p.set_defaults(handler=_cmd_relaxed_rank)

    p = sub.add_parser("reduce", help="transform a source instance")
    p.add_argument("--from", dest="source", required=True,
                   choices=("x3c", "fcc", "cor-to-conx", "cor-to-ncor",
                            "cor-to-cut", "cut-to-cor"))
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("check", help="print the necessary-condition report")
    p.add_argument("--matrix", required=True)
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("generators", help="list the boolean generators")
    p.add_argument("--n", type=int, required=True)
    _add_max_n(p)
    p.set_defaults(handler=_cmd_generators)

    p = sub.add_parser("poly", help="polynomial special-case solvers")
    p.add_argument("--method", required=True, choices=("forest", "clique"))
    p.add_argument("--matrix", required=True)
    p.add_argument("--cliques", help="clique/bag family file for --method clique")
    p.add_argument("--mode", choices=("membership", "relaxed-rank"),
                   default="membership")
    p.set_defaults(handler=_cmd_poly)

    p = sub.add_parser("verify", help="recompose a certificate and compare")
    p.add_argument("--matrix", required=True)
    p.add_argument("--certificate", required=True)
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (Error, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
