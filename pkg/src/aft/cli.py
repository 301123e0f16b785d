"""Command line front end.

Exit codes: 0 success, 1 invalid instance or usage, 2 a theorem check
failed, 3 a size bound was exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import AftError
from .expansion import check_expansion_switching, expand
from .instances import (
    FIXTURES,
    canonical_json,
    certificate_document,
    corpus,
    generate_closure,
    generate_dag,
    read_instance,
    serialize_instance,
    write_atomic,
)
from .network import (
    check_no_inclusion,
    check_order_preservation,
    format_path,
    inclusion_pairs,
    reduce_assumption2,
    validate_switching,
)
from .rational import format_fraction
from .static import build_horizon_weights, check_supermodular

EXIT_OK, EXIT_INVALID, EXIT_FALSIFIED, EXIT_SCALE = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _triple(p, q, e) -> str:
    return f"{format_path(p)} x_{e} {format_path(q)}"


def cmd_validate(args) -> int:
    doc = read_instance(args.instance)
    net = doc.network()
    switching = validate_switching(net)
    result = {
        "switching_ok": switching.ok,
        "switching_violations": [_triple(*v) for v in switching.violations],
        "zero_transit_paths": [format_path(p) for p in switching.zero_transit_paths],
    }
    code = EXIT_OK
    if switching.ok:
        weights = build_horizon_weights(net, doc.horizon)
        supermodular = check_supermodular(net, weights)
        reduced = reduce_assumption2(net)
        order = check_order_preservation(reduced)
        result.update(
            supermodular_violations=[_triple(*v[:3]) for v in supermodular.violations],
            reduced_paths=[format_path(p) for p in reduced.paths],
            no_inclusion=check_no_inclusion(reduced),
            inclusions=[f"{format_path(q)} < {format_path(p)}" for q, p in inclusion_pairs(reduced)],
            order_violations=[_triple(*v[:3]) for v in order.violations],
        )
        if supermodular.violations or not result["no_inclusion"] or order.violations:
            code = EXIT_FALSIFIED
    else:
        code = EXIT_INVALID

    if args.json:
        sys.stdout.write(canonical_json(result))
    else:
        print(f"switching: {'ok' if switching.ok else 'VIOLATED'}")
        for line in result["switching_violations"]:
            print(f"  no witness for {line}")
        for line in result["zero_transit_paths"]:
            print(f"  note: {line} has total transit 0")
        if switching.ok:
            print(f"supermodular horizon weights: {'ok' if not result['supermodular_violations'] else 'VIOLATED'}")
            for line in result["supermodular_violations"]:
                print(f"  violated at {line}")
            print(f"reduced family: {', '.join(result['reduced_paths'])}")
            print(f"no inclusion after reduction: {result['no_inclusion']}")
            print(f"order preservation: {'ok' if not result['order_violations'] else 'VIOLATED'}")
            for line in result["order_violations"]:
                print(f"  violated at {line}")
    return code


def cmd_solve(args) -> int:
    from .dynamic import certify

    doc = read_instance(args.instance)
    if args.horizon:
        doc.horizon = args.horizon
    cert = certify(doc.network(), doc.horizon, waiting_oracle=not args.no_waiting)
    _emit(canonical_json(certificate_document(doc, cert)), args.output)
    print(
        f"flow {format_fraction(cert.flow_value)}, cut {format_fraction(cert.cut_capacity)}, "
        f"oracle {format_fraction(cert.oracle_strict)}, all equal: {cert.all_equal}",
        file=sys.stderr,
    )
    return EXIT_FALSIFIED if cert.falsified else EXIT_OK


def cmd_expand(args) -> int:
    doc = read_instance(args.instance)
    horizon = args.horizon or doc.horizon
    net = doc.network()
    temporal = expand(net, horizon)
    result = {
        "horizon": horizon,
        "temporal_paths": [
            {"path": list(tp.base), "start": tp.start, "elements": [[e, t] for e, t in tp.elements]}
            for tp in temporal
        ],
    }
    if args.check_switching:
        report = check_expansion_switching(net, horizon)
        result["switching_violations"] = [f"{p} x_{x[0]}@{x[1]} {q}" for p, q, x in report.violations]
    if args.json:
        sys.stdout.write(canonical_json(result))
    else:
        print(f"{len(temporal)} temporal paths for horizon {horizon}")
        for tp in temporal:
            print(f"  {tp}: " + " ".join(f"{e}@{t}" for e, t in tp.elements))
        if args.check_switching:
            violations = result["switching_violations"]
            print(f"expansion switching: {'ok' if not violations else f'{len(violations)} violations'}")
            for line in violations:
                print(f"  no witness for {line}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import oracle_strict, oracle_waiting

    doc = read_instance(args.instance)
    horizon = args.horizon or doc.horizon
    net = doc.network()
    result = {"horizon": horizon, "strict": format_fraction(oracle_strict(net, horizon).optimum)}
    if args.waiting:
        result["waiting"] = format_fraction(oracle_waiting(net, horizon).optimum)
    if args.json:
        sys.stdout.write(canonical_json(result))
    else:
        for key in ("strict", "waiting"):
            if key in result:
                print(f"{key}: {result[key]}")
    if args.waiting and result["waiting"] != result["strict"]:
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.kind == "corpus":
        if not args.out_dir:
            raise SystemExit("generate corpus needs --out-dir")
        os.makedirs(args.out_dir, exist_ok=True)
        for entry in corpus(args.dag, args.closure, seed=args.seed):
            write_atomic(os.path.join(args.out_dir, entry.name + ".json"), serialize_instance(entry.doc))
        return EXIT_OK
    if args.kind == "dag":
        doc = generate_dag(args.nodes, args.arcs, args.seed, horizon=args.horizon)
    else:
        doc = generate_closure(args.seed, max_elements=args.max_elements, seed_paths=args.seed_paths,
                               max_length=args.max_length, horizon=args.horizon)
    _emit(serialize_instance(doc), args.output)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    for name, make in FIXTURES.items():
        path = os.path.join(args.out_dir, name)
        write_atomic(path, serialize_instance(make()))
        print(path)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aft", description="Abstract flows over time, checked exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="switching, supermodularity and reduction reports")
    p.add_argument("instance")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="run the full pipeline and print a certificate")
    p.add_argument("instance")
    p.add_argument("--horizon", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--no-waiting", action="store_true", help="skip the waiting oracle")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("expand", help="list the temporal paths")
    p.add_argument("instance")
    p.add_argument("--horizon", type=int)
    p.add_argument("--check-switching", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("oracle", help="brute-force optima on the time expansion")
    p.add_argument("instance")
    p.add_argument("--horizon", type=int)
    p.add_argument("--waiting", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="random instances")
    p.add_argument("kind", choices=["dag", "closure", "corpus"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nodes", type=int, default=5)
    p.add_argument("--arcs", type=int, default=7)
    p.add_argument("--max-elements", type=int, default=8)
    p.add_argument("--seed-paths", type=int, default=3)
    p.add_argument("--max-length", type=int, default=4)
    p.add_argument("--horizon", type=int)
    p.add_argument("--dag", type=int, default=60, help="corpus: number of DAG instances")
    p.add_argument("--closure", type=int, default=60, help="corpus: number of closure instances")
    p.add_argument("-o", "--output")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fixtures", help="write the Example 1 and Example 2 instance files")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AftError as exc:
        stage = f"[{exc.stage}] " if exc.stage else ""
        print(f"error: {stage}{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
