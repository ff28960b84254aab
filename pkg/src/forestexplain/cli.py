"""Command line front end.

Subcommands cover the full pipeline: predict classifies CSV rows, explain
extracts explanations (optionally verified against brute-force enumeration),
encode emits the DIMACS misclassification formula for one row, bench prints
the oracle workload table, reduce compiles a DNF into an equivalent forest,
solve-dimacs runs the bundled solver on a file, and serve starts the HTTP
service. Row-processing commands exit 0 only when every row succeeds.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import verify
from .dimacs import write_dimacs
from .encoder import EncoderOptions, encode_for_instance
from .explain import (
    ABDUCTIVE,
    CONTRASTIVE,
    MODES,
    ExplanationError,
    explain_dataset,
    format_report,
)
from .model import ModelError, predict_index, vote_counts
from .model_io import LoadError, dumps_model, load_instances, load_model
from .solver import main as solver_main
from .verify import BudgetExceeded


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forestexplain",
        description="Formally correct explanations for random forest classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    model_data = argparse.ArgumentParser(add_help=False)
    model_data.add_argument("--model", required=True, help="model JSON file")
    model_data.add_argument("--data", required=True, help="instance CSV file")
    model_data.add_argument("--row", type=int, default=None, help="use only this 0-based row")

    encoding_opts = argparse.ArgumentParser(add_help=False)
    encoding_opts.add_argument(
        "--no-chaining", action="store_true",
        help="emit quadratic threshold ordering clauses instead of the chained form",
    )
    encoding_opts.add_argument(
        "--naive-comparators", action="store_true",
        help="one vote comparator per rival class instead of the selector reduction",
    )

    search_opts = argparse.ArgumentParser(add_help=False)
    search_opts.add_argument("--mode", choices=MODES, default="axp")
    search_opts.add_argument("--adapter", choices=("embedded", "subprocess"), default="embedded")
    search_opts.add_argument("--solver-cmd", default=None, help="external solver command line")
    search_opts.add_argument("--order", choices=("ascending", "descending"), default="ascending")
    search_opts.add_argument("--seed", type=int, default=0)
    search_opts.add_argument("--limit", type=int, default=None, help="stop enumeration after this many explanations")
    search_opts.add_argument("--jobs", type=int, default=1, help="process rows in parallel")

    p = sub.add_parser("predict", parents=[model_data], help="classify rows")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser(
        "explain", parents=[model_data, encoding_opts, search_opts],
        help="explain row predictions",
    )
    p.add_argument("--json", action="store_true")
    p.add_argument("--verify", action="store_true", help="re-check each explanation by brute force")
    p.add_argument("--budget", type=int, default=verify.DEFAULT_BUDGET,
                   help="cell budget for --verify")

    p = sub.add_parser(
        "encode", parents=[model_data, encoding_opts],
        help="write the misclassification formula for one row as DIMACS",
    )
    p.add_argument("--out", default=None, help="output path (stdout when omitted)")

    p = sub.add_parser(
        "bench", parents=[model_data, encoding_opts, search_opts],
        help="explain rows and print the oracle workload table",
    )
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("reduce", help="compile a DNF formula into an equivalent forest")
    p.add_argument("--dnf", required=True, help="DNF file, one clause of signed ints per line")
    p.add_argument("--out", default=None, help="model output path (stdout when omitted)")

    p = sub.add_parser("solve-dimacs", help="run the bundled solver on a DIMACS file")
    p.add_argument("file")
    p.add_argument("--engine", choices=("cdcl", "dpll"), default="cdcl")

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--model", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _load_rows(args):
    forest = load_model(args.model)
    instances = load_instances(args.data, forest)
    if args.row is not None:
        if not 0 <= args.row < len(instances):
            raise LoadError(f"--row {args.row} out of range for {len(instances)} rows")
        instances = [instances[args.row]]
    return forest, instances


def _prediction_line(forest, instance) -> str:
    votes = vote_counts(forest, instance)
    j = predict_index(forest, instance)
    name = forest.classes[j]
    return f"{name} ({votes[name]}/{len(forest.trees)})"


def _cmd_predict(args) -> int:
    forest, instances = _load_rows(args)
    if args.json:
        payload = [
            {
                "instance": list(inst),
                "prediction": forest.classes[predict_index(forest, inst)],
                "votes": vote_counts(forest, inst),
            }
            for inst in instances
        ]
        print(json.dumps(payload, indent=2))
    else:
        for inst in instances:
            print(_prediction_line(forest, inst))
    return 0


def _options(args) -> EncoderOptions:
    return EncoderOptions(
        chaining=not args.no_chaining,
        naive_comparators=args.naive_comparators,
    )


def _format_explanation(forest, exp) -> str:
    if exp.immutable:
        return "prediction immutable"
    if not exp.features:
        return "∅"
    return "{" + ", ".join(exp.feature_names(forest)) + "}"


def _verified(forest, instance, exp, budget) -> bool:
    if exp.kind == ABDUCTIVE:
        return verify.check_axp(forest, instance, exp.features, budget)
    if exp.immutable:
        return verify.is_sufficient(forest, instance, (), budget)
    return verify.check_cxp(forest, instance, exp.features, budget)


def _run_explanations(args):
    forest, instances = _load_rows(args)
    results = explain_dataset(
        forest,
        instances,
        args.mode,
        jobs=args.jobs,
        options=_options(args),
        adapter=args.adapter,
        solver_cmd=args.solver_cmd,
        seed=args.seed,
        order=args.order,
        limit=args.limit,
    )
    return forest, results


def _cmd_explain(args) -> int:
    forest, results = _run_explanations(args)
    failures = 0
    rows = []
    for i, res in enumerate(results):
        verdicts = []
        if args.verify:
            for exp in res.explanations:
                try:
                    ok = _verified(forest, res.instance, exp, args.budget)
                except BudgetExceeded as e:
                    print(f"row {i}: verification impossible: {e}", file=sys.stderr)
                    ok = False
                if not ok:
                    failures += 1
                    print(
                        f"row {i}: verification FAILED for "
                        f"{_format_explanation(forest, exp)}",
                        file=sys.stderr,
                    )
                verdicts.append(ok)
        if args.json:
            record = {"row": i, **res.to_dict(forest)}
            if args.verify:
                record["verified"] = verdicts
            rows.append(record)
        elif args.mode == "enumerate":
            print(f"row {i}: {_prediction_line(forest, res.instance)}")
            for exp in res.explanations:
                print(f"  {exp.kind}: {_format_explanation(forest, exp)}")
        else:
            for exp in res.explanations:
                print(_format_explanation(forest, exp))
    if args.json:
        print(json.dumps(rows, indent=2))
    return 1 if failures else 0


def _cmd_encode(args) -> int:
    forest, instances = _load_rows(args)
    if len(instances) != 1:
        raise LoadError("encode needs exactly one row; pass --row")
    instance = instances[0]
    encoding, softs = encode_for_instance(forest, instance, _options(args))
    comments = [
        f"misclassification formula, target class "
        f"{forest.classes[encoding.target]!r}",
        "assume the listed literals (or add them as units) to pin the instance",
    ]
    for soft in softs:
        spec = forest.features[soft.feature]
        comments.append(f"soft {soft.literal} feature {spec.id} {spec.name}")
    text = write_dimacs(encoding.nvars, encoding.clauses, comments)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_bench(args) -> int:
    forest, results = _run_explanations(args)
    if args.json:
        print(json.dumps([
            {"row": i, "prediction": r.prediction, "stats": r.stats}
            for i, r in enumerate(results)
        ], indent=2))
    else:
        print(format_report(results))
    return 0


def _cmd_reduce(args) -> int:
    try:
        with open(args.dnf, "r", encoding="utf-8") as fh:
            dnf = verify.parse_dnf(fh.read())
    except OSError as e:
        raise LoadError(f"cannot read DNF file: {e}") from None
    forest = verify.reduce_dnf_to_rf(dnf)
    text = dumps_model(forest)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(load_model(args.model))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve-dimacs":
        return solver_main([args.file, "--engine", args.engine])
    handlers = {
        "predict": _cmd_predict,
        "explain": _cmd_explain,
        "encode": _cmd_encode,
        "bench": _cmd_bench,
        "reduce": _cmd_reduce,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (LoadError, ModelError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ExplanationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
