"""Command line entry points.

Subcommands:

``schur table N``
    Print the character table of the symmetric group on N points.

``schur selfcheck N K``
    Build the isotypic projectors for N factors over R^K, run the exact
    integer identity checks, and report component dimensions.

``schur transform FILE... [options]``
    Covariance tensor of the given variables, decomposed into isotypic
    amplitudes.

``schur content FILE... -n FACTORS [options]``
    Amplitudes for every FACTORS-sized subset (or sliding window) of the
    variables.

``schur classify --class LABEL=MANIFEST ... --candidate FILE -n FACTORS``
    Assign the candidate variable to the nearest class by mean content.

Heavy numeric imports happen inside the handlers so that ``table`` stays
quick.  Data and resource errors print one line to stderr and exit 1.
"""

from __future__ import annotations

import argparse
import sys

from .exceptions import SchurTransformError


def _budget_bytes(args):
    if getattr(args, "budget", None) is None:
        return None
    from .validation import budget_bytes_from_mib

    return budget_bytes_from_mib(args.budget)


def _bundle_options(args):
    options = {}
    budget = _budget_bytes(args)
    if budget is not None:
        options["budget_bytes"] = budget
    if getattr(args, "cache", None):
        options["cache_dir"] = args.cache
    return options


def _load_series(args):
    from . import io as sio

    if args.manifest:
        if args.files:
            raise SchurTransformError("give input files or --manifest, not both")
        series = sio.read_series(args.manifest)
        sources = [args.manifest]
    else:
        if not args.files:
            raise SchurTransformError("no input files (give files or --manifest)")
        series = sio.read_series(args.files)
        sources = list(args.files)
    return series, sources


def _emit(args, obj, sources):
    from . import io as sio

    text = sio.write_result(obj, format=args.format, out=args.out, source=sources)
    if args.out is None:
        sys.stdout.write(text)


def _cmd_table(args) -> int:
    from .characters import character_table

    table = character_table(args.n)
    classes = [
        "(" + ",".join(str(p) for p in c) + ")" for c in table.cycle_types
    ]
    rows = [["class"] + classes, ["size"] + [str(s) for s in table.class_sizes]]
    for lam, row in zip(table.partitions, table.values):
        name = "(" + ",".join(str(p) for p in lam) + ")"
        rows.append([name] + [str(v) for v in row])
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    print(f"character table of S_{args.n} ({len(table.partitions)} classes)")
    for r in rows:
        print(
            r[0].ljust(widths[0])
            + "  "
            + "  ".join(v.rjust(w) for v, w in zip(r[1:], widths[1:]))
        )
    return 0


def _cmd_selfcheck(args) -> int:
    from . import action
    from .partitions import schur_functor_dimension

    bundle = action.load_or_build_projectors(args.n, args.k, **_bundle_options(args))
    report = action.verify_projectors(bundle, raise_on_failure=False)
    print(f"projectors for n={bundle.n} factors over R^{bundle.k}")
    for line in report.lines():
        print(line)
    print("component dimensions:")
    dims = bundle.component_dimensions()
    total = 0
    for lam in bundle.partitions:
        name = "(" + ",".join(str(p) for p in lam) + ")"
        dim = dims[lam]
        total += dim
        note = "" if schur_functor_dimension(lam, bundle.k) else "  (vanishes)"
        print(f"  {name:<16}{dim}{note}")
    print(f"total {total} = {bundle.k}^{bundle.n} = {bundle.k ** bundle.n}")
    if not report.passed:
        print("selfcheck FAILED", file=sys.stderr)
        return 1
    return 0


def _cmd_transform(args) -> int:
    from . import io as sio
    from .statistics import sample_covariance_tensor
    from .transform import schur_transform

    series, sources = _load_series(args)
    refs = None
    if args.refs:
        refs = sio.read_references(args.refs, series.length, series.dim)
    tensor = sample_covariance_tensor(series, references=refs, normalize=args.normalize)
    result = schur_transform(tensor, **_bundle_options(args))
    _emit(args, result, sources)
    return 0


def _cmd_content(args) -> int:
    from . import io as sio
    from .transform import schur_content

    series, sources = _load_series(args)
    refs = None
    if args.refs:
        refs = sio.read_references(args.refs, series.length, series.dim)
    content = schur_content(
        series,
        args.factors,
        mode=args.mode,
        references=refs,
        normalize=args.normalize,
        **_bundle_options(args),
    )
    _emit(args, content, sources)
    return 0


def _cmd_classify(args) -> int:
    from . import io as sio
    from .transform import classify

    classes = {}
    for entry in args.classes:
        label, sep, manifest = entry.partition("=")
        if not sep or not label or not manifest:
            raise SchurTransformError(
                f"--class takes LABEL=MANIFEST, got {entry!r}"
            )
        if label in classes:
            raise SchurTransformError(f"duplicate class label {label!r}")
        classes[label] = sio.read_series(manifest)
    candidate = sio.read_points_file(args.candidate)
    result = classify(
        classes,
        candidate,
        args.factors,
        metric=args.metric,
        normalize=args.normalize,
        **_bundle_options(args),
    )
    _emit(args, result, [args.candidate])
    return 0


def _add_output_options(sub):
    sub.add_argument(
        "--format",
        choices=("table", "struct", "plot-csv"),
        default="table",
        help="output form (default: table)",
    )
    sub.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


def _add_resource_options(sub):
    sub.add_argument(
        "--budget",
        type=int,
        metavar="MIB",
        help="memory budget in MiB (default: SCHURTRANSFORM_BUDGET_MIB or 4096)",
    )
    sub.add_argument("--cache", metavar="DIR", help="projector cache directory")


def _add_input_options(sub):
    sub.add_argument("files", nargs="*", metavar="FILE", help="one variable per file")
    sub.add_argument("--manifest", metavar="PATH", help="file listing the variables")
    sub.add_argument(
        "--refs", metavar="PATH", help="reference points, one row per variable"
    )
    sub.add_argument(
        "--normalize",
        action="store_true",
        help="divide the covariance tensor by the sample count",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schur",
        description="isotypic decomposition of sample covariance tensors",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="character table of the symmetric group")
    p.add_argument("n", type=int, help="number of points")
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("selfcheck", help="verify the projector identities")
    p.add_argument("n", type=int, help="number of tensor factors")
    p.add_argument("k", type=int, help="dimension of each factor")
    _add_resource_options(p)
    p.set_defaults(handler=_cmd_selfcheck)

    p = sub.add_parser("transform", help="decompose one covariance tensor")
    _add_input_options(p)
    _add_output_options(p)
    _add_resource_options(p)
    p.set_defaults(handler=_cmd_transform)

    p = sub.add_parser("content", help="amplitudes over variable subsets")
    _add_input_options(p)
    p.add_argument(
        "-n",
        "--factors",
        type=int,
        required=True,
        help="tensor factors per subset",
    )
    p.add_argument(
        "--mode",
        choices=("all", "seq", "sequential"),
        default="all",
        help="subset choice: every combination or sliding windows",
    )
    _add_output_options(p)
    _add_resource_options(p)
    p.set_defaults(handler=_cmd_content)

    p = sub.add_parser("classify", help="assign a variable to the nearest class")
    p.add_argument(
        "--class",
        dest="classes",
        action="append",
        required=True,
        metavar="LABEL=MANIFEST",
        help="named class with a manifest of its variables (repeatable)",
    )
    p.add_argument("--candidate", required=True, metavar="FILE", help="variable to place")
    p.add_argument(
        "-n", "--factors", type=int, required=True, help="tensor factors per subset"
    )
    p.add_argument(
        "--metric",
        choices=("l1", "l2"),
        default="l2",
        help="distance between mean amplitude vectors (default: l2)",
    )
    p.add_argument("--normalize", action="store_true", help="normalized covariance")
    _add_output_options(p)
    _add_resource_options(p)
    p.set_defaults(handler=_cmd_classify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (SchurTransformError, OSError, ValueError) as exc:
        # bad input, bad range, missing file: one line, no traceback
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
