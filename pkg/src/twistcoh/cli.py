"""Command line entry point: ``twistcoh verify|arrangement|aomoto|corpus``."""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .errors import ParseError, UsageError
from .problem import load
from .runner import run

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

VERB_MODES = {
    "verify": ("divisor_system", "affine", "arrangement", "aomoto"),
    "arrangement": ("arrangement",),
    "aomoto": ("aomoto",),
}


def _parser():
    ap = argparse.ArgumentParser(prog="twistcoh", description="Exact checks for twisted cohomology certificates.")
    ap.add_argument("--version", action="version", version=f"twistcoh {__version__}")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")
        p.add_argument("--emit-forms", action="store_true", help="print each cocycle in the form grammar")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized cross-checks")

    for verb, text in (
        ("verify", "run any problem file"),
        ("arrangement", "run an arrangement problem file"),
        ("aomoto", "run an Aomoto complex problem file"),
    ):
        p = sub.add_parser(verb, help=text)
        p.add_argument("file")
        common(p)
    p = sub.add_parser("corpus", help="run the bundled examples")
    p.add_argument("--only", metavar="ID", help="run a single example (or an id prefix such as conics)")
    p.add_argument("--jobs", type=int, default=1, help="examples to run in parallel")
    common(p)
    return ap


def _write_json(target, doc):
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def _run_one(job):
    pf, seed, emit_forms, modes = job
    rep = run(pf, seed=seed, emit_forms=emit_forms, mode=modes)
    return rep.passed, rep.summary(), rep.to_json()


def _verify(args):
    pf = load(args.file)
    passed, summary, doc = _run_one((pf, args.seed, args.emit_forms, VERB_MODES[args.verb]))
    if doc.get("error") and not doc["checks"]:
        raise UsageError(doc["error"])
    if args.json != "-":
        print(summary)
    if args.json:
        _write_json(args.json, doc)
    return EXIT_OK if passed else EXIT_FAIL


def _corpus(args):
    from .corpus import load_all

    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    jobs = [(pf, args.seed, args.emit_forms, None) for pf in load_all(args.only)]
    if args.jobs == 1:
        results = [_run_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    quiet = args.json == "-"
    failed = [doc["id"] for passed, _, doc in results if not passed]
    if not quiet:
        for _, summary, _ in results:
            print(summary)
        print(f"{len(results) - len(failed)}/{len(results)} examples passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    if args.json:
        _write_json(args.json, {
            "tool": "twistcoh",
            "version": __version__,
            "seed": args.seed,
            "passed": not failed,
            "reports": [doc for _, _, doc in results],
        })
    return EXIT_FAIL if failed else EXIT_OK


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.verb == "corpus":
            return _corpus(args)
        return _verify(args)
    except ParseError as exc:
        print(f"twistcoh: parse error: {exc}", file=sys.stderr)
    except (UsageError, OSError) as exc:
        print(f"twistcoh: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
