"""Batch command-line front end.

Exit codes: 0 success, 1 verification found violations, 2 malformed or
unreadable input, 3 invalid parameter value.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import basegen, csvio, metrics, theory
from .core import EnsembleBase, InvalidInputError, InvalidKError
from .pipeline import CEHMConfig, cehm

log = logging.getLogger("khem")

EXIT_VIOLATION, EXIT_INPUT, EXIT_PARAM = 1, 2, 3


class ParamError(Exception):
    pass


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ParamError(msg)


def cmd_consensus(args) -> int:
    _need(args.max_iters >= 1, "--max-iters must be >= 1")
    try:
        base = EnsembleBase(csvio.read_label_matrix(args.input, args.header))
    except InvalidInputError as exc:
        raise csvio.MalformedInputError(str(exc)) from exc
    config = CEHMConfig(
        max_iters=args.max_iters,
        seed=args.seed,
        diffusion_mode=args.diffusion_mode,
        on_degenerate="raise" if args.strict_init else "fallback",
    )
    try:
        res = cehm(base, args.k, config)
    except InvalidKError as exc:
        raise ParamError(str(exc)) from exc
    csvio.write_matrix(args.output, res.labels)
    if args.trace:
        csvio.write_trace(args.trace, res.diffusion_loss_trace, res.adjust_loss_trace)
    summary = {
        "n": res.n,
        "l": res.l,
        "n_c": res.n_c,
        "k": res.k,
        "init_loss": res.init_loss,
        "rounds": res.diffusion_rounds,
        "iterations": res.iterations,
        "final_loss": res.final_loss,
        "seed": res.seed,
    }
    print(json.dumps(summary))
    return 0


def cmd_generate(args) -> int:
    _need(args.runs >= 1, "--runs must be >= 1")
    _need(args.k >= 2, "--k must be >= 2")
    points = csvio.read_points(args.points, args.header)
    _need(args.k <= points.shape[0], "--k must not exceed the number of points")
    base = basegen.generate_base(points, args.k, args.runs, args.seed, standardize_features=not args.raw)
    csvio.write_matrix(args.output, base.labels)
    log.info("wrote %d x %d base to %s", base.n, base.l, args.output)
    return 0


def cmd_blobs(args) -> int:
    _need(args.n >= args.k >= 1 and args.d >= 1, "need n >= k >= 1 and d >= 1")
    points, truth = basegen.gaussian_blobs(args.n, args.k, args.d, args.spread, args.seed)
    csvio.write_matrix(args.output, points)
    if args.truth:
        csvio.write_matrix(args.truth, truth)
    return 0


def cmd_eval(args) -> int:
    pred = csvio.read_labels(args.pred, args.header)
    truth = csvio.read_labels(args.truth, args.header)
    if pred.shape != truth.shape or pred.size < 2:
        raise csvio.MalformedInputError(
            f"need two equal-length label files with >= 2 entries, got {pred.size} and {truth.size}"
        )
    print(f'{{"nmi": {metrics.nmi(pred, truth):.6f}, "ari": {metrics.ari(pred, truth):.6f}}}')
    return 0


def cmd_verify(args) -> int:
    _need(args.trials >= 1, "--trials must be >= 1")
    failed = False
    for rep in theory.run_all(args.seed, args.trials):
        print(json.dumps(rep.summary()))
        for v in rep.violations:
            print(json.dumps({"suite": rep.suite, "witness": v}))
        failed |= not rep.ok
    return EXIT_VIOLATION if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="khem", description="k-hyperedge medoids clustering ensemble")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("consensus", help="fuse an ensemble base into k clusters")
    c.add_argument("--input", required=True, help="n x l integer CSV, one column per base clustering")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--output", required=True, help="labels file, one integer per line")
    c.add_argument("--trace", help="write stage,iteration,loss rows here")
    c.add_argument("--max-iters", type=int, default=100)
    c.add_argument("--diffusion-mode", choices=("rebuild", "grow"), default="rebuild")
    c.add_argument("--strict-init", action="store_true", help="fail instead of falling back on degenerate medoids")
    c.add_argument("--header", action="store_true", help="skip the first line of the input")
    c.set_defaults(func=cmd_consensus)

    g = sub.add_parser("generate", help="build an ensemble base by repeated k-means")
    g.add_argument("--points", required=True)
    g.add_argument("--k", type=int, required=True, help="true cluster count; lower end of the k range")
    g.add_argument("--runs", type=int, default=30, help="number of base clusterings")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", required=True)
    g.add_argument("--raw", action="store_true", help="skip z-score standardisation")
    g.add_argument("--header", action="store_true")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("blobs", help="write a synthetic Gaussian-blob data set")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--d", type=int, default=2)
    b.add_argument("--spread", type=float, default=1.0)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--output", required=True)
    b.add_argument("--truth")
    b.set_defaults(func=cmd_blobs)

    e = sub.add_parser("eval", help="NMI and ARI of predicted labels against truth")
    e.add_argument("--pred", required=True)
    e.add_argument("--truth", required=True)
    e.add_argument("--header", action="store_true")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="randomised checks of the loss and distance inequalities")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except csvio.MalformedInputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except ParamError as exc:
        log.error("%s", exc)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
