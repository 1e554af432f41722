"""Command-line entry point: ``braidforge brute|evolve|sweep|render|eval``."""

from __future__ import annotations

import argparse
import contextlib
import sys

import numpy as np

from . import harness
from .algebra import frobenius_norm, spectral_norm
from .braidword import ParseError, format_word, mat, parse_word, render_diagram
from .gatesets import GATESET_NAMES, TARGET_NAMES, get_gateset
from .search_brute import exhaustive_search, write_frontier_csv
from .search_genetic import MUTATIONS, RECOMBINATIONS, GaConfig, describe

# default exhaustive-search ceilings by alphabet size; --force lifts them
LENGTH_CEILING = {4: 14}
DEFAULT_CEILING = 7


class CliError(Exception):
    pass


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _lambda(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"lambda must lie in [0, 1], got {text}")
    return value


def _lambda_list(text: str) -> list[float]:
    return [_lambda(t) for t in text.split(",") if t.strip()]


def _population(text: str) -> int:
    value = int(text)
    if value < 10:
        raise argparse.ArgumentTypeError("population must be at least 10")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _add_problem(p, default_target="x-rotation"):
    p.add_argument("--gateset", default="fibonacci", help=f"{' | '.join(GATESET_NAMES)} or a gate-set file")
    p.add_argument("--target", default=default_target, help=" | ".join(TARGET_NAMES))


def _add_ga(p):
    p.add_argument("--population", type=_population, default=80)
    p.add_argument("--generations", type=_nonnegative, default=1000)
    p.add_argument("--seed", type=int, default=0, help="run k uses seed + k")
    p.add_argument("--runs", type=_positive, default=1)
    p.add_argument("--recombination", choices=RECOMBINATIONS, default="contextual")
    p.add_argument("--mutation", choices=MUTATIONS, default="off", help="experimental; off reproduces the published algorithm")
    p.add_argument("--mutation-rate", type=float, default=0.1)
    p.add_argument("--init-length", type=int, nargs=2, default=(1, 40), metavar=("MIN", "MAX"))
    p.add_argument("--workers", type=_positive, default=None, help="process count (capped by BRAIDFORGE_THREADS)")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")


def _ga_config(args) -> GaConfig:
    return GaConfig(
        population_size=args.population,
        generations=args.generations,
        recombination=args.recombination,
        mutation=args.mutation,
        mutation_rate=args.mutation_rate,
        init_length_range=tuple(args.init_length),
        rng_seed=args.seed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braidforge", description="Approximate quantum gates with braid words.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("brute", help="exhaustive minimum-error frontier")
    _add_problem(p)
    p.add_argument("--max-length", type=_positive, required=True)
    p.add_argument("--stop-error", type=float, default=None)
    p.add_argument("--force", action="store_true", help="allow lengths above the default ceiling")
    p.add_argument("--workers", type=_positive, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("evolve", help="GA runs; per-generation across-run means")
    _add_problem(p)
    p.add_argument("--lambda", dest="lam", type=_lambda, default=0.0)
    _add_ga(p)

    p = sub.add_parser(
        "sweep",
        help="GA runs per lambda; mean and std of final braids",
        description="Standard deviations divide by the number of runs (population style).",
    )
    _add_problem(p)
    p.add_argument("--lambdas", type=_lambda_list, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    _add_ga(p)
    p.set_defaults(generations=500)

    p = sub.add_parser("render", help="SVG diagram of a braid word")
    p.add_argument("--word", required=True)
    p.add_argument("--gateset", default="fibonacci")
    p.add_argument("--strands", type=int, default=None, help="default: generator count + 1")
    p.add_argument("--out", default=None)

    p = sub.add_parser("eval", help="error, length and matrix of a braid word")
    p.add_argument("--word", required=True)
    _add_problem(p)
    p.add_argument("--norm", choices=("frobenius", "spectral"), default="frobenius")
    return parser


def cmd_brute(args) -> None:
    gs, tg = harness.resolve(args.gateset, args.target)
    ceiling = LENGTH_CEILING.get(gs.alphabet_size, DEFAULT_CEILING)
    if args.max_length > ceiling and not args.force:
        raise CliError(f"--max-length {args.max_length} exceeds the ceiling {ceiling} for {gs.name!r}; pass --force")
    workers = harness.worker_count(args.workers)
    frontier = exhaustive_search(gs, tg, args.max_length, args.stop_error, workers=workers)
    with _output(args.out) as fh:
        write_frontier_csv(frontier, fh)


def cmd_evolve(args) -> None:
    records = harness.run_batch(args.gateset, args.target, args.lam, _ga_config(args), args.runs, args.workers)
    with _output(args.out) as fh:
        harness.write_curve_csv(harness.mean_curve(records), fh)
    # keep stdout clean when the CSV goes there
    stream = sys.stderr if args.out in (None, "-") else sys.stdout
    print("best:", describe(harness.overall_best(records)), file=stream)


def cmd_sweep(args) -> None:
    rows = harness.run_sweep(args.gateset, args.target, args.lambdas, _ga_config(args), args.runs, args.workers)
    with _output(args.out) as fh:
        harness.write_sweep_csv(rows, fh)


def cmd_render(args) -> None:
    gs = get_gateset(args.gateset)
    word = parse_word(args.word, gs)
    strands = args.strands if args.strands is not None else gs.generator_count + 1
    svg = render_diagram(word, strands)
    with _output(args.out) as fh:
        fh.write(svg)


def _fmt_complex(z: complex) -> str:
    return f"{z.real:+.6f}{z.imag:+.6f}i"


def cmd_eval(args) -> None:
    gs, tg = harness.resolve(args.gateset, args.target)
    word = parse_word(args.word, gs)
    m = mat(word, gs)
    norm = frobenius_norm if args.norm == "frobenius" else spectral_norm
    err = norm(m - tg.matrix)
    print(f"word: {format_word(word)}")
    print(f"length: {len(word)}")
    print(f"error: {err!r}")
    print("matrix:")
    for row in np.asarray(m):
        print("  " + "  ".join(_fmt_complex(z) for z in row))


COMMANDS = {"brute": cmd_brute, "evolve": cmd_evolve, "sweep": cmd_sweep, "render": cmd_render, "eval": cmd_eval}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"braidforge {args.command}: parse error at {exc}", file=sys.stderr)
        return 1
    except (CliError, ValueError, IndexError, OSError) as exc:
        print(f"braidforge {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
