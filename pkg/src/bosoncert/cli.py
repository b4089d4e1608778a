"""Command-line interface.

Subcommands: gen-matrix, distribution, sample, certify, reproduce.  Flags can
also be supplied through a JSON config file (--config); explicit flags win.

Exit codes: certify reports its verdict through the exit status
(0 = BosonLike, 2 = MeanFieldLike, 3 = Inconclusive); usage errors exit 64
and malformed input data exits 65 so they cannot be mistaken for verdicts.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import __version__
from .certification import (
    VERDICT_BOSON,
    VERDICT_INCONCLUSIVE,
    VERDICT_MEANFIELD,
    CountTable,
    certify_against_meanfield,
)
from .distinguishability import OverlapCoefficients
from .figures import FIGURES, reproduce
from .io import (
    BatchParseError,
    load_matrix,
    read_batch_counts,
    save_matrix,
    write_batch,
    write_distribution_csv,
    write_report,
)
from .linalg import haar_unitary, is_unitary
from .models import Model, coherent_distribution, exact_distribution
from .patterns import enumerate_patterns, pattern_total
from .rng import derive_rng
from .sampling import SamplerSpec, postselect, sample

EXIT_USAGE = 64
EXIT_DATA = 65

_VERDICT_CODES = {VERDICT_BOSON: 0, VERDICT_MEANFIELD: 2, VERDICT_INCONCLUSIVE: 3}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep exit code 2 free for the MeanFieldLike verdict
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _pattern(text: str):
    try:
        return tuple(int(v) for v in text.replace("-", ",").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad pattern {text!r}")


def _amplitudes(text: str):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad amplitudes {text!r}")


def _load_coefficients(path) -> OverlapCoefficients:
    data = json.loads(Path(path).read_text())
    rows = [[complex(re, im) for re, im in row] for row in data["C"]]
    coeffs = OverlapCoefficients.from_rows(rows)
    if coeffs.photons != int(data.get("n", coeffs.photons)):
        raise ValueError(f"{path}: declared n does not match coefficient rows")
    return coeffs


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bosoncert", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-matrix", parents=[_config_parent()],
                       help="draw a Haar-random unitary and write it as JSON")
    p.add_argument("--modes", type=_positive_int, help="matrix dimension")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("distribution", parents=[_config_parent()],
                       help="exact per-event probabilities as CSV, one column per model")
    _add_state_flags(p)
    p.add_argument("--model", action="append", type=Model,
                   choices=list(Model), help="repeatable")
    p.add_argument("--out", required=True)

    p = sub.add_parser("sample", parents=[_config_parent()],
                       help="draw events and write an event,count CSV with sidecar")
    _add_state_flags(p)
    p.add_argument("--model", type=Model, choices=list(Model))
    p.add_argument("--samples", type=_positive_int)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--postselect", type=int, default=None, metavar="TOTAL",
                   help="keep only events with this photon total")
    p.add_argument("--out", required=True)

    p = sub.add_parser("certify", parents=[_config_parent()],
                       help="test batches against the mean-field null; verdict in exit code")
    p.add_argument("batches", nargs="+", metavar="BATCH_CSV")
    p.add_argument("--significance", type=float, default=1e-3)
    p.add_argument("--min-samples", type=_positive_int, default=10_000)
    p.add_argument("--out", default=None, help="also write the report JSON here")

    p = sub.add_parser("reproduce", parents=[_config_parent()],
                       help="run a figure pipeline into a directory of CSVs")
    p.add_argument("--figure", type=int, choices=FIGURES)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _config_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", default=None,
                        help="JSON file of flag defaults (explicit flags win)")
    return parent


def _add_state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--matrix-file", help="interferometer JSON (see gen-matrix)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--input", type=_pattern, metavar="S",
                       help="occupation pattern, e.g. 0,1,1,0")
    group.add_argument("--test-state", action="store_true",
                       help="single photon in every mode")
    p.add_argument("--photons", type=_positive_int, default=None,
                   help="photon total (event universe for the coherent model)")
    p.add_argument("--alpha", type=_amplitudes, default=None,
                   help="coherent amplitudes per mode, e.g. 1,1,0,0")
    p.add_argument("--coeffs", default=None,
                   help="overlap-coefficients JSON for the pd model")


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser,
                  argv: list[str]) -> None:
    if getattr(args, "config", None) is None:
        return
    config = json.loads(Path(args.config).read_text())
    if not isinstance(config, dict):
        parser.error(f"{args.config}: config must be a JSON object")
    for key, value in config.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            parser.error(f"{args.config}: unknown config key {key!r}")
        flag = "--" + key.replace("_", "-")
        if any(a == flag or a.startswith(flag + "=") for a in argv):
            continue  # explicit flag wins
        if dest == "input":
            value = _pattern(value) if isinstance(value, str) else tuple(value)
        elif dest == "alpha" and value is not None:
            value = tuple(float(v) for v in value)
        elif dest == "model" and isinstance(value, list):
            value = [Model(v) for v in value]
        elif dest == "model":
            value = Model(value)
        setattr(args, dest, value)


def _resolve_state(args, parser, modes: int):
    """Input pattern implied by --input/--test-state, or None for bare coherent runs."""
    if args.test_state:
        return (1,) * modes
    if args.input is not None:
        if len(args.input) != modes:
            parser.error(f"--input covers {len(args.input)} modes, matrix has {modes}")
        return args.input
    return None


def _default_alpha(pattern) -> tuple[float, ...]:
    # occupied modes get unit amplitude, empty modes stay dark
    return tuple(1.0 if v else 0.0 for v in pattern)


def _cmd_gen_matrix(args, parser) -> int:
    if args.modes is None:
        parser.error("gen-matrix requires --modes")
    mat = haar_unitary(args.modes, derive_rng(args.seed))
    assert is_unitary(mat)
    save_matrix(args.out, mat)
    print(f"wrote {args.modes}x{args.modes} unitary to {args.out}")
    return 0


def _cmd_distribution(args, parser) -> int:
    if not args.model:
        parser.error("distribution requires at least one --model")
    if args.matrix_file is None:
        parser.error("distribution requires --matrix-file")
    mat = load_matrix(args.matrix_file)
    modes = mat.shape[0]
    pattern = _resolve_state(args, parser, modes)
    if pattern is None and args.photons is None:
        parser.error("need --input, --test-state, or --photons to fix the event universe")
    n = pattern_total(pattern) if pattern is not None else args.photons
    events = enumerate_patterns(n, modes)
    columns = {}
    for model in args.model:
        name = str(model)
        if model is Model.COHERENT:
            alpha = args.alpha if args.alpha is not None else _default_alpha(pattern or ())
            if len(alpha) != modes:
                parser.error(f"--alpha covers {len(alpha)} modes, matrix has {modes}")
            full, tail = coherent_distribution(mat, alpha)
            columns[name] = {e: full.get(e, 0.0) for e in events}
        else:
            if pattern is None:
                parser.error(f"model {name} requires --input or --test-state")
            coeffs = _load_coefficients(args.coeffs) if args.coeffs else None
            if model is Model.PARTIALLY_DISTINGUISHABLE and coeffs is None:
                parser.error("pd model requires --coeffs")
            columns[name] = exact_distribution(
                model, mat, pattern,
                coefficients=coeffs if model is Model.PARTIALLY_DISTINGUISHABLE else None,
            )
    write_distribution_csv(args.out, events, columns)
    for name, dist in columns.items():
        total = sum(dist.values())
        print(f"{name}: column sum {total:.12f}")
    print(f"wrote {len(events)} events x {len(columns)} models to {args.out}")
    return 0


def _cmd_sample(args, parser) -> int:
    if args.model is None or args.samples is None:
        parser.error("sample requires --model and --samples")
    if args.matrix_file is None:
        parser.error("sample requires --matrix-file")
    mat = load_matrix(args.matrix_file)
    modes = mat.shape[0]
    pattern = _resolve_state(args, parser, modes)
    model = args.model
    if model is Model.COHERENT:
        alpha = args.alpha
        if alpha is None:
            if pattern is None:
                parser.error("coherent sampling needs --alpha or an input pattern")
            alpha = _default_alpha(pattern)
        if len(alpha) != modes:
            parser.error(f"--alpha covers {len(alpha)} modes, matrix has {modes}")
        spec = SamplerSpec(model, amplitudes=alpha)
    elif model is Model.PARTIALLY_DISTINGUISHABLE:
        if args.coeffs is None:
            parser.error("pd sampling requires --coeffs")
        if pattern is None:
            parser.error("pd sampling requires --input or --test-state")
        spec = SamplerSpec(model, coefficients=_load_coefficients(args.coeffs))
    else:
        if pattern is None:
            parser.error(f"model {model} requires --input or --test-state")
        spec = SamplerSpec(model)
    batch = sample(spec, mat, pattern, args.samples, args.seed,
                   matrix_id=str(args.matrix_file))
    if args.postselect is not None:
        batch = postselect(batch, args.postselect)
    write_batch(args.out, batch, matrix_file=str(args.matrix_file))
    print(f"wrote {len(batch)} events to {args.out}")
    return 0


def _cmd_certify(args, parser) -> int:
    counts: Counter = Counter()
    try:
        for path in args.batches:
            counts.update(read_batch_counts(path))
    except BatchParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    shapes = {(pattern_total(e), len(e)) for e in counts}
    if len(shapes) != 1:
        print(f"error: batches mix event shapes: {sorted(shapes)}", file=sys.stderr)
        return EXIT_DATA
    (n, modes), = shapes
    table = CountTable(dict(counts), n, modes, sum(counts.values()))
    try:
        report = certify_against_meanfield(
            table, significance=args.significance, min_samples=args.min_samples
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    text = write_report(report, args.out)
    print(text, end="")
    return _VERDICT_CODES[report.verdict]


def _cmd_reproduce(args, parser) -> int:
    if args.figure is None:
        parser.error("reproduce requires --figure")
    paths = reproduce(args.figure, args.seed, args.out, workers=args.workers)
    for path in paths:
        print(f"wrote {path}")
    return 0


_COMMANDS = {
    "gen-matrix": _cmd_gen_matrix,
    "distribution": _cmd_distribution,
    "sample": _cmd_sample,
    "certify": _cmd_certify,
    "reproduce": _cmd_reproduce,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, parser, argv)
    try:
        return _COMMANDS[args.command](args, parser)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
