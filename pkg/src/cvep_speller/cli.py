"""Command-line entry point: ``cvep <subcommand>``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import io
from .code import build_codebook, generate_msequence
from .dsp import FilterSpec, average_repetitions, bandpass_filter
from .exceptions import CvepError
from .harness import (
    ExperimentConfig,
    Mode,
    decode_word_zero_calibration,
    default_dictionary_path,
    run_experiment,
)
from .lexicon import KeyboardLayout
from .synth import SynthConfig


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _add_code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=int, default=6, help="LFSR register length")
    p.add_argument("--taps", type=_int_list, default=None, help="comma-separated 1-based tap positions")
    p.add_argument("--num-chars", type=int, default=32, help="keyboard size L")
    p.add_argument("--bits-per-shift", type=int, default=2)


def _add_filter_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--low-cut", type=float, default=1.0)
    p.add_argument("--high-cut", type=float, default=15.0)
    p.add_argument("--filter-order", type=int, default=4)


def _add_experiment_args(p: argparse.ArgumentParser, calibrated: bool) -> None:
    _add_code_args(p)
    _add_filter_args(p)
    p.add_argument("--seed", type=int, required=True, help="master seed (also seeds the noise)")
    p.add_argument("--dictionary", default=None, help="word list, one word per line")
    p.add_argument("--repetitions", type=_int_list, default=(2, 4, 8, 12), help="N values to sweep")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--word-length", type=int, default=3)
    p.add_argument("--any-length", action="store_true", help="keep dictionary words of every length")
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--samples-per-bit", type=int, default=4)
    p.add_argument("--channels", type=int, default=1)
    p.add_argument("--no-filter", action="store_true")
    if calibrated:
        p.add_argument("--calibration-chars", type=_int_list, default=(0, 10, 20))
    p.add_argument("--output", "-o", default=None, help="report path (stdout table if omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvep", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-code", help="print the m-sequence and the per-character codebook")
    _add_code_args(p)

    p = sub.add_parser("filter", help="band-pass an epoch file")
    p.add_argument("input")
    p.add_argument("output")
    _add_filter_args(p)

    p = sub.add_parser("simulate", help="zero-calibration experiment sweep on synthetic epochs")
    _add_experiment_args(p, calibrated=False)

    p = sub.add_parser("baseline", help="calibrated template-matching sweep on synthetic epochs")
    _add_experiment_args(p, calibrated=True)

    p = sub.add_parser("decode", help="decode one word from an epoch file (one epoch per letter)")
    p.add_argument("epochs")
    p.add_argument("--dictionary", default=None)
    p.add_argument("--word-length", type=int, default=None, help="restrict dictionary to this length")
    p.add_argument("--num-chars", type=int, default=32)
    p.add_argument("--shift-samples", type=int, default=8)
    p.add_argument("--no-filter", action="store_true")
    _add_filter_args(p)
    return parser


def _codebook(args):
    return build_codebook(generate_msequence(args.order, args.taps), args.num_chars, args.bits_per_shift)


def cmd_gen_code(args) -> int:
    cb = _codebook(args)
    print(cb.base)
    for p in range(cb.num_chars):
        print(f"{p},{int(cb.lags[p])},{''.join(map(str, cb.codes[p]))}")
    return 0


def cmd_filter(args) -> int:
    out = []
    for ep in io.load_epochs(args.input):
        spec = FilterSpec(args.low_cut, args.high_cut, args.filter_order, ep.sampling_rate)
        out.append(bandpass_filter(ep, spec))
    io.write_epochs(args.output, out)
    return 0


def _experiment_config(args, mode: Mode) -> ExperimentConfig:
    synth = SynthConfig(
        codebook=_codebook(args),
        samples_per_bit=args.samples_per_bit,
        channels=args.channels,
        noise_sigma=args.noise_sigma,
        rng_seed=args.seed,
    )
    layout = KeyboardLayout(characters=_characters(args.num_chars), shift_samples=synth.shift_samples)
    spec = None
    if not args.no_filter:
        spec = FilterSpec(args.low_cut, args.high_cut, args.filter_order, synth.sampling_rate)
    extra = {"calibration_chars": args.calibration_chars} if mode is Mode.CALIBRATED else {}
    return ExperimentConfig(
        synth=synth,
        layout=layout,
        filter_spec=spec,
        use_filter=not args.no_filter,
        repetitions_list=args.repetitions,
        trials=args.trials,
        word_length=args.word_length,
        dictionary_path=args.dictionary,
        restrict_to_word_length=not args.any_length,
        mode=mode,
        master_seed=args.seed,
        **extra,
    )


def _characters(num_chars: int) -> str:
    base = KeyboardLayout().characters
    if not 26 <= num_chars <= len(base):
        raise CvepError(f"keyboard size must be between 26 and {len(base)}, got {num_chars}")
    return base[:num_chars]


def _run_sweep(args, mode: Mode) -> int:
    config = _experiment_config(args, mode)
    report = run_experiment(config)
    if args.output:
        io.write_report(report, args.output, args.format)
    print(f"dictionary: {report.dictionary_size} words, mode={mode.value}, seed={report.seed}")
    print("N,trials,lag_accuracy,word_accuracy,mean_letters,unresolved,empty,wrong_word")
    for c in report.cells:
        print(
            f"{c.repetitions},{c.trials},{c.lag_accuracy:.4f},{c.word_accuracy:.4f},"
            f"{c.mean_letters:.4f},{c.n_unresolved},{c.n_empty},{c.n_wrong_word}"
        )
    return 0


def cmd_decode(args) -> int:
    epochs = io.load_epochs(args.epochs)
    if len(epochs) < 2:
        raise CvepError("need at least two letter epochs to decode")
    layout = KeyboardLayout(characters=_characters(args.num_chars), shift_samples=args.shift_samples)
    dictionary = io.load_dictionary(args.dictionary or default_dictionary_path(), layout)
    if args.word_length:
        dictionary = dictionary.restrict_length(args.word_length)
    responses = []
    for ep in epochs:
        if not args.no_filter:
            ep = bandpass_filter(ep, FilterSpec(args.low_cut, args.high_cut, args.filter_order, ep.sampling_rate))
        responses.append(average_repetitions(ep))
    out = decode_word_zero_calibration(responses, dictionary)
    for i, shown in enumerate(out["displayed"]):
        lag = "-" if i == 0 else out["estimated_signature"][i - 1]
        score = "-" if i == 0 else f"{out['scores'][i - 1]:.4f}"
        print(f"letter {i + 1}: lag={lag} score={score} feedback={' '.join(shown) or '(none)'}")
    if out["resolved_word"]:
        print(f"resolved: {out['resolved_word']} after {out['letters_consumed']} letters")
    else:
        print(f"not resolved: {out['failure']}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    handlers = {
        "gen-code": cmd_gen_code,
        "filter": cmd_filter,
        "simulate": lambda a: _run_sweep(a, Mode.ZERO_CALIBRATION),
        "baseline": lambda a: _run_sweep(a, Mode.CALIBRATED),
        "decode": cmd_decode,
    }
    try:
        return handlers[args.command](args)
    except (CvepError, OSError, ValueError) as exc:
        print(f"cvep: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
