"""Spelling trials, the experiment sweep and report aggregation."""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .dsp import AveragedResponse, FilterSpec, average_repetitions, bandpass_filter
from .exceptions import ConfigInvalidError, CvepError, WordNotInDictionaryError
from .lagdec import (
    build_calibration_template,
    decode_absolute,
    estimate_relative_lag,
    promote_to_absolute,
)
from .lexicon import (
    Dictionary,
    KeyboardLayout,
    ResolutionKind,
    display_prefixes,
    filter_candidates,
    refine,
    resolution,
    signature_of_word,
)
from .synth import SynthConfig, synth_epoch


class Mode(str, enum.Enum):
    ZERO_CALIBRATION = "zero_calibration"
    CALIBRATED = "calibrated"


# domain tags for per-letter seed derivation
_WORD_LETTER = 0
_CALIBRATION = 1


def default_dictionary_path() -> Path:
    return Path(str(resources.files("cvep_speller") / "data" / "words3.txt"))


@dataclass(frozen=True)
class ExperimentConfig:
    synth: SynthConfig = field(default_factory=SynthConfig)
    layout: KeyboardLayout | None = None
    filter_spec: FilterSpec | None = None
    use_filter: bool = True
    repetitions_list: tuple[int, ...] = (2, 4, 8, 12)
    trials: int = 100
    word_length: int = 3
    dictionary_path: str | None = None
    restrict_to_word_length: bool = True
    mode: Mode = Mode.ZERO_CALIBRATION
    calibration_chars: tuple[int, ...] = (0, 10, 20)
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "repetitions_list", tuple(int(n) for n in self.repetitions_list))
        object.__setattr__(self, "calibration_chars", tuple(int(c) for c in self.calibration_chars))
        if self.layout is None:
            object.__setattr__(self, "layout", KeyboardLayout(shift_samples=self.synth.shift_samples))
        if self.use_filter and self.filter_spec is None:
            object.__setattr__(self, "filter_spec", FilterSpec(sampling_rate=self.synth.sampling_rate))
        self.validate()

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigInvalidError("trials must be >= 1")
        if not self.repetitions_list or min(self.repetitions_list) < 1:
            raise ConfigInvalidError("repetitions must be >= 1")
        if self.word_length < 2:
            raise ConfigInvalidError("word_length must be >= 2")
        if self.layout.num_chars != self.synth.num_chars:
            raise ConfigInvalidError(
                f"layout has {self.layout.num_chars} characters, codebook {self.synth.num_chars}"
            )
        if self.layout.shift_samples != self.synth.shift_samples:
            raise ConfigInvalidError(
                f"layout lag spacing {self.layout.shift_samples} != synth spacing {self.synth.shift_samples}"
            )
        if self.mode is Mode.CALIBRATED:
            if not self.calibration_chars:
                raise ConfigInvalidError("calibrated mode needs calibration_chars")
            if any(not 0 <= c < self.layout.num_chars for c in self.calibration_chars):
                raise ConfigInvalidError("calibration_chars outside the keyboard")
        if self.use_filter and self.filter_spec.sampling_rate != self.synth.sampling_rate:
            raise ConfigInvalidError("filter and synth sampling rates differ")

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def load_dictionary(self) -> Dictionary:
        d = Dictionary.from_file(self.dictionary_path or default_dictionary_path(), self.layout)
        if self.restrict_to_word_length:
            d = d.restrict_length(self.word_length)
        return d

    def echo(self) -> dict:
        """JSON-friendly summary of the configuration."""
        return {
            "mode": self.mode.value,
            "characters": self.layout.characters,
            "num_chars": self.layout.num_chars,
            "shift_samples": self.layout.shift_samples,
            "code_order": self.synth.codebook.base.order,
            "code_taps": list(self.synth.codebook.base.taps),
            "bits_per_shift": self.synth.codebook.bits_per_shift,
            "samples_per_bit": self.synth.samples_per_bit,
            "sampling_rate": self.synth.sampling_rate,
            "channels": self.synth.channels,
            "noise_sigma": self.synth.noise_sigma,
            "rng_seed": self.synth.rng_seed,
            "filter": None if not self.use_filter else dataclasses.asdict(self.filter_spec),
            "repetitions_list": list(self.repetitions_list),
            "trials": self.trials,
            "word_length": self.word_length,
            "restrict_to_word_length": self.restrict_to_word_length,
            "dictionary_path": str(self.dictionary_path or default_dictionary_path()),
            "calibration_chars": list(self.calibration_chars),
            "master_seed": self.master_seed,
        }


@dataclass(frozen=True)
class TrialResult:
    """Outcome of spelling one word.

    In zero-calibration mode the signatures are relative lags of letters
    2..k; in calibrated mode they are the absolute positions of all k letters.
    ``displayed[i]`` is the feedback shown after letter ``i + 1``.
    """

    mode: Mode
    repetitions: int
    target_word: str
    true_signature: tuple[int, ...]
    estimated_signature: tuple[int, ...]
    resolved_word: str | None
    failure: str | None
    letters_consumed: int
    scores: tuple[float, ...]
    displayed: tuple[tuple[str, ...], ...] = ()

    @property
    def lags_all_correct(self) -> bool:
        return self.estimated_signature == self.true_signature

    @property
    def word_correct(self) -> bool:
        return self.resolved_word == self.target_word


def derive_seed(*words: int) -> int:
    """Mix integers into one 64-bit seed via ``numpy.random.SeedSequence``."""
    return int(np.random.SeedSequence([int(w) for w in words]).generate_state(1, np.uint64)[0])


def preprocess(config: ExperimentConfig, position: int, repetitions: int, seed: int) -> AveragedResponse:
    epoch = synth_epoch(config.synth, position, repetitions, seed)
    if config.use_filter:
        epoch = bandpass_filter(epoch, config.filter_spec)
    return average_repetitions(epoch)


def _check_target(dictionary: Dictionary | None, config: ExperimentConfig, word: str) -> None:
    if len(word) != config.word_length:
        raise ConfigInvalidError(f"{word!r} is not {config.word_length} letters long")
    if dictionary is not None and word not in dictionary:
        raise WordNotInDictionaryError(f"{word!r} is not in the dictionary")


def decode_word_zero_calibration(
    responses: Sequence[AveragedResponse], dictionary: Dictionary
) -> dict:
    """Run the dictionary-constrained decoder over per-letter averaged responses.

    Returns a mapping with the estimated signature, the resolved word (or
    ``None``), the failure kind, the number of letters used before the word
    became unique, per-letter best scores and the feedback prefixes.
    """
    layout = dictionary.layout
    L, s = layout.num_chars, layout.shift_samples
    x_ref = responses[0]
    lags, scores, displayed = [], [], [()]
    candidates, template, resolved = None, None, None
    consumed = len(responses)
    for i, x in enumerate(responses[1:], start=1):
        if template is None:
            est = estimate_relative_lag(x_ref, x, L, s)
            lag = est.lag
            if candidates is None:
                candidates = filter_candidates(dictionary, layout, (lag,))
            else:
                candidates = refine(candidates, lag)
            displayed.append(tuple(display_prefixes(candidates)))
            res = resolution(candidates)
            if res.kind is ResolutionKind.UNIQUE:
                resolved = res.word
                consumed = i + 1
                first = layout.position(resolved[0])
                template = promote_to_absolute(x_ref, first, s, L)
        else:
            est = decode_absolute(template, x, L, s)
            lag = (est.lag - first) % L
            displayed.append((resolved[: i + 1],))
        lags.append(lag)
        scores.append(est.best_score)

    if resolved is not None:
        failure = None
    elif candidates is None or not candidates.words:
        failure = "empty"
    else:
        failure = "unresolved"
    return {
        "estimated_signature": tuple(lags),
        "resolved_word": resolved,
        "failure": failure,
        "letters_consumed": consumed,
        "scores": tuple(scores),
        "displayed": tuple(displayed),
        "candidates": candidates,
    }


def run_trial_zero_calibration(
    config: ExperimentConfig,
    dictionary: Dictionary,
    target_word: str,
    repetitions: int,
    trial_seed: int,
) -> TrialResult:
    _check_target(dictionary, config, target_word)
    layout = config.layout
    true_sig = signature_of_word(target_word, layout)
    try:
        responses = [
            preprocess(config, layout.position(c), repetitions, derive_seed(trial_seed, _WORD_LETTER, i))
            for i, c in enumerate(target_word)
        ]
        out = decode_word_zero_calibration(responses, dictionary)
    except CvepError as exc:
        return TrialResult(
            Mode.ZERO_CALIBRATION, repetitions, target_word, true_sig, (), None,
            f"error: {exc}", len(target_word), (),
        )
    return TrialResult(
        mode=Mode.ZERO_CALIBRATION,
        repetitions=repetitions,
        target_word=target_word,
        true_signature=true_sig,
        estimated_signature=out["estimated_signature"],
        resolved_word=out["resolved_word"],
        failure=out["failure"],
        letters_consumed=out["letters_consumed"],
        scores=out["scores"],
        displayed=out["displayed"],
    )


def run_trial_calibrated(
    config: ExperimentConfig,
    dictionary: Dictionary | None,
    target_word: str,
    repetitions: int,
    trial_seed: int,
) -> TrialResult:
    """Template-matching baseline: calibrate on known characters, then decode each letter.

    No dictionary constraint is applied; ``dictionary`` only validates the target.
    """
    _check_target(dictionary, config, target_word)
    layout = config.layout
    L, s = layout.num_chars, layout.shift_samples
    true_pos = tuple(layout.position(c) for c in target_word)
    try:
        calib = [
            (preprocess(config, p, repetitions, derive_seed(trial_seed, _CALIBRATION, j)), p)
            for j, p in enumerate(config.calibration_chars)
        ]
        template = build_calibration_template(calib, s)
        estimates = [
            decode_absolute(
                template,
                preprocess(config, p, repetitions, derive_seed(trial_seed, _WORD_LETTER, i)),
                L, s,
            )
            for i, p in enumerate(true_pos)
        ]
    except CvepError as exc:
        return TrialResult(
            Mode.CALIBRATED, repetitions, target_word, true_pos, (), None,
            f"error: {exc}", len(target_word), (),
        )
    est_pos = tuple(e.lag for e in estimates)
    word = "".join(layout.char_at(p) for p in est_pos)
    return TrialResult(
        mode=Mode.CALIBRATED,
        repetitions=repetitions,
        target_word=target_word,
        true_signature=true_pos,
        estimated_signature=est_pos,
        resolved_word=word,
        failure=None,
        letters_consumed=len(target_word),
        scores=tuple(e.best_score for e in estimates),
        displayed=tuple((word[: i + 1],) for i in range(len(word))),
    )


@dataclass(frozen=True)
class ReportCell:
    mode: str
    repetitions: int
    trials: int
    lag_accuracy: float
    word_accuracy: float
    mean_letters: float
    n_unresolved: int
    n_empty: int
    n_wrong_word: int
    n_errors: int
    seed: int

    @classmethod
    def from_results(cls, results: Sequence[TrialResult], seed: int) -> "ReportCell":
        n = len(results)
        return cls(
            mode=Mode(results[0].mode).value,
            repetitions=results[0].repetitions,
            trials=n,
            lag_accuracy=sum(r.lags_all_correct for r in results) / n,
            word_accuracy=sum(r.word_correct for r in results) / n,
            mean_letters=sum(r.letters_consumed for r in results) / n,
            n_unresolved=sum(r.failure == "unresolved" for r in results),
            n_empty=sum(r.failure == "empty" for r in results),
            n_wrong_word=sum(r.resolved_word is not None and not r.word_correct for r in results),
            n_errors=sum((r.failure or "").startswith("error") for r in results),
            seed=seed,
        )


@dataclass(frozen=True)
class Report:
    cells: tuple[ReportCell, ...]
    config: dict
    dictionary_size: int
    seed: int
    results: dict = field(default_factory=dict, repr=False, compare=False)

    def cell(self, repetitions: int, mode: str | Mode | None = None) -> ReportCell:
        for c in self.cells:
            if c.repetitions == repetitions and (mode is None or c.mode == Mode(mode).value):
                return c
        raise KeyError(repetitions)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "dictionary_size": self.dictionary_size,
            "config": self.config,
            "cells": [dataclasses.asdict(c) for c in self.cells],
        }


def sample_words(dictionary: Dictionary, trials: int, master_seed: int, repetitions: int) -> list[str]:
    """Uniform draws with replacement, independent for every repetition count."""
    words = sorted(dictionary.words)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(master_seed), int(repetitions)])))
    return [words[i] for i in rng.integers(len(words), size=trials)]


def run_experiment(config: ExperimentConfig, dictionary: Dictionary | None = None) -> Report:
    """Sweep ``config.repetitions_list``, running ``config.trials`` words at each N."""
    config.validate()
    if dictionary is None:
        dictionary = config.load_dictionary()
    run = run_trial_zero_calibration if config.mode is Mode.ZERO_CALIBRATION else run_trial_calibrated
    cells, all_results = [], {}
    for n in config.repetitions_list:
        words = sample_words(dictionary, config.trials, config.master_seed, n)
        results = [
            run(config, dictionary, w, n, derive_seed(config.master_seed, n, t))
            for t, w in enumerate(words)
        ]
        all_results[n] = results
        cells.append(ReportCell.from_results(results, config.master_seed))
    return Report(tuple(cells), config.echo(), len(dictionary), config.master_seed, all_results)


def calibrate_noise_sigma(
    config: ExperimentConfig,
    target_accuracy: float = 0.5,
    repetitions: int = 2,
    lo: float = 1.0,
    hi: float = 64.0,
    iterations: int = 10,
    dictionary: Dictionary | None = None,
) -> float:
    """Bisect the noise level so lag accuracy at ``repetitions`` hits ``target_accuracy``.

    Accuracy falls with noise, so the bracket ``[lo, hi]`` must straddle the
    target. Uses ``config.trials`` and ``config.master_seed``; run it on a
    seed distinct from the one used for evaluation.
    """
    if dictionary is None:
        dictionary = config.load_dictionary()

    def accuracy(sigma: float) -> float:
        synth = dataclasses.replace(config.synth, noise_sigma=sigma)
        cfg = config.replace(synth=synth, repetitions_list=(repetitions,))
        return run_experiment(cfg, dictionary).cells[0].lag_accuracy

    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if accuracy(mid) > target_accuracy:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
