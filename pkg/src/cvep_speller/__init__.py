"""Zero-calibration c-VEP spelling with dictionary-constrained word prediction."""

from .code import Codebook, MSequence, build_codebook, circular_autocorrelation, circular_shift_bits, generate_msequence
from .dsp import (
    AveragedResponse,
    Epoch,
    FilterSpec,
    average_repetitions,
    bandpass_filter,
    circular_shift_samples,
    pearson_correlation,
)
from .estimators import BandpassFilter, CalibratedLagDecoder, RepetitionAverager, ZeroCalibrationSpeller
from .harness import (
    ExperimentConfig,
    Mode,
    Report,
    TrialResult,
    run_experiment,
    run_trial_calibrated,
    run_trial_zero_calibration,
)
from .lagdec import (
    AbsoluteTemplate,
    LagEstimate,
    build_calibration_template,
    decode_absolute,
    estimate_relative_lag,
    promote_to_absolute,
)
from .lexicon import (
    CandidateSet,
    Dictionary,
    KeyboardLayout,
    Resolution,
    ResolutionKind,
    display_prefixes,
    filter_candidates,
    refine,
    resolution,
    signature_of_word,
)
from .synth import SynthConfig, VepKernel, render_template, synth_epoch

__version__ = "0.1.0"
