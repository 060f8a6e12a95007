"""scikit-learn compatible wrappers around the decoding pipeline.

Arrays follow the ``(n_epochs, channels, samples)`` convention, so the
pieces chain in a :class:`sklearn.pipeline.Pipeline`::

    make_pipeline(BandpassFilter(), RepetitionAverager(252), CalibratedLagDecoder())
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dsp import AveragedResponse, FilterSpec, filter_array
from .harness import decode_word_zero_calibration, default_dictionary_path
from .lagdec import AbsoluteTemplate, build_calibration_template, lag_scores
from .lexicon import Dictionary, KeyboardLayout
from .validation import check_epochs_array, check_positions


class BandpassFilter(TransformerMixin, BaseEstimator):
    """Zero-phase Butterworth band-pass applied to every epoch and channel."""

    def __init__(self, low_cut=1.0, high_cut=15.0, order=4, sampling_rate=240.0):
        self.low_cut = low_cut
        self.high_cut = high_cut
        self.order = order
        self.sampling_rate = sampling_rate

    def fit(self, X, y=None):
        self.spec_ = FilterSpec(self.low_cut, self.high_cut, self.order, self.sampling_rate)
        self.n_features_in_ = check_epochs_array(X).shape[-1]
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        X = check_epochs_array(X)
        return np.stack([filter_array(ep, self.spec_) for ep in X])


class RepetitionAverager(TransformerMixin, BaseEstimator):
    """Fold ``reps * period`` samples into a single averaged period."""

    def __init__(self, period_samples=252):
        self.period_samples = period_samples

    def fit(self, X, y=None):
        X = check_epochs_array(X)
        if X.shape[-1] % self.period_samples:
            raise ValueError(f"{X.shape[-1]} samples is not a multiple of period {self.period_samples}")
        self.n_features_in_ = X.shape[-1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_epochs_array(X)
        n, c, t = X.shape
        if t % self.period_samples:
            raise ValueError(f"{t} samples is not a multiple of period {self.period_samples}")
        folded = X.reshape(n, c, t // self.period_samples, self.period_samples)
        first = folded[:, :, :1, :]
        return first[:, :, 0, :] + (folded - first).mean(axis=2)


class CalibratedLagDecoder(ClassifierMixin, BaseEstimator):
    """Template-matching classifier of keyboard positions.

    ``fit`` aligns labelled one-period responses to position 0 and averages
    them; ``predict`` returns the position whose shift of the template best
    correlates with each response.
    """

    def __init__(self, num_chars=32, shift_samples=8):
        self.num_chars = num_chars
        self.shift_samples = shift_samples

    def fit(self, X, y):
        X = check_epochs_array(X)
        y = check_positions(y, self.num_chars, X.shape[0])
        pairs = [(AveragedResponse(x), int(p)) for x, p in zip(X, y)]
        self.template_ = build_calibration_template(pairs, self.shift_samples)
        self.classes_ = np.arange(self.num_chars)
        self.n_features_in_ = X.shape[-1]
        return self

    def decision_function(self, X):
        """Correlation with the template at every position, shape ``(n_epochs, num_chars)``."""
        check_is_fitted(self, "template_")
        X = check_epochs_array(X, self.n_features_in_)
        ref = self.template_.data
        return np.stack(
            [lag_scores(ref, AveragedResponse(x), self.num_chars, self.shift_samples, signed=False) for x in X]
        )

    def predict(self, X):
        scores = self.decision_function(X)
        return self.classes_[np.argmax(scores, axis=1)]

    @classmethod
    def from_template(cls, template: AbsoluteTemplate, num_chars=32, shift_samples=8):
        est = cls(num_chars, shift_samples)
        est.template_ = template
        est.classes_ = np.arange(num_chars)
        est.n_features_in_ = template.data.period_samples
        return est


class ZeroCalibrationSpeller(BaseEstimator):
    """Word decoder that needs no labelled data.

    ``fit`` only loads the dictionary. ``predict`` takes one array per word,
    shaped ``(letters, channels, period)`` of averaged responses, and returns
    the resolved word or ``""`` when the dictionary could not single one out.
    """

    def __init__(self, dictionary=None, word_length=3, characters=None, shift_samples=8):
        self.dictionary = dictionary
        self.word_length = word_length
        self.characters = characters
        self.shift_samples = shift_samples

    def fit(self, X=None, y=None):
        layout = KeyboardLayout(
            characters=self.characters or KeyboardLayout().characters, shift_samples=self.shift_samples
        )
        if isinstance(self.dictionary, Dictionary):
            words = self.dictionary.words
            d = Dictionary(words, layout)
        else:
            d = Dictionary.from_file(self.dictionary or default_dictionary_path(), layout)
        if self.word_length:
            d = d.restrict_length(self.word_length)
        self.dictionary_ = d
        self.layout_ = layout
        return self

    def decode(self, letters) -> dict:
        """Full decoder trace for one word; see ``decode_word_zero_calibration``."""
        check_is_fitted(self, "dictionary_")
        letters = check_epochs_array(letters, name="letters")
        return decode_word_zero_calibration([AveragedResponse(x) for x in letters], self.dictionary_)

    def predict(self, X):
        return np.array([self.decode(word)["resolved_word"] or "" for word in X], dtype=object)
