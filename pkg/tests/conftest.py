import numpy as np
import pytest

from cvep_speller.code import default_codebook
from cvep_speller.harness import default_dictionary_path
from cvep_speller.lexicon import Dictionary, KeyboardLayout
from cvep_speller.synth import SynthConfig


@pytest.fixture(scope="session")
def codebook():
    return default_codebook()


@pytest.fixture(scope="session")
def synth_config():
    return SynthConfig()


@pytest.fixture(scope="session")
def layout():
    return KeyboardLayout()


@pytest.fixture(scope="session")
def words3(layout):
    return Dictionary.from_file(default_dictionary_path(), layout).restrict_length(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
