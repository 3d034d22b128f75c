import pytest

from hansard_scale import fixtures as fx
from hansard_scale.corpus_store import CorpusStore


@pytest.fixture
def store():
    with CorpusStore() as s:
        yield s


@pytest.fixture
def register():
    return fx.register()


@pytest.fixture(scope="session")
def transcript_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("transcripts")
    fx.write_transcripts(root)
    return root


# Acceptance verdicts recorded by tests/test_acceptance.py, echoed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
