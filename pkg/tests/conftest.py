import os
from datetime import datetime, timezone

import pytest

from beliefmine.corpus import TweetRecord

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(REPO_ROOT, "fixtures")


@pytest.fixture(scope="session")
def fixture_corpus_path():
    return os.path.join(FIXTURES, "synthetic_corpus.jsonl")


@pytest.fixture(scope="session")
def fixture_embeddings_path():
    return os.path.join(FIXTURES, "synthetic_embeddings.txt")


def make_record(rec_id="1", author="user", text="hello", reply=None, tags=None, votes=None, parse=None):
    return TweetRecord(
        id=str(rec_id),
        author=author,
        text=text,
        created_at=datetime(2020, 3, 1, tzinfo=timezone.utc),
        in_reply_to=reply,
        hashtags=list(tags or []),
        votes=votes,
        parse=parse,
    )


_ACCEPTANCE_RESULTS = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and "test_acceptance" in str(item.fspath):
        _ACCEPTANCE_RESULTS.append((item.name, report.passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, passed in _ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {status}  {name}")
