import os
from pathlib import Path

import pytest
from hypothesis import settings

from veritas.corpus import load_corpus
from veritas.normalize import data_path, load_resources

settings.register_profile("veritas", deadline=None, max_examples=60)
settings.load_profile("veritas")

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def mini_corpus():
    return load_corpus(data_path("mini_corpus"))


@pytest.fixture(scope="session")
def resources():
    return load_resources()


@pytest.fixture(scope="session")
def fakebr_path():
    path = os.environ.get("VERITAS_CORPUS")
    if not path or not Path(path).is_dir():
        pytest.skip("Fake.Br corpus not available (set VERITAS_CORPUS)")
    return Path(path)


def write_corpus(root, files):
    """files: {"fake/a.txt": "text", ...}"""
    for rel, text in files.items():
        p = Path(root) / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(text, bytes):
            p.write_bytes(text)
        else:
            p.write_text(text, encoding="utf-8")
    return Path(root)


ACCEPTANCE_LINES = []


def report_criterion(number, passed, detail):
    status = passed if isinstance(passed, str) else ("PASS" if passed else "FAIL")
    line = f"{status} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
