import pytest

from salid import kernels
from salid.corpus import RawDocument, SplitSpec, build_dataset

from toydata import toy_lines

# (criterion number, description, status, detail) appended by test_acceptance
ACCEPTANCE_RESULTS: list[tuple[int, str, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, desc, status, detail in sorted(ACCEPTANCE_RESULTS):
        line = f"[{status:7}] {number}. {desc}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    """Each importable kernel module in turn."""
    return kernels.available_backends()[request.param]


@pytest.fixture(scope="session")
def toy_dataset():
    docs = [RawDocument(lang, tuple(toy_lines(lang, 120)), "toy") for lang in ("aaa", "bbb", "ccc")]
    return build_dataset(docs, SplitSpec(80, 30, seed=7), name="toy")
