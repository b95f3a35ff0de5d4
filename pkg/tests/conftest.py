import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from triform.corpus import builtin_entry  # noqa: E402
from triform.derivation import replay  # noqa: E402


@pytest.fixture(scope="session")
def entries():
    from triform.corpus import BUILTIN_IDS

    return {i: builtin_entry(i) for i in BUILTIN_IDS}


@pytest.fixture(scope="session")
def gold(entries):
    """Replayed gold derivation per entry id."""
    return {
        i: replay(e.sentence, e.lexicon_assignment, e.gold_step_script) for i, e in entries.items()
    }


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    results = test_acceptance.RESULTS
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(f"criterion {k}: {'PASS' if results[k] else 'FAIL'}")
