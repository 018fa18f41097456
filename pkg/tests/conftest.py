import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CORPUS = os.path.join(REPO, "corpus")
NEGATIVE = os.path.join(REPO, "negative")


@pytest.fixture(scope="session")
def checked_corpus():
    """The fully checked corpus: (checker, report)."""
    from cdle.corpus import load_checked_corpus

    ck, report = load_checked_corpus(CORPUS)
    assert report.ok, "corpus must typecheck:\n" + "\n".join(
        r.line() for r in report.results if not r.ok
    )
    return ck, report


@pytest.fixture(scope="session")
def corpus_defs():
    from cdle.corpus import corpus_paths
    from cdle.loader import load_program

    return load_program(corpus_paths(CORPUS))
