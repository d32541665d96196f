import itertools
from importlib import resources
from pathlib import Path

import pytest

from expfield import EFieldPresentation, parse, parse_file

CORPUS = Path(resources.files("expfield")) / "corpus"
CORPUS_FILES = sorted(CORPUS.glob("*.efd"))


def load(name):
    return parse_file(CORPUS / name)


def corpus_fields(egg_only=False):
    """(file name, field name, presentation) for every field of the corpus."""
    out = []
    for path in CORPUS_FILES:
        doc = parse_file(path)
        for n in doc.fields:
            F = doc.presentation(n)
            if egg_only and not F.egg:
                continue
            out.append((path.name, n, F))
    return out


def generator_subsets(F, max_size=None):
    gens = F.generators
    top = len(gens) if max_size is None else min(max_size, len(gens))
    return [c for k in range(top + 1) for c in itertools.combinations(gens, k)]


def base_of(F):
    return F.base if F.base is not None else EFieldPresentation("Q", [])


FREE = parse("""
field Q { gens; }
field F { gens x, ex; base Q; exp x = ex; egg; }
""")

ANCHOR = load("01_imaginary_unit.efd")


@pytest.fixture
def free():
    return FREE.presentation("F")


@pytest.fixture
def anchor():
    return ANCHOR.presentation("P")


# acceptance criteria report their own PASS/FAIL lines at the end of the run
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
