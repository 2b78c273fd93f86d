import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from semitor.cartan import RootDatum, preset  # noqa: E402
from semitor.characters import CharacterEngine  # noqa: E402
from semitor.convex import ConvexOrder  # noqa: E402
from semitor.roots import RootSystem  # noqa: E402
from semitor.weyl import WeylGroup  # noqa: E402

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


class Bundle:
    def __init__(self, name):
        self.name = name
        self.datum = preset(name)
        self.dot = [list(r) for r in self.datum.dot]
        self.rd = RootDatum(self.datum)
        self.W = WeylGroup(self.rd)
        self.R = RootSystem(self.W)
        self.order = ConvexOrder(self.R)
        self.engine = CharacterEngine(self.order)


_CACHE: dict[str, Bundle] = {}


def bundle(name: str) -> Bundle:
    if name not in _CACHE:
        _CACHE[name] = Bundle(name)
    return _CACHE[name]


@pytest.fixture(scope="session")
def a1():
    return bundle("A1~")


@pytest.fixture(scope="session")
def a2():
    return bundle("A2~")


@pytest.fixture(scope="session")
def c2():
    return bundle("C2~")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}")
