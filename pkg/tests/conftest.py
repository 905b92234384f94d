from functools import lru_cache

import pytest

from hamkac.dpsuper import Shape
from hamkac.hamalg import algebra
from hamkac.kacmod import build_kac, named_character

# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE: dict = {}


@lru_cache(maxsize=None)
def alg_for(p, t1=1, t2=1):
    return algebra(Shape(p, t1, t2))


@lru_cache(maxsize=64)
def kac_for(p, t, chi_type, lam):
    alg = alg_for(p, *t)
    return build_kac(alg, named_character(alg, chi_type), lam)


@pytest.fixture(scope="session")
def alg5():
    return alg_for(5)


@pytest.fixture(scope="session")
def alg7():
    return alg_for(7)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line("criterion %2d: %s  %s" % (n, "PASS" if ok else "FAIL", detail))
