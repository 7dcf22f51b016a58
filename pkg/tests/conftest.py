import numpy as np
import pytest
from hypothesis import settings

from cubecorr import families as fam
from cubecorr.core import make_function

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def brute_coeff(values, s):
    """f^(S) by the defining sum, one mask at a time."""
    n = len(values).bit_length() - 1
    total = 0.0
    for m in range(1 << n):
        total += values[m] * (-1) ** bin(s & m).count("1")
    return total / (1 << n)


def random_boolean(n, rng):
    return make_function(n, rng.integers(0, 2, size=1 << n), "boolean")


def corpus(max_n=6, seed=7):
    """Named families plus seeded random instances of every kind, n <= max_n."""
    rng = np.random.default_rng(seed)
    out = [fam.dictator(1), fam.and_(2), fam.or_(2), fam.majority(3), fam.and_(3), fam.tribes(2, 2)]
    out += [fam.dual(fam.tribes(2, 2)), fam.threshold(4, 2), fam.parity(3), fam.linear(3, [0.2, -1.0, 0.5])]
    for n in range(1, max_n + 1):
        for _ in range(3):
            s = int(rng.integers(0, 2**31))
            out += [
                fam.random_monotone(n, s),
                fam.random_coverage(n, s),
                fam.random_supermodular(n, s),
                fam.random_real(n, rng),
                random_boolean(n, rng),
            ]
    return out


@pytest.fixture(scope="session")
def small_corpus():
    return corpus()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by this test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            number, title = value
            detail = dict(report.user_properties).get("detail", "")
            _CRITERIA[number] = (report.outcome == "passed", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, title, detail = _CRITERIA[number]
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(f"{line}  ({detail})" if detail else line)


@pytest.fixture(autouse=True)
def _criterion_property(request):
    mark = request.node.get_closest_marker("criterion")
    if mark is not None:
        request.node.user_properties.append(("criterion", tuple(mark.args)))
