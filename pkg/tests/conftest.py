import numpy as np
import pytest

from hwig.modes import FieldVector, ModeBasis, random_unitary
from hwig.transforms import bogoliubov_pair


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_vector(basis, rng, normalized=False):
    v = rng.normal(size=basis.n_modes) + 1j * rng.normal(size=basis.n_modes)
    fv = FieldVector(basis, v)
    return fv.normalized() if normalized else fv


def random_squeezing(n, rng, rmax=1.0):
    """A random valid Bogoliubov pair on ``n`` modes."""
    basis = ModeBasis(n)
    r = rng.uniform(0.0, rmax, size=n)
    phi = rng.uniform(0.0, 2 * np.pi, size=n)
    return bogoliubov_pair(basis, r, phi, random_unitary(n, rng))


# acceptance bookkeeping: one line per criterion in the terminal summary
_CRITERIA = {}


@pytest.fixture
def criterion():
    """Context-manager factory: ``with criterion(3, "title", limit_s): ...``.

    Records pass/fail (including the runtime budget) for the summary.
    """
    import contextlib
    import time

    @contextlib.contextmanager
    def record(number, title, limit_s):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            _CRITERIA[number] = (title, False, time.perf_counter() - t0, str(exc).splitlines()[0][:90])
            raise
        elapsed = time.perf_counter() - t0
        ok = elapsed < limit_s
        note = "" if ok else f"runtime {elapsed:.2f}s exceeds {limit_s}s"
        _CRITERIA[number] = (title, ok, elapsed, note)
        assert ok, note

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, elapsed, note = _CRITERIA[n]
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title} ({elapsed:.2f}s)"
        terminalreporter.write_line(line + (f"  [{note}]" if note else ""))
