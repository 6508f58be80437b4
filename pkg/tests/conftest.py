import numpy as np
import pytest

from dirac_enclosures.spectral_map import k_from_lambda, lambda_pair_from_k


def random_kpoints(rng, n, m_max=2.0, k_min=0.02, k_max=0.98):
    """KPoints with ``m ~ U[0, m_max]`` and ``k`` uniform in an annulus of the
    unit disk; the lambda branch is chosen at random."""
    out = []
    while len(out) < n:
        r = rng.uniform(k_min, k_max)
        k = r * np.exp(1j * rng.uniform(-np.pi, np.pi))
        m = rng.uniform(0.0, m_max)
        lam = lambda_pair_from_k(k, m)[int(rng.integers(2))]
        try:
            out.append(k_from_lambda(lam, m))
        except ValueError:
            # lam rounded onto the real bands; extremely rare
            continue
    return out


def random_off_spectrum(rng, n, m, min_dist=1e-3, radius=4.0):
    from dirac_enclosures.spectral_map import dist_to_spectrum

    pts = []
    while len(pts) < n:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if dist_to_spectrum(z, m) > min_dist:
            pts.append(z)
    return np.array(pts)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Return ``record(number, title, ok, detail)``: print a PASS/FAIL line,
    keep it for the terminal summary and fail the test when ``ok`` is false."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
        print(line)
        lines.append((number, line))
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
