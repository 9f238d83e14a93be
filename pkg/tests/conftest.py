import sys

import numpy as np
import pytest

from quasifeynman.experiment import random_hermitian, random_state
from quasifeynman.families import assemble_decomposition, make_family

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def seed42_terms(dim=8, m=2, norm=1.0):
    rng = np.random.default_rng(42)
    terms = [random_hermitian(dim, rng, norm) for _ in range(m)]
    return terms, random_state(dim, rng)


def make_dec(terms, coeffs, kind, t_max=1.0):
    kinds = [kind] * len(terms) if isinstance(kind, str) else kind
    fams = [make_family(k, L, t_max=t_max) for k, L in zip(kinds, terms)]
    return assemble_decomposition(coeffs, fams)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
