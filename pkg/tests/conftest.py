import numpy as np
import pytest


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion, then assert it."""

    def check(label, ok, detail=""):
        _ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))
        assert ok, f"{label}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def ghz5_text():
    return (
        "OPENQASM 2.0;\n"
        'include "qelib1.inc";\n'
        "qreg q[5];\n"
        "creg c[5];\n"
        "h q[0];\n"
        "cx q[0],q[1];\n"
        "cx q[1],q[2];\n"
        "cx q[2],q[3];\n"
        "cx q[3],q[4];\n"
        "measure q[0] -> c[0];\n"
    )


@pytest.fixture
def np_rng():
    return np.random.default_rng(12345)
