import pytest


@pytest.fixture
def small_trace_cfg(tmp_path):
    return {
        "mode": "trace-clt",
        "n": 150,
        "p_spec": {"kind": "explicit", "value": "1/10"},
        "m": 2,
        "replicates": 12,
        "master_seed": 9,
        "output_dir": str(tmp_path / "run"),
    }


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(number, passed, detail)."""

    def record(number, passed, detail):
        _ACCEPTANCE_LINES.append((number, passed, detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_ACCEPTANCE_LINES, key=lambda x: x[0]):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
