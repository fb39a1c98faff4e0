import pytest

#: (criterion number, label, passed, detail) tuples recorded by the
#: acceptance suite; merged into one line per criterion in the summary.
acceptance_log: list[tuple[int, str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Recorder for acceptance criteria: logs the outcome, then asserts it."""

    def record(number: int, label: str, ok: bool, detail: str = "") -> None:
        acceptance_log.append((number, label, bool(ok), detail))
        assert ok, f"acceptance criterion {number} ({label}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not acceptance_log:
        return
    merged: dict[int, tuple[str, bool, list[str]]] = {}
    for number, label, passed, detail in acceptance_log:
        name = label.split(":")[0]
        if number not in merged:
            merged[number] = (name, passed, [])
        prev_name, prev_ok, details = merged[number]
        merged[number] = (prev_name, prev_ok and passed, details)
        if detail:
            details.append(detail)
    terminalreporter.section("acceptance criteria")
    for number in sorted(merged):
        name, passed, details = merged[number]
        status = "PASS" if passed else "FAIL"
        suffix = f"  ({'; '.join(details)})" if details else ""
        terminalreporter.write_line(f"criterion {number:2d} {status} {name}{suffix}")
