import pytest

# acceptance criterion -> list of (part, passed, detail), filled by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def record(criterion: str, part: str, passed: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(passed), detail))
    print(f"{criterion} {'PASS' if passed else 'FAIL'} [{part}] {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[2:])):
        parts = ACCEPTANCE[key]
        ok = all(p[1] for p in parts)
        failed = [f"{p[0]}: {p[2]}" for p in parts if not p[1]]
        detail = "; ".join(failed) if failed else "; ".join(f"{p[0]}: {p[2]}" for p in parts)
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture
def record_acceptance():
    return record
