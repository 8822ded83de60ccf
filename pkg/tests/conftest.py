import pytest

_lines = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_lines] = []


@pytest.fixture
def criterion(request):
    """record(number, ok, detail): one summary line per acceptance criterion."""
    lines = request.config.stash[_lines]

    def record(number, ok, detail=""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_lines]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
