import pytest


@pytest.fixture(scope="session")
def acceptance_lines(request):
    """Shared sink for acceptance verdict lines, echoed after the run."""
    lines = []
    request.config._acceptance_lines = lines
    return lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
