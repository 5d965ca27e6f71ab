import pytest

_LOG = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_LOG, [])


def pytest_terminal_summary(terminalreporter, config):
    rows = config.stash.get(_LOG, [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(rows, key=lambda r: r[0]):
        terminalreporter.write_line(line[1])
