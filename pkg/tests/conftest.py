import pytest

from htcpkit.cli import World, load

# criterion number -> (ok, seconds, budget, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def world():
    cache = {}

    def get(name, seed=0):
        if (name, seed) not in cache:
            cache[name, seed] = World(load(name), seed)
        return cache[name, seed]

    return get


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, secs, budget, detail = ACCEPTANCE[k]
        flag = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {k}: {flag}  {secs:.1f}s / {budget}s  {detail}")
