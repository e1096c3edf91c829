from hypothesis import settings

# exact big-integer work has no stable per-example timing
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
