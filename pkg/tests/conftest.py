from hypothesis import HealthCheck, settings

settings.register_profile(
    "artifact",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("artifact")


def pytest_terminal_summary(terminalreporter):
    from corpus import ACCEPTANCE_REPORT

    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_REPORT):
            terminalreporter.write_line(ACCEPTANCE_REPORT[k])
