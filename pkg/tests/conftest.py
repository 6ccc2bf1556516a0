from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, max_examples=150, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

# one summary line per acceptance criterion, whatever the capture mode
_criteria = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1][len("test_criterion_"):]
        _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda s: int(s.split("_")[0])):
        num, _, label = name.partition("_")
        verdict = "PASS" if _criteria[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num} ({label.replace('_', ' ')}): {verdict}")
