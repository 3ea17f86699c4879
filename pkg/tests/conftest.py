import os

from hypothesis import settings

# fixed example generation so repeated runs see the same cases
settings.register_profile("default", derandomize=True, deadline=None)
settings.register_profile("stress", max_examples=3000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# acceptance criteria report one line each at the end of the run
_CRITERIA = {}


def record_criterion(number, title, passed, detail):
    _CRITERIA[number] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed, detail = _CRITERIA[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {verdict}  {title}: {detail}")
