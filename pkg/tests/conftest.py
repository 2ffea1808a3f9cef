import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance checklist after the run, outside capture."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULT_LINES", None) if mod else None
    if lines:
        terminalreporter.ensure_newline()
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
