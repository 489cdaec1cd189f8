import acceptance_log


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance_log.RESULTS):
        status, title, seconds = acceptance_log.RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}  ({seconds:.1f}s)")
