from contextlib import contextmanager

_LINES: dict = {}


class Criterion:
    """Named checks for one acceptance criterion."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.checks: list = []

    def check(self, name: str, ok, detail="") -> bool:
        self.checks.append((name, bool(ok), detail))
        return bool(ok)

    def failed(self) -> list:
        return [c for c in self.checks if not c[1]]

    def line(self, error=None) -> str:
        bad = self.failed()
        ok = not bad and error is None and bool(self.checks)
        msg = f"criterion {self.number} {'PASS' if ok else 'FAIL'}: {self.title}"
        if bad:
            msg += " | failed: " + "; ".join(f"{n} ({d})" if d != "" else n for n, _, d in bad)
        if error is not None:
            msg += f" | error: {type(error).__name__}: {error}"
        if ok:
            shown = [f"{n} {d}" for n, _, d in self.checks if d != ""]
            if shown:
                msg += " | " + "; ".join(shown)
        return msg


@contextmanager
def acceptance(number: int, title: str):
    """Run one criterion; records a PASS/FAIL line and fails the test on any failed check."""
    c = Criterion(number, title)
    try:
        yield c
    except Exception as e:
        _LINES[number] = c.line(e)
        print(_LINES[number])
        raise
    _LINES[number] = c.line()
    print(_LINES[number])
    assert not c.failed(), _LINES[number]


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_LINES):
        terminalreporter.write_line(_LINES[n])
