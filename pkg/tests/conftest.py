from hypothesis import settings

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=60,
                          print_blob=True)
settings.load_profile("repo")

FIBONACCI = "a->ab;b->a"
TRIBONACCI = "a->ab;b->ac;c->a"
FLIPPED_TRIBONACCI = "a->ab;b->ca;c->a"
SMALLEST_PISOT = "a->b;b->c;c->ab"
S2 = "a->aabc;b->c;c->a"

BUNDLED = [FIBONACCI, TRIBONACCI, FLIPPED_TRIBONACCI, SMALLEST_PISOT, S2]

ACCEPTANCE_LINES = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
