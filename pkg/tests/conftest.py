import time

_SESSION_START = time.perf_counter()

# Acceptance criterion: the whole suite must finish within this budget.
SUITE_BUDGET_S = 60.0


def session_elapsed() -> float:
    return time.perf_counter() - _SESSION_START


def pytest_sessionfinish(session, exitstatus):
    elapsed = session_elapsed()
    ok = elapsed < SUITE_BUDGET_S
    status = "PASS" if ok else "FAIL"
    print(f"\n{status}  criterion 10: full suite ran in {elapsed:.1f} s (< {SUITE_BUDGET_S:.0f} s required)")
    if not ok and exitstatus == 0:
        session.exitstatus = 1
