"""One PASS/FAIL line per acceptance criterion, collected across the run."""

import contextlib
import time

RESULTS: dict[int, str] = {}


@contextlib.contextmanager
def criterion(n: int, title: str):
    info: dict = {}
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield info
        status = "PASS"
    finally:
        detail = ", ".join(f"{k}={v}" for k, v in info.items())
        line = f"criterion {n} {status}: {title} ({detail}; {time.perf_counter() - t0:.1f}s)"
        RESULTS[n] = line
        print(line)
