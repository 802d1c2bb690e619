"""The twelve acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line, visible in the
plain ``pytest -v`` log.
"""
import subprocess
import sys
import time

import pytest

from degrees_kit import suite

CFG = suite.Settings()

# minimum number of passed sub-cases, from the stated sample sizes
MIN_PASSED = {1: 4 * 200 + 500, 2: 100, 3: 1, 4: 1, 5: 20, 6: 20, 7: 150, 8: 100, 9: 2, 10: 3, 11: 1}
# stated runtime bounds in seconds
TIME_LIMIT = {1: 10.0, 3: 5.0}


def announce(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number, capsys):
    start = time.perf_counter()
    (res,) = suite.run("all", CFG, only=[number])
    elapsed = time.perf_counter() - start
    passed = res.counts.get("pass", 0)
    problems = []
    if res.status != "pass":
        problems.append(f"status {res.status}")
    if passed < MIN_PASSED[number]:
        problems.append(f"only {passed} sub-cases passed")
    if elapsed > TIME_LIMIT.get(number, 120.0):
        problems.append(f"took {elapsed:.1f}s")
    announce(capsys, number, not problems,
             f"{res.name} ({elapsed:.1f}s, {passed} passed) {'; '.join(problems) or res.detail}")
    assert not problems, res.detail


def test_criterion_12_determinism(capsys):
    cmd = [sys.executable, "-m", "degrees_kit.cli", "examples", "all", "--seed", "0"]
    outs, times = [], []
    for _ in range(2):
        start = time.perf_counter()
        proc = subprocess.run(cmd, capture_output=True, timeout=600)
        times.append(time.perf_counter() - start)
        outs.append((proc.returncode, proc.stdout))
    identical = outs[0] == outs[1]
    ok = identical and outs[0][0] == 0 and max(times) < 120
    announce(capsys, 12, ok,
             f"examples all twice: identical={identical}, exit={outs[0][0]}, "
             f"runtimes {times[0]:.1f}s / {times[1]:.1f}s")
    assert ok
