"""Shared pytest plumbing.

The acceptance tests register one verdict per criterion through
record_criterion; the terminal-summary hook prints a PASS/FAIL line for
each so a plain `pytest` run shows the acceptance scoreboard.
"""

CRITERIA = [
    ("A1", "surrogate tightness and minorization (50 instances, 1e-9)"),
    ("A2", "quadratic-form equivalence (50 draws, 1e-9)"),
    ("A3", "cone solves vs brute force on tiny instances (2%, MRT 1e-5)"),
    ("A4", "AO monotonicity (best exact, surrogate steps 1e-6)"),
    ("A5", "convergence within 30 iterations for >=90% of 20 runs"),
    ("A6", "paired rotation benefit (100 trials, 20 dBm)"),
    ("A7", "power sweep strictly increasing per arm"),
    ("A8", "grid refinement pi/1440 vs pi/90 (paired mean)"),
    ("A9", "swarm search within 99.9% of dense scan (20 instances)"),
]

_verdicts = {}


def record_criterion(cid, passed, detail=""):
    _verdicts[cid] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for cid, label in CRITERIA:
        if cid in _verdicts:
            ok, detail = _verdicts[cid]
            tag = "PASS" if ok else "FAIL"
            suffix = f"  ({detail})" if detail else ""
            terminalreporter.write_line(f"{tag}  {cid}  {label}{suffix}")
        else:
            terminalreporter.write_line(f"----  {cid}  {label}  (not run)")
