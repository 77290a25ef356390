"""Collects one PASS/FAIL line per acceptance criterion."""
LINES: list[str] = []


def record(number: int, title: str, ok: bool, seconds: float, limit: float, detail: str = "") -> bool:
    """Log the criterion and return whether it passed, time limit included."""
    passed = ok and seconds < limit
    line = (f"{'PASS' if passed else 'FAIL'} [{number}] {title}: {detail} "
            f"({seconds:.2f} s, limit {limit:g} s)")
    LINES.append(line)
    print(line)
    return passed
