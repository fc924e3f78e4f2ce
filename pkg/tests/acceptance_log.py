"""Shared record of acceptance verdicts, printed in the pytest summary."""

LINES = []


def record(n, ok, detail):
    line = f"ACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}: {detail}"
    LINES.append(line)
    print(line)
    return ok
