"""Shared record of acceptance outcomes, printed by the session summary hook."""

RESULTS = {}


def record(number, title, ok, detail):
    RESULTS[number] = (title, bool(ok), detail)


def lines():
    out = []
    for number in sorted(RESULTS):
        title, ok, detail = RESULTS[number]
        out.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail})")
    return out
