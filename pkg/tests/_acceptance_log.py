"""Collects one pass/fail line per acceptance criterion."""

_RESULTS = {}


def record(number, title, passed, detail):
    _RESULTS[number] = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} ({detail})"
    print(_RESULTS[number])
    return passed


def lines():
    return [_RESULTS[k] for k in sorted(_RESULTS)]
