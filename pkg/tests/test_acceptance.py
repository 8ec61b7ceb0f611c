"""Acceptance suite: every criterion at its stated tolerance, one pass/fail line each."""
import pytest

from cqlax import acceptance

NUMBERS = sorted(acceptance.CRITERIA)


@pytest.fixture(scope="module")
def outcomes(tmp_path_factory):
    out = tmp_path_factory.mktemp("acceptance")
    outs, walls = acceptance.run_criteria(out_dir=out)
    return {o.number: o for o in outs}, walls, out


def report_line(o, wall, capsys):
    line = f"[{'PASS' if o.passed else 'FAIL'}] criterion {o.number:2d}: {o.name} ({wall:.2f} s)"
    detail = [f"    {name} = {c['value']!r} (needs {c['mode']} {c['tol']!r})"
              for name, c in failed(o).items()]
    with capsys.disabled():
        print("\n" + "\n".join([line, *detail]))


def failed(o):
    return {k: c for k, c in o.as_dict()["checks"].items() if not c["passed"]}


@pytest.mark.parametrize("number", NUMBERS)
def test_criterion(outcomes, number, capsys):
    by_number, walls, _ = outcomes
    o = by_number[number]
    report_line(o, walls[number], capsys)
    assert o.passed, failed(o)


def test_criterion_12_determinism(outcomes, capsys):
    import time

    by_number, _, out = outcomes
    t0 = time.perf_counter()
    o = acceptance.c12_determinism([by_number[k] for k in NUMBERS], out)
    report_line(o, time.perf_counter() - t0, capsys)
    assert o.passed, failed(o)
