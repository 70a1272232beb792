"""Exponent regions and multilinear discrete maximal averages."""

import json
from fractions import Fraction

from . import _maxavg

__all__ = [
    "rank_star", "rank_star_extended", "complexity", "corollary_threshold", "vertex_set",
    "region_contains", "corollary_contains", "maximal_at", "average_at", "ergodic_average",
    "period_mean", "command_names", "run_command",
]


def _q(v):
    # rationals travel as "p/q" strings
    if isinstance(v, (int, Fraction)):
        return str(v)
    return str(Fraction(v).limit_denominator()) if isinstance(v, float) else v


def _matrix(a):
    return json.dumps([[_q(x) for x in row] for row in a])


def _signals(signals):
    out = []
    for s in signals:
        if isinstance(s, dict):
            out.append(s)
        else:
            start, values = s
            out.append({"start": start, "values": list(values)})
    return json.dumps(out)


def rank_star(a):
    return _maxavg.rank_star(_matrix(a))


def rank_star_extended(a):
    return _maxavg.rank_star_extended(_matrix(a))


def complexity(a):
    return _maxavg.complexity(_matrix(a))


def corollary_threshold(a):
    return Fraction(_maxavg.corollary_threshold(_matrix(a)))


def vertex_set(a, eps):
    v = json.loads(_maxavg.vertex_set(_matrix(a), _q(eps)))
    return [tuple(Fraction(x) for x in vertex) for vertex in v["vertices"]]


def region_contains(a, point, resolution=1024):
    """Verdict dict: status, witness_epsilon, certificate, certificate_ok."""
    return json.loads(_maxavg.region_contains(_matrix(a), json.dumps([_q(x) for x in point]), resolution))


def corollary_contains(a, point):
    return _maxavg.corollary_contains(_matrix(a), json.dumps([_q(x) for x in point]))


def maximal_at(a, signals, x, cap=0):
    """(value, maximising N) of the maximal average at x; signals are (start, values) pairs."""
    return _maxavg.maximal_at(_matrix(a), _signals(signals), x, cap)


def average_at(a, signals, n, x, absolute=True):
    return _maxavg.average_at(_matrix(a), _signals(signals), n, x, absolute)


def ergodic_average(a, size, functions, length, x):
    return _maxavg.ergodic_average(a, size, functions, length, x)


def period_mean(a, size, functions, x):
    return _maxavg.period_mean(a, size, functions, x)


def command_names():
    return list(_maxavg.command_names())


def run_command(name, config):
    """Runs a CLI command in process. Returns (report, csv, checks_passed); nothing is written."""
    report, csv, ok = _maxavg.run_command(name, json.dumps(config))
    return json.loads(report), csv, ok
