from fractions import Fraction as F

import pytest

import maxavg

BILINEAR = [[1], [2]]
SQUARES = [[0, 1], [1, 0], [1, 1]]


def test_bilinear_invariants():
    assert maxavg.rank_star(BILINEAR) == 1
    assert maxavg.rank_star_extended(BILINEAR) == 2
    assert len(maxavg.vertex_set(BILINEAR, "1/8")) == 7
    assert (F(5, 8), F(7, 8)) in maxavg.vertex_set(BILINEAR, F(1, 8))


def test_squares_threshold():
    assert maxavg.complexity(SQUARES) == 1
    assert maxavg.corollary_threshold(SQUARES) == F(5, 2)


def test_region_membership():
    inside = maxavg.region_contains(BILINEAR, ["1/2", "1/2"])
    assert inside["status"] == "InsideWithWitness"
    assert inside["certificate_ok"]
    outside = maxavg.region_contains(BILINEAR, ["9/10", "9/10"])
    assert outside["status"] != "InsideWithWitness"
    assert maxavg.corollary_contains(BILINEAR, ["1/2", "1/2"])


def test_maximal_delta():
    # f1 = f2 = delta_0: only N >= 0 with n = 0 contributes, best at N = 1 -> 1/3
    value, n = maxavg.maximal_at(BILINEAR, [(0, [1.0]), (0, [1.0])], 0)
    assert value == pytest.approx(1 / 3)
    assert n == 1
    assert maxavg.average_at(BILINEAR, [(0, [1.0]), (0, [1.0])], 1, 0) == pytest.approx(1 / 3)


def test_exact_period():
    f = [[(i * 7 % 5) / 5 - 0.3 for i in range(31)] for _ in range(3)]
    a = [[0, 1], [1, 0], [1, 1]]
    assert maxavg.ergodic_average(a, 31, f, 15, 3) == pytest.approx(maxavg.period_mean(a, 31, f, 3), abs=1e-12)


def test_run_command_in_process():
    assert "region" in maxavg.command_names()
    report, csv, ok = maxavg.run_command("region", {"preset": "squares", "resolution": 64})
    assert ok
    assert report["result"]["threshold"] == "5/2"
    report, _, ok = maxavg.run_command("tf", {"instance": {"multitiles": []}})
    assert ok and report["result"]["tiles"] == 0


def test_bad_input_raises():
    with pytest.raises(Exception):
        maxavg.region_contains(BILINEAR, ["1/2"])
    with pytest.raises(Exception):
        maxavg.run_command("nope", {})
