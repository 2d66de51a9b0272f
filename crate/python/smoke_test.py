"""Smoke test for the subrank extension module.

Run with ``python -m pytest python/smoke_test.py`` or directly with
``python python/smoke_test.py`` after ``pip install --no-build-isolation -e crates/py``.
"""

import itertools
import math
from pathlib import Path

import subrank

DATA = Path(__file__).resolve().parent.parent / "data"


def span(n, basis):
    out = {0}
    for b in basis:
        out |= {x ^ b for x in out}
    return out


def weight(x):
    return bin(x).count("1")


def pair_count_brute(k, basis, restricted):
    v = span(k - 1, basis)
    words = [x for x in range(1 << k) if weight(x) == k // 2]
    if restricted:
        words = [x for x in words if not x >> (k - 1)]
    return sum(1 for x in words for y in words if x ^ y in v)


def krawchouk_sum(n, k, t):
    return sum((-1) ** j * math.comb(t, j) * math.comb(n - t, k - j) for j in range(k + 1))


def test_graph_basics():
    g = subrank.KGraph([[1, 1, 1], [2, 2, 2], [3, 3, 3]])
    assert g.order == 3 and g.sizes == [3, 3, 3] and len(g) == 3
    assert [2, 2, 2] in g and [1, 2, 3] not in g
    assert subrank.KGraph.parse(g.to_text()) == g
    assert g.is_induced_matching([[1, 1, 1], [3, 3, 3]])
    sq = g.kronecker(g)
    assert len(sq) == 9 and sq == g.power(2)


def test_subrank_examples():
    diag = subrank.KGraph.parse((DATA / "diagonal3.txt").read_text())
    res = diag.subrank()
    assert res["value"] == 3 and res["exact"]
    plus = subrank.KGraph.parse((DATA / "diagonal3_plus.txt").read_text())
    assert plus.subrank()["value"] == 2
    rate = subrank.KGraph.type_graph([1, 1]).power_rate(2)
    assert rate["q"] == 4 and rate["integer_rate"] == 2


def test_budget_exhaustion_is_reported():
    res = subrank.KGraph.type_graph([1, 1]).power(3).subrank(budget=2)
    assert not res["exact"]


def test_cw3_bound():
    bound = subrank.cw3_lower_bound(subrank.KGraph.type_graph([2, 1]))
    h = -(1 / 3) * math.log2(1 / 3) - (2 / 3) * math.log2(2 / 3)
    assert abs(bound["value"]["bits"] - h) < 1e-3
    assert abs(sum(bound["distribution"]) - 1.0) < 1e-9
    diag = subrank.KGraph.parse((DATA / "diagonal2.txt").read_text())
    try:
        subrank.cw3_lower_bound(diag)
    except ValueError:
        pass
    else:
        raise AssertionError("missing alpha accepted")
    bound = subrank.cw3_lower_bound(diag, [{1: 0, 2: 1}, {1: 0, 2: 1}, {1: 0, 2: -2}])
    assert abs(bound["value"]["bits"] - 1.0) < 1e-9


def test_rank_inequality_and_scan():
    cert = subrank.verify_rank_inequality(10, 3)
    assert cert["verified"] and cert["k"] == 10 and cert["r"] == 3
    report = subrank.scan(20, jobs=2)
    assert report["summary"]["k_certified"] == report["summary"]["k_total"] == 9
    assert report == subrank.scan(20)
    try:
        subrank.scan(5)
    except ValueError:
        pass
    else:
        raise AssertionError("odd k accepted")


def test_pair_counts_match_enumeration():
    for k in (4, 6, 8):
        for d in range(k):
            basis = [1 << i | 1 << (i + 1) % (k - 1) for i in range(d)]
            for restricted in (True, False):
                got = subrank.pair_count(k, basis, restricted=restricted)
                assert got == pair_count_brute(k, basis, restricted), (k, basis, restricted)


def test_weight_distribution():
    for n in range(1, 7):
        for basis in itertools.combinations(range(1, 1 << n), 2):
            counts = [0] * (n + 1)
            for x in span(n, basis):
                counts[weight(x)] += 1
            assert subrank.weight_distribution(n, list(basis)) == counts


def test_big_integers():
    assert subrank.binomial(1000, 500) == math.comb(1000, 500)
    for n in (5, 12, 40):
        for k in range(n + 1):
            for t in (0, 1, n // 2, n):
                assert subrank.krawchouk(n, k, t) == krawchouk_sum(n, k, t)


def test_suites():
    report = subrank.run_suite("fourier", n_max=9, samples=4, seed=3, jobs=2)
    assert report["summary"]["violated"] == 0
    assert report["summary"]["rows"] == len(report["rows"]) > 0
    assert report == subrank.run_suite("fourier", n_max=9, samples=4, seed=3)
    try:
        subrank.run_suite("nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown suite accepted")
    assert len(subrank.code_version()) == 16


if __name__ == "__main__":
    tests = [(name, fn) for name, fn in sorted(globals().items()) if name.startswith("test_")]
    for name, fn in tests:
        fn()
        print(f"ok {name}")
    print(f"{len(tests)} passed")
