"""Smoke test for the Python bindings.

Build and install first, e.g.:
    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/*.whl
Then run `python python/smoke_test.py` (or `pytest python/`).
"""

from fractions import Fraction

import trapsearch_py as ts


def test_one_uniform_example():
    g = ts.Game([10, 10, 1], 1, "one_uniform")
    s = g.solve()
    assert s.value == 5
    assert s.method == "one_uniform"
    assert s.certified
    assert dict((tuple(e), p) for e, p in s.searcher) == {(0,): Fraction(1, 2), (1,): Fraction(1, 2)}
    assert [v for _, v in g.value_curve()] == [0, 5, Fraction(5, 3)]


def test_equal_rewards_and_bounds():
    assert ts.solve_equal(6, 2) == (Fraction(4, 5), 2)
    g = ts.Game([1] * 6, 2)
    assert g.solve().value == Fraction(4, 5)
    assert g.lower_bound() == Fraction(16, 27)
    assert g.upper_bound() == Fraction(8, 9)


def test_closed_forms_agree_with_lp():
    for rewards, k in [([5, 4, 3], 1), ([10, 10, 10, 1], 2), ([7, 3, 2, 2], 2)]:
        g = ts.Game(rewards, k)
        assert g.solve().value == g.solve("lp").value
    assert ts.Game([10, 10, 10, 1], 2).solve().value == Fraction(220, 63)


def test_exact_inputs_and_payoffs():
    g = ts.Game([Fraction(7, 2), "1/3", 2.5], 1)
    assert g.rewards == [Fraction(7, 2), Fraction(1, 3), Fraction(5, 2)]
    assert g.payoff([0, 1], [2]) == Fraction(23, 6)
    assert g.payoff([0, 1], [1]) == 0
    half = Fraction(1, 2)
    assert g.expected_payoff([([0], half), ([1], half)], [([0], 1)]) == Fraction(1, 6)


def test_helpers():
    mix = ts.rotation_mixture([Fraction(2, 3)] * 3, 2)
    assert all(len(s) == 2 for s, _ in mix)
    assert sum(p for _, p in mix) == 1
    assert ts.best_partition([5, 4, 3]) == ([0], 2)
    lam, m, guaranteed = ts.Game([10, 10, 1], 1).partition_bound([[0], [1, 2]])
    assert (lam, m, guaranteed) == (Fraction(110, 21), 1, Fraction(110, 21))
    report = ts.Game([10, 10, 1], 1).check_conjecture()
    assert report["consistent"] and report["gap"] == 0


def test_simulation_and_json():
    mean, stderr, exact, passed = ts.Game([10, 10, 1], 1, "one_uniform").simulate(200_000, 3)
    assert exact == 5 and passed
    g = ts.Game.from_json('{"rewards": [1, 1, 1, 1], "k": 2, "hypergraph": {"kind": "complete"}}')
    assert '"value": "1/2"' in g.solve().to_json()


def test_errors():
    try:
        ts.Game([5, 4, 3, 2, 1], 2).solve("n4k2")
    except ts.RegimeError as e:
        assert "n4k2 requires n=4, k=2" in str(e)
    else:
        raise AssertionError("expected RegimeError")
    try:
        ts.Game([1, 2], 2)
    except ts.TrapsearchError:
        pass
    else:
        raise AssertionError("expected TrapsearchError")
    try:
        ts.Game(list(range(1, 15)), 3).solve()
    except ts.CapacityError:
        pass
    else:
        raise AssertionError("expected CapacityError")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok  {name}")
    print("python smoke test passed")
