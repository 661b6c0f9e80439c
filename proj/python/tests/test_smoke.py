import random
from fractions import Fraction

import pytest

import streamsplit as ss


def brute_mse(points, j):
    total = 0
    for side in ([y for x, y in points if x <= j], [y for x, y in points if x > j]):
        if side:
            mean = Fraction(sum(side), len(side))
            total += sum((y - mean) ** 2 for y in side)
    return total / len(points)


def test_derive_params_frozen():
    p = ss.derive_params(1024, 4, 0.1)
    assert (p.K, p.k, p.levels, p.rows, p.width) == (70979, 5120, 11, 30, 306188)
    assert p.beta == p.tau / 2


def test_exact_loss_matches_brute_force():
    rng = random.Random(3)
    pts = [(rng.randint(1, 20), rng.randint(0, 5)) for _ in range(60)]
    for j in range(21):
        assert ss.exact_loss(pts, 20, ss.LossKind.mse, j) == brute_mse(pts, j)
    j, loss = ss.exact_opt(pts, 20, ss.LossKind.mse)
    curve = ss.exact_loss_curve(pts, 20, ss.LossKind.mse)
    assert loss == min(curve) and curve.index(loss) == j


def test_regression_separable_stream():
    pts = [(x, 0 if x <= 30 else 4) for x in range(1, 61)] * 50
    r = ss.run_regression(pts, N=60, M=4, epsilon=0.2, seed=1)
    assert r.j == 30
    assert r.m == len(pts)
    assert abs(r.est_loss) < 0.2


def test_gini_regret_small():
    rng = random.Random(11)
    pts = [(x, -1 if x <= 40 or rng.random() < 0.1 else 1) for x in (rng.randint(1, 100) for _ in range(5000))]
    r = ss.run_gini(pts, N=100, epsilon=0.2, seed=2)
    _, opt = ss.exact_opt(pts, 100, ss.LossKind.gini)
    assert ss.exact_loss(pts, 100, ss.LossKind.gini, r.j) - opt <= Fraction(1, 5)


def test_invalid_input_raises():
    with pytest.raises(ss.ConfigError):
        ss.derive_params(10, 1, 1.5)
    with pytest.raises(ss.ValidationError):
        ss.run_regression([(11, 0)], N=10, M=1, epsilon=0.2)
    with pytest.raises(ss.Error):
        ss.run_regression([(1, 7)], N=10, M=1, epsilon=0.2)


def test_hard_instance_verifies():
    inst = ss.gen_instance(ss.InstanceKind.regression, 3, [1, 0, 1], 2)
    assert inst.m == len(inst.stream) == 201 * 9
    report = ss.verify_instance(inst)
    assert report["passed"]
    assert all(isinstance(c["lhs"], Fraction) for c in report["checks"])


@pytest.mark.parametrize("layout", [ss.SketchLayout.hashed, ss.SketchLayout.adaptive])
def test_sketch_one_sided_and_round_trip(layout):
    rng = random.Random(5)
    sk = ss.DyadicCmSketch(256, 4, 64, seed=9, layout=layout)
    exact = [0] * 257
    for _ in range(2000):
        x, w = rng.randint(1, 256), rng.randint(0, 3)
        sk.update(x, w)
        exact[x] += w
    assert sk.total_weight == sum(exact)
    for _ in range(200):
        a, b = sorted((rng.randint(1, 256), rng.randint(1, 256)))
        assert sk.range_query(a, b) >= sum(exact[a : b + 1])
    clone = ss.DyadicCmSketch.from_bytes(sk.to_bytes())
    assert clone.range_query(1, 256) == sk.range_query(1, 256)
    with pytest.raises(ss.FormatError):
        ss.DyadicCmSketch.from_bytes(b"garbage")
