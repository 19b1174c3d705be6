import json
import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import good_contexts, random_curves
from hypercm.cache import CountCache, default_cache_path, poly_hash
from hypercm.count import (
    BadPrimeError,
    GFContext,
    OutOfScaleError,
    WeilBoundError,
    brute_force_count,
    count_points,
    counts_from_lpoly,
    functional_equation_holds,
    good_prime,
    lpoly_from_counts,
)
from hypercm.modp import is_irreducible
from hypercm.polycore import RationalPoly

X3_PLUS_X = RationalPoly([0, 1, 0, 1])


def test_good_prime_examples():
    f = RationalPoly([0, -1, 0, 0, 0, 1])
    assert not good_prime(f, 2)
    assert good_prime(f, 5)
    x10 = RationalPoly([1, -19, -494, -494, -19, 1])
    assert good_prime(x10, 37)
    assert not good_prime(RationalPoly([0, 0, 1, 1]), 7)  # repeated root at 0


def test_context_modulus():
    ctx = GFContext.create(3, 4)
    assert ctx.q == 81
    assert is_irreducible(list(ctx.modulus), 3)
    assert ctx == GFContext.create(3, 4)
    with pytest.raises(ValueError):
        GFContext.create(4, 1)
    with pytest.raises(ValueError):
        GFContext.create(2, 3)


def test_count_examples():
    assert count_points(X3_PLUS_X, GFContext.create(3, 1)) == 4
    assert count_points(X3_PLUS_X, GFContext.create(3, 2)) == 16
    assert brute_force_count(X3_PLUS_X, GFContext.create(3, 2)) == 16


def test_even_degree_infinity_rule():
    f = RationalPoly([1, 0, 0, 0, 0, 0, 1])
    p = 5
    affine = sum(1 for x in range(p) for y in range(p) if (y * y - x**6 - 1) % p == 0)
    assert count_points(f, GFContext.create(p, 1)) == affine + 2
    # non-square leading coefficient: no points at infinity
    f2 = RationalPoly([1, 0, 0, 0, 0, 0, 2])
    affine2 = sum(1 for x in range(p) for y in range(p) if (y * y - 2 * x**6 - 1) % p == 0)
    assert count_points(f2, GFContext.create(p, 1)) == affine2


def test_bad_and_out_of_scale():
    with pytest.raises(BadPrimeError):
        count_points(RationalPoly([0, 0, 1, 1]), GFContext.create(7, 1))
    with pytest.raises(OutOfScaleError):
        count_points(X3_PLUS_X, GFContext.create(1009, 3))


def test_coefficient_list_input():
    f = RationalPoly([3, 1, 4, 1, 5, 9, 2, 6, 5])
    ctx = GFContext.create(7, 2)
    assert count_points([c % 7 for c in (3, 1, 4, 1, 5, 9, 2, 6, 5)], ctx) == count_points(f, ctx)


@pytest.mark.parametrize("seed", [1, 2])
def test_matches_brute_force_small_sample(seed):
    for f in random_curves(5, seed):
        for ctx in good_contexts(f, 125):
            assert count_points(f, ctx) == brute_force_count(f, ctx), (f, ctx.p, ctx.k)


# characteristic polynomial of Frobenius


def test_lpoly_examples():
    assert lpoly_from_counts([4], 3, 1) == RationalPoly([3, 0, 1])
    # y^2 = x^3 + x over F_5 has 4 points, so the trace is 5 + 1 - 4 = 2
    assert count_points(X3_PLUS_X, GFContext.create(5, 1)) == 4
    assert lpoly_from_counts([4], 5, 1) == RationalPoly([5, -2, 1])
    p = 7
    P = lpoly_from_counts([p + 1, p * p + 1], p, 2)
    assert P[3] == 0 and P[1] == 0


def test_weil_bound_violation():
    with pytest.raises(WeilBoundError):
        lpoly_from_counts([40], 5, 1)


@pytest.mark.parametrize("seed", [3, 4])
def test_lpoly_properties_on_random_curves(seed):
    for f in random_curves(6, seed):
        g = (f.degree - 1) // 2
        for p in (3, 5, 7, 11):
            if not good_prime(f, p) or p ** (g + 1) > 10**6:
                continue
            counts = [count_points(f, GFContext.create(p, k)) for k in range(1, g + 2)]
            P = lpoly_from_counts(counts[:g], p, g)
            assert functional_equation_holds(P, p)
            assert counts_from_lpoly(P, p, g + 1) == counts
            # next count also agrees with plain enumeration
            assert brute_force_count(f, GFContext.create(p, g + 1)) == counts[g]
            roots = np.roots([float(c) for c in reversed(P.coeffs)])
            assert np.allclose(np.abs(roots), math.sqrt(p), atol=1e-6)


@settings(max_examples=30)
@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(min_value=0, max_value=10**6))
def test_lpoly_of_elliptic_curve_is_weil(p, seed):
    import random

    rng = random.Random(seed)
    while True:
        f = RationalPoly([rng.randint(0, p - 1), rng.randint(0, p - 1), rng.randint(0, p - 1), 1])
        if good_prime(f, p):
            break
    P = lpoly_from_counts([count_points(f, GFContext.create(p, 1))], p, 1)
    assert functional_equation_holds(P, p)
    assert abs(P[1]) <= 2 * math.sqrt(p)


# cache


def test_cache_round_trip(tmp_path):
    path = tmp_path / "c.jsonl"
    cache = CountCache(path)
    h = poly_hash([1, 2, 3], 7)
    cache.put(h, 7, 2, 50)
    cache.put(h, 7, 3, 334)
    again = CountCache(path)
    assert again.get(h, 7, 2) == 50
    assert again.get(h, 7, 3) == 334
    assert again.get(h, 7, 4) is None
    assert len(again) == 2


def test_cache_hash_reduces_mod_p():
    assert poly_hash([8, 9, 10], 7) == poly_hash([1, 2, 3], 7)
    assert poly_hash([1, 2, 3, 0], 7) == poly_hash([1, 2, 3], 7)
    assert poly_hash([1, 2, 3], 7) != poly_hash([1, 2, 3], 11)


def test_cache_rejects_corrupted_lines(tmp_path):
    path = tmp_path / "c.jsonl"
    good = json.dumps({"poly_hash": "ab", "p": 3, "k": 1, "N": 4})
    path.write_text(
        "\n".join([good, "{not json", json.dumps({"poly_hash": "cd", "p": 3}), json.dumps({"poly_hash": "ef", "p": 3, "k": 1, "N": 1.5})])
        + "\n"
    )
    cache = CountCache(path)
    assert cache.rejected == [2, 3, 4]
    assert cache.get("ab", 3, 1) == 4
    assert len(cache) == 1


def test_cache_env_override(tmp_path, monkeypatch):
    target = tmp_path / "elsewhere.jsonl"
    monkeypatch.setenv("HYPERCM_CACHE", str(target))
    assert default_cache_path() == target
    CountCache().put("aa", 3, 1, 4)
    assert target.exists()


def test_cache_concurrent_writes(tmp_path):
    path = tmp_path / "c.jsonl"
    cache = CountCache(path)

    def work(i):
        for k in range(20):
            cache.put(f"h{i}", 5, k + 1, i * 100 + k)

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    lines = path.read_text().splitlines()
    assert len(lines) == 160
    assert all(json.loads(line)["N"] >= 0 for line in lines)
    assert len(CountCache(path)) == 160
