import random

import pytest
from hypothesis import settings

from hypercm.count import GFContext, good_prime
from hypercm.polycore import RationalPoly, gcd

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def count_cache_path(tmp_path_factory):
    return tmp_path_factory.mktemp("cache") / "counts.jsonl"


@pytest.fixture(autouse=True)
def _isolated_cache(monkeypatch, count_cache_path):
    # keep the CLI and library away from the user's real cache
    monkeypatch.setenv("HYPERCM_CACHE", str(count_cache_path))


def odd_prime_powers(limit):
    out = []
    for p in range(3, limit + 1):
        if all(p % d for d in range(2, int(p**0.5) + 1)):
            k = 1
            while p**k <= limit:
                out.append((p, k))
                k += 1
    return out


def random_curves(n, seed, max_genus=3):
    """Random squarefree integer polynomials of degree 3..2*max_genus+2."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        deg = rng.randint(3, 2 * max_genus + 2)
        coeffs = [rng.randint(-9, 9) for _ in range(deg)] + [rng.choice([1, 2, 3, -1, 5])]
        f = RationalPoly(coeffs)
        if gcd(f, f.derivative()).degree == 0:
            out.append(f)
    return out


def good_contexts(f, limit):
    return [GFContext.create(p, k) for p, k in odd_prime_powers(limit) if good_prime(f, p)]
