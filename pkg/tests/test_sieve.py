import numpy as np
import pytest

from coprime_lab.errors import ResourceLimitError
from coprime_lab.sieve import (
    MAX_SIEVE_LIMIT,
    SieveTables,
    build_sieve,
    prime_count,
    primes_up_to,
)

N_PROP = 10**4


@pytest.fixture(scope="module")
def tables() -> SieveTables:
    return build_sieve(N_PROP)


def simple_prime_sieve(n):
    """Independent boolean Eratosthenes oracle."""
    is_p = [True] * (n + 1)
    is_p[0] = is_p[1] = False
    p = 2
    while p * p <= n:
        if is_p[p]:
            for m in range(p * p, n + 1, p):
                is_p[m] = False
        p += 1
    return is_p


def factorize(n):
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def test_degenerate_limit():
    t = build_sieve(1)
    assert t.limit == 1
    assert t.mu[1] == 1 and t.phi[1] == 1
    assert len(t.primes) == 0


def test_small_values():
    t = build_sieve(30)
    assert t.phi[10] == 4 and t.mu[10] == 1 and t.spf[10] == 2
    assert t.mu[30] == -1  # 2 * 3 * 5
    assert t.phi[1] == 1 and t.mu[1] == 1


def test_prime_entries(tables):
    is_p = simple_prime_sieve(N_PROP)
    for p in range(2, N_PROP + 1):
        if is_p[p]:
            assert tables.phi[p] == p - 1
            assert tables.mu[p] == -1
            assert tables.spf[p] == p
    assert [int(p) for p in tables.primes[:10]] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert np.all(np.diff(tables.primes) > 0)


def test_mu_phi_against_factorization(tables):
    for n in range(2, 2001):
        fac = factorize(n)
        mu = 0 if any(e > 1 for _, e in fac) else (-1) ** len(fac)
        phi = 1
        for p, e in fac:
            phi *= (p - 1) * p ** (e - 1)
        assert tables.mu[n] == mu, n
        assert tables.phi[n] == phi, n


def test_divisor_sum_identities(tables):
    # sum_{d|n} phi(d) = n and sum_{d|n} mu(d) = 0 (n >= 2), accumulated
    # over multiples so the check is O(N log N)
    phi_acc = np.zeros(N_PROP + 1, dtype=np.int64)
    mu_acc = np.zeros(N_PROP + 1, dtype=np.int64)
    for d in range(1, N_PROP + 1):
        phi_acc[d::d] += int(tables.phi[d])
        mu_acc[d::d] += int(tables.mu[d])
    assert np.array_equal(phi_acc[1:], np.arange(1, N_PROP + 1))
    assert mu_acc[1] == 1
    assert np.all(mu_acc[2:] == 0)


def test_mu_zero_iff_square_divisor(tables):
    for n in range(1, 3001):
        has_sq = any(e > 1 for _, e in factorize(n))
        assert (tables.mu[n] == 0) == has_sq, n


def test_prefix_consistency():
    small, big = build_sieve(500), build_sieve(1000)
    assert np.array_equal(big.mu[:501], small.mu)
    assert np.array_equal(big.phi[:501], small.phi)
    assert np.array_equal(big.spf[:501], small.spf)
    n_small = int(np.searchsorted(big.primes, 500, side="right"))
    assert np.array_equal(big.primes[:n_small], small.primes)


def test_prime_count_values():
    t = build_sieve(10**6)
    assert prime_count(t, 0) == 0
    assert prime_count(t, 1) == 0
    assert prime_count(t, 2) == 1
    assert prime_count(t, 100) == 25
    oracle = sum(simple_prime_sieve(10**6))
    assert prime_count(t, 10**6) == oracle == 78498


def test_prime_count_monotone_and_density_decreasing():
    t = build_sieve(10**6)
    xs = [10**3, 10**4, 10**5, 10**6]
    counts = [prime_count(t, x) for x in xs]
    assert counts == sorted(counts)
    dens = [c / x for c, x in zip(counts, xs)]
    assert all(a > b for a, b in zip(dens, dens[1:]))


def test_errors():
    with pytest.raises(ResourceLimitError):
        build_sieve(0)
    with pytest.raises(ResourceLimitError):
        build_sieve(MAX_SIEVE_LIMIT + 1)
    t = build_sieve(100)
    with pytest.raises(ValueError):
        prime_count(t, 101)
    with pytest.raises(ValueError):
        prime_count(t, -1)


def test_tables_immutable(tables):
    for arr in (tables.mu, tables.phi, tables.spf, tables.primes):
        with pytest.raises(ValueError):
            arr[1] = 0


def test_primes_up_to():
    assert primes_up_to(1).tolist() == []
    assert primes_up_to(2).tolist() == [2]
    assert primes_up_to(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(ResourceLimitError):
        primes_up_to(MAX_SIEVE_LIMIT + 1)
