"""Unit tests for the arithmetic layer.

Expected values are frozen from independent brute-force oracles defined in
this file (divisor scans, residue scans, direct summation); the library code
under test never computes its own expectations.
"""

import cmath
import math
from math import gcd

import numpy as np
import pytest

from horopoints.arith import (
    NotCoprime,
    divisor_count,
    factorize,
    is_prime,
    kloosterman_sum,
    mod_inverse,
    mobius,
    next_prime,
    omega,
    primes_coprime,
    ramanujan_sum,
    residue_count_formula,
    residue_set,
    totient,
    units,
    unit_inverses,
    weil_bound,
)


# ---------------------------------------------------------------------------
# oracles

def brute_gcd(a, b):
    if a == b == 0:
        return 0
    best = 1
    for d in range(1, min(x for x in (a, b) if x) + 1):
        if a % d == 0 and b % d == 0:
            best = d
    return best


def brute_totient(n):
    return sum(1 for k in range(n) if gcd(k, n) == 1) if n > 1 else 1


def brute_omega(n):
    count = 0
    m = n
    for p in range(2, n + 1):
        if p * p > m:
            break
        if m % p == 0:
            count += 1
            while m % p == 0:
                m //= p
    return count + (1 if m > 1 else 0)


def brute_residues(n, d, a=1):
    return {a * pow(k, d, n) % n for k in range(n) if gcd(k, n) == 1}


def brute_ramanujan(n, m):
    return sum(cmath.exp(2j * cmath.pi * m * k / n) for k in range(n) if gcd(k, n) == 1)


def brute_kloosterman(m1, m2, n):
    total = 0j
    for k in range(n):
        if gcd(k, n) == 1:
            kbar = pow(k, -1, n) if n > 1 else 0
            total += cmath.exp(2j * cmath.pi * ((m1 * k + m2 * kbar) % n) / n)
    return total


# ---------------------------------------------------------------------------

def test_gcd_examples():
    assert gcd(0, 7) == 7
    assert gcd(12, 18) == 6 == brute_gcd(12, 18)
    assert gcd(35, 64) == 1 == brute_gcd(35, 64)
    assert gcd(0, 0) == 0


def test_mod_inverse_examples():
    # scan oracle for 3 mod 7
    assert [x for x in range(7) if 3 * x % 7 == 1] == [5]
    assert mod_inverse(3, 7) == 5
    for n in (2, 5, 17, 100):
        assert mod_inverse(1, n) == 1
    with pytest.raises(NotCoprime):
        mod_inverse(2, 4)


def test_mod_inverse_involution():
    rng = np.random.default_rng(7)
    for _ in range(300):
        n = int(rng.integers(2, 5000))
        k = int(rng.integers(1, n))
        if gcd(k, n) != 1:
            continue
        kbar = mod_inverse(k, n)
        assert 0 <= kbar < n
        assert k * kbar % n == 1
        assert mod_inverse(kbar, n) == k % n


def test_totient_examples():
    assert totient(1) == 1
    assert totient(12) == 4 == brute_totient(12)
    assert totient(49) == 42 == brute_totient(49)


def test_totient_brute_force_sweep():
    # full comparison against the coprime count up to 10^4
    for n in range(1, 10_001):
        ks = np.arange(n, dtype=np.int64)
        expected = int((np.gcd(ks, n) == 1).sum()) if n > 1 else 1
        assert totient(n) == expected, n


def test_omega_examples():
    assert omega(1) == 0
    assert omega(12) == 2 == brute_omega(12)
    assert omega(30030) == 6 == brute_omega(30030)


def test_omega_log_bound():
    # omega(n) <= log2(n) holds everywhere (2^omega <= product of prime divisors <= n)
    for n in range(2, 10_001):
        assert omega(n) <= math.log2(n) + 1e-12
    # the natural-log version holds on [3, 10^4] with the single exception
    # n = 6, where omega = 2 > ln 6 = 1.79...; the bound is asymptotic.
    violations = {n for n in range(3, 10_001) if omega(n) > math.log(n)}
    assert violations == {6}


def test_factorize_and_divisors():
    assert factorize(1) == {}
    assert factorize(9973 * 9973) == {9973: 2}
    assert factorize(2 ** 10 * 3 ** 4 * 101) == {2: 10, 3: 4, 101: 1}
    # beyond the sieve: 10^7-scale semiprime
    p, q = 10_000_019, 10_000_079
    assert factorize(p * q) == {p: 1, q: 1}
    assert divisor_count(12) == 6
    assert mobius(1) == 1 and mobius(6) == 1 and mobius(4) == 0 and mobius(30) == -1


def test_next_prime_and_is_prime():
    assert [next_prime(10 ** k) for k in (3, 4, 5, 6)] == [1009, 10007, 100003, 1000003]
    assert is_prime(2) and is_prime(1000003) and not is_prime(1000001)


def test_primes_coprime_examples():
    assert primes_coprime(6, 10).primes == (5, 7)
    assert primes_coprime(1, 10).primes == (2, 3, 5, 7)
    assert len(primes_coprime(30, 2)) == 0
    ps = primes_coprime(100, 6.31)
    assert ps.primes == (3,)


def test_units_and_inverses():
    for n in (1, 2, 7, 12, 360):
        u = units(n)
        assert len(u) == totient(n)
        ub = unit_inverses(n)
        assert (u * ub % n == (1 % n)).all()


def test_residue_set_examples():
    assert residue_set(5, 1) == {1, 2, 3, 4} == brute_residues(5, 1)
    assert residue_set(7, 2) == {1, 2, 4} == brute_residues(7, 2)
    assert residue_set(15, 2) == {1, 4} == brute_residues(15, 2)
    with pytest.raises(NotCoprime):
        residue_set(6, 1, a=3)


def test_residue_set_random_against_brute():
    rng = np.random.default_rng(11)
    for _ in range(150):
        n = int(rng.integers(1, 400))
        d = int(rng.integers(1, 13))
        a = int(rng.integers(1, n + 1))
        if gcd(a, n) != 1:
            continue
        assert residue_set(n, d, a) == brute_residues(n, d, a), (n, d, a)


def test_residue_count_formula_examples():
    # odd prime power: phi(7)/gcd(phi(7), 2) = 6/2
    assert residue_count_formula(7, 2) == 3 == len(brute_residues(7, 2))
    # 2-power with even d: phi(8)/(2*gcd(2^(3-2), 2)) = 4/4
    assert residue_count_formula(8, 2) == 1 == len(brute_residues(8, 2))
    assert residue_count_formula(15, 2) == 2 == len(brute_residues(15, 2))
    # odd d at 2-powers: the d-th power map is onto the units
    for r in range(1, 8):
        for d in (1, 3, 5, 7, 9, 11):
            assert residue_count_formula(2 ** r, d) == len(brute_residues(2 ** r, d))


def test_residue_count_formula_sweep():
    for n in range(1, 301):
        for d in range(1, 9):
            assert residue_count_formula(n, d) == len(residue_set(n, d)), (n, d)


def test_ramanujan_examples():
    direct = brute_ramanujan(6, 1)
    assert abs(direct - 1) < 1e-12
    assert ramanujan_sum(6, 1) == 1
    for n in (1, 2, 9, 10, 36):
        assert ramanujan_sum(n, 0) == totient(n)
    assert abs(brute_ramanujan(4, 2) - (-2)) < 1e-12
    assert ramanujan_sum(4, 2) == -2


def test_ramanujan_closed_form_matches_direct():
    # full stated range, direct sums vectorized per modulus
    ms = np.arange(-20, 21)
    for n in range(1, 501):
        u = units(n)
        direct = np.exp((2j * np.pi / n) * (ms[:, None] * u[None, :] % n)).sum(axis=1)
        closed = np.array([ramanujan_sum(n, int(m)) for m in ms], dtype=float)
        assert np.abs(direct - closed).max() < 1e-9, n


def test_kloosterman_examples():
    assert kloosterman_sum(0, 0, 11) == totient(11)
    s = kloosterman_sum(1, 1, 5)
    assert abs(s - brute_kloosterman(1, 1, 5)) < 1e-12
    assert abs(s.real - 0.3819660112501051) < 1e-12
    assert abs(kloosterman_sum(1, 0, 6) - ramanujan_sum(6, 1)) < 1e-9


def _kloosterman_table(n, m_max):
    """All S(m1, m2; n) for |m_i| <= m_max via cumulative power ladders."""
    u = units(n)
    ub = unit_inverses(n)
    e1 = np.exp((2j * np.pi / n) * u)
    e2 = np.exp((2j * np.pi / n) * ub)

    def ladder(base):
        powers = {0: np.ones_like(base)}
        for m in range(1, m_max + 1):
            powers[m] = powers[m - 1] * base
            powers[-m] = np.conj(powers[m])
        return powers

    p1, p2 = ladder(e1), ladder(e2)
    return {(m1, m2): (p1[m1] * p2[m2]).sum()
            for m1 in range(-m_max, m_max + 1) for m2 in range(-m_max, m_max + 1)}


def test_kloosterman_real_symmetric_weil():
    # the Weil bound and symmetry over the full stated sweep: every n up to
    # 5000 and every |m1|, |m2| <= 5
    rng = np.random.default_rng(3)
    for n in range(1, 5001):
        table = _kloosterman_table(n, 5)
        for (m1, m2), s in table.items():
            assert abs(s.imag) <= 1e-9, (n, m1, m2)
            assert abs(s - table[m2, m1]) <= 1e-9
            if (m1, m2) != (0, 0):
                assert abs(s) <= weil_bound(m1, m2, n) + 1e-9, (n, m1, m2)
        # the ladder agrees with the library's direct summation
        if n % 257 == 0 or n < 4:
            m1, m2 = int(rng.integers(-5, 6)), int(rng.integers(-5, 6))
            assert abs(table[m1, m2] - kloosterman_sum(m1, m2, n)) <= 1e-9
