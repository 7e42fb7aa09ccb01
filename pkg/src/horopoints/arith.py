"""Exact modular and multiplicative arithmetic underlying the point sets.

Integers are plain Python ints (arbitrary precision), so nothing here can
silently overflow.  Bulk helpers use int64 numpy arrays and are only taken
when the modulus is small enough that every intermediate product fits.
Exponential sums accumulate in float64 through numpy's pairwise summation,
which is deterministic and keeps the rounding error at O(log n * eps).
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from math import gcd
from typing import Iterator

import numpy as np

__all__ = [
    "NotCoprime",
    "PrimeSet",
    "gcd",
    "is_prime",
    "next_prime",
    "factorize",
    "totient",
    "omega",
    "mobius",
    "divisor_count",
    "mod_inverse",
    "primes_upto",
    "primes_coprime",
    "units",
    "unit_inverses",
    "powmod",
    "residue_set",
    "residue_array",
    "residue_count_formula",
    "ramanujan_sum",
    "kloosterman_sum",
    "weil_bound",
]


class NotCoprime(ValueError):
    """An operation required coprime arguments and did not get them."""


_TWO_PI = 2.0 * math.pi

# int64 modular products are exact only below this modulus
_INT64_MOD_LIMIT = 1 << 31


# ---------------------------------------------------------------------------
# prime sieve (smallest-prime-factor table), grown on demand

_SIEVE_FLOOR = 1_000_000
_sieve_lock = threading.Lock()
_spf: np.ndarray | None = None      # spf[i] = smallest prime factor of composite i, else 0
_prime_list: np.ndarray | None = None


def _ensure_sieve(limit: int) -> None:
    global _spf, _prime_list
    if _spf is not None and len(_spf) > limit:
        return
    with _sieve_lock:
        if _spf is not None and len(_spf) > limit:
            return
        size = max(limit + 1, _SIEVE_FLOOR + 1)
        spf = np.zeros(size, dtype=np.int64)
        spf[0] = spf[1] = 1
        for p in range(2, math.isqrt(size - 1) + 1):
            if spf[p] == 0:
                block = spf[p * p:: p]
                block[block == 0] = p
        primes = np.flatnonzero(spf == 0).astype(np.int64)
        # publish fully built tables only (readers never take the lock)
        _prime_list = primes
        _spf = spf


def primes_upto(x: float) -> np.ndarray:
    """All primes p with p < x, ascending."""
    if x <= 2:
        return np.empty(0, dtype=np.int64)
    limit = int(math.ceil(x))
    _ensure_sieve(limit)
    assert _prime_list is not None
    return _prime_list[_prime_list < x]


@dataclass(frozen=True)
class PrimeSet:
    """Primes p with 1 < p < cutoff and gcd(p, modulus) = 1, ascending."""

    modulus: int
    cutoff: float
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.primes)

    def __contains__(self, p: int) -> bool:
        return p in self.primes


def primes_coprime(n: int, x: float) -> PrimeSet:
    """The prime set P(n, x): primes below x that do not divide n."""
    if x <= 0:
        raise ValueError("cutoff must be positive")
    ps = primes_upto(x)
    keep = tuple(int(p) for p in ps if n % int(p) != 0)
    return PrimeSet(modulus=n, cutoff=float(x), primes=keep)


# ---------------------------------------------------------------------------
# factorization

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    r, d = 0, n - 1
    while d % 2 == 0:
        r += 1
        d //= 2
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    k = max(2, n)
    while not is_prime(k):
        k += 1
    return k


def _pollard_rho(n: int) -> int:
    # deterministic: sweep the polynomial offset until a factor splits off
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed to split {n}")


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as {p: exponent}, trial division + rho fallback."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out: dict[int, int] = {}
    if n == 1:
        return out
    _ensure_sieve(_SIEVE_FLOOR)
    assert _spf is not None
    spf = _spf
    limit = len(spf)

    def _add(p: int) -> None:
        out[p] = out.get(p, 0) + 1

    stack = [n]
    while stack:
        m = stack.pop()
        while m > 1:
            if m < limit:
                p = int(spf[m])
                if p == 0:
                    p = m
                _add(p)
                m //= p
            elif is_prime(m):
                _add(m)
                m = 1
            else:
                d = _pollard_rho(m)
                stack.append(d)
                m //= d
    return out


def totient(n: int) -> int:
    """Euler's phi via factorization."""
    if n < 1:
        raise ValueError("totient requires n >= 1")
    phi = 1
    for p, e in factorize(n).items():
        phi *= p ** (e - 1) * (p - 1)
    return phi


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    if n < 1:
        raise ValueError("omega requires n >= 1")
    return len(factorize(n))


def mobius(n: int) -> int:
    """Moebius mu: 0 on non-squarefree n, else (-1)^omega(n)."""
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def divisor_count(n: int) -> int:
    """tau(n), the number of divisors."""
    tau = 1
    for e in factorize(n).values():
        tau *= e + 1
    return tau


# ---------------------------------------------------------------------------
# residues

def mod_inverse(k: int, n: int) -> int:
    """Inverse of k mod n, canonical representative in [0, n)."""
    try:
        return pow(k, -1, n)
    except ValueError as exc:
        raise NotCoprime(f"{k} is not invertible mod {n}") from exc


def units(n: int) -> np.ndarray:
    """Residues in [0, n) coprime to n, ascending int64 (requires n < 2^31)."""
    if not 1 <= n < _INT64_MOD_LIMIT:
        raise ValueError("units() is an int64 bulk path; need 1 <= n < 2^31")
    ks = np.arange(n, dtype=np.int64)
    return ks[np.gcd(ks, n) == 1]


def powmod(base: np.ndarray, exp: int, n: int) -> np.ndarray:
    """Vectorized base**exp mod n by square-and-multiply (n < 2^31, exp >= 0)."""
    if n >= _INT64_MOD_LIMIT:
        raise ValueError("powmod is an int64 bulk path; need n < 2^31")
    result = np.ones_like(base) % n
    acc = np.mod(base, n)
    e = exp
    while e > 0:
        if e & 1:
            result = (result * acc) % n
        acc = (acc * acc) % n
        e >>= 1
    return result


def unit_inverses(n: int) -> np.ndarray:
    """Inverses of units(n), aligned elementwise (k * kbar = 1 mod n)."""
    u = units(n)
    return powmod(u, totient(n) - 1, n)


def residue_set(n: int, d: int, a: int = 1) -> set[int]:
    """The set {a * k^d mod n : gcd(k, n) = 1}, deduplicated."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if gcd(a, n) != 1:
        raise NotCoprime(f"a={a} shares a factor with n={n}")
    return set(residue_array(n, d, a).tolist())


def residue_array(n: int, d: int, a: int = 1) -> np.ndarray:
    """Sorted unique array of a * k^d mod n over units k."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if gcd(a, n) != 1:
        raise NotCoprime(f"a={a} shares a factor with n={n}")
    if n < _INT64_MOD_LIMIT:
        r = powmod(units(n), d, n)
        if a % n != 1:
            r = (r * (a % n)) % n
        return np.unique(r)
    vals = sorted({a * pow(k, d, n) % n for k in range(n) if gcd(k, n) == 1})
    return np.array(vals, dtype=object)


def residue_count_formula(n: int, d: int) -> int:
    """Predicted size of {k^d mod n : gcd(k, n) = 1}, multiplicatively.

    Odd prime powers contribute phi(p^r) / gcd(phi(p^r), d) (the unit group
    is cyclic).  At p = 2 the unit group of Z/2^r is Z/2 x Z/2^(r-2) for
    r >= 2, so the image of the d-th power map has size
    (2 / gcd(2, d)) * (2^(r-2) / gcd(2^(r-2), d)); 2^1 contributes 1.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    count = 1
    for p, r in factorize(n).items():
        if p == 2:
            if r == 1:
                block = 1
            else:
                half = 1 << (r - 2)
                block = (2 // gcd(2, d)) * (half // gcd(half, d))
        else:
            phi_pr = p ** (r - 1) * (p - 1)
            block = phi_pr // gcd(phi_pr, d)
        count *= block
    return count


# ---------------------------------------------------------------------------
# exponential sums

def ramanujan_sum(n: int, m: int) -> int:
    """c_n(m) = sum over units k of e(mk/n), by the closed form.

    Equals mu(n/g) * phi(n) / phi(n/g) with g = gcd(m, n); always an integer.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    g = gcd(abs(m), n)
    q = n // g
    mu = mobius(q)
    if mu == 0:
        return 0
    return mu * totient(n) // totient(q)


def kloosterman_sum(m1: int, m2: int, n: int) -> complex:
    """S(m1, m2; n) = sum over units k of e((m1*k + m2*kbar)/n).

    The value is real (k <-> n-k pairs terms into conjugates); the complex
    return type keeps the roundoff in the imaginary part visible.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if n == 1:
        return complex(1.0)
    if n < _INT64_MOD_LIMIT:
        u = units(n)
        phase = (m1 % n) * u % n
        if m2 % n:
            phase = (phase + (m2 % n) * unit_inverses(n)) % n
        return complex(np.exp((2j * np.pi / n) * phase).sum())
    total = 0.0 + 0.0j
    for k in range(n):
        if gcd(k, n) == 1:
            e = (m1 * k + m2 * mod_inverse(k, n)) % n
            total += cmath.exp(_TWO_PI * 1j * e / n)
    return total


def weil_bound(m1: int, m2: int, n: int) -> float:
    """tau(n) * sqrt(gcd(m1, m2, n)) * sqrt(n), valid for (m1, m2) != (0, 0)."""
    if m1 == 0 and m2 == 0:
        raise ValueError("bound requires (m1, m2) != (0, 0)")
    g = gcd(gcd(abs(m1), abs(m2)), n)
    return divisor_count(n) * math.sqrt(g) * math.sqrt(n)
