"""Generators for the rational point sets, the multiplication actions on
them, invariance verification, and finite-level projections.

A sample is keyed by the residue r that generates all of its coordinates:
torus1 = a*r/n, torus2 = b*rbar/n (triples only), and the surface point
u_{c*r/n} a_{n^alpha}^{-1}, i.e. z = (c*r mod n)/n + i*n^(-2*alpha).  For the
full set r runs over all residues; for monomial sets r runs over the
deduplicated d-th power residues of units, so collisions of k^d across unit
classes are counted once (sets, not multisets).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .arith import NotCoprime, gcd, mod_inverse, powmod, residue_array, totient
from .sl2 import FramedPoint, reduce_many

__all__ = [
    "PrimeDividesModulus",
    "PointSetSpec",
    "HorocycleSample",
    "PointSet",
    "LevelProjection",
    "gen_full",
    "gen_monomial",
    "gen_triple",
    "apply_M",
    "apply_T",
    "verify_invariance",
    "project_level",
    "project_level_direct",
    "project_level_stated",
]

_INT64_MOD_LIMIT = 1 << 31


class PrimeDividesModulus(ValueError):
    """The acting prime must be coprime to the modulus."""


def _scale_height(n: int, alpha: Fraction | float) -> float:
    # n^(-2 alpha) via exp/log; relative error ~1e-16, well under the 1e-13 budget
    if n == 1:
        return 1.0
    return math.exp(-2.0 * float(alpha) * math.log(n))


@dataclass(frozen=True)
class PointSetSpec:
    """Parameters of a point-set family.

    alpha is the horocycle expansion exponent (height n^(-2*alpha)); d the
    monomial degree; a, b, c the unit multipliers on the first torus, second
    torus, and surface coordinates; primitive restricts to gcd(k, n) = 1.
    """

    n: int
    alpha: Fraction = Fraction(1, 2)
    d: int = 1
    a: int = 1
    b: int = 1
    c: int = 1
    primitive: bool = True

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")


@dataclass(frozen=True)
class HorocycleSample:
    """One element of a point set, with exact torus coordinates on demand."""

    k: int
    n: int
    alpha: Fraction = Fraction(1, 2)
    a: int = 1
    b: int | None = None
    c: int = 1

    @property
    def torus1(self) -> Fraction:
        return Fraction((self.a * self.k) % self.n, self.n)

    @property
    def torus2(self) -> Fraction | None:
        if self.b is None:
            return None
        rbar = mod_inverse(self.k % self.n, self.n) if self.n > 1 else 0
        return Fraction((self.b * rbar) % self.n, self.n)

    @property
    def xpoint(self) -> FramedPoint:
        x = ((self.c * self.k) % self.n) / self.n
        return FramedPoint(complex(x, _scale_height(self.n, self.alpha)))


class PointSet(Sequence):
    """Array-backed sequence of samples sharing one spec.

    Iteration and indexing yield :class:`HorocycleSample`; bulk consumers use
    the cached coordinate arrays instead.  Generation is deterministic (keys
    ascending), so averages downstream are order-stable.
    """

    def __init__(self, spec: PointSetSpec, residues: np.ndarray, with_second: bool, x_mult: int):
        self.spec = spec
        self.residues = residues
        self.with_second = with_second
        self.x_mult = x_mult
        self._inv: np.ndarray | None = None
        self._reduced: tuple[np.ndarray, np.ndarray] | None = None

    def __len__(self) -> int:
        return len(self.residues)

    def __getitem__(self, i: int) -> HorocycleSample:
        s = self.spec
        return HorocycleSample(
            k=int(self.residues[i]),
            n=s.n,
            alpha=s.alpha,
            a=s.a,
            b=s.b if self.with_second else None,
            c=self.x_mult,
        )

    def __iter__(self) -> Iterator[HorocycleSample]:
        for i in range(len(self)):
            yield self[i]

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def scale_height(self) -> float:
        return _scale_height(self.spec.n, self.spec.alpha)

    def torus1_numerators(self) -> np.ndarray:
        return (self.spec.a % self.n) * self.residues % self.n

    def torus2_numerators(self) -> np.ndarray:
        if not self.with_second:
            raise ValueError("point set has no second torus coordinate")
        if self._inv is None:
            self._inv = powmod(self.residues, totient(self.n) - 1, self.n)
        return (self.spec.b % self.n) * self._inv % self.n

    def x_reals(self) -> np.ndarray:
        return ((self.x_mult % self.n) * self.residues % self.n) / float(self.n)

    def reduced_xy(self) -> tuple[np.ndarray, np.ndarray]:
        """Fundamental-domain coordinates of the surface points, cached."""
        if self._reduced is None:
            self._reduced = reduce_many(self.x_reals(), self.scale_height)
        return self._reduced

    def heights(self) -> np.ndarray:
        return self.reduced_xy()[1]


def gen_full(n: int, alpha: Fraction | float) -> PointSet:
    """All n rational points k/n, k = 0..n-1, at height n^(-2*alpha)."""
    spec = PointSetSpec(n=n, alpha=Fraction(alpha), d=1, primitive=False)
    if n >= _INT64_MOD_LIMIT:
        raise ValueError("bulk generation requires n < 2^31")
    return PointSet(spec, np.arange(n, dtype=np.int64), with_second=False, x_mult=1)


def gen_monomial(spec: PointSetSpec) -> PointSet:
    """Deduplicated pairs (a*k^d/n, u_{b*k^d/n} a_{n^alpha}^{-1}) over units k.

    The second coefficient of a pair set rides on the surface coordinate.
    len equals residue_count_formula(n, d).
    """
    if gcd(spec.a * spec.b, spec.n) != 1:
        raise NotCoprime(f"a*b={spec.a * spec.b} shares a factor with n={spec.n}")
    if not spec.primitive and spec.d == 1:
        res = np.arange(spec.n, dtype=np.int64)
    else:
        res = residue_array(spec.n, spec.d)
    return PointSet(spec, res, with_second=False, x_mult=spec.b)


def gen_triple(spec: PointSetSpec) -> PointSet:
    """Triples (a*k^d/n, b*inv(k^d)/n, u_{c*k^d/n} a_{n^alpha}^{-1}) over units.

    The canonical family fixes alpha = 1/2; other alphas are accepted for
    exploration only.
    """
    if gcd(spec.a * spec.b * spec.c, spec.n) != 1:
        raise NotCoprime(
            f"a*b*c={spec.a * spec.b * spec.c} shares a factor with n={spec.n}"
        )
    res = residue_array(spec.n, spec.d)
    return PointSet(spec, res, with_second=True, x_mult=spec.c)


# ---------------------------------------------------------------------------
# multiplication actions

def _check_prime_action(p: int, n: int) -> None:
    if gcd(p, n) != 1:
        raise PrimeDividesModulus(f"p={p} divides n={n}")


def apply_M(sample: HorocycleSample, p: int, d: int, sign: int = 1) -> HorocycleSample:
    """Residue map k -> p^(+-2d) * k mod n (negative sign via the inverse)."""
    _check_prime_action(p, sample.n)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    factor = pow(p, 2 * d, sample.n)
    if sign < 0:
        factor = mod_inverse(factor, sample.n)
    return replace(sample, k=(factor * sample.k) % sample.n)


def apply_T(sample: HorocycleSample, p: int, d: int) -> HorocycleSample:
    """Triple action: first torus coordinate times p^(2d), second times its
    inverse, surface point moved accordingly (k -> p^(2d) k mod n)."""
    if sample.b is None:
        raise ValueError("apply_T acts on triple samples")
    _check_prime_action(p, sample.n)
    factor = pow(p, 2 * d, sample.n)
    return replace(sample, k=(factor * sample.k) % sample.n)


def verify_invariance(spec: PointSetSpec, p: int) -> bool:
    """True iff multiplication by p^(2d) permutes the generated set exactly.

    Equality is checked on exact coordinates: with unit multipliers the
    coordinate tuple of a sample is a bijective function of its residue key,
    so set equality of sorted residue arrays is set equality of the samples.
    """
    _check_prime_action(p, spec.n)
    if not spec.primitive and spec.d == 1:
        res = np.arange(spec.n, dtype=np.int64)
    else:
        res = residue_array(spec.n, spec.d)
    factor = pow(p, 2 * spec.d, spec.n)
    mapped = np.sort(res * (factor % spec.n) % spec.n)
    return bool(np.array_equal(mapped, res))


# ---------------------------------------------------------------------------
# finite-level projections

@dataclass(frozen=True)
class LevelProjection:
    """Projection of the full rational point set to a finite level.

    pairs holds (t mod S^l, t mod S^m) with t = S^(l v m) * k / n, as exact
    rationals with representatives in [0, S^l) x [0, S^m).
    """

    finite_places: tuple[int, ...]
    l: tuple[int, ...]
    m: tuple[int, ...]
    pairs: frozenset = field(repr=False)


def _prod_power(places, exps) -> int:
    out = 1
    for p, e in zip(places, exps):
        out *= p ** e
    return out


def _mod_frac(q: Fraction, modulus: int) -> Fraction:
    return q - (q / modulus).__floor__() * modulus


def _validate_projection_args(n, places, l, m):
    places = tuple(places)
    l = tuple(l)
    m = tuple(m)
    if len(l) != len(places) or len(m) != len(places):
        raise ValueError("exponent vectors must align with the place set")
    if any(e < 0 for e in l + m):
        raise ValueError("exponents must be non-negative")
    for p in places:
        if n % p == 0:
            raise NotCoprime(f"place {p} divides n={n}")
    return places, l, m


def project_level_stated(n: int, finite_places, l, m) -> frozenset:
    """The closed-form projection set {(S^(lvm) k/n mod S^l, ... mod S^m)}."""
    places, l, m = _validate_projection_args(n, finite_places, l, m)
    s_join = _prod_power(places, tuple(max(a, b) for a, b in zip(l, m)))
    s_l = _prod_power(places, l)
    s_m = _prod_power(places, m)
    pairs = set()
    for k in range(n):
        t = Fraction(s_join * k, n)
        pairs.add((_mod_frac(t, s_l), _mod_frac(t, s_m)))
    return frozenset(pairs)


def project_level_direct(n: int, finite_places, l, m) -> frozenset:
    """The projection computed pointwise through strong approximation.

    For each k an integer r = k/n mod S^(lvm) is chosen so k/n - r is
    divisible by S^(lvm); the pair is (k/n - r) mod S^l and mod S^m.
    """
    places, l, m = _validate_projection_args(n, finite_places, l, m)
    s_join = _prod_power(places, tuple(max(a, b) for a, b in zip(l, m)))
    s_l = _prod_power(places, l)
    s_m = _prod_power(places, m)
    n_inv = mod_inverse(n % s_join, s_join) if s_join > 1 else 0
    pairs = set()
    for k in range(n):
        r = (k * n_inv) % s_join
        t = Fraction(k, n) - r
        pairs.add((_mod_frac(t, s_l), _mod_frac(t, s_m)))
    return frozenset(pairs)


def project_level(n: int, finite_places, l, m) -> LevelProjection:
    """Project the rational points to level (S^l, S^m); both computation
    paths are evaluated and must agree exactly."""
    stated = project_level_stated(n, finite_places, l, m)
    direct = project_level_direct(n, finite_places, l, m)
    if stated != direct:
        raise ArithmeticError(
            f"projection paths disagree for n={n}, places={finite_places}, l={l}, m={m}"
        )
    places, l, m = _validate_projection_args(n, finite_places, l, m)
    return LevelProjection(places, l, m, stated)
