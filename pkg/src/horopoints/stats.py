"""Empirical averages against Haar targets, exponential-sum identities,
the prime-averaged discrepancy operator, and decay-rate estimation."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import primes_coprime, totient, unit_inverses, units
from .observables import Observable, evaluate, evaluate_many, haar_expectation
from .points import PointSet, PointSetSpec, gen_full, gen_monomial, gen_triple

__all__ = [
    "EmptySet",
    "InsufficientData",
    "NoPrimesAvailable",
    "NotExpanding",
    "DiscrepancyResult",
    "EquidistReport",
    "empirical_average",
    "kloosterman_average",
    "weyl_sum_full",
    "weyl_sums_all_residues",
    "toral_correlation",
    "discrepancy_l2",
    "rate_fit",
    "cusp_mass",
    "primitive_density",
    "equidist_report",
]

_ERROR_FLOOR = 1e-15


class EmptySet(ValueError):
    """An average over zero samples was requested."""


class InsufficientData(ValueError):
    """The rate fit needs at least three usable points."""


class NoPrimesAvailable(ValueError):
    """The prime window of the discrepancy operator is empty."""


class NotExpanding(ValueError):
    """The toral endomorphism must have all eigenvalues outside the unit circle."""


def empirical_average(samples, obs: Observable) -> complex:
    """Arithmetic mean of the observable over the samples.

    Accumulation goes through numpy's pairwise summation in a fixed (key
    ascending) order, so results are deterministic and permutation of the
    input moves the value by at most O(len * eps).
    """
    if isinstance(samples, PointSet):
        if len(samples) == 0:
            raise EmptySet("point set is empty")
        vals = np.asarray(evaluate_many(obs, samples), dtype=complex)
    else:
        vals = np.array([evaluate(obs, s) for s in samples], dtype=complex)
        if vals.size == 0:
            raise EmptySet("no samples given")
    return complex(vals.mean())


def kloosterman_average(n: int, m1: int, m2: int) -> complex:
    """(1/phi(n)) * sum over units of e((m1*k + m2*kbar)/n), summed directly."""
    if n < 1:
        raise ValueError("need n >= 1")
    if n == 1:
        return complex(1.0)
    u = units(n)
    ub = unit_inverses(n)
    phase = ((m1 % n) * u % n + (m2 % n) * ub % n) % n
    vals = np.exp((2j * np.pi / n) * phase)
    return complex(vals.mean())


def weyl_sum_full(n: int, m: int) -> complex:
    """(1/n) * sum_{k<n} e(mk/n), which is 1 if n | m and 0 otherwise."""
    if n < 1:
        raise ValueError("need n >= 1")
    ks = np.arange(n, dtype=np.int64)
    phase = (m % n) * ks % n
    return complex(np.exp((2j * np.pi / n) * phase).mean())


def weyl_sums_all_residues(n: int) -> np.ndarray:
    """All n full Weyl sums at once: entry m holds (1/n) sum_k e(mk/n).

    This is the DFT of the all-ones vector, i.e. the same character sums as
    :func:`weyl_sum_full` evaluated for every residue m mod n in one pass;
    e(mk/n) depends on m only mod n, so the residues cover every integer m.
    """
    ones = np.ones(n)
    return np.conj(np.fft.fft(ones)) / n


def toral_correlation(matrix, m_in, m_out, level=None) -> float:
    """<e_{m_in} o T_A, e_{m_out}> for an expanding integer matrix A.

    By orthogonality of characters this is 1 exactly when A^T m_in = m_out
    and 0 otherwise; the bookkeeping is exact integer arithmetic, the
    expansion check is numeric.  `level` (torus periods) is accepted for
    signature completeness; the frequency lattice is Z^n for every level.
    """
    A = np.atleast_2d(np.asarray(matrix, dtype=np.int64))
    if A.shape[0] != A.shape[1] or A.shape[0] not in (1, 2):
        raise ValueError("matrix must be 1x1 or 2x2")
    eig = np.linalg.eigvals(A.astype(np.float64))
    if not (np.abs(eig) > 1.0 + 1e-12).all():
        raise NotExpanding(f"eigenvalues {eig} not all outside the unit circle")
    vin = np.atleast_1d(np.asarray(m_in, dtype=np.int64))
    vout = np.atleast_1d(np.asarray(m_out, dtype=np.int64))
    if vin.shape != (A.shape[0],) or vout.shape != (A.shape[0],):
        raise ValueError("frequency vectors must match the matrix size")
    return 1.0 if np.array_equal(A.T @ vin, vout) else 0.0


@dataclass(frozen=True)
class DiscrepancyResult:
    """Exact L^2 norm of the prime-averaged discrepancy on one character."""

    n: int
    beta: float
    d: int
    m: int
    l2_value: float
    closed_form: float
    prime_count: int


def discrepancy_l2(n: int, beta: float, d: int, m: int) -> DiscrepancyResult:
    """L^2 norm squared of the discrepancy operator applied to e_m.

    The operator averages F over the maps t -> p^(2d) t for primes p in
    P(n, n^beta) and subtracts the mean.  On the character e_m (m != 0) the
    average is (1/pi_n) * sum_p e_{m p^(2d)}, so by orthogonality the norm
    squared is sum multiplicity^2 / pi_n^2 over the integer frequencies
    m * p^(2d) -- equal to 1/pi_n since distinct primes give distinct
    frequencies.  Everything is exact frequency bookkeeping, no sampling.
    """
    if not 0 < beta < 0.5:
        raise ValueError("beta must lie in (0, 1/2)")
    if m == 0:
        raise ValueError("m must be nonzero")
    if d < 1 or n < 1:
        raise ValueError("need n >= 1 and d >= 1")
    ps = primes_coprime(n, float(n) ** beta)
    if len(ps) == 0:
        raise NoPrimesAvailable(f"P({n}, {n}^{beta}) is empty")
    freqs = Counter(m * p ** (2 * d) for p in ps)
    count = len(ps)
    l2 = Fraction(sum(mult * mult for mult in freqs.values()), count * count)
    return DiscrepancyResult(
        n=n, beta=beta, d=d, m=m,
        l2_value=float(l2),
        closed_form=1.0 / count,
        prime_count=count,
    )


def rate_fit(n_values: Sequence[int], errors: Sequence[float]) -> tuple[float, float]:
    """Least-squares fit of log error = const - kappa * log n.

    Errors at or below the 1e-15 floor are treated as exact cancellations and
    excluded.  Returns (kappa, rms residual).
    """
    pairs = [(n, e) for n, e in zip(n_values, errors) if e > _ERROR_FLOOR]
    if len(pairs) < 3:
        raise InsufficientData("need >= 3 points with positive error")
    logn = np.log([p[0] for p in pairs])
    loge = np.log([p[1] for p in pairs])
    slope, intercept = np.polyfit(logn, loge, 1)
    resid = loge - (slope * logn + intercept)
    return float(-slope), float(np.sqrt(np.mean(resid ** 2)))


def cusp_mass(samples, T: float) -> float:
    """Fraction of samples whose invariant height exceeds T."""
    if isinstance(samples, PointSet):
        if len(samples) == 0:
            raise EmptySet("point set is empty")
        return float((samples.heights() > T).mean())
    from .sl2 import invariant_height

    heights = [invariant_height(s.xpoint) for s in samples]
    if not heights:
        raise EmptySet("no samples given")
    return sum(1 for h in heights if h > T) / len(heights)


def primitive_density(n: int) -> tuple[float, float]:
    """(phi(n)/n, phi(n) * log log n / n); the second stays bounded below."""
    if n < 3:
        raise ValueError("need n >= 3 for log log n")
    ratio = totient(n) / n
    return ratio, ratio * math.log(math.log(n))


# ---------------------------------------------------------------------------
# experiment reports

@dataclass
class EquidistReport:
    """Per-n empirical averages of one observable against its Haar target."""

    spec: PointSetSpec
    variant: str
    observable: str
    n_values: list[int]
    empirical: list[complex]
    haar: float
    errors: list[float]
    fitted_kappa: float | None
    fit_residual: float | None
    haar_exact: bool = True

    def rows(self) -> list[tuple]:
        return [
            (n, emp.real, emp.imag, self.haar, err)
            for n, emp, err in zip(self.n_values, self.empirical, self.errors)
        ]


def _generate(spec: PointSetSpec, variant: str) -> PointSet:
    if variant == "full":
        return gen_full(spec.n, spec.alpha)
    if variant == "monomial":
        return gen_monomial(spec)
    if variant == "triple":
        return gen_triple(spec)
    raise ValueError(f"unknown variant {variant!r}")


def equidist_report(spec_template: PointSetSpec, variant: str, obs: Observable,
                    n_values: Sequence[int],
                    point_sets: dict[int, PointSet] | None = None) -> EquidistReport:
    """Run one observable over an n schedule and fit the error decay.

    n values whose error is below 10 * eps * |haar| are excluded from the fit
    (exact-cancellation cases carry no rate information).
    """
    n_values = sorted(n_values)
    target = haar_expectation(obs)
    empirical: list[complex] = []
    errors: list[float] = []
    for n in n_values:
        ps = None if point_sets is None else point_sets.get(n)
        if ps is None:
            ps = _generate(replace(spec_template, n=n), variant)
        emp = empirical_average(ps, obs)
        empirical.append(emp)
        errors.append(abs(emp - target.value))
    cutoff = max(10.0 * np.finfo(float).eps * abs(target.value), _ERROR_FLOOR)
    usable = [(n, e) for n, e in zip(n_values, errors) if e > cutoff]
    kappa = residual = None
    if len(usable) >= 3:
        kappa, residual = rate_fit([u[0] for u in usable], [u[1] for u in usable])
    return EquidistReport(
        spec=spec_template,
        variant=variant,
        observable=obs.describe(),
        n_values=list(n_values),
        empirical=empirical,
        haar=target.value,
        errors=errors,
        fitted_kappa=kappa,
        fit_residual=residual,
        haar_exact=target.exact,
    )
