"""Exact arithmetic side of the explicit-formula comparison.

Provides the von Mangoldt sieve Lambda(n), the representation-counting
convolution

    r_Q(n) = sum over l1, l2 >= 1 with l1^2 + l2^2 < n of Lambda(n - l1^2 - l2^2)

(the weighted count of ways to write n as a prime power plus two positive
squares), the Cesaro-weighted left-hand side

    sum_{n <= N} r_Q(n) (N - n)^k / Gamma(k + 1),

and the truncated generating functions

    S(z)      = sum_{m >= 1} Lambda(m) e^{-m z}
    omega2(z) = sum_{m >= 1} e^{-m^2 z}
    theta3(z) = 1 + 2 omega2(z)            (full integer lattice folded in)

for Re z > 0, each with a computed bound on the discarded tail.

Lambda values are stored as floating log p with the underlying (n, p, j)
prime-power structure retained, so any Lambda-weighted sum can be re-accumulated
per prime as an exact integer-coefficient combination of log p (see
rq_prime_counts); that audit path is what the oracle-equivalence tests compare.
"""

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError, TableSizeError
from .summation import CompensatedSum

__all__ = [
    "LambdaTable",
    "LinnikTable",
    "CesaroParams",
    "TruncatedValue",
    "sieve_von_mangoldt",
    "compute_rq",
    "rq_prime_counts",
    "cesaro_lhs",
    "s_tilde",
    "omega2",
    "theta3",
]

# Hard cap on sieve size; segmented sieving beyond this is out of scope.
MAX_SIEVE = 10**7


@dataclass(frozen=True)
class LambdaTable:
    """von Mangoldt values on 1..limit plus the exact prime-power structure.

    values[n] = log p when n = p^j, else 0.0; pp_n/pp_p/pp_j list every prime
    power n = p^j <= limit in ascending n.
    """

    limit: int
    values: np.ndarray
    pp_n: np.ndarray
    pp_p: np.ndarray
    pp_j: np.ndarray

    def psi(self) -> float:
        """Chebyshev psi(limit) = sum of the table."""
        return float(np.sum(self.values))


@dataclass(frozen=True)
class LinnikTable:
    """r_Q(n) for 1 <= n <= limit (values[0] unused, kept 0)."""

    limit: int
    values: np.ndarray


@dataclass(frozen=True)
class CesaroParams:
    """Average length N and Cesaro exponent k.

    k > 3/2 is the theorem range; smaller positive k is accepted only by
    probe-mode callers.
    """

    N: int
    k: float

    def __post_init__(self):
        if self.N < 4:
            raise DomainError(f"N must be >= 4, got {self.N}")
        if not math.isfinite(self.k):
            raise DomainError("k must be finite")


class TruncatedValue(NamedTuple):
    """A truncated series value together with a bound on the discarded tail."""

    value: complex
    tail_bound: float


def sieve_von_mangoldt(N: int) -> LambdaTable:
    """Tabulate Lambda(n) for 1 <= n <= N by sieving.

    Prime powers are detected with exact integer arithmetic (repeated
    multiplication, no floating-point root finding).
    """
    if N < 1:
        raise TableSizeError(f"table limit must be >= 1, got {N}")
    if N > MAX_SIEVE:
        raise TableSizeError(f"table limit {N} exceeds supported maximum {MAX_SIEVE}")

    is_prime = np.ones(N + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(N) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False
    primes = np.nonzero(is_prime)[0]

    values = np.zeros(N + 1, dtype=np.float64)
    pp_n, pp_p, pp_j = [], [], []
    for p in primes.tolist():
        logp = math.log(p)
        pk = p
        j = 1
        while pk <= N:
            values[pk] = logp
            pp_n.append(pk)
            pp_p.append(p)
            pp_j.append(j)
            pk *= p
            j += 1

    order = np.argsort(np.asarray(pp_n, dtype=np.int64), kind="stable")
    pp_n = np.asarray(pp_n, dtype=np.int64)[order]
    pp_p = np.asarray(pp_p, dtype=np.int64)[order]
    pp_j = np.asarray(pp_j, dtype=np.int64)[order]
    return LambdaTable(limit=N, values=values, pp_n=pp_n, pp_p=pp_p, pp_j=pp_j)


def _lattice_norms(limit_exclusive: int):
    """Yield l1^2 + l2^2 over l1, l2 >= 1 in ascending (l1, l2) order."""
    l1 = 1
    while l1 * l1 + 1 < limit_exclusive:
        s1 = l1 * l1
        l2 = 1
        while s1 + l2 * l2 < limit_exclusive:
            yield s1 + l2 * l2
            l2 += 1
        l1 += 1


def compute_rq(lam: LambdaTable, N: int) -> LinnikTable:
    """Convolve the Lambda table against the two-positive-squares lattice.

    Iterates lattice pairs outer, n inner (one contiguous slice add per pair),
    in a fixed order, so the float accumulation is deterministic.
    """
    if lam.limit < N:
        raise DomainError(f"Lambda table limit {lam.limit} < requested N {N}")
    values = np.zeros(N + 1, dtype=np.float64)
    for lam2 in _lattice_norms(N):
        # values[n] += Lambda(n - lam2) for n in (lam2, N]
        values[lam2 + 1 : N + 1] += lam.values[1 : N - lam2 + 1]
    return LinnikTable(limit=N, values=values)


def rq_prime_counts(lam: LambdaTable, n_max: int) -> list:
    """Exact integer decomposition of r_Q: counts[n][p] multiplies log p.

    counts[n] maps prime p to the number of (l1, l2, j) with
    n - l1^2 - l2^2 = p^j. Summing count * log(p) over ascending p
    re-accumulates r_Q(n) exactly; the brute-force oracle builds the same
    structure, so the two can be compared with integer equality.
    """
    if lam.limit < n_max:
        raise DomainError(f"Lambda table limit {lam.limit} < requested n_max {n_max}")
    if n_max > 200000:
        raise TableSizeError("exact audit path supports n_max <= 200000")
    counts = [dict() for _ in range(n_max + 1)]
    pp_n = lam.pp_n
    pp_p = lam.pp_p
    for lam2 in _lattice_norms(n_max):
        hi = np.searchsorted(pp_n, n_max - lam2, side="right")
        for idx in range(hi):
            n = int(pp_n[idx]) + lam2
            p = int(pp_p[idx])
            c = counts[n]
            c[p] = c.get(p, 0) + 1
    return counts


def cesaro_lhs(rq: LinnikTable, params: CesaroParams) -> float:
    """Cesaro-weighted sum of r_Q up to N.

    Accumulated in descending n (ascending weight) with compensated summation;
    the n = N term carries weight 0 for k > 0. k = 0 uses the 0^0 = 1
    convention; k < 0 is rejected because the weight is undefined at n = N.
    """
    N, k = params.N, params.k
    if rq.limit < N:
        raise DomainError(f"r_Q table limit {rq.limit} < N {N}")
    if k < 0:
        raise DomainError("k < 0 leaves the n = N weight (N-n)^k undefined")
    acc = CompensatedSum()
    vals = rq.values
    for n in range(N, 0, -1):
        r = vals[n]
        if r != 0.0:
            acc.add(r * float(N - n) ** k)
    return acc.value / math.gamma(k + 1)


def _check_right_half_plane(z: complex) -> complex:
    z = complex(z)
    if not (z.real > 0):
        raise DomainError(f"Re(z) must be positive, got {z}")
    return z


def s_tilde(
    z: complex, cutoff: int, lam: Optional[LambdaTable] = None
) -> TruncatedValue:
    """Truncated Lambda-weighted exponential sum sum_{m<=cutoff} Lambda(m) e^{-mz}.

    The tail bound uses Lambda(m) <= log m <= m and the exact geometric sum
    sum_{m>C} m e^{-ma}; it is always <= 2 * cutoff * e^{-cutoff*a} / a in the
    regime cutoff * a >= 2 the precondition calls for.
    """
    z = _check_right_half_plane(z)
    a = z.real
    if cutoff < 1:
        raise DomainError("cutoff must be >= 1")
    if lam is None:
        lam = sieve_von_mangoldt(cutoff)
    elif lam.limit < cutoff:
        raise DomainError("Lambda table shorter than cutoff")

    re = CompensatedSum()
    im = CompensatedSum()
    hi = np.searchsorted(lam.pp_n, cutoff, side="right")
    for idx in range(hi):
        m = int(lam.pp_n[idx])
        w = float(lam.values[m])
        e = cmath.exp(-m * z)
        re.add(w * e.real)
        im.add(w * e.imag)

    # sum_{m > C} m e^{-ma} = e^{-a(C+1)} * ((C+1)/(1-q) + q/(1-q)^2), q = e^{-a}
    q = math.exp(-a)
    if q >= 1.0:  # pragma: no cover - a > 0 guarantees q < 1
        raise DomainError("nonpositive a")
    tail = math.exp(-a * (cutoff + 1)) * ((cutoff + 1) / (1 - q) + q / (1 - q) ** 2)
    return TruncatedValue(complex(re.value, im.value), tail)


def default_theta_cutoff(a: float, tol: float = 1e-18) -> int:
    """Smallest M with e^{-M^2 a} below tol, floored at the M^2 a >= 40 rule."""
    need = max(40.0, -math.log(min(tol, 1.0)))
    return max(2, math.isqrt(int(need / a)) + 1)


def omega2(z: complex, cutoff: Optional[int] = None) -> TruncatedValue:
    """Truncated one-sided theta sum sum_{m=1..cutoff} e^{-m^2 z} with tail bound."""
    z = _check_right_half_plane(z)
    a = z.real
    if cutoff is None:
        cutoff = default_theta_cutoff(a)
    if cutoff < 1:
        raise DomainError("cutoff must be >= 1")
    re = CompensatedSum()
    im = CompensatedSum()
    for m in range(1, cutoff + 1):
        e = cmath.exp(-(m * m) * z)
        re.add(e.real)
        im.add(e.imag)
    # |e^{-m^2 z}| = e^{-m^2 a}; for m > M, m^2 >= M^2 + (2M+1)(m - M)
    r = math.exp(-(2 * cutoff + 1) * a)
    tail = math.exp(-(cutoff + 1) ** 2 * a) / (1 - r) if r < 1 else math.inf
    return TruncatedValue(complex(re.value, im.value), tail)


def theta3(z: complex, cutoff: Optional[int] = None) -> TruncatedValue:
    """Full theta sum over all integers: 1 + 2 * omega2(z) by m <-> -m symmetry."""
    w = omega2(z, cutoff)
    return TruncatedValue(1.0 + 2.0 * w.value, 2.0 * w.tail_bound)
