"""Analytic main terms of the Cesaro-averaged explicit formula.

The arithmetic side sum_{n<=N} r_Q(n) (N-n)^k / Gamma(k+1) is matched by four
analytic terms:

  m1: smooth closed form in N and k (three Gamma quotients);
  m2: three conjugate-paired sums over zeta zeros with Gamma-ratio weights;
  m3: a lattice sum of Bessel J_{k+2} values plus a zero-sum of lattice sums
      of J_{k+1+rho} values (arguments u = 2 pi sqrt(l1^2+l2^2) sqrt(N));
  m4: four single-index m-sums of Bessel values (arguments 2 pi m sqrt(N)),
      two of them paired over zeros.

All infinite sums are truncated under a TruncationSpec: Z zeros, lattice
radius L, single-index cutoff M. Every term carries computed tail bounds:

  * lattice/m tails from |J_nu(u)| <~ sqrt(2/(pi u)), giving per-term decay
    (l1^2+l2^2)^{-k/2-5/4} N^{-1/4} (and the m-sum analogue), summed past the
    cutoff with a safety factor 2;
  * zero tails from the Stirling amplitude |Gamma(rho)| J-growth cancellation:
    each discarded zero contributes at most ~ sqrt(2 pi) gamma^{beta-1/2}
    sqrt(2/(pi u)) times its lattice weight while gamma <~ u/2, decaying like
    (u/2 / gamma)^{k+3/2} beyond; zeros past the loaded table are covered by
    the counting density ~ log(gamma/2pi)/(2pi).

evaluate() assembles the report; threshold_probe runs the threshold diagnostic
for the k > d - 1/2 convergence boundary; scaling_study fits the growth of
the residual over an N grid.
"""

import cmath
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import arithmetic
from .arithmetic import CesaroParams
from .errors import DomainError, PrecisionError
from .quadrature import adaptive_gauss_kronrod
from .specfun import (
    DEFAULT_PRECISION,
    PrecisionConfig,
    bessel_j,
    log_gamma,
    gamma_ratio,
)
from .summation import CompensatedSum
from .zeros import ZeroSet, paired_zero_sum, zero_tail_bound

__all__ = [
    "TruncationSpec",
    "TermValue",
    "FormulaReport",
    "ProbeSeries",
    "default_truncation",
    "lattice_points",
    "m1_term",
    "m2_term",
    "m3_term",
    "m4_term",
    "evaluate",
    "threshold_probe",
    "scaling_study",
]

_LN_PI = math.log(math.pi)
_SAFETY = 2.0
_RATIO_SLACK = 1.25
_LATTICE_FLUCT = 2.0  # head room for r2 fluctuations around its mean pi/4

THEOREM_MIN_K = 1.5


@dataclass(frozen=True)
class TruncationSpec:
    """Cutoffs for the truncated main terms plus the target tolerance."""

    Z: int
    L: int
    M: int
    tol: float

    def __post_init__(self):
        if self.Z < 0 or self.L < 0 or self.M < 0:
            raise DomainError("cutoffs must be >= 0")
        if not (self.tol > 0):
            raise DomainError("tol must be positive")

    def doubled(self, which: str) -> "TruncationSpec":
        if which == "Z":
            return TruncationSpec(2 * self.Z, self.L, self.M, self.tol)
        if which == "L":
            return TruncationSpec(self.Z, 2 * self.L, self.M, self.tol)
        if which == "M":
            return TruncationSpec(self.Z, self.L, 2 * self.M, self.tol)
        raise ValueError(f"unknown cutoff {which!r}")


@dataclass(frozen=True)
class TermValue:
    """A main-term value with its unsigned block decomposition and tail bounds."""

    value: float
    components: dict = field(default_factory=dict)
    tail_bounds: dict = field(default_factory=dict)
    notes: tuple = ()
    extras: dict = field(default_factory=dict)

    @property
    def tail_total(self) -> float:
        return float(sum(self.tail_bounds.values()))


@dataclass(frozen=True)
class FormulaReport:
    params: CesaroParams
    lhs: float
    m1: float
    m2: float
    m3: float
    m4: float
    total: float
    residual: float
    normalized_residual: float
    tail_bounds: dict
    wallclock: dict
    notes: tuple = ()
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ProbeSeries:
    """Partial sums of the threshold series, one entry per zero included."""

    d: int
    k: float
    N: int
    partial_sums: tuple


# ---------------------------------------------------------------------------
# Lattice helpers
# ---------------------------------------------------------------------------

_LATTICE_CACHE: dict = {}


def lattice_points(L: int):
    """Ascending [(lam, multiplicity)] for lam = l1^2 + l2^2 <= L^2, l1, l2 >= 1."""
    if L < 0:
        raise DomainError("lattice radius must be >= 0")
    cached = _LATTICE_CACHE.get(L)
    if cached is not None:
        return cached
    counts: dict = {}
    L2 = L * L
    l1 = 1
    while l1 * l1 + 1 <= L2:
        s1 = l1 * l1
        l2 = 1
        while s1 + l2 * l2 <= L2:
            lam = s1 + l2 * l2
            counts[lam] = counts.get(lam, 0) + 1
            l2 += 1
        l1 += 1
    pts = tuple(sorted(counts.items()))
    _LATTICE_CACHE[L] = pts
    return pts


def _lattice_tail_sum(X: float, s: float) -> float:
    """Bound for sum over lam > X of r2(lam) lam^-s (r2 over positive pairs)."""
    if s <= 1.0:
        return math.inf
    return _LATTICE_FLUCT * (math.pi / 4.0) * X ** (1.0 - s) / (s - 1.0)


def _msum_tail(M: int, t: float) -> float:
    """Bound for sum_{m > M} m^-t."""
    if t <= 1.0:
        return math.inf
    return max(M, 1) ** (1.0 - t) / (t - 1.0)


# ---------------------------------------------------------------------------
# Zero-amplitude models shared by the m3/m4 tails
# ---------------------------------------------------------------------------


def _zero_amp(beta: float, gamma: float, N: float) -> float:
    """Model bound for |Gamma(rho) pi^-rho N^{rho/2}| * e^{pi gamma / 2}."""
    return (
        _RATIO_SLACK
        * math.sqrt(2.0 * math.pi)
        * gamma ** (beta - 0.5)
        * math.pi ** (-beta)
        * N ** (beta / 2.0)
    )


def _plateau_decay(gamma: float, u_ref: float, k: float) -> float:
    """Order-1 until gamma ~ u_ref/2, then (u_ref/2 / gamma)^(k+3/2) decay."""
    edge = 0.5 * u_ref
    if gamma <= edge:
        return 1.0
    return (edge / gamma) ** (k + 1.5)


def _zero_tail_over_table(zs: ZeroSet, Z: int, N: float, u_ref: float, k: float) -> float:
    """Sum of paired zero amplitudes for j >= Z, including the density model
    for zeros beyond the end of the loaded table."""
    total = 0.0
    for zero in zs.zeros[Z:]:
        total += 2.0 * _zero_amp(zero.beta, zero.gamma, N) * _plateau_decay(
            zero.gamma, u_ref, k
        )
    beta_max = max((z.beta for z in zs.zeros), default=0.5)
    gamma_T = zs.zeros[-1].gamma if zs.count else 14.0
    q0 = 2.0 * _zero_amp(beta_max, max(gamma_T, 14.0), N)
    edge = 0.5 * u_ref
    dens = math.log(max(gamma_T, edge, 15.0) / (2.0 * math.pi)) / (2.0 * math.pi)
    plateau_span = max(0.0, edge - gamma_T)
    g_star = max(gamma_T, edge)
    total += q0 * dens * plateau_span  # plateau zeros past the table
    total += q0 * dens * g_star / (k + 0.5)  # decaying part
    return total


# ---------------------------------------------------------------------------
# Main terms
# ---------------------------------------------------------------------------


def m1_term(params: CesaroParams) -> float:
    """Smooth leading term: pi N^{k+2}/(4 G(k+3)) + N^{k+1}/(4 G(k+2))
    - sqrt(pi) N^{k+3/2} / (2 G(k+5/2))."""
    N, k = float(params.N), params.k
    if k <= -1:
        raise DomainError("m1_term requires k > -1")
    lnN = math.log(N)

    def g(c: float) -> float:
        return log_gamma(complex(k + c, 0.0)).real

    t1 = math.pi / 4.0 * math.exp((k + 2.0) * lnN - g(3.0))
    t2 = 0.25 * math.exp((k + 1.0) * lnN - g(2.0))
    t3 = 0.5 * math.sqrt(math.pi) * math.exp((k + 1.5) * lnN - g(2.5))
    return t1 + t2 - t3


def m2_term(
    params: CesaroParams,
    zs: ZeroSet,
    spec: TruncationSpec,
    threads: int = 1,
) -> TermValue:
    """Zero-sum term built from Gamma ratios: three paired blocks with
    coefficients -pi/4, -1/4, +sqrt(pi)/2 and N-powers k+1+rho, k+rho,
    k+1/2+rho."""
    N, k = float(params.N), params.k
    lnN = math.log(N)
    notes = ()
    if k <= 0.5:
        notes = ("m2 evaluated below its absolute-convergence range k > 1/2",)

    blocks = (
        ("block1", -(math.pi / 4.0), k + 2.0),
        ("block2", -0.25, k + 1.0),
        ("block3", 0.5 * math.sqrt(math.pi), k + 1.5),
    )
    components = {}
    value = 0.0
    tail = 0.0
    for name, coeff, offset in blocks:

        def f(rho, offset=offset):
            return gamma_ratio(rho, offset) * cmath.exp((offset - 1.0 + rho) * lnN)

        b = paired_zero_sum(f, zs, spec.Z, threads=threads)
        components[name] = b
        value += coeff * b
        tail += abs(coeff) * zero_tail_bound(k, N, offset, spec.Z, zs)
    return TermValue(value, components, {"zeros": tail}, notes)


def _bessel_lattice_sum(nu: complex, pts, N: float, cfg: PrecisionConfig) -> complex:
    """sum over (lam, mult) of mult * J_nu(2 pi sqrt(lam N)) / lam^{nu/2}."""
    re = CompensatedSum()
    im = CompensatedSum()
    sqrtN = math.sqrt(N)
    for lam, mult in pts:
        u = 2.0 * math.pi * math.sqrt(lam) * sqrtN
        j = bessel_j(nu, u, cfg)
        w = j * cmath.exp(-0.5 * nu * math.log(lam)) * mult
        re.add(w.real)
        im.add(w.imag)
    return complex(re.value, im.value)


def m3_term(
    params: CesaroParams,
    zs: ZeroSet,
    spec: TruncationSpec,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
    threads: int = 1,
) -> TermValue:
    """Two-squares lattice term: J_{k+2} lattice sum minus the paired zero sum
    of J_{k+1+rho} lattice sums."""
    N, k = float(params.N), params.k
    lnN = math.log(N)
    pts = lattice_points(spec.L)
    pref1 = math.exp((k / 2.0 + 1.0) * lnN - (k + 1.0) * _LN_PI)
    pref2 = math.exp((k / 2.0 + 0.5) * lnN - k * _LN_PI)

    lattice_part = pref1 * _bessel_lattice_sum(complex(k + 2.0), pts, N, cfg).real

    def f(rho):
        w = cmath.exp(log_gamma(rho) - rho * _LN_PI + 0.5 * rho * lnN)
        return w * _bessel_lattice_sum(k + 1.0 + rho, pts, N, cfg)

    zero_part = pref2 * paired_zero_sum(f, zs, spec.Z, threads=threads)
    value = lattice_part - zero_part

    # --- tail bounds ---
    beta_max = max((z.beta for z in zs.zeros), default=0.5)
    sqrtN = math.sqrt(N)
    u_max = 2.0 * math.pi * max(spec.L, 1) * sqrtN
    amp_in = sum(
        2.0 * _zero_amp(z.beta, z.gamma, N) for z in zs.zeros[: spec.Z]
    )
    lat_factor = (1.0 / math.pi) * N ** -0.25  # sqrt(2/(pi u)) = lat_factor * lam^-1/4
    X = max(spec.L * spec.L, 2)
    s1 = k / 2.0 + 1.25
    s2 = (k + 1.0 + beta_max) / 2.0 + 0.25
    lattice_tail = _SAFETY * lat_factor * (
        pref1 * _lattice_tail_sum(X, s1) + pref2 * amp_in * _lattice_tail_sum(X, s2)
    )
    lam_weight = sum(m * lam ** -s2 for lam, m in pts) + _lattice_tail_sum(X, s2)
    zero_tail = (
        _SAFETY
        * pref2
        * lat_factor
        * lam_weight
        * _zero_tail_over_table(zs, spec.Z, N, u_max, k)
    )
    return TermValue(
        value,
        {"lattice": lattice_part, "zeros": zero_part},
        {"lattice": lattice_tail, "zeros": zero_tail},
    )


def _bessel_m_sum(nu: complex, M: int, N: float, cfg: PrecisionConfig) -> complex:
    re = CompensatedSum()
    im = CompensatedSum()
    sqrtN = math.sqrt(N)
    for m in range(1, M + 1):
        u = 2.0 * math.pi * m * sqrtN
        j = bessel_j(nu, u, cfg)
        w = j * cmath.exp(-nu * math.log(m))
        re.add(w.real)
        im.add(w.imag)
    return complex(re.value, im.value)


def m4_term(
    params: CesaroParams,
    zs: ZeroSet,
    spec: TruncationSpec,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
    threads: int = 1,
    diagnostics: bool = False,
) -> TermValue:
    """Single-index theta term: four m-sum blocks, signs +, -, -, +.

    Block 4 carries N^{rho/2}; diagnostics additionally reports the N^{rho}
    variant of block 4 (the two candidate transcriptions differ in that
    exponent) without affecting the returned value.
    """
    N, k = float(params.N), params.k
    lnN = math.log(N)
    M = spec.M

    p1 = math.exp((k / 2.0 + 1.0) * lnN - (k + 1.0) * _LN_PI)
    p2 = math.exp((k / 2.0 + 0.75) * lnN - (k + 1.0) * _LN_PI)
    p3 = math.exp((k + 1.0) / 2.0 * lnN - k * _LN_PI)
    p4 = math.exp((k / 2.0 + 0.25) * lnN - k * _LN_PI)

    b1 = p1 * _bessel_m_sum(complex(k + 2.0), M, N, cfg).real
    b2 = p2 * _bessel_m_sum(complex(k + 1.5), M, N, cfg).real

    def f3(rho):
        w = cmath.exp(log_gamma(rho) - rho * _LN_PI + 0.5 * rho * lnN)
        return w * _bessel_m_sum(k + 1.0 + rho, M, N, cfg)

    def f4(rho):
        w = cmath.exp(log_gamma(rho) - rho * _LN_PI + 0.5 * rho * lnN)
        return w * _bessel_m_sum(k + 0.5 + rho, M, N, cfg)

    b3 = p3 * paired_zero_sum(f3, zs, spec.Z, threads=threads)
    b4 = p4 * paired_zero_sum(f4, zs, spec.Z, threads=threads)
    value = b1 - b2 - b3 + b4

    extras = {}
    if diagnostics:

        def f4_alt(rho):
            w = cmath.exp(log_gamma(rho) - rho * _LN_PI + rho * lnN)
            return w * _bessel_m_sum(k + 0.5 + rho, M, N, cfg)

        extras["m4_block4_full_power_variant"] = p4 * paired_zero_sum(
            f4_alt, zs, spec.Z, threads=threads
        )

    # --- tail bounds ---
    beta_max = max((z.beta for z in zs.zeros), default=0.5)
    sqrtN = math.sqrt(N)
    u_ref = 2.0 * math.pi * max(M, 1) * sqrtN
    amp_in = sum(2.0 * _zero_amp(z.beta, z.gamma, N) for z in zs.zeros[: spec.Z])
    m_factor = (1.0 / math.pi) * N ** -0.25  # sqrt(2/(pi u_m)) = m_factor * m^-1/2
    Xm = max(M, 1)
    msum_tail = _SAFETY * m_factor * (
        p1 * _msum_tail(Xm, k + 2.5)
        + p2 * _msum_tail(Xm, k + 2.0)
        + p3 * amp_in * _msum_tail(Xm, k + 1.5 + beta_max)
        + p4 * amp_in * _msum_tail(Xm, k + 1.0 + beta_max)
    )
    w3 = sum(m ** -(k + 1.5 + beta_max) for m in range(1, M + 1)) + _msum_tail(
        Xm, k + 1.5 + beta_max
    )
    w4 = sum(m ** -(k + 1.0 + beta_max) for m in range(1, M + 1)) + _msum_tail(
        Xm, k + 1.0 + beta_max
    )
    zero_tail = (
        _SAFETY
        * m_factor
        * (p3 * w3 + p4 * w4)
        * _zero_tail_over_table(zs, spec.Z, N, u_ref, k)
    )
    return TermValue(
        value,
        {"block1": b1, "block2": b2, "block3": b3, "block4": b4},
        {"msum": msum_tail, "zeros": zero_tail},
        extras=extras,
    )


# ---------------------------------------------------------------------------
# Truncation auto-selection
# ---------------------------------------------------------------------------


def default_truncation(
    params: CesaroParams,
    zs: ZeroSet,
    tol: Optional[float] = None,
    Z: Optional[int] = None,
) -> TruncationSpec:
    """Pick cutoffs: Z = 50 (or the table size), L and M as the smallest radii
    for which the Bessel-decay tail model of the blocks those cutoffs control
    (per-term (l1^2+l2^2)^{-k/2-5/4} N^{-1/4}, and the m-sum analogue) meets
    tol (default 1e-6 N^{k+1}).

    The zero-block lattice/m tails carry a Z-driven amplitude that no lattice
    radius can push below tol; they are reported by the term evaluators but do
    not drive the cutoff choice.
    """
    N, k = float(params.N), params.k
    if tol is None:
        tol = 1e-6 * N ** (k + 1.0)
    Z = min(50, zs.count) if Z is None else Z
    lat_factor = (1.0 / math.pi) * N ** -0.25
    pref1 = math.exp((k / 2.0 + 1.0) * math.log(N) - (k + 1.0) * _LN_PI)

    L = 3
    while L < 64:
        lt = _SAFETY * lat_factor * pref1 * _lattice_tail_sum(L * L, k / 2.0 + 1.25)
        if lt <= tol / 4.0:
            break
        L += 1

    p2 = math.exp((k / 2.0 + 0.75) * math.log(N) - (k + 1.0) * _LN_PI)
    M = 3
    while M < 256:
        mt = _SAFETY * lat_factor * (
            pref1 * _msum_tail(M, k + 2.5) + p2 * _msum_tail(M, k + 2.0)
        )
        if mt <= tol / 4.0:
            break
        M += 1
    return TruncationSpec(Z=Z, L=L, M=M, tol=tol)


# ---------------------------------------------------------------------------
# Full evaluation
# ---------------------------------------------------------------------------

_TABLE_CACHE: dict = {}


def _tables_for(N: int):
    hit = _TABLE_CACHE.get(N)
    if hit is None:
        lam = arithmetic.sieve_von_mangoldt(N)
        rq = arithmetic.compute_rq(lam, N)
        hit = (lam, rq)
        if len(_TABLE_CACHE) < 64:
            _TABLE_CACHE[N] = hit
    return hit


@contextmanager
def _term_context(name: str):
    """Re-raise numeric failures tagged with the term they came from."""
    try:
        yield
    except PrecisionError as exc:
        raise type(exc)(
            f"{name}: {exc}",
            strategy=exc.strategy,
            achieved=exc.achieved,
            requested=exc.requested,
        ) from exc
    except DomainError as exc:
        raise type(exc)(f"{name}: {exc}") from exc


def evaluate(
    params: CesaroParams,
    zs: ZeroSet,
    spec: Optional[TruncationSpec] = None,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
    allow_subcritical: bool = False,
    threads: int = 1,
    diagnostics: bool = False,
) -> FormulaReport:
    """Compute both sides of the explicit formula and their residual.

    k <= 3/2 (outside the theorem range) is refused unless allow_subcritical
    is set, in which case the report is flagged. The m2/m3/m4 values are real
    by construction (conjugate pairing); no imaginary part is ever dropped.
    """
    N, k = params.N, params.k
    notes = []
    if k <= THEOREM_MIN_K:
        if not allow_subcritical:
            raise DomainError(
                f"k = {k} is outside the theorem range k > 3/2; "
                "pass allow_subcritical to probe anyway"
            )
        notes.append(f"subcritical probe: k = {k} <= 3/2")
    if k == 0.0:
        notes.append("k = 0 uses the (N-n)^0 = 1 convention at n = N")
    if spec is None:
        spec = default_truncation(params, zs)

    wall = {}
    t0 = time.perf_counter()
    lam, rq = _tables_for(N)
    lhs = arithmetic.cesaro_lhs(rq, params)
    wall["lhs"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    with _term_context("m1"):
        v1 = m1_term(params)
    wall["m1"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    with _term_context("m2"):
        t2 = m2_term(params, zs, spec, threads=threads)
    wall["m2"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    with _term_context("m3"):
        t3 = m3_term(params, zs, spec, cfg, threads=threads)
    wall["m3"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    with _term_context("m4"):
        t4 = m4_term(params, zs, spec, cfg, threads=threads, diagnostics=diagnostics)
    wall["m4"] = time.perf_counter() - t0

    notes.extend(t2.notes)
    extras = {}
    if diagnostics:
        extras["m3_components"] = dict(t3.components)
        extras["m4_components"] = dict(t4.components)
        extras.update(t4.extras)

    total = v1 + t2.value + t3.value + t4.value
    residual = lhs - total
    return FormulaReport(
        params=params,
        lhs=lhs,
        m1=v1,
        m2=t2.value,
        m3=t3.value,
        m4=t4.value,
        total=total,
        residual=residual,
        normalized_residual=residual / float(N) ** (k + 1.0),
        tail_bounds={
            "m2": t2.tail_total,
            "m3": t3.tail_total,
            "m4": t4.tail_total,
        },
        wallclock=wall,
        notes=tuple(notes),
        extras=extras,
    )


# ---------------------------------------------------------------------------
# Threshold probe
# ---------------------------------------------------------------------------


def _probe_lattice(d: int, cap: float):
    """Distinct squared norms and multiplicities of (0, inf)^d lattice points
    with ||l||^2 <= cap."""
    if d not in (1, 2, 3):
        raise DomainError("probe supports d in {1, 2, 3}")
    cap_i = int(cap)
    root = math.isqrt(cap_i)
    counts = np.zeros(cap_i + 1, dtype=np.int64)
    if d == 1:
        for l1 in range(1, root + 1):
            counts[l1 * l1] += 1
    elif d == 2:
        for l1 in range(1, root + 1):
            s1 = l1 * l1
            for l2 in range(1, math.isqrt(cap_i - s1) + 1):
                counts[s1 + l2 * l2] += 1
    else:
        for l1 in range(1, root + 1):
            s1 = l1 * l1
            for l2 in range(1, math.isqrt(max(cap_i - s1, 0)) + 1):
                s2 = s1 + l2 * l2
                for l3 in range(1, math.isqrt(max(cap_i - s2, 0)) + 1):
                    counts[s2 + l3 * l3] += 1
    lams = np.nonzero(counts)[0]
    return lams.astype(np.float64), counts[lams].astype(np.float64)


def threshold_probe(
    d: int,
    k: float,
    N: int,
    zs: ZeroSet,
    vmax: float = 40.0,
    lattice_cap: float = 4096.0,
) -> ProbeSeries:
    """Partial sums of the convergence-threshold series

        sum_l sum_{gamma>0} gamma^{-k-3/2}
            int_0^gamma e^{-N ||l||^2 v^2 / gamma^2} e^{-v} v^{k+beta} dv,

    recorded after each zero. The series converges iff k > d - 1/2; the probe
    exposes the plateau-versus-growth behavior of the partial sums.
    """
    if k <= 0:
        raise DomainError("probe requires k > 0")
    lams, mults = _probe_lattice(d, lattice_cap)
    partials = []
    acc = CompensatedSum()
    for zero in zs.zeros:
        g = zero.gamma
        beta = zero.beta
        scale = float(N) / (g * g)

        def w(v):
            lat = float(np.dot(mults, np.exp(-scale * v * v * lams)))
            return lat * math.exp(-v) * v ** (k + beta)

        hi = min(g, vmax)
        coarse = abs(adaptive_gauss_kronrod(w, 0.0, hi, abs_tol=1.0))
        tol = 1e-10 * max(1.0, coarse)
        integral = adaptive_gauss_kronrod(w, 0.0, hi, abs_tol=tol).real
        acc.add(g ** (-k - 1.5) * integral)
        partials.append(acc.value)
    return ProbeSeries(d=d, k=k, N=N, partial_sums=tuple(partials))


# ---------------------------------------------------------------------------
# Scaling study
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalingStudy:
    rows: tuple
    slope: float
    excluded: tuple = ()


def fit_loglog_slope(ns, values):
    """Least-squares slope of log|value| against log n, ignoring zero rows."""
    xs, ys, excluded = [], [], []
    for n, v in zip(ns, values):
        if v == 0.0:
            excluded.append(n)
            continue
        xs.append(math.log(float(n)))
        ys.append(math.log(abs(v)))
    if len(xs) < 2:
        raise DomainError("need at least 2 nonzero points to fit a slope")
    slope = float(np.polyfit(np.asarray(xs), np.asarray(ys), 1)[0])
    return slope, tuple(excluded)


def scaling_study(
    N_list,
    k: float,
    zs: ZeroSet,
    spec_overrides: Optional[dict] = None,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
    allow_subcritical: bool = False,
    threads: int = 1,
) -> ScalingStudy:
    """Run evaluate over an ascending N grid and fit the residual growth."""
    N_list = list(N_list)
    if len(N_list) < 3:
        raise DomainError("scaling study needs at least 3 N values")
    if sorted(N_list) != N_list:
        raise DomainError("N_list must be ascending")
    rows = []
    for N in N_list:
        params = CesaroParams(N=N, k=k)
        spec = default_truncation(params, zs)
        if spec_overrides:
            spec = TruncationSpec(
                Z=spec_overrides.get("Z", spec.Z),
                L=spec_overrides.get("L", spec.L),
                M=spec_overrides.get("M", spec.M),
                tol=spec_overrides.get("tol", spec.tol),
            )
        rows.append(
            evaluate(
                params,
                zs,
                spec,
                cfg,
                allow_subcritical=allow_subcritical,
                threads=threads,
            )
        )
    slope, excluded = fit_loglog_slope(N_list, [r.residual for r in rows])
    return ScalingStudy(rows=tuple(rows), slope=slope, excluded=excluded)
