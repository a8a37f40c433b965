"""Complex log-gamma, Bessel J of complex order, and Laplace line integrals.

The Bessel evaluator is the numerical core of the analytic main terms: orders
are k + c + rho with rho a zeta zero (so imaginary parts up to a few hundred)
and arguments u = 2 pi sqrt(lattice) sqrt(N) run into the thousands. Three
strategies are implemented behind one contract:

* power series in fixed-point integer arithmetic at a working precision of
  53 + ceil(1.5 u log2 e) bits, which defeats the e^u-scale cancellation of
  the alternating series at any argument this package needs;
* the large-argument (Hankel) asymptotic expansion, used automatically only
  when u >= 4 |nu|^2 and its own error estimate certifies the target;
* direct quadrature of the contour-integral representation
  (u/2)^nu / (2 pi i) * int e^s s^{-nu-1} e^{-u^2/(4 s)} ds over a vertical
  line, kept as an independent cross-check oracle (never the default path).

Every path returns an error estimate and raises PrecisionError instead of
silently returning a value it cannot certify.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from mpmath import mp

from .errors import DomainError, PoleError, PrecisionError
from .quadrature import adaptive_gauss_kronrod

__all__ = [
    "PrecisionConfig",
    "BesselEval",
    "log_gamma",
    "gamma_ratio",
    "bessel_j",
    "bessel_j_detailed",
    "bessel_j_sonine",
    "laplace_line_integral",
]

_LOG2E = math.log2(math.e)

# B_{2n} / ((2n-1)(2n)) for the Stirling correction, n = 1..10.
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)
_STIRLING_RADIUS = 12.0


@dataclass(frozen=True)
class PrecisionConfig:
    """Evaluation policy for the special-function layer.

    working_bits is the minimum mantissa width of extended-precision paths;
    target_rel_tol the relative error the caller wants certified;
    strategy_override forces 'series', 'asymptotic' or 'quadrature'.
    """

    working_bits: int = 53
    target_rel_tol: float = 1e-10
    strategy_override: Optional[str] = None

    def __post_init__(self):
        if self.working_bits < 53:
            raise DomainError("working_bits must be >= 53")
        if not (0.0 < self.target_rel_tol < 1.0):
            raise DomainError("target_rel_tol must be in (0, 1)")
        if self.strategy_override not in (None, "auto", "series", "asymptotic", "quadrature"):
            raise DomainError(f"unknown strategy {self.strategy_override!r}")


DEFAULT_PRECISION = PrecisionConfig()


@dataclass(frozen=True)
class BesselEval:
    value: complex
    strategy: str
    bits: int
    terms: int
    err_estimate: float


_LG_PREC = 80  # bits; log Gamma can reach ~10^3, so doubles alone would cap
               # exp(log_gamma) accuracy near |lgG| * eps ~ 1e-13 at |s| = 200


def _log_gamma_mp(s: complex):
    """Stirling-with-correction after upward recurrence, in mpmath arithmetic.

    Caller is responsible for mp.workprec; reflection for Re(s) < 0.5 is
    applied here so the recurrence never walks across the pole axis.
    """
    if complex(s).real < 0.5:
        return (
            mp.log(mp.pi)
            - mp.log(mp.sin(mp.pi * mp.mpc(s)))
            - _log_gamma_mp(1.0 - complex(s))
        )
    w = mp.mpc(s)
    shift = mp.mpc(0)
    while abs(w) < _STIRLING_RADIUS:
        shift += mp.log(w)
        w += 1
    res = (w - 0.5) * mp.log(w) - w + 0.5 * mp.log(2 * mp.pi)
    w2 = w * w
    t = w
    for c in _STIRLING_COEFFS:
        res += c / t
        t *= w2
    return res - shift


def log_gamma(s) -> complex:
    """Principal-branch log Gamma via upward recurrence and Stirling's series.

    Runs internally at 80-bit precision so exp(log_gamma(s)) is accurate to
    the double-representation floor |log Gamma| * eps (< 1e-13 for |s| <= 200).
    """
    s = complex(s)
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError("log_gamma argument must be finite")
    if s.imag == 0.0 and s.real <= 0.0 and s.real == math.floor(s.real):
        raise PoleError(int(s.real))
    with mp.workprec(_LG_PREC):
        return complex(_log_gamma_mp(s))


def gamma_ratio(rho, offset) -> complex:
    """Gamma(rho) / Gamma(rho + offset) through a single exponential.

    The subtraction of the two log-gamma values and the exponential run at
    extended precision, so the ratio keeps full double accuracy even when the
    separate gamma values would over- or underflow.
    """
    rho = complex(rho)
    off = complex(offset)
    for arg in (rho, rho + off):
        if arg.imag == 0.0 and arg.real <= 0.0 and arg.real == math.floor(arg.real):
            raise PoleError(int(arg.real))
    with mp.workprec(_LG_PREC):
        val = mp.exp(_log_gamma_mp(rho) - _log_gamma_mp(rho + off))
        return complex(val)


# ---------------------------------------------------------------------------
# Bessel J: fixed-point power series
# ---------------------------------------------------------------------------

_DIV_SHIFT = 64  # scale bits for the exact dyadic divisor m (nu + m)


def _dyadic_scaled(x: float, shift: int) -> int:
    """Exact integer x * 2^shift; requires the float's denominator to divide it."""
    p, q = float(x).as_integer_ratio()
    scale = 1 << shift
    if scale % q:
        raise PrecisionError(
            f"order component {x!r} too small-scaled for exact dyadic arithmetic",
            strategy="series",
        )
    return p * (scale // q)


def series_bits(u: float, cfg: PrecisionConfig = DEFAULT_PRECISION) -> int:
    """Working precision for the power series at argument u.

    The alternating series loses about u * log2(e) bits to cancellation
    (largest term ~ e^u against a result of order 1); 1.5x that plus the
    target-accuracy bits gives uniform headroom.
    """
    target_bits = max(cfg.working_bits, int(-math.log2(cfg.target_rel_tol)) + 16)
    cancel = math.ceil(1.5 * u * _LOG2E) if u > 0 else 0
    return target_bits + cancel


def _bessel_series(nu: complex, u: float, cfg: PrecisionConfig) -> BesselEval:
    """J_nu(u) = (u/2)^nu * sum_m (-1)^m (u^2/4)^m / (m! (nu+1)_m) / Gamma(nu+1).

    The Pochhammer series runs in fixed-point integers scaled by 2^prec with
    an exact dyadic divisor each step, so the only rounding is one floor
    division per component per term. The prefactor does not participate in
    the cancellation and is applied at 80-bit precision at the end.
    """
    bits = series_bits(u, cfg)
    prec = bits + 64
    mant, exp2 = math.frexp(u)
    mant_i = int(mant * (1 << 53))
    exp2 -= 53
    q_int = mant_i * mant_i  # u^2 = q_int * 2^(2 exp2); q = u^2/4
    shift_q = 2 * exp2 - 2 + _DIV_SHIFT
    nr_s = _dyadic_scaled(nu.real, _DIV_SHIFT)
    ni_s = _dyadic_scaled(nu.imag, _DIV_SHIFT)
    one = 1 << _DIV_SHIFT

    tr, ti = 1 << prec, 0
    sr, si = tr, ti
    max_bl = tr.bit_length()
    stop_bl = prec - bits
    m = 0
    m_min = u / 2.0 + 4.0
    while True:
        m += 1
        dr = m * (nr_s + m * one)  # exact m (Re nu + m) * 2^shift
        di = m * ni_s
        d2 = dr * dr + di * di
        if d2 == 0:
            raise DomainError(f"series breakdown: nu + {m} = 0 for nu = {nu}")
        trq = tr * q_int
        tiq = ti * q_int
        ntr = -(trq * dr + tiq * di)
        nti = -(tiq * dr - trq * di)
        if shift_q >= 0:
            tr = (ntr << shift_q) // d2
            ti = (nti << shift_q) // d2
        else:
            d2s = d2 << (-shift_q)
            tr = ntr // d2s
            ti = nti // d2s
        sr += tr
        si += ti
        bl = max(tr.bit_length(), ti.bit_length())
        if bl > max_bl:
            max_bl = bl
        if bl < stop_bl and m > m_min:
            break
        if m > 8 * (u + 100):  # pragma: no cover - defensive
            raise PrecisionError(
                "series failed to terminate", strategy="series", requested=cfg.target_rel_tol
            )

    with mp.workprec(80):
        series_val = mp.mpc(mp.mpf(sr), mp.mpf(si)) / mp.mpf(1 << prec)
        prefac = (mp.mpf(u) / 2) ** mp.mpc(nu) / mp.gamma(mp.mpc(nu) + 1)
        value = complex(prefac * series_val)
        series_mag = float(abs(series_val))
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise PrecisionError(
            f"J_nu(u) magnitude exceeds double range for nu = {nu}, u = {u}",
            strategy="series",
            requested=cfg.target_rel_tol,
        )

    # per-term rounding ~8 ulp at 2^-prec, amplified at most by the largest
    # term against the cancelled sum
    noise = 8.0 * m * 2.0 ** float(max_bl - prec - prec)
    if series_mag == 0.0 or noise > cfg.target_rel_tol * series_mag:
        raise PrecisionError(
            "series could not certify target tolerance",
            strategy="series",
            achieved=noise / series_mag if series_mag else math.inf,
            requested=cfg.target_rel_tol,
        )
    if nu.imag == 0.0:
        value = complex(value.real, 0.0)
    return BesselEval(value, "series", bits, m, noise / series_mag)


# ---------------------------------------------------------------------------
# Bessel J: Hankel asymptotic expansion
# ---------------------------------------------------------------------------

_ASYMP_MIN_U = 25.0


def _bessel_asymptotic(nu: complex, u: float, cfg: PrecisionConfig) -> BesselEval:
    """Large-argument expansion sqrt(2/(pi u)) (P cos chi - Q sin chi)."""
    if math.pi * abs(nu.imag) / 2.0 > 700.0:
        raise PrecisionError(
            "cos/sin of chi would overflow double range",
            strategy="asymptotic",
            requested=cfg.target_rel_tol,
        )
    nu2 = 4.0 * nu * nu
    c = 1.0 + 0.0j
    p_sum = 1.0 + 0.0j
    q_sum = 0.0 + 0.0j
    min_mag = math.inf
    prev_mag = math.inf
    terms = 0
    for m in range(1, 60):
        c = c * (nu2 - (2 * m - 1) ** 2) / (8.0 * u * m)
        mag = abs(c)
        if mag >= prev_mag and m > 2:
            break  # divergence onset; truncate at the smallest term
        sign = -1.0 if (m // 2) % 2 else 1.0
        if m % 2:
            q_sum += sign * c
        else:
            p_sum += sign * c
        terms = m
        min_mag = min(min_mag, mag)
        prev_mag = mag
        if mag < 1e-20:
            break
    chi = u - (0.5 * nu + 0.25) * math.pi
    cos_chi = cmath.cos(chi)
    sin_chi = cmath.sin(chi)
    scale = math.sqrt(2.0 / (math.pi * u))
    value = scale * (p_sum * cos_chi - q_sum * sin_chi)
    mag_ref = abs(value)
    trig_mag = max(abs(cos_chi), abs(sin_chi))
    # last factor: trig argument reduction costs ~|Re chi| ulps near a zero
    err_abs = scale * trig_mag * (
        min_mag
        + 30.0 * 2.2e-16 * (abs(p_sum) + abs(q_sum))
        + (abs(chi.real) + 2.0) * 2.2e-16
    )
    err_rel = err_abs / mag_ref if mag_ref > 0 else math.inf
    if err_rel > cfg.target_rel_tol:
        raise PrecisionError(
            "asymptotic expansion could not certify target tolerance",
            strategy="asymptotic",
            achieved=err_rel,
            requested=cfg.target_rel_tol,
        )
    if nu.imag == 0.0:
        value = complex(value.real, 0.0)
    return BesselEval(value, "asymptotic", 53, terms, err_rel)


# ---------------------------------------------------------------------------
# Bessel J: contour-quadrature oracle
# ---------------------------------------------------------------------------


def bessel_j_sonine(nu, u: float, prec_bits: int = 200, abscissa: float = 1.0) -> complex:
    """Cross-check oracle: vertical-line contour integral for J_nu(u).

    The line Re s = abscissa is deformed to a bracket (finite vertical segment
    plus two horizontal rays at Im s = +-T on which e^s decays); the essential
    singularity at s = 0 stays outside the deformation region for every T > 0,
    so the bracket value equals the line integral exactly. The value is
    independent of the abscissa, which unit tests assert rather than assume.
    """
    if u <= 0:
        raise DomainError("oracle requires u > 0")
    if abscissa <= 0:
        raise DomainError("contour abscissa must be positive")
    with mp.workprec(prec_bits + 80):
        nu_m = mp.mpc(nu)
        u_m = mp.mpf(u)
        a_m = mp.mpf(abscissa)
        q = u_m * u_m / 4

        def f(sv):
            return mp.e ** (sv - q / sv) * sv ** (-nu_m - 1)

        T = u_m / 2 + 30
        n_panels = int(2 * T / (math.pi / 2)) + 1
        pts = mp.linspace(-T, T, n_panels + 1)
        vertical = mp.quad(lambda t: f(a_m + 1j * t) * 1j, pts)
        ray = [-mp.inf, a_m - 200, a_m - 80, a_m - 20, a_m - 5, a_m]
        top = mp.quad(lambda x: f(x + 1j * T), ray)
        bottom = mp.quad(lambda x: f(x - 1j * T), ray)
        total = bottom + vertical - top
        value = (u_m / 2) ** nu_m * total / (2j * mp.pi)
        return complex(value)


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------

_BESSEL_CACHE: dict = {}
_BESSEL_CACHE_MAX = 200000


def bessel_j_detailed(nu, u: float, cfg: PrecisionConfig = DEFAULT_PRECISION) -> BesselEval:
    nu = complex(nu)
    u = float(u)
    if not (math.isfinite(nu.real) and math.isfinite(nu.imag) and math.isfinite(u)):
        raise DomainError("bessel_j arguments must be finite")
    if u < 0:
        raise DomainError("argument u must be >= 0")
    if nu.imag == 0.0 and nu.real < 0 and nu.real == math.floor(nu.real):
        raise DomainError("negative integer order not supported")
    if u == 0.0:
        if nu == 0:
            return BesselEval(1.0 + 0.0j, "exact", 53, 0, 0.0)
        if nu.real > 0:
            return BesselEval(0.0 + 0.0j, "exact", 53, 0, 0.0)
        raise DomainError(f"J_nu(0) undefined for Re(nu) <= 0 (nu = {nu})")

    strategy = cfg.strategy_override or "auto"
    if strategy == "series":
        return _bessel_series(nu, u, cfg)
    if strategy == "asymptotic":
        return _bessel_asymptotic(nu, u, cfg)
    if strategy == "quadrature":
        value = bessel_j_sonine(nu, u, prec_bits=max(200, cfg.working_bits))
        return BesselEval(value, "quadrature", max(200, cfg.working_bits), 0, 1e-40)
    # auto: asymptotic when clearly in its regime and certifiable, else series
    if u >= _ASYMP_MIN_U and u >= 4.0 * abs(nu) ** 2:
        try:
            return _bessel_asymptotic(nu, u, cfg)
        except PrecisionError:
            pass
    return _bessel_series(nu, u, cfg)


def bessel_j(nu, u: float, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """J_nu(u) for complex order nu and real argument u >= 0.

    Results are memoized (evaluations are pure); identical inputs always
    return the identical float, which the determinism contract relies on.
    """
    key = (complex(nu), float(u), cfg.working_bits, cfg.target_rel_tol, cfg.strategy_override)
    hit = _BESSEL_CACHE.get(key)
    if hit is not None:
        return hit
    value = bessel_j_detailed(nu, u, cfg).value
    if len(_BESSEL_CACHE) < _BESSEL_CACHE_MAX:
        _BESSEL_CACHE[key] = value
    return value


# ---------------------------------------------------------------------------
# Laplace line integral
# ---------------------------------------------------------------------------


def laplace_line_integral(
    s,
    N: float,
    a: Optional[float] = None,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> complex:
    """(1/2 pi i) * int over Re z = a of e^{N z} z^{-s} dz, for Re(s) > 0.

    Equal to N^{s-1} / Gamma(s). The infinite vertical line is deformed to a
    bracket contour: the segment |Im z| <= T plus horizontal rays at +-iT,
    on which the integrand decays like e^{N Re z}; the deformation is exact
    for every T > 0 because the branch cut z <= 0 never crosses the contour.

    a defaults to 1/N; abscissas with N a >> 1 are rejected because the
    e^{N a} factor on the contour swamps the answer in cancellation.
    """
    s = complex(s)
    if s.real <= 0:
        raise DomainError("laplace_line_integral requires Re(s) > 0")
    if not (N > 0):
        raise DomainError("N must be positive")
    if a is None:
        a = 1.0 / N
    if not (a > 0):
        raise DomainError("abscissa a must be positive")
    if N * a > 50.0:
        raise DomainError(
            f"abscissa a = {a} too far right for N = {N}: e^(N a) swamps the value; "
            "use a ~ 1/N"
        )

    # scale of the closed-form answer, for absolute quadrature tolerance
    scale = abs(cmath.exp((s - 1) * math.log(N) - log_gamma(s)))
    abs_tol = max(scale, 1e-290) * cfg.target_rel_tol * 0.25

    T = max(4.0 / N, 1.5 * a)

    def integrand(z: complex) -> complex:
        return cmath.exp(N * z - s * cmath.log(z))

    vertical = adaptive_gauss_kronrod(
        lambda y: integrand(complex(a, y)) * 1j, -T, T, abs_tol
    )
    ray_len = (200.0 + 3.0 * abs(s.imag)) / N + 4.0 * T
    x0 = a - ray_len
    top = adaptive_gauss_kronrod(lambda x: integrand(complex(x, T)), x0, a, abs_tol)
    bottom = adaptive_gauss_kronrod(lambda x: integrand(complex(x, -T)), x0, a, abs_tol)
    total = bottom + vertical - top
    return total / (2j * math.pi)
