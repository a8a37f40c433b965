"""Nontrivial zeta-zero tables: ingestion, caching, paired sums, tail bounds.

Zero ordinates are served from plain text files (one ascending ordinate per
line, '#' comments allowed, optional second column for the real part beta).
A bundled table of the first 100 zeros ships with the package so everything
runs offline; fetch_zeros additionally knows how to download and cache tables
from named sources with checksum verification.

Weighted sums over zeros always run over conjugate pairs: for weights f with
f(conj rho) = conj f(rho) the pair sum is 2 Re f(rho), so paired_zero_sum
returns an exactly real number by construction.
"""

import hashlib
import math
import os
import urllib.request
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

from .errors import DomainError, FetchError, IntegrityError, ZeroTableError
from .summation import deterministic_map_sum

__all__ = [
    "ZetaZero",
    "ZeroSet",
    "load_zeros",
    "fetch_zeros",
    "bundled_zeros_path",
    "cache_dir",
    "paired_zero_sum",
    "zero_tail_bound",
]

CACHE_ENV_VAR = "LINNIK_CACHE_DIR"
_FIRST_ZERO_WINDOW = (14.0, 14.3)

# Stirling-ratio slack: |Gamma(rho)/Gamma(rho+power)| <= RATIO_SLACK * gamma^-power
# on every table zero (asserted against log_gamma in the test suite).
_RATIO_SLACK = 1.25
_SAFETY = 2.0


@dataclass(frozen=True)
class ZetaZero:
    """One nontrivial zero beta + i gamma with gamma > 0."""

    gamma: float
    beta: float = 0.5

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise DomainError(f"zero ordinate must be positive, got {self.gamma}")
        if not (0.0 < self.beta < 1.0):
            raise DomainError(f"beta must lie in (0, 1), got {self.beta}")

    @property
    def rho(self) -> complex:
        return complex(self.beta, self.gamma)


@dataclass(frozen=True)
class ZeroSet:
    zeros: tuple
    source_id: str = "unknown"

    @property
    def count(self) -> int:
        return len(self.zeros)

    def gammas(self) -> list:
        return [z.gamma for z in self.zeros]

    def truncated(self, Z: int) -> "ZeroSet":
        if Z > self.count:
            raise DomainError(f"requested {Z} zeros, table has {self.count}")
        return ZeroSet(self.zeros[:Z], self.source_id)


def load_zeros(path, source_id: Optional[str] = None) -> ZeroSet:
    """Parse and validate a zero table file.

    Raises ZeroTableError naming the offending line on parse failures,
    non-monotonic ordinates, or a first ordinate outside the sanity window.
    """
    path = Path(path)
    zeros = []
    prev = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) > 2:
                raise ZeroTableError(f"expected 1 or 2 columns, got {len(parts)}", line=lineno)
            try:
                gamma = float(parts[0])
                beta = float(parts[1]) if len(parts) == 2 else 0.5
            except ValueError as exc:
                raise ZeroTableError(f"unparseable number: {exc}", line=lineno) from None
            try:
                zero = ZetaZero(gamma=gamma, beta=beta)
            except DomainError as exc:
                raise ZeroTableError(str(exc), line=lineno) from None
            if prev is not None and gamma <= prev:
                raise ZeroTableError(
                    f"ordinates must ascend strictly ({gamma} after {prev})", line=lineno
                )
            prev = gamma
            zeros.append(zero)
    if zeros and not (_FIRST_ZERO_WINDOW[0] < zeros[0].gamma < _FIRST_ZERO_WINDOW[1]):
        raise ZeroTableError(
            f"first ordinate {zeros[0].gamma} outside sanity window {_FIRST_ZERO_WINDOW}"
        )
    return ZeroSet(tuple(zeros), source_id or str(path))


def bundled_zeros_path() -> Path:
    """Path of the packaged first-100-zeros table."""
    return Path(resources.files("linnik.data") / "zeros100.txt")


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "linnik"


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _registry() -> dict:
    import json

    with resources.files("linnik.data").joinpath("sources.json").open("r") as fh:
        return json.load(fh)


def fetch_zeros(source: str, limit: int, cache: Optional[Path] = None) -> Path:
    """Materialize the first `limit` zeros of a named source as a cached file.

    Repeated calls hit the cache and return a byte-identical file; a cached
    file whose recorded checksum no longer matches is purged and reported as
    an IntegrityError. The bundled source never touches the network.
    """
    if source.startswith(("http://", "https://")):
        # ad-hoc URL: no registry checksum, generous capacity
        entry = {"kind": "url", "url": source, "capacity": 10**9}
        cache_key = "url_" + _sha256(source.encode())[:16]
    else:
        registry = _registry()
        if source not in registry:
            raise FetchError(f"unknown zero source {source!r}; known: {sorted(registry)}")
        entry = registry[source]
        cache_key = source
    if limit < 0 or limit > entry.get("capacity", 0):
        raise FetchError(
            f"limit {limit} exceeds capacity {entry.get('capacity')} of source {source!r}"
        )
    cache = Path(cache) if cache is not None else cache_dir()
    cache.mkdir(parents=True, exist_ok=True)
    target = cache / f"{cache_key}_{limit}.txt"
    sidecar = cache / f"{cache_key}_{limit}.txt.sha256"

    if target.exists():
        data = target.read_bytes()
        if sidecar.exists() and _sha256(data) == sidecar.read_text().strip():
            return target
        target.unlink(missing_ok=True)
        sidecar.unlink(missing_ok=True)
        raise IntegrityError(
            f"cached file {target} failed checksum verification; cache entry purged"
        )

    if entry.get("kind") == "bundled":
        raw = bundled_zeros_path().read_bytes()
        if entry.get("sha256") and _sha256(raw) != entry["sha256"]:
            raise IntegrityError("bundled zero table does not match its recorded checksum")
    elif entry.get("kind") == "url":
        try:
            with urllib.request.urlopen(entry["url"], timeout=30) as resp:
                raw = resp.read()
        except Exception as exc:
            raise FetchError(
                f"download failed for {source!r} ({exc}); no cached copy present"
            ) from exc
        if entry.get("sha256") and _sha256(raw) != entry["sha256"]:
            raise IntegrityError(f"download for {source!r} failed checksum verification")
    else:
        raise FetchError(f"source {source!r} has unsupported kind {entry.get('kind')!r}")

    lines = []
    for line in raw.decode("utf-8").splitlines():
        t = line.strip()
        if t and not t.startswith("#"):
            lines.append(t)
        if len(lines) == limit:
            break
    if len(lines) < limit:
        raise FetchError(f"source {source!r} provided {len(lines)} zeros, wanted {limit}")
    payload = ("\n".join(lines) + "\n").encode("utf-8")
    target.write_bytes(payload)
    sidecar.write_text(_sha256(payload) + "\n")
    return target


def paired_zero_sum(
    f: Callable[[complex], complex],
    zs: ZeroSet,
    Z: int,
    threads: int = 1,
) -> float:
    """2 * sum_{j < Z} Re f(rho_j): the conjugate-paired zero sum.

    Requires f(conj rho) = conj f(rho), which holds for every weight in the
    main terms (N, k, and the Bessel arguments are real). Ascending-gamma
    order with compensated, deterministically chunked accumulation.
    """
    if Z < 0 or Z > zs.count:
        raise DomainError(f"Z = {Z} out of range for table of {zs.count} zeros")
    if Z == 0:
        return 0.0
    subset = zs.zeros[:Z]
    total = deterministic_map_sum(
        lambda zero: complex(f(zero.rho)).real, subset, chunk_size=64, threads=threads
    )
    return 2.0 * total


def zero_tail_bound(k: float, N: float, power: float, Z: int, zs: ZeroSet) -> float:
    """Upper bound for the discarded zero tail |sum_{j >= Z} Gamma(rho)/Gamma(rho+power) N^{power-1+rho}|.

    Each term is bounded by RATIO_SLACK * gamma^-power * N^{power-1+beta}
    (Stirling: the e^{-pi gamma/2} factors of numerator and denominator
    cancel, leaving polynomial decay). Zeros beyond the loaded table are
    covered by the counting-density model dN ~ log(gamma/2pi)/(2pi) dgamma.
    Conjugate pairing and a global safety factor of 2 are included. Returns
    inf when power is too small for the density integral to converge.
    """
    if Z < 0:
        raise DomainError("Z must be >= 0")
    if power <= 1.1:
        return math.inf
    n_pow = float(N)

    total = 0.0
    for zero in zs.zeros[Z:]:
        total += (
            _RATIO_SLACK
            * zero.gamma ** (-power)
            * n_pow ** (power - 1.0 + zero.beta)
        )
    # density remainder beyond the end of the table
    beta_max = max((z.beta for z in zs.zeros), default=0.5)
    gamma_T = zs.zeros[-1].gamma if zs.count else 14.0
    p = power
    remainder = (
        (_RATIO_SLACK / (2 * math.pi))
        * n_pow ** (p - 1.0 + beta_max)
        * gamma_T ** (1.0 - p)
        * (math.log(gamma_T / (2 * math.pi)) / (p - 1.0) + 1.0 / (p - 1.0) ** 2)
    )
    return 2.0 * _SAFETY * (total + remainder)
