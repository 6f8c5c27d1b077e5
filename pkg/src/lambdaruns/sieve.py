"""Segmented sieve producing function values for every integer in a window.

A plan fixes the scan limit, the segment size, and the base primes up to
sqrt(limit).  Each segment is evaluated independently: base-prime multiples
are marked and divided out, and whatever cofactor survives is prime by
construction, so every n in the window gets its full factorization and
hence its f-value.  Memory stays proportional to the segment, never to the
limit.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from math import isqrt, log

import numpy as np

from .arith import FunctionId

DEFAULT_SEGMENT_SIZE = 1 << 22

CHECKPOINT_MAGIC = b"LRSV"
_CHECKPOINT_VERSION = 1
_CHECKPOINT_HEADER = struct.Struct("<4sIQQQQ")


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (empty for n < 2)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


@dataclass(frozen=True)
class SegmentPlan:
    """Immutable description of a segmented scan over [1, limit]."""

    limit: int
    segment_size: int
    base_primes: np.ndarray

    @property
    def segment_count(self) -> int:
        return -(-self.limit // self.segment_size)

    def segment_bounds(self, index: int) -> tuple[int, int]:
        """Half-open integer range [lo, hi) covered by segment `index`."""
        if not 0 <= index < self.segment_count:
            raise IndexError(f"segment {index} outside plan of {self.segment_count}")
        lo = 1 + index * self.segment_size
        return lo, min(lo + self.segment_size, self.limit + 1)


def plan(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> SegmentPlan:
    """Fix base primes and segment boundaries for a scan up to `limit`.

    Requires segment_size >= 2*sqrt(limit) so that every segment contains
    an exact multiple of each base prime it needs.
    """
    if limit < 2:
        raise ValueError(f"plan needs limit >= 2, got {limit}")
    if limit >= 1 << 62:
        raise ValueError("limits beyond 2^62 are out of range")
    if segment_size < 1 or segment_size * segment_size < 4 * limit:
        raise ValueError(
            f"segment_size {segment_size} is below 2*sqrt({limit}); "
            "segments must be able to hold a multiple of every base prime"
        )
    return SegmentPlan(limit, segment_size, primes_upto(isqrt(limit)))


@dataclass
class Segment:
    """Dense f-values for n in [lo, hi)."""

    lo: int
    hi: int
    values: np.ndarray


def _sigma_fits_int64(limit: int, d: int) -> bool:
    # sigma(n) <= n(1 + ln n); sigma_d(n) <= zeta(d) n^d <= 1.645 n^d for d >= 2.
    if d == 1:
        bound = limit * (1 + log(limit))
    else:
        bound = 1.645 * float(limit) ** d
    return bound < 2**62


def _exponent_sweep(rem: np.ndarray, lo: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Divide p out of every multiple of p in the window.

    Returns (idx, e): positions of the multiples and the exact exponent of
    p at each.  `rem` is updated in place.
    """
    first = -(-lo // p) * p
    idx = np.arange(first - lo, rem.size, p)
    sub = rem[idx] // p
    e = np.ones(idx.size, dtype=np.int64)
    live = np.flatnonzero(sub % p == 0)
    while live.size:
        sub[live] //= p
        e[live] += 1
        live = live[sub[live] % p == 0]
    rem[idx] = sub
    return idx, e


def _sigma_prime_power(p: int, e: np.ndarray, d: int, dtype) -> np.ndarray:
    # Horner over exponent levels keeps every intermediate below the final
    # sigma_d value, so the int64 path cannot overflow once admitted.
    pd = p**d
    if dtype is not object:
        pd = np.int64(pd)
    s = np.ones(e.size, dtype=dtype)
    for j in range(1, int(e.max()) + 1):
        m = e >= j
        s[m] = s[m] * pd + 1
    return s


def _evaluate_range(f: FunctionId, base_primes: np.ndarray, lo: int, hi: int) -> np.ndarray:
    size = hi - lo
    rem = np.arange(lo, hi, dtype=np.int64)
    kind = f.kind
    sigma_object = kind == "sigma" and not _sigma_fits_int64(hi - 1, f.d)
    values = np.ones(size, dtype=object if sigma_object else np.int64)

    for p in base_primes.tolist():
        if p >= hi:
            break
        idx, e = _exponent_sweep(rem, lo, p)
        if idx.size == 0:
            continue
        if kind == "lambda":
            if p == 2:
                contrib = np.int64(1) << np.where(e >= 3, e - 2, e - 1)
            else:
                contrib = (p - 1) * np.power(np.int64(p), e - 1)
            values[idx] = np.lcm(values[idx], contrib)
        elif kind == "phi":
            values[idx] *= (p - 1) * np.power(np.int64(p), e - 1)
        elif kind == "divisors":
            values[idx] *= e + 1
        else:
            values[idx] *= _sigma_prime_power(p, e, f.d, values.dtype)

    tail = np.flatnonzero(rem > 1)
    q = rem[tail]
    if kind == "lambda":
        values[tail] = np.lcm(values[tail], q - 1)
    elif kind == "phi":
        values[tail] *= q - 1
    elif kind == "divisors":
        values[tail] *= 2
    elif sigma_object:
        values[tail] *= q.astype(object) ** f.d + 1
    else:
        values[tail] *= np.power(q, np.int64(f.d)) + 1
    return values


def evaluate_segment(f: FunctionId, seg_plan: SegmentPlan, index: int) -> Segment:
    """f(n) for every n in segment `index`, identical to evaluating each n
    from its own factorization."""
    lo, hi = seg_plan.segment_bounds(index)
    return Segment(lo, hi, _evaluate_range(f, seg_plan.base_primes, lo, hi))


def largest_factor_range(base_primes: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """P(n) for every n in [lo, hi), with P(1) = 1.

    base_primes must cover sqrt(hi - 1).  n is prime exactly where the
    result equals n itself (for n >= 2), which is how callers detect primes
    in bulk.
    """
    rem = np.arange(lo, hi, dtype=np.int64)
    lpf = np.ones(hi - lo, dtype=np.int64)
    for p in base_primes.tolist():
        if p >= hi:
            break
        idx, _ = _exponent_sweep(rem, lo, p)
        lpf[idx] = p
    tail = rem > 1
    lpf[tail] = rem[tail]
    return lpf


def write_checkpoint(
    path: str,
    limit: int,
    segment_size: int,
    last_index: int,
    payload: bytes = b"",
) -> None:
    """Persist scan progress: fixed-width little-endian header (magic
    "LRSV", version, limit, segment_size, last completed segment index)
    followed by an opaque payload for resumable state."""
    header = _CHECKPOINT_HEADER.pack(
        CHECKPOINT_MAGIC, _CHECKPOINT_VERSION, limit, segment_size, last_index, len(payload)
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_checkpoint(path: str) -> tuple[int, int, int, bytes]:
    """Read back (limit, segment_size, last_index, payload)."""
    with open(path, "rb") as fh:
        raw = fh.read(_CHECKPOINT_HEADER.size)
        if len(raw) < _CHECKPOINT_HEADER.size:
            raise ValueError(f"checkpoint file {path} is truncated")
        magic, version, limit, segment_size, last_index, n = _CHECKPOINT_HEADER.unpack(raw)
        if magic != CHECKPOINT_MAGIC:
            raise ValueError(f"{path} is not a scan checkpoint (bad magic {magic!r})")
        if version != _CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        payload = fh.read(n)
        if len(payload) != n:
            raise ValueError(f"checkpoint file {path} is truncated")
    return limit, segment_size, last_index, payload
