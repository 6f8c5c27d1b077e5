"""Exact integer arithmetic for 64-bit inputs.

Primality testing, factorization, largest prime factor, and evaluation of
the multiplicative functions under study: the Carmichael function lambda(n),
Euler's totient phi(n), the divisor-power sums sigma_d(n), and the divisor
count.  A slow definitional lambda oracle (`brute_lambda`) is provided for
testing the fast path against.

All functions here are pure and total on their stated domains; Python
integers make overflow impossible, so results are exact at any size.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, isqrt, lcm, prod

import numpy as np

MAX_INPUT = 2**64 - 1
BRUTE_LAMBDA_LIMIT = 10**6

# Enough trial primes to clear small factors quickly before Miller-Rabin / rho.
_TRIAL_PRIMES: tuple[int, ...] = tuple(
    p for p in range(2, 1024) if all(p % q for q in range(2, isqrt(p) + 1))
)

# Witness set that makes Miller-Rabin deterministic for all n < 2^64
# (see https://miller-rabin.appspot.com/).
_MR_BASES = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)


class FactorizationError(ValueError):
    """Raised for inputs outside the supported factorization domain."""


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2^64.

    >>> is_prime(561)
    False
    >>> is_prime(2)
    True
    """
    if n < 0 or n > MAX_INPUT:
        raise ValueError(f"is_prime expects 0 <= n < 2^64, got {n}")
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        a %= n
        if a <= 1:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactoredInteger:
    """An integer together with its full prime factorization.

    `factors` is an ordered tuple of (prime, exponent) pairs with strictly
    increasing primes and exponents >= 1; n == 1 carries an empty tuple.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"FactoredInteger needs n >= 1, got {self.n}")
        if prod(p**e for p, e in self.factors) != self.n:
            raise ValueError(f"factor list does not multiply out to {self.n}")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly increasing")
        if any(e < 1 for _, e in self.factors):
            raise ValueError("exponents must be >= 1")


@dataclass(frozen=True)
class FunctionId:
    """Identifies which arithmetic function is under study.

    kind is one of "lambda", "phi", "sigma", "divisors"; for "sigma" the
    field d >= 1 selects the power in the divisor sum (d = 1 is the plain
    sum of divisors).
    """

    kind: str
    d: int = 1

    KINDS = ("lambda", "phi", "sigma", "divisors")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown function kind {self.kind!r}")
        if self.kind == "sigma":
            if self.d < 1:
                raise ValueError(f"sigma power must be >= 1, got {self.d}")
        elif self.d != 1:
            raise ValueError(f"power parameter only applies to sigma, got d={self.d}")

    @property
    def label(self) -> str:
        if self.kind == "sigma":
            return f"sigma_{self.d}"
        return self.kind


CARMICHAEL_LAMBDA = FunctionId("lambda")
EULER_PHI = FunctionId("phi")
SIGMA = FunctionId("sigma", 1)
DIVISOR_COUNT = FunctionId("divisors")


def sigma_d(d: int) -> FunctionId:
    """The sum of d-th powers of divisors."""
    return FunctionId("sigma", d)


def _brent_rho(n: int, rng: random.Random) -> int:
    """Return a nontrivial factor of composite, odd, non-prime-power n."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: list[int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out.append(n)
        return
    d = _brent_rho(n, rng)
    _split(d, out, rng)
    _split(n // d, out, rng)


def factorize(n: int, seed: int = 0) -> FactoredInteger:
    """Full prime factorization of 1 <= n < 2^64.

    Trial division clears small primes; composite survivors are split by
    Brent's cycle method with every reported prime re-checked by `is_prime`.
    The splitting is randomized but reproducible for a fixed seed.
    """
    if n < 1 or n > MAX_INPUT:
        raise FactorizationError(f"factorize expects 1 <= n < 2^64, got {n}")
    m = n
    pairs: list[tuple[int, int]] = []
    for p in _TRIAL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            pairs.append((p, e))
    if m > 1:
        if m <= _TRIAL_PRIMES[-1] ** 2 or is_prime(m):
            rest = [m]
        else:
            rest = []
            _split(m, rest, random.Random(seed ^ (n * 0x9E3779B97F4A7C15 & MAX_INPUT)))
        counts: dict[int, int] = {}
        for p in rest:
            assert is_prime(p), f"rho returned composite {p}"
            counts[p] = counts.get(p, 0) + 1
        pairs.extend(sorted(counts.items()))
    return FactoredInteger(n, tuple(pairs))


def largest_prime_factor(n: int) -> int:
    """P(n), the largest prime factor of n, with the convention P(1) = 1."""
    if n < 1:
        raise FactorizationError(f"P(n) needs n >= 1, got {n}")
    if n == 1:
        return 1
    return factorize(n).factors[-1][0]


def _lambda_prime_power(p: int, e: int) -> int:
    # lambda(2) = 1, lambda(4) = 2, lambda(2^e) = 2^(e-2) for e >= 3;
    # lambda(p^e) = phi(p^e) for odd p.
    if p == 2:
        return 1 << (e - 1 if e <= 2 else e - 2)
    return p ** (e - 1) * (p - 1)


def carmichael_lambda(fact: FactoredInteger) -> int:
    """lambda(n) computed as the lcm of its prime-power values.

    >>> carmichael_lambda(factorize(561))
    80
    """
    out = 1
    for p, e in fact.factors:
        out = lcm(out, _lambda_prime_power(p, e))
    return out


def _pow_mod_array(base: np.ndarray, exponent: int, n: int) -> np.ndarray:
    """Elementwise base**exponent mod n for int64 arrays (n below 2^31)."""
    result = np.ones_like(base)
    b = base % n
    e = exponent
    while e:
        if e & 1:
            result = result * b % n
        b = b * b % n
        e >>= 1
    return result


def _multiplicative_order(a: int, n: int, phi: int, phi_factors: FactoredInteger) -> int:
    # ord(a) divides phi(n) by Fermat-Euler; peel prime factors off phi.
    t = phi
    for r, _ in phi_factors.factors:
        while t % r == 0 and pow(a, t // r, n) == 1:
            t //= r
    return t


def brute_lambda(n: int) -> int:
    """Definitional lambda oracle: smallest m with a^m = 1 (mod n) for all
    a coprime to n, found from multiplicative orders.

    Maintains a running lcm L of element orders and grows it until every
    coprime residue satisfies a^L = 1; the final L is then both an lcm of
    actual orders and a universal exponent, hence exactly lambda(n).
    Guarded to n <= 10^6 (the verification sweep is linear in n).
    """
    if n < 1:
        raise ValueError(f"brute_lambda needs n >= 1, got {n}")
    if n > BRUTE_LAMBDA_LIMIT:
        raise ValueError(f"brute_lambda is guarded to n <= {BRUTE_LAMBDA_LIMIT}")
    if n <= 2:
        return 1

    fact = factorize(n)
    a = np.arange(1, n // 2 + 1, dtype=np.int64)
    coprime = np.ones(a.size, dtype=bool)
    for p, _ in fact.factors:
        coprime[p - 1 :: p] = False
    residues = a[coprime]

    phi = prod(p ** (e - 1) * (p - 1) for p, e in fact.factors)
    phi_factors = factorize(phi)

    # (n-1)^2 = 1 (mod n) and n-1 != 1, so the order of n-1 is exactly 2.
    # Seeding L with it keeps L even, and for even L the check a^L = 1 is
    # symmetric under a -> n-a, so scanning a <= n/2 covers every residue.
    L = 2
    while True:
        left = residues[_pow_mod_array(residues, L, n) != 1]
        if left.size == 0:
            return L
        L = lcm(L, _multiplicative_order(int(left[0]), n, phi, phi_factors))


def evaluate(f: FunctionId, fact: FactoredInteger) -> int:
    """Evaluate the selected function from a factorization.

    phi(p^e) = p^(e-1)(p-1); sigma_d(p^e) = 1 + p^d + ... + p^(ed);
    the divisor count of p^e is e+1; lambda delegates to carmichael_lambda.
    """
    if f.kind == "lambda":
        return carmichael_lambda(fact)
    if f.kind == "phi":
        return prod(p ** (e - 1) * (p - 1) for p, e in fact.factors)
    if f.kind == "divisors":
        return prod(e + 1 for _, e in fact.factors)
    out = 1
    for p, e in fact.factors:
        pd = p**f.d
        out *= (pd ** (e + 1) - 1) // (pd - 1)
    return out
