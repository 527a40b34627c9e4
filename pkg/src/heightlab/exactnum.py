"""Exact scalar types and small number-theoretic utilities.

Heights of rational points are half-logarithms of positive rationals, so we
never store them as floats.  `LogRat` keeps the rational argument and all
arithmetic stays on the argument side; `LogLin` extends this to rational
linear combinations of logarithms, which is what Newton-polygon chords
produce.  Comparisons go through a floating filter and fall back to exact
rational power comparisons only when the filter cannot decide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

# Arbitrary-precision rational scalar used across the package.
BigRat = Fraction

RatLike = Union[int, Fraction]

# Gap below which the float filter refuses to decide a comparison.
_FILTER_EPS = 1e-9


def _to_frac(x: RatLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


def _flog(q: Fraction) -> float:
    # math.log accepts arbitrarily large ints, so split the fraction.
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True, slots=True)
class LogRat:
    """The value (1/2)*log(arg) for a positive rational argument."""

    arg: Fraction

    def __post_init__(self):
        arg = _to_frac(self.arg)
        if arg <= 0:
            raise ValueError("LogRat argument must be positive")
        object.__setattr__(self, "arg", arg)

    @staticmethod
    def zero() -> "LogRat":
        return LogRat(Fraction(1))

    def __add__(self, other: "LogRat") -> "LogRat":
        return LogRat(self.arg * other.arg)

    def __sub__(self, other: "LogRat") -> "LogRat":
        return LogRat(self.arg / other.arg)

    def __neg__(self) -> "LogRat":
        return LogRat(1 / self.arg)

    def __mul__(self, k: int) -> "LogRat":
        if not isinstance(k, int):
            raise TypeError("LogRat supports exact scaling by int only; use as_lin() for rationals")
        return LogRat(self.arg ** k)

    __rmul__ = __mul__

    def compare(self, other: "LogRat") -> int:
        """-1, 0, 1; exact (log is monotone, so compare arguments)."""
        if self.arg == other.arg:
            return 0
        return -1 if self.arg < other.arg else 1

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def is_zero(self) -> bool:
        return self.arg == 1

    def to_float(self) -> float:
        return 0.5 * _flog(self.arg)

    def exp_height(self) -> float:
        """exp(value) = sqrt(arg) as a float."""
        return math.exp(self.to_float())

    def as_lin(self) -> "LogLin":
        return LogLin.from_log(self.arg, Fraction(1, 2))

    def __repr__(self):
        return f"LogRat({self.arg})"


def lograt_compare(a: LogRat, b: LogRat) -> int:
    return a.compare(b)


class LogLin:
    """Exact linear combination sum_i c_i * log(q_i), c_i rational, q_i > 0.

    Arguments equal to 1 are dropped and repeated arguments merged, so the
    zero element has no terms.  Comparison against another LogLin clears
    denominators and compares a single rational power product against 1,
    guarded by a float filter since hull computations generate many calls.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[Fraction, Fraction]] = ()):
        merged: dict[Fraction, Fraction] = {}
        for arg, coeff in terms:
            arg = _to_frac(arg)
            coeff = _to_frac(coeff)
            if arg <= 0:
                raise ValueError("log argument must be positive")
            if arg == 1 or coeff == 0:
                continue
            if arg in merged:
                merged[arg] += coeff
                if merged[arg] == 0:
                    del merged[arg]
            else:
                merged[arg] = coeff
        self.terms = tuple(sorted(merged.items()))

    @staticmethod
    def from_log(arg: RatLike, coeff: RatLike = 1) -> "LogLin":
        return LogLin([(_to_frac(arg), _to_frac(coeff))])

    @staticmethod
    def zero() -> "LogLin":
        return LogLin()

    def __add__(self, other: "LogLin") -> "LogLin":
        return LogLin(list(self.terms) + list(other.terms))

    def __sub__(self, other: "LogLin") -> "LogLin":
        return self + (-other)

    def __neg__(self) -> "LogLin":
        return LogLin([(a, -c) for a, c in self.terms])

    def scale(self, k: RatLike) -> "LogLin":
        k = _to_frac(k)
        return LogLin([(a, c * k) for a, c in self.terms])

    def __mul__(self, k: RatLike) -> "LogLin":
        return self.scale(k)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.sign() == 0

    def sign(self) -> int:
        """Exact sign of the value."""
        if not self.terms:
            return 0
        approx = self.to_float()
        slack = _FILTER_EPS * (1.0 + sum(abs(float(c)) * (1.0 + abs(_flog(a))) for a, c in self.terms))
        if abs(approx) > slack:
            return 1 if approx > 0 else -1
        return self._sign_exact()

    def _sign_exact(self) -> int:
        # Clear denominators: sign(sum n_i log q_i) = sign(prod q_i^{n_i} - 1).
        den = 1
        for _, c in self.terms:
            den = den * c.denominator // math.gcd(den, c.denominator)
        prod = Fraction(1)
        for a, c in self.terms:
            e = int(c * den)
            prod *= a ** e
        if prod == 1:
            return 0
        return 1 if prod > 1 else -1

    def compare(self, other: "LogLin") -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, LogLin):
            return NotImplemented
        return (self - other).sign() == 0

    def __hash__(self):
        raise TypeError("LogLin is unhashable (equality is semantic)")

    def to_float(self) -> float:
        return sum(float(c) * _flog(a) for a, c in self.terms)

    def single_term(self) -> tuple[Fraction, Fraction] | None:
        """(arg, coeff) if the combination has exactly one term, else None."""
        if len(self.terms) == 1:
            return self.terms[0]
        if not self.terms:
            return (Fraction(1), Fraction(0))
        return None

    def __repr__(self):
        if not self.terms:
            return "LogLin(0)"
        parts = " + ".join(f"{c}*log({a})" for a, c in self.terms)
        return f"LogLin({parts})"


@dataclass(frozen=True)
class SieveTable:
    """Moebius and Euler-phi values for 1..limit, from one linear sieve."""

    limit: int
    mu: tuple
    phi: tuple

    def mobius(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise ValueError("n out of sieve range")
        return self.mu[n]

    def totient(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise ValueError("n out of sieve range")
        return self.phi[n]


def build_sieve(limit: int) -> SieveTable:
    if limit < 1:
        raise ValueError("sieve limit must be >= 1")
    mu = [0] * (limit + 1)
    phi = [0] * (limit + 1)
    spf = [0] * (limit + 1)
    primes: list[int] = []
    mu[1] = 1
    phi[1] = 1
    for n in range(2, limit + 1):
        if spf[n] == 0:
            spf[n] = n
            primes.append(n)
            mu[n] = -1
            phi[n] = n - 1
        for p in primes:
            m = n * p
            if p > spf[n] or m > limit:
                break
            spf[m] = p
            if n % p == 0:
                mu[m] = 0
                phi[m] = phi[n] * p
            else:
                mu[m] = -mu[n]
                phi[m] = phi[n] * (p - 1)
    return SieveTable(limit, tuple(mu), tuple(phi))


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division; fine for the sizes we use."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def zeta(s: int, tol: float = 1e-10) -> float:
    """Riemann zeta at an integer s >= 2 by partial sums plus a bounded tail.

    The tail past N is replaced by its Euler-Maclaurin value
    N^(1-s)/(s-1) - N^(-s)/2 + (s/12) N^(-s-1); the remainder is bounded in
    absolute value by s(s+1)(s+2)/720 * N^(-s-3), and N is chosen so that
    this bound is below tol.
    """
    if s < 2:
        raise ValueError("zeta requires s >= 2")
    if not (tol > 0):
        raise ValueError("tol must be positive")
    rem_const = s * (s + 1) * (s + 2) / 720.0
    n_cut = max(10, int(math.ceil((rem_const / tol) ** (1.0 / (s + 3)))) + 1)
    acc = 0.0
    for n in range(n_cut, 0, -1):
        acc += float(n) ** (-s)
    nf = float(n_cut)
    acc += nf ** (1 - s) / (s - 1) - 0.5 * nf ** (-s) + (s / 12.0) * nf ** (-s - 1)
    return acc
