"""
Prime field arithmetic and p-adic combinatorics.

Everything here works over F_p for an odd prime p.  Scalars carry their
modulus, so values from different fields can never be mixed silently.
The integer helpers (``binom_mod``, ``inverse_mod`` and friends) are the
fast path used by the structure-tensor builders; ``FpScalar`` is the
checked value type exposed in public signatures.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Tuple


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (moduli are small)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    """Return p if it is an odd prime, otherwise raise ValueError."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise ValueError(f"modulus must be an int, got {p!r}")
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p == 2:
        raise ValueError("characteristic 2 is not supported")
    return p


# ---------------------------------------------------------------------------
# integer helpers


def inverse_mod(a: int, p: int) -> int:
    """Multiplicative inverse of a modulo p."""
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse modulo {p}")
    return pow(a, p - 2, p)


def digits_of(n: int, p: int) -> Tuple[int, ...]:
    """Base-p digits of n, least significant first, trailing zeros trimmed."""
    if n < 0:
        raise ValueError("p-adic digits need a non-negative integer")
    out = []
    while n:
        n, d = divmod(n, p)
        out.append(d)
    return tuple(out)


def digit(n: int, p: int, position: int) -> int:
    """The base-p digit of n at the given position."""
    return (n // p**position) % p


def digit_sum(n: int, p: int) -> int:
    """Sum of the base-p digits of n."""
    return sum(digits_of(n, p))


@lru_cache(maxsize=None)
def _small_binomials(p: int):
    table = [[0] * p for _ in range(p)]
    for n in range(p):
        for k in range(n + 1):
            table[n][k] = (factorial(n) // (factorial(k) * factorial(n - k))) % p
    return table


def binom_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p via Lucas's theorem, as a plain int in [0, p)."""
    if k < 0 or n < 0 or k > n:
        return 0
    table = _small_binomials(p)
    result = 1
    while n or k:
        n, nd = divmod(n, p)
        k, kd = divmod(k, p)
        if kd > nd:
            return 0
        result = (result * table[nd][kd]) % p
    return result


@lru_cache(maxsize=None)
def _factorial_mod_table(p: int):
    table = [1] * p
    for i in range(1, p):
        table[i] = (table[i - 1] * i) % p
    return table


def factorial_mod(n: int, p: int) -> int:
    """n! mod p for 0 <= n < p (the only range where it is a unit)."""
    if not 0 <= n < p:
        raise ValueError(f"factorial_mod needs 0 <= n < p, got n={n}, p={p}")
    return _factorial_mod_table(p)[n]


def digit_factorial_product(j: int, p: int) -> int:
    """The product of j_i! over the base-p digits of j, reduced mod p."""
    out = 1
    for d in digits_of(j, p):
        out = (out * factorial_mod(d, p)) % p
    return out


def digit_factorial_inverse_int(j: int, p: int) -> int:
    """(prod_i j_i!)^{-1} mod p as a plain int."""
    return inverse_mod(digit_factorial_product(j, p), p)


# ---------------------------------------------------------------------------
# checked value types


@dataclass(frozen=True, order=True)
class FpScalar:
    """An element of F_p.  The value is always stored fully reduced."""

    p: int
    value: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar(self.p, self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar(self.p, self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar(self.p, v - self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar(self.p, self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(self.p, -self.value)

    def inverse(self) -> "FpScalar":
        return FpScalar(self.p, inverse_mod(self.value, self.p))

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar(self.p, self.value * inverse_mod(v, self.p))

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return FpScalar(self.p, pow(self.value, exponent, self.p))

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpScalar({self.p}, {self.value})"

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class PadicDigits:
    """Base-p expansion of a non-negative integer, least significant first."""

    p: int
    digits: Tuple[int, ...]

    def __post_init__(self):
        check_prime(self.p)
        digits = tuple(int(d) for d in self.digits)
        if any(not 0 <= d < self.p for d in digits):
            raise ValueError(f"digits {digits} out of range for p={self.p}")
        while digits and digits[-1] == 0:
            digits = digits[:-1]
        object.__setattr__(self, "digits", digits)

    @property
    def value(self) -> int:
        return sum(d * self.p**i for i, d in enumerate(self.digits))

    @property
    def digit_sum(self) -> int:
        return sum(self.digits)

    def __getitem__(self, position: int) -> int:
        if position < len(self.digits):
            return self.digits[position]
        return 0

    def __len__(self):
        return len(self.digits)


def binom_mod_p(n: int, k: int, p: int) -> FpScalar:
    """Binomial coefficient C(n, k) in F_p, computed digitwise (Lucas)."""
    check_prime(p)
    if n < 0 or k < 0:
        raise ValueError("binom_mod_p needs non-negative arguments")
    return FpScalar(p, binom_mod(n, k, p))


def p_adic(n: int, p: int) -> PadicDigits:
    """The base-p digits of n."""
    check_prime(p)
    return PadicDigits(p, digits_of(n, p))


def digit_factorial_inverse(j: int, p: int) -> FpScalar:
    """(prod_i j_i!)^{-1} in F_p where j_i are the base-p digits of j."""
    check_prime(p)
    return FpScalar(p, digit_factorial_inverse_int(j, p))
