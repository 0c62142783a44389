"""Exact n-bit fixed-point Logistic map.

Every evaluation goes through integers: the value f_n(i) * 2^n is held as the
dyadic rational ``N * i * (2^n - i) / 2^(n_mu + n)`` and quantized without any
binary floating point on the way.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

MAX_BITS = 40
# Vectorized tables use uint64 limbs; beyond this they fall back to Python ints.
_UINT64_TABLE_BITS = 30


class DomainError(ValueError):
    """Raised for node labels or parameters outside the valid domain."""


class QuantizationMode(str, enum.Enum):
    ROUND = "round"
    FLOOR = "floor"
    CEIL = "ceil"


@dataclass(frozen=True)
class ControlParameter:
    """Dyadic control parameter ``numerator / 2**exponent`` in (0, 4).

    Even numerators are normalized to odd form on construction; the input form
    is kept in ``raw_numerator`` / ``raw_exponent``.
    """

    numerator: int
    exponent: int
    raw_numerator: int = field(default=0, compare=False)
    raw_exponent: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        num, exp = self.numerator, self.exponent
        if num <= 0:
            raise DomainError(f"mu numerator must be positive, got {num}")
        if exp < 0:
            raise DomainError(f"mu exponent must be non-negative, got {exp}")
        raw = (num, exp)
        while num % 2 == 0 and exp > 0:
            num //= 2
            exp -= 1
        if num >= 4 << exp:
            raise DomainError(f"mu = {raw[0]}/2^{raw[1]} must be < 4")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)
        if not self.raw_numerator:
            object.__setattr__(self, "raw_numerator", raw[0])
            object.__setattr__(self, "raw_exponent", raw[1])

    @property
    def value(self) -> float:
        return self.numerator / 2**self.exponent

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"


@dataclass(frozen=True)
class ExactRatio:
    """Non-negative dyadic rational ``num / 2**log2_den``."""

    num: int
    log2_den: int

    def __post_init__(self) -> None:
        if self.num < 0 or self.log2_den < 0:
            raise DomainError(f"malformed ratio {self.num}/2^{self.log2_den}")

    @property
    def whole(self) -> int:
        return self.num >> self.log2_den

    @property
    def remainder(self) -> int:
        """Numerator of the fractional part, over ``2**log2_den``."""
        return self.num & ((1 << self.log2_den) - 1)


def check_precision(mu: ControlParameter, n: int) -> None:
    if not 1 <= n <= MAX_BITS:
        raise DomainError(f"precision n={n} outside [1, {MAX_BITS}]")
    if n < mu.exponent:
        raise DomainError(f"precision n={n} below mu exponent n_mu={mu.exponent}")


def exact_value(i: int, mu: ControlParameter, n: int) -> ExactRatio:
    """Return f_n(i) * 2^n exactly."""
    check_precision(mu, n)
    top = 1 << n
    if not 0 <= i <= top:
        raise DomainError(f"node label {i} outside [0, {top}]")
    return ExactRatio(mu.numerator * i * (top - i), mu.exponent + n)


def quantize(r: ExactRatio, mode: QuantizationMode | str) -> int:
    mode = QuantizationMode(mode)
    d = r.log2_den
    if mode is QuantizationMode.FLOOR:
        return r.num >> d
    if mode is QuantizationMode.CEIL:
        return -((-r.num) >> d)
    # half-up: floor((2 num + 2^d) / 2^(d+1))
    return (2 * r.num + (1 << d)) >> (d + 1)


def logistic_step(
    i: int, mu: ControlParameter, n: int, mode: QuantizationMode | str = QuantizationMode.ROUND
) -> int:
    return quantize(exact_value(i, mu, n), mode)


def iterate(i: int, mu: ControlParameter, n: int, m: int,
            mode: QuantizationMode | str = QuantizationMode.ROUND) -> int:
    """m-fold composition F_n^(m)(i)."""
    for _ in range(m):
        i = logistic_step(i, mu, n, mode)
    return i


def exact_table(mu: ControlParameter, n: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Vectorized exact_value over every node 0..2^n.

    Returns ``(whole, rem, d)`` with ``f_n(i) * 2^n = whole[i] + rem[i] / 2^d``.
    Arrays are uint64 for n <= 30 and object (Python int) arrays above that.
    """
    check_precision(mu, n)
    top = 1 << n
    d = mu.exponent + n
    if n > _UINT64_TABLE_BITS:
        prod = [mu.numerator * i * (top - i) for i in range(top + 1)]
        whole = np.array([p >> d for p in prod], dtype=object)
        rem = np.array([p & ((1 << d) - 1) for p in prod], dtype=object)
        return whole, rem, d

    i = np.arange(top + 1, dtype=np.uint64)
    p = i * (np.uint64(top) - i)  # < 2^(2n-2)
    # Split p = a * 2^n + b so that every partial product stays below 2^64.
    a = p >> np.uint64(n)
    b = p & np.uint64(top - 1)
    big_n = np.uint64(mu.numerator)
    x = big_n * a  # N * a / 2^n_mu contributes whole and fractional parts
    y = big_n * b
    e = np.uint64(mu.exponent)
    x_hi = x >> e
    x_lo = x & np.uint64((1 << mu.exponent) - 1)
    z = (x_lo << np.uint64(n)) + y  # < 2^(2n+3)
    whole = x_hi + (z >> np.uint64(d))
    rem = z & np.uint64((1 << d) - 1)
    return whole, rem, d


def step_table(
    mu: ControlParameter, n: int, mode: QuantizationMode | str = QuantizationMode.ROUND
) -> np.ndarray:
    """F_n over every node as an int64 array of length 2^n + 1."""
    mode = QuantizationMode(mode)
    whole, rem, d = exact_table(mu, n)
    if mode is QuantizationMode.FLOOR:
        out = whole
    elif mode is QuantizationMode.CEIL:
        out = whole + (rem > 0)
    else:
        half = 1 << (d - 1)
        out = whole + (rem >= half) if rem.dtype == object else whole + (rem >= np.uint64(half))
    return np.asarray(out, dtype=np.int64)


def frac_quarter(rem, d: int):
    """floor(4 * frac) in {0, 1, 2, 3} for a fractional part ``rem / 2^d``."""
    if isinstance(rem, np.ndarray) and rem.dtype != object:
        return (rem << np.uint64(2)) >> np.uint64(d)
    return (rem << 2) >> d
