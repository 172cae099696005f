"""Precision policy: target accuracy, guard bits, and the error budget D."""

import math
from dataclasses import dataclass

LOG2_10 = math.log2(10.0)


def guard_bits(genus: int) -> int:
    """Default internal guard on top of the requested accuracy.

    The constants entering the period matrix grow with the genus (binomial
    shifts, matrix inversion), so the guard scales linearly in g.
    """
    return 64 + 2 * genus


@dataclass(frozen=True)
class Precision:
    """Requested output accuracy plus the internal working precision.

    target_bits: bits of absolute accuracy of published enclosures.
    working_bits: mantissa size used internally; always >= target + guard.
    """

    target_bits: int
    working_bits: int

    def __post_init__(self):
        if self.target_bits < 2:
            raise ValueError("target_bits must be >= 2")
        if self.working_bits < self.target_bits:
            raise ValueError("working_bits must be >= target_bits")

    @classmethod
    def for_genus(cls, target_bits: int, genus: int, extra_guard: int = 0):
        return cls(target_bits, target_bits + guard_bits(genus) + extra_guard)

    def with_extra_guard(self, extra: int) -> "Precision":
        return Precision(self.target_bits, self.working_bits + extra)

    @property
    def d_nats(self) -> float:
        """Error budget D in nats for the quadrature bounds.

        e^(-D) = 2^(-working_bits)/4. Budgeting truncation at the working
        precision (not the published target) keeps the accumulated sums of
        many edge integrals below 2^(-target_bits), and makes a guard bump
        actually shrink the final radii on retry.
        """
        return self.working_bits * math.log(2.0) + math.log(4.0)


def bits_from_digits(digits: int) -> int:
    return math.ceil(digits * LOG2_10)


def digits_from_bits(bits: int) -> int:
    return max(1, math.floor(bits / LOG2_10))
