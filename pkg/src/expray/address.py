"""External addresses s = s_1 s_2 s_3 ... with a finite prefix and a simple tail."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Tuple

MAX_SUP_NORM = 64


class AddressSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class ExternalAddress:
    """Integer sequence given by ``prefix`` followed by ``period`` repeated forever.

    An empty ``period`` means the tail is all zeros.
    """

    prefix: Tuple[int, ...] = ()
    period: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(v) for v in self.prefix))
        object.__setattr__(self, "period", tuple(int(v) for v in self.period))
        if self.period and not any(self.period):
            object.__setattr__(self, "period", ())
        if not self.period:
            prefix = list(self.prefix)
            while prefix and prefix[-1] == 0:
                prefix.pop()
            object.__setattr__(self, "prefix", tuple(prefix))

    @classmethod
    def zeros(cls) -> "ExternalAddress":
        return cls()

    @classmethod
    def parse(cls, text: str) -> "ExternalAddress":
        """Parse "3,-1" (zero tail) or "1,2|3,4" (periodic tail 3,4,3,4,...)."""
        text = re.sub(r"\s+", "", text)
        head, sep, tail = text.partition("|")
        if sep and not tail:
            raise AddressSyntaxError(f"empty period in address {text!r}")
        try:
            prefix = [int(v) for v in head.split(",")] if head else []
            period = [int(v) for v in tail.split(",")] if tail else []
        except ValueError:
            raise AddressSyntaxError(f"malformed address {text!r}") from None
        if not prefix and not period:
            raise AddressSyntaxError("empty address")
        return cls(tuple(prefix), tuple(period))

    def __str__(self) -> str:
        head = ",".join(map(str, self.prefix))
        if self.period:
            return f"{head}|{','.join(map(str, self.period))}"
        return head or "0"

    @property
    def is_zero(self) -> bool:
        return not any(self.prefix) and not self.period

    def entry(self, j: int) -> int:
        """s_j, counting from j = 1."""
        if j < 1:
            raise IndexError("address entries are indexed from 1")
        k = len(self.prefix)
        if j <= k:
            return self.prefix[j - 1]
        if not self.period:
            return 0
        return self.period[(j - k - 1) % len(self.period)]

    def __getitem__(self, j: int) -> int:
        return self.entry(j)

    def shift(self, n: int = 1) -> "ExternalAddress":
        """sigma^n(s)."""
        s = self
        for _ in range(n):
            if s.prefix:
                s = ExternalAddress(s.prefix[1:], s.period)
            elif s.period:
                s = ExternalAddress((), s.period[1:] + s.period[:1])
        return s

    def negate(self) -> "ExternalAddress":
        return ExternalAddress(tuple(-v for v in self.prefix), tuple(-v for v in self.period))

    def sup_norm(self) -> int:
        return max((abs(v) for v in self.prefix + self.period), default=0)


def entry(s: ExternalAddress, j: int) -> int:
    return s.entry(j)


def shift(s: ExternalAddress) -> ExternalAddress:
    return s.shift()


def negate(s: ExternalAddress) -> ExternalAddress:
    return s.negate()


def sup_norm(s: ExternalAddress) -> int:
    return s.sup_norm()


def check_admissible(s: ExternalAddress, bound: int = MAX_SUP_NORM) -> None:
    if s.sup_norm() > bound:
        raise ValueError(f"address {s} exceeds the admissibility bound sup|s_j| <= {bound}")
