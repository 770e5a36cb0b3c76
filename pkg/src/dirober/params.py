"""Parameter tables for the two general assemblers.

Both tables are indexed by k mod 4 where m = 2k + 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .core import Modulus


class OutOfScope(ValueError):
    pass


@dataclass(frozen=True)
class ParamsA:
    """Parameters for odd m >= 7 with 3 not dividing m."""

    m: int
    k: int
    d: int
    s1p: int
    s2p: int
    t1p: int
    t2p: int
    s1: int
    s2: int
    t1: int
    t2: int
    r1: int
    r2: int

    @property
    def a1(self):
        return (self.t1, self.s1)

    @property
    def a2(self):
        return (self.t2, self.s2)

    @property
    def d1Y(self):
        return (self.s1 - self.t1) % self.m

    @property
    def d2Y(self):
        return (self.s2 - self.t2) % self.m

    @property
    def linking_x(self):
        """The two pure left linking arcs (x_{t2'}, x_{s1'}) and (x_{t1'}, x_{s2'})."""
        return ((self.t2p, self.s1p), (self.t1p, self.s2p))


# k mod 4 -> (d, s1', s2', t2', t1) as (numerator coefficients, denominator)
_TABLE_A = {
    0: ((7, 8, 4), (1, 0, 4), (3, 4, 4), (1, -2, 2), (3, 2, 2)),
    1: ((5, 7, 4), (3, 1, 4), (1, 3, 4), (3, -1, 2), (1, 1, 2)),
    2: ((3, 6, 4), (5, 2, 4), (7, 6, 4), (1, -2, 2), (3, 2, 2)),
    3: ((1, 5, 4), (7, 3, 4), (5, 5, 4), (3, -1, 2), (1, 1, 2)),
}

_TABLE_B = {
    0: ((1, 0, 2), (3, 0, 4)),
    1: ((3, 1, 2), (1, -1, 4)),
    2: ((1, 0, 2), (7, 2, 4)),
    3: ((3, 1, 2), (5, 1, 4)),
}


def _eval(k: int, entry) -> int:
    a, b, den = entry
    num = a * k + b
    if num % den:
        raise AssertionError(f"table entry ({a}k{b:+d})/{den} not integral at k={k}")
    return num // den


def params_nonzero(m: int, check_scope: bool = True) -> ParamsA:
    k = Modulus(m).k
    if check_scope and (m % 3 == 0 or m < 7 or m == 11):
        raise OutOfScope(f"m={m}: this parameter table needs 3 ∤ m, m >= 7, m != 11")
    if m % 3 == 0:
        raise OutOfScope(f"m={m}: 3 divides m")
    d, s1p, s2p, t2p, t1 = (_eval(k, e) % m for e in _TABLE_A[k % 4])
    t1p = s2 = k
    s1 = (2 * k - 1) % m
    t2 = t2p
    if gcd(d, m) != 1:
        raise AssertionError(f"m={m}: gcd(d, m) = {gcd(d, m)}")
    dinv = pow(d, -1, m)
    r1 = (t1p - s1p) * dinv % m
    r2 = (t2p - s2p) * dinv % m
    return ParamsA(m, k, d, s1p, s2p, t1p, t2p, s1, s2, t1, t2, r1, r2)


@dataclass(frozen=True)
class ParamsB:
    """Parameters for odd m with 3 dividing m."""

    m: int
    k: int
    s: tuple  # s_1, s_2, s_3
    t: tuple  # t_1, t_2, t_3

    @property
    def s1(self):
        return self.s[0]

    @property
    def t1(self):
        return self.t[0]

    @property
    def bX(self):
        m = self.m
        return ((self.t[0], 1), (self.t[1], 2), (self.t[2], 0 % m))

    @property
    def bY(self):
        m = self.m
        return ((1, self.s[0]), (3, self.s[1]), (m - 1, self.s[2]))

    @property
    def c(self):
        return ((self.t[0], 0), (self.t[1], 1), (self.t[2], 2))

    @property
    def d1X(self):
        return (1 - self.t1) % self.m

    @property
    def d2X(self):
        return (-2 - self.t1) % self.m

    @property
    def dX(self):
        return -self.t1 % self.m

    @property
    def d1Y(self):
        return (self.s1 - 1) % self.m

    @property
    def d2Y(self):
        return (self.s1 + 5) % self.m


def params_zero(m: int, check_scope: bool = True) -> ParamsB:
    k = Modulus(m).k
    if m % 3:
        raise OutOfScope(f"m={m}: 3 does not divide m")
    if check_scope and m < 15:
        raise OutOfScope(f"m={m}: this parameter table needs m >= 15")
    s1, t1 = (_eval(k, e) % m for e in _TABLE_B[k % 4])
    s = tuple((s1 + 2 * i) % m for i in range(3))
    t = tuple((t1 + i) % m for i in range(3))
    return ParamsB(m, k, s, t)
