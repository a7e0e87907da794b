"""Precision plumbing: one switch between machine doubles and mpmath.

All closed-form routes and identity checks run either on plain Python
complex numbers (the default) or on ``mpmath.mpc`` scalars at a configured
decimal precision.  A :class:`PrecisionConfig` travels with every call;
``ops_for(prec)`` hands back the matching operation set.  Code written
against the operation set is precision-agnostic.

Vectorized machinery (Weyl quadrature grids, Haar sampling, Monte Carlo)
is numpy-based and always runs in double precision; its error is either
spectrally small or statistical, so extended digits would buy nothing.
"""

from __future__ import annotations

import cmath
import contextlib
import math
from dataclasses import dataclass

from mpmath import mp

MODE_DOUBLE = "machine-double"
MODE_EXTENDED = "extended"


@dataclass(frozen=True)
class PrecisionConfig:
    """Arithmetic mode for the exact evaluation routes.

    mode            "machine-double" or "extended"
    digits          decimal digits in extended mode (>= 30)
    agreement_tol   tolerance used by cross-checks at this precision
    """

    mode: str = MODE_DOUBLE
    digits: int = 40
    agreement_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.mode not in (MODE_DOUBLE, MODE_EXTENDED):
            raise ValueError(f"unknown precision mode {self.mode!r}")
        if self.mode == MODE_EXTENDED and self.digits < 30:
            raise ValueError("extended precision requires digits >= 30")
        if not self.agreement_tol > 0:
            raise ValueError("agreement_tol must be positive")

    @classmethod
    def double(cls, agreement_tol: float = 1e-9) -> "PrecisionConfig":
        return cls(MODE_DOUBLE, agreement_tol=agreement_tol)

    @classmethod
    def extended(cls, digits: int = 40, agreement_tol: float | None = None) -> "PrecisionConfig":
        if agreement_tol is None:
            agreement_tol = 10.0 ** (-(digits - 15))
        return cls(MODE_EXTENDED, digits=digits, agreement_tol=agreement_tol)

    @property
    def is_double(self) -> bool:
        return self.mode == MODE_DOUBLE


DOUBLE = PrecisionConfig()


def _generic_det(rows, absfn):
    """Determinant by Gaussian elimination with partial pivoting.

    Works for any field scalar with /, *, - and an absolute value; the
    matrices here are tiny (at most ~10x10), so O(n^3) scalar work is fine.
    """
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    det = 1
    sign = 1
    for c in range(n):
        p = max(range(c, n), key=lambda r: absfn(a[r][c]))
        if absfn(a[p][c]) == 0:
            return 0 * a[0][0]
        if p != c:
            a[p], a[c] = a[c], a[p]
            sign = -sign
        piv = a[c][c]
        det = det * piv
        for r in range(c + 1, n):
            f = a[r][c] / piv
            for cc in range(c + 1, n):
                a[r][cc] = a[r][cc] - f * a[c][cc]
    return det if sign > 0 else -det


class DoubleOps:
    """Machine-double operation set (python complex scalars)."""

    is_double = True

    @staticmethod
    def guard():
        return contextlib.nullcontext()

    @staticmethod
    def scalar(z) -> complex:
        return complex(z)

    one = 1.0 + 0.0j
    zero = 0.0 + 0.0j

    @staticmethod
    def exp(z):
        return cmath.exp(z)

    @staticmethod
    def expm1(z):
        # stable complex expm1: e^z - 1 without cancellation for small z
        z = complex(z)
        re, im = z.real, z.imag
        return complex(
            math.expm1(re) * math.cos(im) - 2.0 * math.sin(im / 2.0) ** 2,
            math.exp(re) * math.sin(im),
        )

    @staticmethod
    def sqrt(z):
        return cmath.sqrt(z)

    @staticmethod
    def log(z):
        return cmath.log(z)

    @staticmethod
    def absolute(z):
        return abs(z)

    @staticmethod
    def fsum(terms):
        ts = [complex(t) for t in terms]
        return complex(math.fsum(t.real for t in ts), math.fsum(t.imag for t in ts))

    @classmethod
    def det(cls, rows):
        return _generic_det([[complex(x) for x in r] for r in rows], abs)

    @staticmethod
    def to_complex(z) -> complex:
        return complex(z)


class ExtendedOps:
    """mpmath operation set at a fixed decimal precision."""

    is_double = False

    def __init__(self, digits: int):
        self.digits = digits

    def guard(self):
        return mp.workdps(self.digits)

    def scalar(self, z):
        if isinstance(z, (mp.mpc, mp.mpf)):
            return mp.mpc(z)
        z = complex(z)
        return mp.mpc(z.real, z.imag)

    @property
    def one(self):
        return mp.mpc(1)

    @property
    def zero(self):
        return mp.mpc(0)

    @staticmethod
    def exp(z):
        return mp.exp(z)

    @staticmethod
    def expm1(z):
        return mp.expm1(z)

    @staticmethod
    def sqrt(z):
        return mp.sqrt(z)

    @staticmethod
    def log(z):
        return mp.log(z)

    @staticmethod
    def absolute(z):
        return abs(z)

    @staticmethod
    def fsum(terms):
        return mp.fsum(terms)

    def det(self, rows):
        return _generic_det([[self.scalar(x) for x in r] for r in rows], abs)

    @staticmethod
    def to_complex(z) -> complex:
        return complex(z)


_DOUBLE_OPS = DoubleOps()


def ops_for(prec: PrecisionConfig | None):
    """Operation set matching a precision config (None means double)."""
    if prec is None or prec.is_double:
        return _DOUBLE_OPS
    return ExtendedOps(prec.digits)
