"""Moments of characteristic polynomials over USp(2N), four ways.

The average of Lambda(w_1)..Lambda(w_k) equals

* a parity-constrained sum of k x k power determinants over a Vandermonde,
* a sum of Schur polynomials over even partitions inside a 2N x k box,
* a 2^k-term sign-vector closed form (the fast route), and
* a k-fold contour integral at shifts w_j = exp(-alpha_j).

Also hosts the large-N scaling ratio against the sign-vector form with
(eps_i b_i + eps_j b_j)^(-1) factors, computed entirely through the exact
closed form so the cost is independent of N.
"""

from __future__ import annotations

import math
from typing import Iterator, Sequence

import numpy as np

from .contour import ContourConfig, circular_integral, require_exp_kernel_radius, resolve_geometry
from .errors import PoleHit
from .precision import PrecisionConfig, ops_for
from .symcore import (
    enumerate_even_partitions,
    require_separated,
    schur_stable,
    vandermonde,
)

EPS_DENOM_FLOOR = 1e-6  # below this the 2^k closed form has lost too much


def parity_index_vectors(k: int, top: int) -> Iterator[tuple[int, ...]]:
    """Strictly increasing (i_1..i_k) in {0..top} with i_j == j-1 mod 2."""

    def rec(j: int, prev: int, acc: list[int]):
        if j == k:
            yield tuple(acc)
            return
        start = prev + 1 if j else 0
        for i in range(start, top + 1):
            if i % 2 == j % 2:
                acc.append(i)
                yield from rec(j + 1, i, acc)
                acc.pop()

    yield from rec(0, -1, [])


def _det_sum_over_vandermonde(ws, vectors, num):
    terms = [num.det([[wp ** e for e in vec] for wp in ws]) for vec in vectors]
    total = num.fsum(terms)
    denom = num.one
    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            denom = denom * (ws[j] - ws[i])
    return total / denom


def sp_autocorr_det(N: int, shifts: Sequence[complex], prec: PrecisionConfig | None = None):
    """Determinant route: alternating-parity index sum over the Vandermonde."""
    require_separated(shifts, "shifts")
    num = ops_for(prec)
    k = len(shifts)
    with num.guard():
        ws = [num.scalar(w) for w in shifts]
        return _det_sum_over_vandermonde(ws, parity_index_vectors(k, 2 * N + k - 1), num)


def sp_autocorr_schur(N: int, shifts: Sequence[complex], prec: PrecisionConfig | None = None):
    """Schur route: sum over even partitions in the 2N x k box (confluent-safe)."""
    num = ops_for(prec)
    k = len(shifts)
    with num.guard():
        terms = [schur_stable(lam, shifts, prec) for lam in enumerate_even_partitions(k, 2 * N)]
        return num.fsum(terms)


def _epsilon_vectors(k: int) -> Iterator[tuple[int, ...]]:
    for mask in range(2 ** k):
        yield tuple(1 - 2 * ((mask >> j) & 1) for j in range(k))


def sp_autocorr_eps(N: int, shifts: Sequence[complex], prec: PrecisionConfig | None = None):
    """Sign-vector route: w_1^N..w_k^N times the 2^k-term reflection sum.

    The pair products run over 1 <= i <= j <= k, diagonal included.
    Raises PoleHit when a denominator 1 - w_i^(-e_i) w_j^(-e_j) is within
    the floor of zero for some sign choice (including i = j).
    """
    if any(complex(w) == 0 for w in shifts):
        raise PoleHit("sign-vector route needs nonzero shifts")
    k = len(shifts)
    ws_d = [complex(w) for w in shifts]
    for i in range(k):
        for j in range(i, k):
            for a in (1, -1):
                for b in (1, -1):
                    if i == j and a != b:
                        continue
                    if abs(1 - ws_d[i] ** (-a) * ws_d[j] ** (-b)) < EPS_DENOM_FLOOR:
                        raise PoleHit("reflection-sum denominator vanishes; "
                                      "use the Schur route")
    num = ops_for(prec)
    with num.guard():
        ws = [num.scalar(w) for w in shifts]
        terms = []
        for eps in _epsilon_vectors(k):
            t = num.one
            for j in range(k):
                t = t * ws[j] ** (eps[j] * N)
            for i in range(k):
                for j in range(i, k):
                    t = t / (num.one - ws[i] ** (-eps[i]) * ws[j] ** (-eps[j]))
            terms.append(t)
        total = num.fsum(terms)
        for w in ws:
            total = total * w ** N
        return total


def sp_autocorr_contour(N: int, alphas: Sequence[complex],
                        cfg: ContourConfig | None = None) -> complex:
    """Contour route at shifts w_j = exp(-alpha_j), circle enclosing +-alpha.

    Integrand: prod_{l<=m} (1 - exp(-z_m - z_l))^(-1) times the squared
    Vandermonde in the z_j^2 with a prod z_j numerator, over
    prod (z_j - alpha_i)(z_j + alpha_i), weighted by exp(N sum z).
    """
    al = [complex(a) for a in alphas]
    k = len(al)
    enclosed = al + [-a for a in al]
    require_separated(enclosed, "+-alpha points")
    cfg = cfg or ContourConfig()
    _center, radius = resolve_geometry(cfg, enclosed)
    require_exp_kernel_radius(radius)

    def integrand(*z):
        val = np.exp(N * sum(z))
        for l in range(k):
            for m_ in range(l, k):
                val = val / (1 - np.exp(-z[m_] - z[l]))
        for i in range(k):
            for j in range(i + 1, k):
                val = val * (z[j] ** 2 - z[i] ** 2) ** 2
        for zj in z:
            val = val * zj
            for ai in al:
                val = val / ((zj - ai) * (zj + ai))
        return val

    pref = ((-1) ** (k * (k - 1) // 2) * 2 ** k / math.factorial(k)
            * np.exp(-N * sum(al)))
    return pref * circular_integral(k, integrand, cfg, enclosed_points=enclosed,
                                    vectorized=True)


def sp_large_n_ratio(b: Sequence[complex], N: int, prec: PrecisionConfig | None = None):
    """Exact moment at shifts exp(b_j / N) over its large-N asymptotic form.

    The asymptote is N^{(k^2+k)/2} e^{sum b} times the sign-vector sum with
    (eps_i b_i + eps_j b_j)^(-1) pair factors; the ratio tends to 1.  Both
    sides are evaluated through the closed forms (exp(b_j) directly, and
    expm1 for the denominators), so N = 10^4 costs the same as N = 10.
    """
    bs_d = [complex(x) for x in b]
    k = len(bs_d)
    if any(x == 0 for x in bs_d):
        raise PoleHit("scaling ratio needs nonzero b")
    scale = max(abs(x) for x in bs_d)
    for i in range(k):
        for j in range(i, k):
            for a in (1, -1):
                for c in (1, -1):
                    if i == j and a != c:
                        continue
                    if abs(a * bs_d[i] + c * bs_d[j]) < 1e-12 * scale:
                        raise PoleHit("eps_i b_i + eps_j b_j vanishes")
    num = ops_for(prec)
    with num.guard():
        bs = [num.scalar(x) for x in b]
        exact_terms = []
        asym_terms = []
        for eps in _epsilon_vectors(k):
            te = num.one
            ta = num.one
            for j in range(k):
                w_pow = num.exp(eps[j] * bs[j])
                te = te * w_pow
                ta = ta * w_pow
            for i in range(k):
                for j in range(i, k):
                    x = eps[i] * bs[i] + eps[j] * bs[j]
                    te = te / (-num.expm1(-x / N))
                    ta = ta / x
            exact_terms.append(te)
            asym_terms.append(ta)
        # the common e^{sum b} prefactors cancel in the ratio
        n_power = num.scalar(N) ** ((k * k + k) // 2)
        return num.fsum(exact_terms) / (n_power * num.fsum(asym_terms))
