"""Moments over SO(2N) and the determinant -1 coset of O(2N).

SO(2N) gets four forms (index-constrained determinant sum, conjugate-
partition Schur sums, a strict-pair sign-vector closed form, a contour
integral at shifts exp(+alpha)), plus the split of its determinant sum
into the four partial families -- all-paired (M), end-pinned (E), and
their odd-count analogues (R, L) -- each with a subset closed form whose
residual is reported alongside the value.

The coset average I(O^-(2N), w), defined with its (-1)^k sign, factors as
prod (w_m^2 - 1) times the symplectic-style sum at size parameter N - 1,
and has a signed sign-vector closed form (note the extra prod eps_j).

The subset statistics record (w_A, S, W, E, D, Delta, script-E) feeds both
the closed forms here and the standalone identity checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .contour import ContourConfig, circular_integral, require_exp_kernel_radius, resolve_geometry
from .errors import NearConfluent, PoleHit
from .precision import PrecisionConfig, ops_for
from .symcore import (
    Partition,
    adjacent_pair_runs,
    conjugate_partition,
    enumerate_even_partitions,
    enumerate_so_index_sets,
    require_separated,
    schur_stable,
)
from .symplectic import (
    EPS_DENOM_FLOOR,
    _det_sum_over_vandermonde,
    _epsilon_vectors,
    parity_index_vectors,
)


# ---------------------------------------------------------------------------
# Subset statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubsetStats:
    """Products and counting statistics of an ordered subset pair (A, B).

    Indices are 0-based positions into the shift vector; A and B must
    partition {0..m-1}.  W counts cross pairs a > b; S is the sign exponent
    |A||B| + |A|(|A|+1)/2 + W; E and D are the cross products of
    (1 - w_a w_b) and (w_b - w_a); cal_E_A is the within-A product of
    (1 - w_a w_b) over a < b.
    """

    w_A: complex
    S: int
    W: int
    E: complex
    D: complex
    delta_A: complex
    delta_B: complex
    cal_E_A: complex


def subset_stats(A: Sequence[int], B: Sequence[int], shifts: Sequence[complex],
                 prec: PrecisionConfig | None = None) -> SubsetStats:
    m = len(shifts)
    A = tuple(sorted(A))
    B = tuple(sorted(B))
    if sorted(A + B) != list(range(m)) or set(A) & set(B):
        raise ValueError("A and B must partition the shift indices")
    num = ops_for(prec)
    with num.guard():
        w = [num.scalar(x) for x in shifts]

        def prod(factors):
            out = num.one
            for f in factors:
                out = out * f
            return out

        W = sum(1 for a in A for b in B if a > b)
        S = len(A) * len(B) + len(A) * (len(A) + 1) // 2 + W
        return SubsetStats(
            w_A=prod(w[a] for a in A),
            S=S,
            W=W,
            E=prod(num.one - w[a] * w[b] for a in A for b in B),
            D=prod(w[b] - w[a] for a in A for b in B),
            delta_A=prod(w[A[j]] - w[A[i]] for i in range(len(A)) for j in range(i + 1, len(A))),
            delta_B=prod(w[B[j]] - w[B[i]] for i in range(len(B)) for j in range(i + 1, len(B))),
            cal_E_A=prod(num.one - w[A[i]] * w[A[j]] for i in range(len(A)) for j in range(i + 1, len(A))),
        )


def _subset_pairs(m: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    for mask in range(2 ** m):
        A = tuple(i for i in range(m) if (mask >> i) & 1)
        B = tuple(i for i in range(m) if not (mask >> i) & 1)
        yield A, B


# ---------------------------------------------------------------------------
# SO(2N)
# ---------------------------------------------------------------------------

def so_autocorr_det(N: int, shifts: Sequence[complex], prec: PrecisionConfig | None = None):
    """Determinant route: the adjacency/pinning-constrained index sum."""
    require_separated(shifts, "shifts")
    num = ops_for(prec)
    k = len(shifts)
    with num.guard():
        ws = [num.scalar(w) for w in shifts]
        return _det_sum_over_vandermonde(ws, enumerate_so_index_sets(k, N), num)


def _odd_partitions_exact(length: int, max_part: int) -> Iterator[tuple[int, ...]]:
    """Weakly decreasing all-odd tuples of exactly `length` parts in [1, max_part]."""
    if max_part < 1:
        return

    def rec(remaining: int, cap: int, acc: list[int]):
        if remaining == 0:
            yield tuple(acc)
            return
        p = cap if cap % 2 else cap - 1
        while p >= 1:
            acc.append(p)
            yield from rec(remaining - 1, p, acc)
            acc.pop()
            p -= 2

    yield from rec(length, max_part, [])


def so_autocorr_schur(N: int, shifts: Sequence[complex], prec: PrecisionConfig | None = None):
    """Schur route: conjugate-partition sums (confluent-safe).

    Sum of S_lambda over lambda whose conjugate lambda' has parts <= k and
    is either all-odd with exactly 2N nonzero parts, or all-even with at
    most 2N parts.
    """
    num = ops_for(prec)
    k = len(shifts)
    with num.guard():
        terms = []
        for lam_prime in _odd_partitions_exact(2 * N, k):
            lam = conjugate_partition(Partition(lam_prime)).padded(k)
            terms.append(schur_stable(lam, shifts, prec))
        even_cap = k if k % 2 == 0 else k - 1
        for lam_prime in enumerate_even_partitions(2 * N, even_cap):
            lam = conjugate_partition(lam_prime).padded(k)
            terms.append(schur_stable(lam, shifts, prec))
        return num.fsum(terms)


def _check_strict_pair_denominators(shifts: Sequence[complex]) -> None:
    ws = [complex(w) for w in shifts]
    if any(w == 0 for w in ws):
        raise PoleHit("sign-vector route needs nonzero shifts")
    k = len(ws)
    for i in range(k):
        for j in range(i + 1, k):
            for a in (1, -1):
                for b in (1, -1):
                    if abs(1 - ws[i] ** (-a) * ws[j] ** (-b)) < EPS_DENOM_FLOOR:
                        raise PoleHit("reflection-sum denominator vanishes")


def so_autocorr_eps(N: int, shifts: Sequence[complex], prec: PrecisionConfig | None = None):
    """Sign-vector route with strict pair products (i < j, no diagonal)."""
    _check_strict_pair_denominators(shifts)
    num = ops_for(prec)
    k = len(shifts)
    with num.guard():
        ws = [num.scalar(w) for w in shifts]
        terms = []
        for eps in _epsilon_vectors(k):
            t = num.one
            for j in range(k):
                t = t * ws[j] ** (eps[j] * N)
            for i in range(k):
                for j in range(i + 1, k):
                    t = t / (num.one - ws[i] ** (-eps[i]) * ws[j] ** (-eps[j]))
            terms.append(t)
        total = num.fsum(terms)
        for w in ws:
            total = total * w ** N
        return total


# ---------------------------------------------------------------------------
# Partial index families M / E / R / L
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartialSumResult:
    value: complex        # the index-sum side
    closed_form: complex  # the subset closed form

    @property
    def residual(self) -> float:
        return abs(complex(self.value) - complex(self.closed_form))


def _partial_index_vectors(variant: str, count: int, n_max: int) -> Iterator[tuple[int, ...]]:
    if variant == "M":
        pairs = count // 2
        yield from adjacent_pair_runs(pairs, 0, n_max)
    elif variant == "E":
        pairs = count // 2 - 1
        for mid in adjacent_pair_runs(pairs, 1, n_max - 1):
            yield (0,) + mid + (n_max,)
    elif variant == "R":
        pairs = (count - 1) // 2
        for run in adjacent_pair_runs(pairs, 0, n_max - 1):
            yield run + (n_max,)
    elif variant == "L":
        pairs = (count - 1) // 2
        for run in adjacent_pair_runs(pairs, 1, n_max):
            yield (0,) + run
    else:
        raise ValueError("variant must be one of M, E, R, L")


def so_partial_sums(variant: str, n_max: int, shifts: Sequence[complex],
                    prec: PrecisionConfig | None = None) -> PartialSumResult:
    """One of the four partial determinant sums and its closed form.

    M and E take an even number of shifts, R and L an odd number.  The
    closed form is the parity-restricted subset sum with script-E and
    Vandermonde normalization; residuals at the working precision are the
    point of returning both.
    """
    m = len(shifts)
    if variant in ("M", "E") and m % 2:
        raise ValueError(f"variant {variant} needs an even number of shifts")
    if variant in ("R", "L") and m % 2 == 0:
        raise ValueError(f"variant {variant} needs an odd number of shifts")
    require_separated(shifts, "shifts")
    num = ops_for(prec)
    with num.guard():
        ws = [num.scalar(w) for w in shifts]
        vecs = [v for v in _partial_index_vectors(variant, m, n_max)
                if len(v) == m and all(v[i] < v[i + 1] for i in range(m - 1))]
        value = _det_sum_over_vandermonde(ws, vecs, num)

        want_even = variant in ("M", "R")
        cal_e_full = num.one
        delta_full = num.one
        for i in range(m):
            for j in range(i + 1, m):
                cal_e_full = cal_e_full * (num.one - ws[i] * ws[j])
                delta_full = delta_full * (ws[j] - ws[i])
        if abs(num.to_complex(cal_e_full)) == 0.0:
            raise PoleHit("script-E normalization vanishes (w_i w_j = 1)")
        terms = []
        for A, B in _subset_pairs(m):
            if (len(B) % 2 == 0) != want_even:
                continue
            st = subset_stats(A, B, shifts, prec)
            sgn = -1 if (st.S - len(A)) % 2 else 1
            terms.append(sgn * st.w_A ** n_max * st.E * st.delta_A * st.delta_B)
        closed = num.fsum(terms) / (cal_e_full * delta_full)
        return PartialSumResult(value, closed)


# ---------------------------------------------------------------------------
# O^-(2N)
# ---------------------------------------------------------------------------

def ominus_autocorr_det(N: int, shifts: Sequence[complex], prec: PrecisionConfig | None = None):
    """Determinant route: prod (w_m^2 - 1) times the symplectic-style
    alternating-parity sum at size parameter N - 1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    require_separated(shifts, "shifts")
    num = ops_for(prec)
    k = len(shifts)
    with num.guard():
        ws = [num.scalar(w) for w in shifts]
        base = _det_sum_over_vandermonde(ws, parity_index_vectors(k, 2 * (N - 1) + k - 1), num)
        for w in ws:
            base = base * (w * w - num.one)
        return base


def ominus_autocorr_eps(N: int, shifts: Sequence[complex], prec: PrecisionConfig | None = None):
    """Signed sign-vector route: like SO but each term carries prod eps_j."""
    _check_strict_pair_denominators(shifts)
    num = ops_for(prec)
    k = len(shifts)
    with num.guard():
        ws = [num.scalar(w) for w in shifts]
        terms = []
        for eps in _epsilon_vectors(k):
            t = num.one if math.prod(eps) > 0 else -num.one
            for j in range(k):
                t = t * ws[j] ** (eps[j] * N)
            for i in range(k):
                for j in range(i + 1, k):
                    t = t / (num.one - ws[i] ** (-eps[i]) * ws[j] ** (-eps[j]))
            terms.append(t)
        total = num.fsum(terms)
        for w in ws:
            total = total * w ** N
        return total


def ominus_autocorr_schur(N: int, shifts: Sequence[complex], prec: PrecisionConfig | None = None):
    """Confluent-safe fallback: prod (w^2 - 1) times the even-partition
    Schur sum in the 2(N-1) x k box (the symplectic Schur route at N - 1)."""
    num = ops_for(prec)
    k = len(shifts)
    with num.guard():
        terms = [schur_stable(lam, shifts, prec)
                 for lam in enumerate_even_partitions(k, 2 * (N - 1))]
        total = num.fsum(terms)
        for w in shifts:
            ws = num.scalar(w)
            total = total * (ws * ws - num.one)
        return total


# ---------------------------------------------------------------------------
# Contour forms and the full-group average
# ---------------------------------------------------------------------------

def orthogonal_contour(family: str, N: int, alphas: Sequence[complex],
                       cfg: ContourConfig | None = None) -> complex:
    """Contour route for SO / O^- at shifts w_j = exp(+alpha_j).

    Both integrands use the strict pair product prod_{l<m}
    (1 - exp(-z_m - z_l))^(-1); the numerator is prod z_j for SO and
    prod alpha_j for the determinant -1 coset.  (The diagonal l = m factor
    would add an uncancelled pole at z = 0 in the signed case and does not
    reproduce the closed forms.)
    """
    fam = str(family).lower()
    if fam not in ("so", "ominus"):
        raise ValueError("family must be 'so' or 'ominus'")
    al = [complex(a) for a in alphas]
    k = len(al)
    enclosed = al + [-a for a in al]
    require_separated(enclosed, "+-alpha points")
    cfg = cfg or ContourConfig()
    _center, radius = resolve_geometry(cfg, enclosed)
    require_exp_kernel_radius(radius)
    alpha_prod = np.prod(al) if k else 1.0 + 0j

    def integrand(*z):
        val = np.exp(N * sum(z))
        for l in range(k):
            for m_ in range(l + 1, k):
                val = val / (1 - np.exp(-z[m_] - z[l]))
        for i in range(k):
            for j in range(i + 1, k):
                val = val * (z[j] ** 2 - z[i] ** 2) ** 2
        if fam == "so":
            for zj in z:
                val = val * zj
        else:
            val = val * alpha_prod
        for zj in z:
            for ai in al:
                val = val / ((zj - ai) * (zj + ai))
        return val

    pref = ((-1) ** (k * (k - 1) // 2) * 2 ** k / math.factorial(k)
            * np.exp(N * sum(al)))
    return pref * circular_integral(k, integrand, cfg, enclosed_points=enclosed,
                                    vectorized=True)


def full_o2n_average(N: int, shifts: Sequence[complex],
                     undo_embedded_sign: bool = True,
                     prec: PrecisionConfig | None = None):
    """Average over all of O(2N) = SO(2N) and its determinant -1 coset.

    With undo_embedded_sign (default) this is the genuine Haar average of
    prod Lambda(w_j) over O(2N): the coset value carries a defining (-1)^k
    which is removed before the two halves are mixed with equal weight.
    With the flag off the coset value enters as defined.
    """
    k = len(shifts)
    num = ops_for(prec)
    with num.guard():
        so_val = so_autocorr_schur(N, shifts, prec)
        try:
            om_val = ominus_autocorr_eps(N, shifts, prec)
        except PoleHit:
            try:
                om_val = ominus_autocorr_det(N, shifts, prec)
            except NearConfluent:
                om_val = ominus_autocorr_schur(N, shifts, prec)
        if undo_embedded_sign:
            om_val = om_val * (-1) ** k
        return (so_val + om_val) / 2


# ---------------------------------------------------------------------------
# The even/odd pairing determinant
# ---------------------------------------------------------------------------

def pairing_matrix(N: int) -> list[list[int]]:
    """The alternating-sign pairing matrix: +1 on and above the diagonal,
    -1 below."""
    return [[1 if j >= i else -1 for j in range(N)] for i in range(N)]


def pairing_determinant(N: int) -> int:
    """Exact integer determinant of the pairing matrix (equals 2^(N-1))."""
    a = [row[:] for row in pairing_matrix(N)]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n - 1):
        if a[c][c] == 0:
            swap = next((r for r in range(c + 1, n) if a[r][c]), None)
            if swap is None:
                return 0
            a[c], a[swap] = a[swap], a[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) // prev
        prev = a[c][c]
    return sign * a[n - 1][n - 1]
