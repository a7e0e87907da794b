"""Multidimensional circular-contour quadrature and sum-to-integral checks.

The engine realizes (2 pi i)^{-d} of a d-fold contour integral over a
shared circle per variable, discretized by the periodic trapezoid rule.
Successive dimensions get a golden-ratio fraction of a node spacing as a
grid rotation, so antipodal/diagonal node pairs never coincide exactly --
the kernels below have pole sets like z_i = z_j or z_i = -z_j that are
cancelled analytically by Vandermonde-squared zeros but would be 0 * inf
on an aligned grid.

The two lemma checks evaluate both sides (block-ordered permutation sum
vs n-fold integral, and sign-vector sum vs k-fold integral) from their
printed definitions and report the residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .errors import ContourTooTight, DimensionCap
from .symcore import enumerate_split_permutations

GOLDEN_FRACTION = (math.sqrt(5.0) - 1.0) / 2.0

# Circles larger than this cross the 2 pi i-periodic pole branches of the
# exp-kernel integrands (z_i +- z_j = 2 pi i k, k != 0).
EXP_KERNEL_MAX_RADIUS = 2.8


@dataclass(frozen=True)
class ContourConfig:
    nodes_per_dim: int = 128
    radius_rule: str = "auto"          # "auto" | "explicit"
    radius: float | None = None
    center: complex | None = None
    dim_cap: int = 3
    grid_rotation: str = "golden"      # "golden" | "none"

    def __post_init__(self) -> None:
        if self.nodes_per_dim < 16:
            raise ValueError("nodes_per_dim must be >= 16")
        if self.dim_cap > 4:
            raise ValueError("dim_cap must be <= 4")
        if self.radius_rule not in ("auto", "explicit"):
            raise ValueError("radius_rule must be 'auto' or 'explicit'")
        if self.radius_rule == "explicit" and not (self.radius and self.radius > 0):
            raise ValueError("explicit radius_rule requires a positive radius")
        if self.grid_rotation not in ("golden", "none"):
            raise ValueError("grid_rotation must be 'golden' or 'none'")


DEFAULT_CONTOUR = ContourConfig()


def resolve_geometry(cfg: ContourConfig, enclosed: Sequence[complex]) -> tuple[complex, float]:
    """Center and radius of the shared circle.

    Auto rule: center at the centroid of the enclosed points (unless the
    config pins one), radius twice the farthest enclosed distance plus an
    absolute 0.1 floor.
    """
    pts = [complex(p) for p in enclosed]
    if cfg.center is not None:
        center = complex(cfg.center)
    else:
        center = sum(pts) / len(pts) if pts else 0j
    if cfg.radius_rule == "explicit":
        return center, float(cfg.radius)
    spread = max((abs(p - center) for p in pts), default=0.0)
    return center, 2.0 * spread + 0.1


def require_exp_kernel_radius(radius: float) -> None:
    if radius > EXP_KERNEL_MAX_RADIUS:
        raise ContourTooTight(
            f"contour radius {radius:.3f} reaches the 2 pi i-periodic pole "
            "branches; move the enclosed points closer together")


def _node_circles(dim: int, cfg: ContourConfig, center: complex, radius: float) -> list[np.ndarray]:
    M = cfg.nodes_per_dim
    base = 2.0 * np.pi * np.arange(M) / M
    rot = GOLDEN_FRACTION * (2.0 * np.pi / M) if cfg.grid_rotation == "golden" else 0.0
    return [center + radius * np.exp(1j * (base + d * rot)) for d in range(dim)]


def circular_integral(dim: int, integrand, cfg: ContourConfig | None = None,
                      enclosed_points: Sequence[complex] = (),
                      vectorized: bool = False) -> complex:
    """(2 pi i)^{-dim} times the dim-fold contour integral of `integrand`.

    Scalar mode calls integrand(z_1, ..., z_dim) per grid point with a
    fixed lexicographic order and compensated accumulation, so results do
    not depend on evaluation batching.  Vectorized mode hands the integrand
    one broadcastable array per dimension and expects the full grid back.
    """
    cfg = cfg or DEFAULT_CONTOUR
    if dim > cfg.dim_cap:
        raise DimensionCap(f"dimension {dim} exceeds the configured cap {cfg.dim_cap}")
    center, radius = resolve_geometry(cfg, enclosed_points)
    circles = _node_circles(dim, cfg, center, radius)
    M = cfg.nodes_per_dim

    if vectorized:
        shaped = [c.reshape((1,) * d + (M,) + (1,) * (dim - d - 1)) for d, c in enumerate(circles)]
        vals = np.asarray(integrand(*shaped), dtype=complex)
        for d, c in enumerate(circles):
            vals = vals * (c - center).reshape((1,) * d + (M,) + (1,) * (dim - d - 1))
        return complex(vals.sum() / M ** dim)

    total = 0j
    comp = 0j  # Kahan compensation
    for idx in product(range(M), repeat=dim):
        z = tuple(circles[d][i] for d, i in enumerate(idx))
        term = integrand(*z)
        for d, i in enumerate(idx):
            term = term * (circles[d][i] - center)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total / M ** dim


# ---------------------------------------------------------------------------
# Structured integrands for the two sum-to-integral lemmas
# ---------------------------------------------------------------------------

def _one(*_args) -> complex:
    return 1.0 + 0j


def assert_unit_residue(f: Callable[[complex], complex]) -> None:
    """Numerically check that f(x) = 1/x + analytic near x = 0."""
    for probe in (1e-7 + 0j, 1e-7j, (0.7 + 0.4j) * 1e-7):
        if abs(probe * f(probe) - 1.0) > 1e-4:
            raise ValueError("pole factor does not have a simple pole of residue 1 at 0")


@dataclass(frozen=True)
class BipartiteKernel:
    """G(a; b) = F(a; b) * prod_{i,j} f(a_i - b_j) with f ~ 1/x near 0."""

    pole: Callable[[complex], complex]
    regular: Callable = field(default=_one)

    def __call__(self, a: Sequence[complex], b: Sequence[complex]) -> complex:
        out = complex(self.regular(tuple(a), tuple(b)))
        for ai in a:
            for bj in b:
                out *= self.pole(ai - bj)
        return out


@dataclass(frozen=True)
class SymmetricKernel:
    """G(a) = F(a) * prod over pairs f(a_i + a_j), diagonal optional."""

    pole: Callable[[complex], complex]
    regular: Callable = field(default=_one)
    include_diagonal: bool = True

    def __call__(self, a: Sequence[complex]) -> complex:
        out = complex(self.regular(tuple(a)))
        k = len(a)
        for i in range(k):
            start = i if self.include_diagonal else i + 1
            for j in range(start, k):
                out *= self.pole(a[i] + a[j])
        return out


@dataclass(frozen=True)
class LemmaCheckResult:
    lhs: complex
    rhs: complex

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


def _vandermonde_tuple(z: Sequence[complex]) -> complex:
    out = 1.0 + 0j
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            out *= z[j] - z[i]
    return out


def lemma_unitary_check(kernel: BipartiteKernel, u: Sequence[complex], m: int,
                        cfg: ContourConfig | None = None) -> LemmaCheckResult:
    """Block-ordered permutation sum of G vs the n-fold contour integral.

    lhs = sum over block-increasing sigma of G(u_left; u_right);
    rhs = (-1)^{n(n-1)/2} / (m! (n-m)!) * (2 pi i)^{-n} * contour integral
    of G(z_1..z_m; z_{m+1}..z_n) Delta(z)^2 / prod_{i,j}(z_i - u_j).
    """
    assert_unit_residue(kernel.pole)
    u = [complex(x) for x in u]
    n = len(u)
    lhs = 0j
    for split in enumerate_split_permutations(n, m):
        a = tuple(u[i - 1] for i in split.left)
        b = tuple(u[i - 1] for i in split.right)
        lhs += kernel(a, b)

    def integrand(*z: complex) -> complex:
        val = kernel(z[:m], z[m:]) * _vandermonde_tuple(z) ** 2
        den = 1.0 + 0j
        for zi in z:
            for uj in u:
                den *= zi - uj
        return val / den

    pref = (-1) ** (n * (n - 1) // 2) / (math.factorial(m) * math.factorial(n - m))
    rhs = pref * circular_integral(n, integrand, cfg, enclosed_points=u)
    return LemmaCheckResult(lhs, rhs)


def lemma_sym_check(kernel: SymmetricKernel, alphas: Sequence[complex], variant: str,
                    cfg: ContourConfig | None = None) -> LemmaCheckResult:
    """Sign-vector sum of G vs the k-fold contour integral enclosing +-alpha.

    variant "plain":  lhs = sum_eps G(eps * alpha), integral numerator prod z_j;
    variant "signed": lhs = sum_eps (prod eps) G(eps * alpha), numerator prod alpha_j.
    """
    if variant not in ("plain", "signed"):
        raise ValueError("variant must be 'plain' or 'signed'")
    assert_unit_residue(kernel.pole)
    al = [complex(x) for x in alphas]
    k = len(al)

    lhs = 0j
    for mask in range(2 ** k):
        eps = [1 - 2 * ((mask >> j) & 1) for j in range(k)]
        weight = np.prod(eps) if variant == "signed" else 1
        lhs += weight * kernel(tuple(e * a for e, a in zip(eps, al)))

    alpha_prod = np.prod(al) if k else 1.0 + 0j

    def integrand(*z: complex) -> complex:
        val = kernel(z)
        for i in range(k):
            for j in range(i + 1, k):
                val *= (z[j] ** 2 - z[i] ** 2) ** 2
        val *= alpha_prod if variant == "signed" else np.prod(z)
        for zi in z:
            for aj in al:
                val /= (zi - aj) * (zi + aj)
        return val

    enclosed = al + [-a for a in al]
    pref = (-1) ** (k * (k - 1) // 2) * 2 ** k / math.factorial(k)
    rhs = pref * circular_integral(k, integrand, cfg, enclosed_points=enclosed)
    return LemmaCheckResult(lhs, rhs)
