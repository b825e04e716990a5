"""Meta-analytic functions: exp-factor times a polynomial in conj(z).

A function w is meta-analytic of order n for the coefficient A when
(d/d conj(z) - A)^n w = 0.  Every such w factors as e^{s} * F where s is an
antiderivative of A in the conj(z) direction (a similarity factor) and F is
poly-analytic: F = sum_k conj(z)^k f_k(z) with each f_k holomorphic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .boundary import BoundaryDistribution, HoloSeries
from .disk import PolarGrid
from .errors import IllConditioned, NonFinite, ProductNotIdentity, StencilOutsideDisk
from .integral import BivarPoly, SimilarityFactor


def _carray(z):
    if hasattr(z, "z"):
        z = z.z
    return np.asarray(z, dtype=complex)


@dataclass(frozen=True)
class PolyAnalytic:
    """sum_{k < order} conj(z)^k parts[k](z) with holomorphic parts."""

    parts: tuple[HoloSeries, ...]

    def __post_init__(self):
        parts = tuple(self.parts) or (HoloSeries.zero(),)
        object.__setattr__(self, "parts", parts)

    @classmethod
    def zero(cls) -> "PolyAnalytic":
        return cls((HoloSeries.zero(),))

    @classmethod
    def from_holo(cls, h: HoloSeries) -> "PolyAnalytic":
        return cls((h,))

    @classmethod
    def constant(cls, c) -> "PolyAnalytic":
        return cls((HoloSeries.constant(c),))

    @property
    def order(self) -> int:
        return len(self.parts)

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.parts)

    def __call__(self, z):
        arr = _carray(z)
        zbar = np.conjugate(arr)
        out = np.zeros(arr.shape, dtype=complex)
        power = np.ones(arr.shape, dtype=complex)
        for part in self.parts:
            out = out + power * part(arr)
            power = power * zbar
        if out.shape == ():
            return complex(out)
        return out

    def dbar(self) -> "PolyAnalytic":
        """Derivative in conj(z): drops the order by one."""
        if self.order == 1:
            return PolyAnalytic.zero()
        return PolyAnalytic(tuple(
            part.scale(k + 1) for k, part in enumerate(self.parts[1:])
        ))

    def shifted(self, count: int, scale=1.0) -> "PolyAnalytic":
        """scale * conj(z)^count * self."""
        pad = (HoloSeries.zero(),) * count
        return PolyAnalytic(pad + tuple(p.scale(scale) for p in self.parts))

    def __add__(self, other):
        if not isinstance(other, PolyAnalytic):
            return NotImplemented
        n = max(self.order, other.order)
        pad_a = self.parts + (HoloSeries.zero(),) * (n - self.order)
        pad_b = other.parts + (HoloSeries.zero(),) * (n - other.order)
        return PolyAnalytic(tuple(a + b for a, b in zip(pad_a, pad_b)))

    def scale(self, c) -> "PolyAnalytic":
        return PolyAnalytic(tuple(p.scale(c) for p in self.parts))

    def to_bivar(self) -> BivarPoly:
        terms = {}
        for k, part in enumerate(self.parts):
            for m, a in enumerate(part.coeffs):
                if a != 0:
                    terms[(m, k)] = terms.get((m, k), 0j) + a
        return BivarPoly(terms)

    @classmethod
    def from_bivar(cls, poly: BivarPoly) -> "PolyAnalytic":
        if poly.is_zero:
            return cls.zero()
        top = max(k for (_, k) in poly.terms)
        parts = []
        for k in range(top + 1):
            ms = [m for (m, kk) in poly.terms if kk == k]
            coeffs = [0j] * (max(ms) + 1 if ms else 1)
            for m in ms:
                coeffs[m] = poly.coefficient(m, k)
            parts.append(HoloSeries(tuple(coeffs)))
        return cls(tuple(parts))

    def boundary_distribution(self) -> BoundaryDistribution:
        """On |z| = 1, conj(z)^k z^m = e^{i(m-k)theta}; collect by frequency."""
        freq: dict[int, complex] = {}
        for k, part in enumerate(self.parts):
            for m, a in enumerate(part.coeffs):
                if a != 0:
                    q = m - k
                    freq[q] = freq.get(q, 0j) + a
        return BoundaryDistribution(freq)

    def max_coeff(self) -> float:
        return max((max(abs(c) for c in p.coeffs) for p in self.parts), default=0.0)


@dataclass(frozen=True)
class MetaExpr:
    """w = e^{factor} * poly; closed under both derivative flavors used here."""

    factor: SimilarityFactor
    poly: PolyAnalytic

    @property
    def coefficient(self) -> BivarPoly:
        return self.factor.source

    @property
    def order(self) -> int:
        return self.poly.order

    def __call__(self, z):
        arr = _carray(z)
        out = np.exp(self.factor.value(arr)) * self.poly(arr)
        if np.ndim(out) == 0:
            return complex(out)
        return out

    def dbar_shift(self) -> "MetaExpr":
        """(d/d conj(z) - A) w = e^{s} * (d/d conj(z)) F."""
        return MetaExpr(self.factor, self.poly.dbar())

    def dbar(self) -> "MetaExpr":
        """Plain d/d conj(z): the product rule brings the coefficient back in."""
        f_bv = self.poly.to_bivar()
        return MetaExpr(
            self.factor,
            PolyAnalytic.from_bivar(f_bv.dbar() + self.coefficient * f_bv),
        )

    def dbar_shift_power(self, k: int) -> "MetaExpr":
        out = self
        for _ in range(k):
            out = out.dbar_shift()
        return out

    def dbar_stack(self, n: int) -> tuple["MetaExpr", ...]:
        """(d/d conj(z) - A)^k w for k = 0..n-1."""
        stack = [self]
        for _ in range(n - 1):
            stack.append(stack[-1].dbar_shift())
        return tuple(stack)

    def exact_dbar(self, z):
        return self.dbar()(z)


def meta_eval(w, z):
    """Evaluate w at a point or array; accepts DiskPoint, complex, or ndarray."""
    return w(_carray(z) if not np.ndim(z) else np.asarray(z, dtype=complex))


def dbar_shift(w: MetaExpr) -> MetaExpr:
    return w.dbar_shift()


def derivative_stack(w: MetaExpr, n: int) -> tuple[MetaExpr, ...]:
    """Plain conj(z)-derivatives d^k w for k = 0..n-1 (product rule applied)."""
    stack = [w]
    for _ in range(n - 1):
        stack.append(stack[-1].dbar())
    return tuple(stack)


class TriangularOperatorMatrix:
    """Lower unitriangular matrix of polynomial entries acting on derivative stacks.

    Row k expresses the plain derivative d^k (e^s F) as
    e^s * sum_j entries[k][j] d^j F.  The inverse (same shape) recovers the
    shifted derivatives from the plain ones.
    """

    def __init__(self, entries):
        rows = tuple(tuple(row) for row in entries)
        for k, row in enumerate(rows):
            if len(row) != k + 1:
                raise ValueError("row %d must have %d entries" % (k, k + 1))
        self.entries = rows

    @property
    def size(self) -> int:
        return len(self.entries)

    def entry(self, k: int, j: int) -> BivarPoly:
        if j > k:
            return BivarPoly.zero()
        return self.entries[k][j]

    def __matmul__(self, other: "TriangularOperatorMatrix"):
        if self.size != other.size:
            raise ValueError("size mismatch")
        rows = []
        for k in range(self.size):
            row = []
            for j in range(k + 1):
                acc = BivarPoly.zero()
                for l in range(j, k + 1):
                    acc = acc + self.entry(k, l) * other.entry(l, j)
                row.append(acc)
            rows.append(tuple(row))
        return TriangularOperatorMatrix(rows)

    def deviation_from_identity(self) -> float:
        worst = 0.0
        one = BivarPoly.constant(1.0)
        for k in range(self.size):
            for j in range(k + 1):
                gap = self.entry(k, j) - (one if j == k else BivarPoly.zero())
                worst = max(worst, gap.max_coeff())
        return worst

    @cached_property
    def inverse(self) -> "TriangularOperatorMatrix":
        return invert_unitriangular(self)


def derivative_matrix(coeff: BivarPoly, n: int) -> TriangularOperatorMatrix:
    """Rows M[k] with d^k (e^s F) = e^s sum_j M[k][j] d^j F, built by recurrence.

    M[0][0] = 1 and M[k+1][j] = dbar M[k][j] + A * M[k][j] + M[k][j-1].
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rows = [(BivarPoly.constant(1.0),)]
    for k in range(n - 1):
        prev = rows[k]
        row = []
        for j in range(k + 2):
            acc = BivarPoly.zero()
            if j <= k:
                acc = acc + prev[j].dbar() + coeff * prev[j]
            if j >= 1:
                acc = acc + prev[j - 1]
            row.append(acc)
        rows.append(tuple(row))
    return TriangularOperatorMatrix(rows)


def invert_unitriangular(matrix: TriangularOperatorMatrix,
                         tol: float = 1e-12) -> TriangularOperatorMatrix:
    """Forward substitution; both products are checked against the identity."""
    n = matrix.size
    rows: list[tuple[BivarPoly, ...]] = []
    for k in range(n):
        row = []
        for j in range(k):
            acc = BivarPoly.zero()
            for l in range(j, k):
                acc = acc + matrix.entry(k, l) * rows[l][j]
            row.append(acc.scale(-1.0))
        row.append(BivarPoly.constant(1.0))
        rows.append(tuple(row))
    inverse = TriangularOperatorMatrix(rows)
    left = (inverse @ matrix).deviation_from_identity()
    right = (matrix @ inverse).deviation_from_identity()
    if max(left, right) > tol:
        raise ProductNotIdentity(
            f"inverse check failed: deviations {left:.3e} (left), {right:.3e} (right)"
        )
    return inverse


def pde_residual(w, coeff: BivarPoly, n: int, grid: PolarGrid | None = None,
                 h: float | None = None) -> float:
    """max over the grid of |(d/d conj(z) - A)^n w|.

    For a MetaExpr built from the same coefficient the operator is applied
    exactly and the residual of a true solution is 0.0 by construction.  For
    anything else the operator power is formed on an offset lattice with
    central differences; the lattice must stay inside the disk.
    """
    grid = grid or PolarGrid.mesh()
    pts = grid.points().ravel()

    if isinstance(w, MetaExpr) and isinstance(coeff, BivarPoly) \
            and w.coefficient.almost_equal(coeff, 1e-12 * max(1.0, coeff.max_coeff())):
        out = w.dbar_shift_power(n)
        if out.poly.is_zero:
            return 0.0
        vals = out(pts)
        return float(np.max(np.abs(vals)))

    if h is None:
        h = max(1e-4, float(np.finfo(float).eps) ** (1.0 / (n + 2)))
    if np.max(np.abs(pts)) + 2 * n * h >= 1.0:
        raise StencilOutsideDisk(
            f"difference lattice of step {h} around the grid leaves the disk"
        )
    level = {
        (a, b): np.asarray(w(pts + (a + 1j * b) * h), dtype=complex)
        for a in range(-n, n + 1)
        for b in range(-n, n + 1)
        if abs(a) + abs(b) <= n
    }
    for m in range(n):
        reach = n - m - 1
        nxt = {}
        for a in range(-reach, reach + 1):
            for b in range(-reach, reach + 1):
                if abs(a) + abs(b) > reach:
                    continue
                diff = (
                    level[(a + 1, b)] - level[(a - 1, b)]
                    + 1j * (level[(a, b + 1)] - level[(a, b - 1)])
                ) / (4.0 * h)
                here = pts + (a + 1j * b) * h
                nxt[(a, b)] = diff - np.asarray(coeff(here), dtype=complex) * level[(a, b)]
        level = nxt
    vals = level[(0, 0)]
    if not np.all(np.isfinite(vals)):
        raise NonFinite("difference scheme produced non-finite values")
    return float(np.max(np.abs(vals)))


@dataclass(frozen=True)
class DecompositionFit:
    """Least-squares poly-analytic fit with its sampling residual."""

    poly: PolyAnalytic
    residual: float
    condition: float


# Default collocation rings for decomposition when the caller has a function
# rather than measured samples.  Spread keeps the radial Vandermonde blocks
# well conditioned.
DECOMPOSE_RADII = (0.3, 0.5, 0.7, 0.9)


def decompose_samples(fn, n_angular: int = 64) -> PolarGrid:
    """Sample fn on the default collocation rings, ready for poly_decompose."""
    grid = PolarGrid.rings(np.array(DECOMPOSE_RADII), n_angular)
    return grid.with_values(np.asarray(fn(grid.points()), dtype=complex))


def poly_decompose(samples: PolarGrid, n: int, degree: int = 16,
                   cond_limit: float = 1e10) -> DecompositionFit:
    """Recover holomorphic parts f_0..f_{n-1} from point values on a grid.

    Fits sum_k conj(z)^k sum_m a_{k,m} z^m by least squares over the grid
    values.  Needs at least twice as many samples as unknowns; raises
    IllConditioned when the normal-equations condition number passes
    ``cond_limit`` (nearly coincident radii do this).
    """
    if samples.values is None:
        raise ValueError("samples grid carries no values")
    if n < 1:
        raise ValueError("n must be at least 1")
    pts = samples.points().ravel()
    vals = np.asarray(samples.values, dtype=complex).ravel()
    unknowns = n * (degree + 1)
    if pts.size < 2 * unknowns:
        raise ValueError(
            f"{pts.size} samples cannot determine {unknowns} coefficients "
            "with margin; supply a denser grid or lower the degree"
        )
    zbar = np.conjugate(pts)
    cols = []
    for k in range(n):
        zk = zbar ** k
        power = np.ones_like(pts)
        for _ in range(degree + 1):
            cols.append(zk * power)
            power = power * pts
    design = np.stack(cols, axis=1)
    sol, _, _, sv = np.linalg.lstsq(design, vals, rcond=None)
    condition = float((sv[0] / sv[-1]) ** 2) if sv[-1] > 0 else math.inf
    if condition > cond_limit:
        raise IllConditioned(
            f"normal equations condition {condition:.3e} exceeds {cond_limit:.1e}"
        )
    parts = []
    for k in range(n):
        block = sol[k * (degree + 1):(k + 1) * (degree + 1)]
        parts.append(HoloSeries(tuple(block)).trimmed())
    poly = PolyAnalytic(tuple(parts))
    residual = float(np.max(np.abs(design @ sol - vals)))
    return DecompositionFit(poly=poly, residual=residual, condition=condition)
