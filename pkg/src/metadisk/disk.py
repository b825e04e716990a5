"""Geometry, differentiation, and quadrature on the open unit disk.

Everything here treats functions as plain callables ``z -> value`` where ``z``
may be a complex scalar or a numpy array of complex points; callables are
expected to broadcast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonConvergent, NonFinite, StencilOutsideDisk

TWO_PI = 2.0 * math.pi


def as_complex(z) -> complex:
    """Coerce a DiskPoint or any complex-like value to a plain complex."""
    if isinstance(z, DiskPoint):
        return z.z
    return complex(z)


@dataclass(frozen=True)
class DiskPoint:
    """A point of the closed unit disk; boundary points are flagged explicitly.

    Interior points must satisfy r < 1.  Boundary points are constructed with
    r = 1 exactly via :meth:`on_circle` and carry ``boundary=True``.
    """

    re: float
    im: float
    boundary: bool = False

    def __post_init__(self):
        r = math.hypot(self.re, self.im)
        if self.boundary:
            if abs(r - 1.0) > 1e-12:
                raise ValueError(f"boundary point must have radius 1, got {r!r}")
        elif r >= 1.0:
            raise ValueError(f"interior point must have radius < 1, got {r!r}")

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        return cls(float(z.real), float(z.imag))

    @classmethod
    def on_circle(cls, theta: float) -> "DiskPoint":
        return cls(math.cos(theta), math.sin(theta), boundary=True)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    @property
    def radius(self) -> float:
        return math.hypot(self.re, self.im)

    @property
    def angle(self) -> float:
        return math.atan2(self.im, self.re) % TWO_PI


@dataclass(frozen=True)
class RadialSequence:
    """Radii r_j = 1 - 2^(-j-1), j = 0..depth, accumulating at the boundary.

    The geometric gaps 1 - r_j halve at every step, which is what the
    radial-limit extrapolations rely on.
    """

    depth: int = 16

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be at least 1")

    @property
    def radii(self) -> np.ndarray:
        j = np.arange(self.depth + 1)
        return 1.0 - 0.5 ** (j + 1.0)

    @property
    def gaps(self) -> np.ndarray:
        """The distances 1 - r_j to the boundary."""
        j = np.arange(self.depth + 1)
        return 0.5 ** (j + 1.0)

    def __len__(self) -> int:
        return self.depth + 1

    def __iter__(self):
        return iter(self.radii)


@dataclass(frozen=True, eq=False)
class PolarGrid:
    """A polar tensor grid with optional complex samples attached.

    Radii are strictly increasing inside (0, 1); the angular count is even and
    at least 8.  ``values``, when present, has shape (len(radii), len(angles)).
    """

    radii: np.ndarray
    angles: np.ndarray
    values: np.ndarray | None = None

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        angles = np.asarray(self.angles, dtype=float)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "angles", angles)
        if radii.ndim != 1 or angles.ndim != 1:
            raise ValueError("radii and angles must be one-dimensional")
        if np.any(radii <= 0.0) or np.any(radii >= 1.0):
            raise ValueError("radii must lie strictly inside (0, 1)")
        if np.any(np.diff(radii) <= 0.0):
            raise ValueError("radii must be strictly increasing")
        n_theta = angles.size
        if n_theta < 8 or n_theta % 2 != 0:
            raise ValueError("angular count must be even and at least 8")
        if self.values is not None:
            vals = np.asarray(self.values, dtype=complex)
            object.__setattr__(self, "values", vals)
            if vals.shape != (radii.size, n_theta):
                raise ValueError(
                    f"values shape {vals.shape} does not match grid "
                    f"({radii.size}, {n_theta})"
                )

    @classmethod
    def mesh(cls, n_radial: int = 32, n_angular: int = 64,
             r_min: float = 0.05, r_max: float = 0.95) -> "PolarGrid":
        """An evenly spaced sampling mesh with no values attached."""
        radii = np.linspace(r_min, r_max, n_radial)
        angles = np.arange(n_angular) * (TWO_PI / n_angular)
        return cls(radii, angles)

    @classmethod
    def rings(cls, radii, n_angular: int = 64) -> "PolarGrid":
        angles = np.arange(n_angular) * (TWO_PI / n_angular)
        return cls(np.asarray(sorted(radii), dtype=float), angles)

    def points(self) -> np.ndarray:
        """Complex nodes, shape (n_radial, n_angular)."""
        return self.radii[:, None] * np.exp(1j * self.angles[None, :])

    def with_values(self, values: np.ndarray) -> "PolarGrid":
        return PolarGrid(self.radii, self.angles, values)


def wirtinger_dbar(f, z, h: float = 1e-4, richardson: bool = False) -> complex:
    """d/d(conj z) of ``f`` at ``z``: (f_x + i f_y) / 2 by central differences.

    Objects exposing an ``exact_dbar`` method (meta-analytic expressions) are
    differentiated symbolically instead of numerically.

    Parameters
    ----------
    f : callable or object with ``exact_dbar``
    z : complex or DiskPoint, interior, at distance > 2h from the boundary
    h : stencil step
    richardson : combine steps h and h/2 for fourth-order accuracy

    Raises
    ------
    StencilOutsideDisk : the stencil would reach outside the disk.
    NonFinite : a stencil sample came back inf or NaN.
    """
    zc = as_complex(z)
    exact = getattr(f, "exact_dbar", None)
    if callable(exact):
        return complex(exact(zc))
    if abs(zc) + 2.0 * h >= 1.0:
        raise StencilOutsideDisk(f"point {zc} is within 2h={2 * h} of the boundary")

    def central(step: float) -> complex:
        samples = np.array(
            [f(zc + step), f(zc - step), f(zc + 1j * step), f(zc - 1j * step)],
            dtype=complex,
        )
        if not np.all(np.isfinite(samples)):
            raise NonFinite(f"non-finite sample in stencil at {zc}")
        fx = (samples[0] - samples[1]) / (2.0 * step)
        fy = (samples[2] - samples[3]) / (2.0 * step)
        return complex((fx + 1j * fy) / 2.0)

    d = central(h)
    if richardson:
        d_half = central(h / 2.0)
        d = (4.0 * d_half - d) / 3.0
    return d


@lru_cache(maxsize=32)
def _gauss_on_unit(n: int) -> tuple[np.ndarray, np.ndarray]:
    # Gauss-Legendre on (0, 1); nodes are strictly interior, so integrands are
    # never evaluated at the singular center or on the clipped boundary.
    t, w = np.polynomial.legendre.leggauss(n)
    return (t + 1.0) / 2.0, w / 2.0


def _polar_integral(g, center: complex, n_radial: int, n_angular: int) -> complex:
    phi = np.arange(n_angular) * (TWO_PI / n_angular)
    rays = np.exp(1j * phi)
    # distance from the center to the unit circle along each ray
    beta = (np.conjugate(center) * rays).real
    reach = -beta + np.sqrt(beta * beta + 1.0 - abs(center) ** 2)
    x, wx = _gauss_on_unit(n_radial)
    rho = x[:, None] * reach[None, :]
    nodes = center + rho * rays[None, :]
    vals = np.asarray(g(nodes), dtype=complex)
    # area element rho drho dphi; the factor rho tames 1/|zeta - center|
    weights = (wx[:, None] * reach[None, :]) * rho * (TWO_PI / n_angular)
    return complex(np.sum(vals * weights))


def disk_quadrature(g, singularity=None, n_radial: int = 512,
                    n_angular: int = 512, tol: float | None = None) -> complex:
    """Integral of ``g`` over the unit disk with respect to area measure.

    When ``singularity`` is given, the polar coordinates are centered there so
    the Jacobian cancels an integrable 1/|zeta - singularity| factor; rays are
    clipped to the disk.  With ``tol`` set, the result is compared against a
    half-resolution pass and NonConvergent is raised if the two differ by more
    than ``tol``.

    Parameters
    ----------
    g : callable, must broadcast over complex arrays
    singularity : interior point used as the polar center, default the origin
    n_radial, n_angular : node counts (Gauss-Legendre radial, uniform angular)
    tol : optional absolute refinement tolerance
    """
    center = 0j if singularity is None else as_complex(singularity)
    if abs(center) >= 1.0:
        raise ValueError("singularity must be an interior point")
    fine = _polar_integral(g, center, n_radial, n_angular)
    if tol is not None:
        coarse = _polar_integral(
            g, center, max(8, n_radial // 2), max(8, n_angular // 2)
        )
        if not (abs(fine - coarse) <= tol):   # also trips on NaN
            raise NonConvergent(
                f"refinement gap {abs(fine - coarse):.3e} exceeds tol {tol:.3e}"
            )
    return fine
