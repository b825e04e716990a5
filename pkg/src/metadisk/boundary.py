"""Boundary values in the sense of distributions on the unit circle.

A disk function has the distribution u as boundary value when
Int f(r e^{i theta}) phi(theta) d theta -> <u, phi> as r -> 1 for every test
function phi; all pairings here use the plain d theta measure with no
conjugation and no 2 pi normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .disk import RadialSequence, as_complex
from .errors import Divergent, NonFinite

TWO_PI = 2.0 * math.pi
DEFAULT_N_THETA = 256


@dataclass(frozen=True)
class HoloSeries:
    """Polynomial truncation of a holomorphic function, coefficients a_0..a_N."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        cs = tuple(complex(c) for c in self.coeffs) or (0j,)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def constant(cls, c) -> "HoloSeries":
        return cls((complex(c),))

    @classmethod
    def zero(cls) -> "HoloSeries":
        return cls((0j,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __call__(self, z):
        arr = np.asarray(z, dtype=complex)
        out = npoly.polyval(arr, np.asarray(self.coeffs, dtype=complex))
        if np.ndim(out) == 0:
            return complex(out)
        return out

    def derivative(self) -> "HoloSeries":
        if len(self.coeffs) == 1:
            return HoloSeries.zero()
        return HoloSeries(tuple((j + 1) * c for j, c in enumerate(self.coeffs[1:])))

    def scale(self, c) -> "HoloSeries":
        c = complex(c)
        return HoloSeries(tuple(c * a for a in self.coeffs))

    def __add__(self, other):
        if not isinstance(other, HoloSeries):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0j,) * (n - len(self.coeffs))
        b = other.coeffs + (0j,) * (n - len(other.coeffs))
        return HoloSeries(tuple(x + y for x, y in zip(a, b)))

    def boundary(self) -> "BoundaryDistribution":
        """Boundary distribution: frequency n carries the coefficient a_n."""
        return BoundaryDistribution({n: c for n, c in enumerate(self.coeffs) if c != 0})

    def trimmed(self) -> "HoloSeries":
        cs = list(self.coeffs)
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        return HoloSeries(tuple(cs))


class BoundaryDistribution:
    """Finite Fourier data c_n, n in [-M, M]: the distribution sum c_n e^{i n theta}.

    Pairing with a trig polynomial phi = sum b_m e^{i m theta} is
    <u, phi> = sum_n c_n Int e^{i n theta} phi d theta = 2 pi sum_n c_n b_{-n}.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs=None):
        data = {}
        if coeffs:
            for n, c in dict(coeffs).items():
                c = complex(c)
                if c != 0:
                    data[int(n)] = c
        self._coeffs = data

    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self._coeffs)

    @property
    def max_frequency(self) -> int:
        return max((abs(n) for n in self._coeffs), default=0)

    def coefficient(self, n: int) -> complex:
        return self._coeffs.get(n, 0j)

    def pair(self, phi: "TestFunction") -> complex:
        return TWO_PI * sum(
            (c * phi.coefficient(-n) for n, c in sorted(self._coeffs.items())), 0j
        )

    def re_part(self) -> "BoundaryDistribution":
        freqs = set(self._coeffs) | {-n for n in self._coeffs}
        return BoundaryDistribution({
            n: (self.coefficient(n) + np.conjugate(self.coefficient(-n))) / 2.0
            for n in freqs
        })

    def im_part(self) -> "BoundaryDistribution":
        freqs = set(self._coeffs) | {-n for n in self._coeffs}
        return BoundaryDistribution({
            n: (self.coefficient(n) - np.conjugate(self.coefficient(-n))) / 2j
            for n in freqs
        })

    def __repr__(self):
        return f"BoundaryDistribution({self._coeffs!r})"


class TestFunction:
    """Trigonometric polynomial phi(theta) = sum b_m e^{i m theta}."""

    __slots__ = ("_coeffs", "label")
    __test__ = False  # not a pytest case despite the name

    def __init__(self, coeffs=None, label: str = ""):
        data = {}
        if coeffs:
            for m, c in dict(coeffs).items():
                c = complex(c)
                if c != 0:
                    data[int(m)] = c
        self._coeffs = data
        self.label = label or f"trig{sorted(data)}"

    @classmethod
    def constant(cls, value=1.0) -> "TestFunction":
        return cls({0: value}, label="1")

    @classmethod
    def harmonic(cls, m: int) -> "TestFunction":
        return cls({m: 1.0}, label=f"harmonic[{m}]")

    @classmethod
    def cosine(cls, m: int) -> "TestFunction":
        return cls({m: 0.5, -m: 0.5}, label=f"cos[{m}]")

    @classmethod
    def sine(cls, m: int) -> "TestFunction":
        return cls({m: -0.5j, -m: 0.5j}, label=f"sin[{m}]")

    @classmethod
    def poisson_kernel(cls, r: float, theta: float, max_freq: int) -> "TestFunction":
        """Truncation of P_r(theta - .) = sum r^|m| e^{i m (theta - .)}."""
        return cls(
            {-m: r ** abs(m) * np.exp(1j * m * theta)
             for m in range(-max_freq, max_freq + 1)},
            label=f"poisson[r={r}]",
        )

    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self._coeffs)

    def coefficient(self, m: int) -> complex:
        return self._coeffs.get(m, 0j)

    @property
    def is_real(self) -> bool:
        return all(
            self.coefficient(-m) == np.conjugate(c) for m, c in self._coeffs.items()
        )

    def __call__(self, theta):
        arr = np.asarray(theta, dtype=float)
        out = np.zeros(arr.shape, dtype=complex)
        for m, c in sorted(self._coeffs.items()):
            out = out + c * np.exp(1j * m * arr)
        if out.shape == ():
            return complex(out)
        return out


class CircleSampler:
    """Caches samples of a disk function on circles over a fixed angular grid.

    Passing the same sampler to several pairings avoids re-evaluating the
    function radius by radius.
    """

    def __init__(self, fn, n_theta: int = DEFAULT_N_THETA):
        self.n_theta = n_theta
        self.theta = np.arange(n_theta) * (TWO_PI / n_theta)
        self._ring = np.exp(1j * self.theta)
        self._fn = fn
        self._cache: dict[float, np.ndarray] = {}

    def circle(self, r: float) -> np.ndarray:
        key = float(r)
        if key not in self._cache:
            vals = np.asarray(self._fn(key * self._ring), dtype=complex)
            self._cache[key] = np.broadcast_to(vals, self.theta.shape)
        return self._cache[key]


@dataclass(frozen=True)
class PairingResult:
    """Extrapolated boundary pairing with its raw tail residual."""

    value: complex
    residual: float
    stabilized: bool

    def __complex__(self):
        return self.value


def _circle_integrals(f, phi, rs: RadialSequence, n_theta: int) -> np.ndarray:
    sampler = f if isinstance(f, CircleSampler) else CircleSampler(f, n_theta)
    phi_vals = phi(sampler.theta) if callable(phi) else np.asarray(phi, dtype=complex)
    weight = TWO_PI / sampler.n_theta
    return np.array([
        weight * np.sum(sampler.circle(r) * phi_vals) for r in rs.radii
    ])


def pairing_limit(f, phi, rs: RadialSequence | None = None,
                  n_theta: int = DEFAULT_N_THETA,
                  stabilize_tol: float = 1e-9) -> PairingResult:
    """Distributional pairing lim_{r->1} Int f(r e^{i theta}) phi(theta) d theta.

    Circle integrals use the trapezoid rule (spectrally accurate for periodic
    integrands); the limit is taken by iterated Richardson extrapolation in the
    gap 1 - r, which halves along the radial sequence.

    Raises Divergent when the raw integrals grow without the extrapolant
    stabilizing to ``stabilize_tol``.
    """
    rs = rs or RadialSequence()
    raw = _circle_integrals(f, phi, rs, n_theta)
    if not np.all(np.isfinite(raw)):
        raise Divergent("circle integrals are not finite near the boundary")
    residual = float(abs(raw[-1] - raw[-2])) if len(raw) > 1 else 0.0

    # Richardson in eps = 1 - r: each column removes one power of eps.
    row = list(raw)
    previous_best = row[-1]
    best = row[-1]
    stabilized = False
    for m in range(1, len(raw)):
        factor = 2.0 ** m
        row = [
            (factor * row[j + 1] - row[j]) / (factor - 1.0)
            for j in range(len(row) - 1)
        ]
        previous_best, best = best, row[-1]
        scale = max(1.0, abs(best))
        stabilized = abs(best - previous_best) <= stabilize_tol * scale
    if not stabilized:
        mags = np.abs(raw)
        growing = len(mags) > 4 and np.all(np.diff(mags[-4:]) > 0) and (
            mags[-1] > 2.0 * mags[-5] + 1e-12
        )
        if growing:
            raise Divergent(
                f"pairing integrals grow (|I| reaches {mags[-1]:.3e}) "
                "without the extrapolant stabilizing"
            )
    return PairingResult(value=complex(best), residual=residual,
                         stabilized=bool(stabilized))


def poisson_extend(u: BoundaryDistribution, z):
    """Harmonic extension sum c_n r^|n| e^{i n theta} of finite Fourier data."""
    arr = np.asarray(as_complex(z) if np.ndim(z) == 0 else z, dtype=complex)
    r = np.abs(arr)
    theta = np.angle(arr)
    out = np.zeros(arr.shape, dtype=complex)
    for n, c in sorted(u.coeffs.items()):
        out = out + c * r ** abs(n) * np.exp(1j * n * theta)
    if out.shape == ():
        return complex(out)
    return out


def growth_order(f, rs: RadialSequence | None = None,
                 n_theta: int = DEFAULT_N_THETA) -> float:
    """Least-squares slope of log sup_theta |f| against -log(1 - r), clamped at 0.

    Estimates the power alpha in |f| <= C / (1 - r)^alpha along the radial
    sequence.  Raises NonFinite if sampling overflows.
    """
    rs = rs or RadialSequence()
    theta = np.arange(n_theta) * (TWO_PI / n_theta)
    ring = np.exp(1j * theta)
    sups = np.array([np.max(np.abs(np.asarray(f(r * ring)))) for r in rs.radii])
    if not np.all(np.isfinite(sups)):
        raise NonFinite("function overflowed while sampling radial suprema")
    x = -np.log(rs.gaps)
    y = np.log(np.maximum(sups, 1e-300))
    slope = np.polyfit(x, y, 1)[0]
    return float(max(slope, 0.0))


@dataclass(frozen=True)
class HardyNormEstimate:
    """A norm value together with an unboundedness flag.

    ``unbounded`` is set when the per-radius means were still growing by more
    than five percent between the last two radii, i.e. the supremum had not
    saturated inside the disk.
    """

    value: float
    unbounded: bool

    def __float__(self):
        return self.value


def hardy_norm(f, p: float, rs: RadialSequence | None = None,
               n_theta: int = DEFAULT_N_THETA) -> HardyNormEstimate:
    """sup over the radial sequence of (Int |f(r e^{i theta})|^p d theta)^(1/p)."""
    if p <= 0:
        raise ValueError("p must be positive")
    rs = rs or RadialSequence()
    theta = np.arange(n_theta) * (TWO_PI / n_theta)
    ring = np.exp(1j * theta)
    weight = TWO_PI / n_theta
    means = []
    for r in rs.radii:
        vals = np.abs(np.asarray(f(r * ring), dtype=complex))
        integral = weight * np.sum(vals ** p)
        if not np.isfinite(integral):
            raise NonFinite(f"norm integrand overflowed at r={r}")
        means.append(integral ** (1.0 / p))
    means = np.array(means)
    unbounded = bool(means[-1] > 1.05 * means[-2])
    return HardyNormEstimate(value=float(np.max(means)), unbounded=unbounded)


def meta_hardy_norm(w, p: float, n: int, rs: RadialSequence | None = None,
                    n_theta: int = DEFAULT_N_THETA) -> HardyNormEstimate:
    """Sum of hardy_norm over the conj-z derivative stack of orders 0..n-1.

    The stack holds plain derivatives, not the coefficient-shifted ones:
    ``w`` must expose them exactly via a ``dbar`` method (meta-analytic
    expressions do).
    """
    stack = [w]
    for _ in range(n - 1):
        stack.append(stack[-1].dbar())
    parts = [hardy_norm(g, p, rs, n_theta) for g in stack]
    return HardyNormEstimate(
        value=float(sum(part.value for part in parts)),
        unbounded=any(part.unbounded for part in parts),
    )


def lp_boundary_convergence(f, boundary_values, p: float,
                            rs: RadialSequence | None = None,
                            n_theta: int = DEFAULT_N_THETA) -> np.ndarray:
    """Residuals Int |f(r_j e^{i theta}) - f_plus(e^{i theta})|^p d theta per radius.

    ``boundary_values`` is either an array of samples on the angular grid or a
    callable of theta evaluated on it.
    """
    rs = rs or RadialSequence()
    theta = np.arange(n_theta) * (TWO_PI / n_theta)
    ring = np.exp(1j * theta)
    if callable(boundary_values):
        plus = np.asarray(boundary_values(theta), dtype=complex)
    else:
        plus = np.asarray(boundary_values, dtype=complex)
    plus = np.broadcast_to(plus, theta.shape)
    weight = TWO_PI / n_theta
    out = []
    for r in rs.radii:
        gap = np.abs(np.asarray(f(r * ring), dtype=complex) - plus)
        out.append(weight * np.sum(gap ** p))
    return np.array(out)
