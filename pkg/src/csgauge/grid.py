"""Periodic 2D grid, spectral fields, and Fourier-multiplier operators.

Everything downstream (half-wave propagators, gauge-field solvers, null-form
machinery) is built on the objects in this module:

* ``Grid2D`` -- an ``n1 x n2`` periodic box ``[0, L)^2`` with frequency lattice
  ``xi = (2*pi/L) * k``, ``k in {-n/2+1, ..., n/2}`` (positive Nyquist).
* ``ScalarField`` / ``SpinorField`` / ``OneForm`` -- complex grid functions in
  either physical or spectral representation.
* multiplier operators: derivatives, |grad|, <grad> = (1 - Laplacian)^(1/2),
  the modified Riesz transforms R^mu_{+-} (symbol -1 for mu=0 and
  -+ xi_j/|xi| for mu=j), the low-frequency error operator <grad> - |grad|,
  Hodge decomposition of spatial 1-forms, and 2/3-rule dealiasing.

Conventions, fixed once here:

* forward FFT carries 1/(n1*n2) so Parseval holds with the plain grid sum:
  sum |f(x)|^2 = n1*n2 * sum |fhat(xi)|^2;
* Riesz symbols are set to 0 at xi = 0 (the symbol is undefined there; solver
  code tracks the zero mode explicitly);
* dealiasing zeroes every mode with |k_j| > n_j/3 per axis.

All operations are pure: they return new fields and never mutate inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

PHYSICAL = "physical"
SPECTRAL = "spectral"


class GridMismatchError(ValueError):
    """Two fields that must share a grid/representation do not."""


class MultiplierSingularityError(ValueError):
    """A multiplier symbol evaluated to a non-finite value on the lattice."""


class Grid2D:
    """Uniform periodic grid on ``[0, L) x [0, L)`` with even ``n1, n2 >= 8``."""

    def __init__(self, n1: int, n2: int, length: float):
        if n1 < 8 or n2 < 8 or n1 % 2 or n2 % 2:
            raise ValueError(f"grid sizes must be even and >= 8, got {n1} x {n2}")
        if not (length > 0):
            raise ValueError(f"box length must be positive, got {length}")
        self.n1 = int(n1)
        self.n2 = int(n2)
        self.length = float(length)

        # integer frequency indices, {-n/2+1, ..., n/2} in FFT storage order
        self.k1 = self._freq_indices(self.n1)
        self.k2 = self._freq_indices(self.n2)
        scale = 2.0 * np.pi / self.length
        self.xi1 = scale * self.k1[:, None] * np.ones((1, self.n2))
        self.xi2 = scale * np.ones((self.n1, 1)) * self.k2[None, :]
        self.xi_mag = np.hypot(self.xi1, self.xi2)
        self.xi_bracket = np.sqrt(1.0 + self.xi_mag**2)

        h1 = self.length / self.n1
        h2 = self.length / self.n2
        self.x1 = h1 * np.arange(self.n1)[:, None] * np.ones((1, self.n2))
        self.x2 = h2 * np.ones((self.n1, 1)) * np.arange(self.n2)[None, :]
        self.cell_area = h1 * h2

    @staticmethod
    def _freq_indices(n: int) -> np.ndarray:
        idx = np.arange(n)
        return np.where(idx <= n // 2, idx, idx - n)

    @property
    def size(self) -> int:
        return self.n1 * self.n2

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Grid2D) and self.n1 == other.n1
                and self.n2 == other.n2 and self.length == other.length)

    def __hash__(self) -> int:
        return hash((self.n1, self.n2, self.length))

    def __repr__(self) -> str:
        return f"Grid2D(n1={self.n1}, n2={self.n2}, length={self.length})"


def fft2(grid: Grid2D, values: np.ndarray) -> np.ndarray:
    """Forward transform over the last two axes, normalized by 1/(n1*n2)."""
    return np.fft.fft2(values, axes=(-2, -1)) / grid.size


def ifft2(grid: Grid2D, values: np.ndarray) -> np.ndarray:
    """Inverse of :func:`fft2`."""
    return np.fft.ifft2(values * grid.size, axes=(-2, -1))


@dataclass
class ScalarField:
    """A complex scalar grid function, tagged physical or spectral."""

    grid: Grid2D
    values: np.ndarray
    representation: str = PHYSICAL

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != self.grid.shape:
            raise GridMismatchError(
                f"field shape {self.values.shape} does not match grid {self.grid.shape}")
        if self.representation not in (PHYSICAL, SPECTRAL):
            raise ValueError(f"unknown representation {self.representation!r}")

    @classmethod
    def zeros(cls, grid: Grid2D, representation: str = PHYSICAL) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128), representation)

    def to_spectral(self) -> "ScalarField":
        if self.representation == SPECTRAL:
            return ScalarField(self.grid, self.values.copy(), SPECTRAL)
        return ScalarField(self.grid, fft2(self.grid, self.values), SPECTRAL)

    def to_physical(self) -> "ScalarField":
        if self.representation == PHYSICAL:
            return ScalarField(self.grid, self.values.copy(), PHYSICAL)
        return ScalarField(self.grid, ifft2(self.grid, self.values), PHYSICAL)

    def l2norm(self) -> float:
        """Plain-grid-sum L2 norm (Parseval-consistent across representations)."""
        s = float(np.sum(np.abs(self.values) ** 2))
        if self.representation == SPECTRAL:
            s *= self.grid.size
        return np.sqrt(s)

    def rms(self) -> float:
        return self.l2norm() / np.sqrt(self.grid.size)

    def integral_abs2(self) -> float:
        """Physical integral of |f|^2 over the box."""
        return self.rms() ** 2 * self.grid.length ** 2

    def _binary_check(self, other: "ScalarField"):
        if self.grid != other.grid or self.representation != other.representation:
            raise GridMismatchError("fields live on different grids or representations")

    def __add__(self, other: "ScalarField") -> "ScalarField":
        self._binary_check(other)
        return ScalarField(self.grid, self.values + other.values, self.representation)

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        self._binary_check(other)
        return ScalarField(self.grid, self.values - other.values, self.representation)

    def __mul__(self, scalar: complex) -> "ScalarField":
        return ScalarField(self.grid, self.values * scalar, self.representation)

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarField":
        return ScalarField(self.grid, -self.values, self.representation)


@dataclass
class SpinorField:
    """Two-component complex field; both components share grid and representation."""

    grid: Grid2D
    values: np.ndarray  # shape (2, n1, n2)
    representation: str = PHYSICAL

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (2,) + self.grid.shape:
            raise GridMismatchError(
                f"spinor shape {self.values.shape} does not match grid {self.grid.shape}")

    @classmethod
    def zeros(cls, grid: Grid2D, representation: str = PHYSICAL) -> "SpinorField":
        return cls(grid, np.zeros((2,) + grid.shape, dtype=np.complex128), representation)

    @classmethod
    def from_components(cls, c0: ScalarField, c1: ScalarField) -> "SpinorField":
        c0._binary_check(c1)
        return cls(c0.grid, np.stack([c0.values, c1.values]), c0.representation)

    def component(self, i: int) -> ScalarField:
        return ScalarField(self.grid, self.values[i].copy(), self.representation)

    def to_spectral(self) -> "SpinorField":
        if self.representation == SPECTRAL:
            return SpinorField(self.grid, self.values.copy(), SPECTRAL)
        return SpinorField(self.grid, fft2(self.grid, self.values), SPECTRAL)

    def to_physical(self) -> "SpinorField":
        if self.representation == PHYSICAL:
            return SpinorField(self.grid, self.values.copy(), PHYSICAL)
        return SpinorField(self.grid, ifft2(self.grid, self.values), PHYSICAL)

    def l2norm(self) -> float:
        s = float(np.sum(np.abs(self.values) ** 2))
        if self.representation == SPECTRAL:
            s *= self.grid.size
        return np.sqrt(s)

    def __add__(self, other: "SpinorField") -> "SpinorField":
        if self.grid != other.grid or self.representation != other.representation:
            raise GridMismatchError("spinors live on different grids or representations")
        return SpinorField(self.grid, self.values + other.values, self.representation)

    def __sub__(self, other: "SpinorField") -> "SpinorField":
        if self.grid != other.grid or self.representation != other.representation:
            raise GridMismatchError("spinors live on different grids or representations")
        return SpinorField(self.grid, self.values - other.values, self.representation)

    def __mul__(self, scalar: complex) -> "SpinorField":
        return SpinorField(self.grid, self.values * scalar, self.representation)

    __rmul__ = __mul__


@dataclass
class OneForm:
    """Real-valued connection 1-form (a_0, a_1, a_2) on a common grid."""

    a0: ScalarField
    a1: ScalarField
    a2: ScalarField

    def __post_init__(self):
        self.a0._binary_check(self.a1)
        self.a0._binary_check(self.a2)

    @property
    def grid(self) -> Grid2D:
        return self.a0.grid

    def components(self) -> tuple[ScalarField, ScalarField, ScalarField]:
        return (self.a0, self.a1, self.a2)

    def max_imag(self) -> float:
        """Largest imaginary part across components, in physical representation."""
        return max(float(np.max(np.abs(c.to_physical().values.imag)))
                   for c in self.components())


def inner(f: ScalarField, g: ScalarField) -> complex:
    """Grid inner product <f, g> = sum conj(f) g (physical grid sum)."""
    f._binary_check(g)
    s = complex(np.sum(np.conj(f.values) * g.values))
    if f.representation == SPECTRAL:
        s *= f.grid.size
    return s


# ---------------------------------------------------------------------------
# multiplier operators
# ---------------------------------------------------------------------------

def apply_multiplier(f: ScalarField, symbol: Callable[[np.ndarray, np.ndarray], np.ndarray]
                     ) -> ScalarField:
    """Apply a Fourier multiplier ``fhat(xi) -> symbol(xi) * fhat(xi)``.

    ``symbol`` is evaluated on the full frequency lattice and must be finite
    everywhere on it; the caller supplies any xi = 0 convention.  The input
    representation is preserved.
    """
    sym = np.asarray(symbol(f.grid.xi1, f.grid.xi2), dtype=np.complex128)
    sym = np.broadcast_to(sym, f.grid.shape)
    if not np.all(np.isfinite(sym)):
        raise MultiplierSingularityError(
            "multiplier symbol is non-finite on the frequency lattice "
            "(supply an explicit xi=0 convention)")
    out = f.to_spectral()
    out = ScalarField(f.grid, sym * out.values, SPECTRAL)
    return out if f.representation == SPECTRAL else out.to_physical()


def apply_symbol_array(f: ScalarField, sym: np.ndarray) -> ScalarField:
    """Like :func:`apply_multiplier` with a precomputed symbol array."""
    out = f.to_spectral()
    out = ScalarField(f.grid, sym * out.values, SPECTRAL)
    return out if f.representation == SPECTRAL else out.to_physical()


def derivative_symbol(grid: Grid2D, j: int) -> np.ndarray:
    if j == 1:
        return 1j * grid.xi1
    if j == 2:
        return 1j * grid.xi2
    raise ValueError(f"spatial index must be 1 or 2, got {j}")


def riesz_symbol(grid: Grid2D, mu: int, sign: int) -> np.ndarray:
    """Symbol of the modified Riesz transform R^mu_sign (upper index).

    R^0 = -1 for either sign; R^j has symbol ``-sign * xi_j / |xi|`` with the
    value 0 at xi = 0.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if mu == 0:
        return -np.ones(grid.shape)
    xi_j = grid.xi1 if mu == 1 else grid.xi2
    safe = np.where(grid.xi_mag == 0.0, 1.0, grid.xi_mag)
    sym = -sign * xi_j / safe
    return np.where(grid.xi_mag == 0.0, 0.0, sym)


def riesz_symbol_lower(grid: Grid2D, mu: int, sign: int) -> np.ndarray:
    """Symbol of R_{sign, mu} (lower index): equals R^0 for mu=0, -R^j for mu=j."""
    sym = riesz_symbol(grid, mu, sign)
    return sym if mu == 0 else -sym


def riesz(j: int, sign: int, f: ScalarField) -> ScalarField:
    """Modified Riesz transform R^j_sign of a scalar field (j = 1, 2)."""
    if j not in (1, 2):
        raise ValueError(f"riesz index must be 1 or 2, got {j}")
    return apply_symbol_array(f, riesz_symbol(f.grid, j, sign))


def abs_nabla(f: ScalarField) -> ScalarField:
    """|grad| = sqrt(-Laplacian), symbol |xi|."""
    return apply_symbol_array(f, f.grid.xi_mag)


def bracket_nabla(f: ScalarField) -> ScalarField:
    """<grad> = (1 - Laplacian)^(1/2), symbol (1 + |xi|^2)^(1/2)."""
    return apply_symbol_array(f, f.grid.xi_bracket)


def err_op_symbol(grid: Grid2D, mu: int) -> np.ndarray:
    """Symbol of the error operator: <xi> - |xi| for mu = 0, zero otherwise."""
    if mu == 0:
        return grid.xi_bracket - grid.xi_mag
    return np.zeros(grid.shape)


def err_op(mu: int, f: ScalarField) -> ScalarField:
    """Low-frequency error operator <grad> - |grad| (mu = 0; zero for mu = 1, 2)."""
    return apply_symbol_array(f, err_op_symbol(f.grid, mu))


def derivative(j: int, f: ScalarField) -> ScalarField:
    return apply_symbol_array(f, derivative_symbol(f.grid, j))


# ---------------------------------------------------------------------------
# Hodge decomposition
# ---------------------------------------------------------------------------

@dataclass
class HodgeParts:
    """Spatial 1-form split into divergence-free, curl-free, and mean parts."""

    df: tuple[ScalarField, ScalarField]
    cf: tuple[ScalarField, ScalarField]
    mean: tuple[complex, complex]


def hodge_decompose(a1: ScalarField, a2: ScalarField) -> HodgeParts:
    """Split (a1, a2) into df + cf + mean.

    The df part carries the curl (``div df = 0``), the cf part the divergence
    (``curl cf = 0``); the xi = 0 mode cannot be attributed to either (the
    inverse Laplacian does not exist on constants) and is returned separately.
    Spectral reassembly df + cf + mean is exact.
    """
    if a1.grid != a2.grid:
        raise GridMismatchError("hodge components on different grids")
    g = a1.grid
    h1 = a1.to_spectral().values
    h2 = a2.to_spectral().values
    mag2 = g.xi_mag**2
    safe = np.where(mag2 == 0.0, 1.0, mag2)
    curl = g.xi1 * h2 - g.xi2 * h1      # curl(a)hat / i
    div = g.xi1 * h1 + g.xi2 * h2      # (d1 a1 + d2 a2)hat / i
    nz = mag2 != 0.0
    df1 = np.where(nz, -g.xi2 * curl / safe, 0.0)
    df2 = np.where(nz, g.xi1 * curl / safe, 0.0)
    cf1 = np.where(nz, g.xi1 * div / safe, 0.0)
    cf2 = np.where(nz, g.xi2 * div / safe, 0.0)
    mean = (complex(h1[0, 0]), complex(h2[0, 0]))

    def wrap(v):
        f = ScalarField(g, v, SPECTRAL)
        return f if a1.representation == SPECTRAL else f.to_physical()

    return HodgeParts(df=(wrap(df1), wrap(df2)), cf=(wrap(cf1), wrap(cf2)), mean=mean)


def curl(a1: ScalarField, a2: ScalarField) -> ScalarField:
    """curl(a) = d1 a2 - d2 a1."""
    return derivative(1, a2) - derivative(2, a1)


def divergence(a1: ScalarField, a2: ScalarField) -> ScalarField:
    """Plain spatial divergence d1 a1 + d2 a2."""
    return derivative(1, a1) + derivative(2, a2)


# ---------------------------------------------------------------------------
# dealiasing
# ---------------------------------------------------------------------------

def dealias_mask(grid: Grid2D) -> np.ndarray:
    """2/3-rule mask: True on modes retained (|k_j| <= n_j/3 per axis)."""
    m1 = np.abs(grid.k1) <= grid.n1 / 3.0
    m2 = np.abs(grid.k2) <= grid.n2 / 3.0
    return m1[:, None] & m2[None, :]


def dealias(f: ScalarField) -> ScalarField:
    """Zero all modes with |k_j| > n_j/3 (input must be spectral)."""
    if f.representation != SPECTRAL:
        raise ValueError("dealias expects a spectral field")
    return ScalarField(f.grid, f.values * dealias_mask(f.grid), SPECTRAL)
