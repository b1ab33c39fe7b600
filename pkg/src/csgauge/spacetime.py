"""Space-time fields on a finite (t, x1, x2) lattice.

A ``SpaceTimeField`` samples a scalar (nt, n1, n2) or spinor (2, nt, n1, n2)
field on ``[0, T) x [0, L)^2``.  Its spectral representation is the discrete
space-time Fourier transform with frequency lattice

    tau  = (2*pi/T) * kt,  kt in {-nt/2+1, ..., nt/2},
    xi_j = (2*pi/L) * kj,  kj in {-n/2+1, ..., n/2},

normalized like the spatial transform (forward carries 1/(nt*n1*n2)) so the
plain-grid-sum Parseval identity holds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid2D, GridMismatchError, PHYSICAL, SPECTRAL


@dataclass
class SpaceTimeField:
    """Scalar or spinor field sampled on an nt x n1 x n2 space-time lattice."""

    nt: int
    tlength: float
    grid: Grid2D
    values: np.ndarray
    representation: str = PHYSICAL

    def __post_init__(self):
        if self.nt < 2 or self.nt % 2:
            raise ValueError(f"nt must be even and >= 2, got {self.nt}")
        if not (self.tlength > 0):
            raise ValueError("tlength must be positive")
        self.values = np.asarray(self.values, dtype=np.complex128)
        scalar = (self.nt, self.grid.n1, self.grid.n2)
        if self.values.shape not in (scalar, (2,) + scalar):
            raise GridMismatchError(
                f"values shape {self.values.shape} does not match lattice {scalar}")

    @property
    def is_spinor(self) -> bool:
        return self.values.ndim == 4

    @property
    def lattice_size(self) -> int:
        return self.nt * self.grid.size

    @property
    def ktau(self) -> np.ndarray:
        idx = np.arange(self.nt)
        return np.where(idx <= self.nt // 2, idx, idx - self.nt)

    @property
    def tau(self) -> np.ndarray:
        return (2.0 * np.pi / self.tlength) * self.ktau

    def _axes(self) -> tuple[int, int, int]:
        return (-3, -2, -1)

    def to_spectral(self) -> "SpaceTimeField":
        if self.representation == SPECTRAL:
            return SpaceTimeField(self.nt, self.tlength, self.grid,
                                  self.values.copy(), SPECTRAL)
        hat = np.fft.fftn(self.values, axes=self._axes()) / self.lattice_size
        return SpaceTimeField(self.nt, self.tlength, self.grid, hat, SPECTRAL)

    def to_physical(self) -> "SpaceTimeField":
        if self.representation == PHYSICAL:
            return SpaceTimeField(self.nt, self.tlength, self.grid,
                                  self.values.copy(), PHYSICAL)
        phys = np.fft.ifftn(self.values * self.lattice_size, axes=self._axes())
        return SpaceTimeField(self.nt, self.tlength, self.grid, phys, PHYSICAL)

    def l2norm(self) -> float:
        s = float(np.sum(np.abs(self.values) ** 2))
        if self.representation == SPECTRAL:
            s *= self.lattice_size
        return np.sqrt(s)

    def same_lattice(self, other: "SpaceTimeField") -> bool:
        return (self.nt == other.nt and self.tlength == other.tlength
                and self.grid == other.grid)

    def modulus_spectrum(self) -> np.ndarray:
        """|FT| per lattice mode; spinor components combined in the C^2 norm.

        Returns an (nt, n1, n2) real array."""
        hat = self.to_spectral().values
        if self.is_spinor:
            return np.sqrt(np.abs(hat[0]) ** 2 + np.abs(hat[1]) ** 2)
        return np.abs(hat)


def frequency_arrays(f: SpaceTimeField) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Broadcastable (tau, xi1, xi2) arrays over the (nt, n1, n2) lattice."""
    tau = f.tau[:, None, None]
    xi1 = f.grid.xi1[None, :, :]
    xi2 = f.grid.xi2[None, :, :]
    return tau, xi1, xi2


def apply_spatial_symbol(f: SpaceTimeField, sym: np.ndarray) -> SpaceTimeField:
    """Apply a spatial multiplier slice-wise in time (symbol shape (n1, n2))."""
    hat = f.to_spectral()
    out = SpaceTimeField(f.nt, f.tlength, f.grid, hat.values * sym, SPECTRAL)
    return out if f.representation == SPECTRAL else out.to_physical()
