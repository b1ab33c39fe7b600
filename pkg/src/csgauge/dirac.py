"""Dirac algebra on the 2D periodic grid.

Matrices (2x2, metric signature (+, -, -)):

    sigma1 = [[0,1],[1,0]]   sigma2 = [[0,-i],[i,0]]   sigma3 = [[1,0],[0,-1]]
    gamma0 = sigma3, gamma1 = i*sigma2, gamma2 = -i*sigma1
    beta = gamma0, alpha1 = sigma1, alpha2 = sigma2, alpha0 = Id

Frequency projections: for xi != 0

    P(xi) = (Id + xi_j alpha^j / |xi|) / 2,   P_{+-}(xi) = P(+-xi)

are the orthogonal eigenprojections of xi_j alpha^j onto eigenvalues +-|xi|.
At xi = 0 both projections are set to Id/2, preserving P_+ + P_- = Id.

The commutator identity tying projections to the modified Riesz transforms,

    alpha^mu P_{+-} = P_{-+} alpha^mu P_{+-} - R^mu_{+-} P_{+-},

holds mode-by-mode away from xi = 0 and is exposed as a measurable residual.
"""

from __future__ import annotations

import numpy as np

from .grid import Grid2D, ScalarField, SpinorField, SPECTRAL, riesz_symbol

ID2 = np.eye(2, dtype=np.complex128)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)

_MATRICES = {
    "sigma1": SIGMA1,
    "sigma2": SIGMA2,
    "sigma3": SIGMA3,
    "gamma0": SIGMA3,
    "gamma1": 1j * SIGMA2,
    "gamma2": -1j * SIGMA1,
    "beta": SIGMA3,
    "alpha0": ID2,
    "alpha1": SIGMA1,
    "alpha2": SIGMA2,
}

MINKOWSKI = np.diag([1.0, -1.0, -1.0])

# totally antisymmetric symbol, eps[0,1,2] = 1
EPSILON = np.zeros((3, 3, 3))
for _p, _s in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
               ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
    EPSILON[_p] = _s


def matrix(kind: str) -> np.ndarray:
    """Return a fresh copy of one of the constant matrices by name."""
    try:
        return _MATRICES[kind].copy()
    except KeyError:
        raise ValueError(f"unknown matrix kind {kind!r}") from None


def alpha(mu: int) -> np.ndarray:
    return matrix(f"alpha{mu}")


def gamma(mu: int) -> np.ndarray:
    return matrix(f"gamma{mu}")


def projection_matrices(xi1, xi2) -> np.ndarray:
    """P(xi) per mode; shape broadcast(xi) + (2, 2).  P(0) := Id/2."""
    xi1 = np.asarray(xi1, dtype=float)
    xi2 = np.asarray(xi2, dtype=float)
    mag = np.hypot(xi1, xi2)
    safe = np.where(mag == 0.0, 1.0, mag)
    u1 = np.where(mag == 0.0, 0.0, xi1 / safe)
    u2 = np.where(mag == 0.0, 0.0, xi2 / safe)
    out = np.empty(mag.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = 0.5
    out[..., 1, 1] = 0.5
    out[..., 0, 1] = 0.5 * (u1 - 1j * u2)
    out[..., 1, 0] = 0.5 * (u1 + 1j * u2)
    return out


class ProjectionSymbol:
    """Per-mode projection tables P(+-xi) for one grid; immutable once built."""

    def __init__(self, grid: Grid2D):
        self.grid = grid
        self.plus = projection_matrices(grid.xi1, grid.xi2)     # P(+xi)
        self.minus = projection_matrices(-grid.xi1, -grid.xi2)  # P(-xi)

    def table(self, sign: int) -> np.ndarray:
        if sign == +1:
            return self.plus
        if sign == -1:
            return self.minus
        raise ValueError("sign must be +1 or -1")


_projection_cache: dict[Grid2D, ProjectionSymbol] = {}


def projection_symbol(grid: Grid2D) -> ProjectionSymbol:
    tab = _projection_cache.get(grid)
    if tab is None:
        tab = _projection_cache[grid] = ProjectionSymbol(grid)
    return tab


def apply_matrix_field(table: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Apply a per-mode 2x2 matrix table to spinor values of shape (2, n1, n2)."""
    return np.einsum("xyab,bxy->axy", table, values)


def project(sign: int, psi: SpinorField) -> SpinorField:
    """Frequency projection P_{+-} psi (applied mode-by-mode in spectral space)."""
    tab = projection_symbol(psi.grid).table(sign)
    hat = psi.to_spectral()
    out = SpinorField(psi.grid, apply_matrix_field(tab, hat.values), SPECTRAL)
    return out if psi.representation == SPECTRAL else out.to_physical()


def apply_constant_matrix(m: np.ndarray, psi: SpinorField) -> SpinorField:
    return SpinorField(psi.grid, np.einsum("ab,bxy->axy", m, psi.values),
                       psi.representation)


def dirac_adjoint_product(psi: SpinorField, chi: SpinorField) -> ScalarField:
    """psibar chi = psi^dagger gamma0 chi, pointwise (physical representation)."""
    p = psi.to_physical().values
    c = chi.to_physical().values
    g0 = matrix("gamma0")
    vals = np.einsum("axy,ab,bxy->xy", np.conj(p), g0, c)
    return ScalarField(psi.grid, vals, "physical")


def commutator_residual(sign: int, mu: int, psi: SpinorField) -> float:
    """L2 residual of alpha^mu P_s = P_{-s} alpha^mu P_s - R^mu_s P_s on psi.

    The xi = 0 mode is excluded (projection and Riesz conventions there are
    independent choices); the caller's contract is a band-limited psi with no
    zero mode, but the mode is zeroed here regardless.
    """
    grid = psi.grid
    hat = psi.to_spectral().values.copy()
    hat[:, 0, 0] = 0.0
    tabs = projection_symbol(grid)
    p_s = apply_matrix_field(tabs.table(sign), hat)
    a = matrix(f"alpha{mu}")
    lhs = np.einsum("ab,bxy->axy", a, p_s)
    rhs = apply_matrix_field(tabs.table(-sign), lhs) - riesz_symbol(grid, mu, sign) * p_s
    return float(np.sqrt(grid.size * np.sum(np.abs(lhs - rhs) ** 2)))
