"""Half-wave decomposition and Duhamel propagators.

A second-order field (phi, phi_t) splits into half-waves

    phi_{+-} = (phi -+ phi_t / (i w)) / 2,     w = |grad| or <grad>,

which evolve freely by exp(-+ i t w).  For the massless dispersion the zero
mode is singular: it is split evenly between the two components and the zero
mode of phi_t is carried in a separate drift slot, advanced linearly in time
(the free wave zero mode is a + b t).

For wave equations with divergence-form sources, Box phi = d^mu F_mu, the
half-waves satisfy the integration-by-parts Duhamel formula

    phi_{+-}(t) = hom_{+-}(t) - (1/2) int_0^t exp(-+ i (t-s) |grad|)
                                        R^mu_{+-} F_mu(s) ds,
    hom_{+-}(t) = (1/2) exp(-+ i t |grad|)
                  (phi(0) +- (F_0(0) - phi_t(0)) / (i |grad|)),

which cancels the |grad|^(-1) of the sine kernel.  These half-waves recombine
as phi = phi_+ + phi_- and phi_t = -i |grad| (phi_+ - phi_-) + F_0(t): the
F_0 shift is part of the change of variables, not an approximation.

The s-integrals use composite Simpson on an odd number of uniform nodes; a
4th-order piecewise-cubic cumulative rule is provided for integrals needed at
every node (Picard iteration).  A direct sine-kernel solver serves as an
independent oracle for the divergence-form formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import (Grid2D, OneForm, ScalarField, SPECTRAL, GridMismatchError,
                   riesz_symbol)

MASSLESS = "massless"
MASSIVE = "massive"


class QuadratureError(ValueError):
    pass


def omega_symbol(grid: Grid2D, dispersion: str) -> np.ndarray:
    if dispersion == MASSLESS:
        return grid.xi_mag
    if dispersion == MASSIVE:
        return grid.xi_bracket
    raise ValueError(f"unknown dispersion {dispersion!r}")


@dataclass
class HalfWaveState:
    """(+,-) half-wave pair of a scalar second-order field, spectral values."""

    plus: ScalarField
    minus: ScalarField
    dispersion: str
    zero_drift: complex = 0.0  # zero mode of phi_t (minus F_0 for divergence form)

    def __post_init__(self):
        if self.plus.grid != self.minus.grid:
            raise GridMismatchError("half-wave components on different grids")
        if self.plus.representation != SPECTRAL or self.minus.representation != SPECTRAL:
            raise ValueError("half-wave components must be spectral")

    @property
    def grid(self) -> Grid2D:
        return self.plus.grid

    def component(self, sign: int) -> ScalarField:
        return self.plus if sign == +1 else self.minus


def split(phi: ScalarField, phi_t: ScalarField, dispersion: str = MASSLESS) -> HalfWaveState:
    """Half-wave split of (phi, phi_t)."""
    if phi.grid != phi_t.grid:
        raise GridMismatchError("phi and phi_t on different grids")
    g = phi.grid
    ph = phi.to_spectral().values
    pt = phi_t.to_spectral().values
    w = omega_symbol(g, dispersion)
    drift = 0.0
    if dispersion == MASSLESS:
        safe = np.where(w == 0.0, 1.0, w)
        ratio = np.where(w == 0.0, 0.0, pt / (1j * safe))
        drift = complex(pt[0, 0])
    else:
        ratio = pt / (1j * w)
    plus = ScalarField(g, 0.5 * (ph - ratio), SPECTRAL)
    minus = ScalarField(g, 0.5 * (ph + ratio), SPECTRAL)
    return HalfWaveState(plus, minus, dispersion, drift)


def split_divergence_form(phi: ScalarField, phi_t: ScalarField,
                          f0: ScalarField) -> HalfWaveState:
    """Half-wave split adapted to Box phi = d^mu F_mu; ``f0`` is F_0 at t=0.

    Equivalent to the plain massless split of (phi, phi_t - F_0), which is the
    change of variables under which the divergence-form Duhamel formula holds.
    """
    return split(phi, phi_t.to_spectral() - f0.to_spectral(), MASSLESS)


def recombine(state: HalfWaveState, f0: ScalarField | None = None
              ) -> tuple[ScalarField, ScalarField]:
    """Invert the split.  For divergence-form states pass the current F_0."""
    g = state.grid
    w = omega_symbol(g, state.dispersion)
    phi = ScalarField(g, state.plus.values + state.minus.values, SPECTRAL)
    pt = -1j * w * (state.plus.values - state.minus.values)
    if state.dispersion == MASSLESS:
        pt[0, 0] += state.zero_drift
    if f0 is not None:
        pt = pt + f0.to_spectral().values
    return phi, ScalarField(g, pt, SPECTRAL)


def evolve_free(state: HalfWaveState, t: float) -> HalfWaveState:
    """Free flow: multiply the (+-) component by exp(-+ i t w); drift advances
    the massless zero mode linearly."""
    g = state.grid
    w = omega_symbol(g, state.dispersion)
    phase = np.exp(-1j * t * w)
    plus = state.plus.values * phase
    minus = state.minus.values * np.conj(phase)
    if state.dispersion == MASSLESS:
        plus = plus.copy()
        minus = minus.copy()
        plus[0, 0] += 0.5 * t * state.zero_drift
        minus[0, 0] += 0.5 * t * state.zero_drift
    return HalfWaveState(ScalarField(g, plus, SPECTRAL),
                         ScalarField(g, minus, SPECTRAL),
                         state.dispersion, state.zero_drift)


# ---------------------------------------------------------------------------
# quadrature on uniform nodes
# ---------------------------------------------------------------------------

def simpson_weights(n_nodes: int, h: float) -> np.ndarray:
    """Composite Simpson weights for ``n_nodes`` uniform nodes (odd, >= 3)."""
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise QuadratureError(f"Simpson rule needs an odd node count >= 3, got {n_nodes}")
    w = np.ones(n_nodes)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


# integral of the cubic through nodes {0,1,2,3} (unit spacing) over each panel
_PANEL_FIRST = np.array([9.0, 19.0, -5.0, 1.0]) / 24.0
_PANEL_MID = np.array([-1.0, 13.0, 13.0, -1.0]) / 24.0
_PANEL_LAST = np.array([1.0, -5.0, 19.0, 9.0]) / 24.0


def cumulative_integral(samples: np.ndarray, h: float) -> np.ndarray:
    """4th-order cumulative integral of uniformly sampled data (axis 0).

    Returns I with I[k] = integral from node 0 to node k; I[0] = 0.  Each
    panel integrates the local cubic interpolant; needs >= 4 nodes.  ``h`` may
    be negative (descending node sequence).
    """
    m = samples.shape[0]
    if m < 4:
        raise QuadratureError(f"cumulative integral needs >= 4 nodes, got {m}")
    out = np.zeros_like(samples)
    acc = np.zeros(samples.shape[1:], dtype=samples.dtype)
    for k in range(1, m):
        if k == 1:
            sten, wrow = samples[0:4], _PANEL_FIRST
        elif k == m - 1:
            sten, wrow = samples[m - 4:m], _PANEL_LAST
        else:
            sten, wrow = samples[k - 2:k + 2], _PANEL_MID
        acc = acc + h * np.tensordot(wrow, sten, axes=(0, 0))
        out[k] = acc
    return out


def time_derivative(samples: np.ndarray, h: float) -> np.ndarray:
    """4th-order derivative of uniformly sampled data along axis 0 (>= 5 nodes).

    Centered 5-point stencil inside, one-sided 5-point stencils at the two
    ends of the window (no periodicity in t assumed)."""
    m = samples.shape[0]
    if m < 5:
        raise QuadratureError(f"time derivative needs >= 5 nodes, got {m}")
    out = np.empty_like(samples)
    out[2:-2] = (samples[:-4] - 8 * samples[1:-3] + 8 * samples[3:-1] - samples[4:]) / (12 * h)
    fwd = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
    for i in (0, 1):
        out[i] = np.tensordot(fwd, samples[i:i + 5], axes=(0, 0)) / h
    for i in (m - 2, m - 1):
        out[i] = -np.tensordot(fwd, samples[i:i - 5:-1], axes=(0, 0)) / h
    return out


# ---------------------------------------------------------------------------
# Duhamel integrals
# ---------------------------------------------------------------------------

def _check_nodes(n_nodes: int):
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise QuadratureError(
            f"source samples must sit on an odd Simpson node count >= 3, got {n_nodes}")


def duhamel_divergence(F: Sequence[OneForm], t: float, sign: int) -> ScalarField:
    """Inhomogeneous half-wave term for Box phi = d^mu F_mu.

    ``F`` holds the 1-form source sampled on uniform Simpson nodes covering
    [0, t] (F[0] at s=0, F[-1] at s=t).  Returns

        -(1/2) int_0^t exp(-+ i (t-s) |grad|) R^mu_{sign} F_mu(s) ds

    as a spectral field; linear in F and exactly zero for F = 0.
    """
    _check_nodes(len(F))
    g = F[0].grid
    h = t / (len(F) - 1)
    weights = simpson_weights(len(F), h)
    r_syms = [riesz_symbol(g, mu, sign) for mu in range(3)]
    w = g.xi_mag
    acc = np.zeros(g.shape, dtype=np.complex128)
    for k, form in enumerate(F):
        s_k = k * h
        integrand = sum(r_syms[mu] * form.components()[mu].to_spectral().values
                        for mu in range(3))
        acc += weights[k] * np.exp(-1j * sign * (t - s_k) * w) * integrand
    return ScalarField(g, -0.5 * acc, SPECTRAL)


def divergence_free_half_waves(phi0: ScalarField, phi_t0: ScalarField,
                               f0: ScalarField, t: float, sign: int) -> ScalarField:
    """Homogeneous part of the divergence-form Duhamel formula at time t."""
    state = split_divergence_form(phi0, phi_t0, f0)
    evolved = evolve_free(state, t)
    return evolved.component(sign)


def reference_wave_solve(phi0: ScalarField, phi_t0: ScalarField,
                         F: Sequence[OneForm], t: float
                         ) -> tuple[ScalarField, ScalarField]:
    """Independent sine-kernel solver for Box phi = d^mu F_mu.

    Forms the scalar source G = d_t F_0 - d_1 F_1 - d_2 F_2 explicitly (time
    derivative by 4th-order stencils over the sample window, spatial ones
    spectrally) and evaluates the classical Duhamel formula

        phi(t) = cos(t w) phi0 + sin(t w)/w phi_t0 + int_0^t sin((t-s) w)/w G(s) ds

    per Fourier mode, with the w -> 0 kernel limit t - s.  Returns (phi, phi_t).
    """
    _check_nodes(len(F))
    if len(F) < 5:
        raise QuadratureError("reference solver needs >= 5 nodes for d_t F_0")
    g = phi0.grid
    h = t / (len(F) - 1)
    f0_hat = np.stack([form.a0.to_spectral().values for form in F])
    dt_f0 = time_derivative(f0_hat, h)
    ghat = np.empty((len(F),) + g.shape, dtype=np.complex128)
    for k, form in enumerate(F):
        ghat[k] = (dt_f0[k]
                   - 1j * g.xi1 * form.a1.to_spectral().values
                   - 1j * g.xi2 * form.a2.to_spectral().values)

    w = g.xi_mag
    safe = np.where(w == 0.0, 1.0, w)

    def sin_kernel(theta: float) -> np.ndarray:
        return np.where(w == 0.0, theta, np.sin(theta * safe) / safe)

    weights = simpson_weights(len(F), h)
    acc_phi = np.zeros(g.shape, dtype=np.complex128)
    acc_pt = np.zeros(g.shape, dtype=np.complex128)
    for k in range(len(F)):
        theta = t - k * h
        acc_phi += weights[k] * sin_kernel(theta) * ghat[k]
        acc_pt += weights[k] * np.cos(theta * w) * ghat[k]

    p0 = phi0.to_spectral().values
    q0 = phi_t0.to_spectral().values
    phi = np.cos(t * w) * p0 + sin_kernel(t) * q0 + acc_phi
    phi_t = -w * np.sin(t * w) * p0 + np.cos(t * w) * q0 + acc_pt
    return ScalarField(g, phi, SPECTRAL), ScalarField(g, phi_t, SPECTRAL)
