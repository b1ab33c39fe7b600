"""Bilinear null forms and numerical dominance checks.

The abstract bilinear null form of order ``ell`` with signs (s1, s2) acts on
space-time Fourier moduli:

    FT[B](tau0, xi0) = sum_{tau1+tau2=tau0, xi1+xi2=xi0}
                       angle(s1*xi1, s2*xi2)^ell |FT f1|(tau1, xi1) |FT f2|(tau2, xi2),

with the smaller angle in [0, pi] and the convention angle(., 0) = 0.  On the
finite lattice the sum wraps periodically, matching what pointwise products of
lattice fields do.  Since the weight does not depend on tau, the tau-sum is a
cyclic convolution done by FFT; only spatial mode pairs are looped.

Concrete forms built from the modified Riesz transforms:

    N^{mu nu}(f1, f2) = R^mu_{s1} f1 R^nu_{s2} f2 - R^nu_{s1} f1 R^mu_{s2} f2
    N^0(f1, f2)       = R_{s1, mu} f1 R^mu_{s2} f2
    spinor form       = (P_{s1} psi1)^dag (P_{-s2} alpha^mu P_{s2} psi2)

Their space-time Fourier transforms are dominated pointwise by B^1, B^2, B^1
respectively with some constant; the constants are estimated by randomized
sampling, not asserted.  For the spinor form the conjugation in the first slot
reflects its frequency, so the dominating form pairs the reflected modulus of
psi1 with a flipped first sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dirac import alpha, apply_matrix_field, projection_matrices
from .grid import Grid2D, SPECTRAL, riesz_symbol, riesz_symbol_lower
from .spacetime import SpaceTimeField, apply_spatial_symbol

LATTICE_CAP = 16

SIGN_PAIRS = ((+1, +1), (+1, -1), (-1, +1), (-1, -1))


class SingularWeightError(ValueError):
    """Negative-order angle weight hit an exactly-zero angle."""


def angle_between(u1, u2, v1, v2) -> np.ndarray:
    """Smaller angle in [0, pi] between 2D vectors; zero vectors give 0."""
    cross = u1 * v2 - u2 * v1
    dot = u1 * v1 + u2 * v2
    ang = np.arctan2(np.abs(cross), dot)
    zero = (np.hypot(u1, u2) == 0.0) | (np.hypot(v1, v2) == 0.0)
    return np.where(zero, 0.0, ang)


_angle_cache: dict[tuple, np.ndarray] = {}


def angle_table(grid: Grid2D, signs: tuple[int, int]) -> np.ndarray:
    """angle(s1*xi_a, s2*xi_b) for all spatial mode pairs; shape (n1,n2,n1,n2)."""
    key = (grid, signs)
    tab = _angle_cache.get(key)
    if tab is None:
        s1, s2 = signs
        u1 = s1 * grid.xi1[:, :, None, None]
        u2 = s1 * grid.xi2[:, :, None, None]
        v1 = s2 * grid.xi1[None, None, :, :]
        v2 = s2 * grid.xi2[None, None, :, :]
        tab = _angle_cache[key] = angle_between(u1, u2, v1, v2)
    return tab


def _reflect_spectrum(m: np.ndarray) -> np.ndarray:
    """Map m(kappa) -> m(-kappa) on FFT-ordered axes (-3, -2, -1)."""
    out = m
    for ax in (-3, -2, -1):
        n = m.shape[ax]
        out = np.take(out, (-np.arange(n)) % n, axis=ax)
    return out


def _check_lattice(f1: SpaceTimeField, f2: SpaceTimeField):
    if not f1.same_lattice(f2):
        raise ValueError("null form inputs live on different lattices")
    if max(f1.nt, f1.grid.n1, f1.grid.n2) > LATTICE_CAP:
        raise ValueError(
            f"direct null-form convolution capped at {LATTICE_CAP} per axis")


def abstract_nullform_spectrum(ell: float, signs: tuple[int, int],
                               f1: SpaceTimeField, f2: SpaceTimeField) -> np.ndarray:
    """FT values of B^ell on the lattice, as a real (nt, n1, n2) array."""
    _check_lattice(f1, f2)
    m1 = f1.modulus_spectrum()
    m2 = f2.modulus_spectrum()
    ang = angle_table(f1.grid, signs)
    if ell == 0:
        weights = np.ones_like(ang)
    elif ell > 0:
        weights = ang ** ell
    else:
        active1 = np.any(m1 > 0, axis=0)
        active2 = np.any(m2 > 0, axis=0)
        if np.any((ang == 0.0) & active1[:, :, None, None] & active2[None, None, :, :]):
            raise SingularWeightError(
                "order < 0 with an exactly collinear active mode pair")
        weights = np.where(ang == 0.0, 0.0, ang ** ell)

    u1 = np.fft.fft(m1, axis=0)
    u2 = np.fft.fft(m2, axis=0)
    acc = np.zeros_like(u1)
    n1, n2 = f1.grid.shape
    for i in range(n1):
        for j in range(n2):
            col = u1[:, i, j]
            if not np.any(col):
                continue
            contrib = weights[i, j][None, :, :] * (col[:, None, None] * u2)
            acc += np.roll(contrib, shift=(i, j), axis=(1, 2))
    out = np.fft.ifft(acc, axis=0).real
    return np.maximum(out, 0.0)


def abstract_nullform(ell: float, signs: tuple[int, int],
                      f1: SpaceTimeField, f2: SpaceTimeField) -> SpaceTimeField:
    """B^ell as a spectral SpaceTimeField (real, nonnegative values)."""
    vals = abstract_nullform_spectrum(ell, signs, f1, f2)
    return SpaceTimeField(f1.nt, f1.tlength, f1.grid,
                          vals.astype(np.complex128), SPECTRAL)


# ---------------------------------------------------------------------------
# concrete null forms
# ---------------------------------------------------------------------------

def _riesz_st(mu: int, sign: int, f: SpaceTimeField) -> SpaceTimeField:
    return apply_spatial_symbol(f, riesz_symbol(f.grid, mu, sign))


def nullform_Nmunu(mu: int, nu: int, signs: tuple[int, int],
                   f1: SpaceTimeField, f2: SpaceTimeField) -> SpaceTimeField:
    """Riesz-transform analogue of Q_{mu nu}; antisymmetric in (mu, nu)."""
    _check_lattice(f1, f2)
    s1, s2 = signs
    a = _riesz_st(mu, s1, f1).to_physical().values * _riesz_st(nu, s2, f2).to_physical().values
    b = _riesz_st(nu, s1, f1).to_physical().values * _riesz_st(mu, s2, f2).to_physical().values
    return SpaceTimeField(f1.nt, f1.tlength, f1.grid, a - b, "physical")


def nullform_N0(signs: tuple[int, int],
                f1: SpaceTimeField, f2: SpaceTimeField) -> SpaceTimeField:
    """Riesz-transform analogue of Q_0: R_{s1, mu} f1 R^mu_{s2} f2."""
    _check_lattice(f1, f2)
    s1, s2 = signs
    acc = None
    for mu in range(3):
        lo = apply_spatial_symbol(f1, riesz_symbol_lower(f1.grid, mu, s1))
        up = _riesz_st(mu, s2, f2)
        term = lo.to_physical().values * up.to_physical().values
        acc = term if acc is None else acc + term
    return SpaceTimeField(f1.nt, f1.tlength, f1.grid, acc, "physical")


def _project_st(sign: int, psi: SpaceTimeField) -> SpaceTimeField:
    tab = projection_matrices(sign * psi.grid.xi1, sign * psi.grid.xi2)
    hat = psi.to_spectral()
    vals = np.einsum("xyab,btxy->atxy", tab, hat.values)
    out = SpaceTimeField(psi.nt, psi.tlength, psi.grid, vals, SPECTRAL)
    return out if psi.representation == SPECTRAL else out.to_physical()


def spinor_nullform(signs: tuple[int, int], psi1: SpaceTimeField,
                    psi2: SpaceTimeField, mu: int) -> SpaceTimeField:
    """(P_{s1} psi1)^dag (P_{-s2} alpha^mu P_{s2} psi2); conjugate-linear in psi1."""
    _check_lattice(psi1, psi2)
    s1, s2 = signs
    left = _project_st(s1, psi1).to_physical().values
    right = _project_st(s2, psi2).to_spectral()
    a_mu = np.einsum("ab,btxy->atxy", alpha(mu), right.values)
    right = SpaceTimeField(psi2.nt, psi2.tlength, psi2.grid, a_mu, SPECTRAL)
    right = _project_st(-s2, right).to_physical().values
    vals = np.sum(np.conj(left) * right, axis=0)
    return SpaceTimeField(psi1.nt, psi1.tlength, psi1.grid, vals, "physical")


# ---------------------------------------------------------------------------
# dominance ratios and probes
# ---------------------------------------------------------------------------

def pointwise_sup_ratio(numerator: np.ndarray, denominator: np.ndarray) -> float:
    """sup |num| / den over lattice modes, with the 0/0 -> 0 convention."""
    num = np.abs(numerator)
    scale = num.max()
    if scale == 0.0:
        return 0.0
    pos = denominator > 0.0
    ratios = np.where(pos, num / np.where(pos, denominator, 1.0), 0.0)
    # zero denominator with a numerically nonzero numerator means the bound
    # failed (modulo roundoff): surface it as inf
    bad = (~pos) & (num > 1e-12 * scale)
    if np.any(bad):
        return float("inf")
    return float(ratios.max())


def random_band_limited(nt: int, tlength: float, grid: Grid2D, rng,
                        kmax: int, ktmax: int, spinor: bool = False) -> SpaceTimeField:
    """Random field with spectrum supported on |kt| <= ktmax, |kj| <= kmax."""
    shape = (2, nt, grid.n1, grid.n2) if spinor else (nt, grid.n1, grid.n2)
    vals = np.zeros(shape, dtype=np.complex128)
    idx = np.arange(nt)
    ktau = np.where(idx <= nt // 2, idx, idx - nt)
    mt = np.abs(ktau) <= ktmax
    m1 = np.abs(grid.k1) <= kmax
    m2 = np.abs(grid.k2) <= kmax
    mask = mt[:, None, None] & m1[None, :, None] & m2[None, None, :]
    n_active = int(mask.sum())
    if spinor:
        coeffs = rng.standard_normal((2, n_active)) + 1j * rng.standard_normal((2, n_active))
        vals[0][mask] = coeffs[0]
        vals[1][mask] = coeffs[1]
    else:
        vals[mask] = rng.standard_normal(n_active) + 1j * rng.standard_normal(n_active)
    return SpaceTimeField(nt, tlength, grid, vals, SPECTRAL)


FORM_ORDERS = {"N01": 1, "N02": 1, "N12": 1, "N0": 2, "spinor0": 1,
               "spinor1": 1, "spinor2": 1}
_FORM_INDEX = {"N01": (0, 1), "N02": (0, 2), "N12": (1, 2)}


@dataclass
class DominanceResult:
    form: str
    signs: tuple[int, int]
    ell: float
    trials: int
    sup_ratio: float
    argmax_input_seed: int


def _form_spectrum(form: str, signs: tuple[int, int], f1: SpaceTimeField,
                   f2: SpaceTimeField) -> np.ndarray:
    if form in _FORM_INDEX:
        mu, nu = _FORM_INDEX[form]
        out = nullform_Nmunu(mu, nu, signs, f1, f2)
    elif form == "N0":
        out = nullform_N0(signs, f1, f2)
    elif form.startswith("spinor"):
        out = spinor_nullform(signs, f1, f2, int(form[-1]))
    else:
        raise ValueError(f"unknown form {form!r}")
    return out.to_spectral().values


def dominance_ratio(form: str, signs: tuple[int, int], f1: SpaceTimeField,
                    f2: SpaceTimeField) -> float:
    """sup_mode |FT(form)| / FT(B^ell) for one input pair."""
    ell = FORM_ORDERS[form]
    num = _form_spectrum(form, signs, f1, f2)
    if form.startswith("spinor"):
        b_in1 = SpaceTimeField(f1.nt, f1.tlength, f1.grid,
                               _reflect_spectrum(f1.modulus_spectrum()).astype(complex),
                               SPECTRAL)
        den = abstract_nullform_spectrum(ell, (-signs[0], signs[1]), b_in1, f2)
    else:
        den = abstract_nullform_spectrum(ell, signs, f1, f2)
    return pointwise_sup_ratio(num, den)


def run_dominance_trials(form: str, signs: tuple[int, int], trials: int, seed: int,
                         nt: int = 8, n: int = 8, tlength: float = 2 * np.pi,
                         length: float = 2 * np.pi, kmax: int = 2, ktmax: int = 2
                         ) -> DominanceResult:
    """Sampled sup of the dominance ratio over random band-limited inputs."""
    grid = Grid2D(n, n, length)
    spinor = form.startswith("spinor")
    sup, arg = 0.0, seed
    for k in range(trials):
        rng = np.random.default_rng(seed + k)
        f1 = random_band_limited(nt, tlength, grid, rng, kmax, ktmax, spinor)
        f2 = random_band_limited(nt, tlength, grid, rng, kmax, ktmax, spinor)
        r = dominance_ratio(form, signs, f1, f2)
        if r > sup:
            sup, arg = r, seed + k
    return DominanceResult(form, signs, FORM_ORDERS[form], trials, sup, arg)


def angle_bound_probe(samples: int, signs: tuple[int, int], seed: int = 0,
                      freq_scale: float = 10.0, on_cone: bool = False) -> float:
    """Sampled sup of angle * (min<xi_i>)^(1/2) / (sum of modulation brackets)^(1/2).

    The brackets are <x> = 1 + |x|; the modulation sum is
    <|tau0| - |xi0|> + <tau1 + s1 |xi1|> + <tau2 + s2 |xi2|> with
    tau0 = tau1 + tau2, xi0 = xi1 + xi2.  With ``on_cone`` the tau_i are put
    exactly at -s_i |xi_i| so only the output bracket remains.
    """
    rng = np.random.default_rng(seed)
    s1, s2 = signs
    xi1 = freq_scale * rng.standard_normal((samples, 2))
    xi2 = freq_scale * rng.standard_normal((samples, 2))
    r1 = np.hypot(xi1[:, 0], xi1[:, 1])
    r2 = np.hypot(xi2[:, 0], xi2[:, 1])
    if on_cone:
        tau1 = -s1 * r1
        tau2 = -s2 * r2
    else:
        tau1 = freq_scale * rng.standard_normal(samples)
        tau2 = freq_scale * rng.standard_normal(samples)
    tau0 = tau1 + tau2
    xi0 = xi1 + xi2
    r0 = np.hypot(xi0[:, 0], xi0[:, 1])
    ang = angle_between(s1 * xi1[:, 0], s1 * xi1[:, 1], s2 * xi2[:, 0], s2 * xi2[:, 1])
    bracket = lambda x: 1.0 + np.abs(x)
    denom = bracket(np.abs(tau0) - r0) + bracket(tau1 + s1 * r1) + bracket(tau2 + s2 * r2)
    vals = ang * np.sqrt(np.minimum(bracket(r1), bracket(r2))) / np.sqrt(denom)
    return float(vals.max())


def projector_angle_probe(samples: int, seed: int = 0, freq_scale: float = 10.0) -> float:
    """Sampled sup of |P(xi1) P(-xi2) z| / (|z| angle(xi1, xi2))."""
    rng = np.random.default_rng(seed)
    sup = 0.0
    for _ in range(samples):
        xi1 = freq_scale * rng.standard_normal(2)
        xi2 = freq_scale * rng.standard_normal(2)
        z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        ang = float(angle_between(xi1[0], xi1[1], xi2[0], xi2[1]))
        if ang == 0.0:
            continue
        p1 = projection_matrices(xi1[0], xi1[1])
        p2 = projection_matrices(-xi2[0], -xi2[1])
        num = np.linalg.norm(p1 @ (p2 @ z))
        sup = max(sup, num / (np.linalg.norm(z) * ang))
    return sup


def write_dominance_report(path, rows: Iterable[DominanceResult]) -> None:
    """CSV report: form, signs, ell, trials, sup_ratio, argmax_input_seed."""
    with open(path, "w") as fh:
        fh.write("form,signs,ell,trials,sup_ratio,argmax_input_seed\n")
        for r in rows:
            signs = f"{'+' if r.signs[0] > 0 else '-'}{'+' if r.signs[1] > 0 else '-'}"
            fh.write(f"{r.form},{signs},{r.ell!r},{r.trials},{r.sup_ratio!r},"
                     f"{r.argmax_input_seed}\n")
