"""Multiple-access generalization with K_in transmitter and K_out receiver users.

The encoder-side operator U_Kin is the inverse CVQFT (positive exponent) and
the decoder-side U_Kout the forward CVQFT (negative exponent).  Rectangular
channel matrices are represented with length-K_out / length-K_in basis
vectors at grid scale l, and the alignment kernel generalizes to

    f_Kout(tau) = (1/K_out) * exp(i*pi*l*(K_out-1)*tau/K_out)
                  * sin(pi*l*tau) / sin(pi*l*tau/K_out),

which reduces to f(tau) at K_out = l and has period K_out/l in tau.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .channel import GaussianEnsemble, SubcarrierDomainMatrix
from .fourier import (
    FORWARD,
    INVERSE,
    SINGULARITY_GUARD,
    BasisSet,
    FourierOperator,
    basis_set,
    basis_vector,
    build_cvqft,
)


@dataclass(frozen=True)
class MultiuserConfig:
    """Sizes and variances of a K_in/K_out multiple-access setting."""

    k_in: int
    k_out: int
    l: int
    sigma_sq: float = 1.0
    sigma_n_sq: float = 0.0
    seed: int = 42

    def __post_init__(self):
        for name in ("k_in", "k_out", "l"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.sigma_sq < 0 or self.sigma_n_sq < 0:
            raise ValueError("variances must be >= 0")


def build_multiuser_operators(cfg: MultiuserConfig) -> tuple:
    """(U_Kin, U_Kout): the inverse CVQFT on the input side and the forward
    CVQFT on the output side, both unitary."""
    return (build_cvqft(cfg.k_in, INVERSE), build_cvqft(cfg.k_out, FORWARD))


def _basis_matrix(K: int, l: int) -> np.ndarray:
    # Columns b_K(k/l) for k = 0..K-1; identical to the forward DFT matrix.
    return np.stack([basis_vector(k / l, K, l).entries for k in range(K)], axis=1)


def multiuser_path_matrix(paths, cfg: MultiuserConfig) -> np.ndarray:
    """K_out x K_in channel matrix built per path:
    T = sum_i x_i b_Kout(cos theta_i) b_Kin(cos theta_i*)^H."""
    T = np.zeros((cfg.k_out, cfg.k_in), dtype=complex)
    for p in paths:
        if p.gain < 0:
            raise ValueError(f"gain must be >= 0, got {p.gain}")
        out_vec = basis_vector(np.cos(p.angles.theta), cfg.k_out, cfg.l).entries
        in_vec = basis_vector(np.cos(p.angles.theta_star), cfg.k_in, cfg.l).entries
        T += p.gain * np.outer(out_vec, in_vec.conj())
    return T


def multiuser_subcarrier_domain(T: np.ndarray, cfg: MultiuserConfig) -> SubcarrierDomainMatrix:
    """Rectangular domain representation:
    entry(k, i) = b_Kout(k/l)^H . T . b_Kin(i/l)."""
    T = np.asarray(T, dtype=complex)
    if T.shape != (cfg.k_out, cfg.k_in):
        raise ValueError(
            f"dimension mismatch: T is {T.shape}, expected ({cfg.k_out}, {cfg.k_in})")
    B_out = _basis_matrix(cfg.k_out, cfg.l)
    B_in = _basis_matrix(cfg.k_in, cfg.l)
    entries = B_out.conj().T @ T @ B_in
    return SubcarrierDomainMatrix(cfg.k_out, cfg.k_in, entries, float(np.linalg.norm(T)))


def multiuser_transmit(Z: np.ndarray, T: np.ndarray, cfg: MultiuserConfig,
                       noise_seed: int | None = None) -> np.ndarray:
    """Multiuser transmission: D = U_Kin . Z, then
    Y = R(T) . D + U_Kout . Delta with Delta sampled per the config."""
    Z = np.asarray(Z, dtype=complex)
    if Z.size != cfg.k_in:
        raise ValueError(f"dimension mismatch: Z has {Z.size} entries, expected {cfg.k_in}")
    U_in, U_out = build_multiuser_operators(cfg)
    D = U_in.entries @ Z
    R = multiuser_subcarrier_domain(T, cfg)
    seed = cfg.seed if noise_seed is None else noise_seed
    delta = GaussianEnsemble(cfg.k_out, cfg.sigma_n_sq, seed).sample()
    return R.entries @ D + U_out.entries @ delta


def f_kout(tau, l: int, k_out: int):
    """Multiuser alignment kernel f_Kout(tau).

    Exactly periodic with period k_out/l (substituting u = l*tau/k_out turns
    it into the single-user kernel of size k_out), so the argument is
    reduced before evaluation; the removable singularities sit at integer u
    with limit magnitude 1.  Zeros at tau = k/l for k = 1..k_out-1 and
    reflection symmetry f_Kout(-k/l) = f_Kout((k_out-k)/l).
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if k_out < 1:
        raise ValueError(f"k_out must be >= 1, got {k_out}")
    arr = np.asarray(tau, dtype=float)
    u = l * arr / k_out
    r = u - np.rint(u)
    num = np.sin(np.pi * k_out * r)
    den = np.sin(np.pi * r)
    singular = np.abs(den) < SINGULARITY_GUARD
    phase = np.exp(1j * np.pi * (k_out - 1) * r)
    safe_den = np.where(singular, 1.0, den)
    value = np.where(singular, phase, (1.0 / k_out) * phase * num / safe_den)
    if np.isscalar(tau) or arr.ndim == 0:
        return complex(value)
    return value


def predicted_maxima(l: int, k_out: int, k: int = 0) -> np.ndarray:
    """cos theta positions where |f_Kout(cos theta - k/l)| peaks:
    the congruence cos theta = k/l (mod k_out/l), kept to the realizable
    range [-1, 1] (positions outside it correspond to no physical angle)."""
    period = k_out / l
    base = k / l
    n_lo = int(np.ceil((-1.0 - base) / period))
    n_hi = int(np.floor((1.0 - base) / period))
    return base + period * np.arange(n_lo, n_hi + 1)


def f_kout_maxima(l: int, k_out: int, resolution: int, k: int = 0) -> np.ndarray:
    """Numerically locate the principal maxima of |f_Kout(cos theta - k/l)|
    on [-1, 1].

    Scans a uniform grid of ``resolution`` points for local maxima, refines
    each with a bounded scalar search inside its bracketing cell, and keeps
    only the unit-height principal lobes (sidelobes of the Dirichlet shape
    top out well below 1).  The surviving positions match
    ``predicted_maxima`` to within a grid step and the kernel magnitude
    there is 1.
    """
    if resolution < 10 * k_out:
        raise ValueError(
            f"resolution must be >= 10*k_out = {10 * k_out}, got {resolution}")
    grid = np.linspace(-1.0, 1.0, resolution)
    mags = np.abs(f_kout(grid - k / l, l, k_out))
    peaks = []
    for i in range(resolution):
        left = mags[i - 1] if i > 0 else -np.inf
        right = mags[i + 1] if i < resolution - 1 else -np.inf
        if mags[i] > left and mags[i] > right:
            peaks.append(i)
    locations = []
    for i in peaks:
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, resolution - 1)]
        res = minimize_scalar(lambda c: -abs(f_kout(c - k / l, l, k_out)),
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        if -res.fun >= 0.999:
            locations.append(float(res.x))
    return np.asarray(sorted(locations))


def multiuser_basis_sets(cfg: MultiuserConfig) -> tuple:
    """(input-side, output-side) orthonormal basis sets with parameters
    0, 1/l, ..., (K-1)/l."""
    return (basis_set(cfg.k_in, cfg.l), basis_set(cfg.k_out, cfg.l))
