"""Gaussian ensembles, sub-channel transmittance, and the transmission law.

Single carriers z and subcarriers d are zero-mean circular-symmetric complex
Gaussian vectors; the encoder applies the inverse CVQFT (z -> d) and the
decoder the forward CVQFT.  Each Gaussian sub-channel i acts on the Fourier
side as a complex gain F(T)_i, and the received vector is

    y_i = F(T)_i * z_i + F(Delta)_i

with F(Delta) the CVQFT-transformed channel noise.  The subcarrier-domain
representation conjugates a channel matrix with the Fourier basis:
entry(k, i) = b(k/l)^H . T . b(i/l).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fourier import AnglePair, basis_vector, build_cvqft

QUADRATURE_BOUND = 1.0 / np.sqrt(2.0)


def _forward(vec: np.ndarray) -> np.ndarray:
    # Unitary forward CVQFT; equal to build_cvqft(l).apply(vec) up to
    # rounding, the FFT is just the fast route.
    return np.fft.fft(vec, norm="ortho")


def _inverse(vec: np.ndarray) -> np.ndarray:
    return np.fft.ifft(vec, norm="ortho")


class GaussianEnsemble:
    """Seeded sampler of circular-symmetric complex Gaussian vectors.

    Each component has i.i.d. real and imaginary quadratures N(0, sigma_sq),
    so E[|z_j|^2] = 2*sigma_sq.  The sampler owns its generator state: one
    instance must not be shared across threads while sampling, but clones
    with distinct seeds may run in parallel.
    """

    def __init__(self, dimension: int, sigma_sq: float, seed: int):
        if dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {dimension}")
        if sigma_sq < 0:
            raise ValueError(f"sigma_sq must be >= 0, got {sigma_sq}")
        self.dimension = dimension
        self.sigma_sq = float(sigma_sq)
        self.seed = seed
        self._rng = np.random.default_rng(seed)

    def sample(self) -> np.ndarray:
        """One complex vector of length ``dimension``."""
        scale = np.sqrt(self.sigma_sq)
        re = self._rng.normal(0.0, scale, self.dimension)
        im = self._rng.normal(0.0, scale, self.dimension)
        return re + 1j * im

    def sample_many(self, count: int) -> np.ndarray:
        """``count`` vectors as a (count, dimension) array."""
        scale = np.sqrt(self.sigma_sq)
        re = self._rng.normal(0.0, scale, (count, self.dimension))
        im = self._rng.normal(0.0, scale, (count, self.dimension))
        return re + 1j * im


def sample_input(n: int, sigma_omega0_sq: float, seed: int) -> np.ndarray:
    """Sample the n-dimensional single-carrier input vector z.

    Quadratures are i.i.d. N(0, sigma_omega0_sq); deterministic under a
    fixed seed.  Rejects non-positive modulation variance.
    """
    if sigma_omega0_sq <= 0:
        raise ValueError(f"sigma_omega0_sq must be > 0, got {sigma_omega0_sq}")
    return GaussianEnsemble(n, sigma_omega0_sq, seed).sample()


@dataclass(frozen=True)
class PathComponent:
    """One path of a decomposed channel: virtual gain x >= 0 plus the
    transmitted/received angle pair."""

    gain: float
    angles: AnglePair

    def __post_init__(self):
        if self.gain < 0:
            raise ValueError(f"gain must be >= 0, got {self.gain}")


@dataclass(frozen=True, eq=False)
class Transmittance:
    """Per-sub-channel complex gains, either flat (one T_i per sub-channel)
    or decomposed into gain/angle path components.

    In strict flat mode each T_i must satisfy 0 <= Re T_i <= 1/sqrt(2) with
    Re T_i = Im T_i (quadratures attenuated equally).
    """

    mode: str
    flat: np.ndarray | None = field(default=None, repr=False)
    paths: tuple = ()
    strict_validation: bool = False

    def __post_init__(self):
        if self.mode not in ("flat", "path"):
            raise ValueError(f"mode must be 'flat' or 'path', got {self.mode!r}")
        if self.mode == "flat":
            if self.flat is None or self.flat.ndim != 1 or self.flat.size < 1:
                raise ValueError("flat mode requires a 1-D gain vector")
            if self.strict_validation:
                re, im = self.flat.real, self.flat.imag
                if np.any(re < 0) or np.any(re > QUADRATURE_BOUND + 1e-12):
                    raise ValueError("strict mode: Re T_i must lie in [0, 1/sqrt(2)]")
                if np.any(im < 0) or np.any(im > QUADRATURE_BOUND + 1e-12):
                    raise ValueError("strict mode: Im T_i must lie in [0, 1/sqrt(2)]")
                if np.max(np.abs(re - im)) > 1e-12:
                    raise ValueError("strict mode: Re T_i must equal Im T_i")


def flat_transmittance(values, strict: bool = False) -> Transmittance:
    return Transmittance("flat", flat=np.asarray(values, dtype=complex),
                         strict_validation=strict)


def path_transmittance(paths) -> Transmittance:
    return Transmittance("path", paths=tuple(paths))


def _flat_gains(transmittance) -> np.ndarray:
    if isinstance(transmittance, Transmittance):
        if transmittance.mode != "flat":
            raise ValueError("flat-mode transmittance required")
        return transmittance.flat
    return np.asarray(transmittance, dtype=complex)


@dataclass(frozen=True, eq=False)
class SubcarrierDomainMatrix:
    """Channel matrix expressed in the Fourier basis, with bin semantics:
    row k / column i correspond to b(k/l) and b(i/l)."""

    rows: int
    cols: int
    entries: np.ndarray = field(repr=False)
    source_norm: float = 0.0

    @property
    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.entries))


@dataclass(frozen=True, eq=False)
class TransmissionRecord:
    """One end-to-end transmission: single carriers, subcarriers, Fourier
    gains, transformed noise, and both output representations."""

    input_singles: np.ndarray
    subcarriers: np.ndarray
    transmittance_fft: np.ndarray
    noise_fft: np.ndarray
    output: np.ndarray
    domain_output: np.ndarray

    def to_dict(self) -> dict:
        """JSON-ready dict with complex entries encoded as [re, im] pairs."""
        return {
            "input_singles": complex_pairs(self.input_singles),
            "subcarriers": complex_pairs(self.subcarriers),
            "transmittance_fft": complex_pairs(self.transmittance_fft),
            "noise_fft": complex_pairs(self.noise_fft),
            "output": complex_pairs(self.output),
            "domain_output": complex_pairs(self.domain_output),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TransmissionRecord":
        return cls(**{key: pairs_to_complex(data[key]) for key in (
            "input_singles", "subcarriers", "transmittance_fft",
            "noise_fft", "output", "domain_output")})


def complex_pairs(vec: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=complex)]


def pairs_to_complex(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs])


def subcarrier_encode(z: np.ndarray) -> np.ndarray:
    """Encoder: inverse CVQFT mapping single carriers z to subcarriers d."""
    z = np.asarray(z, dtype=complex)
    if z.size < 1:
        raise ValueError("input vector must have length >= 1")
    return _inverse(z)


def subcarrier_decode(d: np.ndarray) -> np.ndarray:
    """Decoder: forward CVQFT mapping subcarriers d back to single carriers."""
    d = np.asarray(d, dtype=complex)
    if d.size < 1:
        raise ValueError("input vector must have length >= 1")
    return _forward(d)


def fourier_transmittance(transmittance) -> np.ndarray:
    """Unnormalized DFT of the flat gains: F(T)_i = sum_k T_k exp(-2i*pi*i*k/l)."""
    gains = _flat_gains(transmittance)
    return np.fft.fft(gains)


def transmit(d: np.ndarray, transmittance, noise_seed: int,
             sigma_n_sq: float) -> TransmissionRecord:
    """Run the transmission law over a flat channel.

    The output is y_i = F(T)_i * z_i + F(Delta)_i where z is the forward
    CVQFT of d and F(Delta) the forward CVQFT of a fresh noise sample with
    per-quadrature variance sigma_n_sq.  The returned record also carries
    the subcarrier-domain output R_phi(diag F(T)) . d + F(Delta).
    """
    d = np.asarray(d, dtype=complex)
    gains = _flat_gains(transmittance)
    if gains.shape != d.shape:
        raise ValueError(f"dimension mismatch: {gains.shape} gains vs {d.shape} subcarriers")
    if sigma_n_sq < 0:
        raise ValueError(f"sigma_n_sq must be >= 0, got {sigma_n_sq}")
    l = d.size
    z = _forward(d)
    ft = fourier_transmittance(gains)
    noise = GaussianEnsemble(l, sigma_n_sq, noise_seed).sample()
    noise_fft = _forward(noise)
    output = ft * z + noise_fft
    domain = subcarrier_domain(np.diag(ft), l)
    domain_output = domain.entries @ d + noise_fft
    return TransmissionRecord(z, d, ft, noise_fft, output, domain_output)


def path_matrix(paths, l: int) -> np.ndarray:
    """Path-decomposed channel matrix T = sum_i x_i b(cos theta_i) b(cos theta_i*)^H."""
    T = np.zeros((l, l), dtype=complex)
    for p in paths:
        if p.gain < 0:
            raise ValueError(f"gain must be >= 0, got {p.gain}")
        out_vec = basis_vector(np.cos(p.angles.theta), l, l).entries
        in_vec = basis_vector(np.cos(p.angles.theta_star), l, l).entries
        T += p.gain * np.outer(out_vec, in_vec.conj())
    return T


def subcarrier_domain(T: np.ndarray, l: int | None = None) -> SubcarrierDomainMatrix:
    """Subcarrier-domain representation of a square channel matrix.

    entry(k, i) = b(k/l)^H . T . b(i/l), a unitary congruence that preserves
    the Frobenius norm.
    """
    T = np.asarray(T, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError(f"square matrix required, got shape {T.shape}")
    if l is None:
        l = T.shape[0]
    elif l != T.shape[0]:
        raise ValueError(f"matrix size {T.shape[0]} does not match l={l}")
    U = build_cvqft(l).entries
    entries = U.conj().T @ T @ U
    return SubcarrierDomainMatrix(l, l, entries, float(np.linalg.norm(T)))


def domain_transmit(d: np.ndarray, domain_matrix, noise: np.ndarray) -> np.ndarray:
    """Subcarrier-domain transmission: y = R_phi . d + F(Delta)."""
    d = np.asarray(d, dtype=complex)
    entries = (domain_matrix.entries if isinstance(domain_matrix, SubcarrierDomainMatrix)
               else np.asarray(domain_matrix, dtype=complex))
    noise = np.asarray(noise, dtype=complex)
    if entries.shape[1] != d.size:
        raise ValueError(f"dimension mismatch: matrix {entries.shape} vs input {d.size}")
    if noise.size != entries.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {entries.shape} vs noise {noise.size}")
    return entries @ d + noise


def statistical_model(rows: int, cols: int, sigma_sq: float, seed: int) -> np.ndarray:
    """One draw of the averaged channel statistics: a rows x cols matrix of
    i.i.d. circular-symmetric complex Gaussians with per-quadrature variance
    sigma_sq."""
    sample = GaussianEnsemble(rows * cols, sigma_sq, seed).sample()
    return sample.reshape(rows, cols)
