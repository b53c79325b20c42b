"""Unitary CVQFT operators, Fourier basis vectors, and the periodic-sinc kernel.

A multicarrier CVQKD transmission splits the physical Gaussian channel into
``l`` Gaussian sub-channels, and the continuous-variable quantum Fourier
transform (CVQFT) that moves between single carriers and subcarriers is
modelled by the unitary ``l x l`` DFT matrix.  Phase-space angles enter the
model through unit-norm Fourier (steering) vectors ``b(x)`` whose pairwise
alignment is governed by the Dirichlet-type kernel

    f(tau) = (1/l) * exp(i*pi*(l-1)*tau) * sin(pi*l*tau) / sin(pi*tau),

with ``tau = cos(theta) - cos(theta*)`` the cosine offset between the
received and transmitted subcarrier angles.  ``|f(tau)|`` equals
``|cos(Omega)|``, the alignment of the two basis directions, and has period
1 in ``tau``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FORWARD = "forward"
INVERSE = "inverse"

# Below this |sin(pi*tau)| the kernel denominator counts as singular and the
# removable singularity is resolved by its limit value.
SINGULARITY_GUARD = 1e-9

# theta* = pi/2 puts cos(theta*) = 0, the center of domain bin 0.
QUARTER_TURN = float(np.pi / 2)


def _basis_angles(count: int, cycles: float, size: int) -> np.ndarray:
    # Phase angles -2*pi*m*cycles/size for m = 0..count-1.  The evaluation
    # order matches _operator_angles so that on-grid basis vectors reproduce
    # DFT columns bit for bit whenever ``cycles`` is an exact integer.
    m = np.arange(count, dtype=float)
    return (-2.0 * np.pi) * (m * cycles) / size


def _operator_angles(size: int, sign: float) -> np.ndarray:
    mk = np.outer(np.arange(size, dtype=float), np.arange(size, dtype=float))
    return (sign * 2.0 * np.pi) * mk / size


@dataclass(frozen=True, eq=False)
class FourierOperator:
    """The l x l unitary CVQFT matrix (forward) or its inverse.

    Forward entries are exp(-2i*pi*m*k/l)/sqrt(l); the inverse flips the
    exponent sign.  The matrix is symmetric and its inverse equals its
    entrywise complex conjugate.
    """

    size: int
    direction: str
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.direction not in (FORWARD, INVERSE):
            raise ValueError(f"direction must be {FORWARD!r} or {INVERSE!r}")
        if self.entries.shape != (self.size, self.size):
            raise ValueError("entries shape does not match size")

    def inverse(self) -> "FourierOperator":
        flipped = INVERSE if self.direction == FORWARD else FORWARD
        return FourierOperator(self.size, flipped, self.entries.conj())

    def apply(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec)
        if vec.shape[0] != self.size:
            raise ValueError(f"vector length {vec.shape[0]} != operator size {self.size}")
        return self.entries @ vec


@dataclass(frozen=True, eq=False)
class BasisVector:
    """Unit-norm Fourier steering vector with entries exp(-2i*pi*m*l*x/K)/sqrt(K)."""

    length: int
    parameter: float
    scale: int
    entries: np.ndarray = field(repr=False)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))


@dataclass(frozen=True)
class AnglePair:
    """Transmitted/received phase-space angle pair (radians).

    ``tau`` and ``omega`` are derived on demand from the stored angles so
    they can never go stale.
    """

    theta_star: float
    theta: float

    @property
    def tau(self) -> float:
        """Cosine offset cos(theta) - cos(theta_star), always in [-2, 2]."""
        return float(np.cos(self.theta) - np.cos(self.theta_star))

    @property
    def omega(self) -> float:
        """Angle difference theta - theta_star."""
        return float(self.theta - self.theta_star)


@dataclass(frozen=True, eq=False)
class BasisSet:
    """Ordered orthonormal basis {b(0), b(1/l), ..., b((K-1)/l)} of C^K."""

    size: int
    scale: int
    members: tuple

    def matrix(self) -> np.ndarray:
        """K x K matrix whose columns are the member vectors."""
        return np.stack([m.entries for m in self.members], axis=1)

    def gram(self) -> np.ndarray:
        B = self.matrix()
        return B.conj().T @ B


def build_cvqft(l: int, direction: str = FORWARD) -> FourierOperator:
    """Build the l x l unitary CVQFT matrix.

    Parameters
    ----------
    l : int
        Number of Gaussian sub-channels (matrix size), at least 1.
    direction : str
        ``"forward"`` uses exp(-2i*pi*m*k/l), ``"inverse"`` exp(+2i*pi*m*k/l).

    Returns
    -------
    FourierOperator
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if direction not in (FORWARD, INVERSE):
        raise ValueError(f"direction must be {FORWARD!r} or {INVERSE!r}")
    sign = -1.0 if direction == FORWARD else 1.0
    entries = np.exp(1j * _operator_angles(l, sign)) / np.sqrt(l)
    return FourierOperator(l, direction, entries)


def basis_vector(x: float, K: int, l: int) -> BasisVector:
    """Fourier basis vector b(x) of length K at grid scale l.

    Entry m is exp(-2i*pi*m*l*x/K)/sqrt(K).  For K = l this reduces to
    exp(-2i*pi*m*x)/sqrt(l), and at x = k/l it equals column k of the
    forward CVQFT matrix.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    entries = np.exp(1j * _basis_angles(K, l * float(x), K)) / np.sqrt(K)
    return BasisVector(K, float(x), l, entries)


def basis_set(K: int, l: int) -> BasisSet:
    """Orthonormal set of K basis vectors with parameters 0, 1/l, ..., (K-1)/l."""
    members = tuple(basis_vector(k / l, K, l) for k in range(K))
    return BasisSet(K, l, members)


def f_tau(tau, l: int):
    """Evaluate the periodic Dirichlet-type kernel f(tau).

    f(tau) = (1/l) * exp(i*pi*(l-1)*tau) * sin(pi*l*tau) / sin(pi*tau).

    The function is exactly 1-periodic (the phase factor and the sine ratio
    both flip sign with the integer part of tau, so the product does not),
    which lets us reduce tau to its fractional offset r = tau - round(tau)
    before evaluating.  The reduction keeps the evaluation well conditioned
    near integer tau, where the raw quotient is 0/0.  At the removable
    singularity r = 0 the limit value exp(i*pi*(l-1)*r) is returned, so
    |f| = 1 there.

    Parameters
    ----------
    tau : float or array_like
        Cosine offset(s).
    l : int
        Number of sub-channels, at least 1.

    Returns
    -------
    complex or np.ndarray
        Kernel value(s), matching the input shape.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    arr = np.asarray(tau, dtype=float)
    r = arr - np.rint(arr)
    num = np.sin(np.pi * l * r)
    den = np.sin(np.pi * r)
    singular = np.abs(den) < SINGULARITY_GUARD
    phase = np.exp(1j * np.pi * (l - 1) * r)
    safe_den = np.where(singular, 1.0, den)
    value = np.where(singular, phase, (1.0 / l) * phase * num / safe_den)
    if np.isscalar(tau) or arr.ndim == 0:
        return complex(value)
    return value


def f_tau_sinc_limit(tau, l: int):
    """Large-l limit of f(tau): exp(i*pi*l*tau) * sinc(l*tau).

    Uses the normalized sinc(x) = sin(pi*x)/(pi*x) with sinc(0) = 1.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    arr = np.asarray(tau, dtype=float)
    value = np.exp(1j * np.pi * l * arr) * np.sinc(l * arr)
    if np.isscalar(tau) or arr.ndim == 0:
        return complex(value)
    return value


def cos_omega(pair: AnglePair, l: int) -> float:
    """|cos(Omega)| for an angle pair: the alignment |f(tau)| of the two
    basis directions b(cos theta*) and b(cos theta)."""
    return float(abs(f_tau(pair.tau, l)))


def kernel_plot(theta_star: float, l: int, resolution: int) -> np.ndarray:
    """Curve data (cos theta, |f(cos theta - cos theta*)|) on a uniform grid.

    The maximum value 1 occurs where cos theta = cos theta*.  Returns an
    array of shape (resolution, 2).
    """
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    cos_theta = np.linspace(-1.0, 1.0, resolution)
    values = np.abs(f_tau(cos_theta - np.cos(theta_star), l))
    return np.column_stack([cos_theta, values])


def basis_kernel_plot(k: int, l: int, resolution: int) -> np.ndarray:
    """Curve data (cos theta, |f(cos theta - k/l)|) for the b(k/l) basis
    vector; the maximum sits at cos theta = k/l."""
    if not 0 <= k <= l - 1:
        raise ValueError(f"k must be in [0, {l - 1}], got {k}")
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    cos_theta = np.linspace(-1.0, 1.0, resolution)
    values = np.abs(f_tau(cos_theta - k / l, l))
    return np.column_stack([cos_theta, values])


def bin_contains(cos_theta, k: int, l: int):
    """Domain-bin membership in cosine space: |cos theta - k/l| < 1/l."""
    if not 0 <= k <= l - 1:
        raise ValueError(f"k must be in [0, {l - 1}], got {k}")
    return np.abs(np.asarray(cos_theta, dtype=float) - k / l) < 1.0 / l


def in_domain_bin(theta: float, k: int, l: int) -> bool:
    """True iff the angle theta falls in domain bin k: |cos theta - k/l| < 1/l."""
    return bool(bin_contains(np.cos(theta), k, l))
