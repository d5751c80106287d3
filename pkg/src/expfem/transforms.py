"""Fast orthogonal transforms diagonalizing the 1D mass/stiffness pairs.

For a uniform partition into N cells the P1 mass and stiffness matrices
are, up to h-scaling, tridiag(1,4,1) and tridiag(-1,2,-1) on the interior
nodes (Dirichlet) or their circulant closures on all N nodes (periodic).
Both pairs share one orthogonal eigenbasis: type-I discrete sine vectors
sin(ij*pi/N) for Dirichlet, the real Fourier (cosine/sine) vectors for
periodic.  The fast paths below realize the basis change with scipy FFT
kernels; `basis_matrix` gives the dense realization used by the tests.

Conventions: the Dirichlet forward transform is the plain sine matrix P
(symmetric, P^2 = (N/2) I, inverse (2/N) P); the periodic transform is
orthonormal, packing cosine coefficients at indices 0..N/2 and sine
coefficients at indices N-1..N/2+1.
"""

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .mesh import dof_shape, is_periodic


@dataclass(frozen=True)
class AxisSpectrum:
    """Eigenvalues of one axis' mass and stiffness matrices, index-aligned
    with the transform basis columns."""

    mass: np.ndarray
    stiffness: np.ndarray

    def __post_init__(self):
        if np.any(self.mass <= 0):
            raise ValueError("mass eigenvalues must be positive")
        if np.any(self.stiffness < 0):
            raise ValueError("stiffness eigenvalues must be nonnegative")


def build_axis_matrices(p, bc):
    """Dense 1D mass and stiffness matrices (h/6- and 1/h-scaled)."""
    if is_periodic(bc):
        m = p.n
        mass = np.zeros((m, m))
        stiff = np.zeros((m, m))
        i = np.arange(m)
        mass[i, i] = 4.0
        mass[i, (i + 1) % m] += 1.0
        mass[i, (i - 1) % m] += 1.0
        stiff[i, i] = 2.0
        stiff[i, (i + 1) % m] += -1.0
        stiff[i, (i - 1) % m] += -1.0
    else:
        m = p.n - 1
        mass = 4.0 * np.eye(m) + np.eye(m, k=1) + np.eye(m, k=-1)
        stiff = 2.0 * np.eye(m) - np.eye(m, k=1) - np.eye(m, k=-1)
    return (p.h / 6.0) * mass, (1.0 / p.h) * stiff


def axis_spectrum(p, bc):
    """Closed-form eigenvalues, aligned with `basis_matrix` columns.

    Dirichlet mode i (1-based): mass (h/6)(6 - 4 sin^2(i pi / 2N)),
    stiffness (4/h) sin^2(i pi / 2N).  Periodic mode k (0-based, Fourier):
    mass (h/6)(6 - 4 sin^2(k pi / N)), stiffness (4/h) sin^2(k pi / N).
    """
    if is_periodic(bc):
        k = np.arange(p.n)
        s2 = np.sin(k * np.pi / p.n) ** 2
    else:
        i = np.arange(1, p.n)
        s2 = np.sin(i * np.pi / (2 * p.n)) ** 2
    return AxisSpectrum(
        mass=(p.h / 6.0) * (6.0 - 4.0 * s2),
        stiffness=(4.0 / p.h) * s2,
    )


def basis_matrix(p, bc):
    """Dense transform basis; columns are the shared eigenvectors."""
    if is_periodic(bc):
        n = p.n
        j = np.arange(n)[:, None]
        q = np.empty((n, n))
        q[:, 0] = 1.0 / np.sqrt(n)
        kmax = (n - 1) // 2
        k = np.arange(1, kmax + 1)[None, :]
        q[:, 1:kmax + 1] = np.sqrt(2.0 / n) * np.cos(2 * np.pi * j * k / n)
        q[:, n - kmax:] = np.sqrt(2.0 / n) * np.sin(
            2 * np.pi * j * k[:, ::-1] / n)
        if n % 2 == 0:
            q[:, n // 2] = ((-1.0) ** j[:, 0]) / np.sqrt(n)
        return q
    ij = np.arange(1, p.n)
    return np.sin(np.outer(ij, ij) * np.pi / p.n)


def _forward_axis(u, p, bc, axis, workers=None):
    if is_periodic(bc):
        return _real_dft_forward(u, axis, workers)
    # plain sine matrix: scipy's DST-I carries a factor 2
    return 0.5 * scipy.fft.dst(u, type=1, axis=axis, workers=workers)


def _inverse_axis(u, p, bc, axis, workers=None):
    if is_periodic(bc):
        return _real_dft_inverse(u, axis, workers)
    return scipy.fft.dst(u, type=1, axis=axis, workers=workers) / p.n


def _real_dft_forward(u, axis, workers=None):
    n = u.shape[axis]
    x = scipy.fft.rfft(u, axis=axis, workers=workers)
    xm = np.moveaxis(x, axis, -1)
    out = np.empty(xm.shape[:-1] + (n,))
    kmax = (n - 1) // 2
    out[..., 0] = xm[..., 0].real / np.sqrt(n)
    if kmax >= 1:
        s = np.sqrt(2.0 / n)
        out[..., 1:kmax + 1] = s * xm[..., 1:kmax + 1].real
        out[..., n - kmax:] = -s * xm[..., kmax:0:-1].imag
    if n % 2 == 0:
        out[..., n // 2] = xm[..., n // 2].real / np.sqrt(n)
    return np.ascontiguousarray(np.moveaxis(out, -1, axis))


def _real_dft_inverse(u, axis, workers=None):
    n = u.shape[axis]
    um = np.moveaxis(u, axis, -1)
    x = np.zeros(um.shape[:-1] + (n // 2 + 1,), dtype=complex)
    kmax = (n - 1) // 2
    x[..., 0] = np.sqrt(n) * um[..., 0]
    if kmax >= 1:
        s = np.sqrt(n / 2.0)
        x[..., 1:kmax + 1] = s * (um[..., 1:kmax + 1]
                                  - 1j * um[..., :n - kmax - 1:-1])
    if n % 2 == 0:
        x[..., n // 2] = np.sqrt(n) * um[..., n // 2]
    out = scipy.fft.irfft(x, n=n, axis=-1, workers=workers)
    return np.ascontiguousarray(np.moveaxis(out, -1, axis))


def forward_transform(U, mesh, workers=None):
    """Transform a nodal tensor to modal coefficients, axis by axis."""
    U = np.asarray(U, dtype=float)
    if list(U.shape) != dof_shape(mesh):
        raise ValueError(
            f"shape {U.shape} does not match mesh dof shape {dof_shape(mesh)}")
    out = U
    for a, p in enumerate(mesh.partitions):
        out = _forward_axis(out, p, mesh.bc, a, workers)
    return out


def inverse_transform(U, mesh, workers=None):
    """Exact inverse of `forward_transform` up to round-off."""
    U = np.asarray(U, dtype=float)
    if list(U.shape) != dof_shape(mesh):
        raise ValueError(
            f"shape {U.shape} does not match mesh dof shape {dof_shape(mesh)}")
    out = U
    for a, p in enumerate(mesh.partitions):
        out = _inverse_axis(out, p, mesh.bc, a, workers)
    return out
