"""Per-axis Gauss rules and multilinear evaluation matrices.

Norms, energies and projection loads all integrate functions of the
multilinear interpolant; on a tensor grid this reduces to per-axis
matrices mapping full-grid nodal values to values (or slopes) at every
Gauss point, followed by weighted contractions.
"""

import numpy as np


def gauss_rule(npts):
    """Gauss-Legendre nodes and weights on the unit interval."""
    x, w = np.polynomial.legendre.leggauss(npts)
    return 0.5 * (x + 1.0), 0.5 * w


def axis_quadrature(p, npts=3):
    """Quadrature data for one axis of a uniform partition.

    Returns (coords, weights, values, slopes): Gauss-point coordinates
    and jacobian-scaled weights (length n*npts), plus dense matrices
    mapping n+1 nodal values to interpolant values and d/dx at those
    points.
    """
    xi, w = gauss_rule(npts)
    n, h = p.n, p.h
    coords = (p.a + (np.arange(n)[:, None] + xi[None, :]) * h).ravel()
    weights = np.tile(w * h, n)
    rows = np.arange(n * npts)
    els = rows // npts
    loc = np.tile(xi, n)
    values = np.zeros((n * npts, n + 1))
    slopes = np.zeros((n * npts, n + 1))
    values[rows, els] = 1.0 - loc
    values[rows, els + 1] = loc
    slopes[rows, els] = -1.0 / h
    slopes[rows, els + 1] = 1.0 / h
    return coords, weights, values, slopes


def apply_matrix(matrix, tensor, axis):
    """Rectangular mode product used by quadrature folds."""
    out = np.tensordot(matrix, tensor, axes=(1, axis))
    return np.moveaxis(out, 0, axis)


def integrate(per_axis_weights, values):
    """Contract a Gauss-grid tensor against per-axis weight vectors."""
    out = np.asarray(values, dtype=float)
    for w in per_axis_weights:
        out = np.tensordot(w, out, axes=(0, 0))
    return float(out)
