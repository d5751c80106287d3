"""Shared test oracles.

The dense step oracle advances the semi-discrete system with a dense
generalized eigendecomposition (matrix exponential realized spectrally),
fully independent of the FFT solution path.  The residual oracle
differentiates closed-form solutions with mpmath's arbitrary-precision
derivatives.
"""

import math

import mpmath as mp
import numpy as np
import scipy.linalg

from expfem.assembly import (dense_boundary_load, dense_operator_matrices,
                             _nodal_reaction)
from expfem.operator import phi


def dense_modal_system(ctx):
    """Generalized eigendecomposition of (D*K, M) over the owned nodes."""
    M, K = dense_operator_matrices(ctx.mesh)
    lam, V = scipy.linalg.eigh(ctx.problem.diffusion * K, M)
    return M, lam, V


def _dense_load(ctx, t, U):
    M = dense_operator_matrices(ctx.mesh)[0]
    F = M @ _nodal_reaction(ctx, t, U).ravel()
    if ctx.lifted:
        F = F + dense_boundary_load(ctx, t).ravel()
    return F


def dense_euler_step(ctx, t, U, dt):
    """One exponential-Euler step computed densely."""
    M, lam, V = dense_modal_system(ctx)
    y = V.T @ (M @ U.ravel())
    g = V.T @ _dense_load(ctx, t, U)
    y1 = np.exp(-dt * lam) * y + dt * phi(1, -dt * lam) * g
    return (V @ y1).reshape(U.shape)


def dense_rk2_step(ctx, t, U, dt, c2=0.5):
    """One two-stage exponential RK step computed densely."""
    M, lam, V = dense_modal_system(ctx)
    y = V.T @ (M @ U.ravel())
    g1 = V.T @ _dense_load(ctx, t, U)
    ys = np.exp(-c2 * dt * lam) * y + c2 * dt * phi(1, -c2 * dt * lam) * g1
    Us = (V @ ys).reshape(U.shape)
    g2 = V.T @ _dense_load(ctx, t + c2 * dt, Us)
    p1, p2 = phi(1, -dt * lam), phi(2, -dt * lam)
    y1 = np.exp(-dt * lam) * y + dt * ((p1 - p2 / c2) * g1 + (p2 / c2) * g2)
    return (V @ y1).reshape(U.shape)


# ---------------------------------------------------------------------------
# high-precision closed forms of the builtin exact solutions

def mp_linear_rd_exact(t, x, y):
    pi = mp.pi
    return mp.exp(-pi**2 * t) * (mp.sin(pi * x) - 1) * mp.sin(pi * y)


def mp_wave_exact(eps):
    speed = 3 / (mp.sqrt(2) * mp.mpf(eps))
    width = 2 * mp.sqrt(2) * mp.mpf(eps)

    def exact(t, x, *rest):
        return (1 - mp.tanh((x - speed * t) / width)) / 2

    return exact


def pde_residual(problem, mp_exact, t, point, dps=40):
    """u_t - D*lap(u) - f(t, u, x) with mpmath derivatives of mp_exact."""
    with mp.workdps(dps):
        t = mp.mpf(t)
        point = [mp.mpf(c) for c in point]
        u_t = mp.diff(lambda tt: mp_exact(tt, *point), t)
        lap = mp.mpf(0)
        for i in range(len(point)):
            def along(v, i=i):
                shifted = list(point)
                shifted[i] = v
                return mp_exact(t, *shifted)
            lap += mp.diff(along, point[i], 2)
        u = mp_exact(t, *point)
    xs = tuple(np.asarray(float(c)) for c in point)
    f = float(np.asarray(problem.f(float(t), np.asarray(float(u)), xs)))
    return float(u_t) - problem.diffusion * float(lap) - f


def rel_err(a, b):
    """|a - b| scaled by the larger magnitude (absolute when both tiny)."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b)) / scale)
