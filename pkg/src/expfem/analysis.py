"""Error norms, discrete energy and convergence/timing studies.

Norms and energies integrate the multilinear interpolant of the nodal
tensor with a tensor-product Gauss rule (3 points per axis by default,
exact for squares of multilinear functions).  Studies run refinement
ladders and report errors at the terminal time with dyadic convergence
rates between consecutive rungs.
"""

import datetime
import math
from dataclasses import dataclass, field

import numpy as np

from .mesh import dof_shape, extend_nodal
from .problems import NonlinearityDomainError, mesh_for
from .quadrature import apply_matrix, axis_quadrature, integrate
from .stepper import SchemeConfig, run
from .transforms import inverse_transform

# relative coordinate step of the 4th-order stencil differentiating
# exact solutions for the H1 seminorm; evaluated in extended precision so
# the rounding floor stays below the interpolation-exactness tolerance
_GRAD_FD_REL_STEP = 1e-3


def sup_norm(U):
    """Largest nodal magnitude."""
    return float(np.max(np.abs(U)))


def _interpolant_on_gauss(U, mesh, t, npts):
    """Interpolant values and per-axis slopes on the Gauss grid."""
    full = extend_nodal(U, mesh, t)
    coords, weights, val_mats, slope_mats = [], [], [], []
    for p in mesh.partitions:
        x, w, values, slopes = axis_quadrature(p, npts)
        coords.append(x)
        weights.append(w)
        val_mats.append(values)
        slope_mats.append(slopes)
    vals = full
    for a, m in enumerate(val_mats):
        vals = apply_matrix(m, vals, a)
    grads = []
    for a_diff in range(mesh.dim):
        g = full
        for a in range(mesh.dim):
            g = apply_matrix(slope_mats[a] if a == a_diff else val_mats[a], g, a)
        grads.append(g)
    grid = np.ix_(*coords) if mesh.dim > 1 else (coords[0],)
    return vals, grads, grid, weights


def _exact_gradient(exact, t, grid, axis, span):
    """4th-order central difference of the exact solution along one axis."""
    d = np.longdouble(_GRAD_FD_REL_STEP * span)
    shifted = []
    for c in (-2.0, -1.0, 1.0, 2.0):
        xs = [np.asarray(g, dtype=np.longdouble) for g in grid]
        xs[axis] = xs[axis] + np.longdouble(c) * d
        shifted.append(np.asarray(exact(t, tuple(xs)), dtype=np.longdouble))
    out = (shifted[0] - 8.0 * shifted[1] + 8.0 * shifted[2] - shifted[3]) / (12.0 * d)
    return np.asarray(out, dtype=float)


def error_norms(U, mesh, exact, t, npts=3):
    """(L2, H1) distance between the interpolant of U and `exact` at time t."""
    vals, grads, grid, weights = _interpolant_on_gauss(U, mesh, t, npts)
    diff = vals - np.broadcast_to(np.asarray(exact(t, grid), dtype=float), vals.shape)
    l2_sq = integrate(weights, diff * diff)
    h1_sq = l2_sq
    for a, p in enumerate(mesh.partitions):
        dref = _exact_gradient(exact, t, grid, a, p.b - p.a)
        gdiff = grads[a] - np.broadcast_to(dref, grads[a].shape)
        h1_sq += integrate(weights, gdiff * gdiff)
    return math.sqrt(l2_sq), math.sqrt(h1_sq)


def discrete_energy(U, mesh, eps, theta, theta_c, npts=3):
    """Free energy of the interpolant: logarithmic mixing potential,
    quadratic well and gradient penalty."""
    if sup_norm(U) >= 1.0:
        worst = np.argmax(np.abs(np.asarray(U)))
        raise NonlinearityDomainError(float(np.asarray(U).flat[worst]))
    vals, grads, _, weights = _interpolant_on_gauss(U, mesh, 0.0, npts)
    mixing = (1.0 + vals) * np.log1p(vals) + (1.0 - vals) * np.log1p(-vals)
    density = 0.5 * theta * mixing - 0.5 * theta_c * vals * vals
    grad_sq = sum(g * g for g in grads)
    return integrate(weights, density + 0.5 * eps**2 * grad_sq)


class TimeSeriesObserver:
    """Collects (t, sup-norm[, energy]) rows at observation steps."""

    def __init__(self, mesh, energy_params=None, npts=3):
        self.mesh = mesh
        self.energy_params = energy_params
        self.npts = npts
        self.rows = []

    def __call__(self, step, t, U):
        if self.energy_params is not None:
            eps, theta, theta_c = self.energy_params
            energy = discrete_energy(U, self.mesh, eps, theta, theta_c, self.npts)
        else:
            energy = None
        self.rows.append((t, sup_norm(U), energy))


@dataclass
class StudyRow:
    resolution: str
    nt: int
    err_l2: float = None
    err_h1: float = None
    rate_l2: float = None
    rate_h1: float = None
    sec_per_step: float = None
    growth: float = None


@dataclass
class StudyReport:
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


def _resolution_label(subdivisions):
    return "x".join(str(int(n)) for n in subdivisions)


def _mean_step_seconds(times):
    # first step absorbs weight-tensor setup and cache warmup
    steady = times[1:] if len(times) > 1 else times
    return sum(steady) / len(steady) if steady else None


def convergence_study(problem, rungs, scheme="rk2", c2=0.5, T=None,
                      initial_mode="interpolate", npts=3, workers=None):
    """Run a refinement ladder and report terminal-time errors and rates.

    `rungs` is a list of (per-axis subdivisions, nt) pairs; consecutive
    rungs are assumed dyadic in whichever of the two is being refined.
    """
    if problem.exact is None:
        raise ValueError(f"problem {problem.name} has no exact solution")
    T = problem.T_default if T is None else T
    report = StudyReport(metadata={
        "problem": problem.name,
        "scheme": scheme,
        "c2": c2,
        "T": T,
        "created": datetime.datetime.now().isoformat(timespec="seconds"),
    })
    prev = None
    for subdivisions, nt in rungs:
        mesh = mesh_for(problem, subdivisions)
        cfg = SchemeConfig(dt=T / nt, T=T, scheme=scheme, c2=c2)
        times = []
        state = run(problem, mesh, cfg, initial_mode=initial_mode,
                    workers=workers, step_times=times)
        U = inverse_transform(state.coeffs, mesh, workers)
        l2, h1 = error_norms(U, mesh, problem.exact, state.t, npts)
        row = StudyRow(
            resolution=_resolution_label(subdivisions),
            nt=nt,
            err_l2=l2,
            err_h1=h1,
            sec_per_step=_mean_step_seconds(times),
        )
        if prev is not None:
            row.rate_l2 = math.log2(prev.err_l2 / l2)
            row.rate_h1 = math.log2(prev.err_h1 / h1)
        report.rows.append(row)
        prev = row
    return report


def timing_study(problem, ladders, nt, scheme="rk2", c2=0.5, T=None,
                 initial_mode="interpolate", workers=None):
    """Measure steady per-step cost over a spatial ladder at fixed nt."""
    T = problem.T_default if T is None else T
    report = StudyReport(metadata={
        "problem": problem.name,
        "scheme": scheme,
        "c2": c2,
        "T": T,
        "nt": nt,
        "created": datetime.datetime.now().isoformat(timespec="seconds"),
    })
    prev_row, prev_nodes = None, None
    for subdivisions in ladders:
        mesh = mesh_for(problem, subdivisions)
        cfg = SchemeConfig(dt=T / nt, T=T, scheme=scheme, c2=c2)
        times = []
        run(problem, mesh, cfg, initial_mode=initial_mode,
            workers=workers, step_times=times)
        nodes = int(np.prod(dof_shape(mesh)))
        row = StudyRow(
            resolution=_resolution_label(subdivisions),
            nt=nt,
            sec_per_step=_mean_step_seconds(times),
        )
        if prev_row is not None:
            row.growth = (math.log(row.sec_per_step / prev_row.sec_per_step)
                          / math.log(nodes / prev_nodes))
        report.rows.append(row)
        prev_row, prev_nodes = row, nodes
    return report
