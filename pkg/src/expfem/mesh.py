"""Uniform tensor-product meshes on rectangular boxes.

A mesh is a list of per-axis uniform partitions plus one boundary kind
applying to the whole boundary.  Dirichlet meshes own the interior nodes
only; periodic meshes own nodes 0..N-1 (node N is identified with 0).
"""

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np


@dataclass(frozen=True)
class Partition1D:
    """Uniform partition of [a, b] into n subintervals of size h."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"empty interval [{self.a}, {self.b}]")
        if self.n < 2:
            raise ValueError(f"need at least 2 subintervals, got {self.n}")

    @property
    def h(self):
        return (self.b - self.a) / self.n


@dataclass(frozen=True)
class HomogeneousDirichlet:
    """Zero trace on the whole boundary."""


@dataclass(frozen=True)
class Dirichlet:
    """Prescribed boundary trace g(t, xs), optionally with analytic d/dt."""

    trace: Callable
    trace_dt: Optional[Callable] = None


@dataclass(frozen=True)
class Periodic:
    """Opposite faces identified."""


BoundaryKind = Union[HomogeneousDirichlet, Dirichlet, Periodic]


def is_periodic(bc):
    return isinstance(bc, Periodic)


@dataclass(frozen=True)
class TensorMesh:
    partitions: tuple
    bc: BoundaryKind

    def __post_init__(self):
        if not 1 <= len(self.partitions) <= 3:
            raise ValueError(f"dimension must be 1..3, got {len(self.partitions)}")
        object.__setattr__(self, "partitions", tuple(self.partitions))

    @property
    def dim(self):
        return len(self.partitions)


def make_mesh(bounds, subdivisions, bc):
    """Build a TensorMesh from per-axis (a, b) bounds and subinterval counts."""
    if len(bounds) != len(subdivisions):
        raise ValueError("bounds and subdivisions disagree on dimension")
    parts = tuple(Partition1D(a, b, n) for (a, b), n in zip(bounds, subdivisions))
    return TensorMesh(parts, bc)


def dof_shape(mesh):
    """Per-axis owned-node counts: N-1 for Dirichlet kinds, N for periodic."""
    if is_periodic(mesh.bc):
        return [p.n for p in mesh.partitions]
    return [p.n - 1 for p in mesh.partitions]


def owned_axis_coordinates(mesh, axis):
    """Coordinates of the owned nodes along one axis."""
    p = mesh.partitions[axis]
    if is_periodic(mesh.bc):
        return p.a + p.h * np.arange(p.n)
    return p.a + p.h * np.arange(1, p.n)


def node_coordinates(mesh, multi_index):
    """Physical coordinates of one owned node."""
    idx = (int(multi_index),) if np.isscalar(multi_index) else tuple(
        int(j) for j in multi_index)
    if len(idx) != mesh.dim:
        raise IndexError(f"index rank {len(idx)} does not match mesh dim {mesh.dim}")
    shape = dof_shape(mesh)
    out = []
    for a, (j, p) in enumerate(zip(idx, mesh.partitions)):
        if not 0 <= j < shape[a]:
            raise IndexError(f"index {j} out of range [0, {shape[a]}) on axis {a}")
        offset = 0 if is_periodic(mesh.bc) else 1
        out.append(p.a + (j + offset) * p.h)
    return tuple(out)


def node_grids(mesh):
    """Owned-node coordinates as an open (broadcastable) grid."""
    arrays = [owned_axis_coordinates(mesh, a) for a in range(mesh.dim)]
    return tuple(np.ix_(*arrays)) if mesh.dim > 1 else (arrays[0],)


def full_axis_coordinates(mesh, axis):
    """All node coordinates 0..N along one axis (node N closes the box)."""
    p = mesh.partitions[axis]
    return p.a + p.h * np.arange(p.n + 1)


def full_grids(mesh):
    """Full-grid coordinates (including boundary/wrap nodes) as an open grid."""
    arrays = [full_axis_coordinates(mesh, a) for a in range(mesh.dim)]
    return tuple(np.ix_(*arrays)) if mesh.dim > 1 else (arrays[0],)


def extend_nodal(U, mesh, t=0.0):
    """Extend an owned-node tensor to the full grid 0..N along every axis.

    Dirichlet boundaries take the trace values (zero for the homogeneous
    kind); periodic fields wrap node N back to node 0.
    """
    U = np.asarray(U, dtype=float)
    if list(U.shape) != dof_shape(mesh):
        raise ValueError(f"nodal shape {U.shape} does not match mesh {dof_shape(mesh)}")
    if is_periodic(mesh.bc):
        out = U
        for a in range(mesh.dim):
            first = np.take(out, [0], axis=a)
            out = np.concatenate([out, first], axis=a)
        return out
    full_shape = tuple(p.n + 1 for p in mesh.partitions)
    out = np.zeros(full_shape)
    interior = tuple(slice(1, -1) for _ in range(mesh.dim))
    out[interior] = U
    if isinstance(mesh.bc, Dirichlet):
        _fill_boundary(out, mesh, mesh.bc.trace, t)
    return out


def _fill_boundary(full, mesh, fn, t):
    """Write fn(t, xs) onto every boundary face of a full-grid tensor."""
    grids = full_grids(mesh)
    for a in range(mesh.dim):
        p = mesh.partitions[a]
        for sel_a, coord in ((slice(0, 1), p.a), (slice(-1, None), p.b)):
            face = list(grids)
            face[a] = np.asarray(coord)
            sel = [slice(None)] * mesh.dim
            sel[a] = sel_a
            full[tuple(sel)] = np.broadcast_to(
                fn(t, tuple(face)), full[tuple(sel)].shape)


def aspect_ratio(mesh):
    """Ratio of the largest to the smallest subinterval size."""
    hs = [p.h for p in mesh.partitions]
    return max(hs) / min(hs)
