"""Concrete Grassmannian geometry: orthonormal frames, rotation charts,
projection operators, analytic tangent maps, and subspace distance.

A point of G(n, m) is carried as a Frame, an (m, n) array of orthonormal row
vectors.  Chart computations happen in the orthonormal coordinate system
given by (base frame, complement frame); conversion back to ambient
coordinates happens at the boundary of each operation.
"""

from dataclasses import dataclass, field

import numpy as np

FRAME_TOL = 1e-10
CHART_LIMIT = np.pi / 4


@dataclass(frozen=True)
class Frame:
    """Orthonormal basis of an m-plane in R^n, rows of `basis`."""

    basis: np.ndarray  # (m, n)

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.basis, dtype=float))
        object.__setattr__(self, "basis", b)
        m, n = b.shape
        if not 1 <= m < n:
            raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
        G = b @ b.T
        if np.max(np.abs(G - np.eye(m))) > 1e-8:
            raise ValueError("basis rows are not orthonormal")

    @property
    def ambient_dim(self):
        return self.basis.shape[1]

    @property
    def plane_dim(self):
        return self.basis.shape[0]


def orthonormalize(rows):
    """Gram-Schmidt in row order; preserves the span and the first
    direction.  Rows must be linearly independent."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    out = np.empty_like(rows)
    for i, v in enumerate(rows):
        w = v - out[:i].T @ (out[:i] @ v)
        nw = np.linalg.norm(w)
        if nw < 1e-12:
            raise ValueError("rows are numerically dependent")
        out[i] = w / nw
    return out


def span_frame(rows):
    """Frame spanned by the given (independent) row vectors."""
    return Frame(orthonormalize(rows))


def standard_frame(n, m):
    """The coordinate m-plane <e_1, ..., e_m> in R^n."""
    return Frame(np.eye(n)[:m])


def complement(f: Frame) -> Frame:
    """Orthonormal frame of the orthogonal complement, from the unused
    columns of a full QR of basis^T."""
    n = f.ambient_dim
    m = f.plane_dim
    Q, _ = np.linalg.qr(f.basis.T, mode="complete")
    comp = Q[:, m:].T
    # QR may flip orientation; irrelevant, rows are orthonormal by construction
    return Frame(comp)


def rotate(x, i, j, beta):
    """Rotate coordinate i of x toward coordinate j by angle beta (1-based
    indices into the working coordinate system); all other coordinates fixed.
    """
    if i == j:
        raise ValueError("rotation needs two distinct coordinates")
    x = np.asarray(x, dtype=float)
    out = x.copy()
    c, s = np.cos(beta), np.sin(beta)
    out[..., i - 1] = c * x[..., i - 1] - s * x[..., j - 1]
    out[..., j - 1] = s * x[..., i - 1] + c * x[..., j - 1]
    return out


@dataclass(frozen=True)
class ChartPoint:
    """Rotation-chart coordinates around a base frame.

    angles[i-1, j-m-1] is the rotation angle of basis vector i toward
    complement vector j, for i in 1..m and j in m+1..n; all |angles| < pi/4.
    """

    base: Frame
    angles: np.ndarray  # (m, n - m)
    comp: Frame = field(default=None)

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        m, n = self.base.plane_dim, self.base.ambient_dim
        if a.shape != (m, n - m):
            raise ValueError(f"angles must be shaped ({m}, {n - m})")
        if np.any(np.abs(a) >= CHART_LIMIT):
            raise ValueError("chart angles must satisfy |a_ij| < pi/4")
        object.__setattr__(self, "angles", a)
        if self.comp is None:
            object.__setattr__(self, "comp", complement(self.base))


def _coordinate_matrix(c: ChartPoint):
    """Rows = (base frame, complement frame): the working orthonormal
    coordinate system of the chart."""
    return np.vstack([c.base.basis, c.comp.basis])


def chart_rows(c: ChartPoint):
    """The m rotated spanning vectors e_i(angles), in chart coordinates.

    e_i(a) applies the slot rotations with j ascending from m+1 to n;
    rotations in distinct slots of the same row do not commute, so the
    order is part of the contract.  The rows span V(a) but are not exactly
    orthonormal when two rows rotate toward the same complement direction.
    """
    m, n = c.base.plane_dim, c.base.ambient_dim
    rows = np.eye(n)[:m]
    for i in range(1, m + 1):
        for j in range(m + 1, n + 1):
            rows[i - 1] = rotate(rows[i - 1], i, j, c.angles[i - 1, j - m - 1])
    return rows


def chart_point_frame(c: ChartPoint) -> Frame:
    """Frame of the plane V(angles), in ambient coordinates.

    The spanning rows are re-orthonormalized (span-preserving) so the
    result always satisfies the Frame invariants.
    """
    B = _coordinate_matrix(c)
    rows = chart_rows(c) @ B
    return span_frame(rows)


def projector(f: Frame):
    """Orthogonal projection matrix onto the plane, as a map R^n -> R^n."""
    return f.basis.T @ f.basis


def span_projector(rows):
    """Projection matrix onto the span of possibly non-orthonormal rows,
    E (E^T E)^{-1} E^T with E = rows^T."""
    E = np.atleast_2d(np.asarray(rows, dtype=float)).T
    G = E.T @ E
    return E @ np.linalg.solve(G, E.T)


def tangent_projection_derivative(c: ChartPoint, i, j, z):
    """Analytic derivative of a |-> Pi_{V(a)}(z) in the slot (i, j), at
    a = 0 of the given chart.

    In chart coordinates the derivative is z_j e_i + z_i e_j (the two cases
    for z in the complement and z in the plane, summed for general z).
    """
    m, n = c.base.plane_dim, c.base.ambient_dim
    if not (1 <= i <= m and m + 1 <= j <= n):
        raise ValueError(f"slot ({i}, {j}) outside 1..{m} x {m + 1}..{n}")
    B = _coordinate_matrix(c)
    zeta = B @ np.asarray(z, dtype=float)
    out = np.zeros(n)
    out[i - 1] = zeta[j - 1]
    out[j - 1] = zeta[i - 1]
    return B.T @ out


def principal_angles(f1: Frame, f2: Frame):
    """Principal angles between two planes of equal dimension."""
    if f1.ambient_dim != f2.ambient_dim or f1.plane_dim != f2.plane_dim:
        raise ValueError("frames must share ambient and plane dimensions")
    s = np.linalg.svd(f1.basis @ f2.basis.T, compute_uv=False)
    return np.arccos(np.clip(s, -1.0, 1.0))


def subspace_distance(f1: Frame, f2: Frame):
    """Largest principal angle between the two planes; 0 iff equal."""
    return float(np.max(principal_angles(f1, f2)))
