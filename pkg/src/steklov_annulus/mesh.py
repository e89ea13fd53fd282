"""Quad-strip surface meshes of the stretched catenoids, written as Wavefront OBJ."""

from __future__ import annotations

import csv
import io
import math

import numpy as np

from .errors import ResolutionError
from .family import FreeBoundaryMap


def surface_mesh(fbm: FreeBoundaryMap, n_t: int, n_theta: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertices ``(n_t*n_theta, 3)`` and zero-based quads ``((n_t-1)*n_theta, 4)``.

    Vertex ``i*n_theta + j`` is the image of ``(t_i, theta_j)``; the theta seam
    is closed by wrapping ``j + 1`` modulo ``n_theta`` (no duplicated column).
    """
    if n_t < 8 or n_theta < 8:
        raise ResolutionError(f"mesh resolution must be at least 8, got {n_t}x{n_theta}")
    t = np.linspace(0.0, fbm.T, n_t)
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    tt, th = np.meshgrid(t, theta, indexing="ij")
    vertices = fbm.evaluate(tt, th).reshape(-1, 3)

    i, j = np.meshgrid(np.arange(n_t - 1), np.arange(n_theta), indexing="ij")
    j1 = (j + 1) % n_theta
    faces = np.stack(
        [i * n_theta + j, (i + 1) * n_theta + j, (i + 1) * n_theta + j1, i * n_theta + j1], axis=-1
    ).reshape(-1, 4)
    return vertices, faces


def to_obj(vertices: np.ndarray, faces: np.ndarray, comment: str = "") -> str:
    lines = [f"# {line}" for line in comment.splitlines()]
    lines += [f"v {x!r} {y!r} {z!r}" for x, y, z in vertices.tolist()]
    lines += ["f " + " ".join(str(k + 1) for k in quad) for quad in faces.tolist()]
    return "\n".join(lines) + "\n"


def profile_csv(fbm: FreeBoundaryMap, n_t: int) -> str:
    """Generating curve ``(t, axial, radius)`` of the surface of revolution."""
    t = np.linspace(0.0, fbm.T, n_t)
    axial = fbm.axial(t)
    radius = np.abs(fbm.c2 * fbm.phi(t))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "axial", "radius"])
    for row in zip(t, axial, radius):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()
