"""Shared analytic phantoms and metrics for the test suite."""

import numpy as np

from mubtomo.classical_radon import PhaseSpaceGrid


def rel_l2(a, b) -> float:
    """Relative L2 distance ||a - b|| / ||b|| over flattened samples."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def gaussian_mixture_grid(n, extent, components) -> PhaseSpaceGrid:
    """Normalized mixture of isotropic Gaussians on a square grid.

    components: iterable of (weight, (cx, cp), sigma); weights should sum
    to 1 so the analytic projections below share the normalization.
    """
    x = np.linspace(-extent, extent, n)
    X, P = np.meshgrid(x, x, indexing="ij")
    vals = np.zeros((n, n))
    for w, (cx, cp), sig in components:
        vals += (
            w
            * np.exp(-((X - cx) ** 2 + (P - cp) ** 2) / (2 * sig * sig))
            / (2 * np.pi * sig * sig)
        )
    return PhaseSpaceGrid(values=vals, x_min=-extent, x_max=extent,
                          p_min=-extent, p_max=extent)


def gaussian_mixture_projection(s, theta, components) -> np.ndarray:
    """Exact Radon rows of the mixture: each component projects to a 1D
    Gaussian centered at cx cos(theta) + cp sin(theta) with the same sigma."""
    s = np.asarray(s, dtype=float)
    C, S = np.cos(theta), np.sin(theta)
    row = np.zeros_like(s)
    for w, (cx, cp), sig in components:
        mu = cx * C + cp * S
        row += w * np.exp(-((s - mu) ** 2) / (2 * sig * sig)) / np.sqrt(2 * np.pi * sig * sig)
    return row


# one isotropic unit-width Gaussian: rho = exp(-(x^2+p^2))/pi
ISOTROPIC = [(1.0, (0.0, 0.0), np.sqrt(0.5))]

# the two-peak phantom used by the reconstruction gates
TWO_GAUSSIAN = [(0.5, (1.5, 0.0), 0.5), (0.5, (-1.5, 0.0), 0.5)]

# no symmetry axis: distinct centers, weights and widths
ASYMMETRIC = [
    (0.5, (1.0, 0.7), 0.5),
    (0.3, (-0.8, -1.3), 0.7),
    (0.2, (0.3, -0.2), 0.35),
]
