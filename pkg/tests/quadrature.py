"""Polar quadrature on a disk for smooth weak-form integrals (test-side)."""

import numpy as np


def disk_polar_points(radius=1.0, nr=24, nphi=48):
    """Midpoint-ring points and area weights covering the whole disk."""
    hr = radius / nr
    hphi = 2 * np.pi / nphi
    r = (np.arange(nr) + 0.5) * hr
    phi = (np.arange(nphi) + 0.5) * hphi
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    pts = np.stack([rr * np.cos(pp), rr * np.sin(pp)], axis=-1).reshape(-1, 2)
    weights = (rr * hr * hphi).reshape(-1)
    return pts, weights
