"""Bundled synthetic test images.

Real satellite photographs are not redistributable, so the bundled datasets
are deterministic synthetic patterns: `chart` has the sharp bar/disc edges
that make assimilation hard (large velocity and vorticity extremes), `blobs`
is a smooth easy case for quick runs.
"""

from __future__ import annotations

import numpy as np

from .imageio import IntensityImage

__all__ = ["resolution_chart", "smooth_blobs", "get_dataset", "list_datasets"]


def _disc(mask_x, mask_y, cx, cy, r):
    return (mask_x - cx) ** 2 + (mask_y - cy) ** 2 <= r * r


def resolution_chart(n: int = 256) -> IntensityImage:
    """Sharp test pattern: graded bar groups, a bullseye, discs and a frame."""
    px = np.zeros((n, n), dtype=np.uint8)
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    u = n / 256.0  # geometry scales with resolution

    def s(v):  # scaled coordinate, at least 1 pixel
        return max(1, int(round(v * u)))

    # frame
    m, t = s(20), s(4)
    px[m:n - m, m:m + t] = 230
    px[m:n - m, n - m - t:n - m] = 230
    px[m:m + t, m:n - m] = 230
    px[n - m - t:n - m, m:n - m] = 230

    # vertical bar groups of decreasing width (top-left quadrant)
    y0 = s(36)
    for gi, w in enumerate((12, 8, 5, 3)):
        wpx, gap = s(w), s(w)
        x0 = s(36)
        ytop, ybot = y0, y0 + s(28)
        for b in range(4):
            xa = x0 + b * (wpx + gap)
            px[xa:xa + wpx, ytop:ybot] = 255
        y0 = ybot + s(10)

    # horizontal bar groups (top-right quadrant)
    x0 = s(150)
    for gi, w in enumerate((12, 8, 5, 3)):
        wpx, gap = s(w), s(w)
        yb = s(36)
        for b in range(4):
            ya = yb + b * (wpx + gap)
            px[x0:x0 + s(60), ya:ya + wpx] = 255
        x0 += s(24)

    # bullseye (bottom-left)
    cx, cy = s(70), s(190)
    for r, val in ((s(34), 255), (s(24), 0), (s(15), 200), (s(7), 0)):
        px[_disc(ii, jj, cx, cy, r)] = val

    # solid discs of graded intensity (bottom-right)
    for k, (dx, val) in enumerate(((0, 255), (44, 170), (80, 90))):
        px[_disc(ii, jj, s(150 + dx), s(190), s(14))] = val

    # small checker block (center)
    c0, cs, nb = s(104), s(7), 6
    for a in range(nb):
        for b in range(nb):
            if (a + b) % 2 == 0:
                px[c0 + a * cs:c0 + (a + 1) * cs, c0 + b * cs:c0 + (b + 1) * cs] = 255
    return IntensityImage.from_array(px)


def smooth_blobs(n: int = 256) -> IntensityImage:
    """Smooth superposition of Gaussian blobs, rescaled to use 0..255."""
    x, y = np.meshgrid(np.linspace(0, 1, n, endpoint=False),
                       np.linspace(0, 1, n, endpoint=False), indexing="ij")
    blobs = (
        (1.0, 0.35, 0.40, 0.12),
        (0.8, 0.65, 0.60, 0.10),
        (0.6, 0.45, 0.70, 0.08),
        (0.7, 0.70, 0.30, 0.09),
    )
    f = np.zeros_like(x)
    for amp, cx, cy, sg in blobs:
        f += amp * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * sg * sg))
    px = np.floor(f / f.max() * 255.0).astype(np.uint8)
    return IntensityImage.from_array(px)


_DATASETS = {
    "chart": (resolution_chart, "sharp synthetic resolution chart (hard case)"),
    "blobs": (smooth_blobs, "smooth Gaussian blobs (easy case)"),
}


def list_datasets() -> list[dict]:
    return [{"name": k, "description": d} for k, (_, d) in _DATASETS.items()]


def get_dataset(name: str, n: int = 256) -> IntensityImage:
    if name not in _DATASETS:
        raise KeyError(f"unknown dataset {name!r}; have {sorted(_DATASETS)}")
    return _DATASETS[name][0](n)
