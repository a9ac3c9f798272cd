"""Numpy paint kernels: the pure-Python fallback backend.

Blend rule per channel: floor(alpha * color + (1 - alpha) * original + 0.5),
computed in IEEE doubles. Glyph ink test: floor(0.299R + 0.587G + 0.114B + 0.5)
strictly below the threshold, evaluated on the image state at paint time.
The expression order here must not change: the compiled backend mirrors it
operation for operation so both produce byte-identical images.
"""

import numpy as np

BACKEND_NAME = "python"


def paint_solid(img, x0, y0, x1, y1, r, g, b, alpha):
    """Blend (r, g, b) over img[y0:y1, x0:x1] in place. Coordinates pre-clipped."""
    region = img[y0:y1, x0:x1]
    color = np.array([r, g, b], dtype=np.float64)
    blended = np.floor(alpha * color + (1.0 - alpha) * region + 0.5)
    region[:] = blended.astype(np.uint8)


def paint_glyph(img, x0, y0, x1, y1, r, g, b, alpha, threshold):
    """Blend (r, g, b) over the sub-threshold-luminance pixels of the box."""
    region = img[y0:y1, x0:x1]
    f = region.astype(np.float64)
    lum = np.floor(0.299 * f[:, :, 0] + 0.587 * f[:, :, 1] + 0.114 * f[:, :, 2] + 0.5)
    mask = lum < threshold
    color = np.array([r, g, b], dtype=np.float64)
    blended = np.floor(alpha * color + (1.0 - alpha) * region + 0.5).astype(np.uint8)
    region[mask] = blended[mask]
