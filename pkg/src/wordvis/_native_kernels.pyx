# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled paint kernels: the hot per-pixel loops of mask rendering.

Must stay byte-identical to wordvis._py_kernels: same blend rule
floor(alpha * color + (1 - alpha) * original + 0.5) in IEEE doubles, same
luminance expression, same operation order.
"""

from libc.math cimport floor

BACKEND_NAME = "native"


def paint_solid(unsigned char[:, :, ::1] img, Py_ssize_t x0, Py_ssize_t y0,
                Py_ssize_t x1, Py_ssize_t y1, int r, int g, int b,
                double alpha):
    """Blend (r, g, b) over img[y0:y1, x0:x1] in place. Coordinates pre-clipped."""
    cdef double ar = alpha * r
    cdef double ag = alpha * g
    cdef double ab = alpha * b
    cdef double beta = 1.0 - alpha
    cdef Py_ssize_t x, y
    for y in range(y0, y1):
        for x in range(x0, x1):
            img[y, x, 0] = <unsigned char>floor(ar + beta * img[y, x, 0] + 0.5)
            img[y, x, 1] = <unsigned char>floor(ag + beta * img[y, x, 1] + 0.5)
            img[y, x, 2] = <unsigned char>floor(ab + beta * img[y, x, 2] + 0.5)


def paint_glyph(unsigned char[:, :, ::1] img, Py_ssize_t x0, Py_ssize_t y0,
                Py_ssize_t x1, Py_ssize_t y1, int r, int g, int b,
                double alpha, int threshold):
    """Blend (r, g, b) over the sub-threshold-luminance pixels of the box."""
    cdef double ar = alpha * r
    cdef double ag = alpha * g
    cdef double ab = alpha * b
    cdef double beta = 1.0 - alpha
    cdef double lum
    cdef Py_ssize_t x, y
    for y in range(y0, y1):
        for x in range(x0, x1):
            lum = floor(0.299 * img[y, x, 0] + 0.587 * img[y, x, 1]
                        + 0.114 * img[y, x, 2] + 0.5)
            if lum < threshold:
                img[y, x, 0] = <unsigned char>floor(ar + beta * img[y, x, 0] + 0.5)
                img[y, x, 1] = <unsigned char>floor(ag + beta * img[y, x, 1] + 0.5)
                img[y, x, 2] = <unsigned char>floor(ab + beta * img[y, x, 2] + 0.5)
