"""Tensor-product Gauss-Legendre quadrature over rectangles."""
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from photonmix.errors import InvalidParameterError, NumericalDomainError

DEFAULT_ORDER = 64


def default_order():
    """Quadrature order per axis, overridable with ``PHOTONMIX_QUAD_ORDER``."""
    raw = os.environ.get("PHOTONMIX_QUAD_ORDER")
    if not raw:
        return DEFAULT_ORDER
    try:
        order = int(raw)
    except ValueError:
        raise InvalidParameterError(f"PHOTONMIX_QUAD_ORDER must be an integer, got {raw!r}")
    if order < 2:
        raise InvalidParameterError("PHOTONMIX_QUAD_ORDER must be >= 2")
    return order


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle ``[x_min, x_max] x [y_min, y_max]``."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise InvalidParameterError(f"rectangle must have positive extents: {self}")
        if not all(np.isfinite([self.x_min, self.x_max, self.y_min, self.y_max])):
            raise InvalidParameterError(f"rectangle bounds must be finite: {self}")

    @classmethod
    def centered(cls, cx, cy, half_x, half_y):
        return cls(cx - half_x, cx + half_x, cy - half_y, cy + half_y)


@lru_cache(maxsize=64)
def _leggauss(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(lo, hi, order):
    """Nodes and weights of the ``order``-point rule mapped onto ``[lo, hi]``."""
    if order < 2:
        raise InvalidParameterError(f"quadrature order must be >= 2, got {order}")
    nodes, weights = _leggauss(int(order))
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return mid + half * nodes, half * weights


def _check_finite(values):
    if not np.all(np.isfinite(values)):
        raise NumericalDomainError("integrand produced a non-finite sample")


def quad2d(f, window, order=None):
    """Integrate ``f(x, y)`` over ``window`` with a tensor Gauss-Legendre rule.

    ``f`` is called once with broadcastable 2-D arrays ``X`` (shape ``(n, 1)``)
    and ``Y`` (shape ``(1, n)``).
    """
    order = default_order() if order is None else order
    xs, wx = gauss_legendre(window.x_min, window.x_max, order)
    ys, wy = gauss_legendre(window.y_min, window.y_max, order)
    values = np.broadcast_to(np.asarray(f(xs[:, None], ys[None, :]), dtype=float), (order, order))
    _check_finite(values)
    return float(wx @ values @ wy)


def quad2d_with_error(f, window, order=None):
    """Return ``(estimate, error)``; error compares against the 2*order rule."""
    order = default_order() if order is None else order
    coarse = quad2d(f, window, order)
    fine = quad2d(f, window, 2 * order)
    return fine, abs(fine - coarse)


def quad1d(f, lo, hi, order=None):
    """1-D Gauss-Legendre integral; used for separable window integrals."""
    order = default_order() if order is None else order
    xs, w = gauss_legendre(lo, hi, order)
    values = np.asarray(f(xs), dtype=float)
    _check_finite(values)
    return float(w @ values)
