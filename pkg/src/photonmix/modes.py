"""Hermite-Gaussian transverse modes at the waist plane.

Each mode is real, separable and unit-normalised over the plane::

    U(x, y) = u_n(x - cx) * u_m(y - cy)
    u_n(s) = sqrt(sqrt(2) / w0) * psi_n(sqrt(2) * s / w0)

where ``psi_n`` is the orthonormal Hermite function, computed by the
three-term recurrence in :mod:`photonmix.kernels`.
"""
import math
from dataclasses import dataclass, replace

import numpy as np

from photonmix import kernels
from photonmix.errors import InvalidParameterError
from photonmix.quadrature import Rect, default_order, quad2d

FULL_PLANE_WAISTS = 6.0


@dataclass(frozen=True)
class TransverseMode:
    order_x: int = 0
    order_y: int = 0
    waist: float = 1.0
    center_x: float = 0.0
    center_y: float = 0.0

    def __post_init__(self):
        for name in ("order_x", "order_y"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 0:
                raise InvalidParameterError(f"{name} must be a non-negative integer, got {value!r}")
        if not (math.isfinite(self.waist) and self.waist > 0):
            raise InvalidParameterError(f"waist must be positive, got {self.waist!r}")
        if not (math.isfinite(self.center_x) and math.isfinite(self.center_y)):
            raise InvalidParameterError("mode center must be finite")

    @property
    def label(self):
        return f"TEM{self.order_x}{self.order_y}"

    def shifted(self, center_x=None, center_y=None):
        """Copy of the mode with a new axis position."""
        return replace(
            self,
            center_x=self.center_x if center_x is None else center_x,
            center_y=self.center_y if center_y is None else center_y,
        )

    def support(self, waists=FULL_PLANE_WAISTS):
        """Rectangle holding the mode to ``waists`` beam waists from its axis."""
        half = waists * self.waist
        return Rect.centered(self.center_x, self.center_y, half, half)

    def __call__(self, x, y):
        return eval_mode(self, x, y)


def profile_1d(order, waist, s):
    """Unit-normalised 1-D Hermite-Gaussian factor at offsets ``s`` from the axis."""
    scale = math.sqrt(2.0) / waist
    return math.sqrt(scale) * kernels.hermite_function(order, scale * np.asarray(s, dtype=float))


def eval_mode(mode, x, y):
    """Mode amplitude U(x, y) (units of 1/length); broadcasts over array inputs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ux = profile_1d(mode.order_x, mode.waist, x - mode.center_x)
    uy = profile_1d(mode.order_y, mode.waist, y - mode.center_y)
    out = ux * uy
    return float(out) if out.ndim == 0 else out


def _union(a, b):
    return Rect(min(a.x_min, b.x_min), max(a.x_max, b.x_max),
                min(a.y_min, b.y_min), max(a.y_max, b.y_max))


def mode_overlap(a, b, window=None, order=None):
    """Overlap integral of two modes over ``window`` (full plane when ``None``).

    The full plane is the union of both modes' six-waist supports; the rule
    order grows with that box so narrow modes stay resolved.
    """
    if window is None:
        window = _union(a.support(), b.support())
        if order is None:
            base = default_order()
            span = max(window.x_max - window.x_min, window.y_max - window.y_min)
            order = max(base, math.ceil(base * span / (2 * FULL_PLANE_WAISTS * min(a.waist, b.waist))))
    return quad2d(lambda x, y: eval_mode(a, x, y) * eval_mode(b, x, y), window, order)
