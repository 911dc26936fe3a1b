"""Finite-aperture correlations, misalignment scans and HOM dip metrics.

Integrating the symmetric-splitter bracket over two rectangular windows
factorises into 2-D window integrals ``I_XY(k) = \\iint_k U_X U_Y``::

    lo  = <n(n-1)> I_LL(1) I_LL(2)
    het = <n> [I_LL(1) I_PP(2) + I_LL(2) I_PP(1) - 2 I_LP(1) I_LP(2)]

Modes are separable, so each ``I_XY`` is a product of two 1-D Gauss-Legendre
sums, identical to the tensor-product rule applied to the 2-D integrand.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from photonmix.errors import InvalidParameterError, UndefinedVisibilityError
from photonmix.modes import FULL_PLANE_WAISTS, profile_1d
from photonmix.quadrature import Rect, default_order, gauss_legendre, quad2d, quad2d_with_error
from photonmix.quantum import SYMMETRIC_SCALE, CorrelationResult

__all__ = [
    "Point", "Window", "Detector", "ScanCurve", "quad2d", "quad2d_with_error",
    "window_integral", "w2_integrated", "misalignment_scan", "hom_metrics",
]

PLATEAU_MIN_SEPARATION = 4.0


@dataclass(frozen=True)
class Point:
    x: float
    y: float
    area: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.area) and self.area > 0):
            raise InvalidParameterError(f"point detector area must be positive, got {self.area!r}")


@dataclass(frozen=True)
class Window:
    center_x: float
    center_y: float
    half_width_x: float
    half_width_y: float

    def __post_init__(self):
        if not (self.half_width_x > 0 and self.half_width_y > 0):
            raise InvalidParameterError("window half-widths must be positive")

    @property
    def rect(self):
        return Rect.centered(self.center_x, self.center_y, self.half_width_x, self.half_width_y)


@dataclass(frozen=True)
class Detector:
    shape: Point | Window
    eta: float = 1.0

    def __post_init__(self):
        if not (0 < self.eta <= 1):
            raise InvalidParameterError(f"efficiency eta must lie in (0, 1], got {self.eta!r}")
        if not isinstance(self.shape, (Point, Window)):
            raise InvalidParameterError("detector shape must be a Point or a Window")


@dataclass
class ScanCurve:
    parameter: str
    points: np.ndarray
    values: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if len(self.points) != len(self.values):
            raise InvalidParameterError("scan curve needs one value per parameter point")

    @property
    def totals(self):
        return np.array([v.total_reduced for v in self.values])


def scaled_order(order, span, waist):
    """Rule order keeping ``order`` nodes per twelve-waist span."""
    return max(order, int(math.ceil(order * span / (2 * FULL_PLANE_WAISTS * waist))))


def _axis_integral(order_a, order_b, waist_a, waist_b, ca, cb, lo, hi, order):
    xs, w = gauss_legendre(lo, hi, scaled_order(order, hi - lo, min(waist_a, waist_b)))
    return float(w @ (profile_1d(order_a, waist_a, xs - ca) * profile_1d(order_b, waist_b, xs - cb)))


def window_integral(a, b, rect, order=None):
    """``\\iint_rect U_a U_b dx dy`` via the separable tensor rule.

    ``order`` applies per twelve waists of window width, so wide windows
    keep narrow modes resolved.
    """
    order = default_order() if order is None else order
    ix = _axis_integral(a.order_x, b.order_x, a.waist, b.waist, a.center_x, b.center_x,
                        rect.x_min, rect.x_max, order)
    iy = _axis_integral(a.order_y, b.order_y, a.waist, b.waist, a.center_y, b.center_y,
                        rect.y_min, rect.y_max, order)
    return ix * iy


def _window(det):
    if not isinstance(det.shape, Window):
        raise InvalidParameterError("integrated correlation needs window-shaped detectors")
    return det.shape.rect


def factorized_terms(n_mean, n2fact, i1, i2):
    """Reduced lo/het terms from per-window integrals ``(I_LL, I_PP, I_LP)``."""
    ll1, pp1, lp1 = i1
    ll2, pp2, lp2 = i2
    lo_term = n2fact * ll1 * ll2
    het_term = n_mean * (ll1 * pp2 + ll2 * pp1 - 2.0 * lp1 * lp2)
    return lo_term, het_term


def w2_integrated(lo, u_lo, u_ph, det1, det2, eps=1.0, order=None):
    """Correlation for two fully integrating window detectors (symmetric splitter)."""
    n_mean, n2fact = lo.moments()
    integrals = []
    for det in (det1, det2):
        rect = _window(det)
        integrals.append((
            window_integral(u_lo, u_lo, rect, order),
            window_integral(u_ph, u_ph, rect, order),
            window_integral(u_lo, u_ph, rect, order),
        ))
    lo_term, het_term = factorized_terms(n_mean, n2fact, *integrals)
    prefactor = SYMMETRIC_SCALE * det1.eta * det2.eta * eps**4
    return CorrelationResult(lo_term, het_term, prefactor)


def misalignment_scan(lo, u_lo, u_ph, window_half_width, displacements, order=None):
    """Integrated correlation while the photon mode slides across fixed detector windows.

    Both detectors are identical windows of half-width ``window_half_width`` in x,
    centred on the LO axis and spanning the full six-waist extent in y.  Each
    displacement places the photon axis at ``u_lo.center_x + x_d``.
    """
    displacements = np.asarray(displacements, dtype=float).ravel()
    if displacements.size == 0:
        raise InvalidParameterError("misalignment scan needs at least one displacement")
    if not window_half_width > 0:
        raise InvalidParameterError("window half-width must be positive")
    half_y = FULL_PLANE_WAISTS * max(u_lo.waist, u_ph.waist) + abs(u_ph.center_y - u_lo.center_y)
    window = Window(u_lo.center_x, u_lo.center_y, window_half_width, half_y)
    det = Detector(window)
    values = [
        w2_integrated(lo, u_lo, u_ph.shifted(center_x=u_lo.center_x + x_d), det, det, order=order)
        for x_d in displacements
    ]
    meta = {
        "scenario": "misalignment",
        "lo_state": str(lo),
        "lo_mode": u_lo.label,
        "photon_mode": u_ph.label,
        "window_half_width": float(window_half_width),
        "photon_waist": u_ph.waist,
    }
    return ScanCurve("x_d", displacements, values, meta)


def hom_metrics(curve):
    """``(visibility, depth)`` of the dip in a misalignment scan.

    The plateau is the curve maximum over displacements with ``|x_d| > 4 w0``
    whose photon mode (to six waists) lies inside the window; the overlap value
    is taken at ``x_d = 0``.
    """
    try:
        d = curve.metadata["window_half_width"]
        w0 = curve.metadata["photon_waist"]
    except KeyError as exc:
        raise InvalidParameterError(f"scan curve lacks metadata {exc}") from None
    x = curve.points
    totals = curve.totals
    zero = np.flatnonzero(x == 0.0)
    if zero.size == 0:
        raise InvalidParameterError("scan curve does not contain the full-overlap point x_d = 0")
    plateau_mask = (np.abs(x) > PLATEAU_MIN_SEPARATION * w0) & (np.abs(x) + FULL_PLANE_WAISTS * w0 <= d)
    if not plateau_mask.any():
        raise InvalidParameterError(
            "scan curve has no non-overlapping plateau inside the window "
            f"(need {PLATEAU_MIN_SEPARATION} w0 < |x_d| <= d - {FULL_PLANE_WAISTS} w0)"
        )
    plateau = float(totals[plateau_mask].max())
    overlap = float(totals[zero[0]])
    if plateau == 0.0:
        raise UndefinedVisibilityError("plateau correlation is zero; visibility undefined")
    depth = plateau - overlap
    return depth / plateau, depth


def symmetric_displacements(limit, step):
    """Displacements ``k*step`` for ``|k*step| <= limit``; contains 0 exactly."""
    k = int(math.floor(limit / step + 1e-9))
    return np.arange(-k, k + 1) * step
