"""Pure-Python reference implementation of the hot kernels.

Mirrors ``_kernels.pyx`` one-to-one; selected automatically when the compiled
extension is unavailable or ``PHOTONMIX_PURE_PYTHON`` is set.
"""
import math

import numpy as np

_PI_M14 = math.pi ** -0.25


def hermite_function(n, xi):
    """Orthonormal Hermite function psi_n evaluated at the points ``xi``."""
    xi = np.asarray(xi, dtype=float)
    psi_prev = np.zeros_like(xi)
    psi = _PI_M14 * np.exp(-0.5 * xi * xi)
    for k in range(n):
        psi_next = math.sqrt(2.0 / (k + 1)) * xi * psi - math.sqrt(k / (k + 1)) * psi_prev
        psi_prev, psi = psi, psi_next
    return psi


def _extrapolate(r1, r2, r3, t, s3):
    """Value at ``t`` of the parabola through (0, r1), (-1, r2), (s3, r3)."""
    return (r1 * (t + 1.0) * (t - s3) / -s3
            + r2 * t * (t - s3) / (1.0 + s3)
            + r3 * t * (t + 1.0) / (s3 * (s3 + 1.0)))


def branch_walk(a, rho, b, p, order, nb1, nb2, t, nb3, s3, edge_i, edge_j):
    """Resolve the two-branch ambiguity by greedy continuity for one anchor value.

    Slot ``len(a)`` of the working arrays holds the reference aperture (value
    ``p``); neighbour index ``-1`` refers to it and ``-2`` means "none".  The
    branch closest to an extrapolation of the ratio ``U / U_LO`` wins:
    quadratic when a third collinear neighbour exists, linear with two, and
    zero-order on ``U`` itself with one.  Returns ``(amplitudes, signs,
    penalty)``; penalty sums squared differences over the array edges.
    """
    m_count = len(a)
    vals = np.empty(m_count + 1)
    ratio = np.empty(m_count + 1)
    vals[m_count] = p
    ratio[m_count] = p / b
    signs = np.zeros(m_count)

    def slot(j):
        return -1 if j == -2 else (j if j >= 0 else m_count)

    for m in order:
        i1, i2, i3 = slot(nb1[m]), slot(nb2[m]), slot(nb3[m])
        am = a[m]
        plus = (am * p + rho[m]) / b
        minus = (am * p - rho[m]) / b
        if i2 >= 0 and am != 0.0 and math.isfinite(ratio[i1]) and math.isfinite(ratio[i2]):
            if i3 >= 0 and math.isfinite(ratio[i3]):
                pred = _extrapolate(ratio[i1], ratio[i2], ratio[i3], t[m], s3[m])
            else:
                pred = ratio[i1] + t[m] * (ratio[i1] - ratio[i2])
            take_plus = abs(plus / am - pred) <= abs(minus / am - pred)
        else:
            pred = vals[i1]
            if i2 >= 0:
                pred = pred + t[m] * (vals[i1] - vals[i2])
            take_plus = abs(plus - pred) <= abs(minus - pred)
        vals[m] = plus if take_plus else minus
        signs[m] = 1.0 if take_plus else -1.0
        ratio[m] = vals[m] / am if am != 0.0 else math.nan
    penalty = 0.0
    for i, j in zip(edge_i, edge_j):
        diff = vals[i] - vals[j]
        penalty += diff * diff
    return vals[:m_count].copy(), signs, penalty


def penalty_scan(a, rho, b, p_values, order, nb1, nb2, t, nb3, s3, edge_i, edge_j):
    """Smoothness penalty of the greedy branch walk for every anchor candidate."""
    out = np.empty(len(p_values))
    for g, p in enumerate(p_values):
        out[g] = branch_walk(a, rho, b, p, order, nb1, nb2, t, nb3, s3, edge_i, edge_j)[2]
    return out
