"""Detector-array synthesis and photon-mode reconstruction.

With ``b = U_LO(ref)``, ``a_m = U_LO(r_m)``, ``p = U_ph(ref)`` and
``rho_m = sqrt(w_m / <n>)`` every array value fixes ``|b U_ph(r_m) - a_m p|``,
so each amplitude has two candidates ``(a_m p +/- rho_m) / b``.  The branch is
chosen by greedy continuity outward from the reference aperture; ``p`` is
either supplied (anchor) or chosen to minimise the squared differences across
nearest-neighbour pairs of array points.

The data are invariant under ``U -> U + c U_LO`` (with ``p -> p + c b``) and
under ``U -> 2 (p/b) U_LO - U``; the continuity rule picks one representative.
"""
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from photonmix import kernels
from photonmix.errors import DegenerateAnchorError, InvalidParameterError
from photonmix.modes import eval_mode
from photonmix.quantum import w2_heterodyne

DEGENERATE_LO = 1e-12
ANCHOR_GRID = 201
MAX_REFINE = 25


@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "none"
    sigma: float = 0.0
    events: int = 0

    def __post_init__(self):
        if self.kind == "none":
            return
        if self.kind == "gaussian":
            if not (np.isfinite(self.sigma) and self.sigma >= 0):
                raise InvalidParameterError(f"noise sigma must be finite and >= 0, got {self.sigma!r}")
        elif self.kind == "counts":
            if isinstance(self.events, bool) or not isinstance(self.events, (int, np.integer)) or self.events <= 0:
                raise InvalidParameterError(f"count noise needs a positive integer event budget, got {self.events!r}")
        else:
            raise InvalidParameterError(f"unknown noise kind {self.kind!r}")

    def describe(self):
        if self.kind == "gaussian":
            return f"gaussian(sigma={self.sigma!r})"
        if self.kind == "counts":
            return f"counts(events={self.events})"
        return "none"

    @classmethod
    def parse(cls, text):
        """Inverse of :meth:`describe`."""
        text = text.strip()
        if text == "none":
            return cls()
        for kind, key, conv in (("gaussian", "sigma", float), ("counts", "events", int)):
            prefix = f"{kind}({key}="
            if text.startswith(prefix) and text.endswith(")"):
                return cls(kind, **{key: conv(text[len(prefix):-1])})
        raise InvalidParameterError(f"cannot parse noise description {text!r}")


@dataclass
class ArrayMeasurement:
    ref_point: tuple
    points: np.ndarray
    values: np.ndarray
    n_mean: float
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def __post_init__(self):
        self.ref_point = (float(self.ref_point[0]), float(self.ref_point[1]))
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        self.values = np.asarray(self.values, dtype=float).ravel()
        if len(self.points) != len(self.values):
            raise InvalidParameterError("measurement needs one value per array point")
        if np.any(self.values < 0) or not np.all(np.isfinite(self.values)):
            raise InvalidParameterError("array correlations must be finite and non-negative")


@dataclass
class ReconstructedProfile:
    points: np.ndarray
    amplitudes: np.ndarray
    residual: float
    anchor: float
    sign_convention: str


def synthesize_array(lo, u_lo, u_ph, ref_point, points, noise=None, seed=0, pedestal=False):
    """Heterodyne correlations between a fixed aperture and every array element.

    With ``pedestal`` the LO-only term is added before noise and the known
    pedestal subtracted afterwards, emulating upstream background removal.
    """
    noise = NoiseSpec() if noise is None else noise
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if abs(eval_mode(u_lo, *ref_point)) <= DEGENERATE_LO:
        raise DegenerateAnchorError(f"reference point {tuple(ref_point)} sits on a zero of the LO mode")
    n_mean, n2fact = lo.moments()
    xs, ys = points[:, 0], points[:, 1]
    values = np.asarray(w2_heterodyne(u_lo, u_ph, ref_point, (xs, ys), n_mean), dtype=float)
    base = np.zeros_like(values)
    if pedestal:
        base = (eval_mode(u_lo, *ref_point) * eval_mode(u_lo, xs, ys)) ** 2 * n2fact
        values = values + base
    values = apply_noise(values, noise, seed)
    if pedestal:
        values = np.maximum(values - base, 0.0)
    return ArrayMeasurement(ref_point, points, values, n_mean, noise)


def apply_noise(values, noise, seed):
    rng = np.random.default_rng(seed)
    if noise.kind == "gaussian":
        return np.maximum(values * (1.0 + noise.sigma * rng.standard_normal(values.shape)), 0.0)
    if noise.kind == "counts":
        peak = values.max() if values.size else 0.0
        if peak <= 0:
            return np.zeros_like(values)
        scale = noise.events / peak
        return rng.poisson(values * scale) / scale
    return values


class WalkGeometry(NamedTuple):
    """Traversal order, neighbour structure and smoothness edges of an array."""

    order: np.ndarray
    nb1: np.ndarray
    nb2: np.ndarray
    t: np.ndarray
    nb3: np.ndarray
    s3: np.ndarray
    edge_i: np.ndarray
    edge_j: np.ndarray


def _nearest(cand, sites, origin, exclude=()):
    """Resolved site nearest to ``origin`` at positive distance, or None."""
    dist = np.hypot(*(sites[cand] - origin).T)
    keep = dist > 0
    for k in exclude:
        keep &= np.hypot(*(sites[cand] - sites[k]).T) > 0
    if not keep.any():
        return None
    return int(cand[keep][np.argmin(dist[keep])])


def array_edges(points):
    """Undirected nearest-neighbour edges among the array points.

    Each point is joined to every other point at its nearest positive distance
    (ties kept, so a uniform grid gives all its axis-neighbour pairs).
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(points) < 2:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    dist = np.hypot(points[:, None, 0] - points[None, :, 0], points[:, None, 1] - points[None, :, 1])
    dist[dist == 0] = np.inf
    nearest = dist.min(axis=1, keepdims=True)
    linked = dist <= nearest * (1 + 1e-9)
    linked |= linked.T
    i, j = np.nonzero(np.triu(linked, k=1))
    return i.astype(np.int64), j.astype(np.int64)


def walk_geometry(points, ref_point):
    """Traversal order and neighbour structure for the greedy branch walk.

    Points are visited by distance from the reference.  ``nb1`` is the nearest
    already-resolved site (``-1`` = reference); ``nb2`` is the resolved site
    nearest to ``nb1`` (``-2`` when none), used for extrapolation with
    projection factor ``t`` along ``nb1 - nb2``.  ``nb3`` is the resolved site
    nearest to ``nb2`` when it lies on that line beyond ``nb2``, at projected
    coordinate ``s3 < -1``; it upgrades the extrapolation to quadratic.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    ref = np.asarray(ref_point, dtype=float)
    m_count = len(points)
    sites = np.vstack([points, ref[None, :]])
    ref_slot = m_count
    tag = lambda k: -1 if k == ref_slot else k  # noqa: E731
    order = np.argsort(np.hypot(*(points - ref).T), kind="stable")
    nb1 = np.full(m_count, -1, dtype=np.int64)
    nb2 = np.full(m_count, -2, dtype=np.int64)
    nb3 = np.full(m_count, -2, dtype=np.int64)
    t = np.zeros(m_count)
    s3 = np.zeros(m_count)
    resolved = [ref_slot]
    for m in order:
        cand = np.array(resolved)
        dist = np.hypot(*(sites[cand] - sites[m]).T)
        first = int(cand[np.argmin(dist)])
        nb1[m] = tag(first)
        second = _nearest(cand, sites, sites[first])
        if second is not None:
            step = sites[first] - sites[second]
            norm2 = float(np.dot(step, step))
            proj = float(np.dot(sites[m] - sites[first], step) / norm2)
            if proj > 0:
                nb2[m] = tag(second)
                t[m] = proj
                third = _nearest(cand, sites, sites[second], exclude=(first,))
                if third is not None:
                    offset = sites[third] - sites[first]
                    coord = float(np.dot(offset, step) / norm2)
                    cross = abs(offset[0] * step[1] - offset[1] * step[0])
                    if coord < -1 - 1e-9 and cross <= 1e-9 * norm2:
                        nb3[m] = tag(third)
                        s3[m] = coord
        resolved.append(int(m))
    edge_i, edge_j = array_edges(points)
    return WalkGeometry(order.astype(np.int64), nb1, nb2, t, nb3, s3, edge_i, edge_j)


def _refine_anchor(a, rho, b, signs, geometry):
    # the edge penalty is quadratic in p once the branch signs are fixed
    i, j = geometry.edge_i, geometry.edge_j
    slope = (a[i] - a[j]) / b
    offset = (signs[i] * rho[i] - signs[j] * rho[j]) / b
    denom = slope @ slope
    if denom == 0.0:
        return None
    return -(slope @ offset) / denom


def _estimate_anchor(a, rho, b, geometry):
    bound = 10.0 * rho.max() / abs(b) + np.abs(a).max()
    grid = np.linspace(0.0, bound, ANCHOR_GRID)
    penalties = kernels.penalty_scan(a, rho, b, grid, *geometry)
    best_p, best_pen = 0.0, np.inf
    for start in grid[np.argsort(penalties, kind="stable")[:5]]:
        p = float(start)
        _, signs, pen = kernels.branch_walk(a, rho, b, p, *geometry)
        for _ in range(MAX_REFINE):
            p_new = _refine_anchor(a, rho, b, signs, geometry)
            if p_new is None:
                break
            _, new_signs, new_pen = kernels.branch_walk(a, rho, b, p_new, *geometry)
            if new_pen > pen:
                break
            p, pen = p_new, new_pen
            if np.array_equal(new_signs, signs):
                break
            signs = new_signs
        if pen < best_pen:
            best_p, best_pen = p, pen
    return best_p


def model_residual(amplitudes, a, b, p, rho):
    """RMS misfit ``|b U_m - a_m p| - rho_m`` of a profile against the data."""
    return float(np.sqrt(np.mean((np.abs(b * amplitudes - a * p) - rho) ** 2)))


def reconstruct(meas, u_lo, anchor=None):
    """Recover the photon mode amplitude at every array point."""
    if len(meas.values) == 0:
        raise InvalidParameterError("cannot reconstruct from an empty measurement")
    if not meas.n_mean > 0:
        raise InvalidParameterError("measurement n_mean must be positive to undo the LO gain")
    b = float(eval_mode(u_lo, *meas.ref_point))
    if abs(b) <= DEGENERATE_LO:
        raise DegenerateAnchorError(f"reference point {meas.ref_point} sits on a zero of the LO mode")
    a = np.asarray(eval_mode(u_lo, meas.points[:, 0], meas.points[:, 1]), dtype=float).ravel()
    rho = np.sqrt(meas.values / meas.n_mean)
    geometry = walk_geometry(meas.points, meas.ref_point)
    if anchor is None:
        p = _estimate_anchor(a, rho, b, geometry)
        if p < 0:
            p = -p
        convention = "anchor estimated; global sign fixed by U_ph(ref) >= 0"
    else:
        p = float(anchor)
        convention = "anchor supplied"
    amplitudes, _, _ = kernels.branch_walk(a, rho, b, p, *geometry)
    residual = model_residual(amplitudes, a, b, p, rho)
    return ReconstructedProfile(meas.points.copy(), amplitudes, residual, p, convention)


__all__ = [
    "NoiseSpec", "ArrayMeasurement", "ReconstructedProfile",
    "synthesize_array", "reconstruct", "walk_geometry", "array_edges", "WalkGeometry",
    "model_residual",
]
