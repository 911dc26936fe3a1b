"""Local-oscillator states, the beam-splitter S-matrix and point-detector correlations.

Reduced units
-------------
Correlations are computed with the physical prefactor stripped and reported
alongside it in :class:`CorrelationResult`:

* general S-matrix: terms keep the ``s_ij`` products, prefactor ``eta^2 dS^2 eps^4``;
* symmetric splitter: terms are the bare bracket ``|U U|^2 <n(n-1)>`` and
  ``|U_LO(r1) U_ph(r2) - U_LO(r2) U_ph(r1)|^2 <n>``, prefactor
  ``eta^2 dS^2 eps^4 / 4`` (the ``|s_11 s_21|^2`` of the 50:50 splitter).
"""
import cmath
import math
from dataclasses import dataclass

import numpy as np

from photonmix.errors import InvalidParameterError
from photonmix.modes import eval_mode

UNITARITY_TOL = 1e-12
SYMMETRIC_SCALE = 0.25


@dataclass(frozen=True)
class LOState:
    """Local-oscillator input state, reduced to the two moments the correlation needs."""

    kind: str
    n: int = 0
    alpha: complex = 0j

    def __post_init__(self):
        if self.kind == "fock":
            if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 0:
                raise InvalidParameterError(f"Fock photon number must be a non-negative integer, got {self.n!r}")
        elif self.kind == "coherent":
            if not cmath.isfinite(complex(self.alpha)):
                raise InvalidParameterError(f"coherent amplitude must be finite, got {self.alpha!r}")
        else:
            raise InvalidParameterError(f"unknown LO state kind {self.kind!r}")

    @classmethod
    def fock(cls, n):
        return cls("fock", n=n)

    @classmethod
    def coherent(cls, alpha):
        return cls("coherent", alpha=complex(alpha))

    @classmethod
    def vacuum(cls):
        return cls("fock", n=0)

    def moments(self):
        """``(<n>, <n(n-1)>)``."""
        if self.kind == "fock":
            return float(self.n), float(self.n * (self.n - 1))
        intensity = abs(self.alpha) ** 2
        return intensity, intensity * intensity

    def __str__(self):
        if self.kind == "fock":
            return f"fock({self.n})"
        a = complex(self.alpha)
        text = format(a.real, "g") if a.imag == 0 else f"{a.real:g}{a.imag:+g}i"
        return f"coherent({text})"


def lo_moments(state):
    return state.moments()


@dataclass(frozen=True)
class BeamSplitter:
    """2x2 S-matrix mapping (LO, photon) inputs to output arms (1, 2)."""

    s11: complex
    s12: complex
    s21: complex
    s22: complex

    def __post_init__(self):
        matrix = self.matrix
        if not np.all(np.isfinite(matrix)):
            raise InvalidParameterError("beam-splitter entries must be finite")
        deviation = np.max(np.abs(matrix @ matrix.conj().T - np.eye(2)))
        if deviation > UNITARITY_TOL:
            raise InvalidParameterError(
                f"beam-splitter S-matrix fails the unitarity check (max |S S^+ - I| = {deviation:.3e})"
            )

    @property
    def matrix(self):
        return np.array([[self.s11, self.s12], [self.s21, self.s22]], dtype=complex)

    @classmethod
    def symmetric(cls):
        r = 1 / math.sqrt(2)
        return cls(-r + 0j, 1j * r, 1j * r, -r + 0j)

    @classmethod
    def from_angles(cls, theta, phi=0.0):
        """Lossless splitter with amplitude transmissivity ``cos(theta)`` and phase ``phi``."""
        c, s = math.cos(theta), math.sin(theta)
        e = cmath.exp(1j * phi)
        return cls(c + 0j, -s * e.conjugate(), s * e, c + 0j)


@dataclass(frozen=True)
class CorrelationResult:
    lo_term: float
    het_term: float
    prefactor: float = 1.0

    @property
    def total_reduced(self):
        return self.lo_term + self.het_term

    @property
    def total_physical(self):
        return self.prefactor * self.total_reduced

    @property
    def lo_physical(self):
        return self.prefactor * self.lo_term

    @property
    def het_physical(self):
        return self.prefactor * self.het_term

    def as_row(self):
        return {"lo_term": self.lo_term, "het_term": self.het_term, "total": self.total_reduced}


def _check_units(eta, dS):
    if not (0 < eta <= 1):
        raise InvalidParameterError(f"efficiency eta must lie in (0, 1], got {eta!r}")
    if not (math.isfinite(dS) and dS > 0):
        raise InvalidParameterError(f"detector area dS must be positive, got {dS!r}")


def _amplitudes(u_lo, u_ph, r1, r2):
    return (eval_mode(u_lo, *r1), eval_mode(u_ph, *r1),
            eval_mode(u_lo, *r2), eval_mode(u_ph, *r2))


def w2_point_general(bs, lo, u_lo, u_ph, r1, r2, eta=1.0, dS=1.0, eps=1.0):
    """Fourth-order correlation for point apertures behind an arbitrary splitter."""
    if not isinstance(bs, BeamSplitter):
        raise InvalidParameterError("bs must be a BeamSplitter")
    _check_units(eta, dS)
    n_mean, n2fact = lo.moments()
    lo1, ph1, lo2, ph2 = _amplitudes(u_lo, u_ph, r1, r2)
    lo_term = abs(bs.s11 * bs.s21 * lo1 * lo2) ** 2 * n2fact
    het_term = abs(bs.s11 * bs.s22 * lo1 * ph2 + bs.s12 * bs.s21 * lo2 * ph1) ** 2 * n_mean
    return CorrelationResult(lo_term, het_term, eta**2 * dS**2 * eps**4)


def w2_point_symmetric(lo, u_lo, u_ph, r1, r2, eta=1.0, dS=1.0, eps=1.0):
    """Fourth-order correlation for point apertures behind the symmetric 50:50 splitter."""
    _check_units(eta, dS)
    n_mean, n2fact = lo.moments()
    lo1, ph1, lo2, ph2 = _amplitudes(u_lo, u_ph, r1, r2)
    lo_term = (lo1 * lo2) ** 2 * n2fact
    het_term = (lo1 * ph2 - lo2 * ph1) ** 2 * n_mean
    return CorrelationResult(lo_term, het_term, SYMMETRIC_SCALE * eta**2 * dS**2 * eps**4)


def w2_heterodyne(u_lo, u_ph, r1, r2, n_mean):
    """Heterodyne (LO-amplified) term in reduced units.

    ``r2`` may hold arrays of coordinates, giving one value per array aperture.
    """
    x2, y2 = r2
    lo1 = eval_mode(u_lo, *r1)
    ph1 = eval_mode(u_ph, *r1)
    diff = lo1 * eval_mode(u_ph, x2, y2) - eval_mode(u_lo, x2, y2) * ph1
    return diff * diff * n_mean

