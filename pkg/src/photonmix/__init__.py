"""Intensity-correlation toolkit for mixing a single photon with a local oscillator.

Point and finite-aperture fourth-order correlations behind a beam splitter,
HOM-dip metrics, and reconstruction of the photon's transverse mode from
detector-array correlations.
"""
from photonmix.aperture import (
    Detector, Point, ScanCurve, Window, hom_metrics, misalignment_scan, quad2d, w2_integrated,
)
from photonmix.errors import (
    ConfigError, DegenerateAnchorError, InvalidParameterError, NumericalDomainError,
    PhotonmixError, UndefinedVisibilityError,
)
from photonmix.kernels import BACKEND
from photonmix.modes import TransverseMode, eval_mode, mode_overlap
from photonmix.profiling import (
    ArrayMeasurement, NoiseSpec, ReconstructedProfile, reconstruct, synthesize_array,
)
from photonmix.quantum import (
    BeamSplitter, CorrelationResult, LOState, lo_moments, w2_heterodyne, w2_point_general,
    w2_point_symmetric,
)

__version__ = "0.1.0"

__all__ = [
    "ArrayMeasurement", "BACKEND", "BeamSplitter", "ConfigError", "CorrelationResult",
    "DegenerateAnchorError", "Detector", "InvalidParameterError", "LOState", "NoiseSpec",
    "NumericalDomainError", "PhotonmixError", "Point", "ReconstructedProfile", "ScanCurve",
    "TransverseMode", "UndefinedVisibilityError", "Window", "eval_mode", "hom_metrics",
    "lo_moments", "misalignment_scan", "mode_overlap", "quad2d", "reconstruct",
    "synthesize_array", "w2_heterodyne", "w2_integrated", "w2_point_general",
    "w2_point_symmetric",
]
