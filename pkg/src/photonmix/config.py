"""Scenario files: flat ``key = value`` text with dotted section prefixes.

Example::

    # coherent LO, displaced TEM00 photon
    lo_state.kind = coherent
    lo_state.alpha = 2
    photon_mode.order_x = 0
    scan.parameter = x_d
    scan.start = -15
    scan.stop = 15
    scan.count = 301
"""
import math
from dataclasses import dataclass, field

import numpy as np

from photonmix.aperture import Point, Window
from photonmix.errors import ConfigError, PhotonmixError
from photonmix.modes import TransverseMode
from photonmix.profiling import NoiseSpec
from photonmix.quantum import BeamSplitter, LOState


def _int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _bool(text):
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _complex(text):
    return complex(text.replace(" ", "").replace("i", "j"))


def _choice(*options):
    def parse(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {text!r}")
        return text
    return parse


_MODE_KEYS = {"order_x": _int, "order_y": _int, "waist": float, "center_x": float, "center_y": float}
_DETECTOR_KEYS = {
    "kind": _choice("point", "window"),
    "x": float, "y": float,
    "center_x": float, "center_y": float, "half_width_x": float, "half_width_y": float,
}

SCHEMA = {
    "lo_state.kind": _choice("fock", "coherent"),
    "lo_state.n": _int,
    "lo_state.alpha": _complex,
    **{f"lo_mode.{k}": v for k, v in _MODE_KEYS.items()},
    **{f"photon_mode.{k}": v for k, v in _MODE_KEYS.items()},
    "beam_splitter.preset": _choice("symmetric", "custom"),
    **{f"beam_splitter.{k}": _complex for k in ("s11", "s12", "s21", "s22")},
    **{f"detector1.{k}": v for k, v in _DETECTOR_KEYS.items()},
    **{f"detector2.{k}": v for k, v in _DETECTOR_KEYS.items()},
    "units.eta": float,
    "units.dS": float,
    "units.eps": float,
    "scan.parameter": _choice("x2", "x_d", "alpha2", "x_m"),
    "scan.start": float,
    "scan.stop": float,
    "scan.count": _int,
    "noise.kind": _choice("none", "gaussian", "counts"),
    "noise.sigma": float,
    "noise.events": _int,
    "noise.pedestal": _bool,
    "reconstruct.anchor": float,
    "quadrature.order": _int,
    "seed": _int,
}

SCAN_DEFAULTS = {
    "x2": (-4.0, 4.0, 161),
    "x_d": (-15.0, 15.0, 301),
    "alpha2": (0.25, 5.0, 20),
    "x_m": (-4.0, 4.0, 64),
}


@dataclass(frozen=True)
class ScanSpec:
    parameter: str
    start: float
    stop: float
    count: int

    def values(self):
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class Scenario:
    lo_state: LOState
    lo_mode: TransverseMode
    photon_mode: TransverseMode
    beam_splitter: BeamSplitter
    detector1: Point | Window
    detector2: Point | Window
    eta: float = 1.0
    dS: float = 1.0
    eps: float = 1.0
    scan: ScanSpec | None = None
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    pedestal: bool = False
    anchor: float | None = None
    quad_order: int | None = None
    seed: int = 0

    @property
    def symmetric_bs(self):
        return self.beam_splitter == BeamSplitter.symmetric()

    def scan_for(self, parameter):
        """The configured scan, or the default one for ``parameter``."""
        if self.scan is not None:
            if self.scan.parameter != parameter:
                raise ConfigError(f"this command scans {parameter!r}, config scans {self.scan.parameter!r}",
                                  key="scan.parameter")
            return self.scan
        return ScanSpec(parameter, *SCAN_DEFAULTS[parameter])


def parse_text(text):
    """Parse scenario text into ``{key: (value, line)}``."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in SCHEMA:
            raise ConfigError("unknown key", line=lineno, key=key)
        if key in entries:
            raise ConfigError("duplicate key", line=lineno, key=key)
        if not value:
            raise ConfigError("missing value", line=lineno, key=key)
        try:
            entries[key] = (SCHEMA[key](value), lineno)
        except ValueError as exc:
            raise ConfigError(str(exc), line=lineno, key=key) from None
    return entries


def _mode(entries, section):
    kwargs = {k: entries[f"{section}.{k}"][0] for k in _MODE_KEYS if f"{section}.{k}" in entries}
    return TransverseMode(**kwargs)


def _detector(entries, section, default_point, lo_mode):
    get = lambda k, d: entries[f"{section}.{k}"][0] if f"{section}.{k}" in entries else d  # noqa: E731
    kind = get("kind", "point")
    point_keys = {"x", "y"}
    window_keys = {"center_x", "center_y", "half_width_x", "half_width_y"}
    stray = (window_keys if kind == "point" else point_keys) & {k.split(".", 1)[1] for k in entries if k.startswith(section + ".")}
    if stray:
        raise ConfigError(f"not valid for a {kind} detector", key=f"{section}.{sorted(stray)[0]}")
    if kind == "point":
        return Point(get("x", default_point[0]), get("y", default_point[1]))
    return Window(
        get("center_x", lo_mode.center_x),
        get("center_y", lo_mode.center_y),
        get("half_width_x", 5.0 * lo_mode.waist),
        get("half_width_y", 6.0 * lo_mode.waist),
    )


def _validated(key, build):
    try:
        return build()
    except ConfigError:
        raise
    except PhotonmixError as exc:
        raise ConfigError(str(exc), key=key) from None


def _line_of(entries, key):
    if key in entries:
        return entries[key][1]
    lines = [ln for k, (_, ln) in entries.items() if k.startswith(key + ".")]
    return min(lines) if lines else None


def build_scenario(entries):
    """Validate parsed entries into a :class:`Scenario`.

    Errors are re-raised with the line of the offending key when known.
    """
    try:
        return _build(entries)
    except ConfigError as exc:
        if exc.line is None and exc.key is not None and _line_of(entries, exc.key) is not None:
            raise ConfigError(exc.detail, line=_line_of(entries, exc.key), key=exc.key) from None
        raise


def _build(entries):
    value = lambda k, d=None: entries[k][0] if k in entries else d  # noqa: E731
    if "lo_state.kind" not in entries:
        raise ConfigError("required key missing", key="lo_state.kind")
    kind = value("lo_state.kind")
    if kind == "fock" and "lo_state.alpha" in entries:
        raise ConfigError("not valid for a Fock state", key="lo_state.alpha")
    if kind == "coherent" and "lo_state.n" in entries:
        raise ConfigError("not valid for a coherent state", key="lo_state.n")
    lo_state = _validated("lo_state", lambda: LOState.fock(value("lo_state.n", 1)) if kind == "fock"
                          else LOState.coherent(value("lo_state.alpha", 2.0)))
    lo_mode = _validated("lo_mode", lambda: _mode(entries, "lo_mode"))
    photon_mode = _validated("photon_mode", lambda: _mode(entries, "photon_mode"))

    entries_bs = [k for k in ("s11", "s12", "s21", "s22") if f"beam_splitter.{k}" in entries]
    preset = value("beam_splitter.preset", "custom" if entries_bs else "symmetric")
    if preset == "symmetric":
        if entries_bs:
            raise ConfigError("entries given with the symmetric preset", key=f"beam_splitter.{entries_bs[0]}")
        bs = BeamSplitter.symmetric()
    else:
        missing = [k for k in ("s11", "s12", "s21", "s22") if k not in entries_bs]
        if missing:
            raise ConfigError("custom beam splitter needs all four entries", key=f"beam_splitter.{missing[0]}")
        bs = _validated("beam_splitter", lambda: BeamSplitter(
            *(value(f"beam_splitter.{k}") for k in ("s11", "s12", "s21", "s22"))))

    det1 = _validated("detector1", lambda: _detector(entries, "detector1", (0.5, 0.0), lo_mode))
    det2 = _validated("detector2", lambda: _detector(entries, "detector2", (0.0, 0.0), lo_mode))

    eta, dS, eps = value("units.eta", 1.0), value("units.dS", 1.0), value("units.eps", 1.0)
    if not 0 < eta <= 1:
        raise ConfigError("must lie in (0, 1]", key="units.eta")
    if not (math.isfinite(dS) and dS > 0):
        raise ConfigError("must be positive", key="units.dS")
    if not (math.isfinite(eps) and eps > 0):
        raise ConfigError("must be positive", key="units.eps")

    scan = None
    scan_keys = [k for k in entries if k.startswith("scan.")]
    if scan_keys:
        if "scan.parameter" not in entries:
            raise ConfigError("scan section needs scan.parameter", key="scan.parameter")
        param = value("scan.parameter")
        start, stop, count = SCAN_DEFAULTS[param]
        start, stop, count = value("scan.start", start), value("scan.stop", stop), value("scan.count", count)
        if count < 1:
            raise ConfigError("scan count must be at least 1", key="scan.count")
        if not (math.isfinite(start) and math.isfinite(stop)) or stop < start:
            raise ConfigError("scan range must be finite with stop >= start", key="scan.stop")
        if param == "alpha2" and start <= 0:
            raise ConfigError("alpha2 sweep must start above 0", key="scan.start")
        scan = ScanSpec(param, start, stop, count)

    noise = _validated("noise", lambda: NoiseSpec(
        value("noise.kind", "none"), value("noise.sigma", 0.0), value("noise.events", 0)))

    quad_order = value("quadrature.order")
    if quad_order is not None and quad_order < 2:
        raise ConfigError("must be >= 2", key="quadrature.order")

    return Scenario(
        lo_state=lo_state, lo_mode=lo_mode, photon_mode=photon_mode, beam_splitter=bs,
        detector1=det1, detector2=det2, eta=eta, dS=dS, eps=eps, scan=scan, noise=noise,
        pedestal=value("noise.pedestal", False), anchor=value("reconstruct.anchor"),
        quad_order=quad_order, seed=value("seed", 0),
    )


def load_scenario(path):
    """Read, parse and validate a scenario file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file: {exc}") from None
    return build_scenario(parse_text(text))


def loads_scenario(text):
    return build_scenario(parse_text(text))
