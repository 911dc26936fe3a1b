"""``photonmix`` command-line interface.

Subcommands reproduce the scheme's figures as CSV:

* ``point-scan``   detector 1 fixed, detector 2 swept in x (point apertures)
* ``misalignment`` integrated signal vs photon-mode displacement (windows)
* ``visibility``   HOM visibility and normalised depth vs coherent |alpha|^2
* ``array``        synthetic detector-array correlations
* ``reconstruct``  photon-mode amplitudes from an ``array`` CSV

Exit status: 0 success, 2 configuration error, 3 numerical-domain error.
"""
import argparse
import math
import sys

import numpy as np

from photonmix import __version__, csvio
from photonmix.aperture import Point, Window, hom_metrics, misalignment_scan, symmetric_displacements
from photonmix.config import load_scenario
from photonmix.errors import ConfigError, InvalidParameterError, NumericalDomainError, PhotonmixError
from photonmix.modes import FULL_PLANE_WAISTS
from photonmix.profiling import reconstruct, synthesize_array
from photonmix.quantum import LOState, w2_point_general, w2_point_symmetric

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

VISIBILITY_WINDOW_WAISTS = 12.0
VISIBILITY_STEP_WAISTS = 0.25
DEPTH_REFERENCE_ALPHA = 4.5


def _base_metadata(sc, command):
    return {
        "command": command,
        "lo_state": str(sc.lo_state),
        "lo_mode": sc.lo_mode.label,
        "photon_mode": sc.photon_mode.label,
    }


def _require_point(det, name):
    if not isinstance(det, Point):
        raise ConfigError(f"{name} must be a point detector for this command", key=f"{name}.kind")
    return det


def cmd_point_scan(sc):
    det1 = _require_point(sc.detector1, "detector1")
    det2 = _require_point(sc.detector2, "detector2")
    r1 = (det1.x, det1.y)
    rows = []
    for x2 in sc.scan_for("x2").values():
        r2 = (x2, det2.y)
        if sc.symmetric_bs:
            res = w2_point_symmetric(sc.lo_state, sc.lo_mode, sc.photon_mode, r1, r2, sc.eta, sc.dS, sc.eps)
        else:
            res = w2_point_general(sc.beam_splitter, sc.lo_state, sc.lo_mode, sc.photon_mode,
                                   r1, r2, sc.eta, sc.dS, sc.eps)
        rows.append((x2, res.lo_term, res.het_term, res.total_reduced))
    meta = _base_metadata(sc, "point-scan")
    meta.update(x1=csvio.fmt(r1[0]), y1=csvio.fmt(r1[1]), y2=csvio.fmt(det2.y),
                units="reduced", prefactor=csvio.fmt(res.prefactor))
    return csvio.render(["x2", "lo_term", "het_term", "total"], rows, meta)


def _window_half_width(sc, default_waists):
    if isinstance(sc.detector1, Window):
        return sc.detector1.half_width_x
    return default_waists * sc.lo_mode.waist


def _require_symmetric(sc):
    if not sc.symmetric_bs:
        raise ConfigError("integrated correlations use the symmetric beam splitter", key="beam_splitter.preset")


def cmd_misalignment(sc):
    _require_symmetric(sc)
    d = _window_half_width(sc, 5.0)
    curve = misalignment_scan(sc.lo_state, sc.lo_mode, sc.photon_mode, d,
                              sc.scan_for("x_d").values(), order=sc.quad_order)
    meta = _base_metadata(sc, "misalignment")
    meta.update(window_half_width=csvio.fmt(d), units="reduced")
    return csvio.render(["x_d", "total"], zip(curve.points, curve.totals), meta)


def _visibility_at(state, sc, d, displacements):
    curve = misalignment_scan(state, sc.lo_mode, sc.photon_mode, d, displacements, order=sc.quad_order)
    return hom_metrics(curve)


def cmd_visibility(sc):
    _require_symmetric(sc)
    d = _window_half_width(sc, VISIBILITY_WINDOW_WAISTS)
    w0 = sc.photon_mode.waist
    limit = d - FULL_PLANE_WAISTS * w0
    if limit <= 0:
        raise InvalidParameterError(f"window half-width {d} too small to hold a displaced photon mode")
    displacements = symmetric_displacements(limit, VISIBILITY_STEP_WAISTS * w0)
    _, ref_depth = _visibility_at(LOState.coherent(DEPTH_REFERENCE_ALPHA), sc, d, displacements)
    meta = _base_metadata(sc, "visibility")
    meta.update(window_half_width=csvio.fmt(d), depth_normalisation=f"depth(|alpha|={DEPTH_REFERENCE_ALPHA}) = 1")
    rows = []
    if sc.lo_state.kind == "fock":
        # no alpha sweep for a number state; the first column carries <n>
        vis, depth = _visibility_at(sc.lo_state, sc, d, displacements)
        rows.append((sc.lo_state.moments()[0], vis, depth / ref_depth))
    else:
        for alpha2 in sc.scan_for("alpha2").values():
            vis, depth = _visibility_at(LOState.coherent(math.sqrt(alpha2)), sc, d, displacements)
            rows.append((alpha2, vis, depth / ref_depth))
    return csvio.render(["alpha2", "visibility", "depth"], rows, meta)


def _array_points(sc):
    det2 = _require_point(sc.detector2, "detector2")
    xs = sc.scan_for("x_m").values()
    return np.column_stack([xs, np.full_like(xs, det2.y)])


def cmd_array(sc):
    det1 = _require_point(sc.detector1, "detector1")
    meas = synthesize_array(sc.lo_state, sc.lo_mode, sc.photon_mode, (det1.x, det1.y),
                            _array_points(sc), sc.noise, sc.seed, pedestal=sc.pedestal)
    return csvio.measurement_to_csv(meas)


def cmd_reconstruct(measurement_text, sc):
    meas = csvio.measurement_from_csv(measurement_text)
    prof = reconstruct(meas, sc.lo_mode, anchor=sc.anchor)
    meta = {
        "command": "reconstruct",
        "lo_mode": sc.lo_mode.label,
        "anchor": csvio.fmt(prof.anchor),
        "sign_convention": prof.sign_convention,
        "residual": csvio.fmt(prof.residual),
    }
    rows = [(x, y, u) for (x, y), u in zip(prof.points, prof.amplitudes)]
    return csvio.render(["x_m", "y_m", "u_ph_est"], rows, meta)


COMMANDS = {
    "point-scan": cmd_point_scan,
    "misalignment": cmd_misalignment,
    "visibility": cmd_visibility,
    "array": cmd_array,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="photonmix", description="Single-photon and local-oscillator correlation simulator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in [*COMMANDS, "reconstruct"]:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="scenario file")
        p.add_argument("--out", help="output CSV (default: stdout)")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        if name == "reconstruct":
            p.add_argument("--measurement", required=True, help="CSV written by 'photonmix array'")
    return parser


def run(argv=None):
    args = build_parser().parse_args(argv)
    sc = load_scenario(args.config)
    if args.seed is not None:
        sc.seed = args.seed
    if args.command == "reconstruct":
        try:
            with open(args.measurement, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read measurement file: {exc}") from None
        output = cmd_reconstruct(text, sc)
    else:
        output = COMMANDS[args.command](sc)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)


def main(argv=None):
    try:
        run(argv)
    except ConfigError as exc:
        print(f"photonmix: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalDomainError as exc:
        print(f"photonmix: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PhotonmixError as exc:
        print(f"photonmix: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG if isinstance(exc, InvalidParameterError) else EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
