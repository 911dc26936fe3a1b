"""CSV emission and the array-measurement file schema.

Files may start with ``# key = value`` metadata lines, followed by a header
row and comma-separated rows.  Floats are written with 17 significant digits
so values round-trip exactly.
"""
import csv
import io

import numpy as np

from photonmix.errors import ConfigError
from photonmix.profiling import ArrayMeasurement, NoiseSpec


def fmt(value):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def render(header, rows, metadata=None):
    buf = io.StringIO()
    for key, value in (metadata or {}).items():
        buf.write(f"# {key} = {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def parse(text):
    """Return ``(metadata, header, rows)`` from CSV text."""
    metadata = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#") and not body:
            key, sep, value = line[1:].partition("=")
            if sep:
                metadata[key.strip()] = value.strip()
            continue
        if line.strip():
            body.append(line)
    if not body:
        raise ConfigError("CSV has no header row")
    reader = csv.reader(body)
    header = next(reader)
    rows = [row for row in reader]
    return metadata, header, rows


def measurement_to_csv(meas):
    metadata = {
        "ref_x": fmt(meas.ref_point[0]),
        "ref_y": fmt(meas.ref_point[1]),
        "n_mean": fmt(meas.n_mean),
        "noise": meas.noise.describe(),
    }
    rows = [(x, y, w) for (x, y), w in zip(meas.points, meas.values)]
    return render(["x_m", "y_m", "w2m"], rows, metadata)


def measurement_from_csv(text):
    metadata, header, rows = parse(text)
    if header != ["x_m", "y_m", "w2m"]:
        raise ConfigError(f"measurement CSV header must be x_m,y_m,w2m, got {','.join(header)}")
    try:
        ref = (float(metadata["ref_x"]), float(metadata["ref_y"]))
        n_mean = float(metadata["n_mean"])
    except KeyError as exc:
        raise ConfigError(f"measurement CSV lacks metadata {exc}") from None
    noise = NoiseSpec.parse(metadata.get("noise", "none"))
    data = np.array([[float(v) for v in row] for row in rows], dtype=float).reshape(-1, 3)
    return ArrayMeasurement(ref, data[:, :2], data[:, 2], n_mean, noise)
