"""JSON/CSV serialization and run manifests.

Complex numbers are written as ``[re, im]`` pairs in JSON and as paired
columns in CSV.  Floats use ``repr`` so a write/read cycle is exact.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import os
import sys

import numpy as np

from . import __version__, config, kernels

CSV_SCHEMAS = {
    "sweep": ("theta", "index", "eig_re", "eig_im"),
    "epmap": ("rho", "omega", "all_real", "cond_estimate"),
    "boundary": ("rho", "omega", "alpha", "beta"),
    "pseudospectrum": ("lam_re", "lam_im", "resnorm", "lower_bound", "upper_bound", "enclosure_ok"),
    "positivity": ("point", "k", "epsilon", "positive", "min_eigenvalue"),
}
SCHEMA_VERSION = 1


def _timestamp() -> str:
    # SOURCE_DATE_EPOCH pins the stamp for reproducible builds
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        moment = _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
    else:
        moment = _dt.datetime.now(tz=_dt.timezone.utc)
    return moment.isoformat(timespec="seconds")


def manifest(command: str, params: dict, schema: str | None = None) -> dict:
    out = {
        "command": command,
        "params": params,
        "version": __version__,
        "tolerances": config.as_dict(),
        "backend": kernels.BACKEND,
        "timestamp": _timestamp(),
    }
    if schema is not None:
        out["schema"] = {"name": schema, "version": SCHEMA_VERSION,
                         "columns": list(CSV_SCHEMAS[schema])}
    return out


def encode_matrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(entries) -> np.ndarray:
    arr = np.asarray(entries, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("entries must be an n x n array of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_document(M, manifest_: dict) -> dict:
    M = np.asarray(M)
    return {"n": int(M.shape[0]), "entries": encode_matrix(M), "manifest": manifest_}


def read_matrix(path) -> tuple[np.ndarray, dict]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    M = decode_matrix(doc["entries"])
    if M.shape[0] != doc["n"]:
        raise ValueError(f"declared n={doc['n']} but entries are {M.shape[0]} x {M.shape[0]}")
    return M, doc.get("manifest", {})


def _open(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def write_json(doc, path=None):
    fh, close = _open(path)
    try:
        json.dump(doc, fh, allow_nan=True)
        fh.write("\n")
    finally:
        if close:
            fh.close()


def _cell(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(schema: str, rows, path=None):
    fh, close = _open(path)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_SCHEMAS[schema])
        for row in rows:
            writer.writerow([_cell(x) for x in row])
    finally:
        if close:
            fh.close()


def read_csv(path) -> tuple[list, list]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def sidecar_path(path) -> str:
    return f"{path}.manifest.json"
