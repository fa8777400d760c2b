"""alist parity-check files and the JSON code descriptor."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np
import scipy.sparse as sp

from aqc.codes import DistanceInfo, LinearCode
from aqc.css import AsymmetricCSSCode, asymmetric_bch_ldpc, asymmetric_eg_ldpc
from aqc.errors import ValidationError
from aqc.geometry import Geometry


def alist_text(H) -> str:
    """MacKay alist: 'n m', max degrees, column degrees, row degrees, then 1-based
    row lists per column and column lists per row, zero-padded to the max degree."""
    H = sp.csr_array(H.toarray() if sp.issparse(H) else np.asarray(H))
    if H.nnz and H.data.max() > 1:
        raise ValidationError("alist only stores binary matrices")
    m, n = H.shape
    Hc = H.tocsc()
    col_lists = [sorted(Hc.indices[Hc.indptr[j]:Hc.indptr[j + 1]] + 1) for j in range(n)]
    row_lists = [sorted(H.indices[H.indptr[i]:H.indptr[i + 1]] + 1) for i in range(m)]
    cmax = max((len(c) for c in col_lists), default=0)
    rmax = max((len(r) for r in row_lists), default=0)

    def pad(lst, width):
        return " ".join(str(int(v)) for v in list(lst) + [0] * (width - len(lst)))

    lines = [f"{n} {m}", f"{cmax} {rmax}",
             " ".join(str(len(c)) for c in col_lists),
             " ".join(str(len(r)) for r in row_lists)]
    lines += [pad(c, cmax) for c in col_lists]
    lines += [pad(r, rmax) for r in row_lists]
    return "\n".join(lines) + "\n"


def write_alist(H, path: str | Path) -> None:
    Path(path).write_text(alist_text(H))


def read_alist(path: str | Path) -> sp.csr_array:
    try:
        tokens = Path(path).read_text().split()
        vals = [int(t) for t in tokens]
        n, m = vals[0], vals[1]
        pos = 4
        col_deg = vals[pos:pos + n]
        pos += n
        row_deg = vals[pos:pos + m]
        pos += m
        cmax, rmax = vals[2], vals[3]
        rows, cols = [], []
        for j in range(n):
            entries = [v for v in vals[pos:pos + cmax] if v]
            if len(entries) != col_deg[j]:
                raise ValidationError(f"column {j + 1} lists {len(entries)} entries, degree says {col_deg[j]}")
            rows += [v - 1 for v in entries]
            cols += [j] * len(entries)
            pos += cmax
        H = sp.csr_array((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(m, n))
        for i in range(m):
            entries = sorted(v - 1 for v in vals[pos:pos + rmax] if v)
            if entries != sorted(H.indices[H.indptr[i]:H.indptr[i + 1]].tolist()) or len(entries) != row_deg[i]:
                raise ValidationError(f"row {i + 1} of {path} disagrees with the column lists")
            pos += rmax
    except (IndexError, ValueError) as exc:
        raise ValidationError(f"corrupt alist file {path}: {exc}") from exc
    return H


def _dist_json(d: DistanceInfo) -> dict[str, Any]:
    v = d.value
    return {"value": None if v is None or v == math.inf else int(v), "kind": d.kind}


def descriptor(code: AsymmetricCSSCode, hx_file: str, hz_file: str) -> dict[str, Any]:
    p = code.params
    g = Geometry(p["m"], p["s"], p["p"])
    return {
        "construction": code.construction,
        "params": dict(p),
        "n": code.n,
        "k": code.k,
        "d_x": _dist_json(code.d_x),
        "d_z": _dist_json(code.d_z),
        "pure": code.pure,
        "primitive_poly": list(g.tower.primitive_poly),
        "alist_files": {"hx": hx_file, "hz": hz_file},
    }


def save_code(code: AsymmetricCSSCode, out: str | Path, alist_dir: str | Path | None = None) -> dict[str, Any]:
    out = Path(out)
    adir = Path(alist_dir) if alist_dir is not None else out.parent
    adir.mkdir(parents=True, exist_ok=True)
    stem = out.stem
    hx, hz = adir / f"{stem}.hx.alist", adir / f"{stem}.hz.alist"
    write_alist(code.cx.parity_check, hx)
    write_alist(code.cz.parity_check, hz)
    desc = descriptor(code, _relative(hx, out.parent), _relative(hz, out.parent))
    out.write_text(json.dumps(desc, indent=2) + "\n")
    return desc


def _relative(f: Path, base: Path) -> str:
    f, base = f.resolve(), base.resolve()
    return str(f.relative_to(base)) if f.is_relative_to(base) else str(f)


def load_descriptor(path: str | Path) -> tuple[dict[str, Any], sp.csr_array, sp.csr_array]:
    path = Path(path)
    try:
        desc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read descriptor {path}: {exc}") from exc
    for key in ("construction", "params", "n", "k", "d_x", "d_z", "alist_files"):
        if key not in desc:
            raise ValidationError(f"descriptor {path} lacks '{key}'")
    base = path.parent
    hx = read_alist(base / desc["alist_files"]["hx"])
    hz = read_alist(base / desc["alist_files"]["hz"])
    return desc, hx, hz


def rebuild(desc: dict[str, Any], compute_exact_distances: bool = False) -> AsymmetricCSSCode:
    """Re-run the constructor named in a descriptor."""
    p = desc["params"]
    poly = desc.get("primitive_poly")
    if desc["construction"] == "bch-ldpc":
        return asymmetric_bch_ldpc(p["m"], p["mu"], p["s"], p["p"], p["delta"], compute_exact_distances, poly)
    if desc["construction"] == "eg-eg":
        return asymmetric_eg_ldpc(p["m"], p["mu_x"], p["mu_z"], p["s"], p["p"], compute_exact_distances, poly)
    raise ValidationError(f"unknown construction {desc['construction']!r}")


def code_from_files(desc: dict[str, Any], hx, hz) -> AsymmetricCSSCode:
    """CSS code assembled from stored matrices (no recomputation of distances)."""
    p = desc["params"].get("p", 2)
    cx = LinearCode(hx.toarray(), p, sparse=sp.csr_array(hx))
    cz = LinearCode(hz.toarray(), p, sparse=sp.csr_array(hz))

    def dist(d):
        v = d.get("value")
        v = math.inf if v is None else v
        return DistanceInfo(exact=v, provenance="descriptor") if d.get("kind") == "exact" \
            else DistanceInfo(lower_bound=v, provenance="descriptor")
    return AsymmetricCSSCode(cx, cz, dist(desc["d_x"]), dist(desc["d_z"]), desc.get("pure"),
                             desc["construction"], dict(desc["params"]))
