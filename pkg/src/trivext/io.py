"""JSON interchange for rings, extensions and modules.

Matrices are lists of row lists of integers.  Matrices whose columns are
indexed by a tensor product carry a ``layout`` field that must be
``kron-left-major`` (the left factor is the slow index); hom-valued maps
use ``hom-row-major`` (``h`` as a ``dim X x dim M`` matrix, flattened by rows).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import Module, StructureAlgebra
from .bimodule import LAYOUT, Bimodule, PhiSystem, mirrored_bimodule
from .extension import ExtensionRing, build_extension
from .linalg import PrimeField
from .smodule import FModule, GModule, hom_spaces

HOM_LAYOUT = "hom-row-major"


class InputError(ValueError):
    """Malformed input: parse errors, missing fields, inconsistent shapes."""


@dataclass
class Document:
    data: dict
    digest: str


def canonical_bytes(data: dict) -> bytes:
    return json.dumps(data, sort_keys=True, separators=(",", ":")).encode()


def digest_of(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def load_document(path) -> Document:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from e
    try:
        data = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as e:
        raise InputError(f"{path}: not UTF-8 ({e.reason})") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    return Document(data, digest_of(raw))


def document_from_data(data: dict) -> Document:
    return Document(data, digest_of(canonical_bytes(data)))


# -- parsing -------------------------------------------------------------------


def _get(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field '{key}'")
    return obj[key]


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{where}: expected an integer, got {value!r}")
    return value


def _matrix(value, shape: tuple[int, int], p: int, where: str) -> np.ndarray:
    rows, cols = shape
    if not isinstance(value, list) or len(value) != rows:
        got = len(value) if isinstance(value, list) else type(value).__name__
        raise InputError(f"{where}: expected {rows} rows, got {got}")
    if rows == 0:
        return np.zeros((0, cols), dtype=np.int64)
    for r, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise InputError(f"{where}[{r}]: expected {cols} entries, got {got}")
        for c, x in enumerate(row):
            _int(x, f"{where}[{r}][{c}]")
            if not 0 <= x < p:
                raise InputError(f"{where}[{r}][{c}]: residue {x} outside 0..{p - 1}")
    return np.array(value, dtype=np.int64).reshape(rows, cols)


def _matrices(value, count: int, shape, p: int, where: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != count:
        got = len(value) if isinstance(value, list) else type(value).__name__
        raise InputError(f"{where}: expected {count} matrices, got {got}")
    mats = [_matrix(v, shape, p, f"{where}[{k}]") for k, v in enumerate(value)]
    return np.stack(mats) if mats else np.zeros((0, *shape), dtype=np.int64)


def _layout(obj: dict, expected: str, where: str):
    got = _get(obj, "layout", where)
    if got != expected:
        raise InputError(f"{where}.layout: expected '{expected}', got {got!r}")


def parse_field(data: dict) -> PrimeField:
    p = _int(_get(data, "p", "document"), "p")
    try:
        return PrimeField(p)
    except ValueError as e:
        raise InputError(f"p: {e}") from e


def parse_ring(data: dict) -> StructureAlgebra:
    fld = parse_field(data)
    ring = _get(data, "ring", "document")
    d = _int(_get(ring, "dim", "ring"), "ring.dim")
    if d < 1:
        raise InputError("ring.dim: must be positive")
    mult = _get(ring, "mult", "ring")
    if not isinstance(mult, list) or len(mult) != d:
        raise InputError(f"ring.mult: expected {d} rows of products")
    table = np.stack([_matrix(row, (d, d), fld.p, f"ring.mult[{i}]") for i, row in enumerate(mult)])
    unit = _matrix([_get(ring, "unit", "ring")], (1, d), fld.p, "ring.unit")[0]
    return StructureAlgebra(fld, table, unit)


def parse_bimodule(ring: StructureAlgebra, obj: dict, where: str) -> Bimodule:
    p = ring.field.p
    d = _int(_get(obj, "dim", where), f"{where}.dim")
    if d < 0:
        raise InputError(f"{where}.dim: must be non-negative")
    if "action" in obj and "left_act" not in obj:
        act = _matrices(obj["action"], ring.dim, (d, d), p, f"{where}.action")
        try:
            return mirrored_bimodule(ring, act)
        except ValueError as e:
            raise InputError(f"{where}: {e}") from e
    left = _matrices(_get(obj, "left_act", where), ring.dim, (d, d), p, f"{where}.left_act")
    right = _matrices(_get(obj, "right_act", where), ring.dim, (d, d), p, f"{where}.right_act")
    return Bimodule(ring, left, right)


def parse_phi_system(data: dict, ring: StructureAlgebra) -> PhiSystem:
    p = ring.field.p
    n = _int(data.get("n", 0), "n")
    bims = data.get("bimodules", [])
    if not isinstance(bims, list) or len(bims) != n:
        raise InputError(f"bimodules: expected {n} entries")
    mods = tuple(parse_bimodule(ring, b, f"bimodules[{k}]") for k, b in enumerate(bims))
    phi = {}
    entries = data.get("phi", [])
    if not isinstance(entries, list):
        raise InputError("phi: expected a list")
    for k, entry in enumerate(entries):
        where = f"phi[{k}]"
        i = _int(_get(entry, "i", where), f"{where}.i")
        j = _int(_get(entry, "j", where), f"{where}.j")
        if not (1 <= i and 1 <= j and i + j <= n):
            raise InputError(f"{where}: need i, j >= 1 and i + j <= n, got ({i},{j})")
        if (i, j) in phi:
            raise InputError(f"{where}: duplicate entry for ({i},{j})")
        _layout(entry, LAYOUT, where)
        shape = (mods[i + j - 1].dim, mods[i - 1].dim * mods[j - 1].dim)
        phi[(i, j)] = _matrix(_get(entry, "matrix", where), shape, p, f"{where}.matrix")
    return PhiSystem(ring, mods, phi)


def parse_extension(data: dict) -> ExtensionRing:
    ring = parse_ring(data)
    return build_extension(ring, parse_phi_system(data, ring))


def module_names(data: dict) -> list[str]:
    mods = data.get("modules", [])
    if not isinstance(mods, list):
        raise InputError("modules: expected a list")
    return [str(_get(m, "name", f"modules[{k}]")) for k, m in enumerate(mods)]


def module_entry(data: dict, name: str) -> tuple[int, dict]:
    for k, m in enumerate(data.get("modules", [])):
        if m.get("name") == name:
            return k, m
    raise InputError(f"unknown module {name!r}; available: {module_names(data)}")


def module_form(obj: dict) -> str:
    """``base`` (an R-module), ``right`` (with ``f``) or ``left`` (with ``g``)."""
    if "form" in obj:
        form = obj["form"]
        if form not in ("base", "right", "left"):
            raise InputError(f"module {obj.get('name')!r}: unknown form {form!r}")
        return form
    if "g" in obj:
        return "left"
    return "right" if "f" in obj else "base"


def parse_base_module(ring: StructureAlgebra, obj: dict, where: str) -> Module:
    d = _int(_get(obj, "dim", where), f"{where}.dim")
    if d < 0:
        raise InputError(f"{where}.dim: must be non-negative")
    act = _matrices(_get(obj, "action", where), ring.dim, (d, d), ring.field.p, f"{where}.action")
    return Module(ring, act)


def parse_module(ext: ExtensionRing, obj: dict, where: str):
    """An R-module, an ``FModule`` or a ``GModule`` according to the entry's form."""
    form = module_form(obj)
    x = parse_base_module(ext.base, obj, where)
    if form == "base":
        return x
    p = ext.field.p
    key = "f" if form == "right" else "g"
    entries = _get(obj, key, where)
    if not isinstance(entries, list):
        raise InputError(f"{where}.{key}: expected a list")
    given = {}
    for k, entry in enumerate(entries):
        w = f"{where}.{key}[{k}]"
        i = _int(_get(entry, "i", w), f"{w}.i")
        if not 1 <= i <= ext.n:
            raise InputError(f"{w}.i: degree {i} outside 1..{ext.n}")
        _layout(entry, LAYOUT if form == "right" else HOM_LAYOUT, w)
        dm = ext.M(i).dim
        shape = (x.dim, dm * x.dim) if form == "right" else (x.dim * dm, x.dim)
        given[i] = _matrix(_get(entry, "matrix", w), shape, p, f"{w}.matrix")
    if form == "right":
        f = tuple(given.get(i, np.zeros((x.dim, ext.M(i).dim * x.dim), dtype=np.int64)) for i in range(1, ext.n + 1))
        return FModule(ext, x, f)
    homs = hom_spaces(ext, x)
    g = []
    for i in range(1, ext.n + 1):
        amb = given.get(i, np.zeros((x.dim * ext.M(i).dim, x.dim), dtype=np.int64))
        h = homs[i - 1]
        coords = h.basis.coords(amb) if h.dim else np.zeros((0, x.dim), dtype=np.int64)
        if not np.array_equal(h.to_ambient(coords) if h.dim else np.zeros_like(amb), amb):
            raise InputError(f"{where}.g: values of g_{i} are not R-linear maps M_{i} -> X")
        g.append(coords)
    return GModule(ext, x, tuple(g), homs)


# -- writing -------------------------------------------------------------------


def _rows(m) -> list:
    return np.asarray(m, dtype=np.int64).tolist()


def ring_json(alg: StructureAlgebra) -> dict:
    return {"dim": alg.dim, "mult": _rows(alg.table), "unit": _rows(alg.unit)}


def bimodule_json(b: Bimodule) -> dict:
    return {"dim": b.dim, "left_act": _rows(b.left_act), "right_act": _rows(b.right_act)}


def extension_json(ext: ExtensionRing) -> dict:
    ps = ext.phi_system
    return {
        "p": ext.field.p,
        "ring": ring_json(ext.base),
        "n": ext.n,
        "bimodules": [bimodule_json(ps.M(i)) for i in range(1, ext.n + 1)],
        "phi": [
            {"i": i, "j": j, "matrix": _rows(m), "layout": LAYOUT} for (i, j), m in sorted(ps.phi.items())
        ],
        "modules": [],
    }


def module_json(name: str, m) -> dict:
    if isinstance(m, Module):
        return {"name": name, "form": "base", "dim": m.dim, "action": _rows(m.act)}
    out = {"name": name, "dim": m.dim, "action": _rows(m.X.act)}
    if isinstance(m, FModule):
        out["form"] = "right"
        out["f"] = [{"i": i, "matrix": _rows(m.fmap(i)), "layout": LAYOUT} for i in range(1, m.ext.n + 1)]
    else:
        out["form"] = "left"
        out["g"] = [{"i": i, "matrix": _rows(m.ambient(i)), "layout": HOM_LAYOUT} for i in range(1, m.ext.n + 1)]
    return out


def algebra_document(alg: StructureAlgebra, extra: dict | None = None) -> dict:
    """A document declaring ``alg`` as a ring with no bimodules (re-ingestable)."""
    doc = {"p": alg.field.p, "ring": ring_json(alg), "n": 0, "bimodules": [], "phi": [], "modules": []}
    if extra:
        doc.update(extra)
    return doc


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
