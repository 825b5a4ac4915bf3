"""Test corpus: small extension rings, exhaustive module enumeration, random modules."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import (
    Module,
    StructureAlgebra,
    enumerate_modules,
    free_module,
    prime_field_algebra,
    quotient,
    regular_module,
    submodule_generated,
    truncated_polynomial,
    upper_triangular,
)
from .bimodule import balancing_relations, canonical_system
from .extension import ExtensionRing, build_extension
from .linalg import Subspace
from .smodule import FModule, fmodule_to_saction, saction_to_fmodule

RINGS = {
    "F2": ("field", 2),
    "F3": ("field", 3),
    "F2[x]/(x^2)": ("poly", 2, 2),
    "T2(F2)": ("triangular", 2),
}
# the default corpus; T2(F2) is an extra, non-local ring of global dimension 1
CORPUS_RINGS = ("F2", "F3", "F2[x]/(x^2)")
KINDS = ("zero", "regular", "top")
ENUM_LIMIT = 10**5


def _spec(name: str) -> tuple:
    if name in RINGS:
        return RINGS[name]
    if name.startswith("F") and name[1:].isdigit():
        return ("field", int(name[1:]))
    raise KeyError(f"unknown ring {name!r}")


@lru_cache(maxsize=None)
def ring(name: str) -> StructureAlgebra:
    spec = _spec(name)
    if spec[0] == "field":
        return prime_field_algebra(spec[1])
    if spec[0] == "triangular":
        return upper_triangular(spec[1])
    return truncated_polynomial(spec[1], spec[2])


def radical_rows(name: str) -> np.ndarray:
    """Spanning rows of the Jacobson radical (powers of ``x`` for truncated polynomials)."""
    spec = _spec(name)
    r = ring(name)
    if spec[0] == "field":
        return np.zeros((0, r.dim), dtype=np.int64)
    if spec[0] == "triangular":
        return np.eye(r.dim, dtype=np.int64)[1:2]
    return np.eye(r.dim, dtype=np.int64)[1:]


@dataclass(frozen=True, eq=False)
class Instance:
    ring_name: str
    n: int
    kind: str
    ext: ExtensionRing

    @property
    def name(self) -> str:
        return f"{self.ring_name} n={self.n} M={self.kind}"

    @property
    def p(self) -> int:
        return self.ext.field.p


def build_instance(ring_name: str, n: int, kind: str) -> Instance:
    r = ring(ring_name)
    ideal = {"zero": "all", "regular": None, "top": radical_rows(ring_name)}[kind]
    ext = build_extension(r, canonical_system(r, n, [ideal] * n))
    return Instance(ring_name, n, kind, ext)


def instances(rings=CORPUS_RINGS, ns=(1, 2, 3)) -> list[Instance]:
    """Every ring, degree and uniform bimodule choice; ``top`` is skipped over fields (it equals ``regular``)."""
    out = []
    for name in rings:
        for n in ns:
            for kind in KINDS:
                if kind == "top" and _spec(name)[0] == "field":
                    continue
                out.append(build_instance(name, n, kind))
    return out


def serial_instance(p: int, n: int) -> Instance:
    return build_instance(f"F{p}", n, "regular")


# -- enumeration ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _r_modules(ring_name: str, dim: int) -> tuple:
    return tuple(enumerate_modules(ring(ring_name), dim))


def r_modules(ring_name: str, max_dim: int) -> list[Module]:
    return [m for d in range(max_dim + 1) for m in _r_modules(ring_name, d)]


def _affine_points(fld, eqs: np.ndarray, rhs: np.ndarray, shape, limit: int):
    """All matrices of ``shape`` whose row-major vec ``v`` solves ``eqs v = rhs``."""
    size = shape[0] * shape[1]
    if size == 0:
        yield np.zeros(shape, dtype=np.int64)
        return
    if eqs.shape[0] == 0:
        eqs = np.zeros((1, size), dtype=np.int64)
        rhs = np.zeros(1, dtype=np.int64)
    part = fld.solve(eqs, np.mod(rhs, fld.p))
    if part is None:
        return
    ker = fld.kernel(eqs).basis
    if fld.p ** len(ker) > limit:
        raise ValueError(f"structure map space too large ({fld.p}^{len(ker)})")
    for coeffs in itertools.product(range(fld.p), repeat=len(ker)):
        v = part + (np.tensordot(np.array(coeffs, dtype=np.int64), ker, axes=1) if len(ker) else 0)
        yield np.mod(v, fld.p).reshape(shape)


def _degree_equations(ext: ExtensionRing, x: Module, k: int, lower: dict):
    """Linear system on ``vec f_k``: balanced, R-linear, and compatible with lower degrees."""
    fld = ext.field
    mk = ext.M(k)
    dx = x.dim
    ix = np.eye(dx, dtype=np.int64)
    width = mk.dim * dx
    iw = np.eye(width, dtype=np.int64)
    rows, rhs = [], []
    bal = balancing_relations(mk, x)
    if bal.shape[1]:
        rows.append(np.kron(ix, bal.T))
        rhs.append(np.zeros(dx * bal.shape[1], dtype=np.int64))
    for a in ext.base.generators:
        rows.append(np.kron(ix, np.kron(mk.left_act[a], ix).T) - np.kron(x.act[a], iw))
        rhs.append(np.zeros(dx * width, dtype=np.int64))
    for i in range(1, k):
        j = k - i
        phi = np.kron(ext.phi_system.phi[(i, j)], ix)
        target = fld.matmul(lower[i], np.kron(np.eye(ext.M(i).dim, dtype=np.int64), lower[j]))
        rows.append(np.kron(ix, phi.T))
        rhs.append(target.ravel())
    if not rows:
        return np.zeros((0, dx * width), dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.mod(np.vstack(rows), fld.p), np.concatenate(rhs)


def _satisfies_vanishing(ext: ExtensionRing, f: dict) -> bool:
    fld = ext.field
    for i in range(1, ext.n + 1):
        for j in range(ext.n + 1 - i, ext.n + 1):
            if np.any(fld.matmul(f[i], np.kron(np.eye(ext.M(i).dim, dtype=np.int64), f[j]))):
                return False
    return True


def enumerate_fmodules(ext: ExtensionRing, x: Module, limit: int = ENUM_LIMIT) -> list[FModule]:
    """Every valid structure ``(x, f)`` on a fixed R-module ``x``."""
    out = []

    def extend(k, f):
        if k > ext.n:
            if _satisfies_vanishing(ext, f):
                out.append(FModule(ext, x, tuple(f[i] for i in range(1, ext.n + 1))))
            return
        eqs, rhs = _degree_equations(ext, x, k, f)
        for fk in _affine_points(ext.field, eqs, rhs, (x.dim, ext.M(k).dim * x.dim), limit):
            extend(k + 1, {**f, k: fk})
            if len(out) > limit:
                raise ValueError(f"more than {limit} modules")

    extend(1, {})
    return out


def enumeration_corpus(inst: Instance, max_dim: int, limit: int = ENUM_LIMIT) -> list[FModule]:
    """All valid ``(X, f)`` on ``F_p^d``, ``d <= max_dim``, in a fixed order."""
    out = []
    for x in r_modules(inst.ring_name, max_dim):
        out.extend(enumerate_fmodules(inst.ext, x, limit))
        if len(out) > limit:
            raise ValueError(f"corpus for {inst.name} exceeds {limit}")
    return out


# -- random modules ------------------------------------------------------------


def random_quotient(alg: StructureAlgebra, rng: np.random.Generator, max_free: int = 2, max_rel: int = 2) -> Module:
    """``A^k / N`` for ``N`` generated by a few random vectors, in a random basis."""
    fld = alg.field
    k = int(rng.integers(1, max_free + 1))
    free = free_module(alg, k)
    r = int(rng.integers(0, max_rel + 1))
    vecs = rng.integers(0, fld.p, size=(r, free.dim))
    sub = submodule_generated(free, vecs) if r else Subspace.zero(fld, free.dim)
    mod = quotient(free, sub)[0]
    if mod.dim == 0:
        return mod
    while True:
        change = rng.integers(0, fld.p, size=(mod.dim, mod.dim))
        if fld.is_invertible(change):
            return mod.transport(change)


def random_fmodule(ext: ExtensionRing, rng: np.random.Generator, max_free: int = 2, max_rel: int = 2) -> FModule:
    return saction_to_fmodule(random_quotient(ext.total, rng, max_free, max_rel), ext)


def random_r_module(r: StructureAlgebra, rng: np.random.Generator, max_free: int = 2, max_rel: int = 2) -> Module:
    return random_quotient(r, rng, max_free, max_rel)


def transported(m: FModule, change: np.ndarray) -> FModule:
    return saction_to_fmodule(fmodule_to_saction(m).transport(change), m.ext)


def base_regular(inst: Instance) -> Module:
    return regular_module(inst.ext.base)
