"""The n-trivial extension ring ``S = R x_n (M_1, ..., M_n)`` as a structure-constant algebra."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import StructureAlgebra
from .bimodule import PhiSystem, validate_phi
from .linalg import Mat


class InvalidInput(ValueError):
    """Raised when construction inputs fail validation; carries the report."""

    def __init__(self, what: str, report: list[str]):
        super().__init__(f"{what} is invalid: " + "; ".join(report))
        self.report = report


@dataclass(frozen=True, eq=False)
class ExtensionRing:
    base: StructureAlgebra
    phi_system: PhiSystem
    total: StructureAlgebra
    offsets: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.phi_system.n

    @property
    def field(self):
        return self.base.field

    @property
    def dim(self) -> int:
        return self.total.dim

    def M(self, i: int):
        return self.phi_system.M(i)

    def block(self, degree: int) -> slice:
        """Coordinates of the degree component (0 is R)."""
        return slice(self.offsets[degree], self.offsets[degree + 1])

    @property
    def inj(self) -> Mat:
        out = np.zeros((self.dim, self.base.dim), dtype=np.int64)
        out[: self.base.dim] = np.eye(self.base.dim, dtype=np.int64)
        return out

    @property
    def proj(self) -> Mat:
        return self.inj.T.copy()

    def graded_components(self, x) -> tuple[Mat, ...]:
        x = np.asarray(getattr(x, "coords", x), dtype=np.int64)
        return tuple(x[self.block(k)].copy() for k in range(self.n + 1))

    def assemble(self, parts) -> Mat:
        return np.concatenate([np.asarray(p, dtype=np.int64).reshape(-1) for p in parts])

    @cached_property
    def opposite(self) -> "ExtensionRing":
        """``S^op``, built from the opposite ring, bimodules and pre-products."""
        return build_extension(self.base.opposite(), self.phi_system.opposite())

    def positive_degree_basis(self) -> range:
        return range(self.base.dim, self.dim)


def build_extension(r: StructureAlgebra, ps: PhiSystem) -> ExtensionRing:
    """Assemble the graded multiplication table.

    Degree components: ``R R`` from ``r``; ``R M_i`` and ``M_i R`` from the
    actions; ``M_i M_j`` via ``phi[i,j]`` when ``i+j <= n`` and 0 otherwise.
    """
    report = [f"ring: {msg}" for msg in r.validate()]
    if not ps.ring.same_as(r):
        report.append("pre-product system is over a different ring")
    if report:
        raise InvalidInput("extension data", report)
    report = validate_phi(ps)
    if report:
        raise InvalidInput("pre-product system", report)
    n = ps.n
    dims = [r.dim] + [ps.M(i).dim for i in range(1, n + 1)]
    offsets = tuple(int(x) for x in np.concatenate([[0], np.cumsum(dims)]))
    d = offsets[-1]
    t = np.zeros((d, d, d), dtype=np.int64)
    d0 = r.dim
    t[:d0, :d0, :d0] = r.table
    for i in range(1, n + 1):
        m = ps.M(i)
        bi = slice(offsets[i], offsets[i + 1])
        for a in range(d0):
            # e_a * m_s = left_act[a][:, s] ; m_s * e_a = right_act[a][:, s]
            t[a, bi, bi] = m.left_act[a].T
            t[bi, a, bi] = m.right_act[a].T
    for (i, j), phi in ps.phi.items():
        if phi.size == 0:
            continue
        bi = slice(offsets[i], offsets[i + 1])
        bj = slice(offsets[j], offsets[j + 1])
        bk = slice(offsets[i + j], offsets[i + j + 1])
        di, dj = ps.M(i).dim, ps.M(j).dim
        t[bi, bj, bk] = phi.T.reshape(di, dj, -1)
    unit = np.zeros(d, dtype=np.int64)
    unit[:d0] = r.unit
    total = StructureAlgebra(r.field, t, unit)
    return ExtensionRing(r, ps, total, offsets)


def graded_components(ext: ExtensionRing, x) -> tuple[Mat, ...]:
    return ext.graded_components(x)
