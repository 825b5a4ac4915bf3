"""R-bimodules, balanced tensor products, Hom_R(M, -) and pre-product systems.

Maps out of a tensor product ``M (x)_R X`` are stored on the full F_p-tensor
``M (x) X`` (index ``m * dim X + x``) and must kill the balancing relations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Module, StructureAlgebra, zero_module
from .linalg import Mat, Subspace

LAYOUT = "kron-left-major"


@dataclass(frozen=True, eq=False)
class Bimodule:
    """An R-R bimodule given by left and right action matrices.

    ``right_act[a]`` is the matrix of ``m -> m e_a``.
    """

    ring: StructureAlgebra
    left_act: Mat
    right_act: Mat

    def __post_init__(self):
        fld = self.ring.field
        la = fld.mat(self.left_act)
        ra = fld.mat(self.right_act)
        d = self.ring.dim
        if la.ndim != 3 or la.shape[0] != d or la.shape[1] != la.shape[2]:
            raise ValueError(f"left action must have shape ({d}, m, m), got {la.shape}")
        if ra.shape != la.shape:
            raise ValueError(f"right action shape {ra.shape} differs from left {la.shape}")
        la.setflags(write=False)
        ra.setflags(write=False)
        object.__setattr__(self, "left_act", la)
        object.__setattr__(self, "right_act", ra)

    @property
    def dim(self) -> int:
        return self.left_act.shape[1]

    @property
    def left(self) -> Module:
        return Module(self.ring, self.left_act)

    @property
    def right(self) -> Module:
        """The right action as a left module over the opposite ring."""
        return Module(self.ring.opposite(), self.right_act)

    def opposite(self) -> "Bimodule":
        """The same space as a bimodule over the opposite ring (sides swapped)."""
        return Bimodule(self.ring.opposite(), self.right_act, self.left_act)

    def validate(self) -> list[str]:
        report = [f"left action: {r}" for r in self.left.validate()]
        report += [f"right action: {r}" for r in self.right.validate()]
        fld = self.ring.field
        for a in range(self.ring.dim):
            for b in range(self.ring.dim):
                lr = fld.matmul(self.left_act[a], self.right_act[b])
                rl = fld.matmul(self.right_act[b], self.left_act[a])
                if not np.array_equal(lr, rl):
                    report.append(f"left e{a} and right e{b} actions do not commute")
        return report


def regular_bimodule(r: StructureAlgebra) -> Bimodule:
    left = np.stack([r.left_regular(np.eye(r.dim, dtype=np.int64)[a]) for a in range(r.dim)])
    right = np.stack([r.right_regular(np.eye(r.dim, dtype=np.int64)[a]) for a in range(r.dim)])
    return Bimodule(r, left, right)


def zero_bimodule(r: StructureAlgebra) -> Bimodule:
    z = np.zeros((r.dim, 0, 0), dtype=np.int64)
    return Bimodule(r, z, z)


def quotient_bimodule(r: StructureAlgebra, ideal) -> tuple[Bimodule, Mat, Mat]:
    """``R/I`` for a two-sided ideal spanned by ``ideal`` (rows), with its projection and section."""
    fld = r.field
    sub = Subspace.span(fld, np.asarray(ideal, dtype=np.int64).reshape(-1, r.dim), r.dim)
    proj, section = fld.quotient_map(r.dim, sub)
    reg = regular_bimodule(r)
    left = np.stack([fld.mm(proj, reg.left_act[a], section) for a in range(r.dim)])
    right = np.stack([fld.mm(proj, reg.right_act[a], section) for a in range(r.dim)])
    if proj.shape[0] == 0:
        left = right = np.zeros((r.dim, 0, 0), dtype=np.int64)
    return Bimodule(r, left, right), proj, section


def mirrored_bimodule(r: StructureAlgebra, act: Mat) -> Bimodule:
    """A bimodule over a commutative ring with equal left and right actions."""
    if not r.is_commutative():
        raise ValueError("mirroring one action is only meaningful over a commutative ring")
    return Bimodule(r, act, act)


# -- tensor products ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TensorSpace:
    """``M (x)_R X`` as a quotient of the F_p-tensor ``M (x) X``."""

    left: Bimodule
    right: Module
    relations: Subspace
    proj: Mat
    section: Mat
    module: Module

    @property
    def ambient_dim(self) -> int:
        return self.left.dim * self.right.dim

    @property
    def dim(self) -> int:
        return self.proj.shape[0]


def balancing_relations(m: Bimodule, x: Module) -> Mat:
    """Columns ``vec(m r (x) x - m (x) r x)`` for all basis ``r``, ``m``, ``x``."""
    fld = m.ring.field
    im, ix = np.eye(m.dim, dtype=np.int64), np.eye(x.dim, dtype=np.int64)
    blocks = [np.kron(m.right_act[r], ix) - np.kron(im, x.act[r]) for r in range(m.ring.dim)]
    if not blocks or m.dim * x.dim == 0:
        return np.zeros((m.dim * x.dim, 0), dtype=np.int64)
    return np.mod(np.hstack(blocks), fld.p)


def tensor_over_R(m: Bimodule, x: Module) -> TensorSpace:
    if not m.ring.same_as(x.algebra):
        raise ValueError("bimodule and module are over different rings")
    fld = m.ring.field
    amb = m.dim * x.dim
    rel = Subspace.column_span(fld, balancing_relations(m, x)) if amb else Subspace.zero(fld, 0)
    proj, section = fld.quotient_map(amb, rel)
    ix = np.eye(x.dim, dtype=np.int64)
    if proj.shape[0]:
        act = np.stack([fld.mm(proj, np.kron(m.left_act[a], ix), section) for a in range(m.ring.dim)])
        mod = Module(m.ring, act)
    else:
        mod = zero_module(m.ring)
    return TensorSpace(m, x, rel, proj, section, mod)


# -- hom spaces --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HomSpace:
    """``Hom_R(M, X)`` for left R-linearity, as a left R-module via ``(r h)(m) = h(m r)``.

    Elements are ``dim X x dim M`` matrices, flattened row-major in the
    ambient; ``basis`` is a reduced echelon basis of the solution space.
    """

    source: Bimodule
    target: Module
    basis: Subspace
    module: Module

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def shape(self) -> tuple[int, int]:
        return (self.target.dim, self.source.dim)

    def matrices(self) -> list[Mat]:
        return [row.reshape(self.shape) for row in self.basis.basis]

    def coords(self, h: Mat) -> Mat:
        """Coordinates of a single homomorphism given as a matrix."""
        return self.basis.coords(np.asarray(h, dtype=np.int64).ravel())

    def to_ambient(self, c: Mat) -> Mat:
        """Flattened matrices (columns) from coordinate columns."""
        return self.target.field.matmul(self.basis.basis.T, np.asarray(c, dtype=np.int64))

    def postcompose(self, gamma: Mat, other: "HomSpace") -> Mat:
        """Matrix of ``h -> gamma h`` from this space into ``other`` (same source)."""
        fld = self.target.field
        amb = fld.matmul(np.kron(gamma, np.eye(self.source.dim, dtype=np.int64)), self.basis.basis.T)
        return other.basis.coords(amb)


def hom_R(m: Bimodule, x: Module) -> HomSpace:
    if not m.ring.same_as(x.algebra):
        raise ValueError("bimodule and module are over different rings")
    fld = m.ring.field
    dm, dx = m.dim, x.dim
    amb = dm * dx
    if amb == 0:
        basis = Subspace.zero(fld, 0)
    else:
        ix, im = np.eye(dx, dtype=np.int64), np.eye(dm, dtype=np.int64)
        rows = [np.kron(ix, m.left_act[a].T) - np.kron(x.act[a], im) for a in range(m.ring.dim)]
        basis = fld.kernel(np.mod(np.vstack(rows), fld.p))
    if basis.dim:
        act = []
        for a in range(m.ring.dim):
            op = np.kron(np.eye(dx, dtype=np.int64), m.right_act[a].T)
            act.append(basis.coords(fld.matmul(op, basis.basis.T)))
        mod = Module(m.ring, np.stack(act))
    else:
        mod = zero_module(m.ring)
    return HomSpace(m, x, basis, mod)


# -- pre-product systems -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class PhiSystem:
    """Bimodules ``M_1..M_n`` and pre-products ``phi[(i, j)]: M_i (x) M_j -> M_{i+j}``.

    ``phi[(i, j)]`` has shape ``dim M_{i+j} x (dim M_i * dim M_j)``; pairs
    missing from the mapping are zero.
    """

    ring: StructureAlgebra
    modules: tuple[Bimodule, ...]
    phi: dict

    def __post_init__(self):
        object.__setattr__(self, "modules", tuple(self.modules))
        fld = self.ring.field
        full = {}
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1 - i):
                shape = (self.M(i + j).dim, self.M(i).dim * self.M(j).dim)
                mat = self.phi.get((i, j))
                mat = np.zeros(shape, dtype=np.int64) if mat is None else fld.mat(mat)
                if mat.shape != shape:
                    raise ValueError(f"phi[{i},{j}] must have shape {shape}, got {mat.shape}")
                mat.setflags(write=False)
                full[(i, j)] = mat
        extra = set(self.phi) - set(full)
        if extra:
            raise ValueError(f"phi given for pairs with i+j > n: {sorted(extra)}")
        object.__setattr__(self, "phi", full)

    @property
    def n(self) -> int:
        return len(self.modules)

    def M(self, i: int) -> Bimodule:
        return self.modules[i - 1]

    def product(self, i: int, j: int) -> Mat | None:
        return self.phi.get((i, j))

    def opposite(self) -> "PhiSystem":
        """The system over the opposite ring: ``phi_op[i,j](a (x) b) = phi[j,i](b (x) a)``."""
        mods = tuple(m.opposite() for m in self.modules)
        phi = {}
        for (i, j), mat in self.phi.items():
            src = self.phi[(j, i)]
            di, dj = self.M(i).dim, self.M(j).dim
            # column s*dj + t of the new map is column t*di + s of phi[j,i]
            perm = np.arange(di * dj).reshape(dj, di).T.ravel()
            phi[(i, j)] = src[:, perm]
        return PhiSystem(self.ring.opposite(), mods, phi)


def validate_phi(ps: PhiSystem) -> list[str]:
    """Every violated balancing, bilinearity or associativity constraint."""
    report = []
    r = ps.ring
    fld = r.field
    for k, m in enumerate(ps.modules, start=1):
        if not m.ring.same_as(r):
            report.append(f"M{k} is over a different ring")
        report += [f"M{k}: {msg}" for msg in m.validate()]
    if report:
        return report
    for (i, j), phi in ps.phi.items():
        mi, mj, mij = ps.M(i), ps.M(j), ps.M(i + j)
        ii, ij = np.eye(mi.dim, dtype=np.int64), np.eye(mj.dim, dtype=np.int64)
        for a in range(r.dim):
            bal = np.kron(mi.right_act[a], ij) - np.kron(ii, mj.left_act[a])
            if np.any(fld.matmul(phi, np.mod(bal, fld.p))):
                report.append(f"phi[{i},{j}] is not balanced for e{a}")
            if not np.array_equal(fld.matmul(phi, np.kron(mi.left_act[a], ij)), fld.matmul(mij.left_act[a], phi)):
                report.append(f"phi[{i},{j}] is not left linear for e{a}")
            if not np.array_equal(fld.matmul(phi, np.kron(ii, mj.right_act[a])), fld.matmul(mij.right_act[a], phi)):
                report.append(f"phi[{i},{j}] is not right linear for e{a}")
    n = ps.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                if i + j + k > n:
                    continue
                di, dk = ps.M(i).dim, ps.M(k).dim
                lhs = fld.matmul(ps.phi[(i + j, k)], np.kron(ps.phi[(i, j)], np.eye(dk, dtype=np.int64)))
                rhs = fld.matmul(ps.phi[(i, j + k)], np.kron(np.eye(di, dtype=np.int64), ps.phi[(j, k)]))
                if not np.array_equal(lhs, rhs):
                    report.append(f"associativity fails for (i,j,k)=({i},{j},{k})")
    return report


def zero_system(r: StructureAlgebra, modules) -> PhiSystem:
    return PhiSystem(r, tuple(modules), {})


def canonical_system(r: StructureAlgebra, n: int, ideals) -> PhiSystem:
    """``M_i = R/I_i`` with pre-products induced by multiplication in ``R``.

    ``ideals`` is one spanning set (rows) per degree; ``None`` means the zero
    ideal and ``"all"`` the whole ring (``M_i = 0``).  Where multiplication does
    not descend (``I_i + I_j`` not inside ``I_{i+j}``) the pre-product is 0.
    """
    fld = r.field
    if len(ideals) != n:
        raise ValueError(f"need {n} ideals, got {len(ideals)}")
    subs, mods, projs, secs = [], [], [], []
    for ideal in ideals:
        if ideal is None:
            rows = np.zeros((0, r.dim), dtype=np.int64)
        elif isinstance(ideal, str) and ideal == "all":
            rows = np.eye(r.dim, dtype=np.int64)
        else:
            rows = np.asarray(ideal, dtype=np.int64).reshape(-1, r.dim)
        bim, proj, sec = quotient_bimodule(r, rows)
        subs.append(Subspace.span(fld, rows, r.dim))
        mods.append(bim)
        projs.append(proj)
        secs.append(sec)
    phi = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1 - i):
            target = subs[i + j - 1]
            if (subs[i - 1] + subs[j - 1] + target).dim != target.dim:
                continue
            di, dj = mods[i - 1].dim, mods[j - 1].dim
            mat = np.zeros((mods[i + j - 1].dim, di * dj), dtype=np.int64)
            for s in range(di):
                for t in range(dj):
                    prod = r.mul_coords(secs[i - 1][:, s], secs[j - 1][:, t])
                    mat[:, s * dj + t] = fld.matmul(projs[i + j - 1], prod)
            phi[(i, j)] = mat
    return PhiSystem(r, tuple(mods), phi)
