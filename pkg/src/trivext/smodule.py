"""S-modules as ``(X, f)`` pairs, as ``(X, g)`` pairs, and as plain S-actions.

For ``S = R x_n M`` a left S-module is an R-module ``X`` with maps
``f_i: M_i (x)_R X -> X`` satisfying

* ``f_i (M_i (x) f_j) = 0`` when ``i + j > n``;
* ``f_{i+j} (phi_ij (x) X) = f_i (M_i (x) f_j)`` when ``i + j <= n``.

The element ``(a, m_1, ..., m_n)`` acts by ``a x + sum_i f_i(m_i (x) x)``.
The left form replaces ``f_i`` by its adjoint ``g_i: X -> Hom_R(M_i, X)``,
``g_i(x)(m) = f_i(m (x) x)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_BUDGET, Module, Verdict, hom_space, search_invertible
from .bimodule import HomSpace, balancing_relations, hom_R
from .extension import ExtensionRing, InvalidInput
from .linalg import Mat, operator_matrix, solution_basis

SAction = Module


@dataclass(frozen=True, eq=False)
class FModule:
    ext: ExtensionRing
    X: Module
    f: tuple

    def __post_init__(self):
        fld = self.ext.field
        if len(self.f) != self.ext.n:
            raise ValueError(f"need {self.ext.n} structure maps, got {len(self.f)}")
        maps = []
        for i, fi in enumerate(self.f, start=1):
            shape = (self.X.dim, self.ext.M(i).dim * self.X.dim)
            fi = fld.mat(fi).reshape(shape) if np.size(fi) == shape[0] * shape[1] else fld.mat(fi)
            if fi.shape != shape:
                raise ValueError(f"f_{i} must have shape {shape}, got {fi.shape}")
            fi.setflags(write=False)
            maps.append(fi)
        object.__setattr__(self, "f", tuple(maps))

    @property
    def dim(self) -> int:
        return self.X.dim

    def fmap(self, i: int) -> Mat:
        return self.f[i - 1]

    def element_action(self, i: int, t: int) -> Mat:
        """Action of the t-th basis vector of ``M_i``."""
        d = self.X.dim
        return self.f[i - 1][:, t * d : (t + 1) * d]


def zero_maps(ext: ExtensionRing, x: Module) -> tuple:
    return tuple(np.zeros((x.dim, ext.M(i).dim * x.dim), dtype=np.int64) for i in range(1, ext.n + 1))


def validate_fmodule(m: FModule) -> list[str]:
    """Empty iff ``m`` is an object of the right extension category."""
    ext, X = m.ext, m.X
    fld = ext.field
    if not X.algebra.same_as(ext.base):
        return ["X is not a module over the base ring"]
    report = [f"X: {msg}" for msg in X.validate()]
    dx = X.dim
    ix = np.eye(dx, dtype=np.int64)
    for i in range(1, ext.n + 1):
        mi = ext.M(i)
        fi = m.fmap(i)
        if np.any(fld.matmul(fi, balancing_relations(mi, X))):
            report.append(f"f_{i} does not factor through M_{i} (x)_R X")
        for a in range(ext.base.dim):
            if not np.array_equal(fld.matmul(fi, np.kron(mi.left_act[a], ix)), fld.matmul(X.act[a], fi)):
                report.append(f"f_{i} is not R-linear for e{a}")
    for i in range(1, ext.n + 1):
        for j in range(1, ext.n + 1):
            lhs = fld.matmul(m.fmap(i), np.kron(np.eye(ext.M(i).dim, dtype=np.int64), m.fmap(j)))
            if i + j > ext.n:
                if np.any(lhs):
                    report.append(f"condition (i) fails: f_{i} (M_{i} (x) f_{j}) != 0 for (i,j)=({i},{j})")
            else:
                rhs = fld.matmul(m.fmap(i + j), np.kron(ext.phi_system.phi[(i, j)], ix))
                if not np.array_equal(lhs, rhs):
                    report.append(f"condition (ii) fails for (i,j)=({i},{j})")
    return report


def _require(report: list[str], what: str):
    if report:
        raise InvalidInput(what, report)


def fmodule_to_saction(m: FModule, check: bool = True) -> Module:
    if check:
        _require(validate_fmodule(m), "module")
    ext = m.ext
    mats = list(m.X.act)
    for i in range(1, ext.n + 1):
        mats.extend(m.element_action(i, t) for t in range(ext.M(i).dim))
    if not mats or m.dim == 0:
        return Module(ext.total, np.zeros((ext.dim, m.dim, m.dim), dtype=np.int64))
    return Module(ext.total, np.stack(mats))


def saction_to_fmodule(s: Module, ext: ExtensionRing, check: bool = True) -> FModule:
    if not s.algebra.same_as(ext.total):
        raise ValueError("action is not over this extension ring")
    if check:
        _require(s.validate(), "S-action")
    d0 = ext.base.dim
    X = Module(ext.base, s.act[:d0])
    f = []
    for i in range(1, ext.n + 1):
        blk = s.act[ext.block(i)]
        f.append(np.hstack(list(blk)) if len(blk) else np.zeros((s.dim, 0), dtype=np.int64))
    return FModule(ext, X, tuple(f))


def morphism_space(a: FModule, b: FModule) -> list[Mat]:
    """Basis of R-linear ``g: X_a -> X_b`` with ``g f_i = f'_i (M_i (x) g)`` for all i."""
    ext = a.ext
    fld = ext.field
    dx, dy = a.dim, b.dim
    if dx == 0 or dy == 0:
        return []
    ix, iy = np.eye(dx, dtype=np.int64), np.eye(dy, dtype=np.int64)
    rows = [np.kron(iy, a.X.act[r].T) - np.kron(b.X.act[r], ix) for r in range(ext.base.dim)]
    for i in range(1, ext.n + 1):
        mdim = ext.M(i).dim
        if mdim == 0:
            continue
        # g f_i  ->  kron(I_dy, f_i^T) on vec(g)
        lhs = np.kron(iy, a.fmap(i).T)
        # f'_i (I (x) g): entry [y, t*dx + x] = sum_y' f'_i[y, t*dy + y'] g[y', x]
        fb = b.fmap(i).reshape(dy, mdim, dy)
        rhs = np.einsum("yts,xz->ytxsz", fb, ix).reshape(dy * mdim * dx, dy * dx)
        rows.append(lhs - rhs)
    eqs = np.mod(np.vstack(rows), fld.p)
    return solution_basis(fld, eqs, (dy, dx))


def is_morphism(a: FModule, b: FModule, g: Mat) -> bool:
    ext = a.ext
    fld = ext.field
    g = np.asarray(g, dtype=np.int64)
    if g.shape != (b.dim, a.dim):
        return False
    for r in range(ext.base.dim):
        if not np.array_equal(fld.matmul(g, a.X.act[r]), fld.matmul(b.X.act[r], g)):
            return False
    for i in range(1, ext.n + 1):
        lhs = fld.matmul(g, a.fmap(i))
        rhs = fld.matmul(b.fmap(i), np.kron(np.eye(ext.M(i).dim, dtype=np.int64), g))
        if not np.array_equal(lhs, rhs):
            return False
    return True


def isomorphic(a: FModule, b: FModule, budget: int = DEFAULT_BUDGET, seed: int = 0) -> Verdict:
    """Search the morphism space for an invertible element.

    ``no`` is returned only on a dimension obstruction, an empty morphism
    space, or an exhaustive search; otherwise an unsuccessful search is
    ``inconclusive``.
    """
    if a.dim != b.dim:
        return Verdict("no", reason=f"dimension obstruction {a.dim} != {b.dim}")
    if a.dim == 0:
        return Verdict("yes", np.zeros((0, 0), dtype=np.int64))
    homs = morphism_space(a, b)
    if not homs:
        return Verdict("no", reason="morphism space is zero")
    return search_invertible(a.ext.field, homs, budget, seed)


def saction_hom(a: Module, b: Module) -> list[Mat]:
    """S-linear maps between plain S-actions."""
    return hom_space(a, b)


# -- left form ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GModule:
    """An S-module as ``(X, g)`` with ``g_i: X -> Hom_R(M_i, X)`` in hom-space coordinates."""

    ext: ExtensionRing
    X: Module
    g: tuple
    homs: tuple

    @property
    def dim(self) -> int:
        return self.X.dim

    def gmap(self, i: int) -> Mat:
        return self.g[i - 1]

    def ambient(self, i: int) -> Mat:
        """``g_i`` with values as flattened ``dim X x dim M_i`` matrices."""
        return self.homs[i - 1].to_ambient(self.g[i - 1])


def hom_spaces(ext: ExtensionRing, x: Module) -> tuple[HomSpace, ...]:
    return tuple(hom_R(ext.M(i), x) for i in range(1, ext.n + 1))


def to_left_form(m: FModule, check: bool = True) -> GModule:
    """``g_i = phi_i(f_i)``: currying ``Hom(M_i (x) X, X) = Hom(X, Hom_R(M_i, X))``."""
    if check:
        _require(validate_fmodule(m), "module")
    homs = hom_spaces(m.ext, m.X)
    g = []
    for i in range(1, m.ext.n + 1):
        dm = m.ext.M(i).dim
        # f_i[x', t*dx + x] == g_i(e_x)(e_t)[x'], which is the same buffer
        amb = m.fmap(i).reshape(m.dim * dm, m.dim)
        g.append(homs[i - 1].basis.coords(amb))
    return GModule(m.ext, m.X, tuple(g), homs)


def from_left_form(gm: GModule, check: bool = True) -> FModule:
    if check:
        _require(validate_gmodule(gm), "left-form module")
    f = []
    for i in range(1, gm.ext.n + 1):
        dm = gm.ext.M(i).dim
        f.append(gm.ambient(i).reshape(gm.dim, dm * gm.dim))
    return FModule(gm.ext, gm.X, tuple(f))


def left_form_tensor(gm: GModule, i: int) -> Mat:
    """``g_i`` as an array ``G[x', t, x] = g_i(e_x)(e_t)[x']``."""
    return gm.ambient(i).reshape(gm.dim, gm.ext.M(i).dim, gm.dim)


def validate_gmodule(gm: GModule) -> list[str]:
    """Compatibility of the ``g_i`` through the curried pre-products.

    With ``(Psi h)(m_j)(m_i) = h(phi_ij(m_i (x) m_j))`` the conditions read
    ``Psi_ij g_{i+j} = (G_j g_i) g_j`` for ``i + j <= n`` and
    ``(G_j g_i) g_j = 0`` otherwise.
    """
    ext, X = gm.ext, gm.X
    fld = ext.field
    p = fld.p
    report = [f"X: {msg}" for msg in X.validate()]
    for i in range(1, ext.n + 1):
        h = gm.homs[i - 1]
        if h.target is not X and not h.target.same_as(X):
            report.append(f"hom space {i} has a different target")
        if gm.g[i - 1].shape != (h.dim, X.dim):
            report.append(f"g_{i} must have shape {(h.dim, X.dim)}")
    if report:
        return report
    for i in range(1, ext.n + 1):
        h = gm.homs[i - 1]
        for a in range(ext.base.dim):
            if not np.array_equal(fld.matmul(gm.g[i - 1], X.act[a]), fld.matmul(h.module.act[a], gm.g[i - 1])):
                report.append(f"g_{i} is not R-linear for e{a}")
    tensors = {i: left_form_tensor(gm, i) for i in range(1, ext.n + 1)}
    for i in range(1, ext.n + 1):
        for j in range(1, ext.n + 1):
            gi, gj = tensors[i], tensors[j]
            # [x', t (M_i), s (M_j), x]
            comp = np.mod(np.einsum("aty,ysx->atsx", gi, gj), p)
            if i + j > ext.n:
                if np.any(comp):
                    report.append(f"(G_{j} g_{i}) g_{j} != 0 for (i,j)=({i},{j})")
                continue
            phi = ext.phi_system.phi[(i, j)].reshape(ext.M(i + j).dim, ext.M(i).dim, ext.M(j).dim)
            psi = np.mod(np.einsum("uts,aux->atsx", phi, tensors[i + j]), p)
            if not np.array_equal(comp, psi):
                report.append(f"Psi square fails for (i,j)=({i},{j})")
    return report


def gmodule_morphism_space(a: GModule, b: GModule) -> list[Mat]:
    """Basis of R-linear ``gamma`` with ``(G_i gamma) g_i = g'_i gamma``."""
    ext = a.ext
    fld = ext.field
    dx, dy = a.dim, b.dim
    if dx == 0 or dy == 0:
        return []

    def equations(gamma):
        parts = [fld.matmul(gamma, a.X.act[r]) - fld.matmul(b.X.act[r], gamma) for r in range(ext.base.dim)]
        for i in range(1, ext.n + 1):
            post = a.homs[i - 1].postcompose(gamma, b.homs[i - 1])
            parts.append(fld.matmul(post, a.g[i - 1]) - fld.matmul(b.g[i - 1], gamma))
        return np.concatenate([np.ravel(x) for x in parts])

    eqs = operator_matrix(fld, equations, (dy, dx))
    return solution_basis(fld, eqs, (dy, dx))


def is_gmorphism(a: GModule, b: GModule, gamma: Mat) -> bool:
    ext = a.ext
    fld = ext.field
    for r in range(ext.base.dim):
        if not np.array_equal(fld.matmul(gamma, a.X.act[r]), fld.matmul(b.X.act[r], gamma)):
            return False
    for i in range(1, ext.n + 1):
        post = a.homs[i - 1].postcompose(gamma, b.homs[i - 1])
        if not np.array_equal(fld.matmul(post, a.g[i - 1]), fld.matmul(b.g[i - 1], gamma)):
            return False
    return True


def operator_coords(fld, basis: list[Mat], images: list[Mat], target_basis: list[Mat]) -> Mat | None:
    """Coordinates of ``images`` in ``target_basis``; ``None`` if some image is outside its span."""
    if not images:
        return np.zeros((len(target_basis), 0), dtype=np.int64)
    if not target_basis:
        return None if any(np.any(im) for im in images) else np.zeros((0, len(images)), dtype=np.int64)
    span = np.stack([t.ravel() for t in target_basis], axis=1)
    rhs = np.stack([im.ravel() for im in images], axis=1)
    return fld.solve(span, rhs)
