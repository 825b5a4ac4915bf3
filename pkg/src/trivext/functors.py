"""The functors T, C, U, Z (right form) and H, K (left form) on concrete modules.

Block orders: ``T(X) = X + M_1 (x) X + ... + M_n (x) X`` and
``H(X) = G_n X + ... + G_1 X + X`` where ``G_i X = Hom_R(M_i, X)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Module, hom_space, quotient, restrict, zero_module
from .bimodule import hom_R, tensor_over_R
from .extension import ExtensionRing
from .linalg import Mat, Subspace, block_diag
from .smodule import (
    FModule,
    GModule,
    gmodule_morphism_space,
    hom_spaces,
    is_gmorphism,
    is_morphism,
    morphism_space,
    to_left_form,
    validate_fmodule,
    zero_maps,
)

FUNCTOR_TAGS = ("U", "Z", "T", "C", "H", "K")
ADJOINT_PAIRS = (("T", "U"), ("C", "Z"), ("U", "H"), ("Z", "K"))


# -- T -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FreeLift:
    """``T(X)`` together with the tensor spaces and block offsets used to build it."""

    source: Module
    module: FModule
    tensors: tuple
    offsets: tuple

    def block(self, k: int) -> slice:
        return slice(self.offsets[k], self.offsets[k + 1])

    def kappa(self, i: int) -> Mat:
        """Action matrices of the basis of ``M_i`` side by side, on ``T(X)`` coordinates."""
        return self.module.fmap(i)


def free_lift(ext: ExtensionRing, x: Module) -> FreeLift:
    fld = ext.field
    n = ext.n
    tensors = tuple(tensor_over_R(ext.M(i), x) for i in range(1, n + 1))
    sizes = [x.dim] + [t.dim for t in tensors]
    offsets = tuple(int(v) for v in np.concatenate([[0], np.cumsum(sizes)]))
    du = offsets[-1]
    blk = lambda k: slice(offsets[k], offsets[k + 1])  # noqa: E731
    act = np.stack([block_diag(x.act[a], *(t.module.act[a] if t.dim else np.zeros((0, 0), dtype=np.int64)
                                           for t in tensors)) for a in range(ext.base.dim)])
    ux = Module(ext.base, act)
    ix = np.eye(x.dim, dtype=np.int64)
    f = []
    for i in range(1, n + 1):
        mi = ext.M(i)
        ti = tensors[i - 1]
        mats = []
        for t in range(mi.dim):
            a_t = np.zeros((du, du), dtype=np.int64)
            # X -> M_i (x) X : x -> e_t (x) x
            a_t[blk(i), blk(0)] = ti.proj[:, t * x.dim : (t + 1) * x.dim]
            for j in range(1, n + 1 - i):
                tj, tij = tensors[j - 1], tensors[i + j - 1]
                if tj.dim == 0 or tij.dim == 0:
                    continue
                dmj = ext.M(j).dim
                big = np.kron(ext.phi_system.phi[(i, j)], ix)
                cols = big[:, t * dmj * x.dim : (t + 1) * dmj * x.dim]
                a_t[blk(i + j), blk(j)] = fld.mm(tij.proj, cols, tj.section)
            mats.append(a_t)
        f.append(np.hstack(mats) if mats else np.zeros((du, 0), dtype=np.int64))
    return FreeLift(x, FModule(ext, ux, tuple(f)), tensors, offsets)


def T(ext: ExtensionRing, x: Module) -> FModule:
    return free_lift(ext, x).module


def T_morphism(ext: ExtensionRing, x: Module, y: Module, alpha: Mat, lx: FreeLift = None, ly: FreeLift = None) -> Mat:
    """``diag(alpha, F_1 alpha, ..., F_n alpha)``."""
    fld = ext.field
    lx = lx or free_lift(ext, x)
    ly = ly or free_lift(ext, y)
    blocks = [np.asarray(alpha, dtype=np.int64)]
    for i in range(1, ext.n + 1):
        tx, ty = lx.tensors[i - 1], ly.tensors[i - 1]
        fa = np.kron(np.eye(ext.M(i).dim, dtype=np.int64), alpha)
        blocks.append(fld.mm(ty.proj, fa, tx.section) if tx.dim and ty.dim else np.zeros((ty.dim, tx.dim), dtype=np.int64))
    return block_diag(*blocks)


# -- C, U, Z -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Cokernel:
    module: Module
    proj: Mat
    section: Mat
    image: Subspace


def C(m: FModule) -> Cokernel:
    """``X / sum_i Im f_i`` with its surjection."""
    fld = m.ext.field
    cols = [fi for fi in m.f if fi.shape[1]]
    img = Subspace.column_span(fld, np.hstack(cols)) if cols and m.dim else Subspace.zero(fld, m.dim)
    mod, proj, section = quotient(m.X, img)
    return Cokernel(mod, proj, section, img)


def C_morphism(a: FModule, b: FModule, gamma: Mat, ca: Cokernel = None, cb: Cokernel = None) -> Mat:
    fld = a.ext.field
    ca = ca or C(a)
    cb = cb or C(b)
    induced = fld.mm(cb.proj, gamma, ca.section)
    # well defined: gamma maps the image of the f_i into that of the f'_i
    moved = fld.mm(cb.proj, gamma, ca.image.inclusion()) if ca.image.dim else np.zeros((cb.module.dim, 0))
    if np.any(moved):
        raise ValueError("map does not descend to cokernels")
    return induced


def U(m) -> Module:
    return m.X


def Z(ext: ExtensionRing, x: Module) -> FModule:
    return FModule(ext, x, zero_maps(ext, x))


def Z_left(ext: ExtensionRing, x: Module) -> GModule:
    homs = hom_spaces(ext, x)
    return GModule(ext, x, tuple(np.zeros((h.dim, x.dim), dtype=np.int64) for h in homs), homs)


# -- H, K --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CofreeLift:
    """``H(X)``: the module, the hom spaces ``G_k X`` and block offsets.

    Block 0 is ``G_n X`` and block ``n`` is ``X``; ``block_of(k)`` gives the
    position of ``G_k X`` (``k = 0`` for ``X``).
    """

    source: Module
    module: GModule
    fmodule: FModule
    homs: tuple
    offsets: tuple
    lambda_table: dict = field(default_factory=dict)

    def block_of(self, k: int) -> slice:
        pos = len(self.homs) - k
        return slice(self.offsets[pos], self.offsets[pos + 1])


def cofree_lift(ext: ExtensionRing, x: Module) -> CofreeLift:
    """``H(X) = Hom_R(S, X)`` assembled from the identity and Psi entries."""
    fld = ext.field
    n = ext.n
    homs = tuple(hom_R(ext.M(k), x) for k in range(1, n + 1))
    sizes = [homs[k - 1].dim for k in range(n, 0, -1)] + [x.dim]
    offsets = tuple(int(v) for v in np.concatenate([[0], np.cumsum(sizes)]))
    du = offsets[-1]

    def blk(k):
        pos = n - k
        return slice(offsets[pos], offsets[pos + 1])

    act = np.zeros((ext.base.dim, du, du), dtype=np.int64)
    for a in range(ext.base.dim):
        for k in range(1, n + 1):
            if homs[k - 1].dim:
                act[a, blk(k), blk(k)] = homs[k - 1].module.act[a]
        act[a, blk(0), blk(0)] = x.act[a]
    ux = Module(ext.base, act)
    table = {}
    f = []
    for i in range(1, n + 1):
        mi = ext.M(i)
        hi = homs[i - 1]
        mats = []
        for t in range(mi.dim):
            a_t = np.zeros((du, du), dtype=np.int64)
            # identity entry: G_i X -> X, h -> h(e_t)
            if hi.dim:
                a_t[blk(0), blk(i)] = np.stack([b[:, t] for b in hi.matrices()], axis=1)
                table[(i, "X", f"G{i}")] = "id"
            # Psi entries: G_{i+j} X -> G_j X, h -> (m_j -> h(phi_ji(m_j (x) e_t)))
            for j in range(1, n + 1 - i):
                hj, hij = homs[j - 1], homs[i + j - 1]
                if hj.dim == 0 or hij.dim == 0:
                    continue
                di = mi.dim
                phi = ext.phi_system.phi[(j, i)]
                sel = phi[:, [s * di + t for s in range(ext.M(j).dim)]]
                imgs = [fld.matmul(b, sel) for b in hij.matrices()]
                a_t[blk(j), blk(i + j)] = np.stack([hj.coords(h) for h in imgs], axis=1)
                table[(i, f"G{j}", f"G{i + j}")] = f"Psi_{i},{j}"
            mats.append(a_t)
        f.append(np.hstack(mats) if mats else np.zeros((du, 0), dtype=np.int64))
    fm = FModule(ext, ux, tuple(f))
    gm = to_left_form(fm, check=False)
    return CofreeLift(x, gm, fm, homs, offsets, table)


def H(ext: ExtensionRing, x: Module) -> GModule:
    return cofree_lift(ext, x).module


def H_morphism(ext: ExtensionRing, x: Module, y: Module, alpha: Mat, hx: CofreeLift = None, hy: CofreeLift = None) -> Mat:
    """``diag(G_n alpha, ..., G_1 alpha, alpha)``."""
    hx = hx or cofree_lift(ext, x)
    hy = hy or cofree_lift(ext, y)
    blocks = []
    for k in range(ext.n, 0, -1):
        sx, sy = hx.homs[k - 1], hy.homs[k - 1]
        blocks.append(sx.postcompose(alpha, sy) if sx.dim and sy.dim else np.zeros((sy.dim, sx.dim), dtype=np.int64))
    blocks.append(np.asarray(alpha, dtype=np.int64))
    return block_diag(*blocks)


@dataclass(frozen=True, eq=False)
class Kernel:
    module: Module
    inclusion: Mat
    subspace: Subspace


def K(gm: GModule) -> Kernel:
    """``Ker(g: X -> sum_i G_i X)``."""
    fld = gm.ext.field
    rows = [g for g in gm.g if g.shape[0]]
    if rows and gm.dim:
        sub = fld.kernel(np.vstack(rows))
    else:
        sub = Subspace.full(fld, gm.dim)
    mod = restrict(gm.X, sub) if sub.dim else zero_module(gm.ext.base)
    return Kernel(mod, sub.inclusion(), sub)


def K_morphism(a: GModule, b: GModule, gamma: Mat, ka: Kernel = None, kb: Kernel = None) -> Mat:
    fld = a.ext.field
    ka = ka or K(a)
    kb = kb or K(b)
    img = fld.matmul(gamma, ka.inclusion)
    if not kb.subspace.contains(img) if img.size else False:
        raise ValueError("map does not restrict to kernels")
    return kb.subspace.coords(img)


# -- adjunctions -------------------------------------------------------------


@dataclass
class AdjunctionReport:
    pair: str
    dim_left: int
    dim_right: int
    bijective: bool
    squares: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bijective and not self.failures and self.dim_left == self.dim_right

    def to_json(self) -> dict:
        return {
            "pair": self.pair,
            "dim_left": self.dim_left,
            "dim_right": self.dim_right,
            "bijective": self.bijective,
            "naturality_squares": self.squares,
            "failures": list(self.failures),
            "status": "pass" if self.ok else "fail",
        }


def _random_element(fld, basis: list[Mat], shape, rng) -> Mat:
    if not basis:
        return np.zeros(shape, dtype=np.int64)
    coeffs = rng.integers(0, fld.p, size=len(basis))
    return np.mod(np.tensordot(coeffs, np.stack(basis), axes=1), fld.p)


def _coords_in(fld, basis: list[Mat], mats: list[Mat]) -> Mat | None:
    if not mats:
        return np.zeros((len(basis), 0), dtype=np.int64)
    if not basis:
        return None if any(np.any(m) for m in mats) else np.zeros((0, len(mats)), dtype=np.int64)
    span = np.stack([b.ravel() for b in basis], axis=1)
    rhs = np.stack([m.ravel() for m in mats], axis=1)
    return fld.solve(span, rhs)


def _bijection_check(fld, left: list[Mat], right: list[Mat], forward, backward, report: AdjunctionReport):
    """``forward`` maps the left hom space to the right one; check it is a linear bijection."""
    images = [np.mod(forward(b), fld.p) for b in left]
    coords = _coords_in(fld, right, images)
    if coords is None:
        report.failures.append("forward image leaves the target hom space")
        report.bijective = False
        return
    if len(left) != len(right) or fld.rank(coords) != len(right):
        report.bijective = False
        report.failures.append("forward map is not invertible")
        return
    for b in right:
        back = np.mod(backward(b), fld.p)
        if not np.array_equal(np.mod(forward(back), fld.p), b):
            report.bijective = False
            report.failures.append("backward map is not a right inverse")
            return
    for b in left:
        if not np.array_equal(np.mod(backward(np.mod(forward(b), fld.p)), fld.p), b):
            report.bijective = False
            report.failures.append("backward map is not a left inverse")
            return
    report.bijective = True


def check_adjunction(pair, x, y, ext: ExtensionRing, squares: int = 20, seed: int = 0) -> AdjunctionReport:
    """Verify one adjunction on concrete objects ``x`` (left argument) and ``y``.

    ``(T, U)``: ``x`` an R-module, ``y`` an FModule.
    ``(C, Z)``: ``x`` an FModule, ``y`` an R-module.
    ``(U, H)``: ``x`` a GModule, ``y`` an R-module.
    ``(Z, K)``: ``x`` an R-module, ``y`` a GModule.

    The bijection is built explicitly, checked to be a linear isomorphism of
    hom spaces with its inverse, and checked for naturality on ``squares``
    random squares built from random endomorphisms of ``x`` and ``y``.
    """
    pair = tuple(pair)
    if pair not in ADJOINT_PAIRS:
        raise ValueError(f"{pair} is not one of the adjoint pairs {ADJOINT_PAIRS}")
    fld = ext.field
    rng = np.random.default_rng(seed)
    name = ",".join(pair)
    mm = fld.mm

    if pair == ("T", "U"):
        lift = free_lift(ext, x)
        tx = lift.module
        left = morphism_space(tx, y)
        right = hom_space(x, y.X)
        dx = x.dim

        def forward(phi):
            return phi[:, :dx]

        def backward(a):
            blocks = [a]
            for i in range(1, ext.n + 1):
                ti = lift.tensors[i - 1]
                if ti.dim == 0:
                    continue
                fa = mm(y.fmap(i), np.kron(np.eye(ext.M(i).dim, dtype=np.int64), a), ti.section)
                blocks.append(fa)
            return np.hstack(blocks)

        ends_x, ends_y = hom_space(x, x), morphism_space(y, y)
        shape_l = (y.dim, tx.dim)

        def left_map(phi, u, v):
            return mm(v, phi, T_morphism(ext, x, x, u, lift, lift))

        def right_map(a, u, v):
            return mm(v, a, u)

        valid_left = lambda phi: is_morphism(tx, y, phi)  # noqa: E731
    elif pair == ("C", "Z"):
        cok = C(x)
        zy = Z(ext, y)
        left = hom_space(cok.module, y)
        right = morphism_space(x, zy)

        def forward(phi):
            return mm(phi, cok.proj)

        def backward(psi):
            return mm(psi, cok.section)

        ends_x, ends_y = morphism_space(x, x), hom_space(y, y)
        shape_l = (y.dim, cok.module.dim)

        def left_map(phi, u, v):
            return mm(v, phi, C_morphism(x, x, u, cok, cok))

        def right_map(psi, u, v):
            return mm(v, psi, u)

        valid_left = None
    elif pair == ("U", "H"):
        lift = cofree_lift(ext, y)
        hy = lift.module
        left = hom_space(x.X, y)
        right = gmodule_morphism_space(x, hy)

        def forward(phi):
            blocks = []
            for k in range(ext.n, 0, -1):
                hk_y = lift.homs[k - 1]
                if hk_y.dim == 0:
                    continue
                amb = mm(np.kron(phi, np.eye(ext.M(k).dim, dtype=np.int64)), x.ambient(k))
                blocks.append(hk_y.basis.coords(amb))
            blocks.append(phi)
            return np.vstack(blocks)

        def backward(psi):
            return psi[lift.block_of(0), :]

        ends_x, ends_y = gmodule_morphism_space(x, x), hom_space(y, y)
        shape_l = (y.dim, x.dim)

        def left_map(phi, u, v):
            return mm(v, phi, u)

        def right_map(psi, u, v):
            return mm(H_morphism(ext, y, y, v, lift, lift), psi, u)

        valid_left = None
    else:  # ("Z", "K")
        zx = Z_left(ext, x)
        ker = K(y)
        left = gmodule_morphism_space(zx, y)
        right = hom_space(x, ker.module)

        def forward(phi):
            return ker.subspace.coords(phi)

        def backward(a):
            return mm(ker.inclusion, a)

        ends_x, ends_y = hom_space(x, x), gmodule_morphism_space(y, y)
        shape_l = (y.dim, x.dim)

        def left_map(phi, u, v):
            return mm(v, phi, u)

        def right_map(a, u, v):
            return mm(K_morphism(y, y, v, ker, ker), a, u)

        valid_left = lambda phi: is_gmorphism(zx, y, phi)  # noqa: E731

    report = AdjunctionReport(name, len(left), len(right), False, 0)
    _bijection_check(fld, left, right, forward, backward, report)
    if valid_left is not None:
        for b in right:
            if not valid_left(np.mod(backward(b), fld.p)):
                report.failures.append("backward image is not a morphism")
                break
    x_dim = ends_x[0].shape if ends_x else None
    y_dim = ends_y[0].shape if ends_y else None
    for _ in range(squares):
        phi = _random_element(fld, left, shape_l, rng)
        u = _random_element(fld, ends_x, x_dim or (0, 0), rng) if ends_x else None
        v = _random_element(fld, ends_y, y_dim or (0, 0), rng) if ends_y else None
        if u is None or v is None:
            # an object with no endomorphisms is zero; the square is trivially natural
            report.squares += 1
            continue
        lhs = forward(np.mod(left_map(phi, u, v), fld.p))
        rhs = right_map(np.mod(forward(phi), fld.p), u, v)
        if not np.array_equal(np.mod(lhs, fld.p), np.mod(rhs, fld.p)):
            report.failures.append("naturality square fails")
        report.squares += 1
    return report


def check_fmodule(m: FModule) -> FModule:
    report = validate_fmodule(m)
    if report:
        raise ValueError("; ".join(report))
    return m
