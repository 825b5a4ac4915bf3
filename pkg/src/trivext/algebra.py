"""Finite-dimensional unital associative F_p-algebras and their modules.

An algebra is given by structure constants ``table[i, j, k]``, the
coefficient of ``e_k`` in ``e_i * e_j``.  A left module is given by one
action matrix per algebra basis element.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import Mat, PrimeField, Subspace, block_diag

DEFAULT_BUDGET = 1 << 16


@dataclass
class Verdict:
    """Outcome of a decision procedure: ``yes``, ``no`` or ``inconclusive``."""

    status: str
    witness: object = None
    reason: str = ""

    @property
    def yes(self) -> bool:
        return self.status == "yes"

    @property
    def no(self) -> bool:
        return self.status == "no"

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True, eq=False)
class StructureAlgebra:
    field: PrimeField
    table: Mat
    unit: Mat

    def __post_init__(self):
        t = self.field.mat(self.table)
        d = t.shape[0]
        if t.shape != (d, d, d):
            raise ValueError(f"structure constants must be d x d x d, got {t.shape}")
        u = self.field.mat(self.unit).reshape(-1)
        if u.shape != (d,):
            raise ValueError(f"unit must have length {d}")
        t.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "unit", u)

    @property
    def dim(self) -> int:
        return self.table.shape[0]

    @property
    def p(self) -> int:
        return self.field.p

    def element(self, coords) -> "AlgebraElement":
        return AlgebraElement(self, self.field.mat(coords).reshape(self.dim))

    def basis_element(self, i: int) -> "AlgebraElement":
        e = np.zeros(self.dim, dtype=np.int64)
        e[i] = 1
        return AlgebraElement(self, e)

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit.copy())

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.dim, dtype=np.int64))

    def mul_coords(self, x: Mat, y: Mat) -> Mat:
        # bilinear extension; p < 2**31 keeps each term below 2**62
        xy = np.mod(np.outer(x, y), self.p).reshape(-1)
        return self.field.matmul(xy, self.table.reshape(-1, self.dim))

    def left_regular(self, x) -> Mat:
        """Matrix of ``y -> x y``."""
        x = getattr(x, "coords", x)
        return self.field.matmul(np.asarray(x, dtype=np.int64), self.table.reshape(self.dim, -1)).reshape(
            self.dim, self.dim
        ).T.copy()

    def right_regular(self, y) -> Mat:
        """Matrix of ``x -> x y``."""
        y = getattr(y, "coords", y)
        t = np.transpose(self.table, (1, 0, 2)).reshape(self.dim, -1)
        return self.field.matmul(np.asarray(y, dtype=np.int64), t).reshape(self.dim, self.dim).T.copy()

    def validate(self) -> list[str]:
        """Every failed associativity triple and unit law; empty iff valid."""
        report = []
        t = self.table
        # (e_i e_j) e_k  vs  e_i (e_j e_k)
        left = np.mod(np.einsum("ijm,mkl->ijkl", t, t), self.p)
        right = np.mod(np.einsum("jkm,iml->ijkl", t, t), self.p)
        bad = np.argwhere(np.any(left != right, axis=3))
        for i, j, k in bad:
            report.append(f"associativity fails on basis triple ({i},{j},{k})")
        ident = np.eye(self.dim, dtype=np.int64)
        for i in range(self.dim):
            if not np.array_equal(self.mul_coords(self.unit, ident[i]), ident[i]):
                report.append(f"unit fails on the left for e{i}")
            if not np.array_equal(self.mul_coords(ident[i], self.unit), ident[i]):
                report.append(f"unit fails on the right for e{i}")
        return report

    def opposite(self) -> "StructureAlgebra":
        return StructureAlgebra(self.field, np.transpose(self.table, (1, 0, 2)), self.unit)

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, np.transpose(self.table, (1, 0, 2))))

    def same_as(self, other: "StructureAlgebra") -> bool:
        return (
            self.p == other.p
            and np.array_equal(self.table, other.table)
            and np.array_equal(self.unit, other.unit)
        )

    def subalgebra(self, vectors) -> Subspace:
        """Smallest unital subalgebra containing the given coordinate vectors."""
        gens = [np.asarray(v, dtype=np.int64) for v in vectors]
        span = Subspace.span(self.field, [self.unit, *gens], self.dim)
        while True:
            prods = [self.mul_coords(g, b) for g in gens for b in span.basis]
            grown = Subspace.span(self.field, np.vstack([span.basis, *prods]) if prods else span.basis, self.dim)
            if grown.dim == span.dim:
                return span
            span = grown

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Indices of basis elements generating the algebra (greedy, in order)."""
        gens: list[int] = []
        sub = self.subalgebra([])
        ident = np.eye(self.dim, dtype=np.int64)
        for i in range(self.dim):
            if sub.dim == self.dim:
                break
            if not sub.contains(ident[i]):
                gens.append(i)
                sub = self.subalgebra([ident[g] for g in gens])
        return tuple(gens)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "dim": self.dim,
            "mult": self.table.tolist(),
            "unit": self.unit.tolist(),
        }


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    parent: StructureAlgebra
    coords: Mat

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.parent is not self.parent:
            raise ValueError("elements belong to different algebras")

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.parent, self.parent.mul_coords(self.coords, other.coords))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.parent, np.mod(self.coords + other.coords, self.parent.p))

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and other.parent is self.parent
            and np.array_equal(self.coords, other.coords)
        )

    def __hash__(self):
        return hash(self.coords.tobytes())

    def __repr__(self):
        return f"AlgebraElement({self.coords.tolist()})"


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def left_regular(a: StructureAlgebra, x: AlgebraElement) -> Mat:
    if x.parent is not a:
        raise ValueError("element does not belong to this algebra")
    return a.left_regular(x.coords)


def validate(a: StructureAlgebra) -> list[str]:
    return a.validate()


def truncated_polynomial(p: int, length: int) -> StructureAlgebra:
    """``F_p[x]/(x^length)`` with basis ``1, x, ..., x^(length-1)``."""
    d = length
    t = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d - i):
            t[i, j, i + j] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[0] = 1
    return StructureAlgebra(PrimeField(p), t, unit)


def prime_field_algebra(p: int) -> StructureAlgebra:
    return truncated_polynomial(p, 1)


def upper_triangular(p: int) -> StructureAlgebra:
    """Upper triangular 2x2 matrices over ``F_p`` with basis ``e11, e12, e22``."""
    t = np.zeros((3, 3, 3), dtype=np.int64)
    t[0, 0, 0] = t[0, 1, 1] = t[1, 2, 1] = t[2, 2, 2] = 1
    return StructureAlgebra(PrimeField(p), t, np.array([1, 0, 1]))


# -- algebra isomorphism -----------------------------------------------------


def _word_basis(a: StructureAlgebra) -> list[tuple[int, ...]]:
    """Words in ``a.generators`` whose values form a basis of ``a``.

    The empty word stands for the unit.
    """
    gens = a.generators
    ident = np.eye(a.dim, dtype=np.int64)
    words: list[tuple[int, ...]] = [()]
    values = [a.unit]
    span = Subspace.span(a.field, values, a.dim)
    frontier = [()]
    while span.dim < a.dim and frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                word = (g, *w)
                val = a.mul_coords(ident[g], _word_value(a, w))
                if not span.contains(val):
                    words.append(word)
                    span = span + Subspace.span(a.field, [val], a.dim)
                    nxt.append(word)
        frontier = nxt
    return words


def _word_value(a: StructureAlgebra, word, images=None) -> Mat:
    ident = np.eye(a.dim, dtype=np.int64)
    v = a.unit.copy()
    for g in reversed(word):
        left = ident[g] if images is None else images[g]
        v = a.mul_coords(left, v)
    return v


def _check_algebra_map(a: StructureAlgebra, b: StructureAlgebra, w: Mat) -> bool:
    fld = a.field
    if not np.array_equal(fld.matmul(w, a.unit), b.unit):
        return False
    ident = np.eye(a.dim, dtype=np.int64)
    wcols = w.T
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = fld.matmul(w, a.mul_coords(ident[i], ident[j]))
            if not np.array_equal(lhs, b.mul_coords(wcols[i], wcols[j])):
                return False
    return True


def algebras_isomorphic(
    a: StructureAlgebra, b: StructureAlgebra, budget: int = DEFAULT_BUDGET, seed: int = 0
) -> Verdict:
    """Search for an algebra isomorphism ``a -> b``.

    Any isomorphism is determined by the images of ``a``'s algebra generators,
    so the search runs over generator images: exhaustively when there are at
    most ``budget`` assignments, otherwise over ``budget`` seeded random
    assignments.  A ``yes`` carries a witness matrix that has been re-checked
    on every basis pair.
    """
    if a.p != b.p or a.dim != b.dim:
        return Verdict("no", reason="dimension or characteristic mismatch")
    fld = a.field
    gens = a.generators
    words = _word_basis(a)
    word_vals = np.stack([_word_value(a, w) for w in words], axis=1)
    word_inv = fld.inverse(word_vals)
    if word_inv is None:  # pragma: no cover - word basis spans by construction
        raise RuntimeError("word basis is not a basis")

    def attempt(images):
        table = {g: images[k] for k, g in enumerate(gens)}
        vals = np.stack([_word_value(b, w, table) for w in words], axis=1)
        w = fld.matmul(vals, word_inv)
        if fld.is_invertible(w) and _check_algebra_map(a, b, w):
            return w
        return None

    total = b.p ** (b.dim * len(gens))
    if not gens:
        w = attempt([])
        return Verdict("yes", w) if w is not None else Verdict("no", reason="unit images disagree")
    if total <= budget:
        for flat in itertools.product(range(b.p), repeat=b.dim * len(gens)):
            imgs = np.array(flat, dtype=np.int64).reshape(len(gens), b.dim)
            w = attempt(imgs)
            if w is not None:
                return Verdict("yes", w)
        return Verdict("no", reason="exhaustive search over generator images")
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        w = attempt(rng.integers(0, b.p, size=(len(gens), b.dim)))
        if w is not None:
            return Verdict("yes", w)
    return Verdict("inconclusive", reason=f"no witness in {budget} random trials")


# -- modules -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Module:
    """A finite-dimensional left module: one action matrix per basis element."""

    algebra: StructureAlgebra
    act: Mat

    def __post_init__(self):
        a = self.algebra.field.mat(self.act)
        d = self.algebra.dim
        if a.ndim != 3 or a.shape[0] != d or a.shape[1] != a.shape[2]:
            raise ValueError(f"action must have shape ({d}, n, n), got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "act", a)

    @property
    def dim(self) -> int:
        return self.act.shape[1]

    @property
    def field(self) -> PrimeField:
        return self.algebra.field

    def action(self, coords) -> Mat:
        coords = getattr(coords, "coords", coords)
        return np.mod(np.tensordot(np.asarray(coords, dtype=np.int64), self.act, axes=1), self.field.p)

    def validate(self) -> list[str]:
        report = []
        p = self.field.p
        n = self.dim
        if not np.array_equal(self.action(self.algebra.unit), np.eye(n, dtype=np.int64)):
            report.append("unit does not act as the identity")
        prods = np.mod(np.einsum("aij,bjk->abik", self.act, self.act), p)
        expected = np.mod(np.einsum("abc,cik->abik", self.algebra.table, self.act), p)
        for a, b in np.argwhere(np.any(prods != expected, axis=(2, 3))):
            report.append(f"action not multiplicative on basis pair ({a},{b})")
        return report

    def transport(self, change: Mat) -> "Module":
        """The module with basis changed by the invertible ``change`` (new = change * old)."""
        inv = self.field.inverse(change)
        if inv is None:
            raise ValueError("change of basis is not invertible")
        fld = self.field
        return Module(self.algebra, np.stack([fld.mm(change, a, inv) for a in self.act]))

    def same_as(self, other: "Module") -> bool:
        return self.algebra.same_as(other.algebra) and np.array_equal(self.act, other.act)


def zero_module(alg: StructureAlgebra) -> Module:
    return Module(alg, np.zeros((alg.dim, 0, 0), dtype=np.int64))


def trivial_module(alg: StructureAlgebra, dim: int) -> Module:
    """``F_p^dim`` with every basis element acting by its unit coordinate."""
    act = np.stack([int(alg.unit[a]) * np.eye(dim, dtype=np.int64) for a in range(alg.dim)])
    return Module(alg, act)


def regular_module(alg: StructureAlgebra) -> Module:
    return Module(alg, np.transpose(alg.table, (0, 2, 1)))


def free_module(alg: StructureAlgebra, k: int) -> Module:
    reg = regular_module(alg)
    return direct_sum(*([reg] * k)) if k else zero_module(alg)


def direct_sum(*mods: Module) -> Module:
    alg = mods[0].algebra
    return Module(alg, np.stack([block_diag(*(m.act[a] for m in mods)) for a in range(alg.dim)]))


def dual_module(m: Module) -> Module:
    """``Hom_F(M, F)`` as a left module over the opposite algebra."""
    return Module(m.algebra.opposite(), np.transpose(m.act, (0, 2, 1)))


def hom_space(a: Module, b: Module, use_generators: bool = True) -> list[Mat]:
    """Basis of ``Hom(a, b)``: matrices ``g`` with ``g a(e) = b(e) g``.

    With ``use_generators`` only the algebra generators are imposed, which is
    equivalent for valid modules.
    """
    fld = a.field
    n, m = a.dim, b.dim
    if n == 0 or m == 0:
        return []
    idx = a.algebra.generators if use_generators else range(a.algebra.dim)
    rows = []
    for e in idx:
        # row-major vec: vec(g A) = (I (x) A^T) vec g ; vec(B g) = (B (x) I) vec g
        rows.append(np.kron(np.eye(m, dtype=np.int64), a.act[e].T) - np.kron(b.act[e], np.eye(n, dtype=np.int64)))
    if not rows:
        return [row.reshape(m, n) for row in np.eye(m * n, dtype=np.int64)]
    eqs = np.mod(np.vstack(rows), fld.p)
    return [row.reshape(m, n) for row in fld.kernel(eqs).basis]


def is_hom(a: Module, b: Module, g: Mat) -> bool:
    fld = a.field
    return all(
        np.array_equal(fld.matmul(g, a.act[e]), fld.matmul(b.act[e], g)) for e in range(a.algebra.dim)
    )


def submodule_generated(m: Module, vectors) -> Subspace:
    fld = m.field
    span = Subspace.span(fld, vectors, m.dim)
    gens = m.algebra.generators
    while True:
        imgs = [fld.matmul(m.act[g], span.basis.T).T for g in gens]
        grown = Subspace.span(fld, np.vstack([span.basis, *imgs]), m.dim)
        if grown.dim == span.dim:
            return span
        span = grown


def restrict(m: Module, sub: Subspace) -> Module:
    """The submodule on ``sub`` in the coordinates of its echelon basis."""
    fld = m.field
    inc = sub.inclusion()
    act = [sub.coords(fld.matmul(m.act[a], inc)) for a in range(m.algebra.dim)]
    if sub.dim == 0:
        return zero_module(m.algebra)
    return Module(m.algebra, np.stack(act))


def quotient(m: Module, sub: Subspace) -> tuple[Module, Mat, Mat]:
    """``(m/sub, proj, section)`` with the induced action."""
    fld = m.field
    proj, section = fld.quotient_map(m.dim, sub)
    if proj.shape[0] == 0:
        return zero_module(m.algebra), proj, section
    act = np.stack([fld.mm(proj, m.act[a], section) for a in range(m.algebra.dim)])
    return Module(m.algebra, act), proj, section


def generating_vectors(m: Module) -> list[int]:
    """Indices of basis vectors that generate ``m`` (greedy, in order)."""
    fld = m.field
    chosen: list[int] = []
    sub = Subspace.zero(fld, m.dim)
    ident = np.eye(m.dim, dtype=np.int64)
    for i in range(m.dim):
        if sub.dim == m.dim:
            break
        if not sub.contains(ident[i]):
            chosen.append(i)
            sub = submodule_generated(m, ident[chosen])
    return chosen


def cover_map(m: Module, vectors: Mat) -> Mat:
    """The map ``A^k -> m`` sending the j-th free generator to ``vectors[:, j]``."""
    fld = m.field
    vectors = np.asarray(vectors, dtype=np.int64).reshape(m.dim, -1)
    blocks = []
    for j in range(vectors.shape[1]):
        blocks.append(np.stack([fld.matmul(m.act[s], vectors[:, j]) for s in range(m.algebra.dim)], axis=1))
    if not blocks:
        return np.zeros((m.dim, 0), dtype=np.int64)
    return np.hstack(blocks)


def split_free_cover(m: Module, vectors: Mat | None = None) -> Mat | None:
    """A module map ``sigma: m -> A^k`` with ``pi sigma = id``, or ``None``.

    ``pi`` is :func:`cover_map` on ``vectors`` (default: the standard basis,
    so ``k = dim m``).  This is exact: the splitting maps form an affine
    subspace of ``Hom(m, A)^k`` found by one linear solve.
    """
    fld = m.field
    if m.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if vectors is None:
        vectors = np.eye(m.dim, dtype=np.int64)
    vectors = np.asarray(vectors, dtype=np.int64).reshape(m.dim, -1)
    alg = m.algebra
    homs = hom_space(m, regular_module(alg))
    if not homs:
        return None
    k = vectors.shape[1]
    cover_blocks = [
        np.stack([fld.matmul(m.act[s], vectors[:, j]) for s in range(alg.dim)], axis=1) for j in range(k)
    ]
    cols = []
    for j in range(k):
        for h in homs:
            cols.append(fld.matmul(cover_blocks[j], h).ravel())
    system = np.stack(cols, axis=1)
    coeffs = fld.solve(system, np.eye(m.dim, dtype=np.int64).ravel())
    if coeffs is None:
        return None
    sigma = np.zeros((k * alg.dim, m.dim), dtype=np.int64)
    c = 0
    for j in range(k):
        for h in homs:
            sigma[j * alg.dim : (j + 1) * alg.dim] += coeffs[c] * h
            c += 1
    return np.mod(sigma, fld.p)


def syzygy(m: Module) -> tuple[Module, Mat, Mat]:
    """Kernel of a free cover of ``m`` on greedily chosen generators.

    Returns ``(kernel, inclusion into the free module, cover map)``.
    """
    fld = m.field
    gens = generating_vectors(m)
    vectors = np.eye(m.dim, dtype=np.int64)[:, gens]
    pi = cover_map(m, vectors)
    free = free_module(m.algebra, len(gens))
    ker = fld.kernel(pi)
    return restrict(free, ker), ker.inclusion(), pi


def find_isomorphism(
    a: Module, b: Module, budget: int = DEFAULT_BUDGET, seed: int = 0, homs: list[Mat] | None = None
) -> Verdict:
    """Search ``Hom(a, b)`` for an invertible element."""
    if a.dim != b.dim:
        return Verdict("no", reason=f"dimension obstruction {a.dim} != {b.dim}")
    if a.dim == 0:
        return Verdict("yes", np.zeros((0, 0), dtype=np.int64))
    if homs is None:
        homs = hom_space(a, b)
    if not homs:
        return Verdict("no", reason="no nonzero morphisms")
    return search_invertible(a.field, homs, budget, seed)


def search_invertible(fld: PrimeField, homs: list[Mat], budget: int, seed: int) -> Verdict:
    for h in homs:
        if fld.is_invertible(h):
            return Verdict("yes", h)
    rng = np.random.default_rng(seed)
    exhaustive = fld.search_space(len(homs), budget)
    for cand in fld.combinations(homs, budget, rng):
        if fld.is_invertible(cand):
            return Verdict("yes", cand)
    if exhaustive:
        return Verdict("no", reason="exhaustive search found no invertible morphism")
    return Verdict("inconclusive", reason=f"no invertible morphism in {budget} random trials")


@dataclass(frozen=True)
class AtLeast:
    """A homological dimension known only to be at least ``bound``."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


def dimension_json(d) -> object:
    return str(d) if isinstance(d, AtLeast) else int(d)


def enumerate_modules(alg: StructureAlgebra, dim: int) -> list[Module]:
    """All module structures on ``F_p^dim`` (brute force over generator images)."""
    fld = alg.field
    gens = alg.generators
    words = _word_basis(alg)
    word_vals = np.stack([_word_value(alg, w) for w in words], axis=1)
    word_inv = fld.inverse(word_vals)
    out = []
    if dim == 0:
        return [zero_module(alg)]
    count = fld.p ** (dim * dim * len(gens))
    if count > 10**6:
        raise ValueError(f"too many candidate structures ({count})")
    ident = np.eye(dim, dtype=np.int64)
    for flat in itertools.product(range(fld.p), repeat=dim * dim * len(gens)):
        mats = np.array(flat, dtype=np.int64).reshape(len(gens), dim, dim)
        images = {g: mats[k] for k, g in enumerate(gens)}
        word_acts = []
        for w in words:
            acc = ident
            for g in w:
                acc = fld.matmul(acc, images[g])
            word_acts.append(acc)
        # action of e_s = sum_w (word_inv)[w, s] * action(word w)
        stack = np.stack(word_acts)
        act = np.mod(np.tensordot(word_inv.T, stack, axes=1), fld.p)
        m = Module(alg, act)
        if not m.validate():
            out.append(m)
    return out
