"""Corpus runs: every check over every instance, merged into one deterministic report."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .algebra import DEFAULT_BUDGET, enumerate_modules, is_hom, quotient, regular_module
from .corpus import Instance, build_instance, enumeration_corpus, instances, r_modules, radical_rows
from .functors import ADJOINT_PAIRS, C, K, T, Z, check_adjunction, cofree_lift
from .homtests import (
    dual,
    injective_oracle,
    is_flat,
    is_injective,
    is_projective,
    lifting_oracle,
    matching_candidates,
    perfect_desk_check,
    proj_dimension,
    regular_fmodule,
)
from .linalg import Subspace
from .smodule import to_left_form

CANDIDATES = ("h_paper", "h_corrected")


def functor_identities(inst: Instance, x) -> dict:
    """``CT = id`` through the canonical map, ``UZ = id`` exactly, ``KH = id`` on the X block."""
    ext = inst.ext
    fld = ext.field
    cok = C(T(ext, x))
    canon = cok.proj[:, : x.dim]
    ct = fld.is_invertible(canon) and is_hom(x, cok.module, canon)
    uz = np.array_equal(Z(ext, x).X.act, x.act)
    lift = cofree_lift(ext, x)
    ker = K(lift.module)
    block = np.eye(lift.module.dim, dtype=np.int64)[:, lift.block_of(0)]
    kh = ker.subspace == Subspace.column_span(fld, block) if x.dim else ker.subspace.dim == 0
    return {"CT": bool(ct), "UZ": bool(uz), "KH": bool(kh)}


def adjunction_partners(inst: Instance) -> list:
    """A few S-modules to pair with the R-modules: S itself, Z(R), T(R/rad) and Z(R/rad)."""
    ext = inst.ext
    r = regular_module(ext.base)
    top = quotient(r, Subspace.span(ext.field, radical_rows(inst.ring_name), r.dim))[0]
    return [regular_fmodule(ext), Z(ext, r), T(ext, top), Z(ext, top)]


def adjunction_checks(inst: Instance, xs, partners, squares: int = 20, seed: int = 0) -> dict:
    counts = {",".join(p): {"checked": 0, "failed": 0} for p in ADJOINT_PAIRS}
    ext = inst.ext
    for x in xs:
        for y in partners:
            yl = to_left_form(y, check=False)
            runs = {
                ("T", "U"): (x, y),
                ("C", "Z"): (y, x),
                ("U", "H"): (yl, x),
                ("Z", "K"): (x, yl),
            }
            for pair, (a, b) in runs.items():
                rep = check_adjunction(pair, a, b, ext, squares, seed)
                key = ",".join(pair)
                counts[key]["checked"] += 1
                counts[key]["failed"] += 0 if rep.ok else 1
    return counts


def module_record(m, budget: int, seed: int) -> dict:
    proj = is_projective(m, budget, seed)
    inj = is_injective(m, budget, seed)
    flat = is_flat(m, budget, seed)
    match = matching_candidates(m, budget, seed)
    return {
        "projective": proj.status,
        "lifting": lifting_oracle(m).status,
        "injective": inj.status,
        "injective_oracle": injective_oracle(m).status,
        "dual_injective": is_injective(dual(m), budget, seed).status,
        "flat": flat.status,
        "pd0": proj_dimension(m, 1, budget) == 0,
        "matches": match["matches"],
    }


def instance_report(spec: tuple, max_dim: int = 3, budget: int = DEFAULT_BUDGET, seed: int = 0) -> dict:
    inst = build_instance(*spec)
    ext = inst.ext
    r_corpus = r_modules(inst.ring_name, max_dim)
    ident = [functor_identities(inst, x) for x in r_corpus]
    adj_xs = [x for x in r_corpus if x.dim <= 2]
    rep = {
        "instance": inst.name,
        "p": inst.p,
        "dim_S": ext.dim,
        "r_modules": len(r_corpus),
        "functor_identities": {k: sum(1 for d in ident if not d[k]) for k in ("CT", "UZ", "KH")},
        "adjunctions": adjunction_checks(inst, adj_xs, adjunction_partners(inst), seed=seed),
        "enumerated": inst.p == 2,
    }
    if inst.p != 2:
        return rep
    mods = enumeration_corpus(inst, max_dim)
    recs = [module_record(m, budget, seed) for m in mods]
    matched = {c: all(c in r["matches"] for r in recs) for c in CANDIDATES}
    tests = list(enumerate_modules(ext.base, 1))
    desk = perfect_desk_check(ext, mods, r_corpus, tests, budget)
    rep.update(
        {
            "modules": len(mods),
            "projective": sum(r["projective"] == "yes" for r in recs),
            "injective": sum(r["injective"] == "yes" for r in recs),
            "flat": sum(r["flat"] == "yes" for r in recs),
            "inconclusive": sum("inconclusive" in (r["projective"], r["injective"], r["flat"]) for r in recs),
            "disagreements": {
                "projective_vs_lifting": sum(r["projective"] != r["lifting"] for r in recs),
                "injective_vs_dual_oracle": sum(r["injective"] != r["injective_oracle"] for r in recs),
                "projective_vs_dual_injective": sum(r["projective"] != r["dual_injective"] for r in recs),
                "flat_vs_projective": sum(r["flat"] != r["projective"] for r in recs),
                "pd0_vs_projective": sum(r["pd0"] != (r["projective"] == "yes") for r in recs),
            },
            "sequence_candidates": [c for c in CANDIDATES if matched[c]],
            "perfect": desk,
        }
    )
    return rep


def corpus_specs(rings=None, ns=(1, 2, 3)) -> list[tuple]:
    kwargs = {} if rings is None else {"rings": tuple(rings)}
    return [(i.ring_name, i.n, i.kind) for i in instances(ns=ns, **kwargs)]


def run_corpus(specs=None, max_dim: int = 3, budget: int = DEFAULT_BUDGET, seed: int = 0, jobs: int = 1) -> dict:
    """Reports in the order of ``specs`` regardless of ``jobs``."""
    specs = corpus_specs() if specs is None else list(specs)
    args = [(s, max_dim, budget, seed) for s in specs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_instance_star, args))
    else:
        reports = [_instance_star(a) for a in args]
    enumerated = [r for r in reports if r["enumerated"]]
    common = [c for c in CANDIDATES if all(c in r["sequence_candidates"] for r in enumerated)]
    total_dis = sum(sum(r["disagreements"].values()) for r in enumerated)
    failures = sum(sum(r["functor_identities"].values()) for r in reports)
    failures += sum(v["failed"] for r in reports for v in r["adjunctions"].values())
    perfect_fail = sum(r["perfect"]["status"] != "pass" for r in enumerated)
    summary = {
        "instances": len(reports),
        "enumerated_modules": sum(r["modules"] for r in enumerated),
        "disagreements": total_dis,
        "functor_failures": failures,
        "perfect_failures": perfect_fail,
        "sequence_candidate": common,
        "inconclusive": sum(r["inconclusive"] for r in enumerated),
    }
    ok = total_dis == 0 and failures == 0 and perfect_fail == 0 and len(common) == 1
    return {"seed": seed, "max_dim": max_dim, "instances": reports, "summary": summary, "status": "pass" if ok else "fail"}


def _instance_star(args):
    return instance_report(*args)

