"""Command-line front end.

Every command prints one report (JSON or text) and exits with 0 when all
checks pass, 1 when some check fails or stays inconclusive, and 2 on bad
input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import io
from .algebra import DEFAULT_BUDGET, Module, dimension_json, enumerate_modules, regular_module
from .bimodule import canonical_system
from .corpus import enumerate_fmodules
from .corpus import ring as corpus_ring
from .extension import InvalidInput, build_extension
from .functors import C, K, T, Z, cofree_lift, free_lift
from .homtests import (
    DEFAULT_CAP,
    check_selfinj_theorem,
    classify,
    inj_dimension,
    perfect_desk_check,
    proj_dimension,
)
from .linalg import Subspace
from .smodule import (
    FModule,
    GModule,
    from_left_form,
    gmodule_morphism_space,
    morphism_space,
    saction_to_fmodule,
    to_left_form,
    validate_fmodule,
    validate_gmodule,
)
from .suite import corpus_specs, run_corpus

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
GENERATORS = ("TR", "ZR", "regular", "serial")


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0.0.0"


class UsageError(Exception):
    pass


# -- input ---------------------------------------------------------------------


def serial_document(n: int, p: int) -> dict:
    """``F_p x_n (F_p, ..., F_p)`` with modules ``TR``, ``ZR`` and ``regular``."""
    r = corpus_ring(f"F{p}")
    ext = build_extension(r, canonical_system(r, n, [None] * n))
    doc = io.extension_json(ext)
    add_generated(doc, ext, ("TR", "ZR", "regular"))
    return doc


def generated_module(ext, kind: str):
    r = regular_module(ext.base)
    if kind == "TR":
        return T(ext, r)
    if kind == "ZR":
        return Z(ext, r)
    return saction_to_fmodule(regular_module(ext.total), ext)


def add_generated(doc: dict, ext, kinds) -> None:
    names = {m.get("name") for m in doc.setdefault("modules", [])}
    for kind in kinds:
        if kind not in names:
            doc["modules"].append(io.module_json(kind, generated_module(ext, kind)))


def load_input(args) -> tuple[io.Document, str | None]:
    """The input document and the module selected by default (from ``--gen``)."""
    gen = args.gen
    if gen and gen[0] == "serial":
        if len(gen) != 3:
            raise UsageError("--gen serial needs n and p")
        try:
            n, p = int(gen[1]), int(gen[2])
        except ValueError as e:
            raise UsageError("--gen serial n p: n and p must be integers") from e
        if n < 1:
            raise UsageError("--gen serial: n must be positive")
        try:
            return io.document_from_data(serial_document(n, p)), "regular"
        except ValueError as e:
            raise io.InputError(f"--gen serial: {e}") from e
    if args.input:
        doc = io.load_document(args.input)
    elif gen:
        doc = io.document_from_data(serial_document(2, 2))
    else:
        raise UsageError("need --input FILE or --gen")
    if gen:
        if gen[0] not in GENERATORS or len(gen) != 1:
            raise UsageError(f"--gen must be one of TR, ZR, regular or 'serial n p', got {' '.join(gen)}")
        data = json.loads(json.dumps(doc.data))
        ext = io.parse_extension(data)
        add_generated(data, ext, (gen[0],))
        return io.Document(data, doc.digest), gen[0]
    return doc, None


def select_module(args, doc: io.Document, default: str | None, ext):
    name = args.module or default
    if name is None:
        raise UsageError("need --module NAME")
    k, entry = io.module_entry(doc.data, name)
    return name, io.parse_module(ext, entry, f"modules[{k}]")


def as_fmodule(m, name: str) -> FModule:
    if isinstance(m, FModule):
        return m
    if isinstance(m, GModule):
        return from_left_form(m, check=False)
    raise UsageError(f"module {name!r} is an R-module; this command needs an S-module")


# -- report --------------------------------------------------------------------


class Report:
    def __init__(self, command: str, args, digest: str | None):
        self.command = command
        self.args = args
        self.digest = digest
        self.checks: list[dict] = []
        self.results: dict = {}
        self.start = time.perf_counter()

    def check(self, name: str, status: str, **detail) -> str:
        self.checks.append({"name": name, "status": status, **detail})
        return status

    def status(self) -> str:
        states = {c["status"] for c in self.checks}
        if "fail" in states:
            return "fail"
        if "inconclusive" in states:
            return "inconclusive"
        return "pass"

    def exit_code(self) -> int:
        return EXIT_OK if self.status() == "pass" else EXIT_FAIL

    def to_json(self) -> dict:
        out = {
            "tool": "trivext",
            "version": tool_version(),
            "command": self.command,
            "input_digest": self.digest,
            "seed": self.args.seed,
            "checks": self.checks,
            "results": self.results,
            "status": self.status(),
        }
        if not self.args.no_timestamp:
            out["timing"] = {
                "seconds": round(time.perf_counter() - self.start, 6),
                "timestamp": datetime.now(timezone.utc).isoformat(),
            }
        return out

    def render(self) -> str:
        if self.args.format == "json":
            return io.dumps(self.to_json())
        lines = [f"trivext {tool_version()} {self.command}: {self.status()}"]
        if self.digest:
            lines.append(f"input {self.digest}")
        for c in self.checks:
            extra = {k: v for k, v in c.items() if k not in ("name", "status")}
            tail = f" {json.dumps(extra, sort_keys=True)}" if extra else ""
            lines.append(f"  [{c['status']}] {c['name']}{tail}")
        for key, value in self.results.items():
            lines.append(f"  {key}: {json.dumps(value, sort_keys=True)}")
        if not self.args.no_timestamp:
            lines.append(f"  time {time.perf_counter() - self.start:.3f}s")
        return "\n".join(lines) + "\n"


def write_out(args, data: dict, report: Report, key: str):
    if args.out:
        Path(args.out).write_text(io.dumps(data), encoding="utf-8")
        report.results[f"{key}_written_to"] = str(args.out)
    else:
        report.results[key] = data


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# -- commands ------------------------------------------------------------------


def extension_checks(doc: io.Document, report: Report):
    """Validate the ring, bimodules and pre-products; return the extension or ``None``."""
    ring = io.parse_ring(doc.data)
    msgs = ring.validate()
    report.check("ring", _status(not msgs), messages=msgs)
    ps = io.parse_phi_system(doc.data, ring)
    bim_ok = True
    for i in range(1, ps.n + 1):
        bm = ps.M(i).validate()
        bim_ok = bim_ok and not bm
        report.check(f"bimodule M_{i}", _status(not bm), messages=bm)
    if msgs or not bim_ok:
        report.check("phi", "inconclusive", messages=["skipped: ring or bimodules invalid"])
        return None
    try:
        ext = build_extension(ring, ps)
    except InvalidInput as e:
        report.check("phi", "fail", messages=e.report)
        return None
    report.check("phi", "pass", messages=[])
    return ext


def cmd_validate(args, doc, default):
    report = Report("validate", args, doc.digest)
    ext = extension_checks(doc, report)
    if ext is None:
        return report
    for k, entry in enumerate(doc.data.get("modules", [])):
        m = io.parse_module(ext, entry, f"modules[{k}]")
        if isinstance(m, Module):
            msgs = m.validate()
        elif isinstance(m, FModule):
            msgs = validate_fmodule(m)
        else:
            msgs = validate_gmodule(m)
        report.check(f"module {entry.get('name')}", _status(not msgs), messages=msgs)
    return report


def cmd_build(args, doc, default):
    report = Report("build", args, doc.digest)
    ext = extension_checks(doc, report)
    if ext is None:
        return report
    out = io.algebra_document(ext.total, {"grading": {"offsets": list(ext.offsets), "degrees": ext.n}})
    report.results["dim_S"] = ext.dim
    report.results["grading_offsets"] = list(ext.offsets)
    write_out(args, out, report, "algebra")
    return report


def _valid_module(report: Report, name: str, m) -> bool:
    if isinstance(m, Module):
        msgs = m.validate()
    elif isinstance(m, FModule):
        msgs = validate_fmodule(m)
    else:
        msgs = validate_gmodule(m)
    report.check(f"module {name}", _status(not msgs), messages=msgs)
    return not msgs


def _prepare(command, args, doc, default):
    report = Report(command, args, doc.digest)
    ext = extension_checks(doc, report)
    if ext is None:
        return report, None, None, None
    name, m = select_module(args, doc, default, ext)
    if not _valid_module(report, name, m):
        return report, ext, name, None
    return report, ext, name, m


def cmd_classify(args, doc, default):
    report, ext, name, m = _prepare("classify", args, doc, default)
    if m is None:
        return report
    fm = as_fmodule(m, name)
    cls = classify(fm, args.budget, args.cap, args.seed, args.oracle)
    report.results["module"] = name
    report.results["classification"] = cls.to_json()
    for label, v in (("projective", cls.projective), ("injective", cls.injective), ("flat", cls.flat)):
        report.check(f"{label} decided", "inconclusive" if v.status == "inconclusive" else "pass")
    if args.oracle:
        report.check("projective agrees with lifting oracle", _status(cls.oracle["projective_agrees"]))
        report.check("injective agrees with dual oracle", _status(cls.oracle["injective_agrees"]))
    return report


def _block_json(lift) -> list:
    out = []
    for i in range(1, lift.module.ext.n + 1):
        fi = lift.module.fmap(i)
        d = lift.module.dim
        for t in range(lift.module.ext.M(i).dim):
            a = fi[:, t * d : (t + 1) * d]
            blocks = []
            for r in range(len(lift.offsets) - 1):
                for c in range(len(lift.offsets) - 1):
                    sub = a[lift.offsets[r] : lift.offsets[r + 1], lift.offsets[c] : lift.offsets[c + 1]]
                    if np.any(sub):
                        blocks.append({"row_block": r, "col_block": c, "matrix": sub.tolist()})
            out.append({"i": i, "basis_element": t, "nonzero_blocks": blocks})
    return out


def cmd_functor(args, doc, default):
    report, ext, name, m = _prepare("functor", args, doc, default)
    if m is None:
        return report
    tag = args.tag
    needs = {"T": "base", "Z": "base", "H": "base", "C": "right", "K": "left", "U": "any"}[tag]
    kind = "base" if isinstance(m, Module) else ("right" if isinstance(m, FModule) else "left")
    if needs != "any" and needs != kind:
        hint = ""
        if {needs, kind} == {"right", "left"}:
            hint = f"; convert it first with `convert --module {name}`"
        raise UsageError(f"{tag} needs a {needs}-form module but {name!r} is {kind}-form{hint}")
    if tag == "U" and kind == "base":
        raise UsageError("U needs an S-module")
    out_name = f"{tag}({name})"
    if tag == "T":
        lift = free_lift(ext, m)
        image = lift.module
        report.results["block_offsets"] = list(lift.offsets)
        report.results["kappa"] = _block_json(lift)
        cok = C(image)
        canon = cok.proj[:, : m.dim]
        report.check("C(T(X)) = X via the canonical map", _status(ext.field.is_invertible(canon)))
    elif tag == "H":
        lift = cofree_lift(ext, m)
        image = lift.module
        report.results["block_offsets"] = list(lift.offsets)
        report.results["lambda"] = [
            {"degree": i, "to": to, "from": frm, "entry": e} for (i, to, frm), e in sorted(lift.lambda_table.items())
        ]
        ker = K(image)
        block = np.eye(image.dim, dtype=np.int64)[:, lift.block_of(0)]
        same = ker.subspace == Subspace.column_span(ext.field, block) if m.dim else ker.subspace.dim == 0
        report.check("K(H(X)) = X", _status(same))
    elif tag == "Z":
        image = Z(ext, m)
        report.check("U(Z(X)) = X", _status(io.module_json(name, image.X) == io.module_json(name, m)))
    elif tag == "C":
        cok = C(m)
        image = cok.module
        report.results["surjection"] = cok.proj.tolist()
    elif tag == "U":
        image = m.X
    else:
        ker = K(m)
        image = ker.module
        report.results["inclusion"] = ker.inclusion.tolist()
    report.results["image_dim"] = image.dim
    out = io.extension_json(ext)
    out["modules"] = [io.module_json(out_name, image)]
    write_out(args, out, report, "image")
    return report


def cmd_convert(args, doc, default):
    report, ext, name, m = _prepare("convert", args, doc, default)
    if m is None:
        return report
    if isinstance(m, Module):
        raise UsageError(f"module {name!r} is an R-module; nothing to convert")
    direction = args.direction or ("right-to-left" if isinstance(m, FModule) else "left-to-right")
    if (direction == "right-to-left") != isinstance(m, FModule):
        raise UsageError(f"module {name!r} is not in the form that {direction} expects")
    if isinstance(m, FModule):
        conv = to_left_form(m)
        back = from_left_form(conv)
        same = all(np.array_equal(a, b) for a, b in zip(back.f, m.f))
        before, after = len(morphism_space(m, m)), len(gmodule_morphism_space(conv, conv))
    else:
        conv = from_left_form(m)
        back = to_left_form(conv)
        same = all(np.array_equal(a, b) for a, b in zip(back.g, m.g))
        before, after = len(gmodule_morphism_space(m, m)), len(morphism_space(conv, conv))
    report.check("round trip is exact", _status(same))
    report.check("endomorphism dimensions agree", _status(before == after), before=before, after=after)
    out = io.extension_json(ext)
    out["modules"] = [io.module_json(name, conv)]
    write_out(args, out, report, "converted")
    return report


def _dimension_cmd(command, fn):
    def run(args, doc, default):
        report, ext, name, m = _prepare(command, args, doc, default)
        if m is None:
            return report
        d = fn(as_fmodule(m, name), args.cap, args.budget)
        report.results["module"] = name
        report.results["cap"] = args.cap
        report.results[command] = dimension_json(d)
        report.check(f"{command} computed", "pass")
        return report

    return run


def cmd_selfinj(args, doc, default):
    report = Report("selfinj", args, doc.digest)
    ext = extension_checks(doc, report)
    if ext is None:
        return report
    res = check_selfinj_theorem(ext, args.cap, args.budget)
    report.results["selfinj"] = res
    hyp = res["hypothesis"]["status"]
    report.check("hypothesis", "pass" if hyp == "pass" else ("inconclusive" if hyp == "inconclusive" else "not-satisfied"))
    concl = res["conclusion"]["status"]
    report.check("conclusion", {"violated": "fail", "undecided-within-cap": "inconclusive"}.get(concl, "pass"), outcome=concl)
    return report


def cmd_perfect(args, doc, default):
    report = Report("perfect", args, doc.digest)
    ext = extension_checks(doc, report)
    if ext is None:
        return report
    r_corpus = [x for d in range(args.max_dim + 1) for x in enumerate_modules(ext.base, d)]
    corpus = [m for x in r_corpus for m in enumerate_fmodules(ext, x)]
    for k, entry in enumerate(doc.data.get("modules", [])):
        m = io.parse_module(ext, entry, f"modules[{k}]")
        if not isinstance(m, Module):
            corpus.append(as_fmodule(m, entry.get("name")))
    tests = list(enumerate_modules(ext.base, 1))
    res = perfect_desk_check(ext, corpus, r_corpus, tests, args.budget)
    report.results["perfect"] = res
    report.check("flat implies pd 0", res["status"])
    return report


def cmd_corpus(args, doc, default):
    report = Report("corpus", args, None)
    specs = corpus_specs()
    res = run_corpus(specs, args.max_dim, args.budget, args.seed, args.jobs)
    report.results["corpus"] = res
    s = res["summary"]
    report.check("characterizations agree with oracles", _status(s["disagreements"] == 0), count=s["disagreements"])
    report.check("functor identities and adjunctions", _status(s["functor_failures"] == 0), count=s["functor_failures"])
    report.check("flat implies pd 0", _status(s["perfect_failures"] == 0))
    report.check("one sequence candidate", _status(len(s["sequence_candidate"]) == 1), candidate=s["sequence_candidate"])
    report.check("no inconclusive verdicts", "pass" if s["inconclusive"] == 0 else "inconclusive")
    return report


COMMANDS = {
    "validate": cmd_validate,
    "build": cmd_build,
    "classify": cmd_classify,
    "functor": cmd_functor,
    "convert": cmd_convert,
    "pd": _dimension_cmd("pd", proj_dimension),
    "id": _dimension_cmd("id", inj_dimension),
    "selfinj": cmd_selfinj,
    "perfect": cmd_perfect,
    "corpus": cmd_corpus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input JSON file")
    common.add_argument("--gen", nargs="+", metavar="KIND", help="built-in input: TR | ZR | regular | serial N P")
    common.add_argument("--module", help="module name inside the input")
    common.add_argument("--out", help="write the produced object here")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="isomorphism search budget")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="homological dimension cap")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--oracle", action="store_true", help="cross-check against brute-force oracles")
    common.add_argument("--no-timestamp", action="store_true", help="omit timing for byte-stable reports")
    parser = argparse.ArgumentParser(prog="trivext", description="n-trivial extension rings and their modules")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "functor":
            p.add_argument("--tag", required=True, choices=("T", "C", "U", "Z", "H", "K"))
        if name == "convert":
            p.add_argument("--direction", choices=("right-to-left", "left-to-right"))
        if name in ("perfect", "corpus"):
            p.add_argument("--max-dim", type=int, default=3 if name == "corpus" else 2)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        if args.command == "corpus":
            doc, default = io.Document({}, None), None
        else:
            doc, default = load_input(args)
        report = COMMANDS[args.command](args, doc, default)
    except (UsageError, io.InputError) as e:
        print(f"trivext: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError, TypeError, IndexError) as e:
        print(f"trivext: error: malformed input: {e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(report.render())
    return report.exit_code()
