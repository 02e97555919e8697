"""apkt: rule files in, collared complexes and K-theory reports out."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .abgroups import ClassificationBudget
from .apcomplex import dump_complex
from .collar import collar_rule, collared_matrix, dump_collared
from .jsonfmt import compact
from .ktheory import render_report
from .pipeline import BudgetExceeded, Clock, attach_report, build
from .substitution import RuleError, SubstitutionRule, parse_rule

EXIT_OK, EXIT_INVALID, EXIT_INCOMPLETE, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    rules: list
    fmt: str = "text"
    allow_nonprimitive: bool = False
    dump_complex: str | None = None
    budget: float | None = None
    verify: str = "auto"
    seed: int | None = None


def builtin_names() -> list[str]:
    base = resources.files("apktheory") / "rules"
    return sorted(p.name[:-5] for p in base.iterdir() if p.name.endswith(".json"))


def read_rule_text(ref: str) -> str:
    if ref.startswith("builtin:"):
        name = ref[len("builtin:"):]
        res = resources.files("apktheory") / "rules" / f"{name}.json"
        if not res.is_file():
            raise RuleError(f"unknown builtin {name!r} (have: {', '.join(builtin_names())})")
        return res.read_text(encoding="utf-8")
    try:
        return Path(ref).read_text(encoding="utf-8")
    except OSError as exc:
        raise RuleError(f"cannot read {ref}: {exc.strerror}") from None


def load_rule(ref: str, allow_nonprimitive: bool = False) -> SubstitutionRule:
    return parse_rule(read_rule_text(ref), allow_nonprimitive=allow_nonprimitive)


def report_for(rule: SubstitutionRule, cfg: RunConfig, clock: Clock):
    run = build(rule, cfg.seed, clock)
    if cfg.dump_complex:
        _write_dump(cfg.dump_complex, run)
    return attach_report(run, cfg.verify, clock)


def _write_dump(path: str, run) -> None:
    doc = dump_complex(run.cells, run.incidence, run.cochains, run.diagnostics)
    Path(path).write_text(compact(doc) + "\n")


# ---------------------------------------------------------------- commands

def cmd_validate(cfg: RunConfig, out, clock: Clock) -> int:
    rule = load_rule(cfg.rules[0], cfg.allow_nonprimitive)
    if cfg.fmt == "json":
        doc = {"rule": rule.name, "dimension": rule.dimension, "prototiles": len(rule.labels),
               "primitive": rule.primitive, "valid": True}
        out.write(compact(doc) + "\n")
    else:
        kind = "primitive" if rule.primitive else "non-primitive"
        out.write(f"{rule.name}: valid, d = {rule.dimension}, {len(rule.labels)} prototiles, {kind}\n")
    return EXIT_OK


def cmd_collar(cfg: RunConfig, out, clock: Clock) -> int:
    rule = load_rule(cfg.rules[0], cfg.allow_nonprimitive)
    cr = collar_rule(rule)
    clock.check("collaring")
    if cfg.fmt == "json":
        doc = dump_collared(cr)
        doc["matrix"] = collared_matrix(cr).tolist()
        out.write(compact(doc) + "\n")
        return EXIT_OK
    names = cr.names()
    out.write(f"{rule.name}: CP = {len(cr.tiles)}\n")
    for name, t, kids in zip(names, cr.tiles, cr.children):
        line = f"  {name}: children " + " ".join(names[j] for j, _ in kids)
        if rule.dimension == 2:
            line += f"  [collar of {len(t.collar)} tiles]"
        out.write(line + "\n")
    m = collared_matrix(cr)
    out.write("sigma (row = children of a tile):\n")
    for row in m.tolist():
        out.write("  " + " ".join(str(x) for x in row) + "\n")
    return EXIT_OK


def cmd_complex(cfg: RunConfig, out, clock: Clock) -> int:
    rule = load_rule(cfg.rules[0], cfg.allow_nonprimitive)
    run = build(rule, cfg.seed, clock)
    cs, diag = run.cochains, run.diagnostics
    doc = dump_complex(run.cells, run.incidence, cs, diag)
    if cfg.dump_complex:
        _write_dump(cfg.dump_complex, run)
    if cfg.fmt == "json":
        out.write(compact(doc) + "\n")
        return EXIT_OK
    out.write(f"{rule.name}: cells {cs.c0} / {cs.c1}" + (f" / {cs.c2}" if rule.dimension == 2 else "") + "\n")
    out.write(_diag_line(diag) + "\n")
    mats = [("delta0", cs.delta0), ("sigma0", cs.sigma0), ("sigma1", cs.sigma1)]
    if rule.dimension == 2:
        mats[1:1] = [("delta1", cs.delta1)]
        mats.append(("sigma2", cs.sigma2))
    for name, m in mats:
        out.write(f"{name} ({m.rows}x{m.cols}):\n")
        for row in m.tolist():
            out.write("  " + " ".join(f"{x:2d}" for x in row) + "\n")
    if rule.dimension == 2:
        out.write(f"hyperplane condition: {'holds' if cs.hyperplane_ok else 'fails'}\n")
    return EXIT_OK


def cmd_ktheory(cfg: RunConfig, out, clock: Clock) -> int:
    rule = load_rule(cfg.rules[0], cfg.allow_nonprimitive)
    rep = report_for(rule, cfg, clock)
    out.write(render_report(rep, cfg.fmt))
    if not rep.complete:
        print("classification incomplete; bound-form groups reported", file=sys.stderr)
        return EXIT_INCOMPLETE
    return EXIT_OK


TABLE_HEAD = ("rule", "d", "CP", "PI", "L(PI)", "FT", "L(FT)", "K0(u)", "K1(u)")


def table_row(ref: str, cfg: RunConfig, clock: Clock) -> dict:
    rule = load_rule(ref, cfg.allow_nonprimitive)
    rep = report_for(rule, cfg, clock)
    d = rep.diagnostics
    return {"rule": rule.name, "d": rule.dimension, "CP": d.cp, "PI": d.pi, "L(PI)": d.l_pi,
            "FT": d.ft, "L(FT)": d.l_ft, "K0(u)": str(rep.k0_u), "K1(u)": str(rep.k1_u),
            "complete": rep.complete}


def cmd_table(cfg: RunConfig, out, clock: Clock) -> int:
    rows = [table_row(r, cfg, clock) for r in cfg.rules]
    if cfg.fmt == "json":
        out.write(compact({"schema": "apkt-table/1", "rows": rows}) + "\n")
    else:
        cells = [list(TABLE_HEAD)] + [[str(r[k]) for k in TABLE_HEAD] for r in rows]
        widths = [max(len(c[i]) for c in cells) for i in range(len(TABLE_HEAD))]
        for c in cells:
            out.write("  ".join(x.ljust(w) for x, w in zip(c, widths)).rstrip() + "\n")
    return EXIT_OK if all(r["complete"] for r in rows) else EXIT_INCOMPLETE


COMMANDS = {"validate": cmd_validate, "collar": cmd_collar, "complex": cmd_complex,
            "ktheory": cmd_ktheory, "table": cmd_table}


def _diag_line(d) -> str:
    return f"CP {d.cp}  PI {d.pi}  L(PI) {d.l_pi}  FT {d.ft}  L(FT) {d.l_ft}"


def _positive(text: str) -> float:
    v = float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("budget must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="apkt", description="K-theory of substitution tilings from rule files.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--allow-nonprimitive", action="store_true")
    common.add_argument("--dump-complex", metavar="PATH", help="write the cell complex as JSON")
    common.add_argument("--budget", type=_positive, metavar="SECONDS", help="wall-clock limit")
    common.add_argument("--verify-splitting", choices=("on", "off", "auto"), default="auto")
    common.add_argument("--seed", type=int, help="randomize free orientation choices")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("validate", "collar", "complex", "ktheory"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("rule", help="rule file or builtin:NAME")
    sp = sub.add_parser("table", parents=[common])
    sp.add_argument("rule", nargs="+")
    sub.add_parser("builtins", help="list builtin rules")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "builtins":
        for name in builtin_names():
            print(f"builtin:{name}")
        return EXIT_OK
    rules = args.rule if isinstance(args.rule, list) else [args.rule]
    cfg = RunConfig(args.command, rules, args.format, args.allow_nonprimitive, args.dump_complex,
                    args.budget, args.verify_splitting, args.seed)
    clock = Clock(cfg.budget)
    try:
        code = COMMANDS[cfg.command](cfg, sys.stdout, clock)
    except RuleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (BudgetExceeded, ClassificationBudget) as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
