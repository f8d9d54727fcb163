"""``hodgetate`` command line: run named checks and emit JSON or Markdown reports.

Exit codes: 0 when nothing failed, 1 when a check failed, 2 on usage or
input errors (including malformed Gram and config files).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checks
from .quadspace import DEFAULT_HEIGHT_BOUND, load_gram


def _markdown(doc: dict) -> str:
    reports = doc["reports"] if "reports" in doc else [doc]
    lines = []
    if "preamble" in doc:
        s = doc["summary"]
        lines += ["# hodgetate report", "",
                  f"{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped.", "",
                  "Out of scope:", ""]
        lines += [f"- {item}" for item in doc["preamble"]["out_of_scope"]]
        lines.append("")
    lines += ["| check | params | verdict | elapsed_ms | notes |", "|---|---|---|---|---|"]
    for r in reports:
        params = ", ".join(f"{k}={v}" for k, v in sorted(r["params"].items()))
        w = r["witness"]
        note = ", ".join(w.get("failed", [])) or w.get("detail", "")
        lines.append(f"| {r['check']} | {params} | {r['verdict']} | {r['elapsed_ms']} | {note} |")
    return "\n".join(lines) + "\n"


def _dump(doc: dict, fmt: str) -> str:
    if fmt == "markdown":
        return _markdown(doc)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--format", choices=["json", "markdown"], default="json")
    common.add_argument("--no-timing", action="store_true",
                        help="report elapsed_ms as 0 so output is byte-identical across runs")

    space = argparse.ArgumentParser(add_help=False)
    space.add_argument("--dim", type=int, default=5)
    space.add_argument("--bound", type=int, default=DEFAULT_HEIGHT_BOUND)
    space.add_argument("--gram", help="Gram matrix file (JSON rows or whitespace text); overrides --dim")

    sampled = argparse.ArgumentParser(add_help=False)
    sampled.add_argument("--samples", type=int, default=20)
    sampled.add_argument("--seed", type=int, default=0)

    lie = argparse.ArgumentParser(add_help=False)
    lie.add_argument("--l", type=int, default=2)
    lie.add_argument("--type", choices=["B", "D"], default="B")

    p = argparse.ArgumentParser(prog="hodgetate", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("lemma-n", parents=[common, space], help="degeneration datum and N with N^3 = 0")
    sub.add_parser("h2-limit", parents=[common, space, sampled], aliases=["nilp-orbit"],
                   help="orbit test and Hodge-Tate limit on the primitive lattice")
    for name, default_k, helptext in (("odd-index", 1, "index 2k on S^(k-1)V ⊗ spinors"),
                                      ("even-index", 1, "index 2k+1 on S^k V")):
        sp = sub.add_parser(name, parents=[common, lie], help=helptext)
        sp.add_argument("--k", type=int, default=default_k)
    sp = sub.add_parser("spinor-lemmas", parents=[common, lie], help="spinor weights and the Mukai weight string")
    sp.add_argument("--n", type=int, default=3)
    sub.add_parser("ks-limit", parents=[common, space, sampled], help="Kuga-Satake limit on the Clifford algebra")
    sp = sub.add_parser("all", parents=[common], help="run every check over the parameter grid")
    sp.add_argument("--config", help="JSON file overriding grid keys: " + ", ".join(sorted(checks.DEFAULT_GRID)))
    sp.add_argument("--gram", help="Gram matrix file used for the dim-based checks")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--samples", type=int)
    return p


def _load_config(path: str) -> dict:
    try:
        cfg = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}:{exc.lineno}: {exc.msg}") from None
    if not isinstance(cfg, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return cfg


def run(argv: list[str] | None = None) -> tuple[int, str, str | None]:
    """Parse ``argv`` and run the command; returns ``(exit code, rendered report, --out path)``."""
    args = _parser().parse_args(argv)
    timing = not args.no_timing
    cmd = "h2-limit" if args.command == "nilp-orbit" else args.command
    if getattr(args, "gram", None):
        load_gram(args.gram)  # fail early with a diagnostic
    if cmd == "all":
        cfg = _load_config(args.config) if args.config else {}
        for key in ("gram", "seed", "samples"):
            if getattr(args, key) is not None:
                cfg[key] = getattr(args, key)
        doc = checks.full_report(cfg, timing)
        failed = doc["summary"]["fail"] > 0
    else:
        fn = checks.CHECKS[cmd]
        if cmd == "lemma-n":
            report = fn(args.dim, args.bound, args.gram, timing=timing)
        elif cmd in ("h2-limit", "ks-limit"):
            report = fn(args.dim, args.bound, args.samples, args.seed, args.gram, timing=timing)
        elif cmd == "spinor-lemmas":
            report = fn(args.l, args.type, args.n, timing=timing)
        else:
            report = fn(args.l, args.type, args.k, timing=timing)
        doc = report.to_dict()
        failed = report.verdict == checks.FAIL
    return (1 if failed else 0), _dump(doc, args.format), args.out


def main(argv: list[str] | None = None) -> int:
    try:
        code, text, out = run(argv)
    except (ValueError, OSError) as exc:
        print(f"hodgetate: error: {exc}", file=sys.stderr)
        return 2
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
