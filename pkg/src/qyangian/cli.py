"""Command-line front end: ``verify``, ``dump`` and ``report``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .findings import FindingsReport, check
from .scalars import fmt_q

MAX_LEVEL_CAP = 12
DUMP_KINDS = ("structure-constants", "dual-basis", "tower", "presentation", "rmatrix")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int = 2
    suites: List[str] = field(default_factory=lambda: ["all"])
    max_level: int = 8
    max_degree: int = 3
    output_path: Optional[str] = None
    format: str = "json"
    controls: bool = False
    timing: bool = False

    def validate(self) -> "RunConfig":
        from .suites import SUITE_ORDER

        if not isinstance(self.n, int) or self.n < 2:
            raise ConfigError(f"n must be an integer >= 2, got {self.n!r}")
        if not self.suites:
            raise ConfigError("at least one suite is required")
        unknown = sorted(set(self.suites) - set(SUITE_ORDER) - {"all"})
        if unknown:
            raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
        if not 0 <= self.max_level <= MAX_LEVEL_CAP:
            raise ConfigError(f"max-level must lie in 0..{MAX_LEVEL_CAP}, got {self.max_level}")
        if self.max_degree < 0:
            raise ConfigError(f"max-degree must be >= 0, got {self.max_degree}")
        if self.format not in ("json", "markdown"):
            raise ConfigError(f"unknown format {self.format!r}")
        return self

    def ordered_suites(self) -> List[str]:
        from .suites import SUITE_ORDER

        chosen = set(SUITE_ORDER) if "all" in self.suites else set(self.suites)
        return [s for s in SUITE_ORDER if s in chosen]


def run_verify(cfg: RunConfig) -> FindingsReport:
    from .currents import TwistViolation
    from .rmatrixlab import DegreeMismatch, PoleNotCancelled
    from .suites import run_suite

    cfg.validate()
    rep = FindingsReport(meta={
        "n": cfg.n,
        "suites": cfg.ordered_suites(),
        "max_level": cfg.max_level,
        "max_degree": cfg.max_degree,
        "controls": cfg.controls,
    })
    for name in cfg.ordered_suites():
        start = time.perf_counter()
        try:
            part = run_suite(name, cfg.n, max_level=cfg.max_level, max_degree=cfg.max_degree,
                             controls=cfg.controls)
        except (PoleNotCancelled, TwistViolation, DegreeMismatch) as exc:
            part = FindingsReport()
            part.add(check(name, f"{name}.aborted", "suite ran to completion", False,
                           {"error": type(exc).__name__, "message": str(exc)}))
        # timings are only serialized on request, so reports stay byte-identical by default
        elapsed = time.perf_counter() - start
        for f in part:
            f.seconds = elapsed
        rep.extend(part)
    return rep


def exit_code(rep: FindingsReport) -> int:
    # controls that fail are stored as info; a control that unexpectedly passes is a fail
    return EXIT_OK if rep.ok else EXIT_FAIL


# dumps -------------------------------------------------------------------------------------

def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def dump_structure_constants(n: int) -> str:
    from .formdual import matrix_coordinates
    from .supermodel import named_basis, supercommutator

    basis = named_basis(n)
    rows = []
    for (a, ma), (b, mb) in ((x, y) for x in basis for y in basis):
        coords = matrix_coordinates(supercommutator(ma, mb))
        order = {nm: i for i, (nm, _) in enumerate(basis)}
        result = [[nm, fmt_q(c)] for nm, c in sorted(coords.items(), key=lambda kv: order[kv[0]])]
        rows.append({"left": a, "right": b, "result": result})
    return _dumps({"n": n, "basis": [nm for nm, _ in basis], "brackets": rows})


def dump_dual_basis(n: int) -> str:
    from .formdual import dual_basis

    pair = dual_basis(n)
    rows = [
        {"basis": nm, "dual": dn, "basis_entries": e.to_sparse_json(), "dual_entries": d.to_sparse_json()}
        for nm, dn, e, d in zip(pair.names, pair.dual_names, pair.e, pair.e_dual)
    ]
    return _dumps({"n": n, "pairs": rows})


def dump_tower(n: int, max_level: int) -> str:
    from .currents import build_tower
    from .supermodel import ModelConfig

    return _dumps(build_tower(ModelConfig(n), max_level).to_json())


def dump_presentation(n: int) -> str:
    from .hopfaudit import presentation_json

    return presentation_json(n)


def dump_rmatrix(n: int) -> str:
    from .rmatrixlab import twisted_r

    return _dumps({"n": n, "r_sigma": twisted_r(n).to_json()})


def run_dump(kind: str, cfg: RunConfig) -> str:
    cfg.validate()
    if kind == "structure-constants":
        return dump_structure_constants(cfg.n)
    if kind == "dual-basis":
        return dump_dual_basis(cfg.n)
    if kind == "tower":
        return dump_tower(cfg.n, cfg.max_level)
    if kind == "presentation":
        return dump_presentation(cfg.n)
    if kind == "rmatrix":
        return dump_rmatrix(cfg.n)
    raise ConfigError(f"unknown dump kind {kind!r}")


# argument handling -------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=None, help="rank parameter: the model is A(n-1,n-1), n >= 2")
    p.add_argument("--max-level", type=int, default=None, help=f"highest current level (<= {MAX_LEVEL_CAP})")
    p.add_argument("--max-degree", type=int, default=None, help="highest current degree for the cocycle suite")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--config", default=None, help="JSON file with defaults; flags win")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qyangian", description="Exact verification harness for the twisted queer Yangian")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    v = sub.add_parser("verify", help="run verification suites and emit a report")
    _common(v)
    v.add_argument("--suite", action="append", default=None,
                   help="model, pairing, tensor, rmatrix, cocycle, currents, hopf or all (repeatable)")
    v.add_argument("--format", choices=("json", "markdown"), default=None)
    v.add_argument("--controls", action="store_true", default=None, help="add negative controls")
    v.add_argument("--timing", action="store_true", help="include per-suite timings (breaks byte-identity)")
    d = sub.add_parser("dump", help="export a table as canonical JSON")
    d.add_argument("kind", choices=DUMP_KINDS)
    _common(d)
    r = sub.add_parser("report", help="render a JSON report as Markdown")
    r.add_argument("input", help="JSON report produced by verify")
    r.add_argument("--out", default=None)
    return p


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    allowed = {"n", "suites", "max_level", "max_degree", "format", "controls", "out"}
    extra = sorted(set(data) - allowed)
    if extra:
        raise ConfigError(f"unknown config key(s): {', '.join(extra)}")
    return data


def config_from_args(args: argparse.Namespace) -> RunConfig:
    base = _load_config(getattr(args, "config", None))
    cfg = RunConfig()

    def pick(flag, key, default):
        val = getattr(args, flag, None)
        return val if val is not None else base.get(key, default)

    cfg.n = pick("n", "n", cfg.n)
    cfg.suites = pick("suite", "suites", cfg.suites)
    cfg.max_level = pick("max_level", "max_level", cfg.max_level)
    cfg.max_degree = pick("max_degree", "max_degree", cfg.max_degree)
    cfg.format = pick("format", "format", cfg.format)
    cfg.controls = bool(pick("controls", "controls", cfg.controls))
    cfg.output_path = pick("out", "out", None)
    cfg.timing = bool(getattr(args, "timing", False))
    return cfg.validate()


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise ConfigError("a command is required: verify, dump or report")
        if args.command == "report":
            try:
                with open(args.input, encoding="utf-8") as fh:
                    rep = FindingsReport.from_json(fh.read())
            except (OSError, ValueError, KeyError) as exc:
                raise ConfigError(f"cannot read report {args.input}: {exc}") from exc
            _emit(rep.to_markdown(), args.out)
            return EXIT_OK
        cfg = config_from_args(args)
        if args.command == "dump":
            _emit(run_dump(args.kind, cfg), cfg.output_path)
            return EXIT_OK
        rep = run_verify(cfg)
        text = rep.to_markdown() if cfg.format == "markdown" else rep.to_json(with_timing=cfg.timing)
        _emit(text, cfg.output_path)
        return exit_code(rep)
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
