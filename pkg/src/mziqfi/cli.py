"""Command-line entry point: ``mziqfi {qfi,verify,scan}``.

Exit codes: 0 ok, 2 config, 3 no information, 4 verification failure,
5 truncation too small, 6 I/O.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .closed_form import qfi_closed_form
from .fock import Truncation, TruncationError
from .optics import InputSpec, auto_truncation, beam_splitter, mzi_output, prepare_input
from .qfi import ModelKind, NoInformationError, all_models, crb, qfi_finite_difference_path, qfi_generator_path
from .scan import COLUMNS, ScanGrid, refine_max, run_scan

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_INFO = 3
EXIT_VERIFY = 4
EXIT_TRUNCATION = 5
EXIT_IO = 6

VERIFY_TOL = 1e-5
ORACLE_MAX_ALPHA = 1.5
ORACLE_MAX_R = 0.8

CONFIG_KEYS = ("alpha1", "alpha2", "r", "model", "truncation", "repetitions", "output_format")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    alpha1: tuple[float, float] = (0.0, 0.0)
    alpha2: tuple[float, float] = (0.0, 0.0)
    r: float = 0.0
    model: ModelKind | None = None
    truncation: int | None = None
    repetitions: int = 1
    output_format: str | None = None  # None: json for qfi/verify, csv for scan

    def fmt_for(self, default: str) -> str:
        return self.output_format or default

    def input_spec(self) -> InputSpec:
        trunc = Truncation(self.truncation, self.truncation) if self.truncation else None
        return InputSpec(complex(*self.alpha1), self.r, complex(*self.alpha2), trunc)

    def echo(self) -> dict:
        return {
            "alpha1": list(self.alpha1),
            "alpha2": list(self.alpha2),
            "r": self.r,
            "model": self.model.value if self.model else None,
            "truncation": self.truncation,
            "repetitions": self.repetitions,
            "output_format": self.output_format,
        }


def _pair(key: str, value) -> tuple[float, float]:
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise ConfigError(f"{key}: expected [re, im]")
    re, im = (_real(key, v) for v in value)
    return (re, im)


def _real(key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{key}: must be finite")
    return float(value)


def _positive_int(key: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{key}: expected a positive integer, got {value!r}")
    return value


def parse_config(raw: dict) -> RunConfig:
    """Validate a config mapping; unknown keys are rejected."""
    unknown = sorted(set(raw) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown config key")
    kw = {}
    if "alpha1" in raw:
        kw["alpha1"] = _pair("alpha1", raw["alpha1"])
    if "alpha2" in raw:
        kw["alpha2"] = _pair("alpha2", raw["alpha2"])
    if "r" in raw:
        kw["r"] = _real("r", raw["r"])
        if kw["r"] < 0:
            raise ConfigError("r: squeeze parameter must be >= 0")
    if raw.get("model") is not None:
        try:
            kw["model"] = ModelKind.parse(str(raw["model"]))
        except ValueError:
            raise ConfigError(f"model: expected one of a, b, c, d, got {raw['model']!r}") from None
    if raw.get("truncation") is not None:
        kw["truncation"] = _positive_int("truncation", raw["truncation"])
        if kw["truncation"] < 2:
            raise ConfigError("truncation: need at least 2 levels per mode")
    if "repetitions" in raw:
        kw["repetitions"] = _positive_int("repetitions", raw["repetitions"])
    if "output_format" in raw:
        if raw["output_format"] not in ("csv", "json"):
            raise ConfigError(f"output_format: expected csv or json, got {raw['output_format']!r}")
        kw["output_format"] = raw["output_format"]
    return RunConfig(**kw)


def load_config(args: argparse.Namespace) -> RunConfig:
    raw: dict = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})") from None
        if not isinstance(raw, dict):
            raise ConfigError("config: top level must be an object")
    for key, re_flag, im_flag in (("alpha1", "alpha1_re", "alpha1_im"), ("alpha2", "alpha2_re", "alpha2_im")):
        re, im = getattr(args, re_flag), getattr(args, im_flag)
        if re is not None or im is not None:
            old = raw.get(key, [0.0, 0.0])
            if not (isinstance(old, list) and len(old) == 2):
                old = [0.0, 0.0]
            raw[key] = [re if re is not None else old[0], im if im is not None else old[1]]
    for key, flag in (("r", "r"), ("model", "model"), ("truncation", "trunc"), ("repetitions", "nu"), ("output_format", "format")):
        if getattr(args, flag) is not None:
            raw[key] = getattr(args, flag)
    return parse_config(raw)


# Output. Every float is written with 17 significant digits.


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def to_json(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _qfi_dict(f) -> dict:
    return {"f11": f.f11, "f12": f.f12, "f22": f.f22}


def qfi_report(cfg: RunConfig) -> tuple[dict, bool]:
    """Report dict and whether the requested model (if any) has zero information."""
    f = qfi_closed_form(cfg.input_spec())
    models = all_models(f)
    bounds = {}
    for m, v in models.items():
        try:
            bounds[m.value] = crb(v, cfg.repetitions).variance_lower_bound
        except NoInformationError:
            bounds[m.value] = None
    no_info = cfg.model is not None and bounds[cfg.model.value] is None
    report = {
        "config": cfg.echo(),
        "qfi": _qfi_dict(f),
        "models": {m.value: v for m, v in models.items()},
        "bounds": bounds,
    }
    return report, no_info


def _flat_csv(report: dict) -> str:
    lines = ["quantity,value"]
    for section in ("qfi", "models", "bounds"):
        for k, v in report[section].items():
            val = "" if v is None else fmt(v)
            lines.append(f"{section}.{k},{val}")
    return "\n".join(lines) + "\n"


def cmd_qfi(cfg: RunConfig, out: str | None = None) -> int:
    report, no_info = qfi_report(cfg)
    text = to_json(report) + "\n" if cfg.fmt_for("json") == "json" else _flat_csv(report)
    _emit(text, out)
    if no_info:
        print(f"model {cfg.model.value}: no information about the relative phase, no bound", file=sys.stderr)
        return EXIT_NO_INFO
    return EXIT_OK


def verify_report(cfg: RunConfig) -> dict:
    """Closed form vs generator covariances vs finite differences."""
    spec = cfg.input_spec()
    if spec.trunc is None:
        trunc, trace = auto_truncation(spec)
        spec = InputSpec(spec.alpha1, spec.r, spec.alpha2, trunc)
    else:
        trace = []
    psi = prepare_input(spec)
    closed = qfi_closed_form(spec)
    gen = qfi_generator_path(psi, beam_splitter(psi.trunc))
    fd = qfi_finite_difference_path(psi, lambda pair: mzi_output(psi, pair))
    disc = max(closed.max_abs_diff(gen), closed.max_abs_diff(fd), gen.max_abs_diff(fd))
    return {
        "config": cfg.echo(),
        "truncation": [psi.trunc.d1, psi.trunc.d2],
        "auto_sizing": [list(t) for t in trace],
        "closed_form": _qfi_dict(closed),
        "generator": _qfi_dict(gen),
        "finite_difference": _qfi_dict(fd),
        "max_discrepancy": disc,
        "tolerance": VERIFY_TOL,
        "ok": disc <= VERIFY_TOL,
    }


def cmd_verify(cfg: RunConfig, out: str | None = None) -> int:
    if max(abs(complex(*cfg.alpha1)), abs(complex(*cfg.alpha2))) > ORACLE_MAX_ALPHA or cfg.r > ORACLE_MAX_R:
        raise ConfigError(f"alpha1/alpha2/r: outside the oracle range |alpha| <= {ORACLE_MAX_ALPHA}, r <= {ORACLE_MAX_R}")
    try:
        report = verify_report(cfg)
    except TruncationError as exc:
        print(f"truncation too small: {exc}", file=sys.stderr)
        for d1, d2, leaked in exc.trace:
            print(f"  tried {d1}x{d2}: leaked {fmt(leaked)}", file=sys.stderr)
        return EXIT_TRUNCATION
    if cfg.fmt_for("json") == "json":
        text = to_json(report) + "\n"
    else:
        lines = ["path,f11,f12,f22"]
        for path in ("closed_form", "generator", "finite_difference"):
            q = report[path]
            lines.append(f"{path},{fmt(q['f11'])},{fmt(q['f12'])},{fmt(q['f22'])}")
        lines.append(f"max_discrepancy,{fmt(report['max_discrepancy'])},,")
        text = "\n".join(lines) + "\n"
    _emit(text, out)
    return EXIT_OK if report["ok"] else EXIT_VERIFY


def scan_csv(result) -> str:
    lines = [",".join(COLUMNS)]
    lines.extend(",".join(fmt(x) for x in row) for row in result.rows)
    return "\n".join(lines) + "\n"


def scan_json(cfg: RunConfig, result) -> str:
    g = result.grid
    doc = {
        "config": cfg.echo(),
        "grid": {"n1": g.n1, "n2": g.n2, "r": g.r, "theta1_steps": g.theta1_steps, "theta2_steps": g.theta2_steps},
        "columns": list(COLUMNS),
        "rows": [[float(x) for x in row] for row in result.rows],
        "argmax": {m.value: {"theta1": t1, "theta2": t2, "value": v} for m, (t1, t2, v) in result.argmax_per_model.items()},
    }
    return to_json(doc) + "\n"


def cmd_scan(cfg: RunConfig, steps: int, out: str) -> int:
    n1 = abs(complex(*cfg.alpha1)) ** 2
    n2 = abs(complex(*cfg.alpha2)) ** 2
    try:
        grid = ScanGrid(n1, n2, cfg.r, steps, steps, cfg.model or ModelKind.A_NUISANCE)
    except ValueError as exc:
        raise ConfigError(f"grid-steps: {exc}") from None
    result = run_scan(grid)
    text = scan_csv(result) if cfg.fmt_for("csv") == "csv" else scan_json(cfg, result)
    try:
        Path(out).write_text(text)
    except OSError as exc:
        print(f"cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"scan n1={fmt(n1)} n2={fmt(n2)} r={fmt(cfg.r)} grid={steps}x{steps} -> {out}")
    for m, (t1, t2, v) in result.argmax_per_model.items():
        ref = refine_max(grid, (t1, t2), m)
        flag = "" if ref.converged else " (not converged)"
        print(
            f"model {m.value}: grid max {fmt(v)} at theta1={fmt(t1)} theta2={fmt(t2)}; "
            f"refined {fmt(ref.value)} at theta1={fmt(ref.theta1)} theta2={fmt(ref.theta2)}{flag}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument("--alpha1-re", type=float)
    common.add_argument("--alpha1-im", type=float)
    common.add_argument("--alpha2-re", type=float)
    common.add_argument("--alpha2-im", type=float)
    common.add_argument("--r", type=float, help="squeeze parameter, >= 0")
    common.add_argument("--model", choices=["a", "b", "c", "d"])
    common.add_argument("--trunc", type=int, help="Fock levels per mode (disables auto-sizing)")
    common.add_argument("--nu", type=int, help="number of repetitions for the Cramer-Rao bound")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--out", help="output file (default: stdout; required for scan)")

    parser = argparse.ArgumentParser(prog="mziqfi", description="QFI and Cramer-Rao bounds for a two-mode MZI.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("qfi", parents=[common], help="closed-form QFI matrix, model QFIs and bounds")
    sub.add_parser("verify", parents=[common], help="closed form vs truncated-Fock oracles")
    scan = sub.add_parser("scan", parents=[common], help="scan over arg(alpha1), arg(alpha2)")
    scan.add_argument("--grid-steps", type=int, default=64)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        if args.command == "qfi":
            return cmd_qfi(cfg, args.out)
        if args.command == "verify":
            return cmd_verify(cfg, args.out)
        if args.out is None:
            raise ConfigError("out: scan needs an output path")
        return cmd_scan(cfg, args.grid_steps, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
