"""Command-line front end.

    ohc-ura analyze    --bits 12 --dl 2 --di 1 --ebn0-db 0 --pfa 0
    ohc-ura simulate   --bits 12 --dl 50 --di 10 --target-pupe 0.05 --rounds 10000
    ohc-ura solve      --bits 12 --dl 1 --di 0 --target-pupe 0.05
    ohc-ura sweep      --axis dl --values 25,50,100 --di 10 --pmd 0.02 --pfa 0.02 --target-pupe 0.05
    ohc-ura transition --di 10 --pmd 0.01 --pfa 0.01 --target-pupe 0.05

Every command emits rows with the fixed column set ``COLUMNS`` as CSV (default)
or JSON lines. A JSON config file (``--config``) may set any option; flags
override it. Exit codes: 0 success (an infeasible solve included), 2 invalid
configuration, 1 internal error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

from . import analytics, simkit
from .receiver import RffiModel

COMMANDS = ("analyze", "simulate", "solve", "sweep", "transition")
IMPAIRMENT = {"ideal": "ideal", "pa": "pa_nonlinear"}

CONFIG_COLUMNS = ["command", "bits", "n", "dl", "di", "dtot", "ebn0_db", "pmd", "pfa",
                  "impairment", "rounds", "seed", "target_pupe"]
RESULT_COLUMNS = ["p_sym_err", "p_a", "p_b", "p_c", "p_total", "pupe_analytical", "spoof_analytical",
                  "pupe_hat", "stderr_pupe", "spoof_hat", "stderr_spoof", "min_ebn0_db", "pn", "transition_dl"]
COLUMNS = CONFIG_COLUMNS + RESULT_COLUMNS

INFEASIBLE = "infeasible"


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"invalid value for {field_name!r}: {message}")
        self.field = field_name


@dataclass
class ExperimentSpec:
    command: str = "analyze"
    bits: int = 12
    dl: int = 50
    di: int = 10
    dtot: int | None = None
    ebn0_db: float | None = None
    pmd: float = 0.0
    pfa: float = 0.0
    rounds: int = 10_000
    seed: int = 0
    impairment: str = "ideal"
    dense: bool = False
    target_pupe: float | None = None
    search_lo_db: float = -20.0
    search_hi_db: float = 40.0
    grid_step_db: float = 0.5
    tol_db: float = 0.01
    axis: str | None = None
    values: list[float] = field(default_factory=list)
    dl_max: int = 256
    workers: int = 1
    output: str | None = None
    format: str = "csv"

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentSpec":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(unknown[0], "unknown option")
        spec = cls(**data)
        spec.values = list(spec.values)
        return spec

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        return cls.from_mapping(json.loads(text))

    def validate(self) -> "ExperimentSpec":
        def need(ok, name, msg):
            if not ok:
                raise ConfigError(name, msg)

        need(self.command in COMMANDS, "command", f"must be one of {COMMANDS}")
        need(isinstance(self.bits, int) and 1 <= self.bits <= 24, "bits", "must be an integer in [1, 24]")
        need(isinstance(self.dl, int) and self.dl >= 0, "dl", "must be a non-negative integer")
        need(isinstance(self.di, int) and self.di >= 0, "di", "must be a non-negative integer")
        need(self.dtot is None or self.dtot >= self.dl, "dtot", "must be at least dl")
        need(self.ebn0_db is None or not math.isnan(self.ebn0_db), "ebn0_db", "must be a number")
        need(0.0 <= self.pmd <= 1.0, "pmd", "must lie in [0, 1]")
        need(0.0 <= self.pfa <= 1.0, "pfa", "must lie in [0, 1]")
        need(isinstance(self.rounds, int) and self.rounds >= 0, "rounds", "must be a non-negative integer")
        need(isinstance(self.seed, int) and self.seed >= 0, "seed", "must be a non-negative integer")
        need(self.impairment in IMPAIRMENT, "impairment", f"must be one of {sorted(IMPAIRMENT)}")
        need(self.target_pupe is None or 0.0 < self.target_pupe <= 1.0, "target_pupe", "must lie in (0, 1]")
        need(self.search_lo_db < self.search_hi_db, "search_lo_db", "must be below search_hi_db")
        need(self.tol_db > 0, "tol_db", "must be positive")
        need(self.grid_step_db > 0, "grid_step_db", "must be positive")
        need(self.dl_max >= 1, "dl_max", "must be >= 1")
        need(self.workers >= 1, "workers", "must be >= 1")
        need(self.format in ("csv", "json"), "format", "must be csv or json")

        if self.command == "analyze":
            need(self.dl >= 1 or self.di >= 1, "dl", "analyze needs at least one active device")
        if self.command in ("analyze", "simulate"):
            need(self.ebn0_db is not None or self.target_pupe is not None, "ebn0_db",
                 "required unless target_pupe is given")
        if self.command == "simulate":
            need(self.rounds >= 1, "rounds", "simulate needs at least one round")
        if self.command in ("solve", "transition"):
            need(self.target_pupe is not None, "target_pupe", f"required for {self.command}")
        if self.command in ("solve", "simulate") or (self.command == "analyze" and self.ebn0_db is None):
            need(self.dl >= 1, "dl", "must be >= 1 when solving for a PUPE target")
        if self.command == "sweep":
            need(self.axis in simkit.SWEEP_AXES, "axis", f"must be one of {sorted(simkit.SWEEP_AXES)}")
            need(len(self.values) > 0, "values", "sweep needs at least one value")
            name = simkit.SWEEP_AXES[self.axis]
            if name != "ebn0_db":
                need(self.ebn0_db is not None or self.target_pupe is not None, "ebn0_db",
                     "required unless target_pupe is given")
            if name in ("D_L", "D_I"):
                need(all(float(v).is_integer() and v >= 0 for v in self.values), "values",
                     "device counts must be non-negative integers")
            if name == "D_L" and (self.target_pupe is not None or self.rounds > 0):
                need(all(v >= 1 for v in self.values), "values", "dl values must be >= 1")
            if name == "p_fa":
                need(all(0.0 <= v <= 1.0 for v in self.values), "values", "pfa values must lie in [0, 1]")
        return self

    def system(self, **overrides) -> simkit.SystemConfig:
        kw = dict(B=self.bits, D_L=self.dl, D_I=self.di, D_tot=self.dtot,
                  ebn0_db=self.ebn0_db if self.ebn0_db is not None else 0.0,
                  rffi=RffiModel(self.pmd, self.pfa), impairment_mode=IMPAIRMENT[self.impairment],
                  rounds=max(self.rounds, 1), seed=self.seed, dense=self.dense)
        kw.update(overrides)
        return simkit.SystemConfig(**kw)

    def solver(self) -> analytics.SolverConfig:
        return analytics.SolverConfig(self.target_pupe if self.target_pupe is not None else 0.05,
                                      self.search_lo_db, self.search_hi_db, self.grid_step_db, self.tol_db)


def _row(spec: ExperimentSpec, cfg: simkit.SystemConfig, point=None, report=None, solved=None,
         transition=None) -> dict:
    row = dict.fromkeys(COLUMNS)
    row.update(command=spec.command, bits=cfg.B, n=cfg.N, dl=cfg.D_L, di=cfg.D_I, dtot=cfg.D_tot,
               ebn0_db=cfg.ebn0_db if (spec.ebn0_db is not None or isinstance(solved, float)) else None,
               pmd=cfg.rffi.p_md, pfa=cfg.rffi.p_fa, impairment=spec.impairment,
               rounds=report.rounds_run if report else None,
               seed=cfg.seed, target_pupe=spec.target_pupe)
    if spec.command == "sweep" and spec.axis and simkit.SWEEP_AXES[spec.axis] == "ebn0_db":
        row["ebn0_db"] = cfg.ebn0_db
    if report is not None:
        point = report.analytical
        row.update(pupe_hat=report.pupe_hat, stderr_pupe=report.stderr_pupe,
                   spoof_hat=report.spoof_hat if cfg.D_I > 0 else None,
                   stderr_spoof=report.stderr_spoof if cfg.D_I > 0 else None)
    if point is not None:
        row.update(p_sym_err=point.p_sym_err, p_a=point.p_a, p_b=point.p_b, p_c=point.p_c,
                   p_total=point.p_total, pupe_analytical=point.pupe, spoof_analytical=point.spoof,
                   pn=point.pn)
    if solved is not None:
        row["min_ebn0_db"] = solved
    if transition is not None:
        row["transition_dl"] = transition
    return row


def _solve(spec: ExperimentSpec, cfg: simkit.SystemConfig):
    return analytics.min_ebn0_for_pupe(spec.solver(), cfg.D_L, cfg.D_I, cfg.B, cfg.rffi.p_md, cfg.rffi.p_fa)


def _evaluate(spec: ExperimentSpec, cfg: simkit.SystemConfig, simulate: bool, solve: bool) -> dict:
    solved = None
    if solve:
        solved = _solve(spec, cfg)
        if solved is None:
            return _row(spec, cfg, solved=INFEASIBLE)
        cfg = cfg.replace(ebn0_db=solved)
    if simulate:
        return _row(spec, cfg, report=simkit.estimate(cfg, spec.workers), solved=solved)
    point = analytics.analyze(cfg.D_L, cfg.D_I, cfg.B, cfg.ebn0_db, cfg.rffi.p_md, cfg.rffi.p_fa)
    return _row(spec, cfg, point=point, solved=solved)


def execute(spec: ExperimentSpec) -> list[dict]:
    """Run a validated spec and return its output rows."""
    cfg = spec.system()
    if spec.command == "analyze":
        return [_evaluate(spec, cfg, simulate=False, solve=spec.ebn0_db is None)]
    if spec.command == "simulate":
        return [_evaluate(spec, cfg, simulate=True, solve=spec.ebn0_db is None)]
    if spec.command == "solve":
        return [_evaluate(spec, cfg, simulate=False, solve=True)]
    if spec.command == "sweep":
        name = simkit.SWEEP_AXES[spec.axis]
        solve = name != "ebn0_db" and spec.target_pupe is not None
        return [_evaluate(spec, c, simulate=spec.rounds > 0, solve=solve)
                for c in simkit.sweep_configs(cfg, spec.axis, spec.values)]
    # transition
    dl = analytics.regime_transition_dl(spec.di, spec.bits, spec.pmd, spec.pfa, spec.target_pupe,
                                        dl_max=spec.dl_max, solver=spec.solver())
    if dl is None:
        return [_row(spec, cfg.replace(D_L=spec.dl_max), transition=None)]
    row = _evaluate(spec, cfg.replace(D_L=dl), simulate=False, solve=True)
    row["transition_dl"] = dl
    return [row]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(rows: list[dict], fmt: str) -> str:
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in COLUMNS])
    else:
        for r in rows:
            buf.write(json.dumps({c: r[c] for c in COLUMNS}, ensure_ascii=False))
            buf.write("\n")
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ohc-ura-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _summary(row: dict) -> str:
    keys = ["dl", "di", "ebn0_db", "min_ebn0_db", "pupe_analytical", "spoof_analytical",
            "pupe_hat", "spoof_hat", "pn", "transition_dl"]
    return " ".join(f"{k}={_fmt(row[k])}" for k in keys if row[k] is not None)


def _parse_values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ohc-ura", description="One-hot coded URA with RFFI authentication")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON file with any subset of the options below")
    a = argparse.SUPPRESS
    p.add_argument("--bits", type=int, default=a)
    p.add_argument("--dl", type=int, default=a, help="active legitimate devices per round")
    p.add_argument("--di", type=int, default=a, help="active illegitimate devices per round")
    p.add_argument("--dtot", type=int, default=a, help="registered legitimate devices")
    p.add_argument("--ebn0-db", type=float, default=a)
    p.add_argument("--pmd", type=float, default=a, help="RFFI miss-detection probability")
    p.add_argument("--pfa", type=float, default=a, help="RFFI false-alarm probability")
    p.add_argument("--rounds", type=int, default=a, help="Monte Carlo rounds (0 skips simulation in sweep)")
    p.add_argument("--seed", type=int, default=a)
    p.add_argument("--impairment", choices=sorted(IMPAIRMENT), default=a)
    p.add_argument("--dense", action="store_true", default=a, help="simulate every idle channel use")
    p.add_argument("--target-pupe", type=float, default=a)
    p.add_argument("--axis", choices=sorted(simkit.SWEEP_AXES), default=a)
    p.add_argument("--values", type=_parse_values, default=a)
    p.add_argument("--dl-max", type=int, default=a, help="upper end of the transition search")
    p.add_argument("--search-lo-db", type=float, default=a)
    p.add_argument("--search-hi-db", type=float, default=a)
    p.add_argument("--grid-step-db", type=float, default=a)
    p.add_argument("--tol-db", type=float, default=a)
    p.add_argument("--workers", type=int, default=a)
    p.add_argument("--output", "-o", default=a)
    p.add_argument("--format", choices=("csv", "json"), default=a)
    return p


def spec_from_args(argv=None) -> ExperimentSpec:
    ns = vars(build_parser().parse_args(argv))
    config_path = ns.pop("config", None)
    data = {}
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", str(exc))
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be an object")
    data.update(ns)
    try:
        return ExperimentSpec.from_mapping(data)
    except TypeError as exc:
        raise ConfigError("config", str(exc))


def main(argv=None) -> int:
    try:
        spec = spec_from_args(argv).validate()
    except ConfigError as exc:
        print(f"ohc-ura: error: {exc}", file=sys.stderr)
        return 2
    try:
        rows = execute(spec)
        text = render(rows, spec.format)
        if spec.output:
            write_atomic(spec.output, text)
            for r in rows:
                print(_summary(r))
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"ohc-ura: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"ohc-ura: internal error: {exc!r}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
