"""Command-line driver: configure an experiment, run one pipeline, write a
deterministic report.json plus CSV tables and a content-hash MANIFEST.

Exit codes: 0 = ran and all declared expectations matched; 1 = ran but an
expectation failed; 2 = precondition or configuration error (single-line
machine-parsable reason on stderr).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass, field, asdict

import numpy as np

from . import __version__
from .bb import classify_net_bb, colombeau_crosscheck, omega_norm_ladder
from .distributions import (ModelDistribution, classical_wf_oracle,
                            regularize)
from .errors import GfalgError
from .estimators import classify_net, regularity_test
from .grids import GridSpec
from .microlocal import wavefront, wf_compare
from .mollifier import build_mollifier, export_mollifier, verify_mollifier
from .nets import (EpsilonLadder, GeneralizedNumber, GeneralizedPoint,
                   combine, classify_generalized_number, point_value,
                   window_net)
from .weights import (WeightFunction, WeightSequence, assoc, check_conditions,
                      check_assoc_m2, omega_check)

REPORT_SCHEMA = "gfalg-report/1"

COMMANDS = ("weights-check", "mollifier-build", "embed", "classify",
            "regularity", "wavefront", "impossibility-demo", "bb-classify",
            "crosscheck")


class ConfigError(GfalgError):
    pass


@dataclass
class ExperimentConfig:
    """Resolved experiment parameters; defaults are the reference rig."""

    weight: str = "gevrey:2"
    sigma: float = 1.5
    grid_n: int = 4096
    grid_half_width: float = 20.0
    ladder_eps0: float = 2.0 ** -3
    ladder_ratio: float = 0.5
    ladder_count: int = 8
    dist: str = "delta"
    freq: float = 3.0
    coeffs: tuple = ()
    table_path: str = ""
    mode: str = "beurling"
    box: tuple = (-10.0, 10.0)
    window_center: float = 0.0
    window_radius: float = 10.0
    wf_centers: tuple = (-2.0, 0.0, 2.0)
    wf_radius: float = 0.5
    out: str = "gfalg-out"
    expect: dict = field(default_factory=dict)

    def resolved(self) -> dict:
        d = asdict(self)
        for k in ("coeffs", "box", "wf_centers"):
            d[k] = list(d[k])
        # the output directory is plumbing, not a scientific input; keeping
        # it out of the resolved config makes reports path-independent
        d.pop("out")
        return d


def _parse_pair(text: str, n: int, label: str):
    parts = text.split(",")
    if len(parts) != n:
        raise ConfigError(f"--{label} needs {n} comma-separated values")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"--{label}: {exc}") from None


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: {exc}") from None
        unknown = set(data) - set(cfg.__dict__)
        if unknown:
            raise ConfigError(f"config: unknown keys {sorted(unknown)}")
        for k, v in data.items():
            setattr(cfg, k, tuple(v) if isinstance(v, list) else v)
    if args.out:
        cfg.out = args.out
    if args.dist:
        cfg.dist = args.dist
    if args.mode:
        cfg.mode = args.mode
    if args.weight:
        cfg.weight = args.weight
    if args.sigma is not None:
        cfg.sigma = args.sigma
    if args.grid:
        n, half = _parse_pair(args.grid, 2, "grid")
        cfg.grid_n, cfg.grid_half_width = int(n), half
    if args.ladder:
        e0, r, c = _parse_pair(args.ladder, 3, "ladder")
        cfg.ladder_eps0, cfg.ladder_ratio, cfg.ladder_count = e0, r, int(c)
    if cfg.mode not in ("beurling", "roumieu"):
        raise ConfigError("mode must be beurling or roumieu")
    return cfg


def parse_weight(spec: str):
    """'gevrey:S' -> WeightSequence; 'omega:log1p' / 'omega:pow:A' ->
    WeightFunction."""
    parts = spec.split(":")
    try:
        if parts[0] == "gevrey" and len(parts) == 2:
            return WeightSequence.gevrey(float(parts[1]))
        if parts[0] == "omega" and parts[1] == "log1p" and len(parts) == 2:
            return WeightFunction.log_one_plus_t()
        if parts[0] == "omega" and parts[1] == "pow" and len(parts) == 3:
            return WeightFunction.power(float(parts[2]))
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"weight {spec!r}: {exc}") from None
    raise ConfigError(
        f"weight {spec!r}: expected gevrey:S, omega:log1p or omega:pow:A")


def _require_sequence(w, ctx: str) -> WeightSequence:
    if not isinstance(w, WeightSequence):
        raise ConfigError(f"{ctx} needs a gevrey:S weight")
    return w


def _require_omega(w, ctx: str) -> WeightFunction:
    if not isinstance(w, WeightFunction):
        raise ConfigError(f"{ctx} needs an omega:* weight")
    return w


_ZERO_TABLE = {"xi": [-1.0, 0.0, 1.0], "re": [0.0, 0.0, 0.0],
               "im": [0.0, 0.0, 0.0]}


def build_distribution(cfg: ExperimentConfig) -> ModelDistribution:
    if cfg.dist == "zero":
        return ModelDistribution(kind="table", table=_ZERO_TABLE)
    if cfg.dist == "table":
        if not cfg.table_path:
            raise ConfigError("dist 'table' needs table_path in the config")
        return ModelDistribution.from_table_json(cfg.table_path)
    kwargs = {}
    if cfg.dist == "gaussian_times_sine":
        kwargs["freq"] = cfg.freq
    if cfg.dist == "polynomial":
        kwargs["coeffs"] = tuple(cfg.coeffs)
    try:
        return ModelDistribution(kind=cfg.dist, **kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _rig(cfg: ExperimentConfig):
    grid = GridSpec(1, cfg.grid_half_width, cfg.grid_n)
    ladder = EpsilonLadder(cfg.ladder_eps0, cfg.ladder_ratio,
                           cfg.ladder_count)
    moll = build_mollifier(cfg.sigma, grid)
    return grid, ladder, moll


def _embed(cfg: ExperimentConfig, seq=None):
    grid, ladder, moll = _rig(cfg)
    dist = build_distribution(cfg)
    net = regularize(dist, moll, ladder, grid, mode=cfg.mode, weight=seq)
    return dist, net


# ---------------------------------------------------------------- commands

def cmd_weights_check(cfg: ExperimentConfig) -> tuple[dict, dict]:
    w = parse_weight(cfg.weight)
    if isinstance(w, WeightSequence):
        rep = check_conditions(w)
        from .weights import resolved_for
        deep = resolved_for(w, 4.1e6)
        m2_functional_ok = check_assoc_m2(deep, np.geomspace(1e-2, 1e6, 200))
        report = {
            "weight": w.to_json(),
            "m1_ok": rep.m1_ok,
            "m2_ok": rep.m2_ok,
            "m2_constants": {"A": rep.m2_constants[0],
                             "H": rep.m2_constants[1]},
            "m2_functional_ok": m2_functional_ok,
            "m3prime_partial_sum": rep.m3prime_partial_sum,
            "m3prime_converges": rep.m3prime_converges,
        }
        verdict = {"ok": rep.m1_ok and rep.m2_ok and rep.m3prime_converges}
    else:
        t_grid = np.geomspace(1e-2, 1e6, 200)
        rep = omega_check(w, t_grid)
        report = {
            "weight": w.to_json(),
            "subadditive_ok": rep.subadditive_ok,
            "subadditivity_max_violation": rep.subadditivity_max_violation,
            "beta_integral": rep.beta_integral,
            "beta_converges": rep.beta_converges,
            "gamma_constants": list(rep.gamma_constants),
            "gamma_ok": rep.gamma_ok,
        }
        verdict = {"ok": rep.subadditive_ok and rep.beta_converges
                   and rep.gamma_ok}
    return {"conditions": report, "verdict": verdict}, {}


def cmd_mollifier_build(cfg: ExperimentConfig) -> tuple[dict, dict]:
    grid = GridSpec(1, cfg.grid_half_width, cfg.grid_n)
    moll = build_mollifier(cfg.sigma, grid)
    rep = verify_mollifier(moll)
    manifest = export_mollifier(moll, cfg.out)
    report = {"mollifier": rep.to_json(), "export": manifest,
              "verdict": {"ok": rep.ok}}
    return report, {}


def _frame_table(net) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["eps", "sup", "l1"])
    dx = net.fine_grid.spacing
    for eps, fr in zip(net.ladder.values, net.frames):
        wr.writerow([f"{eps:.12g}", f"{float(np.max(np.abs(fr))):.12g}",
                     f"{float(np.sum(np.abs(fr))) * dx ** net.grid.dim:.12g}"])
    return buf.getvalue()


def cmd_embed(cfg: ExperimentConfig) -> tuple[dict, dict]:
    w = parse_weight(cfg.weight)
    seq = _require_sequence(w, "embed")
    dist, net = _embed(cfg, seq)
    verdict = classify_net(net, cfg.box, mode=cfg.mode, seq=seq)
    report = {
        "distribution": {"kind": dist.kind},
        "ladder": net.ladder.to_json(),
        "frame_sups": [float(np.max(np.abs(fr))) for fr in net.frames],
        "oversample": net.oversample,
        "verdict": {"classification": verdict.classification},
    }
    return report, {"frames.csv": _frame_table(net)}


def cmd_classify(cfg: ExperimentConfig) -> tuple[dict, dict]:
    w = parse_weight(cfg.weight)
    seq = _require_sequence(w, "classify")
    dist, net = _embed(cfg, seq)
    verdict = classify_net(net, cfg.box, mode=cfg.mode, seq=seq)
    report = {
        "distribution": {"kind": dist.kind},
        "verdict": verdict.to_json(),
    }
    csvs = {"frames.csv": _frame_table(net),
            "nu.csv": _trace_csv("nu", net.ladder, verdict.nu)}
    return report, csvs


def _trace_csv(name: str, ladder: EpsilonLadder, trace) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["eps", name])
    for eps, v in zip(ladder.values, np.asarray(trace, dtype=float)):
        wr.writerow([f"{eps:.12g}", f"{v:.12g}"])
    return buf.getvalue()


def cmd_regularity(cfg: ExperimentConfig) -> tuple[dict, dict]:
    w = parse_weight(cfg.weight)
    seq = _require_sequence(w, "regularity")
    dist, net = _embed(cfg, seq)
    netw = window_net(net, cfg.window_center, cfg.window_radius)
    verdict = regularity_test(netw, cfg.mode, seq)
    report = {
        "distribution": {"kind": dist.kind},
        "window": {"center": cfg.window_center,
                   "radius": cfg.window_radius},
        "verdict": verdict.to_json(),
    }
    return report, {"frames.csv": _frame_table(netw)}


def cmd_wavefront(cfg: ExperimentConfig) -> tuple[dict, dict]:
    w = parse_weight(cfg.weight)
    seq = _require_sequence(w, "wavefront")
    dist, net = _embed(cfg, seq)
    rep = wavefront(net, cfg.wf_centers, cfg.wf_radius, mode=cfg.mode,
                    seq=seq)
    report = {
        "distribution": {"kind": dist.kind},
        "wavefront": rep.to_json(),
        "verdict": {"flagged_centers": list(rep.flagged_centers())},
    }
    try:
        oracle = classical_wf_oracle(dist)
        report["verdict"]["matches_classical"] = wf_compare(oracle, rep)
    except ValueError:
        report["verdict"]["matches_classical"] = None
    return report, {"wf.csv": rep.to_csv()}


def cmd_impossibility_demo(cfg: ExperimentConfig) -> tuple[dict, dict]:
    w = parse_weight(cfg.weight)
    seq = _require_sequence(w, "impossibility-demo")
    grid, ladder, moll = _rig(cfg)
    h = regularize(ModelDistribution("heaviside"), moll, ladder, grid,
                   mode=cfg.mode, weight=seq)
    defect = combine(combine(h, h, "mul"), h, "sub")  # H^2 - H
    origin = GeneralizedPoint(ladder,
                              np.zeros((ladder.count, 1)), (-1.0, 1.0))
    vals = point_value(defect, origin)
    scale = max(float(np.max(np.abs(fr))) for fr in defect.frames)
    verdict = classify_generalized_number(vals, seq, cfg.mode,
                                          reference_scale=scale)
    report = {
        "statement": "the pointwise square of the embedded step differs "
                     "from the step by a non-negligible net",
        "values_at_origin": [float(np.real(v)) for v in vals.values],
        "verdict": {"classification": verdict.verdict,
                    "non_negligible": not verdict.negligible},
    }
    csvs = {"values.csv": _trace_csv("value", ladder,
                                     np.real(vals.values))}
    return report, csvs


def cmd_bb_classify(cfg: ExperimentConfig) -> tuple[dict, dict]:
    w = parse_weight(cfg.weight)
    omega = _require_omega(w, "bb-classify")
    dist, net = _embed(cfg)
    netw = window_net(net, cfg.window_center, cfg.window_radius)
    verdict = classify_net_bb(netw, omega, cfg.mode)
    ladder1 = omega_norm_ladder(netw, omega, 1.0, "1")
    report = {
        "mode": "bb",
        "weight_function": omega.to_json(),
        "distribution": {"kind": dist.kind},
        "verdict": verdict.to_json(),
    }
    csvs = {"fl_norms.csv": _trace_csv("log_fl1_lambda1", netw.ladder,
                                       ladder1.log_values)}
    return report, csvs


def cmd_crosscheck(cfg: ExperimentConfig) -> tuple[dict, dict]:
    dist, net = _embed(cfg)
    netw = window_net(net, cfg.window_center, cfg.window_radius)
    rep = colombeau_crosscheck(netw)
    report = {
        "mode": "bb",
        "distribution": {"kind": dist.kind},
        "crosscheck": rep.to_json(),
        "verdict": {"agree": rep.agree,
                    "fitted_order": rep.fitted_order},
    }
    return report, {}


_DISPATCH = {
    "weights-check": cmd_weights_check,
    "mollifier-build": cmd_mollifier_build,
    "embed": cmd_embed,
    "classify": cmd_classify,
    "regularity": cmd_regularity,
    "wavefront": cmd_wavefront,
    "impossibility-demo": cmd_impossibility_demo,
    "bb-classify": cmd_bb_classify,
    "crosscheck": cmd_crosscheck,
}


# ----------------------------------------------------------------- reports

def _atomic_write(path: str, data: bytes) -> None:
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def check_expectations(cfg: ExperimentConfig, report: dict) -> list:
    """Compare cfg.expect (dotted paths into the report) against results."""
    failures = []
    for path, expected in sorted(cfg.expect.items()):
        node = report
        try:
            for part in path.split("."):
                node = node[part]
        except (KeyError, TypeError):
            failures.append({"path": path, "expected": expected,
                             "actual": None, "reason": "missing"})
            continue
        if isinstance(expected, float) or isinstance(node, float):
            ok = bool(abs(float(node) - float(expected))
                      <= 1e-6 * (1.0 + abs(float(expected))))
        else:
            ok = node == expected
        if not ok:
            failures.append({"path": path, "expected": expected,
                             "actual": node, "reason": "mismatch"})
    return failures


def emit_report(cfg: ExperimentConfig, command: str, report: dict,
                csvs: dict, failures: list,
                input_hashes: dict) -> None:
    os.makedirs(cfg.out, exist_ok=True)
    full = {
        "schema": REPORT_SCHEMA,
        "version": __version__,
        "command": command,
        "config": cfg.resolved(),
        "results": report,
        "expectation_failures": failures,
    }
    payload = json.dumps(full, sort_keys=True, indent=2,
                         allow_nan=False, default=_json_default)
    payload = payload.encode()
    _atomic_write(os.path.join(cfg.out, "report.json"), payload)
    outputs = {"report.json": _sha256(payload)}
    for name, text in sorted(csvs.items()):
        data = text.encode()
        _atomic_write(os.path.join(cfg.out, name), data)
        outputs[name] = _sha256(data)
    manifest = {
        "schema": REPORT_SCHEMA,
        "command": command,
        "config": cfg.resolved(),
        "inputs": input_hashes,
        "outputs": outputs,
    }
    _atomic_write(os.path.join(cfg.out, "MANIFEST.json"),
                  json.dumps(manifest, sort_keys=True, indent=2).encode())


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _sanitize(obj):
    """Replace non-finite floats so reports stay strict JSON."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if np.isnan(f):
            return "nan"
        if np.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    return obj


# -------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gfalg",
        description="generalized-function algebra experiments")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--dist", help="distribution kind (or 'zero')")
    p.add_argument("--mode", choices=("beurling", "roumieu"))
    p.add_argument("--weight",
                   help="gevrey:S | omega:log1p | omega:pow:A")
    p.add_argument("--sigma", type=float, help="mollifier Gevrey index")
    p.add_argument("--grid", help="N,L (points, half-width)")
    p.add_argument("--ladder", help="EPS0,RATIO,COUNT")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        input_hashes = {}
        if args.config:
            with open(args.config, "rb") as fh:
                input_hashes[os.path.basename(args.config)] = _sha256(
                    fh.read())
        if cfg.table_path:
            with open(cfg.table_path, "rb") as fh:
                input_hashes[os.path.basename(cfg.table_path)] = _sha256(
                    fh.read())
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            report, csvs = _DISPATCH[args.command](cfg)
        report = _sanitize(report)
        failures = check_expectations(cfg, report)
        emit_report(cfg, args.command, report, csvs, failures, input_hashes)
    except (GfalgError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}".replace("\n", " "),
              file=sys.stderr)
        return 2
    if failures:
        for f in failures:
            print(f"expectation failed: {f['path']}: expected "
                  f"{f['expected']!r}, got {f['actual']!r}",
                  file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
