"""Command-line front end: ``bounds``, ``certify`` and ``sweep``.

Exit codes: 0 success, 2 configuration error, 3 certification gate failure.
Reports are deterministic for a fixed configuration; wall-clock timing is
only added with ``--timing``.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

from . import __version__
from .lgcert import (
    CertificationError,
    alternating_inputs,
    classical_bound,
    classical_bound_enumerated,
    extract_certification_unitary,
    lg_value,
    multi_time_correlation,
    perturbed_observables,
    planted_observables,
    quantum_bound,
    randomness_functional,
    sos_certificate,
    ENUMERATION_MAX_N,
)
from .quantum import (
    BinaryInstrument,
    canonical_observables,
    maximally_mixed,
    observable_from_instrument,
    random_full_rank_state,
    random_pure_state,
)
from .randcert import guessing_probability_certified
from .seqsim import check_nsit, check_zeno, is_projective, simulate_instrument, single_shot_marginals

SCHEMA_VERSION = "1"
WORKERS_ENV = "LGTOOLKIT_WORKERS"
MAX_GRID_POINTS = 100_000

EXIT_OK, EXIT_CONFIG, EXIT_GATE = 0, 2, 3

DEFAULT_TOLERANCES = {
    "zeno": 1e-9,
    "projective": 1e-6,
    "sos_identity": 1e-10,
    "maximizer": 1e-7,
    "self_test": 1e-8,
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "certify"
    n: int = 4
    N: int = 5
    state: str = "mixed"
    perturbation: float = 0.0
    device: str = "ideal"
    aux_dim: int = 1
    seeds: list = field(default_factory=lambda: [0])
    tolerances: dict = field(default_factory=dict)
    output_path: str = ""
    format: str = "json"

    def validate(self) -> "RunConfig":
        if self.command not in ("certify", "sweep", "bounds"):
            raise ConfigError(f"unknown command {self.command!r}")
        if not isinstance(self.n, int) or self.n < 3:
            raise ConfigError(f"n must be an integer >= 3, got {self.n!r}")
        if not isinstance(self.N, int) or self.N < 1:
            raise ConfigError(f"N must be an integer >= 1, got {self.N!r}")
        if self.N > 20:
            raise ConfigError(f"N is capped at 20, got {self.N}")
        if not isinstance(self.perturbation, (int, float)) or not self.perturbation >= 0:
            raise ConfigError(f"perturbation must be >= 0, got {self.perturbation!r}")
        self.perturbation = float(self.perturbation)
        if not isinstance(self.aux_dim, int) or self.aux_dim < 1:
            raise ConfigError(f"aux_dim must be a positive integer, got {self.aux_dim!r}")
        if not self.seeds or not all(isinstance(s, int) and s >= 0 for s in self.seeds):
            raise ConfigError(f"seeds must be a non-empty list of non-negative integers, got {self.seeds!r}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
        for k, v in self.tolerances.items():
            if not isinstance(v, (int, float)) or not v > 0:
                raise ConfigError(f"tolerance {k} must be positive, got {v!r}")
        parse_state_spec(self.state)
        parse_device_spec(self.device)
        return self

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))


def parse_state_spec(spec: str):
    kind, _, arg = spec.partition(":")
    if kind == "mixed" and not arg:
        return "mixed", None
    if kind in ("pure", "fullrank"):
        try:
            seed = int(arg)
        except ValueError:
            raise ConfigError(f"state {spec!r} needs an integer seed, e.g. {kind}:0") from None
        if seed < 0:
            raise ConfigError("state seed must be non-negative")
        return kind, seed
    raise ConfigError(f"unknown state spec {spec!r} (mixed | pure:<seed> | fullrank:<seed>)")


def parse_device_spec(spec: str):
    kind, _, arg = spec.partition(":")
    if kind == "ideal" and not arg:
        return "ideal", None
    if kind == "noisy":
        try:
            w = float(arg)
        except ValueError:
            raise ConfigError(f"device {spec!r} needs a weight, e.g. noisy:0.8") from None
        if not 0.0 <= w <= 1.0:
            raise ConfigError("noisy weight must lie in [0, 1]")
        return "noisy", w
    raise ConfigError(f"unknown device spec {spec!r} (ideal | noisy:<weight>)")


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a flat JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return data


# ---------------------------------------------------------------------------
# certification pipeline


def _build_device(cfg: RunConfig, trail: list):
    n = cfg.n
    base = perturbed_observables(n, cfg.perturbation) if cfg.perturbation else canonical_observables(n)
    if cfg.aux_dim > 1:
        seed = cfg.seeds[0]
        trail.append({"stream": "lgcert.plant", "seed": seed})
        obs, _ = planted_observables(n, cfg.aux_dim, seed, base=base)
    else:
        obs = base
    kind, w = parse_device_spec(cfg.device)
    if kind == "noisy":
        return [BinaryInstrument.noisy(A, w) for A in obs]
    return [BinaryInstrument.projective(A) for A in obs]


def _build_state(cfg: RunConfig, dim: int, trail: list):
    kind, seed = parse_state_spec(cfg.state)
    if kind == "mixed":
        return maximally_mixed(dim)
    if kind == "pure":
        trail.append({"stream": "quantum.pure", "seed": seed})
        return random_pure_state(dim, seed)
    trail.append({"stream": "quantum.full_rank", "seed": seed})
    return random_full_rank_state(dim, seed)


def _nsit_inputs(n: int, N: int) -> tuple:
    if n % 2 == 0:
        return alternating_inputs(n, 2, N)
    return tuple(1 + k % 2 for k in range(N))


def run_certification(cfg: RunConfig) -> dict:
    """Zeno -> projectivity -> LG value -> SOS -> self-test -> randomness.

    Stops at the first failing gate; blocks for stages that did not run are
    ``None``.
    """
    trail: list = []
    n, N = cfg.n, cfg.N
    instruments = _build_device(cfg, trail)
    dim = instruments[0].dim
    state = _build_state(cfg, dim, trail)

    report = {
        "schema_version": SCHEMA_VERSION,
        "toolkit_version": __version__,
        "command": "certify",
        "config": _config_echo(cfg),
        "passed": False,
        "failed_gate": None,
        "gates": [],
        "state": {"dim": dim, "full_rank": state.full_rank(), "min_eigenvalue": state.min_eigenvalue},
        "zeno": None,
        "projectivity": None,
        "lg": None,
        "sos": None,
        "self_test": None,
        "nsit": None,
        "randomness": None,
        "seed_trail": trail,
    }

    def gate(name: str, ok: bool, detail: str = "") -> bool:
        report["gates"].append({"name": name, "passed": bool(ok), "detail": detail})
        if not ok and report["failed_gate"] is None:
            report["failed_gate"] = name
        return ok

    xs = _nsit_inputs(n, N)
    dist = simulate_instrument(state, instruments, xs)
    nsit = check_nsit(dist, single_shot_marginals(state, instruments))
    report["nsit"] = {"inputs": list(xs), "max_deviation": nsit.max_deviation}

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        zeno = [check_zeno(state, inst, cfg.tol("zeno")) for inst in instruments]
    zmax = max(z.max_violation for z in zeno)
    report["zeno"] = {"max_violation": zmax, "per_input": [z.max_violation for z in zeno]}
    if not gate("zeno", all(z.passes for z in zeno), f"max violation {zmax:.3e}"):
        return report

    perr = max(inst.povm.projectivity_error() for inst in instruments)
    report["projectivity"] = {"max_error": perr}
    if not gate("projectivity", all(is_projective(i.povm, cfg.tol("projective")) for i in instruments)):
        return report
    obs = [observable_from_instrument(i, cfg.tol("projective")) for i in instruments]

    lg = lg_value(state, obs)
    report["lg"] = {
        "value": lg.value,
        "classical_bound": lg.classical_bound,
        "quantum_bound": lg.quantum_bound,
        "quantum_gap": lg.quantum_gap,
    }
    if not gate("classical_violation", lg.violates_classical, f"L = {lg.value:.12g}"):
        return report

    cert = sos_certificate(obs, state)
    report["sos"] = {
        "identity_residual": cert.identity_residual,
        "expectation_residuals": list(cert.expectation_residuals),
        "max_expectation_residual": cert.max_expectation_residual,
    }
    sos_ok = (
        cert.identity_residual < cfg.tol("sos_identity")
        and cert.max_expectation_residual < cfg.tol("maximizer")
    )
    if not gate("sos_residual", sos_ok, f"max residual {cert.max_expectation_residual:.3e}"):
        return report

    try:
        st = extract_certification_unitary(obs, cfg.tol("maximizer"), state)
    except CertificationError as exc:
        gate("self_test", False, str(exc))
        return report
    report["self_test"] = {
        "max_deviation": st.max_deviation,
        "traceless_check": st.traceless_check,
        "anticommutator_check": st.anticommutator_check,
        "aux_dim": st.aux_dim,
    }
    if not gate("self_test", st.max_deviation < cfg.tol("self_test"), f"max deviation {st.max_deviation:.3e}"):
        return report

    if n % 2 == 0:
        rep = guessing_probability_certified(n, N)
        rnd = {"p_guess": rep.p_guess, "min_entropy_bits": rep.min_entropy_bits, "method": rep.method}
        if N >= 2:
            rnd["r_value"] = randomness_functional(state, obs, 2, N)
            rnd["alternating_correlator"] = multi_time_correlation(state, obs, alternating_inputs(n, 2, N))
        report["randomness"] = rnd
    else:
        report["randomness"] = {"p_guess": None, "min_entropy_bits": None, "method": "not_derived_for_odd_n"}

    report["passed"] = True
    return report


def _config_echo(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    del d["output_path"]  # the destination must not change the report bytes
    d["tolerances"] = {k: cfg.tol(k) for k in sorted(DEFAULT_TOLERANCES)}
    return d


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False, ensure_ascii=False) + "\n"


def _emit(text: str, path: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def to_csv(rows: list, columns: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# bounds


BOUND_COLUMNS = ["n", "classical_enumerated", "classical_closed_form", "quantum_bound", "gap"]


def bounds_table(n_min: int, n_max: int) -> list:
    if n_min < 3:
        raise ConfigError("n-min must be >= 3")
    if n_max < n_min:
        raise ConfigError(f"empty range {n_min}..{n_max}")
    if n_max > ENUMERATION_MAX_N:
        raise ConfigError(f"n-max is capped at {ENUMERATION_MAX_N}")
    rows = []
    for n in range(n_min, n_max + 1):
        enum = classical_bound_enumerated(n)
        qb = quantum_bound(n)
        rows.append(
            {
                "n": n,
                "classical_enumerated": enum,
                "classical_closed_form": classical_bound(n),
                "quantum_bound": qb,
                "gap": qb - classical_bound(n),
            }
        )
    return rows


# ---------------------------------------------------------------------------
# sweep


SWEEP_COLUMNS = [
    "n",
    "N",
    "perturbation",
    "passed",
    "failed_gate",
    "lg_value",
    "classical_bound",
    "quantum_bound",
    "sos_identity_residual",
    "max_expectation_residual",
    "self_test_max_deviation",
    "zeno_max_violation",
    "nsit_max_deviation",
    "p_guess",
    "min_entropy_bits",
]


def parse_range(text: str, kind=float) -> list:
    """``a``, ``a:b`` (step 1) or ``a:b:step``; both ends inclusive."""
    parts = text.split(":")
    try:
        vals = [kind(p) for p in parts]
    except ValueError:
        raise ConfigError(f"bad range {text!r}") from None
    if len(parts) == 1:
        return vals
    if len(parts) > 3:
        raise ConfigError(f"bad range {text!r}")
    start, stop = vals[0], vals[1]
    step = vals[2] if len(parts) == 3 else kind(1)
    if step <= 0 or stop < start:
        raise ConfigError(f"empty or invalid range {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count > MAX_GRID_POINTS:
        raise ConfigError(f"range {text!r} has more than {MAX_GRID_POINTS} points")
    if kind is int:
        return [start + k * step for k in range(count)]
    return [round(start + k * step, 12) for k in range(count)]


def _sweep_row(cfg: RunConfig) -> dict:
    rep = run_certification(cfg)
    lg, sos, st = rep["lg"] or {}, rep["sos"] or {}, rep["self_test"] or {}
    rnd = rep["randomness"] or {}
    return {
        "n": cfg.n,
        "N": cfg.N,
        "perturbation": cfg.perturbation,
        "passed": rep["passed"],
        "failed_gate": rep["failed_gate"],
        "lg_value": lg.get("value"),
        "classical_bound": lg.get("classical_bound"),
        "quantum_bound": lg.get("quantum_bound"),
        "sos_identity_residual": sos.get("identity_residual"),
        "max_expectation_residual": sos.get("max_expectation_residual"),
        "self_test_max_deviation": st.get("max_deviation"),
        "zeno_max_violation": rep["zeno"]["max_violation"],
        "nsit_max_deviation": rep["nsit"]["max_deviation"],
        "p_guess": rnd.get("p_guess"),
        "min_entropy_bits": rnd.get("min_entropy_bits"),
    }


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        w = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if w < 1:
        raise ConfigError(f"{WORKERS_ENV} must be >= 1")
    return w


def run_sweep(base: RunConfig, ns: list, Ns: list, perturbs: list) -> list:
    grid = sorted(itertools.product(ns, Ns, perturbs))
    if len(grid) > MAX_GRID_POINTS:
        raise ConfigError(f"grid has {len(grid)} points, limit is {MAX_GRID_POINTS}")
    cfgs = []
    for n, N, p in grid:
        d = asdict(base)
        d.update(command="certify", n=n, N=N, perturbation=p)
        cfgs.append(RunConfig(**d).validate())
    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        return list(pool.map(_sweep_row, cfgs))


# ---------------------------------------------------------------------------
# argument handling


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat JSON config file; flags override its values")
    p.add_argument("--state", help="mixed | pure:<seed> | fullrank:<seed>")
    p.add_argument("--device", help="ideal | noisy:<weight>")
    p.add_argument("--aux-dim", type=int, dest="aux_dim", help="auxiliary dimension of a planted device")
    p.add_argument("--seed", type=int, action="append", dest="seeds", help="seed (repeatable)")
    p.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE", help="tolerance override")
    p.add_argument("--out", dest="output_path", help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lgtoolkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="classical vs quantum LG bounds")
    b.add_argument("--n-min", type=int, default=3)
    b.add_argument("--n-max", type=int, default=12)
    b.add_argument("--format", choices=("json", "csv"), default="csv")
    b.add_argument("--out", dest="output_path", default="")

    c = sub.add_parser("certify", help="run the certification pipeline once")
    c.add_argument("--n", type=int)
    c.add_argument("--N", type=int)
    c.add_argument("--perturb", type=float, dest="perturbation")
    c.add_argument("--timing", action="store_true", help="add wall_time_ms (breaks byte-identity)")
    _add_common(c)

    s = sub.add_parser("sweep", help="certify over a grid of n, N, perturbation")
    s.add_argument("--n", default=None, help="int or range a:b")
    s.add_argument("--N", default=None, help="int or range a:b")
    s.add_argument("--perturb", default=None, help="float or range a:b:step")
    _add_common(s)
    return parser


def _parse_tols(items: list) -> dict:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"tolerance override {item!r} must be KEY=VALUE")
        try:
            out[key] = float(val)
        except ValueError:
            raise ConfigError(f"tolerance {key} is not a number: {val!r}") from None
    return out


def _merge_config(args, scalar_keys) -> RunConfig:
    data = load_config_file(args.config) if args.config else {}
    for key in scalar_keys:
        v = getattr(args, key, None)
        if v is not None:
            data[key] = v
    tols = dict(data.get("tolerances", {}))
    tols.update(_parse_tols(args.tol))
    data["tolerances"] = tols
    data["command"] = args.command
    try:
        return RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _cmd_bounds(args) -> int:
    rows = bounds_table(args.n_min, args.n_max)
    if any(r["classical_enumerated"] != r["classical_closed_form"] for r in rows):
        _emit(to_csv(rows, BOUND_COLUMNS), args.output_path)
        return EXIT_GATE
    if args.format == "json":
        _emit(dump_json({"schema_version": SCHEMA_VERSION, "rows": rows}), args.output_path)
    else:
        _emit(to_csv(rows, BOUND_COLUMNS), args.output_path)
    return EXIT_OK


def _cmd_certify(args) -> int:
    keys = ("n", "N", "perturbation", "state", "device", "aux_dim", "seeds", "output_path", "format")
    cfg = _merge_config(args, keys).validate()
    if cfg.format != "json":
        raise ConfigError("certify writes JSON reports only")
    t0 = time.perf_counter()
    report = run_certification(cfg)
    if args.timing:
        report["wall_time_ms"] = (time.perf_counter() - t0) * 1e3
    _emit(dump_json(report), cfg.output_path)
    return EXIT_OK if report["passed"] else EXIT_GATE


def _cmd_sweep(args) -> int:
    data = load_config_file(args.config) if args.config else {}
    n_spec = args.n if args.n is not None else str(data.pop("n", 4))
    N_spec = args.N if args.N is not None else str(data.pop("N", 5))
    p_spec = args.perturb if args.perturb is not None else str(data.pop("perturbation", 0.0))
    data.pop("n", None), data.pop("N", None), data.pop("perturbation", None)
    ns, Ns, ps = parse_range(n_spec, int), parse_range(N_spec, int), parse_range(p_spec, float)
    if len(ns) * len(Ns) * len(ps) > MAX_GRID_POINTS:
        raise ConfigError(f"grid exceeds {MAX_GRID_POINTS} points")
    for key in ("state", "device", "aux_dim", "seeds", "output_path", "format"):
        v = getattr(args, key, None)
        if v is not None:
            data[key] = v
    tols = dict(data.get("tolerances", {}))
    tols.update(_parse_tols(args.tol))
    data["tolerances"] = tols
    data["command"] = "sweep"
    try:
        base = RunConfig(n=ns[0], N=Ns[0], **data).validate()
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    rows = run_sweep(base, ns, Ns, ps)
    if base.format == "csv":
        _emit(to_csv(rows, SWEEP_COLUMNS), base.output_path)
    else:
        _emit(dump_json({"schema_version": SCHEMA_VERSION, "rows": rows}), base.output_path)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"bounds": _cmd_bounds, "certify": _cmd_certify, "sweep": _cmd_sweep}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"lgtoolkit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
