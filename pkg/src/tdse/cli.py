"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 a
verification suite failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import fock_rep, generators, observables
from .classical_check import ClassicalSystem, verify_classical_motion
from .config import ConfigError, RunConfig, validate
from .errors import DomainError, NumericalFailure
from .fock_rep import SqueezeParams
from .observables import StateSpec
from .pipeline import simulate
from .system_model import SystemClass, ToSystem

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_SUITE = 0, 2, 3, 4
ALGEBRA_TOL = 1e-12
SHO_TOL = 1e-8


class SuiteFailure(Exception):
    pass


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TDSE_THREADS", "1")))
    except ValueError:
        return 1


def _fan_out(fn, items):
    items = list(items)
    n = min(_threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _state_paths(base: Path, count: int) -> list[Path]:
    if count == 1:
        return [base]
    return [base.with_name(f"{base.stem}.state{i}{base.suffix}") for i in range(count)]


def _gauge_id(doc: dict) -> str:
    g = doc["gauge"]
    return f"nu={g['nu']};mu={g['mu']};kappa={g['kappa']}"


def _state_id(i: int, s: StateSpec) -> str:
    start = (f"alpha={s.alpha}" if s.alpha is not None
             else f"x_o={s.phase_point[0]},p_o={s.phase_point[1]}")
    return f"{i}:{start},r={s.squeeze.r},theta={s.squeeze.theta}"


def _raw_states(doc: dict) -> list[dict]:
    return doc["states"] if "states" in doc else [doc["state"]]


def _run_pipeline(cfg: RunConfig):
    run = simulate(cfg.class_tag, cfg.to, cfg.window, gauge=cfg.gauge, tq=cfg.tq,
                   xi0=cfg.xi0, xidot0=cfg.xidot0, c_naught=cfg.c0)
    trajs = _fan_out(lambda s: observables.trajectory(run.weyl, s), cfg.states)
    return run, trajs


def classical_system(cfg: RunConfig) -> ClassicalSystem:
    if cfg.class_tag is SystemClass.TO:
        return ClassicalSystem.to(cfg.to.g2, cfg.to.g1, cfg.to.g0)
    if cfg.class_tag is SystemClass.TM:
        if "f2" not in cfg.tm or "f1" not in cfg.tm:
            raise ConfigError("classical check of a TM run needs tm.f2 and tm.f1")
        return ClassicalSystem.tm(cfg.gauge.nu, cfg.tm["f2"], cfg.tm["f1"],
                                  cfg.tm.get("f0", "0"))
    q = cfg.tq
    return ClassicalSystem.tq(q.k, q.h, q.g, q.h2, q.h1, q.h0)


def classical_reports(cfg: RunConfig, trajs) -> list[dict]:
    csys = classical_system(cfg)
    gid = _gauge_id(cfg.document)

    def one(item):
        i, (spec, traj) = item
        rep = verify_classical_motion(traj, csys)
        d = rep.as_dict(gauge_id=gid, state_id=_state_id(i, spec))
        d["passed"] = bool(rep.max_residual <= cfg.classical_tol)
        return d

    return _fan_out(one, enumerate(zip(cfg.states, trajs)))


def algebra_report(N: int) -> dict:
    entries = fock_rep.verify_algebra(N)
    worst = max(e["residual"] for e in entries)
    return {"N": N, "tolerance": ALGEBRA_TOL, "max_residual": worst,
            "passed": bool(worst <= ALGEBRA_TOL), "relations": entries}


def _dump(obj, path: Path | None = None):
    text = json.dumps(obj, indent=1, sort_keys=False)
    if path is None:
        print(text)
    else:
        path.write_text(text + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    cfg = RunConfig.load(args.config)
    doc = cfg.document
    out = Path(args.out) if args.out else Path(cfg.output_path)
    if args.out:
        doc = {**doc, "output": {**doc["output"], "path": str(out)}}
    validate(doc)

    run, trajs = _run_pipeline(cfg)
    failures = []
    paths = _state_paths(out, len(trajs))
    items = zip(trajs, paths, _raw_states(doc), cfg.states)
    for i, (traj, path, raw, spec) in enumerate(items):
        if cfg.output_format == "csv":
            observables.write_trajectory_csv(traj, path)
        else:
            alpha = spec.resolve_alpha(run.weyl)
            body = observables.trajectory_json(traj, doc)
            body.update(state_index=i, state=raw, alpha=[alpha.real, alpha.imag])
            _dump(body, path)

    if cfg.coefficients_path:
        cpath = Path(cfg.coefficients_path)
        generators.write_weyl_csv(run.weyl, cpath)
        f0 = cfg.tm.get("f0")
        su = run.su11(cfg.gauge, cfg.tq, cfg.to.g0, f0)
        generators.write_su11_csv(su, cpath.with_name(f"{cpath.stem}.su11{cpath.suffix}"))

    if cfg.run_algebra_suite:
        rep = algebra_report(cfg.fock_dim)
        _dump(rep, out.with_name(f"{out.stem}.algebra.json"))
        if not rep["passed"]:
            failures.append(f"algebra suite: max residual {rep['max_residual']:.3g}")
    if cfg.run_classical_check:
        reps = classical_reports(cfg, trajs)
        _dump(reps, out.with_name(f"{out.stem}.classical.json"))
        failures += [f"classical check {r['state_id']}: residual {r['max_residual']:.3g}"
                     for r in reps if not r["passed"]]
    if failures:
        raise SuiteFailure("; ".join(failures))
    return EXIT_OK


def cmd_verify_algebra(args) -> int:
    if args.dim < fock_rep.MIN_SUITE_DIM:
        raise ConfigError(f"--dim must be at least {fock_rep.MIN_SUITE_DIM}")
    rep = algebra_report(args.dim)
    _dump(rep)
    if not rep["passed"]:
        raise SuiteFailure(f"max residual {rep['max_residual']:.3g} > {ALGEBRA_TOL}")
    return EXIT_OK


def cmd_verify_classical(args) -> int:
    cfg = RunConfig.load(args.config)
    _, trajs = _run_pipeline(cfg)
    reps = classical_reports(cfg, trajs)
    _dump(reps)
    bad = [r for r in reps if not r["passed"]]
    if bad:
        raise SuiteFailure(f"{len(bad)} trajectory(ies) exceed residual {cfg.classical_tol}")
    return EXIT_OK


def sho_check(omega: float, r: float, theta: float, n_samples: int = 200,
              t_end: float = 10.0) -> dict:
    """Squeezed product of the oscillator: generic route vs closed form."""
    if omega <= 0:
        raise ConfigError("--omega must be positive")
    sq = SqueezeParams(r, theta)
    to = ToSystem.from_strings(g2=repr(0.5 * omega * omega))
    run = simulate(SystemClass.TO, to, (0.0, t_end, n_samples))
    generic = observables.uncertainties(run.weyl, sq)[2]
    closed = observables.sho_product(run.weyl.grid, r, theta, omega)
    dev = float(np.max(np.abs(generic - closed)))
    return {"omega": omega, "r": r, "theta": theta, "n_samples": n_samples,
            "t_end": t_end, "max_deviation": dev, "tolerance": SHO_TOL,
            "passed": bool(dev <= SHO_TOL)}


def cmd_sho_check(args) -> int:
    if args.r < 0:
        raise ConfigError("--r must be non-negative")
    rep = sho_check(args.omega, args.r, args.theta, args.samples, args.t_end)
    _dump(rep)
    if not rep["passed"]:
        raise SuiteFailure(f"max deviation {rep['max_deviation']:.3g} > {SHO_TOL}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tdse", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a configuration and write trajectories")
    r.add_argument("config")
    r.add_argument("--out", help="override output.path")
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("verify-algebra", help="commutator residuals in N number states")
    a.add_argument("--dim", type=int, default=40)
    a.set_defaults(func=cmd_verify_algebra)

    c = sub.add_parser("verify-classical", help="residuals against Hamilton's equations")
    c.add_argument("config")
    c.set_defaults(func=cmd_verify_classical)

    s = sub.add_parser("sho-check", help="squeezed oscillator product, two routes")
    s.add_argument("--omega", type=float, default=1.0)
    s.add_argument("--r", type=float, default=0.5)
    s.add_argument("--theta", type=float, default=0.0)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--t-end", type=float, default=10.0)
    s.set_defaults(func=cmd_sho_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NumericalFailure, DomainError) as exc:
        print(f"tdse: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"tdse: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SuiteFailure as exc:
        print(f"tdse: verification failed: {exc}", file=sys.stderr)
        return EXIT_SUITE

if __name__ == "__main__":
    sys.exit(main())
