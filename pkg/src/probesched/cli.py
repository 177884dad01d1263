"""Batch experiment front end.

Subcommands: index | simulate | evaluate | oracle | subsidy | queueing.
Configs come from a JSON file or a built-in preset; a handful of flags
override the common fields.  All outputs are CSV with a header row and LF
line endings, and are deterministic functions of (config, seed).

Exit codes: 0 success, 2 validation error, 3 search-space guard refusal.
"""

from __future__ import annotations

import argparse
import copy
import json
import sys

from .arm import ArmState
from .attack import component_from_json, component_to_json
from .oracle import (
    DEFAULT_BOUND,
    SearchSpaceError,
    dp_optimal,
    ensure_within_guard,
    policy_evaluate_exact,
)
from .policies import POLICY_NAMES, myopic_policy, whittle_policy
from .presets import PRESETS
from .queueing import queue_network_from_json, to_rmab
from .sim import RunConfig, run
from .subsidy import solve_lambda_star
from .whittle import index_table


class ConfigError(Exception):
    """A configuration field failed validation; the message names it."""


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _require(cfg, field, kind, where="config"):
    if field not in cfg:
        raise ConfigError(f"{where}.{field}: missing required field")
    val = cfg[field]
    if kind is int:
        if not isinstance(val, int) or isinstance(val, bool):
            raise ConfigError(f"{where}.{field}: expected an integer, got {val!r}")
    elif not isinstance(val, kind):
        raise ConfigError(f"{where}.{field}: expected {kind.__name__}, got {val!r}")
    return val


def _components(cfg):
    comps = _require(cfg, "components", list)
    if not comps:
        raise ConfigError("config.components: must not be empty")
    out = []
    for idx, obj in enumerate(comps):
        try:
            out.append(component_from_json(obj))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"config.components[{idx}]: {exc}") from exc
    return out


def _positive(cfg, field, where="config"):
    val = _require(cfg, field, int, where)
    if val < 1:
        raise ConfigError(f"{where}.{field}: must be >= 1, got {val}")
    return val


def _k(cfg, n):
    k = _positive(cfg, "K")
    if k > n:
        raise ConfigError(f"config.K: K={k} exceeds the {n} configured components")
    return k


def _policies(cfg):
    pols = cfg.get("policies", ["whittle"])
    if not isinstance(pols, list) or not pols:
        raise ConfigError("config.policies: expected a nonempty list of policy names")
    for p in pols:
        if p not in POLICY_NAMES:
            raise ConfigError(f"config.policies: unknown policy {p!r}; choose from {POLICY_NAMES}")
    return pols


def cmd_index(cfg):
    specs = _components(cfg)
    horizon = _positive(cfg, "horizon")
    header = ["component", "state_i", "state_t", "index"]
    rows = []
    for n, spec in enumerate(specs):
        for state, w in index_table(spec, horizon):
            rows.append([n, state.i, state.t, w])
    return header, rows


def cmd_simulate(cfg):
    specs = _components(cfg)
    k = _k(cfg, len(specs))
    horizon = _positive(cfg, "horizon")
    reps = _positive(cfg, "replications")
    seed = _require(cfg, "seed", int)
    header = ["policy", "slot", "mean_cumulative_cost", "stderr"]
    rows = []
    for policy in _policies(cfg):
        traj = run(RunConfig(specs=tuple(specs), k=k, horizon=horizon,
                             policy=policy, replications=reps, seed=seed))
        for slot in range(horizon):
            rows.append([policy, slot + 1, float(traj.mean_cumulative[slot]),
                         float(traj.stderr[slot])])
    return header, rows


def _exact_policy(name, specs, k):
    if name == "whittle":
        return whittle_policy(specs, k)
    if name == "myopic":
        return myopic_policy(specs, k)
    raise ConfigError(f"config.policies: exact evaluation supports whittle|myopic, got {name!r}")


def cmd_evaluate(cfg):
    specs = _components(cfg)
    k = _k(cfg, len(specs))
    horizon = _positive(cfg, "horizon")
    bound = cfg.get("bound", DEFAULT_BOUND)
    initial = [ArmState(0, 1)] * len(specs)
    header = ["policy", "horizon", "expected_cost"]
    rows = []
    for name in _policies(cfg):
        val = policy_evaluate_exact(specs, initial, k, horizon,
                                    _exact_policy(name, specs, k), bound)
        rows.append([name, horizon, val])
    return header, rows


def cmd_oracle(cfg):
    specs = _components(cfg)
    k = _k(cfg, len(specs))
    horizon = _positive(cfg, "horizon")
    bound = cfg.get("bound", DEFAULT_BOUND)
    initial = [ArmState(0, 1)] * len(specs)
    ensure_within_guard(specs, initial, k, horizon, bound)
    names = [p for p in _policies(cfg) if p in ("whittle", "myopic")]
    header = ["horizon", "optimal_cost"]
    for name in names:
        header += [f"{name}_cost", f"{name}_rel_gap"]
    rows = []
    for t in range(1, horizon + 1):
        opt, _table = dp_optimal(specs, initial, k, t, bound)
        row = [t, opt]
        for name in names:
            val = policy_evaluate_exact(specs, initial, k, t,
                                        _exact_policy(name, specs, k), bound)
            row += [val, (val - opt) / opt if opt > 0 else 0.0]
        rows.append(row)
    return header, rows


def cmd_subsidy(cfg):
    specs = _components(cfg)
    n = len(specs)
    k = _positive(cfg, "K")
    if not k < n:
        raise ConfigError(f"config.K: the relaxed constraint needs K < N, got K={k}, N={n}")
    plan = solve_lambda_star(specs, k)
    header = ["arm", "t0_star", "activation_rate", "mixing", "lambda_star"]
    rows = [
        [idx, plan.t0_star[idx], plan.rates[idx], plan.mixing[idx], plan.lambda_star]
        for idx in range(n)
    ]
    return header, rows


def cmd_queueing(cfg):
    if "queueing" not in cfg:
        raise ConfigError("config.queueing: missing queueing descriptor")
    try:
        qspec = queue_network_from_json(cfg["queueing"])
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"config.queueing: {exc}") from exc
    components, k = to_rmab(qspec)
    sub = dict(cfg)
    sub["components"] = [component_to_json(c) for c in components]
    sub["K"] = k
    submode = cfg.get("queueing_mode", "simulate")
    dispatch = {"simulate": cmd_simulate, "oracle": cmd_oracle, "evaluate": cmd_evaluate}
    if submode not in dispatch:
        raise ConfigError(
            f"config.queueing_mode: expected simulate|oracle|evaluate, got {submode!r}"
        )
    return dispatch[submode](sub)


COMMANDS = {
    "index": cmd_index,
    "simulate": cmd_simulate,
    "evaluate": cmd_evaluate,
    "oracle": cmd_oracle,
    "subsidy": cmd_subsidy,
    "queueing": cmd_queueing,
}


def _load_config(args) -> dict:
    if args.preset is not None and args.config is not None:
        raise ConfigError("give either --preset or --config, not both")
    if args.preset is not None:
        if args.preset not in PRESETS:
            raise ConfigError(f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}")
        cfg = copy.deepcopy(PRESETS[args.preset])
    elif args.config is not None:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config} is not valid JSON: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError(f"{args.config}: top-level JSON value must be an object")
    else:
        raise ConfigError("a --preset or --config is required")
    for field in ("seed", "replications", "horizon"):
        override = getattr(args, field)
        if override is not None:
            cfg[field] = override
    cfg.setdefault("seed", 0)
    cfg.setdefault("replications", 1)
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="probesched",
        description="Index-policy probe scheduling: indices, simulation, exact oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON experiment config")
        p.add_argument("--preset", help="built-in preset: fig2 | fig3 | fig4")
        p.add_argument("--seed", type=int)
        p.add_argument("--replications", type=int)
        p.add_argument("--horizon", type=int)
        p.add_argument("--out", help="output CSV path (default: stdout)")
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
        header, rows = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SearchSpaceError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    _write_csv(args.out, header, rows)
    return 0


def console_main():
    raise SystemExit(main())
