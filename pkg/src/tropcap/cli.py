"""Command-line entry point.

Exit status: 0 when every verdict passes, 1 when some property fails (the
report is still written), 2 on malformed input or invalid arguments.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from ._backend import BACKEND
from .blackbox import expression_functional
from .capacities import Capacity, SpaceMap, load_capacity, random_capacity, random_map
from .category import monad_law_harness, naturality_check
from .errors import TropcapError
from .functionals import Functional, property_report
from .integrals import (choquet_integral, maxplus_integral, maxplus_integral_grid_oracle,
                        sugeno_integral)
from .representation import (integral_functional, maxitivity_witness, reconstruct_capacity,
                             roundtrip_check)
from .space import FiniteSpace, RealFunction

COMMANDS = ("integrate", "reconstruct", "roundtrip", "properties", "witness", "naturality",
            "monad-laws", "compare-integrals")
RANDOMIZED = {"properties", "naturality", "monad-laws"}


class UsageError(TropcapError):
    kind = "usage"


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    seed: int | None = None
    trials: int = 1000
    tol: float = 1e-9
    size: int | None = None
    codomain: int | None = None
    out: str | None = None
    exhaustive: bool = False
    max_supports: int = 4

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.trials < 1:
            raise UsageError("--trials must be at least 1")


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise TropcapError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc
    except OSError as exc:
        raise TropcapError(f"{path}: {exc.strerror}") from exc


def _load_typed(data):
    """Dispatch a parsed JSON document to the object it describes."""
    if isinstance(data, list):
        return RealFunction.from_json(data)
    if isinstance(data, dict):
        if "expression" in data:
            if "size" not in data:
                raise TropcapError('a black-box functional file needs "size"')
            return expression_functional(FiniteSpace(data["size"]), str(data["expression"]))
        if "capacity" in data:
            return load_capacity(data["capacity"])
        if "values" in data:
            return load_capacity(data)
        if "image" in data:
            return SpaceMap.from_json(data)
    raise TropcapError("unrecognized input document")


def _inputs(cfg: RunConfig, *kinds):
    if len(cfg.inputs) != len(kinds):
        names = " and ".join(k.__name__ for k in kinds)
        raise UsageError(f"{cfg.command} needs --in for {names}")
    objs = []
    for path, kind in zip(cfg.inputs, kinds):
        obj = _load_typed(_read_json(path))
        if kind is RealFunction and isinstance(obj, RealFunction):
            pass
        elif kind is Functional and isinstance(obj, Capacity):
            obj = integral_functional(obj)
        elif not isinstance(obj, kind):
            raise TropcapError(f"{path}: expected a {kind.__name__}, got {type(obj).__name__}")
        objs.append(obj)
    return objs


def _function_on(c: Capacity, phi: RealFunction) -> RealFunction:
    if phi.space.size != c.space.size:
        raise TropcapError(
            f"function has {phi.space.size} values but the capacity lives on {c.space.size} points")
    return RealFunction(c.space, phi.values)


def _report(cfg, verdicts, max_deviation=None, **extra):
    return {
        "command": cfg.command,
        "verdicts": verdicts,
        "witnesses": [v["witness"] for v in verdicts if v.get("witness") is not None],
        "max_deviation": max_deviation,
        "seed": cfg.seed,
        **extra,
    }


def _cmd_integrate(cfg):
    c, phi = _inputs(cfg, Capacity, RealFunction)
    phi = _function_on(c, phi)
    return _report(cfg, [], value=maxplus_integral(c, phi))


def _cmd_compare(cfg):
    c, phi = _inputs(cfg, Capacity, RealFunction)
    phi = _function_on(c, phi)
    values = {"max-plus": maxplus_integral(c, phi), "choquet": choquet_integral(c, phi)}
    notes = []
    if phi.min() >= 0.0 and phi.max() <= 1.0:
        values["sugeno"] = sugeno_integral(c, phi)
    else:
        notes.append("sugeno omitted: the function leaves [0, 1]")
    values["max-plus-grid-oracle"] = maxplus_integral_grid_oracle(c, phi, 1e-4)
    return _report(cfg, [], values=values, notes=notes)


def _cmd_reconstruct(cfg):
    (I,) = _inputs(cfg, Functional)
    c = reconstruct_capacity(I, tol=cfg.tol)
    return _report(cfg, [], capacity=c.to_json())


def _cmd_roundtrip(cfg):
    if cfg.inputs:
        (c,) = _inputs(cfg, Capacity)
        caps = [c]
    else:
        if cfg.seed is None:
            raise UsageError("roundtrip over random capacities needs an explicit --seed")
        space = FiniteSpace(cfg.size or 4)
        rng = np.random.default_rng(cfg.seed)
        caps = [random_capacity(space, rng) for _ in range(cfg.trials)]
    devs = np.array([roundtrip_check(c, cfg.tol) for c in caps])
    worst = int(np.argmax(devs))
    ok = bool(devs[worst] < cfg.tol)
    verdict = {"name": "roundtrip", "passed": ok, "samples": len(caps),
               "max_deviation": float(devs[worst]),
               "witness": None if ok else {"trial": worst, "capacity": caps[worst].to_json()}}
    return _report(cfg, [verdict], float(devs[worst]))


def _cmd_properties(cfg):
    (I,) = _inputs(cfg, Functional)
    rep = property_report(I, trials=cfg.trials, seed=cfg.seed, tol=cfg.tol,
                          exhaustive=cfg.exhaustive)
    verdicts = [v.to_json() for v in rep.verdicts.values()]
    # full maxitivity is informational, not an axiom
    for v in verdicts:
        v["axiom"] = v["name"] != "maxitive"
    gate = [v for v in verdicts if v["axiom"]]
    return _report(cfg, verdicts, max(v["max_deviation"] for v in gate),
                   mode=rep.mode, axioms_pass=rep.axioms_pass, maxitive=rep["maxitive"].passed,
                   _passed=rep.axioms_pass)


def _cmd_witness(cfg):
    (c,) = _inputs(cfg, Capacity)
    pair = maxitivity_witness(c)
    if pair is None:
        return _report(cfg, [], possibility=True, witness=None)
    phi, psi = pair
    I = integral_functional(c)
    gap = I(phi | psi) - max(I(phi), I(psi))
    return _report(cfg, [], possibility=False,
                   witness={"phi": phi.to_json(), "psi": psi.to_json(), "I(phi|psi)": I(phi | psi),
                            "I(phi)": I(phi), "I(psi)": I(psi), "gap": gap})


def _cmd_naturality(cfg):
    if cfg.inputs:
        c, f = _inputs(cfg, Capacity, SpaceMap)
        if c.space.size != f.domain.size:
            raise TropcapError("capacity and map domain sizes differ")
        f = SpaceMap(c.space, f.codomain, f.image)
        cases = [(c, f)]
    else:
        dom, cod = FiniteSpace(cfg.size or 4), FiniteSpace(cfg.codomain or 3)
        rng = np.random.default_rng(cfg.seed)
        cases = [(random_capacity(dom, rng), random_map(dom, cod, rng))]
    devs = [naturality_check(c, f, cfg.trials, cfg.seed) for c, f in cases]
    worst = max(devs)
    ok = worst < cfg.tol
    verdict = {"name": "naturality", "passed": ok, "samples": cfg.trials * len(cases),
               "max_deviation": worst,
               "witness": None if ok else {"capacity": cases[0][0].to_json(),
                                           "map": cases[0][1].to_json()}}
    return _report(cfg, [verdict], worst)


def _cmd_monad(cfg):
    space = FiniteSpace(cfg.size or 3)
    rep = monad_law_harness(space, cfg.seed, cfg.trials, cfg.max_supports, tol=min(cfg.tol, 1e-12))
    verdicts = [v.to_json() for v in rep.verdicts.values()]
    return _report(cfg, verdicts, max(v["max_deviation"] for v in verdicts))


_HANDLERS = {
    "integrate": _cmd_integrate,
    "compare-integrals": _cmd_compare,
    "reconstruct": _cmd_reconstruct,
    "roundtrip": _cmd_roundtrip,
    "properties": _cmd_properties,
    "witness": _cmd_witness,
    "naturality": _cmd_naturality,
    "monad-laws": _cmd_monad,
}


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns ``(exit status, report)``."""
    try:
        if cfg.command in RANDOMIZED and cfg.seed is None and not (
                cfg.command == "properties" and cfg.exhaustive):
            raise UsageError(f"{cfg.command} is randomized and needs an explicit --seed")
        report = _HANDLERS[cfg.command](cfg)
    except TropcapError as exc:
        return 2, {"command": cfg.command, **exc.to_dict()}
    passed = report.pop("_passed", None)
    if passed is None:
        passed = all(v["passed"] for v in report["verdicts"])
    return (0 if passed else 1), _clean(report)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tropcap",
        description="Capacities and the max-plus integral on finite spaces.")
    p.add_argument("command_pos", nargs="?", metavar="COMMAND", choices=COMMANDS,
                   help=", ".join(COMMANDS))
    p.add_argument("--command", dest="command_opt", choices=COMMANDS)
    p.add_argument("--in", dest="inputs", action="append", default=[], metavar="PATH",
                   help="input JSON file; repeat for commands taking two inputs ('-' for stdin)")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--size", type=int, help="space size for randomized commands")
    p.add_argument("--codomain", type=int, help="codomain size for random naturality maps")
    p.add_argument("--max-supports", type=int, default=4)
    p.add_argument("--exhaustive", action="store_true",
                   help="properties: exhaustive 5-value grid instead of sampling (size <= 3)")
    p.add_argument("--version", action="version",
                   version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command_opt or args.command_pos
    try:
        if command is None:
            raise UsageError("no command given")
        if args.command_opt and args.command_pos and args.command_opt != args.command_pos:
            raise UsageError("conflicting commands")
        cfg = RunConfig(command, args.inputs, args.seed, args.trials, args.tol, args.size,
                        args.codomain, args.out, args.exhaustive, args.max_supports)
    except TropcapError as exc:
        status, report = 2, {"command": command, **exc.to_dict()}
    else:
        status, report = run(cfg)
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if status == 2:
        print(f"tropcap: {report.get('message')}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
