"""Command-line front end.

Exit codes: 0 success, 1 error, 2 when ``certify --expect-violation`` finds no violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from . import catalog
from .engine import CertificationVerdict, ThresholdReport, certify, one_way_threshold, threshold
from .errors import InvalidParameter, SteerkitError
from .linalg import expectation
from .model import FullOperatorSpec, LsiSpec
from .objects import FAMILIES, StateSpec, make_state
from .scan import critical_visibility, haar_expectation_mc, scan_ratio
from .serialize import load_spec, validate

STATE_NAMES = [f for f in FAMILIES if f != "custom"]


@dataclass
class RunRequest:
    command: str
    entry: str | None = None
    spec: str | None = None
    params: dict = field(default_factory=dict)
    state: str | None = None
    output: str = "text"
    seed: int | None = None
    samples: int = 100_000
    range: tuple | None = None
    points: int = 101
    scan_param: str | None = None
    constraint: str | None = None
    mode: str = "auto"
    expect_violation: bool = False
    critical: bool = False

    def echo(self) -> dict:
        out = {"command": self.command, "entry": self.entry, "spec": self.spec, "params": dict(self.params),
               "state": self.state, "seed": self.seed}
        if self.command == "scan":
            out.update(range=list(self.range) if self.range else None, points=self.points, scan_param=self.scan_param)
        if self.command == "haar":
            out.update(samples=self.samples, constraint=self.constraint)
        return out


def _parse_value(text: str):
    try:
        v = float(text)
    except ValueError:
        return text
    return int(v) if v.is_integer() and "." not in text and "e" not in text.lower() else v


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise InvalidParameter(f"--param expects k=v, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = _parse_value(v.strip())
    return out


def _parse_range(text):
    if text is None:
        return None
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise InvalidParameter(f"--range expects lo:hi, got {text!r}") from None
    return lo, hi


def _state_spec(name, params) -> StateSpec:
    if name not in STATE_NAMES:
        raise InvalidParameter(f"unknown state {name!r}; choose from {', '.join(STATE_NAMES)}")
    return StateSpec(name, {k: v for k, v in params.items() if isinstance(v, (int, float))})


# -- result encoding -----------------------------------------------------------------


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else str(x)


def threshold_to_dict(rep: ThresholdReport) -> dict:
    return {
        "mode": rep.mode,
        "beta_overall": _num(rep.beta_overall),
        "gamma_overall": _num(rep.gamma_overall),
        "per_direction": {
            k: {
                "beta": _num(t.beta),
                "gamma": _num(t.gamma),
                "n_strategies": t.n_strategies,
                "argmax_strategy": t.argmax_strategy.as_dict(),
                "argmin_strategy": t.argmin_strategy.as_dict(),
            }
            for k, t in rep.per_direction.items()
        },
    }


def verdict_to_dict(v: CertificationVerdict) -> dict:
    return {"expectation": _num(v.expectation), "beta": _num(v.beta), "gamma": _num(v.gamma),
            "violated": v.violated, "margin": _num(v.margin)}


def _point(p) -> dict:
    return {"param": _num(p.param), "expectation": _num(p.expectation), "threshold": _num(p.threshold),
            "ratio": _num(p.ratio)}


def _reference(e: catalog.CatalogEntry) -> dict:
    return {"beta": _num(e.reference_beta), "gamma": _num(e.reference_gamma),
            "direction_beta": {k: _num(v) for k, v in e.direction_beta.items()}, "notes": e.notes}


# -- commands ----------------------------------------------------------------------------


def _entry(req: RunRequest) -> catalog.CatalogEntry:
    if not req.entry:
        raise InvalidParameter("--entry is required")
    return catalog.build(req.entry, **req.params)


def _spec_threshold(spec, mode) -> dict:
    if isinstance(spec, LsiSpec):
        t = one_way_threshold(spec)
        rep = ThresholdReport({t.direction: t}, t.beta, t.gamma, "one-way")
        return threshold_to_dict(rep)
    return threshold_to_dict(threshold(spec, mode))


def cmd_threshold(req: RunRequest) -> dict:
    if req.spec:
        return {"threshold": _spec_threshold(load_spec(req.spec), req.mode)}
    e = _entry(req)
    out = {"entry": e.name, "entry_params": {k: _num(v) if not isinstance(v, str) else v
                                             for k, v in e.params.items() if v is not None},
           "reference": _reference(e)}
    if e.spec is None:
        out["threshold"] = {"mode": "analytic", "beta_overall": _num(e.reference_beta),
                            "gamma_overall": _num(e.reference_gamma), "per_direction": {}}
    else:
        mode = e.threshold_mode if req.mode == "auto" else req.mode
        out["threshold"] = threshold_to_dict(threshold(e.spec, mode))
    return out


def _haar_constraint(req, state: StateSpec) -> str:
    if req.constraint:
        return req.constraint
    return "conjugate" if state.family in ("isotropic", "max-entangled") else "plain"


def cmd_certify(req: RunRequest) -> dict:
    if req.spec:
        spec = load_spec(req.spec)
        if not isinstance(spec, FullOperatorSpec):
            raise InvalidParameter("certify needs a full operator spec")
        if not req.state:
            raise InvalidParameter("--state is required with --spec")
        st = _state_spec(req.state, req.params)
        return {"verdict": verdict_to_dict(certify(spec, st, mode=req.mode)), "state": st.to_dict()}
    e = _entry(req)
    if req.state:
        st = _state_spec(req.state, req.params)
    elif e.optimal_state is not None:
        st = e.optimal_state
    else:
        raise InvalidParameter(f"{e.name} has no default state; pass --state")
    if e.spec is None:
        # continuous-setting entry: exact averaged operator against analytic bounds
        c = _haar_constraint(req, st)
        val = expectation(e.extras["operator"](c), make_state(st))
        beta, gamma = e.reference_beta, e.reference_gamma
        up, low = val - beta, gamma - val
        v = CertificationVerdict(val, beta, gamma, up > 1e-9 or low > 1e-9, max(up, low))
        return {"verdict": verdict_to_dict(v), "state": st.to_dict(), "constraint": c, "reference": _reference(e)}
    rep = threshold(e.spec, e.threshold_mode)
    v = certify(e.spec, st, threshold_report=rep)
    return {"verdict": verdict_to_dict(v), "state": st.to_dict(), "reference": _reference(e),
            "threshold": threshold_to_dict(rep)}


def _scan_param(req) -> str:
    if req.scan_param:
        return req.scan_param
    _, defaults = catalog.REGISTRY[req.entry]
    free = [k for k, v in defaults.items() if not isinstance(v, str) and k not in catalog.INT_PARAMS]
    if len(free) == 1:
        return free[0]
    if req.entry == "ghz-gd":
        return "omega"
    raise InvalidParameter(f"{req.entry}: choose the scanned parameter with --scan-param")


def cmd_scan(req: RunRequest) -> dict:
    if not req.entry:
        raise InvalidParameter("scan needs --entry")
    name = _scan_param(req)
    lo, hi = req.range or (0.0, 1.0)
    base = {k: v for k, v in req.params.items() if k != name}

    def builder(x):
        return catalog.build(req.entry, **{**base, name: x})

    if req.critical:
        vc, res = critical_visibility(builder, lo, hi, req.points, int(req.params.get("N", 3)))
        out = _scan_dict(dataclasses.replace(res, param_name=name))
        out["critical_visibility"] = _num(vc)
        return out
    if not req.state:
        raise InvalidParameter("scan needs --state")
    if req.state not in STATE_NAMES:
        raise InvalidParameter(f"unknown state {req.state!r}")
    tracks = name in FAMILIES[req.state]

    def state(x):
        p = dict(req.params)
        if tracks:
            p[name] = x
        return _state_spec(req.state, p)

    res = scan_ratio(builder, state if tracks else state(None), lo, hi, req.points, param_name=name)
    return _scan_dict(res)


def _scan_dict(res) -> dict:
    return {"param": res.param_name or None, "best": _point(res.best), "refined_best": _point(res.refined_best),
            "grid": [_point(p) for p in res.grid]}


def cmd_haar(req: RunRequest) -> dict:
    if not req.state:
        raise InvalidParameter("haar needs --state")
    st = _state_spec(req.state, req.params)
    d = int(req.params.get("d", 2))
    c = _haar_constraint(req, st)
    est = haar_expectation_mc(st, d, c, req.samples, req.seed or 0)
    exact = expectation(catalog.haar_operator(d, c), make_state(st))
    return {"mean": _num(est.mean), "std_error": _num(est.std_error), "samples": est.samples, "seed": est.seed,
            "constraint": c, "exact": _num(exact),
            "reference": {"beta": _num(catalog.harmonic(d) / d), "gamma": _num(1 / d**2)}}


def cmd_list(req: RunRequest) -> dict:
    out = []
    for name, (_, defaults) in catalog.REGISTRY.items():
        e = catalog.build(name)
        out.append({"name": name, "params": sorted(defaults), "mode": e.threshold_mode,
                    "reference_beta": _num(e.reference_beta), "notes": e.notes})
    return {"entries": out}


COMMANDS = {"threshold": cmd_threshold, "certify": cmd_certify, "scan": cmd_scan, "haar": cmd_haar, "list": cmd_list}


def run(req: RunRequest) -> tuple[dict, int]:
    t0 = time.perf_counter()
    results = COMMANDS[req.command](req)
    code = 0
    if req.command == "certify" and req.expect_violation and not results["verdict"]["violated"]:
        code = 2
    report = {"request": req.echo(), "results": results,
              "timing_ms": (time.perf_counter() - t0) * 1000.0, "version": __version__, "exit_code": code}
    validate(report, "report")
    return report, code


# -- text rendering ------------------------------------------------------------------


def _fmt(x):
    return f"{x:.10g}" if isinstance(x, float) else str(x)


def render_text(report: dict) -> str:
    req, res = report["request"], report["results"]
    lines = [f"steerkit {report['version']}  {req['command']}" + (f"  {req['entry']}" if req.get("entry") else "")]
    if "entries" in res:
        for e in res["entries"]:
            lines.append(f"  {e['name']:<13} mode={e['mode']:<9} beta_ref={_fmt(e['reference_beta'])}  {e['notes']}")
    if "threshold" in res:
        t = res["threshold"]
        lines.append(f"  beta = {_fmt(t['beta_overall'])}   gamma = {_fmt(t['gamma_overall'])}   ({t['mode']})")
        for k, d in t["per_direction"].items():
            lines.append(f"    {k:<10} beta={_fmt(d['beta'])} gamma={_fmt(d['gamma'])} strategies={d['n_strategies']}")
    if "reference" in res and "notes" in res["reference"]:
        r = res["reference"]
        lines.append(f"  reference beta = {_fmt(r['beta'])}  gamma = {_fmt(r['gamma'])}  [{r['notes']}]")
    if "verdict" in res:
        v = res["verdict"]
        lines.append(f"  <H> = {_fmt(v['expectation'])}  violated = {v['violated']}  margin = {_fmt(v['margin'])}")
    if "refined_best" in res:
        b = res["refined_best"]
        lines.append(f"  best {res['param']} = {_fmt(b['param'])}  R = {_fmt(b['ratio'])}")
        if "critical_visibility" in res:
            lines.append(f"  critical visibility = {_fmt(res['critical_visibility'])}")
    if "std_error" in res:
        lines.append(f"  mean = {_fmt(res['mean'])} +- {_fmt(res['std_error'])}  exact = {_fmt(res['exact'])}  "
                     f"({res['samples']} samples, seed {res['seed']}, {res['constraint']})")
    lines.append(f"  [{report['timing_ms']:.1f} ms]")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steerkit", description="Linear steering inequality thresholds and certification")
    p.add_argument("--version", action="version", version=f"steerkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--entry", help="catalog entry name")
        sp.add_argument("--spec", help="path to a JSON spec")
        sp.add_argument("--param", action="append", default=[], metavar="K=V",
                        help="entry or state parameter (repeatable)")
        sp.add_argument("--state", help="state family: " + ", ".join(STATE_NAMES))
        sp.add_argument("--output", choices=["text", "json"], default="text")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--mode", choices=["auto", "two-way", "gmst", "symmetric"], default="auto")

    for name in ("threshold", "certify", "scan", "haar", "list"):
        sp = sub.add_parser(name)
        common(sp)
        if name == "certify":
            sp.add_argument("--expect-violation", action="store_true")
            sp.add_argument("--constraint", choices=["plain", "conjugate"])
        if name == "scan":
            sp.add_argument("--range", default="0:1", metavar="LO:HI")
            sp.add_argument("--points", type=int, default=101)
            sp.add_argument("--scan-param")
            sp.add_argument("--critical", action="store_true", help="solve for the critical noisy-GHZ visibility")
        if name == "haar":
            sp.add_argument("--samples", type=int, default=100_000)
            sp.add_argument("--constraint", choices=["plain", "conjugate"])
    return p


def request_from_args(ns) -> RunRequest:
    if ns.seed is not None and ns.seed < 0:
        raise InvalidParameter("--seed must be non-negative")
    return RunRequest(
        command=ns.command, entry=ns.entry, spec=ns.spec, params=_parse_params(ns.param), state=ns.state,
        output=ns.output, seed=ns.seed, samples=getattr(ns, "samples", 100_000),
        range=_parse_range(getattr(ns, "range", None)), points=getattr(ns, "points", 101),
        scan_param=getattr(ns, "scan_param", None), constraint=getattr(ns, "constraint", None), mode=ns.mode,
        expect_violation=getattr(ns, "expect_violation", False), critical=getattr(ns, "critical", False),
    )


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        req = request_from_args(ns)
        report, code = run(req)
    except (SteerkitError, OSError, KeyError) as e:
        print(f"steerkit: error: {e}", file=sys.stderr)
        return 1
    if req.output == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
