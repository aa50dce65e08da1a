"""Command-line front end: eval, verify, scan, casimir.

Complex literals follow  [-]ddd[.ddd][(+|-)ddd[.ddd]i]  with no spaces,
e.g. 1.5, -0.25, 1.0326+0i, 0.3-1.25i.

Exit codes: 0 success, 1 a verification failed, 2 bad input (parse error,
bad flag value, b outside (0,1)), 3 evaluation domain error (pole, branch cut).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import GbError, NearDegenerateWarning
from .qdilog import BParams, eval_Gb, eval_gb, make_params

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2, 3

_COMPLEX_RE = re.compile(r"^(-?\d+(?:\.\d+)?)(?:([+-]\d+(?:\.\d+)?)i)?$")


class InputError(ValueError):
    pass


def parse_complex(s: str) -> complex:
    m = _COMPLEX_RE.match(s.strip()) if isinstance(s, str) else None
    if m is None:
        raise InputError(f"not a complex literal: {s!r} (expected e.g. 1.5, -2, 0.3-1.25i)")
    return complex(float(m.group(1)), float(m.group(2)) if m.group(2) else 0.0)


def parse_real(s: str) -> float:
    z = parse_complex(s)
    if z.imag != 0:
        raise InputError(f"expected a real number, got {s!r}")
    return z.real


def parse_tol(s: str) -> float:
    # tolerances are plain floats, exponents allowed
    try:
        v = float(s)
    except ValueError:
        raise InputError(f"not a tolerance: {s!r}")
    if not math.isfinite(v):
        raise InputError(f"not a tolerance: {s!r}")
    return v


def fmt(x: float) -> str:
    return format(float(x), ".15g")


def fmt_complex(z: complex) -> str:
    z = complex(z)
    im = fmt(abs(z.imag))
    return f"{fmt(z.real)}{'-' if math.copysign(1, z.imag) < 0 else '+'}{im}i"


# ---------------------------------------------------------------------------
# configuration


@dataclass
class CliConfig:
    b: float = 0.775
    tol: Optional[float] = None
    suites: List[str] = field(default_factory=lambda: ["all"])
    out: Optional[str] = None
    format: str = "json"
    seed: int = 0

    def validate(self) -> "CliConfig":
        if not (0 < self.b < 1):
            raise InputError(f"DomainError: b must lie in (0, 1), got {self.b}")
        if self.tol is not None and not self.tol > 0:
            raise InputError(f"tol must be positive, got {self.tol}")
        if self.format not in ("json", "csv", "text"):
            raise InputError(f"format must be text, json or csv, got {self.format!r}")
        return self


def read_config_file(path: str) -> Dict[str, str]:
    """Plain "key = value" lines; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{n}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def build_config(args) -> CliConfig:
    file_vals = read_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(name, conv, default):
        v = getattr(args, name, None)
        if v is not None:
            return conv(v) if isinstance(v, str) else v
        if name in file_vals:
            return conv(file_vals[name])
        return default

    suites = pick("suite", lambda s: [x for x in re.split(r"[,\s]+", s) if x], ["all"])
    try:
        seed = pick("seed", int, 0)
    except ValueError:
        raise InputError("seed must be an integer")
    cfg = CliConfig(b=pick("b", parse_real, 0.775), tol=pick("tol", parse_tol, None),
                    suites=suites, out=pick("out", str, None) or pick("report", str, None),
                    format=pick("format", str, "json"), seed=seed)
    return cfg.validate()


def params_for(b: float) -> BParams:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearDegenerateWarning)
        return make_params(b)


# ---------------------------------------------------------------------------
# eval


def _sb_shifted(z, p):
    z = np.asarray(z, complex)
    return eval_Gb(z, p, core_shift=1) * np.exp(-0.5j * math.pi * z * (z - p.Q))


def evaluate(function: str, args, p: BParams):
    """(value, err_estimate); the estimate compares two evaluation routes."""
    from . import representation as rep
    from .qdilog import eval_Sb
    from .special import FbArgs, eval_Fb, fb_heights

    need = lambda name: _need(args, name)
    if function == "gb":
        z = parse_complex(need("z"))
        v = eval_Gb(z, p)
        return v, abs(complex(eval_Gb(z, p, core_shift=1)) - v)
    if function == "sb":
        z = parse_complex(need("z"))
        v = eval_Sb(z, p)
        return v, abs(complex(_sb_shifted(z, p)) - v)
    if function == "g_small":
        x = parse_complex(need("x"))
        v = eval_gb(x, p)
        arg = p.Q / 2 + np.log(complex(x)) / (2j * math.pi * p.b)
        alt = p.zeta_bar / complex(eval_Gb(arg, p, core_shift=1))
        return v, abs(alt - v)
    if function == "phi":
        lam, x = parse_real(need("lam")), parse_complex(need("x"))
        v = rep.eval_Phi(lam, x, p)
        alt = complex(_sb_shifted(-1j * x + 1j * lam, p) * _sb_shifted(-1j * x - 1j * lam, p))
        return v, abs(alt - v)
    if function == "fb":
        fa = FbArgs(parse_complex(need("alpha")), parse_complex(need("beta")),
                    parse_complex(need("gamma")), parse_complex(need("z")))
        v = eval_Fb(fa, p)
        lo, hi = fb_heights(fa, p)
        alt = eval_Fb(fa, p, height=lo + 0.3 * (hi - lo))
        return v, abs(alt - v)
    if function == "plancherel":
        lam = parse_real(need("lam"))
        v = rep.plancherel_density(lam, p, convention=args.convention)
        direct = rep.plancherel_measure_direct(lam, p) if args.convention == "measure" else v
        return v, abs(direct - v)
    raise InputError(f"unknown function {function!r}")


def _need(args, name):
    v = getattr(args, name, None)
    if v is None:
        flag = "--lambda" if name == "lam" else f"--{name}"
        raise InputError(f"{flag} is required for this function")
    return v


def cmd_eval(args, stdout) -> int:
    cfg = build_config(args)
    p = params_for(cfg.b)
    try:
        v, err = evaluate(args.function, args, p)
    except InputError:
        raise
    except GbError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    if cfg.format == "json":
        z = complex(v)
        json.dump({"function": args.function, "value": [z.real, z.imag], "abs": abs(z),
                   "err_estimate": float(err), "b": cfg.b}, stdout, sort_keys=True)
        stdout.write("\n")
    else:
        isreal = isinstance(v, float)
        val = fmt(v) if isreal else fmt_complex(v)
        stdout.write(f"value={val} abs={fmt(abs(v))} err_estimate={float(err):.3g}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, list):
        return [_finite(y) for y in x]
    if isinstance(x, dict):
        return {k: _finite(v) for k, v in x.items()}
    return x


def run_suites(cfg: CliConfig, threads: Optional[int] = None) -> List[dict]:
    from .identities import make_report
    from .suites import select

    try:
        chosen = select(cfg.suites)
    except KeyError as e:
        raise InputError(f"unknown suite {e.args[0]!r}")
    p = params_for(cfg.b)
    n = threads or int(os.environ.get("QDILOG_THREADS", "0") or 0) or min(4, os.cpu_count() or 1)

    def job(s):
        tol = cfg.tol if cfg.tol is not None else s.tol
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NearDegenerateWarning)
            try:
                reps = s.run(p, cfg.seed, tol)
            except GbError as e:
                r = make_report(s.name, {"error": f"{type(e).__name__}: {e}"}, 1.0, 0.0, tol)
                r.passed = False
                reps = [r]
        out = []
        for r in reps:
            d = r.to_json()
            d["params"]["suite"] = s.name
            out.append(_finite(d))
        return out

    with ThreadPoolExecutor(max_workers=max(1, n)) as ex:
        results = list(ex.map(job, chosen))
    flat = [d for chunk in results for d in chunk]
    flat.sort(key=lambda d: (d["name"], json.dumps(d["params"], sort_keys=True)))
    return flat


def render_report(entries: List[dict], fmt_: str) -> str:
    if fmt_ == "json":
        return json.dumps(entries, sort_keys=True, indent=1, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "name", "params", "abs_err", "rel_err", "pass"])
    for d in entries:
        w.writerow([d["params"]["suite"], d["name"], json.dumps(d["params"], sort_keys=True),
                    d["abs_err"], d["rel_err"], d["pass"]])
    return buf.getvalue()


def cmd_verify(args, stdout) -> int:
    cfg = build_config(args)
    entries = run_suites(cfg)
    text = render_report(entries, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    failed = [d for d in entries if not d["pass"]]
    suites = sorted({d["params"]["suite"] for d in entries})
    print(f"{len(entries) - len(failed)}/{len(entries)} checks passed across {len(suites)} suites",
          file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# scan


def parse_range(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise InputError(f"grid spec must be a:b:step, got {spec!r}")
    a, b, step = (parse_real(s) for s in parts)
    if not step > 0 or b < a:
        raise InputError(f"grid spec needs a ≤ b and step > 0, got {spec!r}")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(n)


def cmd_scan(args, stdout) -> int:
    cfg = build_config(args)
    p = params_for(cfg.b)
    re_ax, im_ax = parse_range(args.re), parse_range(args.im)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "abs", "arg"])
    for y in im_ax:
        for x in re_ax:
            z = complex(x, y)
            ns = argparse.Namespace(**vars(args))
            key = "x" if args.function in ("g_small", "phi") else "z"
            setattr(ns, key, fmt_complex(z))
            try:
                v, _ = evaluate(args.function, ns, p)
                v = complex(v)
                w.writerow([fmt(x), fmt(y), fmt(abs(v)), fmt(math.atan2(v.imag, v.real))])
            except GbError:
                w.writerow([fmt(x), fmt(y), "", ""])
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        stdout.write(buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------------------
# casimir


def cmd_casimir(args, stdout) -> int:
    from . import representation as rep

    cfg = build_config(args)
    p = params_for(cfg.b)
    lam = parse_real(args.lam) if args.lam is not None else 0.4
    t = parse_real(args.t) if args.t is not None else 0.0
    f = rep.WFunction.gaussian(1.0, 0.2)
    pts = np.linspace(-2, 2, 10)
    mean, var = rep.casimir_apply(lam, t, f, pts, p)
    closed = rep.casimir_scalar(lam, p)
    serre = rep.check_serre_relations(lam, t, f, pts, p)
    out = {"lambda": lam, "t": t, "b": cfg.b,
           "casimir_mean": [mean.real, mean.imag], "casimir_variance": var,
           "casimir_closed_form": [closed.real, closed.imag],
           "relation_residuals": {k: v for k, v in serre.params.items() if k not in ("lambda", "t", "b")}}
    stdout.write(json.dumps(out, sort_keys=True, indent=1) + "\n")
    return EXIT_OK if serre.passed and var < 1e-10 else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing


def _common(sp, formats=("json", "csv")):
    sp.add_argument("--b", help="deformation parameter in (0,1) (default 0.775)")
    sp.add_argument("--tol", help="override every suite tolerance")
    sp.add_argument("--seed", help="seed for random sample points (default 0)")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.add_argument("--report", help="JSON report path (alias of --out)")
    sp.add_argument("--format", choices=list(formats), help="output format")
    sp.add_argument("--config", help="file of 'key = value' lines; flags override it")


def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES

    ap = argparse.ArgumentParser(prog="gbdilog", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate a function at a point")
    e.add_argument("function", choices=["gb", "sb", "g_small", "phi", "fb", "plancherel"])
    for name in ("z", "x", "alpha", "beta", "gamma"):
        e.add_argument(f"--{name}")
    e.add_argument("--lambda", dest="lam")
    e.add_argument("--convention", choices=["measure", "printed"], default="measure",
                   help="plancherel: 4sinh(2πbλ)sinh(2πλ/b) (measure) or the printed 4sinh(πbλ)sinh(πλ/b)")
    _common(e, ("text", "json"))
    e.set_defaults(func=cmd_eval)

    names = ", ".join(f"{n}{'' if s.in_all else '*'}" for n, s in SUITES.items())
    v = sub.add_parser("verify", help="run identity suites",
                       description=f"suites: {names}; 'all' runs every suite not marked *")
    v.add_argument("--suite", help="comma-separated suite names or 'all'")
    _common(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="evaluate on a grid and write CSV re,im,abs,arg")
    s.add_argument("function", choices=["gb", "sb", "g_small", "phi"])
    s.add_argument("--re", required=True, help="a:b:step (use --re=-1:1:0.5 for a negative start)")
    s.add_argument("--im", required=True, help="a:b:step (use --im=-1:1:0.5 for a negative start)")
    s.add_argument("--lambda", dest="lam", help="λ for phi")
    _common(s)
    s.set_defaults(func=cmd_scan)

    c = sub.add_parser("casimir", help="principal-series probes at one (λ, t)")
    c.add_argument("--lambda", dest="lam")
    c.add_argument("--t")
    _common(c)
    c.set_defaults(func=cmd_casimir)
    return ap


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "eval" and args.format is None:
        args.format = "text"
    if args.command == "scan" and args.format not in (None, "csv"):
        print("scan writes CSV only", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args, stdout)
    except InputError as e:
        print(str(e), file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(str(e), file=sys.stderr)
        return EXIT_INPUT


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
