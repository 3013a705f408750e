"""Command-line front end: ``oscdual <subcommand> ...``.

Every subcommand prints one JSON report

    {command, inputs, verdict, residuals, data, timings_ms}

and exits 0 on pass, 1 on a certified failure, 2 on input or usage errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import shlex
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import bryant, catalog
from .contact import SkewForm, find_contact_form, legendrian_check, standard_B
from .exactmath import PolyParseError, parse_poly, sort_variables
from .osculation import CertificateError, OsculationError, osculating_dual, selfdual_certificate
from .projective import DimensionMismatch, ParamVariety, ProjPoint

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
DEFAULT_MAX_DEGREE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunReport:
    command: str
    inputs: dict
    verdict: str = "pass"
    residuals: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    timings_ms: float = 0.0

    @property
    def exit_code(self) -> int:
        return {"pass": EXIT_PASS, "fail": EXIT_FAIL}.get(self.verdict, EXIT_ERROR)

    def to_dict(self) -> dict:
        inputs = dict(self.inputs)
        inputs["digest"] = input_digest(self.command, self.inputs)
        return {
            "command": self.command,
            "inputs": inputs,
            "verdict": self.verdict,
            "residuals": list(self.residuals),
            "data": self.data,
            "timings_ms": round(self.timings_ms, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def input_digest(command: str, inputs: dict) -> str:
    blob = json.dumps({"command": command, "inputs": inputs}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def max_degree() -> int:
    raw = os.environ.get("OSCDUAL_MAX_DEGREE", str(DEFAULT_MAX_DEGREE))
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"OSCDUAL_MAX_DEGREE must be an integer, got {raw!r}")
    if cap < 1:
        raise UsageError("OSCDUAL_MAX_DEGREE must be positive")
    return cap


def _check_degree(polys) -> None:
    cap = max_degree()
    for p in polys:
        if p.terms and max(sum(e) for e in p.terms) > cap:
            raise UsageError(f"polynomial {p} exceeds OSCDUAL_MAX_DEGREE = {cap}")


# input resolution

def _add_variety_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--catalog", metavar="NAME",
                     help="monomial:a,b,c | hypersurface:n:F | vfamily:k")
    src.add_argument("--variety", metavar="FILE", help="JSON file {params, coords, ambient_dim}")
    src.add_argument("--coords", nargs="+", metavar="POLY", help="coordinate polynomials")
    p.add_argument("--params", nargs="+", default=None, metavar="VAR",
                   help="parameter names for --coords (default: variables in use)")


def _add_form_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--form", default="auto", help="auto | standard | FILE (JSON {n, matrix})")


def resolve_variety(args) -> tuple[ParamVariety, dict]:
    if args.catalog:
        x = catalog.from_name(args.catalog)
        desc = {"catalog": args.catalog}
    elif args.variety:
        text = Path(args.variety).read_text()
        x = ParamVariety.from_json(text)
        desc = {"variety": x.to_dict()}
    else:
        polys = [parse_poly(c) for c in args.coords]
        if args.params:
            params = tuple(args.params)
        else:
            used = set()
            for q in polys:
                used.update(q.used_variables())
            params = tuple(sort_variables(used))
        if not params:
            raise UsageError("coordinates are constant; a variety needs parameters")
        x = ParamVariety(params, tuple(polys))
        desc = {"variety": x.to_dict()}
    _check_degree(x.coords)
    return x, desc


def resolve_form(spec: str, x: ParamVariety):
    """Return (form or None, description, search result or None)."""
    if spec == "auto":
        search = find_contact_form(x)
        return search.form, "auto", search
    if spec == "standard":
        if x.ambient_dim % 2 == 0:
            raise UsageError(f"no contact form on even-dimensional P^{x.ambient_dim}")
        return standard_B((x.ambient_dim + 1) // 2), "standard", None
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"form must be auto, standard or an existing file, got {spec!r}")
    form = SkewForm.from_json(path.read_text())
    if form.size != len(x.coords):
        raise UsageError(f"form of size {form.size} on variety in P^{x.ambient_dim}")
    return form, {"file": form.to_dict()}, None


def _strs(polys) -> list[str]:
    return [str(p) for p in polys]


def _point(values: list[str]) -> ProjPoint:
    return ProjPoint([parse_poly(v) for v in values])


# subcommands

def cmd_theta(args, report: RunReport) -> None:
    x, y = _point(args.x), _point(args.y)
    report.inputs.update(x=args.x, y=args.y)
    if x.ambient_dim != y.ambient_dim:
        raise UsageError("x and y must have the same length")
    p = bryant.IncidencePoint(x, y).check()
    z = bryant.theta_point(p)
    report.data = {"z": _strs(z.coords), "z_canonical": _strs(z.canonical().coords)}


def cmd_beta(args, report: RunReport) -> None:
    z = _point(args.z)
    report.inputs.update(z=args.z)
    p = bryant.beta_point(z)
    report.data = {"x": _strs(p.x.coords), "y": _strs(p.y.coords), "incidence": str(p.pairing())}
    if p.pairing().terms:
        report.verdict = "fail"
        report.residuals = [str(p.pairing())]


def cmd_conormal(args, report: RunReport) -> None:
    c, desc = resolve_variety(args)
    report.inputs.update(desc)
    lift = bryant.conormal_lift(c)
    report.data = {"gamma": _strs(lift.gamma), "ell": _strs(lift.ell), "is_line": lift.is_line}
    report.residuals = [str(r) for r in lift.incidence_residuals() if r.terms]
    if report.residuals:
        report.verdict = "fail"


def cmd_pushforward(args, report: RunReport) -> None:
    c, desc = resolve_variety(args)
    report.inputs.update(desc)
    lift = bryant.conormal_lift(c)
    pushed = bryant.theta_pushforward(lift)
    leg = legendrian_check(pushed, standard_B(2))
    report.data = {"coords": _strs(pushed.coords), "variety": pushed.to_dict(),
                   "legendrian_standard": leg.legendrian, "line_input": lift.is_line}
    report.residuals = [f"{k} = {v}" for k, v in leg.nonzero_residuals().items()]
    if report.residuals:
        report.verdict = "fail"


def cmd_genericity(args, report: RunReport) -> None:
    c, desc = resolve_variety(args)
    report.inputs.update(desc, lemma=args.lemma)
    result = bryant.genericity_A(c) if args.lemma == "A" else bryant.genericity_B(c)
    report.data = result.to_dict()
    report.residuals = [f"({h.index}) {h.witness or h.text}" for h in result.hypotheses if not h.passed]
    report.verdict = "pass" if result.passed else "fail"


def cmd_legendrian(args, report: RunReport) -> None:
    x, desc = resolve_variety(args)
    report.inputs.update(desc, form=args.form)
    form, _, search = resolve_form(args.form, x)
    if search is not None:
        report.data["solution_dim"] = search.solution_dim
        report.data["pfaffian"] = None if search.pfaffian is None else str(search.pfaffian)
    if form is None:
        report.verdict = "fail"
        report.residuals = [f"no nondegenerate contact form (solution dim {search.solution_dim})"]
        return
    report.data["form"] = form.to_dict()
    leg = legendrian_check(x, form)
    report.data["legendrian"] = leg.legendrian
    report.residuals = [f"{k} = {v}" for k, v in leg.nonzero_residuals().items()]
    if not leg.legendrian:
        report.verdict = "fail"
        if not report.residuals:
            report.residuals = [f"dimension {x.dim} is not {form.n - 1}"]


def _witness(name: str) -> dict:
    kind = name.split(":", 1)[0]
    if kind == "monomial":
        s = catalog.MonomialSpec(*map(int, name.split(":", 1)[1].split(",")))
        _, exps, m = catalog.monomial_dual_witness(s)
        return {"kind": "reversal", "exponent_curve": _strs(exps.coords), "map": m.to_lists(),
                "certified": catalog.certify_monomial_selfdual(s)}
    if kind == "vfamily":
        k = int(name.split(":", 1)[1])
        w = catalog.v_family_witness(k)
        return {"kind": "shear", "correction": str(w.correction), "map": w.map.to_lists(),
                "certified": catalog.certify_v_family_selfdual(k)}
    raise UsageError(f"no explicit witness for {name!r}; use monomial:* or vfamily:*")


def cmd_selfdual(args, report: RunReport) -> None:
    x, desc = resolve_variety(args)
    report.inputs.update(desc, form=args.form, witness=bool(args.witness))
    if args.witness:
        if not args.catalog:
            raise UsageError("--witness needs --catalog")
        w = _witness(args.catalog)
        report.data["witness"] = w
        report.data["selfdual"] = w["certified"]
        if not w["certified"]:
            report.verdict = "fail"
            report.residuals = ["witness map does not send the dual onto the variety"]
        return
    form, _, search = resolve_form(args.form, x)
    if form is None:
        report.verdict = "fail"
        report.data["selfdual"] = False
        report.residuals = [f"no nondegenerate contact form (solution dim {search.solution_dim})"]
        return
    report.data["form"] = form.to_dict()
    try:
        cert = selfdual_certificate(x, form)
    except CertificateError as e:
        report.verdict = "fail"
        report.data.update(selfdual=False, reason=e.reason)
        report.residuals = [str(e)]
        return
    report.data.update(cert.to_dict())
    report.data["dual"] = _strs(cert.dual.coords)
    report.data["polar"] = _strs(cert.polar)
    report.residuals = _strs(cert.residuals)
    if not cert.selfdual:
        report.verdict = "fail"


def cmd_dualize(args, report: RunReport) -> None:
    x, desc = resolve_variety(args)
    report.inputs.update(desc)
    dual = osculating_dual(x)
    report.data = {"coords": _strs(dual.coords), "variety": dual.to_dict()}


def cmd_degree(args, report: RunReport) -> None:
    if args.d is not None or args.g is not None:
        if args.d is None or args.g is None:
            raise UsageError("--d and --g go together")
        if args.catalog or args.variety or args.coords:
            raise UsageError("give either a variety or --d/--g, not both")
        report.inputs.update(d=args.d, g=args.g)
        e = bryant.expected_degrees(args.d, args.g)
        report.data = {"nodes": e.nodes, "dual_degree": e.dual_degree,
                       "legendrian_degree": e.legendrian_degree}
        return
    if not (args.catalog or args.variety or args.coords):
        raise UsageError("degree needs a variety or --d and --g")
    x, desc = resolve_variety(args)
    report.inputs.update(desc)
    report.data = {"degree": bryant.parametric_curve_degree(x)}


def cmd_catalog(args, report: RunReport) -> None:
    report.inputs.update(name=args.name, max_c=args.max_c, max_k=args.max_k)
    if args.name:
        x = catalog.from_name(args.name)
        report.data = {"name": args.name, "variety": x.to_dict()}
        return
    names = [f"monomial:{s.a},{s.b},{s.c}" for s in catalog.monomial_specs(args.max_c)]
    names += [f"vfamily:{k}" for k in range(2, args.max_k + 1)]
    report.data = {"entries": names}


def cmd_verify_pullback(args, report: RunReport) -> None:
    report.inputs.update(n=args.n)
    res = bryant.verify_pullback(args.n)
    report.data = {
        "pullback": {k: str(v) for k, v in res.pulled_back.items()},
        "theta_beta": not [r for r in bryant.theta_after_beta(args.n) if r.terms],
        "beta_theta": not bryant.beta_after_theta(args.n),
    }
    report.residuals = [f"dz{k[1:]}: {v}" for k, v in res.residuals.items() if v.terms]
    if not (res.ok and report.data["theta_beta"] and report.data["beta_theta"]):
        report.verdict = "fail"


COMMANDS = {
    "theta": cmd_theta,
    "beta": cmd_beta,
    "conormal": cmd_conormal,
    "pushforward": cmd_pushforward,
    "genericity": cmd_genericity,
    "legendrian": cmd_legendrian,
    "selfdual": cmd_selfdual,
    "dualize": cmd_dualize,
    "degree": cmd_degree,
    "catalog": cmd_catalog,
    "verify-pullback": cmd_verify_pullback,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oscdual", description="Osculating self-dual varieties, exactly.")
    parser.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    parser.add_argument("--suite", metavar="FILE",
                        help="run one invocation per line (or a JSON list of argument lists)")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for --suite")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("theta", help="theta map on an incidence point")
    p.add_argument("--x", nargs="+", required=True)
    p.add_argument("--y", nargs="+", required=True)
    p = sub.add_parser("beta", help="inverse map from P^{2n-1}")
    p.add_argument("--z", nargs="+", required=True)
    for name, help_ in (("conormal", "conormal lift of a plane curve"),
                        ("pushforward", "theta image of the conormal lift"),
                        ("dualize", "second osculating dual")):
        _add_variety_args(sub.add_parser(name, help=help_))
    p = sub.add_parser("genericity", help="general position hypotheses for a plane curve")
    _add_variety_args(p)
    p.add_argument("--lemma", choices=["A", "B"], required=True)
    p = sub.add_parser("legendrian", help="Legendrian check")
    _add_variety_args(p)
    _add_form_arg(p)
    p = sub.add_parser("selfdual", help="osculating self-duality certificate")
    _add_variety_args(p)
    _add_form_arg(p)
    p.add_argument("--witness", action="store_true",
                   help="certify through the explicit catalog witness map instead")
    p = sub.add_parser("degree", help="degree of a curve, or expected degrees from (d, g)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--catalog")
    src.add_argument("--variety")
    src.add_argument("--coords", nargs="+")
    p.add_argument("--params", nargs="+", default=None)
    p.add_argument("--d", type=int)
    p.add_argument("--g", type=int)
    p = sub.add_parser("catalog", help="list or show catalog entries")
    p.add_argument("--name")
    p.add_argument("--max-c", type=int, default=8)
    p.add_argument("--max-k", type=int, default=3)
    p = sub.add_parser("verify-pullback", help="check beta^* eta = omega")
    p.add_argument("--n", type=int, required=True)
    return parser


INPUT_ERRORS = (UsageError, PolyParseError, ValueError, KeyError, OSError, json.JSONDecodeError,
                DimensionMismatch, OsculationError, catalog.CatalogError, bryant.CenterError)


def _protect_negatives(argv: list[str]) -> list[str]:
    """All options are long, so a token like ``-t^3`` is a value, not a flag."""
    return [" " + a if len(a) > 1 and a[0] == "-" and a[1] != "-" and a != "-h" else a
            for a in argv]


def run_args(argv: list[str]) -> RunReport:
    """Execute one subcommand; never raises for user errors."""
    start = time.perf_counter()
    command = argv[0] if argv else ""
    report = RunReport(command, {"argv": list(argv)})
    try:
        args = build_parser().parse_args(_protect_negatives(argv))
        if args.suite:
            raise UsageError("--suite cannot be nested")
        if args.command is None:
            raise UsageError("missing subcommand")
        report.command = args.command
        COMMANDS[args.command](args, report)
    except INPUT_ERRORS as e:
        report.verdict = "error"
        report.residuals = [f"{type(e).__name__}: {e}"]
    report.timings_ms = (time.perf_counter() - start) * 1000
    return report


def _read_suite(path: str) -> list[list[str]]:
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("["):
        data = json.loads(text)
        return [shlex.split(item) if isinstance(item, str) else [str(a) for a in item]
                for item in data]
    lines = [ln.strip() for ln in text.splitlines()]
    out = []
    for ln in lines:
        if not ln or ln.startswith("#"):
            continue
        argv = shlex.split(ln)
        if argv and argv[0] == "oscdual":
            argv = argv[1:]
        out.append(argv)
    return out


def _run_for_pool(argv: list[str]) -> dict:
    r = run_args(argv)
    return r.to_dict()


def run_suite(path: str, jobs: int = 1) -> RunReport:
    start = time.perf_counter()
    invocations = _read_suite(path)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_for_pool, invocations))
    else:
        results = [_run_for_pool(argv) for argv in invocations]
    verdicts = [r["verdict"] for r in results]
    if "error" in verdicts:
        verdict = "error"
    elif "fail" in verdicts:
        verdict = "fail"
    else:
        verdict = "pass"
    report = RunReport("suite", {"suite": path, "invocations": [shlex.join(a) for a in invocations]})
    report.verdict = verdict
    report.residuals = [f"{shlex.join(a)}: {r['verdict']}" for a, r in zip(invocations, results)
                        if r["verdict"] != "pass"]
    report.data = {"results": results, "passed": verdicts.count("pass"), "total": len(results)}
    report.timings_ms = (time.perf_counter() - start) * 1000
    return report


def _split_global(argv: list[str]) -> tuple[dict, list[str]]:
    """Pull --out, --suite and --jobs from anywhere on the command line."""
    opts: dict = {"out": None, "suite": None, "jobs": 1}
    rest: list[str] = []
    i = 0
    while i < len(argv):
        a = argv[i]
        key = a[2:].split("=", 1)[0] if a.startswith("--") else None
        if key in opts:
            if "=" in a:
                value = a.split("=", 1)[1]
            else:
                if i + 1 >= len(argv):
                    raise UsageError(f"{a} needs a value")
                value = argv[i + 1]
                i += 1
            opts[key] = value
        else:
            rest.append(a)
        i += 1
    try:
        opts["jobs"] = int(opts["jobs"])
    except ValueError:
        raise UsageError("--jobs must be an integer")
    return opts, rest


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if "-h" in argv or "--help" in argv:
        try:
            build_parser().parse_args(argv)
        except (SystemExit, UsageError) as e:
            return int(getattr(e, "code", EXIT_ERROR) or 0)
    try:
        opts, rest = _split_global(argv)
        if opts["suite"]:
            if rest:
                raise UsageError("--suite takes no subcommand")
            report = run_suite(opts["suite"], opts["jobs"])
        else:
            report = run_args(rest)
    except (UsageError, OSError, json.JSONDecodeError, ValueError) as e:
        report = RunReport("", {"argv": argv}, "error", [f"{type(e).__name__}: {e}"])
    text = report.to_json()
    if opts_out := _out_target(argv):
        Path(opts_out).write_text(text + "\n")
    else:
        print(text)
    return report.exit_code


def _out_target(argv: list[str]) -> str | None:
    try:
        return _split_global(argv)[0]["out"]
    except UsageError:
        return None


if __name__ == "__main__":
    sys.exit(main())
