"""Command-line front end: JSON in, JSON (or SVG) out, stable exit codes.

Exit codes: 0 success, 1 verification failure or rejected slopes, 2 usage
error, 3 search exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import cylinder as cyl_mod
from . import fan, invlim, orbit, render
from .errors import LelekError, NCViolation, NonPositiveInput, OrderViolation, SearchExhausted
from .relation import (
    SearchConstraint,
    density_profile,
    find_monomial,
    fraction_str,
    nc_witness,
    validate_nc,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_EXHAUSTED = 0, 1, 2, 3


class UsageError(Exception):
    def __init__(self, flag, message):
        self.flag = flag
        super().__init__(f"{flag}: {message}")


def rational(text: str) -> Fraction:
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}")
    if "." in str(text) or "e" in str(text).lower():
        raise argparse.ArgumentTypeError(f"write rationals as p/q, not decimals: {text!r}")
    return value


def json_arg(text: str):
    """Inline JSON, ``@path`` / a file path, or ``-`` for standard input."""
    text = str(text)
    if text == "-":
        raw = sys.stdin.read()
    elif text.lstrip()[:1] in "[{":
        raw = text
    else:
        path = Path(text[1:] if text.startswith("@") else text)
        try:
            raw = path.read_text()
        except OSError as exc:
            raise argparse.ArgumentTypeError(f"cannot read {path}: {exc.strerror}")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"invalid JSON: {exc.msg}")


def _convert(flag, fn, *args):
    try:
        return fn(*args)
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        if isinstance(exc, LelekError):
            raise
        raise UsageError(flag, f"cannot interpret value ({exc})")


def _pair(args):
    return validate_nc(args.r, args.rho)


def _cylinders(args, pair, flag="--cylinders"):
    data = args.cylinders
    if isinstance(data, dict):
        data = data.get("cylinders", [data])
    return [_convert(flag, cyl_mod.Cylinder.from_json, c, pair) for c in data]


def _program(args, pair):
    data = args.program
    return _convert("--program", orbit.OrbitProgram.from_json, data.get("program", data), pair)


def _monomial_json(pair, m, n):
    return {"m": m, "n": n, "value": fraction_str(pair.value(m, n))}


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate_params(args):
    try:
        pair = validate_nc(args.r, args.rho)
    except NCViolation as exc:
        return EXIT_FAIL, {"nc": False, "witness": list(exc.witness)}
    return EXIT_OK, {"nc": True, "r": fraction_str(pair.r), "rho": fraction_str(pair.rho)}


def cmd_find_monomial(args):
    pair = _pair(args)
    c = _convert("--lo/--hi", SearchConstraint, args.kfloor, args.lfloor, args.lo, args.hi)
    mono = find_monomial(pair, c, **_budget(args))
    return EXIT_OK, _monomial_json(pair, mono.m, mono.n)


def cmd_density_profile(args):
    pair = _pair(args)
    out = []
    for w in density_profile(pair, args.bins, (args.kfloor, args.lfloor), **_budget(args)):
        entry = {"lo": fraction_str(w.lo), "hi": fraction_str(w.hi)}
        if w.filled:
            entry.update(_monomial_json(pair, w.monomial.m, w.monomial.n))
        out.append(entry)
    return EXIT_OK, {"bins": out, "filled": sum(1 for e in out if "m" in e)}


def cmd_make_cylinder(args):
    pair = _pair(args)
    z = _convert("--point", fan.FanPoint.from_json, args.point, pair)
    c = cyl_mod.build_cylinder(z, args.eps, args.min_depth)
    return EXIT_OK, c.to_json()


def cmd_meets_fan(args):
    pair = _pair(args)
    c = _convert("--cylinder", cyl_mod.Cylinder.from_json, args.cylinder, pair)
    return EXIT_OK, cyl_mod.meets_fan(c, **_budget(args)).to_json()


def cmd_synthesize_orbit(args):
    pair = _pair(args)
    cyls = _cylinders(args, pair)
    prog = orbit.synthesize(pair, cyls, **_budget(args))
    return EXIT_OK, prog.to_json()


def cmd_verify_orbit(args):
    pair = _pair(args)
    cyls = _cylinders(args, pair)
    prog = _program(args, pair)
    certs = orbit.verify(prog, cyls)
    ok = bool(certs) and all(c.passed for c in certs)
    return (EXIT_OK if ok else EXIT_FAIL), {"pass": ok, "certificates": [c.to_json() for c in certs]}


def cmd_witness_transitivity(args):
    pair = _pair(args)
    u = _convert("--u", cyl_mod.Cylinder.from_json, args.u, pair)
    v = _convert("--v", cyl_mod.Cylinder.from_json, args.v, pair)
    n, p = orbit.witness_transitivity(u, v, **_budget(args))
    return EXIT_OK, {"n": n, "point": p.to_json()}


def cmd_classify_endpoint(args):
    pair = _pair(args)
    p = _convert("--point", fan.FanPoint.from_json, args.point, pair)
    return EXIT_OK, fan.classify_endpoint(p, args.depth).to_json()


def cmd_make_endpoint(args):
    pair = _pair(args)
    seed = _convert("--lo/--hi", SearchConstraint, args.kfloor, args.lfloor, args.lo, args.hi)
    return EXIT_OK, fan.make_endpoint(pair, seed, **_budget(args)).to_json()


def cmd_shift(args):
    pair = _pair(args)
    p = _convert("--point", fan.FanPoint.from_json, args.point, pair)
    return EXIT_OK, fan.shift(p).to_json()


def _invlim_point(args, pair):
    return _convert("--point", invlim.InvLimPoint.from_json, args.point, pair)


def cmd_invlim_shift(args):
    pair = _pair(args)
    return EXIT_OK, invlim.shift_forward(_invlim_point(args, pair)).to_json()


def cmd_invlim_unshift(args):
    pair = _pair(args)
    return EXIT_OK, invlim.shift_backward(_invlim_point(args, pair)).to_json()


def cmd_invlim_endpoint_near(args):
    pair = _pair(args)
    t = _invlim_point(args, pair)
    e = invlim.endpoint_near(t, args.eps, horizon=args.horizon, **_budget(args))
    d = invlim.metric_D(t, e, args.horizon)
    return EXIT_OK, {
        "point": e.to_json(),
        "distance": fraction_str(d.value),
        "tail_bound": fraction_str(d.tail_bound),
    }


def cmd_invlim_classify(args):
    pair = _pair(args)
    p = _invlim_point(args, pair)
    out = invlim.classify_endpoint_invlim(p, args.horizon).to_json()
    out["validity"] = invlim.validate_invlim(p, args.horizon).to_json()
    return EXIT_OK, out


def _budget(args):
    return {} if args.budget is None else {"budget": args.budget}


def _render_spec(args):
    style = args.style or {}
    return _convert(
        "--width/--height",
        render.RenderSpec,
        args.depth,
        args.word_budget,
        args.width,
        args.height,
        {str(k): str(v) for k, v in style.items()},
    )


def cmd_render_fan(args):
    pair = _pair(args)
    return EXIT_OK, render.render_fan(pair, _render_spec(args))


def cmd_render_orbit(args):
    pair = _pair(args)
    cyls = _cylinders(args, pair)
    prog = _program(args, pair)
    return EXIT_OK, render.render_orbit(prog, cyls, _render_spec(args))


def _random_nc_pairs(rng, count):
    out = []
    while len(out) < count:
        r = Fraction(rng.randint(1, 30), rng.randint(1, 30))
        rho = Fraction(rng.randint(1, 30), rng.randint(1, 30))
        if 0 < r < 1 < rho and nc_witness(r, rho) is None:
            out.append(validate_nc(r, rho))
    return out


def _noninjectivity_json(pair):
    p1, p2, q = orbit.non_injectivity_witness(pair)
    s1, s2 = fan.shift(p1), fan.shift(p2)
    ok = p1 != p2 and s1 == s2 == q
    return ok, {
        "r": fraction_str(pair.r),
        "rho": fraction_str(pair.rho),
        "p1": p1.to_json(),
        "p2": p2.to_json(),
        "image": q.to_json(),
        "pass": ok,
    }


def cmd_noninjectivity_witness(args):
    if args.random:
        pairs = _random_nc_pairs(random.Random(args.seed), args.random)
        results = [_noninjectivity_json(p) for p in pairs]
        ok = all(r[0] for r in results)
        return (EXIT_OK if ok else EXIT_FAIL), {"witnesses": [r[1] for r in results]}
    ok, out = _noninjectivity_json(_pair(args))
    return (EXIT_OK if ok else EXIT_FAIL), out


# ---------------------------------------------------------------------------
# parser


def _add_common(p):
    p.add_argument("--r", type=rational, default=Fraction(1, 2), help="contracting slope (default 1/2)")
    p.add_argument("--rho", type=rational, default=Fraction(3), help="expanding slope (default 3)")
    p.add_argument("--output", "-o", help="write the result here instead of standard output")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized corpora")
    p.add_argument("--config", help="JSON file whose keys provide flag defaults")
    p.add_argument("--budget", type=int, default=None, help="exponent budget for lattice searches (default depends on the command)")


def _add_target(p, required=True):
    p.add_argument("--lo", type=rational, required=required)
    p.add_argument("--hi", type=rational, required=required)
    p.add_argument("--kfloor", type=int, default=0)
    p.add_argument("--lfloor", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lelek", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        _add_common(p)
        p.set_defaults(func=fn)
        return p

    add("validate-params", cmd_validate_params, "check that r < 1 < rho never connect")
    _add_target(add("find-monomial", cmd_find_monomial, "lattice value r^m rho^n in (lo, hi)"))
    p = add("density-profile", cmd_density_profile, "one lattice witness per bin of (0,1)")
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--kfloor", type=int, default=0)
    p.add_argument("--lfloor", type=int, default=0)
    p = add("make-cylinder", cmd_make_cylinder, "cylinder of small diameter around a fan point")
    p.add_argument("--point", type=json_arg, required=True)
    p.add_argument("--eps", type=rational, required=True)
    p.add_argument("--min-depth", type=int, default=1)
    p = add("meets-fan", cmd_meets_fan, "a fan point inside a cylinder")
    p.add_argument("--cylinder", type=json_arg, required=True)
    p = add("synthesize-orbit", cmd_synthesize_orbit, "orbit program visiting the cylinders in order")
    p.add_argument("--cylinders", type=json_arg, required=True)
    p = add("verify-orbit", cmd_verify_orbit, "recheck an orbit program's visits")
    p.add_argument("--program", type=json_arg, required=True)
    p.add_argument("--cylinders", type=json_arg, required=True)
    p = add("witness-transitivity", cmd_witness_transitivity, "n and p with p in u and shift^n(p) in v")
    p.add_argument("--u", type=json_arg, required=True)
    p.add_argument("--v", type=json_arg, required=True)
    p = add("classify-endpoint", cmd_classify_endpoint, "three-valued endpoint test on a fan point")
    p.add_argument("--point", type=json_arg, required=True)
    p.add_argument("--depth", type=int, default=2048)
    _add_target(add("make-endpoint", cmd_make_endpoint, "endpoint with a lattice base in (lo, hi)"))
    p = add("shift", cmd_shift, "shift a fan point")
    p.add_argument("--point", type=json_arg, required=True)
    for name, fn, text in (
        ("invlim-shift", cmd_invlim_shift, "shift a point of the inverse limit"),
        ("invlim-unshift", cmd_invlim_unshift, "inverse shift on the inverse limit"),
    ):
        add(name, fn, text).add_argument("--point", type=json_arg, required=True)
    p = add("invlim-endpoint-near", cmd_invlim_endpoint_near, "an endpoint of the inverse limit near a point")
    p.add_argument("--point", type=json_arg, required=True)
    p.add_argument("--eps", type=rational, required=True)
    p.add_argument("--horizon", type=int, default=24)
    p = add("invlim-classify", cmd_invlim_classify, "endpoint test and validity for an inverse-limit point")
    p.add_argument("--point", type=json_arg, required=True)
    p.add_argument("--horizon", type=int, default=64)
    for name, fn, text in (
        ("render-fan", cmd_render_fan, "SVG picture of the fan"),
        ("render-orbit", cmd_render_orbit, "SVG step plot of an orbit program"),
    ):
        p = add(name, fn, text)
        p.add_argument("--depth", type=int, default=9)
        p.add_argument("--word-budget", type=int, default=512)
        p.add_argument("--width", type=int, default=800)
        p.add_argument("--height", type=int, default=600)
        p.add_argument("--style", type=json_arg, default=None)
        if name == "render-orbit":
            p.add_argument("--program", type=json_arg, required=True)
            p.add_argument("--cylinders", type=json_arg, required=True)
    p = add("noninjectivity-witness", cmd_noninjectivity_witness, "two points with the same shift image")
    p.add_argument("--random", type=int, default=0, help="instead use this many seeded random slope pairs")
    return parser


def _apply_config(parser, argv):
    """Feed ``--config`` keys to the chosen subcommand as defaults."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        data = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError("--config", str(exc))
    if not isinstance(data, dict):
        raise UsageError("--config", "expected a JSON object")
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for p in sub.choices.values():
        defaults = {}
        for action in p._actions:
            for key in (action.dest, action.dest.replace("_", "-")):
                if key in data:
                    value = data[key]
                    if action.type is not None and not isinstance(value, (dict, list)):
                        try:
                            value = action.type(value if action.type is int else str(value))
                        except (argparse.ArgumentTypeError, ValueError) as exc:
                            raise UsageError(f"--config {key}", str(exc))
                    defaults[action.dest] = value
                    action.required = False
        p.set_defaults(**defaults)


def _emit(result, output):
    text = result if isinstance(result, str) else json.dumps(result) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        _apply_config(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
        code, result = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit({"error": "search-exhausted", "budget": exc.budget, "frontier": exc.frontier}, None)
        return EXIT_EXHAUSTED
    except NCViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (NonPositiveInput, OrderViolation) as exc:
        print(f"usage error: --r/--rho: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LelekError as exc:
        # input-shaped errors (bad eps, degenerate cylinder, ...) are usage errors
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_FAIL
    _emit(result, args.output)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
