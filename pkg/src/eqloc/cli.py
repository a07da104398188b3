"""Command-line front end.

Exit codes: 0 success, 1 a ``check`` failed, 2 bad input, 3 the fixed-point
data is mathematically inconsistent. Results go to stdout, diagnostics to
stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .charclass import TruncatedClass, euler_class_at
from .errors import (
    ModelError,
    ModelParseError,
    NonConstantVolume,
    NonPolynomialResult,
)
from .exactalg import LinFactoredRational, parse_polynomial, parse_rational
from .localize import (
    PowerOfOmegaBar,
    dh_closed_form,
    dh_series,
    dh_volume,
    euler_characteristic,
    localize,
)
from .model import TorusModel, load_model, parse_builtin
from .oracle import sum_equal_by_evaluation

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load(args) -> TorusModel:
    if args.model:
        if args.scale is not None:
            raise InputError("--scale only applies to builtin models")
        try:
            with open(args.model, "rb") as fh:
                data = fh.read()
        except OSError as e:
            raise InputError(f"cannot read model file: {e}") from None
        return load_model(data)
    scale = Fraction(1)
    if args.scale is not None:
        try:
            scale = parse_rational(args.scale)
        except ValueError as e:
            raise InputError(f"--scale: {e}") from None
    return parse_builtin(args.builtin, scale)


def _only_s2(args) -> bool:
    if not args.builtin:
        return False
    spec = args.builtin
    if spec.startswith("product:"):
        return all(p == "s2" for p in spec[len("product:"):].split(","))
    return spec == "s2"


def _two_pi_line(value: Fraction, power: int) -> str:
    """Render ``value * (2*pi)^power`` as ``<c>π^k ≈ <float>``."""
    coeff = value * 2**power
    if power == 0:
        sym = str(coeff)
    else:
        head = "" if coeff == 1 else ("-" if coeff == -1 else str(coeff))
        sym = f"{head}π" if power == 1 else f"{head}π^{power}"
    return f"{sym} ≈ {float(value) * (2 * math.pi) ** power!r}"


def _check_two_pi(args) -> None:
    if args.scale_two_pi:
        if args.scale is not None:
            raise InputError("--scale-two-pi and --scale are exclusive")
        if not _only_s2(args):
            raise InputError("--scale-two-pi needs --builtin s2 or a product of s2 factors")


def _read_classes(path: str, model: TorusModel) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read class file: {e}") from None
    except json.JSONDecodeError as e:
        raise ModelParseError(e.msg, f"{path}: line {e.lineno}, column {e.colno}") from None
    classes = data.get("classes") if isinstance(data, dict) else None
    if not isinstance(classes, dict):
        raise ModelParseError("expected an object with a 'classes' mapping", path)
    out = {}
    for name, spec in classes.items():
        where = f"classes.{name}"
        try:
            if isinstance(spec, str):
                out[name] = parse_polynomial(spec, model.rank)
            elif isinstance(spec, list) and spec and all(isinstance(s, str) for s in spec):
                out[name] = TruncatedClass([parse_polynomial(s, model.rank) for s in spec], model.rank)
            else:
                raise ValueError("expected a polynomial string or a list of them")
        except ValueError as e:
            raise ModelParseError(str(e), where) from None
    return out


def cmd_integrate(args) -> int:
    _check_two_pi(args)
    m = _load(args)
    chosen = [x is not None and x is not False for x in (args.power, args.class_file, args.chern_power)]
    if sum(chosen) != 1:
        raise InputError("choose exactly one of --power, --chern-power, --class-file")
    if args.class_file:
        if args.scale_two_pi:
            raise InputError("--scale-two-pi needs --power")
        integrand = _read_classes(args.class_file, m)
        power = None
    else:
        power = m.dimC if args.chern_power else args.power
        integrand = PowerOfOmegaBar(power)
    result = localize(m, integrand)
    print(f"result = {result.value}")
    if args.scale_two_pi and result.value.is_constant():
        print(_two_pi_line(result.value.constant_value(), power))
    if args.contributions:
        for name, c in result.contributions:
            print(f"{name}: {c.numerator} / {c.denominator_str()}")
    return EXIT_OK


def cmd_volume(args) -> int:
    _check_two_pi(args)
    m = _load(args)
    vol = dh_volume(m)
    print(vol)
    if args.scale_two_pi:
        print(_two_pi_line(vol, m.dimC))
    return EXIT_OK


def cmd_chi(args) -> int:
    m = _load(args)
    print(euler_characteristic(m))
    return EXIT_OK


def cmd_dh(args) -> int:
    m = _load(args)
    if args.closed_form:
        print(f"result = {dh_closed_form(m)}")
        return EXIT_OK
    if args.order is None:
        raise InputError("dh needs --order or --closed-form")
    for k, entry in enumerate(dh_series(m, args.order)):
        print(f"{k}!: {entry}")
    return EXIT_OK


def cmd_check(args) -> int:
    ok = True

    def report(label, passed, detail=""):
        nonlocal ok
        ok &= passed is not False
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[passed]
        print(f"{label}: {status}" + (f" ({detail})" if detail else ""))

    try:
        m = _load(args)
    except (ModelError, ModelParseError, ValueError) as e:
        report("validation", False, str(e))
        return EXIT_CHECK_FAILED
    report("validation", True)

    probes = []
    if m.isolated:
        probes.append((f"polynomiality of power {m.dimC}", PowerOfOmegaBar(m.dimC)))
        probes.append(("polynomiality of euler class", {p.name: euler_class_at(p) for p in m.components}))
    else:
        report("polynomiality", None, "positive-dimensional components need explicit classes")
    for label, integrand in probes:
        try:
            result = localize(m, integrand)
        except NonPolynomialResult as e:
            report(label, False, f"remainder {e.remainder}")
            continue
        report(label, True)
        if m.noncompact:
            continue
        agrees = sum_equal_by_evaluation(
            [c for _, c in result.contributions],
            LinFactoredRational.from_polynomial(result.value),
            trials=4,
            seed=args.seed,
        )
        report("  evaluation cross-check", agrees)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", metavar="PATH", help="model file (JSON)")
    src.add_argument("--builtin", metavar="SPEC", help="s2 | cpn[:n] | gaussian | product:<spec>,<spec>")
    common.add_argument("--scale", metavar="RATIONAL", help="moment scale for builtin s2 factors")
    common.add_argument("--scale-two-pi", action="store_true", help="also print the value with scale 2π")
    common.add_argument("--contributions", action="store_true", help="print per-component summands")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized cross-checks")

    parser = argparse.ArgumentParser(prog="eqloc", description="Exact equivariant localization.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", parents=[common], help="localize an equivariant class")
    p.add_argument("--power", type=int, metavar="K", help="integrate (omega + mu)^K")
    p.add_argument("--chern-power", action="store_true", help="integrate (omega + mu)^dimC")
    p.add_argument("--class-file", metavar="PATH", help="per-component classes (JSON)")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("volume", parents=[common], help="symplectic volume")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("chi", parents=[common], help="Euler characteristic")
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("dh", parents=[common], help="Duistermaat-Heckman series")
    p.add_argument("--order", type=int, metavar="K")
    p.add_argument("--closed-form", action="store_true", help="noncompact models with zero moments")
    p.set_defaults(func=cmd_dh)

    p = sub.add_parser("check", parents=[common], help="validate a model and probe pole cancellation")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except (NonPolynomialResult, NonConstantVolume) as e:
        print(f"error: {e}", file=sys.stderr)
        if isinstance(e, NonPolynomialResult):
            print(f"remainder = {e.remainder}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (InputError, ModelError, ModelParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
