"""Command-line front end.  stdout carries results, stderr diagnostics."""

import argparse
import json
import sys

from . import __version__
from .certify import EXIT_CODES, Verdict, certify, certify_coordinate, nagata_demo
from .commutative import NotAnAutomorphism, jvdk_decompose, render_comm, z_tame_attempt
from .estimate import ZeroCommutator, check_estimate
from .freealg import abelianize, oracle_dimension, oracle_is_zero, render
from .morphism import compose
from .parser import COMM, NC, ExprSyntaxError, NegativeLetterPower, NoncommutativeDivision, parse
from .peel import DecompositionFailed, MatchBounds, nc_decompose
from .serialize import (
    certificate_to_json, describe_step, dumps, endo_to_json, load_endo, offender_to_json, stage_to_json, step_to_json,
    to_plain,
)

EX_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _bounds(text):
    try:
        dp, nd = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two integers 'dp,nd'")
    return MatchBounds(dp, nd)


def _emit(args, payload, text):
    print(dumps(payload) if args.json else text)


def _steps_text(steps):
    return "\n".join(f"{i}: {describe_step(s)}" for i, s in enumerate(steps))


def cmd_eval(args):
    a = parse(args.expr, args.mode)
    if args.mode == COMM:
        _emit(args, {"value": render_comm(a)}, render_comm(a))
        return 0
    payload = {"value": render(a)}
    text = render(a)
    if args.oracle:
        dim = oracle_dimension(a)
        zero, used = oracle_is_zero(a, tuple(range(args.seed, args.seed + 3)), dim)
        payload.update(oracle_zero=zero, seeds=used, dim=dim)
        text += f"\noracle (seeds {', '.join(map(str, used))}, dim {dim}): {'zero' if zero else 'nonzero'}"
    _emit(args, payload, text)
    return 0


def cmd_mul(args):
    a, b = parse(args.a, args.mode), parse(args.b, args.mode)
    out = (render_comm if args.mode == COMM else render)(a * b)
    _emit(args, {"value": out}, out)
    return 0


def cmd_compose(args):
    a, b = load_endo(args.a), load_endo(args.b)
    e = compose(a, b)
    data = endo_to_json(e)
    _emit(args, data, f"x -> {data['image_x']}\ny -> {data['image_y']}")
    return 0


def cmd_abelianize(args):
    if args.file:
        e = load_endo(args.file)
        data = {"image_x": render_comm(abelianize(e.image_x)), "image_y": render_comm(abelianize(e.image_y))}
        _emit(args, data, f"x -> {data['image_x']}\ny -> {data['image_y']}")
    else:
        out = render_comm(abelianize(parse(args.expr, NC)))
        _emit(args, {"value": out}, out)
    return 0


def cmd_decompose_comm(args):
    steps = jvdk_decompose(load_endo(args.a, COMM))
    _emit(args, {"steps": [step_to_json(s) for s in steps]}, _steps_text(steps))
    return 0


def cmd_decompose_nc(args):
    d = nc_decompose(load_endo(args.a), args.bounds)
    _emit(args, {"steps": [step_to_json(s) for s in d.steps]}, _steps_text(d.steps))
    return 0


def cmd_tame_check(args):
    steps, failure = z_tame_attempt(load_endo(args.a, COMM))
    if steps is not None:
        _emit(args, {"z_tame": True, "steps": [step_to_json(s) for s in steps]},
              "z-tame\n" + _steps_text(steps))
        return EXIT_CODES["ZTame"]
    _emit(args, {"z_tame": False, "failure": to_plain(failure)}, f"not z-tame: {failure}")
    return EXIT_CODES["NotZLiftable_Thm1_1"]


def cmd_estimate(args):
    f, g, p = (parse(v, NC) for v in (args.f, args.g, args.P))
    r = check_estimate(f, g, p, args.bounds)
    data = r.as_dict()
    _emit(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))
    return 0


def _certificate_text(c):
    lines = [f"verdict: {c.verdict.value}"]
    if c.offender is not None:
        o = c.offender
        lines.append(f"offender: step {o.index} moves {o.variable}, coefficient {o.coefficient}, "
                     f"exponent {o.exponent}, pole z = {o.pole}, valuation {o.valuation}")
    if c.tame_witness is not None:
        lines.append("tame witness:")
        lines.append(_steps_text(c.tame_witness))
    elif c.comm_steps:
        lines.append("canonical sequence:")
        lines.append(_steps_text(c.comm_steps))
    if c.invariant_trace:
        lines.append("lift trace (degree, sandwich, right z-degree, left z-degree):")
        lines.extend(f"  {r.degree} {r.has_sandwich} {r.right_z_degree} {r.left_z_degree}"
                     for r in c.invariant_trace)
    for key in ("caveat", "reason"):
        if getattr(c, key):
            lines.append(f"{key}: {getattr(c, key)}")
    return "\n".join(lines)


def _report(args, cert):
    _emit(args, certificate_to_json(cert), _certificate_text(cert))
    return cert.exit_code


def cmd_certify(args):
    return _report(args, certify(load_endo(args.a, COMM)))


def cmd_certify_coordinate(args):
    return _report(args, certify_coordinate(parse(args.f, COMM)))


def cmd_demo(args):
    r = nagata_demo()
    data = {
        "automorphism": endo_to_json(r.automorphism),
        "jacobian_det": render_comm(r.jacobian),
        "fixes_y2_plus_xz": r.fixes_invariant,
        "canonical_sequence": [step_to_json(s) for s in r.canonical_sequence],
        "recomposes": r.recomposes,
        "offender": offender_to_json(r.offender) if r.offender else None,
        "certificate": certificate_to_json(r.certificate),
        "coordinate_verdicts": [c.verdict.value for c in r.coordinate_certificates],
        "lift_trace": [stage_to_json(s) for s in r.lift_trace],
    }
    text = "\n".join([
        f"automorphism: x -> {data['automorphism']['image_x']}",
        f"              y -> {data['automorphism']['image_y']}",
        f"jacobian: {data['jacobian_det']}",
        f"fixes y^2 + x*z: {r.fixes_invariant}",
        "canonical sequence:",
        _steps_text(r.canonical_sequence),
        f"recomposes: {r.recomposes}",
        f"coordinate verdicts: {', '.join(data['coordinate_verdicts'])}",
        _certificate_text(r.certificate),
    ])
    _emit(args, data, text)
    return r.certificate.exit_code


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized oracles")
    common.add_argument("--bounds", type=_bounds, default=None, metavar="DP,ND",
                        help="matching ansatz: max denominator power, max numerator degree")

    p = _Parser(prog="zlift", description="Automorphisms of Q(z) * Q<x, y> and their commutative images.")
    p.add_argument("--version", action="version", version=f"zlift {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    mode = dict(choices=[NC, COMM], default=NC)
    s = sub.add_parser("eval", parents=[common], help="normalize and print an expression")
    s.add_argument("expr")
    s.add_argument("--mode", **mode)
    s.add_argument("--oracle", action="store_true", help="also run the matrix zero test")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("mul", parents=[common], help="product of two expressions")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--mode", **mode)
    s.set_defaults(run=cmd_mul)

    s = sub.add_parser("compose", parents=[common], help="compose two maps given as JSON files")
    s.add_argument("--a", required=True, help="outer map")
    s.add_argument("--b", required=True, help="inner map")
    s.set_defaults(run=cmd_compose)

    s = sub.add_parser("abelianize", parents=[common], help="commutative image")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("expr", nargs="?")
    g.add_argument("--file", help="map as a JSON file")
    s.set_defaults(run=cmd_abelianize)

    for name, run, help_text in [
        ("decompose-comm", cmd_decompose_comm, "canonical elementary sequence over Q(z)"),
        ("decompose-nc", cmd_decompose_nc, "noncommutative elementary decomposition"),
        ("tame-check", cmd_tame_check, "decomposition over Q[z], if any"),
        ("certify", cmd_certify, "lifting-obstruction certificate"),
    ]:
        s = sub.add_parser(name, parents=[common], help=help_text)
        s.add_argument("--a", required=True, help="map as a JSON file")
        s.set_defaults(run=run)

    s = sub.add_parser("estimate", parents=[common], help="degree estimate for P(f, g)")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--P", required=True)
    s.set_defaults(run=cmd_estimate)

    s = sub.add_parser("certify-coordinate", parents=[common], help="certificate for a coordinate")
    s.add_argument("--f", required=True)
    s.set_defaults(run=cmd_certify_coordinate)

    s = sub.add_parser("demo", parents=[common], help="built-in demonstrations")
    s.add_argument("name", choices=["nagata"])
    s.set_defaults(run=cmd_demo)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ExprSyntaxError, NoncommutativeDivision, NegativeLetterPower, ZeroCommutator) as exc:
        print(f"zlift: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EX_USAGE
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"zlift: cannot read input: {exc}", file=sys.stderr)
        return EX_USAGE
    except (NotAnAutomorphism, DecompositionFailed, ValueError) as exc:
        print(f"zlift: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CODES[Verdict.NotAutomorphism.value]


if __name__ == "__main__":
    sys.exit(main())
