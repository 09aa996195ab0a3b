"""``vqfueter`` command line: JSON results on stdout.

Exit status is 0 on success and 2 when the arguments or inputs are rejected
(the body is then ``{"error": ...}``); ``verify`` exits 1 on a failing check.
Points and multi-indices are comma-separated.  Larger inputs such as series
or realizations come in through ``--in FILE``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import checks
from .errors import VqError
from .fueter import MultiIndex, PointH, expand_qn, mu_alpha
from .operators import (MonomialField, SeriesField, apply_Gq, apply_Vq, apply_Vq_bar, euler,
                        gleason_remainder, gleason_residual)
from .quat import QMatrix, Quaternion, min_eigenvalue
from .rational import (DEFAULT_TRUNC, BlaschkePoint, Realization, blaschke_realization,
                       blaschke_series, rational_restrict, rational_series, rational_tail)
from .rkhs import CoefficientFamily, gram_matrix, kernel_eval, kernel_tail, structural_defect
from .series import FueterSeries, evaluate

VERBS = ("eval-mu", "expand-qn", "apply-vq", "gleason", "kernel", "gram", "structural",
         "blaschke", "realize", "verify")
OPERATORS = {
    "vq": apply_Vq,
    "vq-bar": apply_Vq_bar,
    "vq-bar-euler": lambda f, x: apply_Vq_bar(f, x, form="euler"),
    "gq": apply_Gq,
    "euler": euler,
}


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _floats(text: str, count: int | None, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise ValidationError(f"{what} must be comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise ValidationError(f"{what} needs {count} components, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise ValidationError(f"{what} has a non-finite component")
    return vals


def _point(text: str) -> PointH:
    return PointH(*_floats(text, 4, "point"))


def _alpha(text: str) -> MultiIndex:
    try:
        return MultiIndex.coerce(int(t) for t in text.split(","))
    except ValueError:
        raise ValidationError(f"alpha must be three non-negative integers, got {text!r}") from None


def _parser() -> _Parser:
    p = _Parser(prog="vqfueter", description=__doc__.splitlines()[0])
    p.add_argument("verb", help="one of: " + ", ".join(VERBS))
    p.add_argument("--point", action="append", default=[], help="x0,x1,x2,x3 (repeatable)")
    p.add_argument("--alpha", help="a1,a2,a3")
    p.add_argument("--trunc", type=int, default=DEFAULT_TRUNC)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float)
    p.add_argument("--in", dest="infile", metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--n", type=int, help="power for expand-qn")
    p.add_argument("--operator", choices=sorted(OPERATORS), default="vq")
    p.add_argument("--suite", default="all", choices=sorted(checks.SUITES) + ["all"])
    return p


def _need_points(args, count: int | None = None, at_least: int = 1) -> list[PointH]:
    pts = [_point(t) for t in args.point]
    if count is not None and len(pts) != count:
        raise ValidationError(f"{args.verb} takes exactly {count} --point value(s)")
    if len(pts) < at_least:
        raise ValidationError(f"{args.verb} needs at least {at_least} --point value(s)")
    return pts


def _need_alpha(args) -> MultiIndex:
    if args.alpha is None:
        raise ValidationError(f"{args.verb} needs --alpha")
    return _alpha(args.alpha)


def _trunc(args, low: int = 0) -> int:
    if args.trunc < low:
        raise ValidationError(f"--trunc must be at least {low}")
    return args.trunc


def _load(args):
    if args.infile is None:
        return None
    try:
        with open(args.infile) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read {args.infile}: {exc}") from None


def _decode(kind, data):
    try:
        return kind.from_json(data)
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError(f"malformed {kind.__name__} JSON near {exc}") from None


def _field(args):
    data = _load(args)
    if data is not None:
        return SeriesField(_decode(FueterSeries, data))
    return MonomialField(_need_alpha(args))


def _value_json(v):
    return v.to_json() if isinstance(v, (Quaternion, QMatrix)) else v


def _finite(x: float):
    return x if math.isfinite(x) else None


def cmd_eval_mu(args):
    (x,) = _need_points(args, 1)
    return mu_alpha(x, _need_alpha(args)).to_json()


def cmd_expand_qn(args):
    if args.n is None or args.n < 0:
        raise ValidationError("expand-qn needs --n with a non-negative integer")
    return expand_qn(args.n).to_json()


def cmd_apply_vq(args):
    (x,) = _need_points(args, 1)
    value = OPERATORS[args.operator](_field(args), x)
    out = {"operator": args.operator, "value": _value_json(value)}
    if args.tol is not None:
        size = abs(value) if isinstance(value, Quaternion) else value.max_abs()
        out["within_tol"] = bool(size <= args.tol)
    return out


def cmd_gleason(args):
    a, b = _need_points(args, 2)
    f = _field(args)
    rem = [gleason_remainder(f, a, b, u) for u in (1, 2, 3)]
    res = gleason_residual(f, a, b)
    size = abs(res) if isinstance(res, Quaternion) else res.max_abs()
    return {"remainders": [_value_json(r) for r in rem], "residual": _value_json(res),
            "residual_norm": size}


def _family(args) -> CoefficientFamily:
    data = _load(args)
    if data is None:
        return CoefficientFamily.arveson()
    try:
        table = {MultiIndex.coerce(e["alpha"]): Fraction(e["c"]) for e in data["weights"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad weight table: {exc}") from None
    return CoefficientFamily.custom(table)


def cmd_kernel(args):
    x, y = _need_points(args, 2)
    c = _family(args)
    trunc = _trunc(args)
    return {"value": kernel_eval(c, x, y, trunc).to_json(),
            "tail_bound": _finite(kernel_tail(c, x, y, trunc))}


def cmd_gram(args):
    pts = _need_points(args)
    G = gram_matrix(_family(args), pts, _trunc(args))
    tol = 1e-8 if args.tol is None else args.tol
    low = min_eigenvalue(G)
    return {"gram": G.to_json(), "min_eigenvalue": low, "psd": bool(low >= -tol)}


def cmd_structural(args):
    d = structural_defect(_family(args), _need_alpha(args))
    return {"defect": f"{d.numerator}/{d.denominator}"}


def cmd_blaschke(args):
    (a,) = _need_points(args, 1)
    bp = BlaschkePoint.at(a)
    return {"s": bp.s, "mu_row": bp.mu_row.to_json(),
            "series": blaschke_series(bp, _trunc(args, 1)).to_json()}


def cmd_realize(args):
    data = _load(args)
    if data is None:
        (a,) = _need_points(args, 1)
        return blaschke_realization(a).to_json()
    R = _decode(Realization, data)
    trunc = _trunc(args)
    series = rational_series(R, trunc)
    if not args.point:
        return {"series": series.to_json()}
    (x,) = _need_points(args, 1)
    if x.x0 != 0.0:
        raise ValidationError("realize evaluates on the slice x0 = 0")
    xvec = (x.x1, x.x2, x.x3)
    return {"restriction": rational_restrict(R, xvec).to_json(),
            "series_value": evaluate(series, x).to_json(),
            "tail_bound": _finite(rational_tail(R, xvec, trunc))}


COMMANDS = {
    "eval-mu": cmd_eval_mu, "expand-qn": cmd_expand_qn, "apply-vq": cmd_apply_vq,
    "gleason": cmd_gleason, "kernel": cmd_kernel, "gram": cmd_gram,
    "structural": cmd_structural, "blaschke": cmd_blaschke, "realize": cmd_realize,
}


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def _emit(text: str, out: str | None, stream) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stream)


def _verify(args, stdout) -> int:
    results = checks.run_suite(args.suite, args.seed)
    for r in results:
        print(r.line(), file=stdout)
    ok = all(r.passed for r in results)
    if args.out:
        report = {"suite": args.suite, "seed": args.seed, "passed": ok,
                  "checks": [r.to_json() for r in results]}
        _emit(dumps(report), args.out, stdout)
    return 0 if ok else 1


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = _parser().parse_args(argv)
        if args.verb not in VERBS:
            raise ValidationError(f"unknown verb {args.verb!r}")
        if args.verb == "verify":
            return _verify(args, stdout)
        result = COMMANDS[args.verb](args)
    except (ValidationError, VqError, ValueError, KeyError) as exc:
        print(dumps({"error": str(exc) or type(exc).__name__}), file=stdout)
        return 2
    _emit(dumps(result), args.out, stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
