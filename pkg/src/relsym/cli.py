"""relsym command line: JSON reports on stdout, a short summary on stderr.

Exit status is 0 when every requested check passes, 1 when a check fails and
2 on input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from . import _exact as ex
from . import psm_boundary as psm
from . import relational, sampling
from .poisson_calc import BivectorFormatError, bivector_from_json, is_poisson, jacobiator
from .symplinalg import Subspace, SymplecticSpace


class InputError(Exception):
    pass


def _load_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise InputError(f"{path}: {err.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None


def _load_bivector(path: str):
    try:
        return bivector_from_json(_load_json(path))
    except BivectorFormatError as err:
        raise InputError(f"{path}: {err}") from None


def _rationals(values, what: str):
    try:
        return ex.qarray(values)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"{what}: expected rational strings like '3/4'") from None


# ---------------------------------------------------------------- commands

def cmd_check_poisson(args) -> tuple[dict, bool, str]:
    if not args.input:
        raise InputError("check-poisson needs --input BIVECTOR.json")
    pi = _load_bivector(args.input)
    ok = is_poisson(pi)
    report: dict[str, Any] = {"dim": pi.dim, "poisson": ok}
    if not ok:
        report["jacobiator"] = jacobiator(pi).to_json()["components"]
    return report, ok, f"Poisson: {ok}"


def _relational_from_json(data: dict) -> relational.RelationalGroupoidLinear:
    try:
        form = _rationals(data["form"], "form")
        space = SymplecticSpace(form)
        vecs = _rationals(data["L"], "L")
        inv = _rationals(data["I"], "I")
    except KeyError as err:
        raise InputError(f"relational input: missing field {err}") from None
    except ValueError as err:
        raise InputError(f"relational input: {err}") from None
    L = Subspace(space.power(3), vecs.T if vecs.size else ex.zeros(3 * space.dim, 0))
    return relational.RelationalGroupoidLinear(space, L, inv, name=data.get("name", "input"))


def cmd_verify_relational(args) -> tuple[dict, bool, str]:
    if args.example and args.input:
        raise InputError("give either --example or --input, not both")
    if args.example:
        try:
            rg = relational.by_name(args.example)
        except ValueError as err:
            raise InputError(str(err)) from None
    elif args.input:
        rg = _relational_from_json(_load_json(args.input))
    else:
        raise InputError("verify-relational needs --example NAME or --input GROUPOID.json")
    report = relational.full_report(rg)
    failed = [c["id"] for key in ("invariants", "axioms", "corollaries")
              for c in report[key] if not c["pass"]]
    failed += [c["id"] for c in report["regular"]["checks"] if not c["pass"]]
    ok = not failed
    summary = f"{rg.name}: " + ("all checks pass" if ok else "failed " + ", ".join(failed))
    return report, ok, summary


def cmd_psm(args) -> tuple[dict, bool, str]:
    if not args.input:
        raise InputError("psm needs --input BIVECTOR.json")
    pi = _load_bivector(args.input)
    r = sampling.rng(args.seed)
    fields = []
    if args.eta:
        eta = _rationals(_load_json(args.eta), "eta")
        if eta.ndim != 2 or eta.shape[1] != pi.dim:
            raise InputError(f"{args.eta}: eta must be an N x {pi.dim} array")
        x0 = _rationals(args.x0.split(","), "--x0") if args.x0 else ex.zeros(1, pi.dim)[0]
        if len(x0) != pi.dim:
            raise InputError(f"--x0 needs {pi.dim} comma-separated values")
        fields.append(psm.integrate_apath(pi, x0, eta))
    else:
        fields = [psm.random_apath(pi, args.grid, r) for _ in range(args.samples)]

    samples = []
    for f in fields:
        lin = psm.linearized_constraint_space(f)
        samples.append({"N": f.N, "start": ex.to_strings(f.X[:1, :])[0], "end": ex.to_strings(f.X[-1:, :])[0],
                        "residual": str(psm.apath_residual(f)),
                        "classification": lin.classification, "coisotropic": lin.coisotropic})
    residual = max((ex.q(s["residual"]) for s in samples), default=ex.ZERO)
    coisotropic = all(s["coisotropic"] for s in samples)
    report: dict[str, Any] = {"seed": args.seed, "residual": str(residual), "coisotropic": coisotropic,
                              "samples": samples}
    try:
        psm.structure_kind(pi)
    except ValueError:
        report["class_check"] = "unsupported"
        class_ok = True
    else:
        N = fields[0].N
        check = psm.class_groupoid_check(pi, args.samples, N, r)
        report["class_check"] = "pass" if check.all_passed else "fail"
        report["class_details"] = [c.to_dict() for c in check]
        class_ok = check.all_passed
    if args.eta:
        report["field"] = fields[0].to_json()
    ok = residual == 0 and coisotropic and class_ok
    summary = (f"residual {residual}, coisotropic {coisotropic}, class check {report['class_check']}")
    return report, ok, summary


COMMANDS = {
    "check-poisson": cmd_check_poisson,
    "verify-relational": cmd_verify_relational,
    "psm": cmd_psm,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relsym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", help="input JSON file")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")

    p = sub.add_parser("check-poisson", help="test the Jacobi condition of a polynomial bivector")
    common(p)
    p = sub.add_parser("verify-relational", help="verify a relational symplectic groupoid")
    common(p)
    p.add_argument("--example", help="pair:N, cotangent:N, lagrangian-triple[:literal], point")
    p = sub.add_parser("psm", help="discrete A-paths: residual, coisotropy, path classes")
    common(p)
    p.add_argument("--eta", help="JSON N x n array of covector densities")
    p.add_argument("--x0", help="comma-separated starting point, default the origin")
    p.add_argument("--grid", type=int, default=8, help="grid size N for random paths (default 8)")
    p.add_argument("--samples", type=int, default=5, help="number of random samples (default 5)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "grid", 1) < 1 or getattr(args, "samples", 1) < 1:
        print("relsym: --grid and --samples must be positive", file=sys.stderr)
        return 2
    try:
        report, ok, summary = COMMANDS[args.command](args)
    except InputError as err:
        print(f"relsym: error: {err}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"relsym {args.command}: {summary}", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
