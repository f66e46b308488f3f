"""Command-line front end.

Exit codes: 0 success or PASS, 1 FAIL, 2 usage error, 3 inconclusive.
JSON output is canonical (sorted keys, compact separators, integers and
field-element strings only), so equal runs give equal bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import canonical, classifier, extremal, oracle
from .errors import HermquadError, WrongCardinality
from .gf import MAX_Q_ENV, FieldParams, field_for_q
from .varieties import COEFF_NAMES, QuadricCoeffs, QuadricType

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
STATUS_EXIT = {canonical.PASS: EXIT_OK, canonical.FAIL: EXIT_FAIL, canonical.INCONCLUSIVE: EXIT_INCONCLUSIVE}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    field: FieldParams
    coeffs: QuadricCoeffs | None
    types: tuple[QuadricType, ...]
    exhaustive: bool
    samples: int
    seed: int
    fmt: str
    out: str | None


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _q_arg(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid q: {token!r}") from None


def _positive(token: str) -> int:
    try:
        n = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {token!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {token!r}")
    return n


def _seed(token: str) -> int:
    try:
        n = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {token!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"seed must be non-negative: {token!r}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hermquad",
        description="Hermitian surface / quadric intersections over GF(q^2).",
        epilog=f"The largest accepted q is 128 unless {MAX_Q_ENV} is set.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--q", type=_q_arg, required=True, help="odd prime power")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")

    for name in ("count", "classify", "extremal"):
        p = sub.add_parser(name)
        common(p)
        p.add_argument("--coeffs", required=True,
                       help='JSON object with keys a..f, e.g. \'{"a":"2+0*e"}\'; missing keys are 0')
    for name in ("spectrum", "verify"):
        p = sub.add_parser(name)
        common(p)
        if name == "spectrum":
            p.add_argument("--type", choices=[t.value for t in QuadricType])
        p.add_argument("--exhaustive", action="store_true")
        p.add_argument("--samples", type=_positive, default=1_000_000, metavar="N")
        p.add_argument("--seed", type=_seed, default=0, metavar="S")
    return parser


def _parse_coeffs(field: FieldParams, text: str) -> QuadricCoeffs:
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"--coeffs is not valid JSON: {text!r}") from None
    if not isinstance(data, dict):
        raise UsageError(f"--coeffs must be a JSON object: {text!r}")
    for k in data:
        if k not in COEFF_NAMES:
            raise UsageError(f"unknown coefficient key: {k!r}")
    full = {k: data.get(k, 0) for k in COEFF_NAMES}
    for k, v in full.items():
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise UsageError(f"bad value for {k}: {json.dumps(v)}")
        if isinstance(v, str):
            try:
                field.parse_fq2(v)
            except ValueError:
                raise UsageError(f"bad value for {k}: {v!r}") from None
    try:
        return QuadricCoeffs.from_dict(field, full)
    except HermquadError as exc:
        raise UsageError(str(exc)) from None


def make_config(args: argparse.Namespace) -> RunConfig:
    try:
        F = field_for_q(args.q)
    except HermquadError as exc:
        raise UsageError(f"--q {args.q}: {exc}") from None
    coeffs = _parse_coeffs(F, args.coeffs) if getattr(args, "coeffs", None) is not None else None
    t = getattr(args, "type", None)
    types = (QuadricType(t),) if t else (QuadricType.ELLIPTIC, QuadricType.HYPERBOLIC, QuadricType.CONE)
    return RunConfig(args.command, F, coeffs, types, getattr(args, "exhaustive", False),
                     getattr(args, "samples", 0), getattr(args, "seed", 0), args.format, args.out)


# -- commands: each returns (exit code, text) ---------------------------------------

def _header(cfg: RunConfig) -> dict:
    return {"command": cfg.command, "field": cfg.field.describe()}


def cmd_count(cfg: RunConfig) -> tuple[int, str]:
    res = oracle.count(cfg.coeffs)
    if cfg.fmt == "csv":
        return EXIT_OK, _csv(["affine", "infinity", "total"], [[res["affine"], res["infinity"], res["total"]]])
    return EXIT_OK, canonical_json(res)


def cmd_classify(cfg: RunConfig) -> tuple[int, str]:
    rep = classifier.classify(cfg.coeffs).to_dict()
    if cfg.fmt == "csv":
        keys = sorted(rep)
        return EXIT_OK, _csv(keys, [[rep[k] for k in keys]])
    return EXIT_OK, canonical_json(rep)


def _mode(cfg: RunConfig) -> str:
    return "exhaustive" if cfg.exhaustive else "sampled"


def cmd_spectrum(cfg: RunConfig) -> tuple[int, str]:
    results = [canonical.spectrum(cfg.field.q, t, _mode(cfg), samples=cfg.samples, seed=cfg.seed)
               for t in cfg.types]
    if cfg.fmt == "csv":
        parts = [r.to_csv() for r in results]
        return EXIT_OK, parts[0] + "".join(p.split("\n", 1)[1] for p in parts[1:])
    body = _header(cfg)
    body["spectra"] = {r.quadric_type.value: r.to_dict() for r in results}
    return EXIT_OK, canonical_json(body)


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    rep = canonical.verify_theorem(cfg.field.q, _mode(cfg), samples=cfg.samples, seed=cfg.seed)
    code = STATUS_EXIT[rep.status]
    if cfg.fmt == "csv":
        return code, rep.to_csv()
    return code, canonical_json(rep.to_dict())


def cmd_extremal(cfg: RunConfig) -> tuple[int, str]:
    try:
        rep = extremal.check_structure(cfg.coeffs)
    except WrongCardinality as exc:
        raise UsageError(f"extremal: {exc}") from None
    code = EXIT_OK if rep.passed else EXIT_FAIL
    d = rep.to_dict()
    if cfg.fmt == "csv":
        return code, _csv(["clause", "status"], [[k, v] for k, v in d["clauses"].items()])
    body = _header(cfg)
    body.update(d)
    body["coeffs"] = cfg.coeffs.to_dict()
    return code, canonical_json(body)


COMMANDS = {
    "count": cmd_count,
    "classify": cmd_classify,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "extremal": cmd_extremal,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the offending token
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = make_config(args)
        code, text = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"hermquad: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out:
        with open(cfg.out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
