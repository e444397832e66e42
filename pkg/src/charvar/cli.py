"""Command-line driver: sampling campaigns, cover diagnostics, Hessian
certification, and the selftest suite.

Every campaign draws per-sample generators keyed by (seed, index), so a
given configuration produces byte-identical output whether samples are
computed serially or across CHARVAR_THREADS workers.  Data goes to
--out (or stdout); human summaries go to stderr.  Exit codes: 0 all
invariants hold, 1 an invariant failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from . import cover, morse, selftest, variety
from .quat import ONE, commutator, gprod, qmul
from .rep import (
    TOL_REL,
    fingerprint,
    fingerprint_digest,
    rep_to_json,
    surface_to_json,
)

K_RANGE = (3, 16)
N_RANGE = (2, 12)
ROUNDTRIP_TOL = 1e-9
LEMMA_TOL = 1e-10


class UsageError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get("CHARVAR_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"CHARVAR_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise UsageError(f"CHARVAR_THREADS must be >= 1, got {value}")
    return value


def _map_indexed(fn: Callable[[int], dict], count: int) -> list[dict]:
    threads = _threads()
    if threads == 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng((seed, index))


def _emit(lines: list[str], out: str | None, sort: bool) -> None:
    if sort:
        lines = sorted(lines)
    text = "\n".join(lines) + ("\n" if lines else "")
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _json_line(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"))


def _check_range(name: str, value: int, lo: int, hi: int) -> None:
    if not lo <= value <= hi:
        raise UsageError(f"{name} must be in {lo}..{hi}, got {value}")


def _parse_n_spec(spec: str) -> list[int]:
    try:
        if ".." in spec:
            lo_s, hi_s = spec.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if lo > hi:
                raise ValueError
            values = list(range(lo, hi + 1))
        else:
            values = [int(spec)]
    except ValueError:
        raise UsageError(f"--n expects an integer or a range like 2..8, got {spec!r}")
    for n in values:
        _check_range("n", n, *N_RANGE)
    return values


def cmd_sample(args: argparse.Namespace) -> int:
    _check_range("k", args.k, *K_RANGE)
    if args.count < 1:
        raise UsageError("count must be >= 1")
    tol = args.tol_rel

    def one(i: int) -> dict:
        sample = variety.sample_point(args.k, _rng(args.seed, i))
        partial = sample.meridians[:-1]
        fp = fingerprint(sample)
        locus = variety.classify_locus(sample)
        residuals = {
            "constraint": abs(variety.eval_f(partial)),
            "product": float(np.linalg.norm(gprod(list(sample.meridians)) - ONE)),
            "traceless": float(np.max(np.abs(sample.meridians[:, 0]))),
        }
        return {
            "index": i,
            "seed": args.seed,
            "k": args.k,
            "locus": locus.label,
            "rank": locus.rank,
            "fingerprint_digest": fingerprint_digest(fp),
            "fingerprint": [float(v) for v in fp.values],
            "residuals": residuals,
        }

    records = _map_indexed(one, args.count)
    failures = [r["index"] for r in records if max(r["residuals"].values()) > tol]
    if args.format == "json":
        lines = [_json_line(r) for r in records]
    else:
        lines = ["index,seed,k,locus,rank,fingerprint_digest,constraint,product,traceless"]
        lines += [
            f"{r['index']},{r['seed']},{r['k']},{r['locus']},{r['rank']},"
            f"{r['fingerprint_digest']},{r['residuals']['constraint']!r},"
            f"{r['residuals']['product']!r},{r['residuals']['traceless']!r}"
            for r in records
        ]
    _emit(lines, args.out, args.sorted)
    worst = max(max(r["residuals"].values()) for r in records)
    if failures:
        print(
            f"sample: {len(failures)} of {args.count} samples exceed tol {tol:g}; "
            f"failing (seed, index) pairs: {[(args.seed, i) for i in failures]}",
            file=sys.stderr,
        )
        return 1
    print(f"sample: k={args.k} count={args.count} max residual {worst:.3e} ok", file=sys.stderr)
    return 0


def cmd_cover_push(args: argparse.Namespace) -> int:
    if args.count < 1:
        raise UsageError("count must be >= 1")

    def one(i: int) -> dict:
        surface = cover.pushforward(variety.sample_point(6, _rng(args.seed, i)))
        record = {"index": i, "seed": args.seed}
        record.update(surface_to_json(surface))
        record["relation_residual"] = _relation_residual(surface)
        return record

    records = _map_indexed(one, args.count)
    lines = [_json_line(r) for r in records]
    _emit(lines, args.out, args.sorted)
    worst = max(r["relation_residual"] for r in records)
    ok = worst <= args.tol_rel
    print(f"cover push: count={args.count} max relation residual {worst:.3e}", file=sys.stderr)
    return 0 if ok else 1


def _relation_residual(surface) -> float:
    rel = qmul(commutator(surface.r1, surface.s1), commutator(surface.r2, surface.s2))
    return float(np.linalg.norm(rel - ONE))


def cmd_cover_extend(args: argparse.Namespace) -> int:
    if args.count < 1:
        raise UsageError("count must be >= 1")

    def one(i: int) -> dict:
        surface = cover.surface_sample(_rng(args.seed, i))
        out = {"index": i, "seed": args.seed, "lifts": []}
        for sign in (1, -1):
            lifted = cover.extend(surface, sign)
            out["lifts"].append(
                {
                    "sign": sign,
                    "locus": variety.classify_locus(lifted).label,
                    "meridians": rep_to_json(lifted)["meridians"],
                }
            )
        return out

    try:
        records = _map_indexed(one, args.count)
    except Exception as exc:
        print(f"cover extend: lift failed: {exc}", file=sys.stderr)
        return 1
    _emit([_json_line(r) for r in records], args.out, args.sorted)
    print(f"cover extend: count={args.count} ok", file=sys.stderr)
    return 0


def cmd_cover_roundtrip(args: argparse.Namespace) -> int:
    if args.count < 1:
        raise UsageError("count must be >= 1")

    def one(i: int) -> dict:
        surface = cover.surface_sample(_rng(args.seed, i))
        residuals = {}
        for sign in (1, -1):
            back = cover.pushforward(cover.extend(surface, sign))
            residuals["plus" if sign == 1 else "minus"] = max(
                float(np.linalg.norm(g1 - g2))
                for g1, g2 in zip(surface.generators(), back.generators())
            )
        return {"index": i, "seed": args.seed, "residuals": residuals}

    records = _map_indexed(one, args.count)
    _emit([_json_line(r) for r in records], args.out, args.sorted)
    worst = max(max(r["residuals"].values()) for r in records)
    failures = [r["index"] for r in records if max(r["residuals"].values()) > args.tol_roundtrip]
    if failures:
        print(
            f"cover roundtrip: max residual {worst:.3e} > {args.tol_roundtrip:g}; "
            f"failing (seed, index) pairs: {[(args.seed, i) for i in failures]}",
            file=sys.stderr,
        )
        return 1
    print(f"cover roundtrip: count={args.count} max residual {worst:.3e} ok", file=sys.stderr)
    return 0


def cmd_cover_fiber(args: argparse.Namespace) -> int:
    if args.abelian_points:
        surfaces = [cover.pushforward(r) for r in variety.enumerate_abelian(6)]
    else:
        if args.count < 1:
            raise UsageError("count must be >= 1")
        surfaces = [cover.surface_sample(_rng(args.seed, i)) for i in range(args.count)]
    records = []
    for i, surface in enumerate(surfaces):
        report = cover.fiber(surface, fp_tol=args.tol_fp)
        records.append({"index": i, **cover.fiber_to_json(report)})
    _emit([_json_line(r) for r in records], args.out, args.sorted)
    fraction = sum(r["on_branch"] for r in records) / len(records)
    print(
        f"cover fiber: {len(records)} fibers, branch fraction {fraction:.4f}",
        file=sys.stderr,
    )
    if args.abelian_points and fraction != 1.0:
        print("cover fiber: abelian points must all lie on the branch locus", file=sys.stderr)
        return 1
    return 0


def cmd_morse(args: argparse.Namespace) -> int:
    ns = _parse_n_spec(args.n)
    records = []
    ok = True
    for n in ns:
        report = morse.certify_hessian_numeric(n, step=1e-4)
        ok = ok and report.exact_ok() and report.numeric_ok(args.tol_fd)
        records.append(morse.hessian_report_json(report))
    if args.format == "json":
        lines = [_json_line(r) for r in records]
    else:
        lines = ["n,det_A,pfaffian,b_squared_identity_mod2,eig_positive,eig_negative,fd_max_error"]
        lines += [
            f"{r['n']},{r['det_A']},{r['pfaffian']},{int(r['b_squared_identity_mod2'])},"
            f"{r['eig_positive']},{r['eig_negative']},{r['fd_max_error']!r}"
            for r in records
        ]
    _emit(lines, args.out, args.sorted)
    worst = max(r["fd_max_error"] for r in records)
    print(f"morse: n={args.n} max fd error {worst:.3e}", file=sys.stderr)
    return 0 if ok else 1


def cmd_lemma52(args: argparse.Namespace) -> int:
    if args.count < 1:
        raise UsageError("count must be >= 1")
    per_branch = max(1, args.count // 20)
    records = []
    worst = 0.0
    tally: dict[int, int] = {b: 0 for b in range(1, 8)}

    def push(family: str, index: int, sol) -> None:
        nonlocal worst
        largest = float(sol.residuals.max())
        worst = max(worst, largest)
        tally[sol.branch] += 1
        records.append(
            {"family": family, "index": index, "branch": sol.branch, "max_residual": largest}
        )

    for i in range(args.count):
        surface = cover.surface_sample(_rng(args.seed, i))
        a, b, c, d, _ = cover.section_inputs(surface)
        push("generic", i, cover.lemma52_detailed(a, b, c, d, comm_tol=args.tol_comm))
    for branch in (2, 3, 4, 5, 6, 7):
        for i in range(per_branch):
            quad = selftest._lemma_branch_inputs(
                branch, np.random.default_rng((args.seed, branch, i))
            )
            push(f"branch{branch}", i, cover.lemma52_detailed(*quad, comm_tol=args.tol_comm))
    _emit([_json_line(r) for r in records], args.out, args.sorted)
    coverage = " ".join(f"{b}:{tally[b]}" for b in range(1, 8))
    print(f"lemma52: max residual {worst:.3e}, branch coverage {coverage}", file=sys.stderr)
    return 0 if worst <= args.tol_lemma else 1


def cmd_link_sample(args: argparse.Namespace) -> int:
    ns = _parse_n_spec(args.n)
    if len(ns) != 1:
        raise UsageError("link-sample expects a single n, not a range")
    n = ns[0]
    if args.count < 1:
        raise UsageError("count must be >= 1")
    points = morse.sample_link(n, args.count, np.random.default_rng((args.seed,)))
    bad = [
        i
        for i, pt in enumerate(points)
        if abs(float(np.linalg.norm(pt.zs)) - 1.0) > 1e-12
        or abs(morse.quadratic_form(n, pt.zs)) > 1e-12
    ]
    if args.format == "csv":
        lines = morse.link_csv(points).splitlines()
    else:
        lines = [
            _json_line(
                {
                    "index": i,
                    "zs": [[float(z.real), float(z.imag)] for z in pt.zs],
                    "is_real": pt.is_real,
                }
            )
            for i, pt in enumerate(points)
        ]
    _emit(lines, args.out, args.sorted)
    real_count = sum(pt.is_real for pt in points)
    print(
        f"link-sample: n={n} count={args.count} real-tagged {real_count}",
        file=sys.stderr,
    )
    return 0 if not bad else 1


def cmd_selftest(args: argparse.Namespace) -> int:
    ok, lines = selftest.run_selftest(seed=args.seed)
    _emit(lines, args.out, sort=False)
    print(f"selftest: {'ok' if ok else 'FAILED'}", file=sys.stderr)
    return 0 if ok else 1


def _add_common(parser: argparse.ArgumentParser, count_default: int = 10) -> None:
    parser.add_argument("--count", type=int, default=count_default, help="number of samples")
    parser.add_argument("--seed", type=int, default=0, help="base seed; sample i uses (seed, i)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--sorted", action="store_true", help="sort output lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charvar",
        description="Traceless SU(2) character varieties of punctured spheres.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample the k-punctured variety, classify, fingerprint")
    p.add_argument("--k", type=int, required=True, help="number of punctures (3..16)")
    _add_common(p, count_default=10)
    p.add_argument("--tol-rel", type=float, default=TOL_REL)
    p.set_defaults(fn=cmd_sample)

    c = sub.add_parser("cover", help="the 2-fold branched cover at k = 6")
    csub = c.add_subparsers(dest="subaction", required=True)

    p = csub.add_parser("push", help="pushforward of sampled 6-punctured classes")
    _add_common(p)
    p.add_argument("--tol-rel", type=float, default=TOL_REL)
    p.set_defaults(fn=cmd_cover_push)

    p = csub.add_parser("extend", help="lift sampled surface classes along both sheets")
    _add_common(p)
    p.set_defaults(fn=cmd_cover_extend)

    p = csub.add_parser("roundtrip", help="verify pushforward after extend is the identity")
    _add_common(p, count_default=100)
    p.add_argument("--tol-roundtrip", type=float, default=ROUNDTRIP_TOL)
    p.set_defaults(fn=cmd_cover_roundtrip)

    p = csub.add_parser("fiber", help="enumerate both sheets over surface classes")
    _add_common(p, count_default=100)
    p.add_argument("--tol-fp", type=float, default=1e-6, help="fingerprint dedup tolerance")
    p.add_argument(
        "--abelian-points",
        action="store_true",
        help="use the 16 abelian classes of the 6-punctured sphere as inputs",
    )
    p.set_defaults(fn=cmd_cover_fiber)

    p = sub.add_parser("morse", help="Hessian certification at the abelian points")
    p.add_argument("--n", required=True, help="half the puncture count: an integer or a range like 2..8")
    _add_common(p, count_default=1)
    p.add_argument("--tol-fd", type=float, default=morse.FD_TOL)
    p.set_defaults(fn=cmd_morse)

    p = sub.add_parser("lemma52", help="case-ladder solver campaign with branch coverage")
    _add_common(p, count_default=1000)
    p.add_argument("--tol-comm", type=float, default=cover.COMM_TOL)
    p.add_argument("--tol-lemma", type=float, default=LEMMA_TOL)
    p.set_defaults(fn=cmd_lemma52)

    p = sub.add_parser("link-sample", help="sample the link quadric at an abelian point")
    p.add_argument("--n", required=True, help="half the puncture count (single integer)")
    _add_common(p, count_default=100)
    p.set_defaults(fn=cmd_link_sample)

    p = sub.add_parser("selftest", help="run the named verification suite at reduced counts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
