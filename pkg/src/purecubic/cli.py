"""Command-line front end: ``purecubic classify | survey | justify | p4-locus``."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from decimal import ROUND_DOWN, Decimal
from fractions import Fraction

import mpmath

from .classify import (
    DEFAULT_PRECISION,
    Classification,
    FieldType,
    PFWitness,
    classify,
    with_mclass,
)
from .criteria import (
    Coarse,
    NotTypeBeta,
    bound_B,
    coarse_conditions,
    coset_minima,
    criterion_input,
    p2_value,
    p4,
)
from .kummer import Undecided
from .radicand import NotACubicField, Species, normalize
from .voronoi import EnumerationOverflow

EXIT_OK, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2

RECORD_KEYS = (
    "d", "a", "b", "species", "f", "R", "type", "Q",
    "period_length", "pf_norms", "m_class", "timing",
)  # fmt: skip


# ------------------------------------------------------------------ records


def survey_record(c: Classification, elapsed: float | None = None) -> dict:
    r = c.radicand
    rec = {
        "d": r.d,
        "a": r.a,
        "b": r.b,
        "species": r.species.value,
        "f": r.f,
        "R": r.R,
        "type": c.type.value,
        "Q": c.Q,
        "period_length": c.period_length,
        "pf_norms": list(c.pf_norms),
        "m_class": c.m_class.kind.value if c.m_class else None,
        "timing": None if elapsed is None else round(elapsed, 6),
    }
    return {k: rec[k] for k in RECORD_KEYS}


def canonical_line(rec: dict) -> str:
    """JSON text of a record without the timing field."""
    return json.dumps({k: v for k, v in rec.items() if k != "timing"}, ensure_ascii=False)


def radicands(lo: int, hi: int):
    """Normalized radicands in [lo, hi]; non-normalized integers are skipped."""
    for m in range(max(lo, 2), hi + 1):
        try:
            if normalize(m).d == m:
                yield m
        except NotACubicField:
            continue


def _survey_one(args: tuple[int, bool, int]) -> dict:
    d, mclass, max_prec = args
    t = time.perf_counter()
    c = classify(d, max_prec=max_prec)
    if mclass and c.type is FieldType.BETA:
        c = with_mclass(c, max_prec=max_prec)
    return survey_record(c, time.perf_counter() - t)


def load_records(path: str) -> list[dict]:
    """Read a JSONL file, truncating a partial or corrupt trailing line."""
    if not os.path.exists(path):
        return []
    out = []
    good = 0
    with open(path, "rb") as fh:
        data = fh.read()
    pos = 0
    while pos < len(data):
        nl = data.find(b"\n", pos)
        if nl < 0:
            break
        try:
            out.append(json.loads(data[pos:nl].decode("utf-8")))
        except (ValueError, UnicodeDecodeError):
            break
        pos = good = nl + 1
    if good < len(data):
        with open(path, "r+b") as fh:
            fh.truncate(good)
    return out


def summary_counts(records) -> Counter:
    return Counter(rec["type"] for rec in records)


def run_survey(
    lo: int,
    hi: int,
    out: str | None,
    workers: int = 1,
    resume: bool = False,
    mclass: bool = False,
    max_prec: int = DEFAULT_PRECISION,
) -> list[dict]:
    """Classify every normalized radicand in [lo, hi]; returns the records in range."""
    done: dict[int, dict] = {}
    if out and resume:
        done = {rec["d"]: rec for rec in load_records(out)}
        if mclass:  # records written without M-classes must be redone
            done = {d: r for d, r in done.items() if r["type"] != "beta" or r["m_class"]}
    elif out and os.path.exists(out):
        os.remove(out)
    todo = [d for d in radicands(lo, hi) if d not in done]
    fh = open(out, "a", encoding="utf-8") if out else None
    results = dict(done)
    jobs = [(d, mclass, max_prec) for d in todo]
    try:
        if workers > 1:
            with ProcessPoolExecutor(workers) as pool:
                stream = pool.map(_survey_one, jobs, chunksize=8)
                for rec in stream:
                    _emit(rec, fh, results)
        else:
            for job in jobs:
                _emit(_survey_one(job), fh, results)
    finally:
        if fh:
            fh.close()
    return [results[d] for d in sorted(results) if lo <= d <= hi]


def _emit(rec: dict, fh, results: dict) -> None:
    results[rec["d"]] = rec
    if fh:
        fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        fh.flush()


# --------------------------------------------------------------- reporting


def _coords(c: tuple, den: int) -> str:
    body = ", ".join(str(x) for x in c)
    return f"({body})" if den == 1 else f"({body})/{den}"


def classify_report(c: Classification) -> str:
    r = c.radicand
    lines = [
        f"d = {r.d} = {r.a}*{r.b}^2, species {r.species.value}, f = {r.f}, R = {r.R}",
        f"chain: {c.chain_used.value} order, period "
        + (f"{c.period_length}" if c.period_length is not None else "not completed (stopped at first principal factor)"),
    ]
    ev = c.evidence
    if isinstance(ev, PFWitness):
        lines.append(f"principal factor at j = {ev.index}: {_coords(ev.coordinates, ev.den)}, norm {ev.norm}")
        if len(c.pf_norms) > 1:
            lines.append(f"principal factor norms in the chain: {', '.join(map(str, c.pf_norms))}")
    else:
        lines.append(f"Q = {ev.Q}")
    if c.principal_factor is not None:
        pf = c.principal_factor
        lines.append(f"principal factor from a cube root: ({pf.x}, {pf.y}, {pf.z})")
    if c.gamma_excluded:
        lines.append(f"type gamma excluded by the prime {c.gamma_excluded.prime} dividing f")
    verdict = f"type {c.type.value}"
    if c.m_class:
        mc = c.m_class
        for name, cv in (("first", mc.first), ("second", mc.second)):
            lines.append(f"{name} coset: minimal norm {cv.norm}, {cv.verdict.value.replace('_', ' ')}")
        if mc.fast_path:
            lines.append(f"integer criteria ({mc.fast_path}):")
            lines.extend("  " + t for t in mc.trace)
        verdict += f", {mc.kind.value}"
    if c.verification:
        lines.extend(_dual_chain_table(c))
    lines.append(verdict)
    return "\n".join(lines)


def _dual_chain_table(c: Classification) -> list[str]:
    v = c.verification
    out = [f"maximal order: period {v.maximal_period}"]
    if c.chain_used.value == "suborder0":
        out.append(f"order Z[delta, delta_bar]: period {c.period_length}")
    phi = []
    if isinstance(c.evidence, PFWitness):
        phi = [(i, c.chain.record(i).norm) for i in c.chain.pf_hits]
    shadow = set()
    for cc in v.cosets:
        status = "minimum" if cc.actual else "not a minimum"
        pred = "agrees" if cc.actual == cc.predicted else "DISAGREES"
        out.append(f"coset norm {cc.norm}: {status} in the maximal order ({pred} with the criteria)")
        shadow.update(cc.shadows)
    # shadows, and other maximal-chain minima sharing a shadow norm
    norms = {n for _, n in shadow if n != 1}
    left = [(rec.index, rec.norm, (rec.index, rec.norm) in shadow)
            for rec in v.chain.records if rec.norm in norms]
    out.append("    i  norm(theta_i)     |     j  norm(phi_j)")
    rows = sorted([(i, "L", n, ok) for i, n, ok in left] + [(j, "R", n, None) for j, n in phi],
                  key=lambda t: -t[0])
    for idx, side, n, ok in rows:
        if side == "L":
            mark = "shadow" if ok else "other"
            out.append(f"{idx:>5}  {n:>13}  {mark:<6}  |")
        else:
            out.append(f"{'':>5}  {'':>13}  {'':<6}  | {idx:>5}  {n:>11}")
    end_p = f" {-c.period_length:>5}  {1:>11}" if c.chain_used.value == "suborder0" else ""
    out.append(f"{-v.maximal_period:>5}  {1:>13}  {'unit':<6}  |{end_p}")
    return out


def classification_json(c: Classification) -> dict:
    rec = survey_record(c)
    rec.pop("timing")
    ev = c.evidence
    if isinstance(ev, PFWitness):
        rec["evidence"] = {
            "kind": "pf_witness",
            "index": ev.index,
            "coordinates": list(ev.coordinates),
            "den": ev.den,
            "norm": ev.norm,
        }
    else:
        rec["evidence"] = {"kind": "q_index", "Q": ev.Q}
    rec["chain"] = c.chain_used.value
    rec["gamma_excluded"] = c.gamma_excluded.prime if c.gamma_excluded else None
    if c.m_class:
        mc = c.m_class
        rec["cosets"] = [
            {"norm": cv.norm, "verdict": cv.verdict.value} for cv in (mc.first, mc.second)
        ]
        rec["trace"] = list(mc.trace)
    if c.verification:
        v = c.verification
        rec["verification"] = {
            "maximal_period": v.maximal_period,
            "agrees": v.agrees,
            "cosets": [
                {"norm": cc.norm, "minimum": cc.actual, "shadows": [list(s) for s in cc.shadows]}
                for cc in v.cosets
            ],
        }
    return rec


# ------------------------------------------------------------------ justify


def trunc4(x) -> str:
    """Four decimals, truncated toward zero (the layout of the published table)."""
    q = Decimal(mpmath.nstr(mpmath.mpf(x), 30, strip_zeros=False)) if not isinstance(x, Fraction) else (
        Decimal(x.numerator) / Decimal(x.denominator)
    )
    return str(q.quantize(Decimal("0.0001"), rounding=ROUND_DOWN))


def justify_rows(d: int) -> list[dict]:
    c = classify(d)
    r = c.radicand
    if c.type is not FieldType.BETA:
        raise NotTypeBeta(f"d={r.d} is of type {c.type.value}")
    if r.species is not Species.S2:
        raise NotTypeBeta(f"d={r.d} is of species {r.species.value}, not 2")
    n = c.evidence.norm
    rows = []
    for name, m in zip(("first", "second"), coset_minima(r, n)):
        inp = criterion_input(r, m)
        C = bound_B(-inp.u1 * inp.u2)
        coarse = coarse_conditions(inp)
        rows.append(
            {
                "d": r.d,
                "coset": name,
                "norm": m,
                "y": trunc4(inp.y),
                "C": trunc4(C),
                "coarse": "✓" if coarse is Coarse.FORCES_NON_MINIMUM else "⚡",
                "P2": trunc4(_mp(p2_value(inp))),
                "B": "9.0000",
            }
        )
    return rows


def _mp(e):
    with mpmath.workdps(40):
        r = e.parent
        dl = mpmath.cbrt(r.a * r.b * r.b)
        dbl = mpmath.cbrt(r.a * r.a * r.b)
        return mpmath.mpf(e.x.numerator) / e.x.denominator + (
            mpmath.mpf(e.y.numerator) / e.y.denominator
        ) * dl + (mpmath.mpf(e.z.numerator) / e.z.denominator) * dbl


# ---------------------------------------------------------------- p4 locus


def p4_locus(x0: float, x1: float, y0: float, y1: float, step: float):
    """Rows (kind, X, Y, P4, sign) on a grid, plus the marker lines Y = 2 and Y = sqrt 6."""
    nx = int(round((x1 - x0) / step))
    ny = int(round((y1 - y0) / step))
    xs = [round(x0 + i * step, 12) for i in range(nx + 1)]
    for X in xs:
        for j in range(ny + 1):
            Y = round(y0 + j * step, 12)
            v = p4(Fraction(X).limit_denominator(10**9), Fraction(Y).limit_denominator(10**9))
            yield ("sample", X, Y, float(v), (v > 0) - (v < 0))
    s6 = float(mpmath.sqrt(6))
    for X in xs:
        for Y in (2.0, s6):
            v = p4(X, Y)
            yield ("marker", X, Y, v, (v > 0) - (v < 0))


# --------------------------------------------------------------------- main


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="purecubic", description=__doc__)
    p.add_argument("--precision-budget", type=int, default=DEFAULT_PRECISION, metavar="BITS",
                   help="cap on working precision before a decision is reported as undecided")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("classify", help="classify one field")
    c.add_argument("d", type=int)
    c.add_argument("--mclass", action="store_true")
    c.add_argument("--verify", action="store_true", help="compare with the maximal-order chain")
    c.add_argument("--full-period", action="store_true")
    c.add_argument("--json", action="store_true")

    s = sub.add_parser("survey", help="classify a range of radicands")
    s.add_argument("lo", type=int)
    s.add_argument("hi", type=int)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--resume", action="store_true")
    s.add_argument("--out", default=None)
    s.add_argument("--mclass", action="store_true")
    s.add_argument("--json", action="store_true", help="print the summary as JSON")

    j = sub.add_parser("justify", help="coarse and fine criteria per coset, as CSV")
    j.add_argument("d", type=int, nargs="+")

    q = sub.add_parser("p4-locus", help="sign samples of P4 on a grid, as CSV")
    q.add_argument("--x", type=float, nargs=2, default=(-4.0, 4.0), metavar=("LO", "HI"))
    q.add_argument("--y", type=float, nargs=2, default=(-20.0, 20.0), metavar=("LO", "HI"))
    q.add_argument("--step", type=float, default=0.25)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (Undecided, EnumerationOverflow) as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (NotTypeBeta, NotACubicField, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _dispatch(args) -> int:
    prec = args.precision_budget
    if args.cmd == "classify":
        c = classify(args.d, full_period=args.full_period, mclass=args.mclass,
                     verify=args.verify, max_prec=prec)
        if args.json:
            print(json.dumps(classification_json(c), ensure_ascii=False))
        else:
            print(classify_report(c))
        return EXIT_OK
    if args.cmd == "survey":
        if args.lo < 2:
            raise ValueError("lo must be >= 2")
        recs = run_survey(args.lo, args.hi, args.out, args.workers, args.resume, args.mclass, prec)
        cnt = summary_counts(recs)
        m0 = [rec["d"] for rec in recs if rec["m_class"] == "M0"]
        summary = {
            "lo": args.lo,
            "hi": args.hi,
            "alpha": cnt["alpha"],
            "beta": cnt["beta"],
            "gamma": cnt["gamma"],
            "total": len(recs),
        }
        if args.mclass:
            summary["M0"] = m0
        if args.json:
            print(json.dumps(summary))
        else:
            print(f"{'B':>8} {'alpha':>7} {'beta':>7} {'gamma':>7} {'total':>7}")
            print(f"{args.hi:>8} {cnt['alpha']:>7} {cnt['beta']:>7} {cnt['gamma']:>7} {len(recs):>7}")
            if args.mclass:
                print(f"M0 ({len(m0)}): {', '.join(map(str, m0))}")
        return EXIT_OK
    if args.cmd == "justify":
        w = csv.DictWriter(sys.stdout, ["d", "coset", "norm", "y", "C", "coarse", "P2", "B"],
                           lineterminator="\n")
        w.writeheader()
        for d in args.d:
            for row in justify_rows(d):
                w.writerow(row)
        return EXIT_OK
    if args.cmd == "p4-locus":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["kind", "X", "Y", "P4", "sign"])
        for row in p4_locus(*args.x, *args.y, args.step):
            w.writerow(row)
        return EXIT_OK
    raise ValueError(f"unknown command {args.cmd}")


if __name__ == "__main__":
    sys.exit(main())
