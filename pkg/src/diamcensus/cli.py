"""Command-line entry point: census, bound, sample, verify, report.

Exit codes: 0 success, 1 invariant violation, 2 domain or resource error,
3 sampler exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

from diamcensus import census, construct, formulas, lemmas, oracle
from diamcensus.graph import UNBOUNDED, LabeledGraph, diameter, distance_matrix
from diamcensus.kernel import DomainError, ResourceError, pow2_choose2, ratio_str, to_decimal

EXIT_OK, EXIT_VIOLATION, EXIT_DOMAIN, EXIT_EXHAUSTED = 0, 1, 2, 3
CSV_COLUMNS = ("n", "d", "quantity", "value", "scheme", "case_label")


@dataclass
class RunConfig:
    command: str
    n: Optional[int] = None
    d: Optional[int] = None
    seed: int = 0
    shard_count: int = 1
    output_format: str = "json"
    oracle_cap: int = oracle.DEFAULT_CAP
    retry_cap: int = construct.DEFAULT_RETRY_CAP
    digits: int = 12
    extra: Dict[str, Any] = field(default_factory=dict)


@dataclass
class Report:
    config: RunConfig
    rows: List[Dict[str, str]] = field(default_factory=list)
    status: str = "ok"
    messages: List[str] = field(default_factory=list)
    counterexample: Optional[Any] = None

    def add(self, quantity: str, value: Any, n=None, d=None, scheme: str = "", case_label: str = ""):
        self.rows.append(
            {
                "n": "" if n is None else str(n),
                "d": "" if d is None else ("UNBOUNDED" if d == UNBOUNDED else str(d)),
                "quantity": quantity,
                "value": _render(value),
                "scheme": scheme,
                "case_label": case_label,
            }
        )

    def add_ratio(self, quantity: str, value: Fraction, **kw):
        self.add(quantity, ratio_str(value), **kw)
        self.add(quantity + "_decimal", to_decimal(value, self.config.digits), **kw)


def _render(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return ratio_str(value)
    return str(value)


def _emit(report: Report, fmt: str, stream) -> None:
    if fmt == "json":
        payload = {
            "config": asdict(report.config),
            "status": report.status,
            "messages": report.messages,
            "results": report.rows,
        }
        if report.counterexample is not None:
            payload["counterexample"] = report.counterexample
        json.dump(payload, stream, indent=2)
        stream.write("\n")
    elif fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(report.rows)
    else:
        for msg in report.messages:
            stream.write(f"# {msg}\n")
        for row in report.rows:
            label = "/".join(x for x in (row["scheme"], row["case_label"]) if x)
            stream.write(f"n={row['n']:>3} d={row['d']:>9}  {row['quantity']:<28} {row['value']}")
            stream.write(f"  [{label}]\n" if label else "\n")
        stream.write(f"status: {report.status}\n")


# -- commands --------------------------------------------------------------


def cmd_census(cfg: RunConfig) -> Report:
    n = cfg.n
    rep = Report(cfg)
    diam = oracle.diameter_census(n, cap=cfg.oracle_cap, workers=cfg.shard_count)
    pairs = oracle.eccentric_pair_census(n, cap=cfg.oracle_cap, workers=cfg.shard_count)
    for d, count in diam.items():
        rep.add("diameter_count", count, n=n, d=d)
    for d, count in pairs.items():
        rep.add("eccentric_pairs", count, n=n, d=d)
    if n >= 2:
        for d in range(1, n):
            check = census.master_upper_bound_check(n, d, diam[d])
            rep.add("master_lhs", check.lhs, n=n, d=d)
            rep.add("master_rhs", check.rhs, n=n, d=d)
            rep.add("master_holds", check.holds, n=n, d=d)
            if not check.holds:
                rep.status = "violation"
                rep.counterexample = rep.counterexample or {"n": n, "d": d, "lhs": str(check.lhs), "rhs": str(check.rhs)}
    return rep


def cmd_bound(cfg: RunConfig) -> Report:
    n, d = cfg.n, cfg.d
    scheme = cfg.extra["scheme"]
    rep = Report(cfg)
    total = census.eccentric_pair_count(n, d)
    parts = census.case_decomposition(n, d, scheme)
    rep.add("eccentric_pair_total", total, n=n, d=d, scheme=scheme)
    for label, value in parts.items():
        rep.add("case_sum", value, n=n, d=d, scheme=scheme, case_label=label)
    parts_ok = sum(parts.values()) == total
    rep.add("parts_sum_to_total", parts_ok, n=n, d=d, scheme=scheme)
    if not parts_ok:
        rep.status = "violation"
    if scheme == "thm1":
        h = formulas.h1(n, d)
        rep.add("h1", h, n=n, d=d, scheme=scheme)
        rep.add("2h1", 2 * h, n=n, d=d, scheme=scheme)
        rep.add_ratio("C43_over_2h1", Fraction(parts["C43"], 2 * h), n=n, d=d, scheme=scheme, case_label="C43")
        rep.add_ratio("total_over_2h1", Fraction(total, 2 * h), n=n, d=d, scheme=scheme)
        c43_ok = parts["C43"] <= 2 * h
        rep.add("C43_le_2h1", c43_ok, n=n, d=d, scheme=scheme, case_label="C43")
        if not c43_ok:
            rep.status = "violation"
        err = formulas.error_ratio_thm1(n, d)
    else:
        try:
            h = formulas.h2(n, d)
        except DomainError as exc:
            rep.messages.append(f"h2 not reported: {exc}")
        else:
            rep.add("h2", h, n=n, d=d, scheme=scheme)
            rep.add("2h2", 2 * h, n=n, d=d, scheme=scheme)
            rep.add_ratio("H2_shaped_over_2h2", Fraction(parts["H2-shaped"], 2 * h), n=n, d=d, scheme=scheme, case_label="H2-shaped")
            rep.add_ratio("total_over_2h2", Fraction(total, 2 * h), n=n, d=d, scheme=scheme)
        err = formulas.error_ratio_thm2(n, d)
    rep.add_ratio("error_scale", err.value, n=n, d=d, scheme=scheme)
    return rep


def _sample_one(family: str, cfg: RunConfig, rng):
    if family == "h1":
        return construct.sample_h1(cfg.n, cfg.d, rng, cfg.retry_cap)
    if family == "h2":
        return construct.sample_h2(cfg.n, cfg.d, rng, cfg.retry_cap)
    s = cfg.extra["s"]
    draw = construct.sample_block(range(1, s + 1), s + 1, s + 2, rng, cfg.retry_cap)
    return LabeledGraph.from_edges(s + 2, draw.edges)


def _sample_valid(family: str, cfg: RunConfig, G) -> bool:
    if family == "h1":
        return diameter(G) == cfg.d and construct.is_member_h1(G, cfg.d)
    if family == "h2":
        d = cfg.d
        dist = distance_matrix(G)
        far = [(u, v) for u in range(G.n) for v in range(u + 1, G.n) if dist[u][v] >= d]
        return diameter(G) == d and len(far) == 1 and construct.is_member_h2(G, d)
    s = cfg.extra["s"]
    return oracle.block_predicate(G, s + 1, s + 2)


def cmd_sample(cfg: RunConfig) -> Report:
    family = cfg.extra["family"]
    count = cfg.extra["count"]
    out = Path(cfg.extra["out"])
    rep = Report(cfg)
    if family in ("h1", "h2") and (cfg.n is None or cfg.d is None):
        raise DomainError(f"sample {family} needs --n and --d")
    if family == "h1" and not 3 <= cfg.d < cfg.n:
        raise DomainError(f"need 3 <= d < n, got n={cfg.n}, d={cfg.d}")
    if family == "h2":
        construct._check_h2_sampling(cfg.n, cfg.d)
    if family == "block":
        if cfg.extra.get("s") is None or cfg.extra["s"] < 2:
            raise DomainError("sample block needs --s >= 2")
    rng = construct.make_rng(cfg.seed)
    out.mkdir(parents=True, exist_ok=True)
    valid = 0
    for k in range(count):
        G = _sample_one(family, cfg, rng)
        path = out / f"{family}_{k:05d}.txt"
        path.write_text(G.to_text())
        ok = _sample_valid(family, cfg, G)
        valid += ok
        rep.add("sample_diameter", diameter(G), n=G.n, d=cfg.d, case_label=path.name)
        if not ok and rep.counterexample is None:
            rep.counterexample = {"file": str(path), "graph": G.to_text()}
    rep.add("samples_written", count, n=cfg.n, d=cfg.d)
    rep.add("samples_valid", valid, n=cfg.n, d=cfg.d)
    rep.messages.append(f"rng {construct.RNG_ALGORITHM} seed {cfg.seed}")
    if valid != count:
        rep.status = "violation"
    return rep


def _verify_lemma1(cfg: RunConfig, rep: Report) -> bool:
    grid = lemmas.grid_sweep(4, 3)
    rand = lemmas.random_sweep(cfg.extra["trials"], cfg.seed)
    rep.add("lemma1_grid_checked", grid.checked)
    rep.add("lemma1_grid_violations", grid.violations)
    rep.add("lemma1_random_checked", rand.checked)
    rep.add("lemma1_random_violations", rand.violations)
    for res in (grid, rand):
        if res.first_counterexample is not None:
            rep.counterexample = [ratio_str(v) for v in res.first_counterexample.entries]
            return False
    return True


def _verify_gf(cfg: RunConfig, rep: Report) -> bool:
    checked, bad = lemmas.gf_sweep(cfg.extra["max_n"])
    rep.add("gf_profiles_checked", checked)
    if bad is not None:
        rep.counterexample = {"profile": list(bad.profile.sizes), "lhs": str(bad.lhs), "rhs": ratio_str(bad.rhs)}
        return False
    return True


def _verify_oracle_dp(cfg: RunConfig, rep: Report) -> bool:
    top = min(cfg.extra["oracle_max_n"], cfg.oracle_cap)
    for n in range(2, top + 1):
        pairs = oracle.eccentric_pair_census(n, cap=cfg.oracle_cap)
        for d in range(1, n):
            dp = census.eccentric_pair_count(n, d)
            if dp != pairs[d]:
                rep.counterexample = {"n": n, "d": d, "dp": str(dp), "oracle": str(pairs[d])}
                return False
        rep.add("oracle_dp_equal", True, n=n)
    return True


def _verify_eq11(cfg: RunConfig, rep: Report) -> bool:
    for s in range(2, 6):
        count = oracle.block_class_count(s, cap=max(cfg.oracle_cap, s + 2))
        upper = formulas.block_upper_bound(s)
        rep.add("block_count", count, n=s + 2, case_label=f"s={s}")
        rep.add("block_upper", upper, n=s + 2, case_label=f"s={s}")
        if not count < upper:
            rep.counterexample = {"s": s, "count": str(count), "upper": str(upper)}
            return False
    return True


SUITES = {
    "lemma1": _verify_lemma1,
    "gf": _verify_gf,
    "oracle-dp": _verify_oracle_dp,
    "eq11": _verify_eq11,
}


def cmd_verify(cfg: RunConfig) -> Report:
    suite = cfg.extra["suite"]
    rep = Report(cfg)
    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        ok = SUITES[name](cfg, rep)
        rep.add("suite_pass", ok, case_label=name)
        if not ok:
            rep.status = "violation"
            rep.messages.append(f"suite {name} failed")
            break
    return rep


def trend_rows(rep: Report, max_n: int, cap: int) -> None:
    """Non-assertive diagnostics: exact/h1 at d=3, tail ratios, block ratios."""
    for n in range(4, max_n + 1):
        diam = oracle.diameter_census(n, cap=cap)
        ratio = Fraction(diam[3], formulas.h1(n, 3))
        rep.add_ratio("exact_over_h1", ratio, n=n, d=3)
    for n in range(3, max_n + 1):
        diam = oracle.diameter_census(n, cap=cap)
        for d in range(2, n):
            tail = sum(v for k, v in diam.counts.items() if k != UNBOUNDED and k >= d + 1)
            if diam[d]:
                rep.add_ratio("tail_over_exact", Fraction(tail, diam[d]), n=n, d=d)
    for s in range(2, 6):
        count = oracle.block_class_count(s, cap=max(cap, s + 2))
        rep.add_ratio("block_over_upper", Fraction(count, formulas.block_upper_bound(s)), n=s + 2, case_label=f"s={s}")


def cmd_report(cfg: RunConfig) -> Report:
    rep = Report(cfg)
    trend_rows(rep, cfg.extra["max_n"], cfg.oracle_cap)
    return rep


COMMANDS = {
    "census": cmd_census,
    "bound": cmd_bound,
    "sample": cmd_sample,
    "verify": cmd_verify,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1, help="parallel oracle shards")
    common.add_argument("--oracle-cap", type=int, default=None)
    common.add_argument("--retry-cap", type=int, default=construct.DEFAULT_RETRY_CAP)
    common.add_argument("--digits", type=int, default=12, help="significant digits for decimal ratios")
    common.add_argument("--output", type=Path, default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="diamcensus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", parents=[common], help="brute-force diameter and eccentricity census")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("bound", parents=[common], help="exact layer sum, case split and closed forms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--scheme", choices=census.SCHEMES, default="thm1")

    p = sub.add_parser("sample", parents=[common], help="sample typical graphs to exchange-format files")
    p.add_argument("family", choices=("h1", "h2", "block"))
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--s", type=int, help="block size for the block family")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", default="samples", help="directory for graph files")

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("suite", choices=tuple(SUITES) + ("all",))
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--max-n", type=int, default=12, help="largest n for the gf sweep")
    p.add_argument("--oracle-max-n", type=int, default=7)

    p = sub.add_parser("report", parents=[common], help="trend diagnostics against the closed forms")
    p.add_argument("--max-n", type=int, default=7)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    cap = args.oracle_cap if args.oracle_cap is not None else oracle.oracle_cap()
    if cap < 1 or args.retry_cap < 1:
        raise DomainError("caps must be positive")
    extra = {
        k: v
        for k, v in vars(args).items()
        if k not in {"command", "n", "d", "seed", "workers", "output_format", "oracle_cap", "retry_cap", "digits", "output"}
    }
    return RunConfig(
        command=args.command,
        n=getattr(args, "n", None),
        d=getattr(args, "d", None),
        seed=args.seed,
        shard_count=args.workers,
        output_format=args.output_format,
        oracle_cap=cap,
        retry_cap=args.retry_cap,
        digits=args.digits,
        extra=extra,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        report = COMMANDS[args.command](cfg)
    except (DomainError, ResourceError, construct.ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except construct.SamplingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    if args.output is not None:
        with open(args.output, "w", newline="") as fh:
            _emit(report, cfg.output_format, fh)
    else:
        _emit(report, cfg.output_format, sys.stdout)
    return EXIT_VIOLATION if report.status != "ok" else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
