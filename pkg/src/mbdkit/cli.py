"""Command-line front end.

Subcommands: ``diagnose`` (run one engine on a system/observation pair),
``generate`` (write benchmark instances), ``check`` (validate a candidate
diagnosis), ``bench`` (drive an instance grid and collect statistics).

Exit codes: 0 success; 10 budget exhausted or partial (possibly unsound
assemblage); 20 no diagnosis exists; 64 usage error; 65 parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from .benchgen import (
    EncoderParams,
    encode_netlist,
    gen_buggy_encoder,
    gen_c17,
    per_observation_diagnosis_count,
)
from .engines import (
    EngineConfig,
    aggregated_enumerate,
    assemble,
    ihsd_enumerate,
    separate_enumerate,
)
from .formats import ParseError, parse_mbd, parse_netlist, parse_obs, write_mbd, write_obs
from .hitting import NoDiagnosisError
from .system import ConsistencyChecker, MalformedObservationError

EXIT_OK = 0
EXIT_PARTIAL = 10
EXIT_NO_DIAGNOSIS = 20
EXIT_USAGE = 64
EXIT_PARSE = 65

DEFAULT_TIMEOUT = 600.0  # matches the evaluation protocol


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


@dataclass
class StatsRecord:
    instance: str
    engine: str
    r: Optional[int]
    k: Optional[int]
    vars: int
    clauses: int
    diagnoses: int
    explanations: int
    sat_calls: int
    elapsed_s: float
    exhausted: bool
    percent_enumerated: Optional[float]


STATS_COLUMNS = [
    "instance", "engine", "r", "k", "vars", "clauses", "diagnoses",
    "explanations", "sat_calls", "elapsed_s", "exhausted", "percent_enumerated",
]


def write_stats(records: Sequence[StatsRecord]) -> str:
    """Render run statistics as CSV text."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(STATS_COLUMNS)
    for rec in records:
        writer.writerow([
            rec.instance,
            rec.engine,
            "" if rec.r is None else rec.r,
            "" if rec.k is None else rec.k,
            rec.vars,
            rec.clauses,
            rec.diagnoses,
            rec.explanations,
            rec.sat_calls,
            f"{rec.elapsed_s:.4f}",
            int(rec.exhausted),
            "" if rec.percent_enumerated is None else f"{rec.percent_enumerated:.4f}",
        ])
    return out.getvalue()


def _build_parser() -> _Parser:
    parser = _Parser(prog="mbdkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    diag = sub.add_parser("diagnose", help="enumerate minimal diagnoses")
    diag.add_argument("system", type=Path)
    diag.add_argument("observations", type=Path)
    diag.add_argument("--engine", choices=["ihsd", "aggregated", "separate"], default="ihsd")
    diag.add_argument("--minimality", choices=["subset", "cardinality"], default="subset")
    diag.add_argument("--max-diags", type=int, default=None)
    diag.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    diag.add_argument("--seed", type=int, default=0)
    diag.add_argument("--stats", type=Path, default=None)

    gen = sub.add_parser("generate", help="write benchmark instances")
    gen_sub = gen.add_subparsers(dest="family", required=True)
    enc = gen_sub.add_parser("encoder", help="the buggy-encoder chain family")
    enc.add_argument("--r", type=int, required=True)
    enc.add_argument("--k", type=int, required=True)
    enc.add_argument("--pad-hard", type=int, default=0)
    enc.add_argument("--pad-soft", type=int, default=0)
    enc.add_argument("--seed", type=int, default=0)
    enc.add_argument("-o", "--out-dir", type=Path, required=True)
    c17 = gen_sub.add_parser("c17", help="the six-NAND sample circuit")
    c17.add_argument("-o", "--out-dir", type=Path, required=True)
    net = gen_sub.add_parser("netlist", help="encode a gate netlist")
    net.add_argument("netlist", type=Path)
    net.add_argument("-o", "--out-dir", type=Path, required=True)

    chk = sub.add_parser("check", help="validate a candidate diagnosis")
    chk.add_argument("system", type=Path)
    chk.add_argument("observations", type=Path)
    chk.add_argument("--delta", required=True, help="component ids, e.g. 'c3,c7' or '3,7'")

    bench = sub.add_parser("bench", help="run an instance grid")
    bench.add_argument("--grid", required=True, help="e.g. 'r=10..100..10,k=2..9+20..40..10'")
    bench.add_argument("--engine", choices=["ihsd", "aggregated", "separate"], default="ihsd")
    bench.add_argument("--minimality", choices=["subset", "cardinality"], default="subset")
    bench.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    bench.add_argument("--stats", type=Path, required=True)
    return parser


def _parse_grid(spec: str):
    dims = {}
    for part in spec.split(","):
        if "=" not in part:
            raise _UsageError(f"grid dimension {part!r} lacks '='")
        name, ranges = part.split("=", 1)
        name = name.strip()
        if name not in ("r", "k"):
            raise _UsageError(f"unknown grid dimension {name!r}")
        values: List[int] = []
        for atom in ranges.split("+"):
            pieces = atom.split("..")
            try:
                if len(pieces) == 1:
                    values.append(int(pieces[0]))
                elif len(pieces) == 2:
                    lo, hi = int(pieces[0]), int(pieces[1])
                    values.extend(range(lo, hi + 1))
                elif len(pieces) == 3:
                    lo, hi, step = (int(p) for p in pieces)
                    values.extend(range(lo, hi + 1, step))
                else:
                    raise ValueError
            except ValueError:
                raise _UsageError(f"bad grid range {atom!r}") from None
        dims[name] = values
    if "r" not in dims or "k" not in dims:
        raise _UsageError("grid needs both r=... and k=...")
    return dims["r"], dims["k"]


def _load_instance(system_path: Path, obs_path: Path):
    sd = parse_mbd(system_path.read_text())
    observations = parse_obs(obs_path.read_text(), sd.num_system_vars)
    return sd, observations


@dataclass
class RunOutcome:
    diagnoses: set
    exhausted: bool
    explanations: int
    sat_calls: int
    elapsed: float
    separate_emitted: Optional[int] = None  # per-observation total, separate only


def _run_engine(engine, minimality, sd, observations, max_diags, timeout) -> RunOutcome:
    config = EngineConfig(mode=minimality, max_diagnoses=max_diags, time_budget=timeout)
    found = []
    if engine == "ihsd":
        stats = ihsd_enumerate(sd, observations, config, found.append)
        return RunOutcome(
            set(found), stats.exhausted, stats.explanations_found,
            stats.sat_calls, stats.elapsed_seconds,
        )
    if engine == "aggregated":
        stats = aggregated_enumerate(sd, observations, config, found.append)
        return RunOutcome(
            set(found), stats.exhausted, 0, stats.sat_calls, stats.elapsed_seconds
        )
    result = separate_enumerate(sd, observations, config)
    combined = assemble(result.per_obs, result.all_exhausted)
    return RunOutcome(
        combined.diagnoses, result.all_exhausted, 0, result.stats.sat_calls,
        result.stats.elapsed_seconds, separate_emitted=result.total_emitted,
    )


def _print_diagnoses(diagnoses) -> None:
    lines = sorted(tuple(sorted(d)) for d in diagnoses)
    for line in lines:
        print(" ".join(str(c) for c in line) if line else "(empty)")


def _cmd_diagnose(args) -> int:
    sd, observations = _load_instance(args.system, args.observations)
    try:
        outcome = _run_engine(
            args.engine, args.minimality, sd, observations, args.max_diags, args.timeout
        )
    except NoDiagnosisError as exc:
        print(f"no diagnosis exists: {exc}", file=sys.stderr)
        return EXIT_NO_DIAGNOSIS
    _print_diagnoses(outcome.diagnoses)
    if args.engine == "separate" and not outcome.exhausted:
        print(
            "WARNING: partial per-observation enumeration; "
            "assembled diagnoses are possibly unsound",
            file=sys.stderr,
        )
    if args.stats is not None:
        percent = None
        if args.engine == "separate" and outcome.exhausted:
            percent = 100.0
        record = StatsRecord(
            instance=args.system.stem,
            engine=args.engine,
            r=None,
            k=None,
            vars=sd.num_system_vars,
            clauses=len(sd.clauses),
            diagnoses=len(outcome.diagnoses),
            explanations=outcome.explanations,
            sat_calls=outcome.sat_calls,
            elapsed_s=outcome.elapsed,
            exhausted=outcome.exhausted,
            percent_enumerated=percent,
        )
        args.stats.write_text(write_stats([record]))
    if not outcome.exhausted:
        return EXIT_PARTIAL
    if not outcome.diagnoses:
        return EXIT_NO_DIAGNOSIS
    return EXIT_OK


def _cmd_generate(args) -> int:
    args.out_dir.mkdir(parents=True, exist_ok=True)
    if args.family == "encoder":
        params = EncoderParams(
            r=args.r, k=args.k,
            padding_hard=args.pad_hard, padding_soft=args.pad_soft, seed=args.seed,
        )
        sd, observations = gen_buggy_encoder(params)
        stem = f"encoder_r{args.r}_k{args.k}"
    elif args.family == "c17":
        sd, observations = gen_c17()
        stem = "c17"
    else:
        netlist = parse_netlist(args.netlist.read_text())
        sd = encode_netlist(netlist)
        observations = []
        stem = args.netlist.stem
    system_path = args.out_dir / f"{stem}.mbd"
    system_path.write_text(write_mbd(sd))
    print(system_path)
    if observations:
        obs_path = args.out_dir / f"{stem}.obs"
        obs_path.write_text(write_obs(observations))
        print(obs_path)
    return EXIT_OK


def _parse_delta(spec: str) -> frozenset:
    components = set()
    for tok in spec.split(","):
        tok = tok.strip().lstrip("c")
        if not tok:
            continue
        try:
            components.add(int(tok))
        except ValueError:
            raise _UsageError(f"bad component id {tok!r}") from None
    return frozenset(components)


def _cmd_check(args) -> int:
    sd, observations = _load_instance(args.system, args.observations)
    delta = _parse_delta(args.delta)
    unknown = delta - set(sd.components)
    if unknown:
        raise _UsageError(f"unknown components {sorted(unknown)}")
    checker = ConsistencyChecker(sd)
    if not all(checker.check(delta, obs) for obs in observations):
        print("INVALID")
        return 1
    if not checker.verify_diagnosis(delta, observations):
        print("VALID NONMINIMAL")
        return 1
    print("VALID MINIMAL")
    return EXIT_OK


def _cmd_bench(args) -> int:
    r_values, k_values = _parse_grid(args.grid)
    records = []
    worst = EXIT_OK
    for r in r_values:
        for k in k_values:
            sd, observations = gen_buggy_encoder(EncoderParams(r=r, k=k))
            outcome = _run_engine(
                args.engine, args.minimality, sd, observations, None, args.timeout
            )
            percent = None
            if args.engine == "separate":
                # yield against the closed-form per-observation total
                total = (r - 1) * per_observation_diagnosis_count(k) + 1
                percent = 100.0 * outcome.separate_emitted / total
            records.append(StatsRecord(
                instance=f"encoder_r{r}_k{k}",
                engine=args.engine,
                r=r,
                k=k,
                vars=sd.num_system_vars,
                clauses=len(sd.clauses),
                diagnoses=len(outcome.diagnoses),
                explanations=outcome.explanations,
                sat_calls=outcome.sat_calls,
                elapsed_s=outcome.elapsed,
                exhausted=outcome.exhausted,
                percent_enumerated=percent,
            ))
            if not outcome.exhausted:
                worst = EXIT_PARTIAL
            print(
                f"encoder_r{r}_k{k}: {len(outcome.diagnoses)} diagnoses "
                f"in {outcome.elapsed:.2f}s (exhausted={outcome.exhausted})",
                file=sys.stderr,
            )
    args.stats.write_text(write_stats(records))
    return worst


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "diagnose":
            return _cmd_diagnose(args)
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_bench(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, MalformedObservationError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
