"""Command-line verification harness.

Subcommands:

  verify-theorem   seeded random-family trials of the ordering identity
  verify-iota      embedding commutator residuals for a structure-constant file
  cancellation     seeded trials of the pairwise cancellation identity
  span-dim         rank of degree-k word products vs. the symmetric dimension
  bernoulli        table of Bernoulli numbers

Reports go to standard output as text (default) or JSON (``--output json``)
and are byte-identical across runs with the same arguments; the elapsed time
is printed to standard error only, so it never perturbs the report bytes.
Exit status: 0 all checks passed, 1 at least one check failed, 2 usage or
input error.

Structure-constant files are JSON documents

    {"n": 3, "entries": [{"k": 3, "i": 1, "j": 2, "num": 1, "den": 1}]}

listing C^k_{ij} values as exact fractions (``den`` defaults to 1).  The
(j, i) mirror of each entry may be omitted and is completed by antisymmetry;
giving both with inconsistent values, or a table failing antisymmetry or the
Jacobi identity after completion, is rejected.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .generators import (
    CoefficientFamily,
    build_generators,
    random_family,
    symmetric_control_family,
)
from .lie import StructureConstants, derived_family, bernoulli, homomorphism_defect
from .ordering import (
    cancellation_check,
    span_dimension,
    theorem_check,
)
from .rng import SplitMix64
from .weyl import WeylElement, format_term

_U64 = 1 << 64


class CLIInputError(Exception):
    """Bad configuration or input file; maps to exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved arguments of one invocation; fully determines the report."""

    command: str
    n: int = 2
    k: int = 2
    n_max: int = 1
    d: int = 1
    trials: int = 1
    seed: int = 0
    sparsity: Fraction = Fraction(1, 2)
    sc_path: str | None = None
    family: str = "random"
    output: str = "text"


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symorder",
        description="Exact verification suites for symmetric-ordering identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, trials: bool = True) -> None:
        p.add_argument("--seed", type=int, default=0, help="64-bit master seed")
        p.add_argument("--sparsity", type=_fraction_arg, default=Fraction(1, 2),
                       help="density of random family entries, rational in [0, 1]")
        if trials:
            p.add_argument("--trials", type=int, default=10, help="number of trials")
        p.add_argument("--output", choices=("text", "json"), default="text",
                       help="report format")

    t = sub.add_parser("verify-theorem", help="check the symmetrized ordering identity")
    t.add_argument("--n", type=int, default=None, help="ambient dimension (default 2)")
    t.add_argument("--k", type=int, default=None, help="word length (default 3)")
    t.add_argument("--n-max", type=int, default=None, help="max family order (default 2)")
    t.add_argument("--d", type=int, default=None,
                   help="generator truncation order (default max(k-1, n_max))")
    t.add_argument("--sc", default=None, help="structure-constant file; uses the derived family")
    t.add_argument("--family", choices=("random", "symmetric-control"), default=None,
                   help="family source (default random)")
    add_common(t)

    i = sub.add_parser("verify-iota", help="check the embedding sends brackets to commutators")
    i.add_argument("--sc", required=True, help="structure-constant file")
    i.add_argument("--d", type=int, default=4, help="report truncation order (default 4)")
    i.add_argument("--output", choices=("text", "json"), default="text", help="report format")

    c = sub.add_parser("cancellation", help="check the pairwise cancellation identity")
    c.add_argument("--n", type=int, default=None, help="ambient dimension (default 3)")
    c.add_argument("--k", type=int, default=None, help="word length (default 4)")
    c.add_argument("--n-max", type=int, default=None, help="max family order (default 2)")
    c.add_argument("--sc", default=None, help="structure-constant file; uses the derived family")
    c.add_argument("--family", choices=("random", "symmetric-control"), default=None,
                   help="family source (default random)")
    add_common(c)

    s = sub.add_parser("span-dim", help="rank of degree-k word products")
    s.add_argument("--n", type=int, default=2, help="ambient dimension")
    s.add_argument("--k", type=int, default=2, help="word length")
    s.add_argument("--n-max", type=int, default=2, help="max family order")
    s.add_argument("--d", type=int, default=None, help="truncation order (default 2k)")
    add_common(s)
    s.set_defaults(trials=3)

    b = sub.add_parser("bernoulli", help="print Bernoulli numbers B_0..B_n_max")
    b.add_argument("--n-max", type=int, default=8, help="largest index")
    b.add_argument("--output", choices=("text", "json"), default="text", help="report format")

    return parser


def load_structure_constants(path: str) -> StructureConstants:
    """Read a structure-constant file, complete mirrors, validate, or reject."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CLIInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CLIInputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "n" not in data:
        raise CLIInputError(f"{path}: expected an object with fields 'n' and 'entries'")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise CLIInputError(f"{path}: 'n' must be a positive integer, got {n!r}")
    explicit: dict[tuple[int, int, int], Fraction] = {}
    for pos, rec in enumerate(data.get("entries", [])):
        if not isinstance(rec, dict):
            raise CLIInputError(f"{path}: entry {pos} is not an object")
        try:
            key = (int(rec["k"]), int(rec["i"]), int(rec["j"]))
            value = Fraction(int(rec["num"]), int(rec.get("den", 1)))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise CLIInputError(f"{path}: entry {pos} is malformed: {exc}") from exc
        if any(not 1 <= idx <= n for idx in key):
            raise CLIInputError(f"{path}: entry {pos} index {key} out of range 1..{n}")
        if key in explicit:
            raise CLIInputError(f"{path}: duplicate entry for C{list(key)}")
        explicit[key] = value
    completed = dict(explicit)
    for (k, i, j), v in explicit.items():
        mirror = (k, j, i)
        if mirror in explicit:
            if explicit[mirror] != -v:
                raise CLIInputError(
                    f"{path}: antisymmetry violation at ({k},{i},{j}): "
                    f"C = {v}, mirror = {explicit[mirror]}"
                )
        else:
            completed[mirror] = -v
    sc = StructureConstants(n, completed)
    violations = sc.validate()
    if violations:
        listed = "; ".join(str(v) for v in violations[:5])
        more = "" if len(violations) <= 5 else f" (+{len(violations) - 5} more)"
        raise CLIInputError(f"{path}: invalid structure constants: {listed}{more}")
    return sc


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    command = args.command
    if command == "bernoulli":
        if args.n_max < 0:
            raise CLIInputError(f"--n-max must be >= 0, got {args.n_max}")
        return RunConfig(command=command, n_max=args.n_max, output=args.output)
    if command == "verify-iota":
        if args.d < 0:
            raise CLIInputError(f"--d must be >= 0, got {args.d}")
        return RunConfig(command=command, d=args.d, sc_path=args.sc, output=args.output)

    if not 0 <= args.seed < _U64:
        raise CLIInputError(f"--seed must be in [0, 2^64), got {args.seed}")
    if not 0 <= args.sparsity <= 1:
        raise CLIInputError(f"--sparsity must be in [0, 1], got {args.sparsity}")
    if args.trials < 1:
        raise CLIInputError(f"--trials must be >= 1, got {args.trials}")

    if command == "span-dim":
        if args.n < 1 or args.k < 1 or args.n_max < 1:
            raise CLIInputError("--n, --k and --n-max must be >= 1")
        d = 2 * args.k if args.d is None else args.d
        if d < args.k - 1:
            raise CLIInputError(f"--d must be >= k - 1 = {args.k - 1}, got {d}")
        return RunConfig(
            command=command, n=args.n, k=args.k, n_max=args.n_max, d=d,
            trials=args.trials, seed=args.seed, sparsity=args.sparsity,
            output=args.output,
        )

    # verify-theorem and cancellation share family-source resolution.
    sc_path = args.sc
    family = args.family
    if sc_path is not None and family == "symmetric-control":
        raise CLIInputError("--sc and --family symmetric-control are mutually exclusive")
    if sc_path is not None:
        family = "derived"
        sc = load_structure_constants(sc_path)
        if args.n is not None and args.n != sc.n:
            raise CLIInputError(f"--n {args.n} does not match the file dimension {sc.n}")
        n = sc.n
        n_max = args.n_max if args.n_max is not None else 2
    elif family == "symmetric-control":
        if args.n is not None and args.n != 2:
            raise CLIInputError("--family symmetric-control requires n = 2")
        if args.n_max is not None and args.n_max != 1:
            raise CLIInputError("--family symmetric-control requires n_max = 1")
        n = 2
        n_max = 1
    else:
        family = "random"
        n = args.n if args.n is not None else (2 if command == "verify-theorem" else 3)
        n_max = args.n_max if args.n_max is not None else 2
    k = args.k if args.k is not None else (3 if command == "verify-theorem" else 4)
    if n < 1 or k < 1 or n_max < 1:
        raise CLIInputError("--n, --k and --n-max must be >= 1")
    if command == "verify-theorem":
        d = args.d if args.d is not None else max(k - 1, n_max)
        if d < k - 1:
            raise CLIInputError(f"--d must be >= k - 1 = {k - 1} for an exact check")
    else:
        d = max(k - 1, n_max)
    return RunConfig(
        command=command, n=n, k=k, n_max=n_max, d=d, trials=args.trials,
        seed=args.seed, sparsity=args.sparsity, sc_path=sc_path, family=family,
        output=args.output,
    )


# -- suite execution -----------------------------------------------------------


def _residual_fields(residual: WeylElement) -> tuple[int, str | None]:
    if residual.is_zero():
        return 0, None
    (xexp, dexp), coeff = residual.sorted_terms()[0]
    return residual.term_count(), format_term(xexp, dexp, coeff)


def _family_source(config: RunConfig) -> Callable[[int], CoefficientFamily]:
    if config.family == "derived":
        sc = load_structure_constants(config.sc_path)
        fam = derived_family(sc, config.n_max)
        return lambda _seed: fam
    if config.family == "symmetric-control":
        fam = symmetric_control_family()
        return lambda _seed: fam
    return lambda seed: random_family(config.n, config.n_max, config.sparsity, seed)


def _run_verify_theorem(config: RunConfig) -> tuple[dict, int]:
    source = _family_source(config)
    master = SplitMix64(config.seed)
    inputs = []
    for t in range(config.trials):
        fam_seed = master.next_u64()
        word = tuple(1 + master.below(config.n) for _ in range(config.k))
        if t % 2 == 1 and config.k >= 2:
            # Odd trials force a repeated letter so non-injective words are
            # always exercised.
            word = (word[0], word[0]) + word[2:]
        inputs.append((t, fam_seed, word))
    records = []
    failures = 0
    for t, fam_seed, word in inputs:
        gens = build_generators(source(fam_seed), config.d)
        result = theorem_check(gens, word)
        count, first = _residual_fields(result.residual)
        if not result.passed:
            failures += 1
        records.append({
            "trial": t,
            "seed": str(fam_seed),
            "word": list(word),
            "passed": result.passed,
            "residual_terms": count,
            "first_offending": first,
        })
    return _report(config, records, failures)


def _run_cancellation(config: RunConfig) -> tuple[dict, int]:
    source = _family_source(config)
    master = SplitMix64(config.seed)
    inputs = []
    for t in range(config.trials):
        fam_seed = master.next_u64()
        word = tuple(1 + master.below(config.n) for _ in range(config.k))
        if t % 2 == 1 and config.k >= 2:
            word = (word[0], word[0]) + word[2:]
        l = 1 + master.below(config.n)
        order = 1 + master.below(config.n_max)
        inputs.append((t, fam_seed, word, l, order))
    records = []
    failures = 0
    for t, fam_seed, word, l, order in inputs:
        residual = cancellation_check(source(fam_seed), word, l, order)
        count, first = _residual_fields(residual)
        passed = residual.is_zero()
        if not passed:
            failures += 1
        records.append({
            "trial": t,
            "seed": str(fam_seed),
            "word": list(word),
            "l": l,
            "order": order,
            "passed": passed,
            "residual_terms": count,
            "first_offending": first,
        })
    return _report(config, records, failures)


def _run_span_dim(config: RunConfig) -> tuple[dict, int]:
    master = SplitMix64(config.seed)
    seeds = [master.next_u64() for _ in range(config.trials)]
    records = []
    failures = 0
    for t, fam_seed in enumerate(seeds):
        fam = random_family(config.n, config.n_max, config.sparsity, fam_seed)
        gens = build_generators(fam, config.d)
        rank, symmetric_dim = span_dimension(gens, config.k)
        passed = rank >= symmetric_dim
        if not passed:
            failures += 1
        records.append({
            "trial": t,
            "seed": str(fam_seed),
            "rank": rank,
            "symmetric_dim": symmetric_dim,
            "passed": passed,
        })
    return _report(config, records, failures)


def _run_verify_iota(config: RunConfig) -> tuple[dict, int]:
    sc = load_structure_constants(config.sc_path)
    records = []
    failures = 0
    for i in range(1, sc.n + 1):
        for j in range(i + 1, sc.n + 1):
            residual = homomorphism_defect(sc, i, j, config.d)
            count, first = _residual_fields(residual)
            passed = residual.is_zero()
            if not passed:
                failures += 1
            records.append({
                "i": i,
                "j": j,
                "passed": passed,
                "residual_terms": count,
                "first_offending": first,
            })
    config_echo = {"sc": config.sc_path, "n": sc.n, "d": config.d}
    return _assemble(config.command, config_echo, records, failures)


def _run_bernoulli(config: RunConfig) -> tuple[dict, int]:
    records = [
        {"index": i, "value": f"{bernoulli(i).numerator}/{bernoulli(i).denominator}"}
        for i in range(config.n_max + 1)
    ]
    return _assemble(config.command, {"n_max": config.n_max}, records, 0)


def _report(config: RunConfig, records: list[dict], failures: int) -> tuple[dict, int]:
    echo: dict = {
        "n": config.n,
        "k": config.k,
        "n_max": config.n_max,
        "d": config.d,
        "trials": config.trials,
        "seed": str(config.seed),
        "sparsity": f"{config.sparsity.numerator}/{config.sparsity.denominator}",
        "family": config.family,
    }
    if config.command == "span-dim":
        del echo["family"]
    if config.command == "cancellation":
        del echo["d"]
    if config.sc_path is not None:
        echo["sc"] = config.sc_path
    return _assemble(config.command, echo, records, failures)


def _assemble(command: str, echo: dict, records: list[dict], failures: int) -> tuple[dict, int]:
    report = {
        "command": command,
        "config": echo,
        "records": records,
        "summary": {
            "checks": len(records),
            "failures": failures,
            "result": "pass" if failures == 0 else "fail",
        },
    }
    return report, (0 if failures == 0 else 1)


_RUNNERS = {
    "verify-theorem": _run_verify_theorem,
    "verify-iota": _run_verify_iota,
    "cancellation": _run_cancellation,
    "span-dim": _run_span_dim,
    "bernoulli": _run_bernoulli,
}


def run(config: RunConfig) -> tuple[dict, int]:
    """Execute the configured suite; returns (report, exit status)."""
    return _RUNNERS[config.command](config)


# -- rendering ------------------------------------------------------------------


def _record_line(command: str, rec: dict) -> str:
    if command == "bernoulli":
        num, den = rec["value"].split("/")
        shown = num if den == "1" else f"{num}/{den}"
        return f"B_{rec['index']} = {shown}"
    if command == "verify-iota":
        head = f"pair ({rec['i']},{rec['j']}):"
    elif command == "span-dim":
        return (
            f"trial {rec['trial']}: seed={rec['seed']} rank={rec['rank']} "
            f"symmetric_dim={rec['symmetric_dim']} "
            + ("pass" if rec["passed"] else "fail")
        )
    else:
        head = f"trial {rec['trial']}: seed={rec['seed']} word=" + ",".join(
            str(a) for a in rec["word"]
        )
        if command == "cancellation":
            head += f" l={rec['l']} order={rec['order']}"
    if rec["passed"]:
        return f"{head} pass"
    return (
        f"{head} fail residual_terms={rec['residual_terms']} "
        f"first={rec['first_offending']}"
    )


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    for key, value in report["config"].items():
        lines.append(f"{key}: {value}")
    for rec in report["records"]:
        lines.append(_record_line(report["command"], rec))
    summary = report["summary"]
    lines.append(f"checks: {summary['checks']}")
    lines.append(f"failures: {summary['failures']}")
    lines.append(f"result: {summary['result']}")
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    start = time.perf_counter()
    try:
        config = _resolve_config(args)
        report, status = run(config)
    except CLIInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render_text(report) if config.output == "text" else render_json(report)
    sys.stdout.write(text)
    print(f"elapsed: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
