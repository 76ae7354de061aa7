"""
Command-line interface for snorm.

Usage:
    snorm eval --norm '{"family":"kyfan","k":2}' --matrix diag321.csv
    snorm dual --norm '{"family":"kyfan","k":2}' --eta 3,1,1,1 [--numeric]
    snorm attain --model example.json --k 3 [--pi 1,1/2,1/4 | --p 2]
    snorm classify --model example.json
    snorm counterexample --L 1/2 --iters 50
    snorm phistar --model ones_then_below --L 1/2 --horizon 500
    snorm verify --suite all --seed 42 [--table-dir out/ --table-format parquet]

``--model`` takes a JSON file or the name of a built-in corpus model.
Every command prints one JSON report (or writes it to ``--output``);
logs go to stderr. Exit codes: 0 success, 1 verification violations,
2 input or module errors.

Flags override values from ``--config run.yaml``; the ``SNORM_SEED``
environment variable overrides the configured seed unless ``--seed`` is
given.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from pydantic import ValidationError

from snorm.attainment import is_k_norming, is_norming_general, is_pk_norming, is_weighted_norming
from snorm.classify import an_witness, decompose_alpha_kf, decompose_matrix, is_an_member
from snorm.config import RunConfig, load_model_file, parse_number_list, read_config_values, read_matrix_csv, resolve_seed
from snorm.corpus_registry import get_model
from snorm.duality import adjoint_argmax
from snorm.exceptions import ParseError, SnormError
from snorm.export import export_verify_tables
from snorm.norms import NormFamily, SpectrumVector, op_norm
from snorm.report import build_report, dump_report, to_jsonable
from snorm.sn_ideal import PiWeight, non_attainment_demo, phi_pi_star_norm_model
from snorm.spectra.models import DiagonalModel
from snorm.spectra.snumbers import s_numbers_matrix, s_numbers_model
from snorm.verify import verify_all

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_INPUT_ERROR = 2


@dataclass
class RunOutcome:
    exit_code: int
    report: dict[str, Any]


# ---------------------------------------------------------------------------
# Input resolution
# ---------------------------------------------------------------------------

def resolve_model(ref: str) -> DiagonalModel:
    """A model JSON path, or else a built-in corpus model name."""
    if Path(ref).exists():
        return load_model_file(ref)
    if ref.endswith(".json"):
        raise ParseError(f"Model file not found: {ref}")
    return get_model(ref)


def _operator(config: RunConfig) -> tuple[Any, str]:
    if config.model:
        return resolve_model(config.model), "model"
    assert config.matrix is not None
    return read_matrix_csv(config.matrix), "matrix"


def _family(config: RunConfig) -> NormFamily:
    assert config.norm is not None
    return config.norm.to_family()


def _weight(config: RunConfig) -> PiWeight:
    return PiWeight.rule(config.L, config.c)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _cmd_eval(config: RunConfig) -> tuple[dict[str, Any], dict[str, Any], int]:
    phi = _family(config)
    target, kind = _operator(config)
    value = op_norm(phi, target)
    if kind == "model":
        snumbers = s_numbers_model(target)
        head = snumbers.values(max(phi.k or 1, len(snumbers.head)))
        provenance = {"s_numbers": "peel-off recursion", "mixed_case": snumbers.mixed_case}
    else:
        head = list(s_numbers_matrix(target).head)
        provenance = {"s_numbers": "one-sided Jacobi SVD"}
    provenance["formula"] = "Phi(s(T))"
    return {"value": value, "s_numbers": head}, provenance, EXIT_OK


def _cmd_dual(config: RunConfig) -> tuple[dict[str, Any], dict[str, Any], int]:
    phi = _family(config)
    assert config.eta is not None
    eta = SpectrumVector.from_raw(config.eta)
    result = adjoint_argmax(phi, eta, numeric=config.numeric)
    results: dict[str, Any] = {"value": result.value, "method": result.method, "xi_star": result.xi_star}
    if result.argmax_m is not None:
        results["argmax_prefix_m"] = result.argmax_m
    return results, {"adjoint": result.method}, EXIT_OK


def _cmd_attain(config: RunConfig) -> tuple[dict[str, Any], dict[str, Any], int]:
    target, kind = _operator(config)
    k = config.k or 1
    if kind == "matrix":
        if config.pi:
            phi = NormFamily.weighted_kyfan(config.pi, k)
        elif config.p is not None:
            phi = NormFamily.psingular(config.p, k)
        else:
            phi = NormFamily.kyfan(k)
        verdict = is_norming_general(target, phi)
    elif config.pi:
        verdict = is_weighted_norming(target, config.pi, k)
    elif config.p is not None:
        verdict = is_pk_norming(target, config.p, k)
    else:
        verdict = is_k_norming(target, k)
    return to_jsonable(verdict), {"decider": "multiplicity count of the top-k s-numbers"}, EXIT_OK


def _cmd_classify(config: RunConfig) -> tuple[dict[str, Any], dict[str, Any], int]:
    target, kind = _operator(config)
    if kind == "matrix":
        report = decompose_matrix(target)
        return {"decomposition": report, "an_member": True}, {"rule": "finite rank: alpha = 0, K = |T|"}, EXIT_OK
    report = decompose_alpha_kf(target)
    results: dict[str, Any] = {"decomposition": report, "an_member": is_an_member(target)}
    witness = an_witness(target, config.k or 1)
    if witness is not None:
        results["witness"] = {
            "selection": witness.selection.describe(),
            "compressed": witness.compressed.describe(),
            "verdict": witness.verdict,
        }
    return results, {"rule": "alpha*I + K + F split at the tail limit"}, EXIT_OK


def _cmd_counterexample(config: RunConfig) -> tuple[dict[str, Any], dict[str, Any], int]:
    report = non_attainment_demo(_weight(config), config.iterations)
    results = {
        "traces": report.traces,
        "phi_values": report.phi_values,
        "gaps": report.gaps,
        "bound": report.bound,
        "final_entries": report.final_entries,
        "strictly_increasing": report.strictly_increasing,
        "all_below_bound": report.all_below_bound,
        "norm_preserved": report.norm_preserved,
        "passed": report.passed,
    }
    return results, {"arithmetic": "exact rational", "pi": report.pi.to_dict()}, EXIT_OK


def _cmd_phistar(config: RunConfig) -> tuple[dict[str, Any], dict[str, Any], int]:
    assert config.model is not None
    result = phi_pi_star_norm_model(resolve_model(config.model), _weight(config), config.horizon, strict=config.strict)
    payload = to_jsonable(result)
    payload["status"] = result.status
    return payload, {"label": result.label, "certificate": "exact tail bound"}, EXIT_OK


def _cmd_verify(config: RunConfig) -> tuple[dict[str, Any], dict[str, Any], int]:
    report = verify_all(config.seed, suites=config.suites, tolerances=config.tolerances)
    if config.table_dir:
        export_verify_tables(report, config.table_dir, config.table_format)
    results = {
        "passed": report.passed,
        "corpus_size": report.corpus_size,
        "suites": report.summary(),
        "violations": {s.name: s.violations for s in report.suites if s.violations},
    }
    code = EXIT_OK if report.passed else EXIT_VIOLATIONS
    return results, {"generator": "numpy PCG64", "seed": config.seed}, code


_COMMANDS = {
    "eval": _cmd_eval,
    "dual": _cmd_dual,
    "attain": _cmd_attain,
    "classify": _cmd_classify,
    "counterexample": _cmd_counterexample,
    "phistar": _cmd_phistar,
    "verify": _cmd_verify,
}


def run(config: RunConfig) -> RunOutcome:
    """Dispatch one command; library and input errors become an exit-2 error report.

    A ``ValueError`` from numeric parsing inside a command is reported the
    same way.
    """
    inputs = config.model_dump(mode="json", exclude_none=True, exclude={"output", "timing"})
    started = time.perf_counter()
    try:
        results, provenance, code = _COMMANDS[config.command](config)
    except (SnormError, ValueError) as exc:
        logger.error("%s failed: %s", config.command, exc)
        error = {"error": type(exc).__name__, "message": str(exc)}
        return RunOutcome(EXIT_INPUT_ERROR, build_report(config.command, inputs, error))
    elapsed = time.perf_counter() - started
    logger.info("%s finished in %.3fs", config.command, elapsed)
    timing = {"total_seconds": elapsed} if config.timing else None
    return RunOutcome(code, build_report(config.command, inputs, results, provenance, timing))


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="Run configuration YAML; flags override its values")
    p.add_argument("--output", help="Write the JSON report here instead of stdout")
    p.add_argument("--seed", type=int, help="64-bit seed (default 42, or $SNORM_SEED)")
    p.add_argument("--timing", action="store_true", default=None, help="Include timing in the report")
    p.add_argument("--log-level", default="WARNING", help="Logging level for stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snorm", description="Symmetric norm attainment toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("eval", "attain", "classify"):
        p = sub.add_parser(name)
        p.add_argument("--model", help="Model JSON file or built-in corpus name")
        p.add_argument("--matrix", help="Matrix CSV file")
        _add_common(p)
    sub.choices["eval"].add_argument("--norm", help="Norm family JSON")
    sub.choices["attain"].add_argument("--k", type=int)
    sub.choices["attain"].add_argument("--pi", help="Weights, e.g. 1,1/2,1/4")
    sub.choices["attain"].add_argument("--p", type=float)
    sub.choices["classify"].add_argument("--k", type=int, help="Rank for the falsifying compression")

    p = sub.add_parser("dual")
    p.add_argument("--norm", help="Norm family JSON")
    p.add_argument("--eta", help="Spectrum, e.g. 3,1,1,1")
    p.add_argument("--numeric", action="store_true", default=None)
    _add_common(p)

    p = sub.add_parser("counterexample")
    p.add_argument("--L", dest="L")
    p.add_argument("--c")
    p.add_argument("--iters", dest="iterations", type=int)
    _add_common(p)

    p = sub.add_parser("phistar")
    p.add_argument("--model")
    p.add_argument("--L", dest="L")
    p.add_argument("--c")
    p.add_argument("--horizon", type=int)
    p.add_argument("--strict", action="store_true", default=None)
    _add_common(p)

    p = sub.add_parser("verify")
    p.add_argument("--suite", dest="suites", action="append", help="Suite name(s) or 'all'")
    p.add_argument("--table-dir", dest="table_dir")
    p.add_argument("--table-format", dest="table_format", choices=["csv", "parquet"])
    _add_common(p)
    return parser


_NOT_CONFIG = {"config", "log_level"}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge ``--config`` file values with explicit flags into a RunConfig.

    Raises:
        ParseError: For malformed JSON flags or an invalid configuration.
    """
    merged: dict[str, Any] = {}
    if args.config:
        merged = dict(read_config_values(args.config))
    flags = {k: v for k, v in vars(args).items() if v is not None and k not in _NOT_CONFIG}
    if isinstance(flags.get("norm"), str):
        try:
            flags["norm"] = json.loads(flags["norm"])
        except json.JSONDecodeError as exc:
            raise ParseError(f"Malformed norm family JSON: {exc}") from exc
    for key in ("eta", "pi"):
        if isinstance(flags.get(key), str):
            flags[key] = parse_number_list(flags[key])
    if "suites" in flags:
        flags["suites"] = [s.strip() for item in flags["suites"] for s in item.split(",") if s.strip()]
    merged.update(flags)
    try:
        config = RunConfig.model_validate(merged)
    except ValidationError as exc:
        raise ParseError(f"Invalid arguments: {exc}") from exc
    return resolve_seed(config, explicit=args.seed is not None)


def _emit(text: str, output: str | None) -> None:
    if output:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
        logger.info("Report written to %s", path)
    else:
        sys.stdout.write(text + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(asctime)s  %(levelname)-8s  %(name)s  %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
    )
    try:
        config = config_from_args(args)
    except (SnormError, ValueError) as exc:
        error = {"error": type(exc).__name__, "message": str(exc)}
        _emit(dump_report(build_report(args.command, {}, error)), getattr(args, "output", None))
        return EXIT_INPUT_ERROR

    outcome = run(config)
    _emit(dump_report(outcome.report), config.output)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
