#!/usr/bin/env python3
"""
One-Dimensional Chern-Simons Verifier
Command-line orchestrator: validate algebras, compare the one-loop partition routes, run numeric checks
"""

import argparse
import logging
import math
import os
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src'))

from analytic import (AnalyticError, ModeModel, analytic_wheel_trace, position_wheel_convergence,
                      sign_limit, successive_differences)
from chern import obstruction_degree_check, one_loop_partition, serialize_alpha_polynomial
from config import QUANTITIES, RG_TOLERANCE, WHEEL_SCALE, WHEEL_TOLERANCE, ConfigError, RunConfig, load_config
from functional import (FieldSpace, FunctionalError, chern_simons_functional, gm_weight_report, kernel_reach,
                        one_form_window, propagator_kernel, qme_report, rg_flow)
from linfty import AlgebraError, LInftyAlgebra, cyclic_check, double, jacobi_check, load_algebra_file
from report_generator import ReportGenerator

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

DEFAULT_FLOW_ALGEBRA = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'algebras', 'sl2.json')

Check = Dict[str, object]


def print_header(text: str) -> None:
    print("\n" + "=" * 70)
    print(f"  {text}")
    print("=" * 70 + "\n")


def _check(name: str, passed: bool, detail: str = "") -> Check:
    return {"name": name, "passed": bool(passed), "detail": detail}


def _run_checks(tasks: List[Tuple[str, Callable[[], Check]]], threads: int) -> List[Check]:
    """Independent checks on a worker pool; results come back in submission order"""
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(task) for _, task in tasks]
        return [future.result() for future in futures]


# validate

def _jacobi(g: LInftyAlgebra, label: str) -> Callable[[], Check]:
    def task() -> Check:
        report = jacobi_check(g)
        return _check(f"{label}: d² = 0", report.passed, report.failure or f"{report.checked} generators through order {report.order}")
    return task


def _cyclic(h: LInftyAlgebra, label: str) -> Callable[[], Check]:
    def task() -> Check:
        report = cyclic_check(h)
        return _check(f"{label}: cyclic pairing", report.passed, report.failure or f"{report.checked} tuples")
    return task


def cmd_validate(cfg: RunConfig) -> Tuple[int, Dict]:
    g = load_algebra_file(cfg.algebra_path)
    tasks = [("jacobi", _jacobi(g, g.name))]
    if g.pairing is not None:
        tasks.append(("pairing", _cyclic(g, g.name)))
    if g.is_curved:
        tasks.append(("curvature", lambda: _check("curvature", True, "ℓ0 ≠ 0; nilpotent marker " + ("set" if g.nilpotent_curvature else "absent"))))
    else:
        h = double(g)
        tasks.append(("double jacobi", _jacobi(h, h.name)))
        tasks.append(("double pairing", _cyclic(h, h.name)))

    checks = _run_checks(tasks, cfg.threads)
    failed = [c for c in checks if not c["passed"]]
    report = {
        "command": "validate",
        "algebra": g.name,
        "passed": not failed,
        "parameters": {"dim": g.dim, "max_arity": g.max_arity},
        "checks": checks,
        "failure": failed[0]["detail"] if failed else None,
    }
    return (EXIT_CHECK_FAILED if failed else EXIT_OK), report


# partition

def cmd_partition(cfg: RunConfig) -> Tuple[int, Dict]:
    g = load_algebra_file(cfg.algebra_path)
    jacobi = jacobi_check(g)
    if not jacobi.passed:
        report = {"command": "partition", "algebra": g.name, "passed": False,
                  "checks": [_check("d² = 0", False, jacobi.failure)], "failure": jacobi.failure}
        return EXIT_CHECK_FAILED, report

    partition = one_loop_partition(g, cfg.max_k)
    degrees = obstruction_degree_check(g, 2 * cfg.max_k)
    checks = [
        _check("graph route = genus route", partition.equal, partition.failure or ""),
        _check("log Â_u at u = 1", partition.ahat_u_matches),
        _check("ch_n above obstruction degrees", degrees.passed, degrees.failure or ""),
    ]
    rows = [
        {
            "n": n,
            "chern": str(partition.chern.get(n)),
            "graph": str(parts["graph"]),
            "genus": str(parts["genus"]),
            "stated_sign": partition.stated_sign.get(n, 0),
        }
        for n, parts in sorted(partition.per_k.items())
    ]
    passed = all(c["passed"] for c in checks)
    report = {
        "command": "partition",
        "algebra": g.name,
        "passed": passed,
        "parameters": {"max_k": cfg.max_k},
        "checks": checks,
        "route_a": serialize_alpha_polynomial(g, partition.route_a),
        "route_b": serialize_alpha_polynomial(g, partition.route_b),
        "chern": {str(n): serialize_alpha_polynomial(g, ch) for n, ch in sorted(partition.chern.items())},
        "tables": {"per order": rows},
        "failure": next((c["detail"] or c["name"] for c in checks if not c["passed"]), None),
    }
    return (EXIT_OK if passed else EXIT_CHECK_FAILED), report


# numeric

def _numeric_report(which: str, passed: bool, parameters: Dict, payload: Dict, failure=None) -> Dict:
    report = {"command": "numeric", "which": which, "passed": bool(passed), "parameters": parameters, "failure": failure}
    report.update(payload)
    return report


def _field_space(cfg: RunConfig) -> FieldSpace:
    g = load_algebra_file(cfg.algebra_path or DEFAULT_FLOW_ALGEBRA)
    h = g if g.pairing is not None else double(g)
    return FieldSpace(ModeModel(cfg.mode_cutoff), h)


def numeric_zeta_trace(cfg: RunConfig) -> Dict:
    result = analytic_wheel_trace(ModeModel(cfg.mode_cutoff), cfg.wheel_n)
    return _numeric_report("zeta-trace", result.passed, {"K": cfg.mode_cutoff, "n": cfg.wheel_n}, {"result": result.to_dict()},
                           None if result.passed else f"|trace - target| = {result.abs_err:.3e} exceeds {result.bound:.3e}")


def numeric_sign_limit(cfg: RunConfig) -> Dict:
    result = sign_limit(ModeModel(cfg.mode_cutoff))
    return _numeric_report("sign-limit", result.passed, {"K": cfg.mode_cutoff}, {"result": result.to_dict()},
                           None if result.passed else f"deviation {result.abs_err:.3e} exceeds {result.bound}")


def wheel_criterion(n: int, results) -> Tuple[bool, List[float], Optional[str]]:
    """
    n = 1 must vanish exactly. Otherwise no point may be flagged, the
    successive ε-differences must shrink and the last one must sit within
    WHEEL_TOLERANCE of the finest value.
    """
    values = [r.value for r in results]
    differences = successive_differences(values)
    if n == 1:
        passed = all(v == 0.0 for v in values)
        return passed, differences, None if passed else "one-vertex wheel weight is not exactly zero"
    flagged = [r.epsilon for r in results if r.flagged]
    if flagged:
        return False, differences, f"quadrature did not settle at ε = {flagged}"
    if not all(b < a for a, b in zip(differences, differences[1:])):
        return False, differences, f"successive differences {differences} do not decrease"
    if differences and differences[-1] > WHEEL_TOLERANCE * abs(values[-1]):
        return False, differences, f"last difference {differences[-1]:.3e} exceeds {WHEEL_TOLERANCE:.0e} of |W| = {abs(values[-1]):.3e}"
    return True, differences, None


def numeric_position_wheel(cfg: RunConfig) -> Dict:
    L = cfg.scale if math.isfinite(cfg.scale) else WHEEL_SCALE
    results = position_wheel_convergence(cfg.wheel_n, L=L)
    passed, differences, failure = wheel_criterion(cfg.wheel_n, results)
    return _numeric_report("appendixF", passed, {"n": cfg.wheel_n, "L": L},
                           {"differences": differences, "tables": {"convergence": [r.to_dict() for r in results]}}, failure)


def numeric_rgflow(cfg: RunConfig) -> Dict:
    """W(P_ε^L, W(P_0^ε, I_CS)) against W(P_0^L, I_CS) on the one-form window of scale L"""
    space = _field_space(cfg)
    reach = kernel_reach(space.model, cfg.scale)
    window = one_form_window(space, reach)
    I = chern_simons_functional(space, reach)
    staged = rg_flow(propagator_kernel(space, cfg.epsilon, cfg.scale),
                     rg_flow(propagator_kernel(space, 0.0, cfg.epsilon), I, cfg.deg, window), cfg.deg, window)
    direct = rg_flow(propagator_kernel(space, 0.0, cfg.scale), I, cfg.deg, window)
    difference = (staged - direct).norm()
    weight = gm_weight_report(direct)
    passed = difference <= RG_TOLERANCE and weight.passed
    failure = None
    if difference > RG_TOLERANCE:
        failure = f"semigroup defect {difference:.3e} exceeds {RG_TOLERANCE:.0e}"
    elif not weight.passed:
        failure = weight.failure
    return _numeric_report("rgflow", passed,
                           {"K": cfg.mode_cutoff, "D": cfg.deg, "epsilon": cfg.epsilon, "L": cfg.scale,
                            "reach": reach, "algebra": space.h.name},
                           {"result": {"semigroup_defect": difference, "terms": len(direct.terms), "weight_one": weight.passed}}, failure)


def numeric_qme(cfg: RunConfig) -> Dict:
    space = _field_space(cfg)
    result = qme_report(space, cfg.scale, cfg.deg)
    return _numeric_report("qme", result.passed,
                           {"K": cfg.mode_cutoff, "D": cfg.deg, "L": cfg.scale, "reach": result.reach, "algebra": space.h.name},
                           {"result": {"tree_level": result.tree_level, "one_loop": result.one_loop, "terms": result.terms_checked}},
                           result.failure)


NUMERIC = {
    "zeta-trace": numeric_zeta_trace,
    "sign-limit": numeric_sign_limit,
    "appendixF": numeric_position_wheel,
    "rgflow": numeric_rgflow,
    "qme": numeric_qme,
}


def cmd_numeric(cfg: RunConfig) -> Tuple[int, Dict]:
    report = NUMERIC[cfg.which](cfg)
    return (EXIT_OK if report["passed"] else EXIT_CHECK_FAILED), report


COMMANDS = {"validate": cmd_validate, "partition": cmd_partition, "numeric": cmd_numeric}


# output

def emit(report: Dict, cfg: RunConfig) -> None:
    generator = ReportGenerator()
    if cfg.output:
        if cfg.output.endswith(".md"):
            generator.generate_markdown(report, cfg.output)
        elif cfg.output.endswith(".pdf"):
            generator.generate_pdf(report, cfg.output)
        else:
            generator.generate_json(report, cfg.output)
        if cfg.format == "text":
            print(f"📄 Report saved: {cfg.output}")
    if cfg.format == "json":
        if not cfg.output:
            sys.stdout.write(generator.render_json(report))
        return
    for check in report.get("checks") or []:
        mark = "✅" if check["passed"] else "❌"
        print(f"{mark} {check['name']}" + (f": {check['detail']}" if check["detail"] else ""))
    if report.get("result"):
        for key, value in sorted(report["result"].items()):
            print(f"   {key}: {value}")
    if report.get("failure"):
        print(f"❌ {report['failure']}")
    print("✅ PASS" if report["passed"] else "❌ FAIL")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", help="algebra JSON file")
    common.add_argument("--modes", type=int, help="Fourier mode cutoff K (LCS_MODES)")
    common.add_argument("--deg", type=int, help="symmetric degree truncation D (LCS_DEG)")
    common.add_argument("--max-k", dest="max_k", type=int, help="highest k in ch_2k (LCS_MAX_K)")
    common.add_argument("--wheel-n", dest="wheel_n", type=int, help="wheel size for zeta-trace and appendixF (LCS_WHEEL_N)")
    common.add_argument("--epsilon", type=float, help="UV scale ε (LCS_EPSILON)")
    common.add_argument("--scale", type=float, help="IR scale L (LCS_SCALE)")
    common.add_argument("--format", choices=["text", "json"], default=None)
    common.add_argument("--out", help="write the report to PATH (.json, .md or .pdf)")

    parser = argparse.ArgumentParser(description="Verification engine for one-dimensional Chern-Simons theory")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check the L∞ relations and pairings of an algebra")
    sub.add_parser("partition", parents=[common], help="compare the graph and genus routes for I^(1)[∞]")
    numeric = sub.add_parser("numeric", parents=[common], help="run one numeric check")
    numeric.add_argument("which", choices=QUANTITIES)
    return parser


def main(argv=None) -> int:
    """Main workflow orchestrator"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args)
    except ConfigError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    logging.basicConfig(level=getattr(logging, cfg.log_level, logging.WARNING),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")

    if cfg.format == "text":
        print_header(f"🧮 1-D CHERN-SIMONS VERIFIER: {cfg.command.upper()}" + (f" {cfg.which}" if cfg.which else ""))

    try:
        code, report = COMMANDS[cfg.command](cfg)
    except (AlgebraError, AnalyticError, FunctionalError, ConfigError, FileNotFoundError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except Exception as e:
        print(f"\n❌ ERROR: {str(e)}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_INPUT_ERROR

    emit(report, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
