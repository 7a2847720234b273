"""Subcommand handlers

Every handler takes the parsed arguments, prints key=value lines on stdout and
returns an exit code. Validation problems surface as ValueError and are mapped
to an exit code by the caller.
"""
import argparse
import logging
from pathlib import Path
from typing import Any, Dict

from goursat4d.core.config import settings
from goursat4d.core.grid import make_grid
from goursat4d.models import DOMINANT, CoefficientSet
from goursat4d.schemas import BoundaryMode, SamplerKind
from goursat4d.services.boundary_data import BoundaryDataService
from goursat4d.services.mms import ManufacturedCaseService
from goursat4d.services.norms import NormService
from goursat4d.services.pde_operator import PDEOperatorService
from goursat4d.services.volterra import VolterraService
from goursat4d.utils.field_io import FieldIO, Problem

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_CONVERGED = 2
EXIT_INVALID = 3


def emit(key: str, value: Any):
    if isinstance(value, float):
        value = repr(value)
    print(f"{key}={value}")


def solver_options(args: argparse.Namespace, problem: Problem = None) -> Dict[str, Any]:
    """Command-line flags override the problem file, which overrides the settings"""
    options = {}
    for name, flag in (("p", "p"), ("tol", "tol"), ("max_iter", "max_iter"), ("rule", "rule"), ("mode", "mode")):
        value = getattr(args, flag, None)
        if value is None and problem is not None:
            value = getattr(problem.spec.solver, name)
        if value is not None:
            options[name] = value
    return options


def emit_report(report):
    emit("converged", str(report.converged).lower())
    emit("iterations", report.iterations)
    emit("last_update", report.last_update)
    emit("residual", report.residual)
    emit("stability_ratio", report.stability_ratio)
    emit("mode", report.mode.value)


def solve(args: argparse.Namespace) -> int:
    problem = FieldIO.load_problem(args.spec)
    options = solver_options(args, problem)
    if problem.mode is BoundaryMode.CLASSICAL:
        solution, report = VolterraService.solve_classical(
            problem.coefficients, problem.classical, problem.rhs, **options)
    else:
        solution, report = VolterraService.solve_problem(problem.coefficients, problem.phi, **options)
    emit_report(report)
    emit("u_max", solution.u.max_abs())
    emit("b_max", solution.b.max_abs())
    out_dir = Path(args.out_dir)
    emit("u_file", FieldIO.save_field(out_dir, "u", solution.u, args.format))
    emit("b_file", FieldIO.save_field(out_dir, "b", solution.b, args.format))
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def convert_bc(args: argparse.Namespace) -> int:
    """Rewrite the boundary data of a problem in the other form"""
    problem = FieldIO.load_problem(args.spec)
    out_dir = Path(args.out_dir)
    if problem.mode is BoundaryMode.CLASSICAL:
        phi = BoundaryDataService.classical_to_nonclassical(problem.classical).with_component(DOMINANT, problem.rhs)
        for index, field in phi.items():
            FieldIO.save_field(out_dir, f"phi_{''.join(str(i) for i in index)}", field, args.format)
        spread = BoundaryDataService.conversion_spread(problem.classical)
        emit("direction", "classical->nonclassical")
        emit("components", len(list(phi.items())))
        emit("max_spread", max(spread.values()))
    else:
        classical = BoundaryDataService.nonclassical_to_classical(problem.phi, args.rule or settings.rule)
        for name, field in classical.as_dict().items():
            FieldIO.save_field(out_dir, name, field, args.format)
        FieldIO.save_field(out_dir, "rhs", problem.rhs, args.format)
        report = BoundaryDataService.check_compatibility(classical, args.tol)
        emit("direction", "nonclassical->classical")
        emit("components", len(classical.as_dict()))
        emit("max_violation", max(report.violations.values()))
    emit("out_dir", out_dir)
    return EXIT_OK


def check_compat(args: argparse.Namespace) -> int:
    problem = FieldIO.load_problem(args.spec)
    if problem.classical is None:
        raise ValueError("check-compat needs a problem with classical boundary data")
    report = BoundaryDataService.check_compatibility(problem.classical, args.tol)
    for name, violation in report.violations.items():
        print(f"identity={name} violation={violation!r}")
    emit("tol", report.tol)
    emit("passed", str(report.passed).lower())
    if not report.passed:
        emit("failed", ";".join(report.failed))
        return EXIT_INVALID
    return EXIT_OK


def scan_homeo(args: argparse.Namespace) -> int:
    grid = make_grid(args.lengths, (args.counts,) * 4)
    result = NormService.homeo_ratio_scan(
        grid,
        p=2.0 if args.p is None else args.p,
        samples=args.samples,
        seed=args.seed,
        sampler=SamplerKind(args.sampler),
        threads=args.threads,
    )
    emit("samples", len(result.ratios))
    emit("p", result.p)
    emit("seed", result.seed)
    emit("sampler", result.sampler.value)
    emit("min_ratio", result.min_ratio)
    emit("max_ratio", result.max_ratio)
    for i, ratio in enumerate(result.ratios):
        print(f"sample={i} ratio={ratio!r}")
    return EXIT_OK


def mms(args: argparse.Namespace) -> int:
    case = ManufacturedCaseService.manufactured_case(args.case)
    grids = [int(n) for n in args.grids.split(",") if n.strip()]
    if not grids:
        raise ValueError("--grids needs at least one node count")
    options = solver_options(args)
    emit("case", case.name)
    if len(grids) == 1:
        grid = make_grid(args.lengths, (grids[0],) * 4)
        solution, report = ManufacturedCaseService.solve_case(case, grid, args.boundary, **options)
        metrics = ManufacturedCaseService.error_metrics(solution, case, options.get("p"))
        emit_report(report)
        emit("u_error", metrics.u_error)
        emit("b_error", metrics.b_error)
        emit("max_error", metrics.max_error)
        return EXIT_OK if report.converged else EXIT_NOT_CONVERGED
    p = options.pop("p", None)
    rows = ManufacturedCaseService.convergence_study(
        case, grids, args.lengths, p=p, threads=args.threads, boundary=args.boundary, **options)
    for row in rows:
        order = "n/a" if row.order is None else repr(row.order)
        print(f"counts={row.counts} spacing={row.spacing!r} error={row.error!r} order={order}")
    emit("max_error", max(row.error for row in rows))
    return EXIT_OK


def apply_op(args: argparse.Namespace) -> int:
    """V_{1,1,2,2} u for a field file, with coefficients from an optional problem file"""
    if args.spec:
        problem = FieldIO.load_problem(args.spec)
        u = FieldIO.load_field(args.field, problem.grid)
        coefficients = problem.coefficients
    else:
        u = FieldIO.load_field(args.field)
        coefficients = CoefficientSet.zeros(u.grid)
    image = PDEOperatorService.apply_V1122(PDEOperatorService.finite_diff_bundle(u), coefficients)
    emit("max_abs", image.max_abs())
    emit("out_file", FieldIO.save_field(Path(args.out_dir), "Vu", image, args.format))
    return EXIT_OK


HANDLERS = {
    "solve": solve,
    "convert-bc": convert_bc,
    "check-compat": check_compat,
    "scan-homeo": scan_homeo,
    "mms": mms,
    "apply-op": apply_op,
}
