"""Command orchestration: each method runs one command and returns a Report."""

import logging
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from . import registry
from .config import Config
from .constructions import (
    affine_algebra,
    affine_line,
    character_extension,
    deformed_bracket,
    elementary_endomorphism,
    product_algebra,
    product_pencil,
    secondary_algebra,
    secondary_pencil,
    special_affine,
    truncated_algebra,
)
from .errors import UsageError
from .flatness import classify_lie_3d, classify_linear_3d, flatness_test
from .formats import (
    algebra_to_model,
    dump_model,
    load_algebra,
    load_pencil,
    parse_dual_expression,
    parse_point,
    pencil_to_model,
)
from .liealg import (
    generic_couple_check,
    is_unimodular,
    jacobi_check,
    modular_vector,
    trace_form,
    unimodular_ideal,
)
from .models import ExitCode, Verdict
from .pencil import find_generic_point, generic_at
from .reporting import Report
from .ring import to_rational

logger = logging.getLogger(__name__)

ALGEBRA_KINDS = ("truncated", "secondary", "affine", "special-affine", "character-extension",
                 "product", "deformed")
PENCIL_KINDS = ("secondary-pencil", "product-pencil")
CONSTRUCT_KINDS = ALGEBRA_KINDS + PENCIL_KINDS

VERDICT_EXIT = {
    Verdict.FLAT: ExitCode.SUCCESS,
    Verdict.NON_FLAT: ExitCode.NON_FLAT,
    Verdict.INAPPLICABLE: ExitCode.INAPPLICABLE,
}


def _require(params: Dict[str, Any], name: str, kind: str) -> Any:
    value = params.get(name)
    if value is None:
        raise UsageError(f"construct {kind} needs --{name.replace('_', '-')}")
    return value


class Workbench:
    """Runs commands against one configuration."""

    def __init__(self, config: Config):
        """
        Args:
            config: Application configuration
        """
        self.config = config

    # ------------------------------------------------------------------
    # check
    # ------------------------------------------------------------------

    def check(self, path: Path) -> Report:
        """Jacobi identity, unimodular ideal and modular vector of an algebra file."""
        started = time.perf_counter()
        L = load_algebra(path)
        report = jacobi_check(L)
        fields: Dict[str, Any] = {"algebra": L.name or str(path), "dimension": L.dim}
        if not report.ok:
            fields["violations"] = [
                f"({v.i + 1}, {v.j + 1}, {v.k + 1}): {', '.join(str(c) for c in v.defect)}"
                for v in report.violations
            ]
            return Report("check", "failed", ExitCode.FAILURE, fields,
                          {"check": time.perf_counter() - started})
        fields["jacobi"] = True
        fields["unimodular"] = is_unimodular(L)
        fields["trace_form"] = list(trace_form(L).coords)
        fields["unimodular_ideal"] = [list(v.coords) for v in unimodular_ideal(L)]
        fields["modular_vector"] = modular_vector(L)
        return Report("check", "ok", ExitCode.SUCCESS, fields, {"check": time.perf_counter() - started})

    # ------------------------------------------------------------------
    # flatness
    # ------------------------------------------------------------------

    def _resolve_point(self, pencil, point_text: Optional[str], base_point):
        if point_text:
            return parse_point(point_text, pencil.dim), "command line"
        if base_point is not None:
            return base_point, "file"
        if pencil.dim % 2 == 0:
            # no generic points exist; flatness_test reports the dimension
            return tuple(Fraction(0) for _ in range(pencil.dim)), "origin"
        logger.debug("searching a generic point: budget=%d seed=%d", self.config.search_budget, self.config.seed)
        found = find_generic_point(pencil, budget=self.config.search_budget, seed=self.config.seed)
        return found, "search"

    def flatness(self, path: Path, point: Optional[str] = None, shift: Optional[str] = None) -> Report:
        """
        Flatness verdict of a pencil file at a point.

        The point comes from the command line, else the file's base point,
        else a seeded search for a generic point.
        """
        started = time.perf_counter()
        pencil, base_point = load_pencil(path)
        fields: Dict[str, Any] = {"pencil": str(path), "dimension": pencil.dim, "kind": pencil.kind}
        resolved, source = self._resolve_point(pencil, point, base_point)
        if resolved is None:
            fields["detail"] = f"no generic point found within {self.config.search_budget} samples"
            return Report("flatness", Verdict.INAPPLICABLE.value, ExitCode.INAPPLICABLE, fields,
                          {"flatness": time.perf_counter() - started})
        if shift is not None:
            pencil = pencil.shifted(to_rational(shift), resolved)
            fields["shift"] = to_rational(shift)
        result = flatness_test(pencil, resolved)
        fields.update({
            "point": list(resolved),
            "point_source": source,
            "verdict": result.verdict,
            "reason": result.reason,
            "lambda": result.lam,
            "denominator_locus": result.denominator_locus,
            "curvature": result.curvature,
        })
        if result.detail:
            fields["detail"] = result.detail
        return Report("flatness", result.verdict.value, VERDICT_EXIT[result.verdict], fields,
                      {"flatness": time.perf_counter() - started})

    # ------------------------------------------------------------------
    # genericity
    # ------------------------------------------------------------------

    def genericity(self, path: Path, point: Optional[str] = None, alpha: Optional[str] = None,
                   beta: Optional[str] = None) -> Report:
        """
        Genericity of a pencil file at a point, or of a couple (alpha, beta)
        on an algebra file when both functionals are given.
        """
        started = time.perf_counter()
        if alpha is not None or beta is not None:
            if alpha is None or beta is None:
                raise UsageError("genericity of a couple needs both --alpha and --beta")
            L = load_algebra(path)
            couple = (L, parse_dual_expression(L, alpha), parse_dual_expression(L, beta))
            report = generic_couple_check(*couple)
            fields: Dict[str, Any] = {
                "algebra": L.name or str(path),
                "alpha": list(couple[1].coords),
                "beta": list(couple[2].coords),
                "pair_generic": report.pair_generic,
                "degeneracy": report.degeneracy,
                "degenerate_parameters": [
                    f"t = {entry.value}" + (f" ({entry.factor})" if entry.factor else "")
                    + (f": {entry.error}" if entry.error else
                       f": abelian={entry.abelian}" if entry.subalgebra else "")
                    for entry in report.degenerate_parameters
                ],
            }
            if report.reason:
                fields["reason"] = report.reason
            status = "generic" if report.generic else "not_generic"
            code = ExitCode.SUCCESS if report.generic else ExitCode.INAPPLICABLE
            return Report("genericity", status, code, fields, {"genericity": time.perf_counter() - started})

        pencil, base_point = load_pencil(path)
        if pencil.dim % 2 == 0:
            raise UsageError(f"genericity is defined in odd dimension, the pencil has dimension {pencil.dim}")
        resolved, source = self._resolve_point(pencil, point, base_point)
        fields = {"pencil": str(path), "dimension": pencil.dim}
        if resolved is None:
            fields["detail"] = f"no generic point found within {self.config.search_budget} samples"
            return Report("genericity", "not_generic", ExitCode.INAPPLICABLE, fields,
                          {"genericity": time.perf_counter() - started})
        certificate = generic_at(pencil, resolved)
        fields.update({
            "point": list(resolved),
            "point_source": source,
            "gcd": certificate.gcd,
            "leading_ok": certificate.leading_ok,
        })
        status = "generic" if certificate.generic else "not_generic"
        code = ExitCode.SUCCESS if certificate.generic else ExitCode.INAPPLICABLE
        return Report("genericity", status, code, fields, {"genericity": time.perf_counter() - started})

    # ------------------------------------------------------------------
    # construct
    # ------------------------------------------------------------------

    def _build_algebra(self, kind: str, params: Dict[str, Any]):
        if kind == "truncated":
            return truncated_algebra(int(_require(params, "m", kind)))
        if kind == "secondary":
            return secondary_algebra(load_algebra(_require(params, "input", kind)))
        if kind == "affine":
            return affine_algebra(int(_require(params, "n", kind)))
        if kind == "special-affine":
            return special_affine(int(_require(params, "n", kind)))
        if kind == "character-extension":
            return character_extension(int(_require(params, "n", kind)), to_rational(_require(params, "a", kind)))
        if kind == "product":
            first = load_algebra(_require(params, "input", kind))
            second = load_algebra(params["input2"]) if params.get("input2") else affine_line()
            return product_algebra(first, second)
        L = load_algebra(_require(params, "input", kind))
        target, source = int(_require(params, "target", kind)), int(_require(params, "source", kind))
        for index in (target, source):
            if not 1 <= index <= L.dim:
                raise UsageError(f"basis index {index} out of range 1..{L.dim}")
        return deformed_bracket(L, elementary_endomorphism(L.dim, target - 1, source - 1))

    def construct(self, kind: str, params: Dict[str, Any], output: Optional[Path] = None) -> Report:
        """
        Build an algebra or a pencil and write it as JSON.

        Args:
            kind: One of CONSTRUCT_KINDS
            params: Parameters named as the command-line options
            output: File to write; the document is printed when omitted
        """
        if kind not in CONSTRUCT_KINDS:
            raise UsageError(f"Unknown construction {kind!r}. Choose one of {', '.join(CONSTRUCT_KINDS)}.")
        started = time.perf_counter()
        provenance = {"construction": kind}
        provenance.update({k: str(v) for k, v in params.items() if v is not None})
        if kind in PENCIL_KINDS:
            L = load_algebra(_require(params, "input", kind))
            alpha = parse_dual_expression(L, _require(params, "alpha", kind))
            beta = parse_dual_expression(L, _require(params, "beta", kind))
            builder = secondary_pencil if kind == "secondary-pencil" else product_pencil
            built = builder(L, alpha, beta)
            provenance.update({k: v for k, v in built.provenance.items() if k != "construction"})
            model = pencil_to_model(built.pencil, built.base_point, provenance)
            fields: Dict[str, Any] = {"kind": kind, "dimension": built.pencil.dim,
                                      "base_point": list(built.base_point)}
        else:
            algebra = self._build_algebra(kind, params)
            model = algebra_to_model(algebra, provenance)
            fields = {"kind": kind, "dimension": algebra.dim, "name": algebra.name}
        if output is None:
            fields["document"] = (model.model_dump(mode="json", exclude_none=True)
                                  if self.config.json_output else dump_model(model))
        else:
            document = dump_model(model)
            Path(output).write_text(document + "\n", encoding="utf-8")
            fields["output"] = str(output)
            logger.debug("wrote %s (%d bytes)", output, len(document))
        return Report("construct", "ok", ExitCode.SUCCESS, fields, {"construct": time.perf_counter() - started})

    # ------------------------------------------------------------------
    # classify3
    # ------------------------------------------------------------------

    def classify_linear(self, path: Path, b2: str, b3: str) -> Report:
        L = load_algebra(path)
        result = classify_linear_3d(L, to_rational(b2), to_rational(b3))
        fields = {
            "algebra": L.name or str(path),
            "coefficients": result.coefficients,
            "quadratic": result.quadratic,
            "flat": result.flat,
            "generic_somewhere": result.generic_somewhere,
            "nonflat_choice_exists": result.nonflat_choice_exists,
        }
        return Report("classify3 linear", "flat" if result.flat else "non_flat", ExitCode.SUCCESS, fields)

    def classify_lie(self, path: Path, path1: Path) -> Report:
        result = classify_lie_3d(load_algebra(path), load_algebra(path1))
        fields = {
            "generic_nonflat": result.generic_nonflat,
            "reason": result.reason,
            "coefficients": result.coefficients,
            "P": result.P,
            "Q": result.Q,
            "proportional": result.proportional,
            "eigenvector_nonflat": result.eigenvector_nonflat,
        }
        status = "non_flat" if result.generic_nonflat else "ok"
        return Report("classify3 lie", status, ExitCode.SUCCESS, fields)

    # ------------------------------------------------------------------
    # verify
    # ------------------------------------------------------------------

    def verify(self, case_ids: Sequence[str] = (), run_all: bool = False) -> Report:
        """Recompute golden cases and compare every fact."""
        if run_all:
            case_ids = registry.case_ids()
        if not case_ids:
            raise UsageError("verify needs --case or --all")
        results = registry.run_cases(list(case_ids), workers=self.config.workers)
        fields: Dict[str, Any] = {}
        for result in results:
            facts: Dict[str, Any] = {}
            if result.error:
                facts["error"] = result.error
            for check in result.checks:
                facts[check.name] = "pass" if check.passed else f"FAIL expected {check.expected!r}, got {check.actual!r}"
            fields[result.case_id] = facts
        passed = all(result.passed for result in results)
        fields["summary"] = f"{sum(r.passed for r in results)}/{len(results)} cases passed"
        timings = {result.case_id: result.seconds for result in results}
        return Report("verify", "passed" if passed else "failed",
                      ExitCode.SUCCESS if passed else ExitCode.FAILURE, fields, timings)
