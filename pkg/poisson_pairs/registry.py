"""Golden cases: worked instances whose facts are recomputed and compared as strings."""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from multiprocessing import Pool
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import catalog
from .constructions import (
    affine_coordinates,
    affine_rank_report,
    character_extension,
    deformed_bracket,
    diagonal,
    elementary_endomorphism,
    killing_oneform,
    secondary_applicable,
    secondary_pencil,
    torsion_free,
    truncated_algebra,
)
from .errors import UsageError
from .exterior import DiffForm, contract, exterior_derivative
from .flatness import casimir_proportionality_test, classify_lie_3d, flatness_test, solve_lambda
from .liealg import (
    AlgebraElement,
    ce_d,
    center,
    degeneracy_polynomial,
    generic_couple_check,
    is_unimodular,
    jacobi_check,
    modular_vector,
)
from .pencil import INFINITY, casimirs_at, generic_at, rank_at
from .ring import coordinate_ring, format_poly, format_scalar, poly_constant, rational_to_str

logger = logging.getLogger(__name__)

Facts = Dict[str, str]


@dataclass
class CaseRecord:
    """A worked instance with the canonical strings it must reproduce."""
    case_id: str
    description: str
    provenance: str
    inputs: Dict[str, Any]
    expected: Facts
    compute: Callable[[], Facts]
    slow: bool = False


@dataclass
class FactCheck:
    name: str
    expected: str
    actual: Optional[str]

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class CaseResult:
    case_id: str
    checks: List[FactCheck] = field(default_factory=list)
    seconds: float = 0.0
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(check.passed for check in self.checks)


def _flag(value: bool) -> str:
    return "True" if value else "False"


# ---------------------------------------------------------------------------
# Fact computations
# ---------------------------------------------------------------------------

def _five_dim_facts() -> Facts:
    built = catalog.five_dim_lie_pair()
    p = built.pencil
    return {
        "omega": str(p.omega),
        "omega1": str(p.omega1),
        "d_omega": str(exterior_derivative(p.omega)),
        "d_omega1": str(exterior_derivative(p.omega1)),
        "lambda_found": _flag(solve_lambda(p.omega, p.omega1).found),
        "generic": _flag(generic_at(p, built.base_point).generic),
        "verdict": flatness_test(p, built.base_point).verdict.value,
    }


def _diagonal_extension_facts() -> Facts:
    built = catalog.diagonal_extension_pencil()
    p, point = built.pencil, built.base_point
    casimir = casimirs_at(p, point)[0]
    facts = {
        "generic": _flag(generic_at(p, point).generic),
        "verdict": flatness_test(p, point).verdict.value,
        "modular_vector": str(modular_vector(p.algebra)),
        "casimir": str(casimir),
        "hamiltonian_of_casimir": str(contract(p.bivector, casimir)),
    }
    for a in (1, 2):
        shifted = p.shifted(Fraction(a), point)
        shifted_casimir = casimirs_at(shifted, point)[0]
        facts[f"shift{a}_casimir"] = str(shifted_casimir)
        facts[f"shift{a}_hamiltonian_at_point"] = str(contract(p.bivector, shifted_casimir).at(point))
        facts[f"shift{a}_verdict"] = flatness_test(shifted, point).verdict.value
    return facts


def _plane_normal_form_facts() -> Facts:
    a22, a23, a32, a33, b = (Fraction(x) for x in (1, 0, 1, 2, 1))
    ring = coordinate_ring(3)
    _, x2, x3 = ring.gens

    def c(value):
        return poly_constant(ring, value)

    omega = DiffForm(3, 1, {(1,): -(c(a32) * x2 + c(a33) * x3), (2,): c(a22) * x2 + c(a23) * x3})
    omega1 = DiffForm(3, 1, {(1,): -c(b) * x2, (2,): x3})
    lam = solve_lambda(omega, omega1).lam
    Q = c(b) * x2 ** 2 - x3 ** 2
    f = lam.coefficient((2,)) / x3
    result = classify_lie_3d(catalog.plane_extension(a22, a23, a32, a33), catalog.plane_extension(0, 1, b, 0))
    return {
        "P": format_poly(result.P),
        "Q": format_poly(result.Q),
        "f_times_P": format_scalar(f * result.P),
        "lambda_is_f_omega1": _flag((lam - omega1.map_coefficients(lambda v: f * v)).is_zero()),
        "omega1_is_minus_half_dQ": _flag(
            (omega1 + exterior_derivative(DiffForm(3, 0, {(): Q})).scaled(Fraction(1, 2))).is_zero()),
        "proportional": _flag(result.proportional),
        "eigenvector_nonflat": _flag(result.eigenvector_nonflat),
        "generic_nonflat": _flag(result.generic_nonflat),
    }


def _truncated_facts(m: int) -> Facts:
    L = truncated_algebra(m)
    built = catalog.truncated_pencil(m)
    p, point = built.pencil, built.base_point
    return {
        "jacobi": _flag(jacobi_check(L).ok),
        "modular_vector": str(modular_vector(L)),
        f"d_e{m}": str(p.cocycle),
        f"d_e{m - 1}": str(ce_d(L, catalog.dual_basis(m, m - 1).to_form())),
        "generic": _flag(generic_at(p, point).generic),
        "proportionality_flat": _flag(casimir_proportionality_test(p, point).flat),
        "verdict": flatness_test(p, point).verdict.value,
    }


def _paired_facts(n: int, candidates: Sequence[str]) -> Facts:
    facts = {}
    L, alpha, beta = catalog.paired_couple(n, -1)
    facts["degeneracy"] = format_poly(degeneracy_polynomial(L, alpha, beta))
    facts["closed_form"] = format_poly(catalog.paired_degeneracy(n, -1))
    for a in candidates:
        couple = catalog.paired_couple(n, Fraction(a))
        facts[f"generic_a={a}"] = _flag(generic_couple_check(*couple).generic)
        facts[f"applicable_a={a}"] = _flag(secondary_applicable(*couple))
    return facts


def _affine_rank_facts() -> Facts:
    distinct = affine_rank_report(2, (1, -1), (1, 2))
    repeated = affine_rank_report(3, (-2, 1, 1), (1, 2))
    zero = affine_rank_report(2, (0, 0), (1, 2))
    g = diagonal((1, -1))
    pairing = killing_oneform(g, 2).pair(AlgebraElement(affine_coordinates(2, g)))
    return {
        "distinct_rank": str(distinct.rank),
        "distinct_symplectic": _flag(distinct.symplectic),
        "repeated_rank": str(repeated.rank),
        "repeated_kernel_escapes": _flag(repeated.kernel_escapes),
        "zero_rank": str(zero.rank),
        "killing_g_g": rational_to_str(pairing),
    }


def _character_extension_facts() -> Facts:
    facts = {}
    for a in (1, 2):
        L = character_extension(2, Fraction(a))
        last = L.dim - 1
        de = ce_d(L, DiffForm(L.dim, 1, {(last,): Fraction(1)}))
        facts[f"a={a}_de_coefficient"] = rational_to_str(de.coefficient((0, last)))
        facts[f"a={a}_unimodular"] = _flag(is_unimodular(L))
    return facts


def _nijenhuis_facts(m: int) -> Facts:
    n = (m + 1) // 2
    L = truncated_algebra(m)
    phi = elementary_endomorphism(m, n - 1, m - 1)
    deformed = deformed_bracket(L, phi)
    built = catalog.nijenhuis_truncated_pair(m)
    return {
        "torsion_free": _flag(torsion_free(L, phi)),
        "deformed_unimodular": _flag(is_unimodular(deformed)),
        "center": "; ".join(",".join(rational_to_str(c) for c in v.coords) for v in center(deformed)),
        "generic": _flag(generic_at(built.pencil, built.base_point).generic),
        "verdict": flatness_test(built.pencil, built.base_point).verdict.value,
    }


def _secondary_facts() -> Facts:
    L, alpha, beta = catalog.truncated_couple(5)
    built = secondary_pencil(L, alpha, beta)
    p, point = built.pencil, built.base_point
    return {
        "dimension": str(p.dim),
        "rank_lambda1": str(rank_at(p, point, INFINITY)),
        "generic": _flag(generic_at(p, point).generic),
        "proportionality_flat": _flag(casimir_proportionality_test(p, point).flat),
    }


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

CASES: List[CaseRecord] = [
    CaseRecord(
        case_id="five-dim-nonflat",
        description="generic Lie pair on K^5 with no lambda",
        provenance="flatness counterexample: dimension five, linear brackets",
        inputs={"construction": "five-dim-lie-pair", "point": "1,1,1,0,0"},
        expected={
            "omega": "-x3*dx1^dx2^dx4 + x3*dx1^dx2^dx5 + x2*dx1^dx3^dx4 - x1*dx2^dx3^dx4 + x2*dx2^dx3^dx5",
            "omega1": "x2*dx1^dx3^dx4 - x1*dx1^dx3^dx5 - x1*dx2^dx3^dx4",
            "d_omega": "-3*dx1^dx2^dx3^dx4 + dx1^dx2^dx3^dx5",
            "d_omega1": "-2*dx1^dx2^dx3^dx4",
            "lambda_found": "False",
            "generic": "True",
            "verdict": "non_flat",
        },
        compute=_five_dim_facts,
    ),
    CaseRecord(
        case_id="diagonal-extension-flat",
        description="linear pair of the diagonal extension, flat at p and non-flat after shifting",
        provenance="flat linear pair whose shifts by a*Lambda(p) are not flat",
        inputs={"construction": "diagonal-extension", "point": "0,0,1,0,1", "shifts": [1, 2]},
        expected={
            "generic": "True",
            "verdict": "flat",
            "modular_vector": "d/dx1",
            "casimir": "dx5",
            "hamiltonian_of_casimir": "-x5*d/dx1",
            "shift1_casimir": "-dx2 - dx4 + dx5",
            "shift1_hamiltonian_at_point": "-d/dx1 - d/dx3",
            "shift1_verdict": "non_flat",
            "shift2_casimir": "-2*dx2 - 4*dx4 + dx5",
            "shift2_hamiltonian_at_point": "-d/dx1 - 2*d/dx3",
            "shift2_verdict": "non_flat",
        },
        compute=_diagonal_extension_facts,
    ),
    CaseRecord(
        case_id="plane-normal-form",
        description="dimension-3 Lie pair in normal form, a = (1, 0, 1, 2), b = 1",
        provenance="lambda = f*omega1 with f = -(a22 + a33)/P in the normalized basis",
        inputs={"a22": 1, "a23": 0, "a32": 1, "a33": 2, "b": 1},
        expected={
            "P": "x2^2 - x2*x3 - 2*x3^2",
            "Q": "x2^2 - x3^2",
            "f_times_P": "-3",
            "lambda_is_f_omega1": "True",
            "omega1_is_minus_half_dQ": "True",
            "proportional": "False",
            "eigenvector_nonflat": "True",
            "generic_nonflat": "True",
        },
        compute=_plane_normal_form_facts,
    ),
    CaseRecord(
        case_id="truncated5-pencil",
        description="truncated algebra of dimension 5 and its pencil (Lambda, d e5*)",
        provenance="truncated Witt-type algebra; modular vector m(m-1)/2 d/dx1",
        inputs={"m": 5},
        expected={
            "jacobi": "True",
            "modular_vector": "10*d/dx1",
            "d_e5": "-4*dx1^dx5 - 2*dx2^dx4",
            "d_e4": "-3*dx1^dx4 - dx2^dx3",
            "generic": "True",
            "proportionality_flat": "False",
            "verdict": "non_flat",
        },
        compute=partial(_truncated_facts, 5),
    ),
    CaseRecord(
        case_id="paired-genericity",
        description="paired algebras with n = 3 and weights a_j = j",
        provenance="degeneracy polynomial (n-1)! (1 - (n-1)a) t prod(1 + a_j t)",
        inputs={"n": 3, "a": ["-1", "1/2", "1"]},
        expected={
            "degeneracy": "12*t^3 + 18*t^2 + 6*t",
            "closed_form": "12*t^3 + 18*t^2 + 6*t",
            "generic_a=-1": "True",
            "applicable_a=-1": "True",
            "generic_a=1/2": "True",
            "applicable_a=1/2": "False",
            "generic_a=1": "False",
            "applicable_a=1": "False",
        },
        compute=partial(_paired_facts, 3, ("-1", "1/2", "1")),
    ),
    CaseRecord(
        case_id="paired-genericity-n4",
        description="paired algebras with n = 4, weights a_j = j and the boundary values a = 1/3, 1/2",
        provenance="generic unless a = (n-2)^-1; a = (n-1)^-1 is excluded by the contact requirement",
        inputs={"n": 4, "a": ["-1", "1/3", "1/2", "1"]},
        expected={
            "degeneracy": "144*t^4 + 264*t^3 + 144*t^2 + 24*t",
            "closed_form": "144*t^4 + 264*t^3 + 144*t^2 + 24*t",
            "generic_a=-1": "True",
            "applicable_a=-1": "True",
            "generic_a=1/3": "True",
            "applicable_a=1/3": "False",
            "generic_a=1/2": "False",
            "applicable_a=1/2": "False",
            "generic_a=1": "True",
            "applicable_a=1": "True",
        },
        compute=partial(_paired_facts, 4, ("-1", "1/3", "1/2", "1")),
    ),
    CaseRecord(
        case_id="affine-rank",
        description="rank of d(alpha_g + tau) on Aff(2) and Aff(3)",
        provenance="symplectic differentials on the affine algebra",
        inputs={"distinct": [1, -1], "repeated": [-2, 1, 1], "tau_support": [1, 2]},
        expected={
            "distinct_rank": "6",
            "distinct_symplectic": "True",
            "repeated_rank": "10",
            "repeated_kernel_escapes": "True",
            "zero_rank": "4",
            "killing_g_g": "8",
        },
        compute=_affine_rank_facts,
    ),
    CaseRecord(
        case_id="character-extension",
        description="Aff(2) extended by the character -a tr/n",
        provenance="de* = a id*^e*; unimodular exactly when a = n",
        inputs={"n": 2, "a": [1, 2]},
        expected={
            "a=1_de_coefficient": "1",
            "a=1_unimodular": "False",
            "a=2_de_coefficient": "2",
            "a=2_unimodular": "True",
        },
        compute=_character_extension_facts,
    ),
    CaseRecord(
        case_id="nijenhuis-truncated5",
        description="truncated algebra deformed by e3 (x) e5*",
        provenance="torsion-free deformation with a unimodular deformed bracket",
        inputs={"m": 5},
        expected={
            "torsion_free": "True",
            "deformed_unimodular": "True",
            "center": "0,0,1,0,0",
            "generic": "True",
            "verdict": "non_flat",
        },
        compute=partial(_nijenhuis_facts, 5),
    ),
    CaseRecord(
        case_id="truncated7-pencil",
        description="truncated algebra of dimension 7 and its pencil (Lambda, d e7*)",
        provenance="truncated Witt-type algebra; modular vector m(m-1)/2 d/dx1",
        inputs={"m": 7},
        expected={
            "jacobi": "True",
            "modular_vector": "21*d/dx1",
            "d_e7": "-6*dx1^dx7 - 4*dx2^dx6 - 2*dx3^dx5",
            "d_e6": "-5*dx1^dx6 - 3*dx2^dx5 - dx3^dx4",
            "generic": "True",
            "proportionality_flat": "False",
            "verdict": "non_flat",
        },
        compute=partial(_truncated_facts, 7),
        slow=True,
    ),
    CaseRecord(
        case_id="nijenhuis-truncated7",
        description="truncated algebra deformed by e4 (x) e7*",
        provenance="torsion-free deformation with a unimodular deformed bracket",
        inputs={"m": 7},
        expected={
            "torsion_free": "True",
            "deformed_unimodular": "True",
            "center": "0,0,0,1,0,0,0",
            "generic": "True",
            "verdict": "non_flat",
        },
        compute=partial(_nijenhuis_facts, 7),
        slow=True,
    ),
    CaseRecord(
        case_id="secondary-truncated5",
        description="secondary pencil of truncated(5) with alpha = e5*, beta = e5* + e4*",
        provenance="secondary construction end to end; the heaviest case",
        inputs={"m": 5, "alpha": "e5", "beta": "e5+e4"},
        expected={
            "dimension": "11",
            "rank_lambda1": "10",
            "generic": "True",
            "proportionality_flat": "False",
        },
        compute=_secondary_facts,
        slow=True,
    ),
]

_BY_ID = {case.case_id: case for case in CASES}


def case_ids() -> List[str]:
    return [case.case_id for case in CASES]


def get_case(case_id: str) -> CaseRecord:
    try:
        return _BY_ID[case_id]
    except KeyError:
        raise UsageError(f"Unknown case {case_id!r}. Known cases: {', '.join(case_ids())}") from None


def run_case(case_id: str) -> CaseResult:
    """Recompute one case from scratch and compare every fact."""
    case = get_case(case_id)
    started = time.perf_counter()
    result = CaseResult(case_id=case_id)
    try:
        actual = case.compute()
    except Exception as e:
        logger.debug("case %s raised", case_id, exc_info=True)
        result.error = f"{type(e).__name__}: {e}"
        actual = {}
    for name, expected in case.expected.items():
        result.checks.append(FactCheck(name=name, expected=expected, actual=actual.get(name)))
    result.seconds = time.perf_counter() - started
    logger.debug("case %s: %s in %.2fs", case_id, "passed" if result.passed else "failed", result.seconds)
    return result


def run_cases(ids: Sequence[str], workers: int = 1) -> List[CaseResult]:
    """Run cases in order, in a process pool when workers > 1."""
    for case_id in ids:
        get_case(case_id)
    if workers > 1 and len(ids) > 1:
        with Pool(processes=min(workers, len(ids))) as pool:
            return pool.map(run_case, ids)
    return [run_case(case_id) for case_id in ids]
