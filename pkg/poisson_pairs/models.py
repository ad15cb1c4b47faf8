"""Enums and result records shared across the package."""

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

if TYPE_CHECKING:
    from .exterior import DiffForm, MultiVector
    from .liealg import AlgebraElement, DualElement


class PencilKind(Enum):
    """How the two bivectors of a pencil were specified."""
    LINEAR_PAIR = "linear_pair"
    LIE_PAIR = "lie_pair"
    RAW = "raw"


class Verdict(Enum):
    """Outcome of a flatness decision."""
    FLAT = "flat"
    NON_FLAT = "non_flat"
    INAPPLICABLE = "inapplicable"


class FlatnessReason(Enum):
    """Structured explanation attached to a verdict."""
    NO_LAMBDA = "no-lambda-solution"
    CURVATURE_NONZERO = "dlambda-nonzero"
    LAMBDA_FOUND = "lambda-found-dim-ge-5"
    CURVATURE_ZERO = "dlambda-zero"
    PRECONDITIONS_FAILED = "criterion-preconditions-failed"


class SubalgebraKind(Enum):
    ZERO = "zero"
    TWO_DIMENSIONAL = "two_dimensional"


class ExitCode(IntEnum):
    """Process exit codes; the machine contract of the CLI."""
    SUCCESS = 0
    FAILURE = 1
    # bad invocation shares the generic failure code
    USAGE = 1
    PARSE = 2
    NON_FLAT = 10
    INAPPLICABLE = 20
    INTERRUPTED = 130


@dataclass
class JacobiViolation:
    """Nonzero Jacobi sum for the basis triple (i, j, k), 0-based."""
    i: int
    j: int
    k: int
    defect: Tuple[Any, ...]


@dataclass
class JacobiReport:
    ok: bool
    violations: List[JacobiViolation] = None

    def __post_init__(self):
        if self.violations is None:
            self.violations = []


@dataclass
class HamiltonianSubalgebra:
    """
    Subalgebra attached to a 1-form alpha with (d alpha)^(n-1) != 0.

    Zero when alpha is contact; otherwise spanned by a Hamiltonian v of alpha
    (i_v d alpha = -alpha) and a generator u of Ker d alpha, with [v, u] = eigenvalue * u.
    """
    kind: SubalgebraKind
    hamiltonian: Optional["AlgebraElement"] = None
    kernel: Optional["AlgebraElement"] = None
    eigenvalue: Any = None

    @property
    def abelian(self) -> Optional[bool]:
        if self.kind is SubalgebraKind.ZERO:
            return None
        return not self.eigenvalue


@dataclass
class DegenerateParameter:
    """A parameter value where alpha + t*beta fails to be contact."""
    value: str
    factor: Optional[str] = None
    subalgebra: Optional[HamiltonianSubalgebra] = None
    error: Optional[str] = None

    @property
    def abelian(self) -> Optional[bool]:
        return self.subalgebra.abelian if self.subalgebra else None


@dataclass
class GenericCoupleReport:
    generic: bool
    pair_generic: bool
    degeneracy: Any = None
    degenerate_parameters: List[DegenerateParameter] = None
    reason: Optional[str] = None

    def __post_init__(self):
        if self.degenerate_parameters is None:
            self.degenerate_parameters = []

    @property
    def witness(self) -> Optional[DegenerateParameter]:
        """First degenerate parameter that breaks genericity."""
        for entry in self.degenerate_parameters:
            if entry.error or entry.abelian:
                return entry
        return None


@dataclass
class CompatibilityResult:
    ok: bool
    criterion: str
    witness: Any = None


@dataclass
class GenericityCertificate:
    """
    Components of (B0 + t*B1)^(n-1) as polynomials in t.

    Generic exactly when their gcd is constant and B1^(n-1) does not vanish.
    """
    point: Optional[Tuple[Any, ...]]
    t_polynomials: List[Any]
    gcd: Any
    leading_ok: bool

    @property
    def generic(self) -> bool:
        return self.leading_ok and self.gcd is not None and self.gcd.is_ground


@dataclass
class LambdaSolution:
    found: bool
    lam: Optional["DiffForm"] = None
    unique: bool = False
    rank: int = 0
    denominator_locus: Any = None


@dataclass
class FlatnessReport:
    verdict: Verdict
    reason: FlatnessReason
    lam: Optional["DiffForm"] = None
    denominator_locus: Any = None
    curvature: Optional["DiffForm"] = None
    detail: Optional[str] = None
    point: Optional[Tuple[Any, ...]] = None


@dataclass
class ProportionalityResult:
    """Outcome of comparing Lambda(alpha, .) with the kernel generator of d omega."""
    applicable: bool
    flat: Optional[bool] = None
    witness: Any = None
    reason: Optional[str] = None
    casimir: Optional["DiffForm"] = None
    field: Optional["MultiVector"] = None
    hamiltonian: Optional["MultiVector"] = None


@dataclass
class LinearClassification:
    """Dimension-3 linear pair (Lambda, b2 dx2^dx3-type cocycle) in normalized basis."""
    generic_somewhere: bool
    flat: bool
    quadratic: Any
    nonflat_choice_exists: bool
    coefficients: Dict[str, Any] = field(default_factory=dict)


@dataclass
class LieClassification:
    """Dimension-3 Lie pair reduced to normal form."""
    generic_nonflat: bool
    reason: str
    normalized: Optional[Tuple[Any, Any]] = None
    P: Any = None
    Q: Any = None
    proportional: Optional[bool] = None
    eigenvector_nonflat: Optional[bool] = None
    coefficients: Dict[str, Any] = field(default_factory=dict)


@dataclass
class RankReport:
    """Rank of d(alpha_g + tau) on the affine algebra."""
    n: int
    rank: int
    dimension: int
    kernel_escapes: bool
    kernel: List[Tuple[Any, ...]] = None

    def __post_init__(self):
        if self.kernel is None:
            self.kernel = []

    @property
    def symplectic(self) -> bool:
        return self.rank == self.dimension


@dataclass
class ScalarFamilies:
    a: Tuple[Any, ...]
    b: Tuple[Any, ...]
    c: Tuple[Any, ...]


@dataclass
class Construction:
    """Pencil built by a construction, with the point it is analysed at."""
    pencil: Any
    base_point: Tuple[Any, ...]
    provenance: Dict[str, Any] = field(default_factory=dict)
