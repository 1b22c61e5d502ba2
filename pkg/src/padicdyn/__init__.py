"""p-adic arithmetic and the dynamics of ``f(x) = x**3 + a x**2`` over Q_p."""

from .basins import (
    AnalysisConfig,
    Boundary,
    HitStatus,
    SiegelReport,
    basin_scan,
    boundary_escape_witness,
    enumerate_sphere,
    hitting_time,
    siegel_scan,
)
from .claims import ClaimReport, Status, run_suite, verify_claim
from .core import (
    Ball,
    IndeterminateZero,
    NormValue,
    PAdic,
    PrecisionError,
    Sphere,
    distance,
    from_digits,
    from_rational,
    parse_padic,
)
from .dynamics import Kind, MapParams, OrbitFate, Outcome, Which, apply_f, classify, orbit_fate
from .roots import padic_sqrt, sqrt_a2p4_verdict, sqrt_exists

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig", "Ball", "Boundary", "ClaimReport", "HitStatus", "IndeterminateZero", "Kind",
    "MapParams", "NormValue", "OrbitFate", "Outcome", "PAdic", "PrecisionError", "SiegelReport",
    "Sphere", "Status", "Which", "apply_f", "basin_scan", "boundary_escape_witness", "classify",
    "distance", "enumerate_sphere", "from_digits", "from_rational", "hitting_time", "orbit_fate",
    "padic_sqrt", "parse_padic", "run_suite", "siegel_scan", "sqrt_a2p4_verdict", "sqrt_exists",
    "verify_claim",
]
