"""Exact dynamics of the square map x -> x**2 on the p-adic integers."""
from .decomposition import (
    DecompositionReport,
    MinimalComponent,
    PeriodicOrbit,
    decompose,
    locate,
    odometer_sequence,
    periodic_orbits,
    sphere_decomposition,
    verify_decomposition,
)
from .level_graph import (
    CycleCensus,
    FunctionalGraph,
    ResourceError,
    build_graph,
    cycle_census,
    export_dot,
    rogers_structure,
    verify_rogers,
)
from .lift_engine import (
    CycleAtLevel,
    LiftClass,
    LiftKind,
    an_bn,
    classify,
    lift_cycles,
    predicted_cycle_census,
    shadow_fate,
)
from .numtheory import (
    DomainError,
    divisors,
    euler_phi,
    factor_p_minus_one,
    mul_order,
    padic_valuation,
    wieferich_valuation,
)
from .padic import PadicInt, PrecisionError, diff_valuation, teichmuller

__version__ = "0.1.0"
