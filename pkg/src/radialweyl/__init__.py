"""Radial parts of Laplacians on compact Lie groups and isoparametric foliations.

Invariant Fourier polynomials on a section, the radial operator built from
focal data, its triangular matrix on orbit sums, and regularized traces of
the focal spectra.
"""

from .rootsys import (
    CartanType,
    RootSystem,
    build_root_system,
    dominant_weights_in_hull,
    fundamental,
    hull_contains,
    pi_involution,
    weyl_orbit,
)
from .fourier import (
    FourierPolynomial,
    InvariantPolynomial,
    NotSmooth,
    cot_multiply,
    orbit_sum,
    tan_multiply,
)
from .radialop import (
    DegenerateSpectrum,
    FocalData,
    FocalEntry,
    OperatorMatrix,
    RadialOperator,
    SingularPoint,
    apply,
    assemble_matrix,
    eigenfunctions,
    generators,
    group_case_focal,
    mean_curvature_closed_form,
)

__version__ = "0.1.0"
