"""Exact polyhedral geometry for tropical manifolds: cones and polyhedra,
piecewise-linear functions, the discrete Legendre transform, toric
degenerations and Landau-Ginzburg potentials.

The floating-point companion lives in :mod:`tropdlt.semiflat` and is not
imported here.
"""

from .complexes import Fan, PolyhedralComplex, cone_cell
from .degeneration import (
    central_fiber,
    chart_ring,
    chart_rings,
    duality_check,
    fan_along,
    gluing_check,
    lift_check,
    total_space,
)
from .errors import TropError
from .hilbert import AffineMonoid, brute_force_hilbert_basis, hilbert_basis
from .plfunctions import (
    PLFunction,
    convexity_check,
    homogenize,
    normal_fan,
    polytope_from_pl,
    regular_subdivision_from_heights,
    support_function,
)
from .polyhedra import (
    Cone,
    FacePoset,
    Polyhedron,
    cone_properties,
    convert_representation,
    dual_cone,
    interior_lattice_points,
)
from .potential import (
    LaurentPotential,
    fano_potential,
    gorenstein_report,
    mirror_pair,
    naive_potential,
    ray_classes,
    reconstructed_potential,
    restriction_check,
    star_subdivision,
)
from .tropman import (
    IntegralAffineIso,
    TropicalManifold,
    barycentric,
    dlt,
    involution_witness,
    validate,
)

__version__ = "0.1.0"
