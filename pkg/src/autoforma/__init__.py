"""Planar mixed automorphic forms on lattices in the complex plane."""
from .automorphy import (J_factor, chain_rule_residual, check_integrality, j_alpha, phase_factor,
                         projective_apply)
from .equivariant import AffineTau, SampledTau, Weights, check_equivariance, compute_B, rho_of
from .errors import (IntegralityViolated, NonPositiveWeight, NotEquivariant, NumericallyVanishing,
                     QuadratureUnconverged, SeriesTruncationError)
from .forms import (FormEvaluator, apply_gauge, build_forms, gaussian_seed, landau_residual,
                    mixed_residual, nontriviality_scan, poincare_landau)
from .group import IDENTITY, GroupElement, compose, inverse, rotation, translation
from .lattice import Lattice, enumerate_points
from .phi import CharacterTable, PhiSolution, chi_tau, phi_affine, phi_quadrature, solve_phi

__version__ = "0.1.0"
