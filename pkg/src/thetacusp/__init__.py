"""Fourier coefficients of twisted theta functions at cusps, computed exactly
from local Weil-representation matrices and checked against a numerical oracle."""
from .cyclotomic import Cyclo, e_inf_rat, e_p, root_of_unity, sqrt_of_prime
from .characters import DirichletCharacter, char_chi12, char_chi2, char_chi3, psi_j, tau
from .metaplectic import Cusp, Mat2Q, beta_v, cusps_of_gamma0, decompose_in_Kp, s_A, scaling_matrix
from .numeric_base import INF, Place, frac_p, hilbert_symbol, kronecker, legendre, vp
from .theta_engine import CoeffResult, ThetaTwist, coeff_first_twist, coeff_higher_twist, gg_check, xi_global
from .weil_local import gauss_gamma, rho_B1, rho_generator, xi2, xi3

__version__ = "0.1.0"

__all__ = [
    "Cyclo",
    "e_inf_rat",
    "e_p",
    "root_of_unity",
    "sqrt_of_prime",
    "DirichletCharacter",
    "char_chi12",
    "char_chi2",
    "char_chi3",
    "psi_j",
    "tau",
    "Cusp",
    "Mat2Q",
    "beta_v",
    "cusps_of_gamma0",
    "decompose_in_Kp",
    "s_A",
    "scaling_matrix",
    "INF",
    "Place",
    "frac_p",
    "hilbert_symbol",
    "kronecker",
    "legendre",
    "vp",
    "CoeffResult",
    "ThetaTwist",
    "coeff_first_twist",
    "coeff_higher_twist",
    "gg_check",
    "xi_global",
    "gauss_gamma",
    "rho_B1",
    "rho_generator",
    "xi2",
    "xi3",
]
