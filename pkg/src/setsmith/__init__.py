"""setsmith: exact Smith groups and diagonal forms of subset intersection
matrices and of integer combinations of them."""

from .exact import (AbelianGroup, ConstructionError, ExactError, IntMatrix,
                    SmithForm, gcd_minors, group_from_diagonal,
                    group_from_smith, index, is_unimodular,
                    smith_normal_form, stack, unimodular_completion,
                    unimodular_inverse)
from .oracle import (DEFAULT_CAP, BenchReport, SizeCapExceeded, THEOREMS,
                     VerificationReport, bench, brute_force_group,
                     closed_form_entries, closed_form_group,
                     verify_closed_form)
from .scheme import (MsMatrix, ParameterError, SchemeParams, SmithGroupResult,
                     SpectrumEntry, bier_p, block_multiplicity, c_coeff,
                     d_diag, d_matrix, d_product, degree,
                     diagonal_form_entries, e_matrices, eigenvalues, f_coeff,
                     intersection_matrix, ms_matrices, ms_matrix,
                     scheme_element_matrix, smith_group, triangular_check,
                     unit_coeffs, w_matrix)
from .subsets import (STANDARD, SUPER_STANDARD, UNRESTRICTED, binomial,
                      enumerate_subsets, is_boundary, is_standard,
                      is_super_standard, mu, phi, phi_inverse)
from .superstandard import (BoundarySplit, ConjectureReport,
                            boundary_interior_split, check_conjecture,
                            check_simpler_lemma, p_tilde,
                            phi_boundary_column_match, w_tilde)

__version__ = "0.1.0"
