"""Mutually unbiased product and maximally entangled bases from difference matrices."""

__version__ = "0.1.0"

from .algebra import gf_construct, group_construct, root_of_unity  # noqa: E402
from .bases import (  # noqa: E402
    Basis,
    BasisFamily,
    meb_family_d_lambda_d,
    meb_from_ls,
    mub_family_dd,
    mub_family_p_p2,
    product_basis,
)
from .designs import (  # noqa: E402
    DifferenceMatrix,
    dm_builtin,
    dm_construct_cyclic_smallest_prime,
    dm_construct_gf_mult,
    dm_construct_qq1,
    dm_develop_row,
    dm_normalize,
    dm_verify,
)
from .hadamard import fourier, hadamard_verify, hw_family  # noqa: E402
from .verify import family_report  # noqa: E402
