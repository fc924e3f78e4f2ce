"""Multi-kernel polar codes: construction, SC decoding and polarization analysis."""

__version__ = "0.1.0"

from .gf2 import BitMatrix, is_invertible, kron, row_space  # noqa: E402
from .kernel import T2, T3, Kernel, get_kernel, kernel_exponent, partial_distances, validate_kernel  # noqa: E402
from .channel import (  # noqa: E402
    DiscreteChannel,
    ErasureChannel,
    SymmetricChannel,
    bconv,
    bec,
    bhattacharyya,
    bsc,
    h2,
    h2_inv,
    mutual_information,
    parse_channel,
)
from .indexing import from_mixed_radix, mixed_radix  # noqa: E402
from .synthesis import ReliabilityTree, bec_step, bec_tree, synthesize_step, z_bounds_step, z_bounds_tree  # noqa: E402
from .construction import CodeSpec, build_generator, construct_code, select_frozen  # noqa: E402
from .codec import encode, kernel_marginal, sc_decode  # noqa: E402

__all__ = [
    "BitMatrix", "is_invertible", "kron", "row_space",
    "T2", "T3", "Kernel", "get_kernel", "kernel_exponent", "partial_distances", "validate_kernel",
    "DiscreteChannel", "ErasureChannel", "SymmetricChannel", "bconv", "bec", "bhattacharyya", "bsc",
    "h2", "h2_inv", "mutual_information", "parse_channel",
    "from_mixed_radix", "mixed_radix",
    "ReliabilityTree", "bec_step", "bec_tree", "synthesize_step", "z_bounds_step", "z_bounds_tree",
    "CodeSpec", "build_generator", "construct_code", "select_frozen",
    "encode", "kernel_marginal", "sc_decode",
]
