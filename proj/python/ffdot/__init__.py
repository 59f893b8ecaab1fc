"""Exact dot products over word-size prime fields.

Every kernel returns the canonical residue along with counts of its
reduction events and overflow corrections, so the cost model can be
inspected, not just the answer. ``oracle_dot`` is an independent
128-bit reference for cross-checking.
"""

from ._ffdot import (
    DotResult,
    KernelConfig,
    ZechField,
    dot,
    inv_mod,
    is_prime,
    kernels,
    next_prime,
    oracle_dot,
    representations,
)

__version__ = "0.1.0"

__all__ = [
    "DotResult",
    "KernelConfig",
    "ZechField",
    "dot",
    "inv_mod",
    "is_prime",
    "kernels",
    "next_prime",
    "oracle_dot",
    "representations",
    "__version__",
]
