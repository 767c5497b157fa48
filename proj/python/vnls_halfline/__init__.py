"""Soliton solutions of the focusing vector NLS equation on the half line."""

from ._core import (
    Boundary,
    VnlsError,
    __version__,
    assemble_halfline,
    charges_over_time,
    field_grid,
    mirror_norming_constant,
    peak_scan,
    reconstruct_field,
    reflection_summary,
    unitary_from_angles,
    verify_constraints,
)

__all__ = [
    "Boundary",
    "VnlsError",
    "__version__",
    "assemble_halfline",
    "charges_over_time",
    "field_grid",
    "mirror_norming_constant",
    "peak_scan",
    "reconstruct_field",
    "reflection_summary",
    "unitary_from_angles",
    "verify_constraints",
]
