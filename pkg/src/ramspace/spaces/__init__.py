"""Concrete space instances implementing the abstract contract."""

from .ellentuck import EllentuckSpace, ell_space
from .matrix import (
    MatrixSpace,
    SegmentVerdict,
    SubspaceApprox,
    mat_pn,
    mat_rn,
    matrix_space,
    subspace_initial_segment,
)
from .partition import (
    PartitionSpace,
    coarsenings,
    enumerate_partitions,
    part_coarser,
    part_rn,
    partition_space,
    stirling2,
)

SPACE_TAGS = ("ellentuck", "matrix", "partition")


def space_from_params(params: dict) -> "EllentuckSpace | MatrixSpace | PartitionSpace":
    """Rebuild a space instance from a params_str-style mapping."""
    tag = params.get("space")
    if tag == "ellentuck":
        return EllentuckSpace(int(params["ground"]))
    if tag == "matrix":
        return MatrixSpace(int(params["q"]), int(params["max_cols"]))
    if tag == "partition":
        return PartitionSpace(int(params["max_domain"]))
    raise ValueError(f"unknown space tag {tag!r}")


def parse_params_str(text: str) -> dict:
    out = {}
    for part in text.strip().split(";"):
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"bad params entry {part!r}")
        k, v = part.split("=", 1)
        out[k] = v
    return out


__all__ = [
    "EllentuckSpace",
    "MatrixSpace",
    "PartitionSpace",
    "SegmentVerdict",
    "SubspaceApprox",
    "SPACE_TAGS",
    "coarsenings",
    "ell_space",
    "enumerate_partitions",
    "mat_pn",
    "mat_rn",
    "matrix_space",
    "parse_params_str",
    "part_coarser",
    "part_rn",
    "partition_space",
    "space_from_params",
    "stirling2",
    "subspace_initial_segment",
]
