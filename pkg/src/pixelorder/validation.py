"""Input validation helpers shared across the package.

Small check_* functions in the spirit of sklearn.utils.validation: they
normalize arguments, raise ValueError with a readable message on contract
violations, and return the validated value.
"""

from __future__ import annotations

from typing import Sequence


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    return alpha


def check_beta(beta: int) -> int:
    if int(beta) != beta or int(beta) < 1:
        raise ValueError(f"beta must be an integer >= 1, got {beta}")
    return int(beta)


def check_extent(extent, n_steps: int) -> tuple[int, int] | None:
    """Validate an inclusive (start, end) index window into the time axis."""
    if extent is None:
        return None
    start, end = int(extent[0]), int(extent[1])
    if not 0 <= start <= end < n_steps:
        raise ValueError(
            f"extent ({start}, {end}) out of range for {n_steps} timesteps"
        )
    return start, end


def check_same_ids(a: Sequence[str], b: Sequence[str], what: str = "inputs") -> None:
    if tuple(a) != tuple(b):
        raise ValueError(f"{what} must carry the same region ids in the same order")


def check_rule(rule: str) -> str:
    if rule not in ("queen", "rook"):
        raise ValueError(f"contiguity rule must be 'queen' or 'rook', got {rule!r}")
    return rule
