"""Spectral efficiency of two co-located broadcast satellites.

Overlapped-frequency multiuser transmission is compared with FDM and the
Alamouti scheme on the average-power AWGN channel, the peak-power AWGN
channel and a nonlinear transponder chain with an adaptive receiver.
"""

from .core import (
    LinkConfig,
    PhaseNoiseSpec,
    RateCurve,
    RatePoint,
    db_to_linear,
    linear_to_db,
    seeded_rng,
)

__version__ = "0.1.0"

__all__ = [
    "LinkConfig",
    "PhaseNoiseSpec",
    "RateCurve",
    "RatePoint",
    "db_to_linear",
    "linear_to_db",
    "seeded_rng",
]
