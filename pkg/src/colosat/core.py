"""Shared value types, unit conversions and reproducible random streams."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

STRATEGIES = ("joint", "joint-pragmatic", "fdm", "fdm-pragmatic", "alamouti", "single")

# ceiling on the random-walk phase step; the phase must vary slowly w.r.t. the baud rate
MAX_PHASE_STEP = 0.01


def db_to_linear(x_db: float) -> float:
    """Convert a power ratio in dB to linear scale."""
    x_db = float(x_db)
    if not math.isfinite(x_db):
        raise ValueError(f"dB value must be finite, got {x_db}")
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    """Convert a positive linear power ratio to dB."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"linear value must be positive, got {x}")
    return 10.0 * math.log10(x)


def gamma_from_db(gamma_sq_db: float) -> float:
    """Amplitude unbalance gamma from the power unbalance gamma^2 in dB."""
    return math.sqrt(db_to_linear(gamma_sq_db))


def _stream_key(stream: str) -> int:
    digest = hashlib.blake2b(stream.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def seeded_rng(seed: int, stream: str = "") -> np.random.Generator:
    """Counter-based random generator keyed by ``(seed, stream)``.

    The generator is a Philox instance whose 128-bit key holds the seed and a
    hash of the stream label, so every (seed, stream) pair owns an
    independent sequence regardless of the order in which sweep points are
    evaluated.
    """
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    key = np.array([seed, _stream_key(stream)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class PhaseNoiseSpec:
    """Phase process of the second satellite relative to the first.

    ``model`` is ``"constant"`` (phase fixed at ``initial_phase``) or
    ``"random-walk"`` (Wiener phase with ``step_std`` radians per symbol).
    """

    model: str = "constant"
    initial_phase: float = 0.0
    step_std: float = 0.0
    max_step_std: float = MAX_PHASE_STEP

    def __post_init__(self):
        if self.model not in ("constant", "random-walk"):
            raise ValueError(f"unknown phase noise model {self.model!r}")
        if self.step_std < 0:
            raise ValueError("step_std must be non-negative")
        if self.step_std > self.max_step_std:
            raise ValueError(
                f"step_std {self.step_std} rad/symbol exceeds the slow-variation "
                f"ceiling {self.max_step_std}"
            )

    def realize(self, n_symbols: int, rng: np.random.Generator | None = None) -> np.ndarray:
        """Per-symbol phase realization of length ``n_symbols``."""
        if self.model == "constant" or self.step_std == 0.0:
            return np.full(n_symbols, float(self.initial_phase))
        if rng is None:
            raise ValueError("random-walk phase needs a random generator")
        steps = rng.normal(0.0, self.step_std, n_symbols)
        steps[0] = 0.0
        return self.initial_phase + np.cumsum(steps)


@dataclass(frozen=True)
class LinkConfig:
    """Parameters shared by every channel model.

    ``gamma`` is the linear amplitude unbalance of satellite 2; only the
    range 1/2 <= gamma <= 1 is accepted. Use :meth:`single_satellite` for the
    gamma = 0 reference.
    """

    snr_db: float
    gamma: float = 1.0
    tau_samples: float = 0.0
    phase_noise: PhaseNoiseSpec = field(default_factory=PhaseNoiseSpec)
    seed: int = 0
    _allow_single: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if not math.isfinite(self.snr_db):
            raise ValueError("snr_db must be finite")
        if self._allow_single:
            if self.gamma != 0.0:
                raise ValueError("single-satellite link must have gamma = 0")
        elif not 0.5 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0.5, 1], got {self.gamma}")
        if self.tau_samples < 0:
            raise ValueError("tau_samples must be non-negative")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_db(cls, snr_db: float, gamma_sq_db: float = 0.0, **kwargs) -> "LinkConfig":
        return cls(snr_db=snr_db, gamma=gamma_from_db(gamma_sq_db), **kwargs)

    @classmethod
    def single_satellite(cls, snr_db: float, **kwargs) -> "LinkConfig":
        return cls(snr_db=snr_db, gamma=0.0, _allow_single=True, **kwargs)

    @property
    def snr(self) -> float:
        return db_to_linear(self.snr_db)

    @property
    def gamma_sq_db(self) -> float:
        return -math.inf if self.gamma == 0 else 20.0 * math.log10(self.gamma)


@dataclass(frozen=True)
class RatePoint:
    """Spectral efficiency (bit/s/Hz, TW = 1) at one SNR."""

    snr_db: float
    rate_bits: float
    stderr: float = 0.0

    def __post_init__(self):
        if self.rate_bits < 0:
            raise ValueError(f"rate must be non-negative, got {self.rate_bits}")


@dataclass(frozen=True)
class RateCurve:
    strategy: str
    points: tuple[RatePoint, ...]
    label: str = ""

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        object.__setattr__(self, "points", tuple(self.points))
        snrs = [p.snr_db for p in self.points]
        if any(b <= a for a, b in zip(snrs, snrs[1:])):
            raise ValueError("rate curve points must be strictly increasing in snr_db")

    @classmethod
    def from_arrays(cls, strategy: str, snr_db: Sequence[float], rates: Sequence[float],
                    stderr: Sequence[float] | None = None, label: str = "") -> "RateCurve":
        if stderr is None:
            stderr = [0.0] * len(rates)
        pts = tuple(RatePoint(float(s), max(float(r), 0.0), float(e))
                    for s, r, e in zip(snr_db, rates, stderr))
        return cls(strategy, pts, label or strategy)

    @property
    def snr_db(self) -> np.ndarray:
        return np.array([p.snr_db for p in self.points])

    @property
    def rates(self) -> np.ndarray:
        return np.array([p.rate_bits for p in self.points])

    @property
    def stderrs(self) -> np.ndarray:
        return np.array([p.stderr for p in self.points])
