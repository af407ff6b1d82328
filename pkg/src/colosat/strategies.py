"""MAC rate regions, the pragmatic equal-rate point and Alamouti block coding.

The Alamouti routines follow the time-misaligned variant: the second slot
carries conjugated, time-reversed copies of the first-slot blocks so that a
receiver knowing (gamma, phi, tau) can separate the two streams exactly.

Discrete-time signals of finite duration are stored as arrays together with
the integer time index of their first sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Point = tuple[float, float]


class InconsistentRegionError(ValueError):
    """Raised when (i1, i2, i_joint) cannot describe a MAC region."""


@dataclass(frozen=True)
class RateRegion:
    """Pentagon R1 <= i1, R2 <= i2, R1 + R2 <= i_joint and its landmark points.

    Satellite 2 is the attenuated one, so ``i2 <= i1``.
    """

    i1: float
    i2: float
    i_joint: float
    A: Point
    B: Point
    C: Point
    D: Point
    E: Point
    F: Point
    pragmatic: float
    single_better: bool

    @property
    def points(self) -> dict[str, Point]:
        return {k: getattr(self, k) for k in "ABCDEF"}

    @property
    def pragmatic_branch(self) -> str:
        """``"joint"`` when the sum-rate face limits E, ``"2i2"`` otherwise."""
        return "joint" if self.i_joint <= 2.0 * self.i2 else "2i2"

    def contains(self, point: Point, tol: float = 1e-9) -> bool:
        r1, r2 = point
        return (r1 >= -tol and r2 >= -tol and r1 <= self.i1 + tol
                and r2 <= self.i2 + tol and r1 + r2 <= self.i_joint + tol)


def assemble_region(i1: float, i2: float, i_joint: float, tol: float = 1e-9) -> RateRegion:
    """Build the MAC region for the rate triple ``(I1, I2, I_J)``.

    Small violations (up to ``tol``) of the consistency conditions, as
    produced by numerical integration or Monte Carlo noise, are clipped;
    larger ones raise :class:`InconsistentRegionError`.
    """
    i1, i2, ij = float(i1), float(i2), float(i_joint)
    problems = []
    if min(i1, i2, ij) < -tol:
        problems.append("rates must be non-negative")
    if i2 > i1 + tol:
        problems.append(f"i2={i2:.6g} exceeds i1={i1:.6g} (satellite 2 must be the attenuated one)")
    if ij < max(i1, i2) - tol:
        problems.append(f"i_joint={ij:.6g} is below max(i1, i2)={max(i1, i2):.6g}")
    if ij > i1 + i2 + tol:
        problems.append(f"i_joint={ij:.6g} exceeds i1 + i2={i1 + i2:.6g}")
    if problems:
        raise InconsistentRegionError("; ".join(problems))
    i1, i2 = max(i1, 0.0), max(min(i2, i1), 0.0)
    ij = min(max(ij, i1), i1 + i2)

    pragmatic = min(ij, 2.0 * i2)
    return RateRegion(
        i1=i1, i2=i2, i_joint=ij,
        A=(0.0, i2),
        B=(ij - i2, i2),
        C=(i1, ij - i1),
        D=(i1, 0.0),
        E=(pragmatic / 2.0, pragmatic / 2.0),
        # the line R2 = I1 - R1 meets the upper face R2 = I2 (I1 - I2 <= I_J - I2)
        F=(i1 - i2, i2),
        pragmatic=pragmatic,
        single_better=pragmatic < i1,
    )


@dataclass(frozen=True)
class AlamoutiBlockPair:
    """Blocks sent by satellites 1 and 2 in the two Alamouti slots."""

    first_slot: tuple[np.ndarray, np.ndarray]
    second_slot: tuple[np.ndarray, np.ndarray]

    @property
    def block_length(self) -> int:
        return len(self.first_slot[0])


def time_reverse_conj(x: np.ndarray) -> np.ndarray:
    """Samples of ``x*(-t)`` for a block supported on ``[0, L)``.

    The result is supported on ``[-(L-1), 0]``; index 0 of the returned array
    is time ``-(L-1)``.
    """
    return np.conj(np.asarray(x)[::-1])


def alamouti_precode(x1_block, x2_block) -> AlamoutiBlockPair:
    """Slot a sends ``(x1, x2)``; slot b sends ``(x2*(-t), -x1*(-t))``."""
    x1 = np.asarray(x1_block, dtype=complex)
    x2 = np.asarray(x2_block, dtype=complex)
    if x1.shape != x2.shape or x1.ndim != 1:
        raise ValueError(f"blocks must be 1-D with equal length, got {x1.shape} and {x2.shape}")
    return AlamoutiBlockPair((x1, x2), (time_reverse_conj(x2), -time_reverse_conj(x1)))


def _check_tau(tau) -> int:
    t = float(tau)
    if t < 0 or t != round(t):
        raise ValueError(f"tau={tau} is not on the sample grid; resample before combining")
    return int(round(t))


def alamouti_channel(pair: AlamoutiBlockPair, gamma: float, phi: float, tau,
                     noise_std: float = 0.0, rng: np.random.Generator | None = None):
    """Received slots of the misaligned two-satellite channel.

    ``y_a(t) = x1(t) + gamma e^{j phi} x2(t - tau) + w_a(t)`` over ``t in [0, L + tau)``
    and ``y_b(t) = x2*(-t) - gamma e^{j phi} x1*(-t + tau) + w_b(t)`` over
    ``t in [-(L-1), tau]``. Complex noise of variance ``noise_std**2`` is
    added when ``noise_std > 0``.
    """
    tau = _check_tau(tau)
    L = pair.block_length
    g = gamma * np.exp(1j * phi)
    x1, x2 = pair.first_slot
    b1, b2 = pair.second_slot
    y_a = np.zeros(L + tau, dtype=complex)
    y_a[:L] += x1
    y_a[tau:tau + L] += g * x2
    # second slot, first array element is time -(L-1)
    y_b = np.zeros(L + tau, dtype=complex)
    y_b[:L] += b1
    y_b[tau:tau + L] += g * b2
    if noise_std > 0:
        if rng is None:
            raise ValueError("noisy channel needs a random generator")
        s = noise_std / math.sqrt(2.0)
        y_a += s * (rng.standard_normal(y_a.shape) + 1j * rng.standard_normal(y_a.shape))
        y_b += s * (rng.standard_normal(y_b.shape) + 1j * rng.standard_normal(y_b.shape))
    return y_a, y_b


def alamouti_decode(y_a, y_b, gamma: float, phi: float, tau, block_length: int | None = None):
    """Separate the two streams from the received Alamouti slots.

    ``y_a`` covers times ``[0, L + tau)`` and ``y_b`` covers ``[-(L-1), tau]``
    as produced by :func:`alamouti_channel`. Returns ``(x1_hat, x2_hat)``, each
    equal to ``sqrt(1 + gamma^2) x_i`` plus noise of the original variance.
    """
    tau = _check_tau(tau)
    y_a = np.asarray(y_a, dtype=complex)
    y_b = np.asarray(y_b, dtype=complex)
    L = len(y_a) - tau if block_length is None else int(block_length)
    if L <= 0 or len(y_a) != L + tau or len(y_b) != L + tau:
        raise ValueError(f"received blocks do not match block length {L} and tau {tau}")
    n = np.arange(L)
    norm = math.sqrt(1.0 + gamma**2)
    g = gamma * np.exp(1j * phi)

    def yb_at(t):
        return y_b[t + L - 1]

    x1_hat = (y_a[n] - g * np.conj(yb_at(-n + tau))) / norm
    x2_hat = (np.conj(yb_at(-n)) + np.conj(g) * y_a[n + tau]) / norm
    return x1_hat, x2_hat


def verify_theorem_suite(input_model, gamma_grid_db, snr_grid_db, **kwargs):
    """Ordering checks ``I_J >= I_A >= I_FDM`` and ``I_J,p >= I_FDM,p``.

    See :func:`colosat.theorems.verify_theorem_suite`.
    """
    from .theorems import verify_theorem_suite as run

    return run(input_model, gamma_grid_db, snr_grid_db, **kwargs)
