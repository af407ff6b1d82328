"""Closed-form spectral efficiencies on the average-power AWGN channel.

All rates are in bit/s/Hz with TW = 1; ``snr`` is the linear P/N of the
unattenuated satellite and ``gamma`` the amplitude unbalance of the second.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .strategies import RateRegion, assemble_region


def _check(snr, gamma):
    snr = np.asarray(snr, dtype=float)
    if np.any(~(snr > 0)):
        raise ValueError("snr must be positive")
    if np.any(np.asarray(gamma) < 0):
        raise ValueError("gamma must be non-negative")
    return snr


def awgn_single(snr):
    return np.log2(1.0 + _check(snr, 0.0))


def awgn_joint(snr, gamma):
    """Sum-rate with joint decoding: ``log2(1 + (1 + gamma^2) P/N)``."""
    snr = _check(snr, gamma)
    return np.log2(1.0 + (1.0 + gamma**2) * snr)


def awgn_fdm(snr, gamma):
    """Average of the two half-band subchannels, each seeing ``2 P/N``."""
    snr = _check(snr, gamma)
    return 0.5 * np.log2(1.0 + 2.0 * snr) + 0.5 * np.log2(1.0 + 2.0 * gamma**2 * snr)


def awgn_joint_pragmatic(snr, gamma, return_branch: bool = False):
    """Equal-rate sum ``min(I_J, 2 I_2)``.

    With ``return_branch`` the active branch is also returned: ``"joint"``
    where the sum-rate face binds and ``"2i2"`` where the weak user does.
    """
    ij = awgn_joint(snr, gamma)
    two_i2 = 2.0 * np.log2(1.0 + gamma**2 * _check(snr, gamma))
    value = np.minimum(ij, two_i2)
    if not return_branch:
        return value
    branch = np.where(ij <= two_i2, "joint", "2i2")
    return value, (str(branch) if branch.ndim == 0 else branch)


def awgn_fdm_pragmatic(snr, gamma):
    """Twice the weaker half-band rate: ``log2(1 + 2 gamma^2 P/N)``."""
    snr = _check(snr, gamma)
    return np.log2(1.0 + 2.0 * gamma**2 * snr)


def awgn_alamouti(snr, gamma):
    """Each stream sees ``sqrt(1 + gamma^2) x + w``; with Gaussian inputs this equals I_J."""
    snr = _check(snr, gamma)
    return np.log2(1.0 + (1.0 + gamma**2) * snr)


@dataclass(frozen=True)
class AwgnRates:
    i_joint: float
    i_fdm: float
    i_joint_pragmatic: float
    i_fdm_pragmatic: float
    i_alamouti: float
    i_single: float


def awgn_rates(snr: float, gamma: float) -> AwgnRates:
    return AwgnRates(
        i_joint=float(awgn_joint(snr, gamma)),
        i_fdm=float(awgn_fdm(snr, gamma)),
        i_joint_pragmatic=float(awgn_joint_pragmatic(snr, gamma)),
        i_fdm_pragmatic=float(awgn_fdm_pragmatic(snr, gamma)),
        i_alamouti=float(awgn_alamouti(snr, gamma)),
        i_single=float(awgn_single(snr)),
    )


def awgn_region(snr: float, gamma: float) -> RateRegion:
    """MAC region with Gaussian inputs."""
    snr = float(_check(snr, gamma))
    i1 = np.log2(1.0 + snr)
    i2 = np.log2(1.0 + gamma**2 * snr)
    ij = np.log2(1.0 + (1.0 + gamma**2) * snr)
    return assemble_region(i1, i2, ij)


STRATEGY_FUNCS = {
    "joint": awgn_joint,
    "joint-pragmatic": awgn_joint_pragmatic,
    "fdm": awgn_fdm,
    "fdm-pragmatic": awgn_fdm_pragmatic,
    "alamouti": awgn_alamouti,
    "single": lambda snr, gamma: awgn_single(snr),
}
