"""PSK/APSK alphabets and their mutual information on the AWGN channel.

Constellations are peak-normalized (``max |x| = 1``) so that with ``N = 1``
the SNR argument is the peak SNR. The noise expectation is evaluated on a
polar Gauss-Legendre grid; large joint alphabets fall back to Monte Carlo.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.special import logsumexp, roots_legendre

from .core import RateCurve, seeded_rng
from .peak_power import DEFAULT_QUAD, IRResult, QuadratureError, QuadratureSpec

LOG2E = 1.0 / math.log(2.0)
PSK_ORDERS = (2, 4, 8, 16, 32, 64)
# joint alphabets larger than this (after merging coincident points) use MC
MAX_QUAD_POINTS = 256
NOISE_RADIUS = 6.0


@dataclass(frozen=True)
class Constellation:
    """Discrete input alphabet with prior probabilities.

    ``normalization`` is ``"peak"`` (``max |x| = 1``) or ``"average"``
    (``E|x|^2 = 1``).
    """

    points: tuple[complex, ...]
    priors: tuple[float, ...]
    name: str = ""
    normalization: str = "peak"

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        q = tuple(float(v) for v in self.priors)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "priors", q)
        if len(pts) == 0 or len(pts) != len(q):
            raise ValueError("points and priors must be non-empty and of equal length")
        if any(v < 0 for v in q) or abs(sum(q) - 1.0) > 1e-9:
            raise ValueError("priors must be non-negative and sum to 1")
        a = np.abs(np.array(pts))
        if self.normalization == "peak":
            if a.max() > 0 and abs(a.max() - 1.0) > 1e-9:
                raise ValueError(f"peak amplitude is {a.max():.6g}, expected 1")
        elif self.normalization == "average":
            if abs(float(np.dot(q, a**2)) - 1.0) > 1e-9:
                raise ValueError("average energy must be 1")
        else:
            raise ValueError(f"unknown normalization {self.normalization!r}")

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)

    @property
    def weights(self) -> np.ndarray:
        return np.array(self.priors)

    @property
    def average_energy(self) -> float:
        return float(np.dot(self.weights, np.abs(self.array) ** 2))

    @property
    def peak_amplitude(self) -> float:
        return float(np.abs(self.array).max())

    def normalized(self, mode: str) -> "Constellation":
        """Rescale to ``"peak"`` or ``"average"`` normalization."""
        if mode == "peak":
            s = 1.0 / self.peak_amplitude
        elif mode == "average":
            s = 1.0 / math.sqrt(self.average_energy)
        else:
            raise ValueError(f"unknown normalization {mode!r}")
        return Constellation(tuple(self.array * s), self.priors, self.name, mode)

    def rotated(self, phi: float) -> "Constellation":
        return Constellation(tuple(self.array * np.exp(1j * phi)), self.priors, self.name,
                             self.normalization)

    @classmethod
    def silent(cls) -> "Constellation":
        return cls((0j,), (1.0,), "silent")


def make_psk(m: int) -> Constellation:
    """``m`` equally spaced unit-circle points; QPSK sits at odd multiples of pi/4."""
    if m not in PSK_ORDERS:
        raise ValueError(f"unsupported PSK order {m}; choose from {PSK_ORDERS}")
    offset = math.pi / 4 if m == 4 else 0.0
    pts = np.exp(1j * (2 * math.pi * np.arange(m) / m + offset))
    if m == 2:
        pts = np.array([1.0, -1.0], dtype=complex)
    name = {2: "bpsk", 4: "qpsk"}.get(m, f"{m}psk")
    return Constellation(tuple(pts), (1.0 / m,) * m, name)


def make_apsk(ring_counts, ring_radii, ring_phases=None, name: str = "",
              normalization: str = "peak") -> Constellation:
    """Concentric-ring alphabet.

    Parameters
    ----------
    ring_counts : sequence of int
        Points per ring, inner to outer.
    ring_radii : sequence of float
        Increasing radii; the outermost is 1 for peak normalization. Any
        positive scale is accepted and rescaled.
    ring_phases : sequence of float, optional
        Phase of the first point on each ring (radians).
    """
    counts = [int(c) for c in ring_counts]
    radii = np.asarray(ring_radii, dtype=float)
    phases = np.zeros(len(counts)) if ring_phases is None else np.asarray(ring_phases, dtype=float)
    if len(counts) != len(radii) or len(phases) != len(counts):
        raise ValueError("ring_counts, ring_radii and ring_phases must have equal length")
    if any(c < 1 for c in counts):
        raise ValueError("each ring needs at least one point")
    if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise ValueError("ring radii must be positive and strictly increasing")
    pts = np.concatenate([r * np.exp(1j * (2 * math.pi * np.arange(c) / c + ph))
                          for c, r, ph in zip(counts, radii, phases)])
    n = len(pts)
    c = Constellation(tuple(pts / radii[-1]), (1.0 / n,) * n,
                      name or f"{n}apsk")
    return c if normalization == "peak" else c.normalized(normalization)


def _load_geometry(path=None) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser()
    if path is None:
        cfg.read_string(resources.files("colosat").joinpath("data/constellations.cfg").read_text())
    else:
        with open(path) as fh:
            cfg.read_file(fh)
    return cfg


def apsk_from_config(name: str, path=None) -> Constellation:
    """APSK geometry from the shipped (or a user) configuration file."""
    cfg = _load_geometry(path)
    if not cfg.has_section(name):
        raise KeyError(f"no APSK geometry named {name!r}")
    sec = cfg[name]
    counts = [int(v) for v in sec["counts"].split(",")]
    ratios = [float(v) for v in sec["ratios"].split(",")]
    phases = [math.radians(float(v)) for v in sec["phases"].split(",")]
    return make_apsk(counts, ratios, phases, name=name)


def named_constellation(name: str) -> Constellation:
    """``bpsk``, ``qpsk``, ``<M>psk`` or any APSK section of the geometry file."""
    key = name.lower()
    if key in ("bpsk", "qpsk"):
        return make_psk(2 if key == "bpsk" else 4)
    if key.endswith("psk") and not key.endswith("apsk"):
        return make_psk(int(key[:-3]))
    return apsk_from_config(key)


# -- file format -----------------------------------------------------------------


def save_constellation(c: Constellation, path) -> None:
    lines = [f"name {c.name or 'unnamed'}"]
    lines += [f"{p.real!r} {p.imag!r} {q!r}" for p, q in zip(c.points, c.priors)]
    Path(path).write_text("\n".join(lines) + "\n")


def load_constellation(path, normalize: bool = True) -> Constellation:
    """Read a ``name <text>`` header followed by ``I Q prior`` lines.

    Blank lines and ``#`` comments are skipped. With ``normalize`` the points
    are rescaled to unit peak amplitude.
    """
    name, pts, q = None, [], []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if name is None:
            head = line.split(None, 1)
            if head[0] != "name":
                raise ValueError(f"{path}:{lineno}: expected 'name <text>' header")
            name = head[1] if len(head) > 1 else ""
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(f"{path}:{lineno}: expected 'I Q prior', got {len(fields)} fields")
        try:
            i, qv, pr = (float(f) for f in fields)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
        pts.append(complex(i, qv))
        q.append(pr)
    if name is None or not pts:
        raise ValueError(f"{path}: no constellation points")
    total = sum(q)
    q = [v / total for v in q]
    if normalize:
        peak = max(abs(p) for p in pts)
        pts = [p / peak for p in pts]
    return Constellation(tuple(pts), tuple(q), name)


# -- mutual information ------------------------------------------------------------


def _noise_rule(quad: QuadratureSpec, coarse: bool = False):
    """Polar nodes/weights for ``E f(w)``, ``w ~ CN(0, 1)``."""
    order = 16
    panel = 1.0 if coarse else 0.5
    n_ang = quad.angular_nodes // 2 if coarse else quad.angular_nodes
    x, w = roots_legendre(order)
    edges = np.arange(0.0, NOISE_RADIUS + 1e-12, panel)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    r = (mid[:, None] + half[:, None] * x).ravel()
    wr = (half[:, None] * w).ravel() * 2.0 * r * np.exp(-r**2)
    th = 2 * math.pi * (np.arange(n_ang) + 0.5) / n_ang
    nodes = (r[:, None] * np.exp(1j * th)).ravel()
    weights = np.repeat(wr / n_ang, n_ang)
    return nodes, weights / weights.sum()


def _merge_points(pts, q, decimals=10):
    key = np.round(pts.real, decimals) + 1j * np.round(pts.imag, decimals)
    uniq, inv = np.unique(key, return_inverse=True)
    merged = np.zeros(len(uniq))
    np.add.at(merged, inv.ravel(), q)
    keep = merged > 0
    return uniq[keep], merged[keep]


def _equivocation(s, q, i_idx, w, chunk=1 << 20):
    """``log(sum_j q_j exp(-|s_i - s_j + w|^2 + |w|^2))`` for each (i, w) pair."""
    lq = np.log(q)
    out = np.empty(len(w))
    step = max(1, chunk // len(s))
    for a in range(0, len(w), step):
        d = s[i_idx[a:a + step], None] - s[None, :]
        ww = w[a:a + step, None]
        out[a:a + step] = logsumexp(lq - np.abs(d) ** 2 - 2.0 * (d.conj() * ww).real, axis=1)
    return out


def _mi_quadrature(s, q, quad, coarse=False):
    nodes, nw = _noise_rule(quad, coarse)
    total = 0.0
    for i in range(len(s)):
        f = _equivocation(s, q, np.full(len(nodes), i), nodes)
        total += q[i] * float(np.dot(nw, f))
    return -total * LOG2E


def _mi_monte_carlo(s, q, quad, stream):
    rng = seeded_rng(quad.seed, stream)
    n = quad.mc_samples
    idx = rng.choice(len(s), size=n, p=q)
    w = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
    samples = -_equivocation(s, q, idx, w) * LOG2E
    return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(n))


def _mi(s, q, quad, stream):
    s, q = _merge_points(np.asarray(s, dtype=complex), np.asarray(q, dtype=float))
    if len(s) == 1:
        return IRResult(0.0, 0.0, quad.method)
    if quad.method == "monte-carlo" or len(s) > MAX_QUAD_POINTS:
        if quad.method != "monte-carlo":
            quad = QuadratureSpec(method="monte-carlo", mc_samples=quad.mc_samples,
                                  tolerance=quad.tolerance, seed=quad.seed)
        value, se = _mi_monte_carlo(s, q, quad, stream)
        if se > quad.tolerance:
            raise QuadratureError(f"Monte Carlo standard error {se:.2e} exceeds tolerance {quad.tolerance:.2e}")
        return IRResult(value, se, "monte-carlo")
    fine = _mi_quadrature(s, q, quad)
    coarse = _mi_quadrature(s, q, quad, coarse=True)
    return IRResult(fine, abs(fine - coarse), quad.method)


def constellation_mi_single(c: Constellation, snr: float, quad: QuadratureSpec = DEFAULT_QUAD) -> IRResult:
    """``I(x; y)`` for ``y = sqrt(snr) x + w``, ``w ~ CN(0, 1)``."""
    if not snr > 0:
        raise ValueError("snr must be positive")
    return _mi(math.sqrt(snr) * c.array, c.weights, quad, f"mi_single:{c.name}:{snr!r}")


def _mi_joint_random_phase(c1, c2, gamma, snr, quad, stream, chunk=1 << 21):
    """Joint rate averaged over a uniform phase of the second signal.

    ``-E log sum_{a,b} q_a q_b exp(-|d_ab + w|^2 + |w|^2)`` where the
    difference ``d_ab`` depends on the phase drawn for each sample.
    """
    rng = seeded_rng(quad.seed, stream)
    n = quad.mc_samples
    root = math.sqrt(snr)
    x1, x2 = c1.array, c2.array
    i1 = rng.choice(c1.size, size=n, p=c1.weights)
    i2 = rng.choice(c2.size, size=n, p=c2.weights)
    rot = gamma * np.exp(2j * math.pi * rng.random(n))
    w = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
    d1 = root * (x1[:, None] - x1[None, :])
    d2 = root * (x2[:, None] - x2[None, :])
    lq = (np.log(c1.weights)[:, None] + np.log(c2.weights)[None, :]).ravel()
    step = max(1, chunk // (c1.size * c2.size))
    out = np.empty(n)
    for a in range(0, n, step):
        sl = slice(a, a + step)
        d = (d1[i1[sl], :, None] + (rot[sl, None] * d2[i2[sl], :])[:, None, :]).reshape(len(w[sl]), -1)
        ww = w[sl, None]
        out[sl] = logsumexp(lq - np.abs(d) ** 2 - 2.0 * (d.conj() * ww).real, axis=1)
    samples = -out * LOG2E
    return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(n))


def constellation_mi_joint(c1: Constellation, c2: Constellation, gamma: float, snr: float,
                           quad: QuadratureSpec = DEFAULT_QUAD, phi: float | None = None):
    """MAC triple ``(I1, I2, I_J)`` for ``y = sqrt(snr) (x1 + gamma e^{j phi} x2) + w``.

    ``I1 = I(x1; y | x2)`` and ``I2 = I(x2; y | x1)`` reduce to single-user
    rates. For a fixed ``phi`` the joint rate uses the superposition alphabet,
    merging coincident points (which the receiver cannot separate). With
    ``phi=None`` the phase is uniform and known at the receiver, and the
    joint rate is its average, always estimated by Monte Carlo.
    """
    if not snr > 0:
        raise ValueError("snr must be positive")
    i1 = constellation_mi_single(c1, snr, quad)
    if gamma == 0 or c2.peak_amplitude == 0:
        return i1, IRResult(0.0, 0.0, quad.method), i1
    i2 = constellation_mi_single(c2, gamma**2 * snr, quad)
    stream = f"mi_joint:{c1.name}:{c2.name}:{gamma!r}:{snr!r}:{phi!r}"
    if phi is None:
        value, se = _mi_joint_random_phase(c1, c2, gamma, snr, quad, stream)
        if se > quad.tolerance:
            raise QuadratureError(f"Monte Carlo standard error {se:.2e} exceeds tolerance {quad.tolerance:.2e}")
        return i1, i2, IRResult(value, se, "monte-carlo")
    s = (c1.array[:, None] + gamma * np.exp(1j * phi) * c2.array[None, :]).ravel() * math.sqrt(snr)
    q = (c1.weights[:, None] * c2.weights[None, :]).ravel()
    return i1, i2, _mi(s, q, quad, stream)


def envelope(curves):
    """Pointwise maximum over curves sharing an SNR grid.

    Returns ``(curve, labels)`` where ``labels[k]`` names the winner at the
    k-th SNR.
    """
    curves = list(curves)
    if not curves:
        raise ValueError("no curves")
    grid = curves[0].snr_db
    for c in curves[1:]:
        if len(c.snr_db) != len(grid) or not np.allclose(c.snr_db, grid, rtol=0, atol=1e-12):
            raise ValueError("curves do not share an SNR grid")
    rates = np.stack([c.rates for c in curves])
    errs = np.stack([c.stderrs for c in curves])
    win = np.argmax(rates, axis=0)
    cols = np.arange(len(grid))
    labels = [curves[k].label or curves[k].strategy for k in win]
    env = RateCurve.from_arrays(curves[0].strategy, grid, rates[win, cols], errs[win, cols],
                                label="envelope")
    return env, labels
