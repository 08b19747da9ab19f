"""Unitary evolution of the two-component wave function on the line.

A step applies the site coin to each (right-mover, left-mover) pair and then
shifts the upper component one site right and the lower one site left. States
started from the origin are supported on a single parity class (x + t even),
so amplitudes are stored compactly along the light cone: at time t the two
components live on sites x = -t + 2q for q = 0..t. One step costs O(t)
amplitude updates, a full run O(t_max^2).

The closed-line evolution never renormalizes: norm drift is a diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coins import CoinField
from .observables import SigmaSeries

DEFAULT_IC = np.array([1.0 / math.sqrt(2.0), 1j / math.sqrt(2.0)])
DEFAULT_IC.setflags(write=False)


def _as_spinor(psi_ic) -> np.ndarray:
    psi = np.asarray(psi_ic, dtype=complex)
    if psi.shape != (2,):
        raise ValueError("initial spinor must have exactly two components")
    norm = abs(psi[0]) ** 2 + abs(psi[1]) ** 2
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"initial spinor must be normalized, got |psi|^2 = {norm}")
    return psi


@dataclass
class WaveState:
    """Light-cone amplitudes at integer time t.

    up[q] and down[q] are the right- and left-mover amplitudes at site
    x = -t + 2q. Sites of the other parity class, and sites with |x| > t,
    are exactly zero.
    """

    t: int
    up: np.ndarray
    down: np.ndarray

    @property
    def cone(self) -> int:
        """Upper bound on the occupied |x|; equals t for origin-started states."""
        return self.t

    def occupied_sites(self) -> np.ndarray:
        return -self.t + 2 * np.arange(self.t + 1)

    def density(self) -> np.ndarray:
        """|psi|^2 on occupied_sites()."""
        return np.abs(self.up) ** 2 + np.abs(self.down) ** 2

    def norm(self) -> float:
        return float(np.sum(self.density()))

    def spinor_at(self, x: int) -> tuple[complex, complex]:
        """(up, down) amplitude at an arbitrary site; zero outside the support."""
        q, rem = divmod(x + self.t, 2)
        if rem or not 0 <= q <= self.t:
            return 0j, 0j
        return complex(self.up[q]), complex(self.down[q])


def init_localized(psi_ic=DEFAULT_IC) -> WaveState:
    """State concentrated at the origin with the given (normalized) spinor."""
    psi = _as_spinor(psi_ic)
    return WaveState(t=0, up=psi[:1].copy(), down=psi[1:].copy())


def step(state: WaveState, field: CoinField) -> WaveState:
    """One coin + shift application. Norm-preserving; the origin coin is the identity."""
    c = state.t
    if c + 1 > field.half_width:
        raise ValueError(
            f"light cone would reach {c + 1}, beyond the lattice half_width {field.half_width}"
        )
    s, co = field.trig_slice(c)
    u, d = state.up, state.down
    cu = s * u + co * d
    cd = co * u - s * d
    if c % 2 == 0:  # origin occupied only on even cones
        q0 = c // 2
        cu[q0] = u[q0]
        cd[q0] = d[q0]
    up = np.empty(c + 2, dtype=complex)
    down = np.empty(c + 2, dtype=complex)
    up[1:] = cu
    up[0] = 0.0
    down[:-1] = cd
    down[-1] = 0.0
    return WaveState(t=c + 1, up=up, down=down)


def default_sample_times(t_max: int) -> tuple[int, ...]:
    """Geometric sample grid: powers of two and their midpoints 3*2^(k-1)."""
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    times = set()
    k = 1
    while k <= t_max:
        times.add(k)
        mid = 3 * k // 2
        if k > 1 and mid <= t_max:
            times.add(mid)
        k *= 2
    return tuple(sorted(times))


def _iterate(field: CoinField, psi: np.ndarray, t_max: int):
    """Yield (t, up, down) views after each step, reusing preallocated buffers.

    The arithmetic matches step() operation for operation, so the two paths
    produce bit-identical amplitudes.
    """
    n = t_max + 1
    up = np.zeros(n, dtype=complex)
    down = np.zeros(n, dtype=complex)
    up[0], down[0] = psi[0], psi[1]
    cu = np.empty(n, dtype=complex)
    cd = np.empty(n, dtype=complex)
    t1 = np.empty(n, dtype=complex)
    t2 = np.empty(n, dtype=complex)
    for t in range(1, t_max + 1):
        c = t - 1
        w = c + 1
        s, co = field.trig_slice(c)
        u = up[:w]
        d = down[:w]
        np.multiply(s, u, out=t1[:w])
        np.multiply(co, d, out=t2[:w])
        np.add(t1[:w], t2[:w], out=cu[:w])
        np.multiply(co, u, out=t1[:w])
        np.multiply(s, d, out=t2[:w])
        np.subtract(t1[:w], t2[:w], out=cd[:w])
        if c % 2 == 0:
            q0 = c // 2
            cu[q0] = u[q0]
            cd[q0] = d[q0]
        up[1:w + 1] = cu[:w]
        up[0] = 0.0
        down[0:w] = cd[:w]
        down[w] = 0.0
        yield t, up[:t + 1], down[:t + 1]


def _validated_sample_times(sample_times, t_max: int) -> np.ndarray:
    ts = np.asarray(sample_times, dtype=np.int64)
    if ts.size == 0:
        raise ValueError("sample_times must not be empty")
    if np.any(np.diff(ts) <= 0):
        raise ValueError("sample_times must be strictly increasing")
    if ts[0] < 1 or ts[-1] > t_max:
        raise ValueError(f"sample_times must lie in [1, {t_max}]")
    return ts


def evolve(field: CoinField, psi_ic, t_max: int, sample_times=None) -> SigmaSeries:
    """Run t_max steps from a localized start, recording sigma(t) at the sample times.

    sigma is the RMS displacement of the site density, the same quantity
    observables.sigma computes from a WaveState.
    """
    psi = _as_spinor(psi_ic)
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    if t_max > field.half_width:
        raise ValueError(f"t_max {t_max} exceeds the lattice half_width {field.half_width}")
    if sample_times is None:
        sample_times = default_sample_times(t_max)
    ts = _validated_sample_times(sample_times, t_max)
    slot = {int(t): k for k, t in enumerate(ts)}
    sigmas = np.empty(ts.size)
    for t, up, down in _iterate(field, psi, t_max):
        k = slot.get(t)
        if k is None:
            continue
        x = np.arange(-t, t + 1, 2, dtype=float)
        rho = np.abs(up) ** 2 + np.abs(down) ** 2
        mean = float(x @ rho)
        second = float((x * x) @ rho)
        sigmas[k] = math.sqrt(max(second - mean * mean, 0.0))
    return SigmaSeries(
        t=ts,
        sigma=sigmas,
        epsilon=field.epsilon,
        W=field.disorder.W,
        model=field.disorder.model,
        seed=field.disorder.seed,
    )


def evolve_state(field: CoinField, psi_ic, t_max: int) -> WaveState:
    """Run t_max steps and return the final state (no sampling)."""
    psi = _as_spinor(psi_ic)
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    if t_max > field.half_width:
        raise ValueError(f"t_max {t_max} exceeds the lattice half_width {field.half_width}")
    if t_max == 0:
        return init_localized(psi)
    for t, up, down in _iterate(field, psi, t_max):
        pass
    return WaveState(t=t_max, up=up.copy(), down=down.copy())


@dataclass(frozen=True)
class AbsorptionRecord:
    """Arrival spinors at the two absorbing walls, indexed by arrival time 1..t_max.

    right[t-1] is the spinor absorbed at x = 2^l at time t (only its up
    component can be nonzero: right-movers arrive from the left); left[t-1]
    is absorbed at x = 0 (only its down component can be nonzero).
    """

    l: int
    right: np.ndarray
    left: np.ndarray

    def times(self) -> np.ndarray:
        return np.arange(1, self.right.shape[0] + 1)

    def cumulative_absorbed(self) -> np.ndarray:
        """Total probability absorbed by each time; nondecreasing and <= 1."""
        per_t = np.sum(np.abs(self.right) ** 2 + np.abs(self.left) ** 2, axis=1)
        return np.cumsum(per_t)

    def generating_function(self, z: complex) -> tuple[np.ndarray, np.ndarray]:
        """(right, left) wall 2-vectors sum_t psi_t z^t, truncated at the recorded horizon."""
        right = np.zeros(2, dtype=complex)
        left = np.zeros(2, dtype=complex)
        for rt, lt in zip(self.right[::-1], self.left[::-1]):  # Horner in z
            right = (right + rt) * z
            left = (left + lt) * z
        return right, left


def evolve_absorbing(field: CoinField, l: int, psi_ic, t_max: int) -> AbsorptionRecord:
    """Walk between fully absorbing walls at x = 0 and x = 2^l, started at x = 2^(l-1).

    Amplitude arriving at a wall is recorded for that time step and removed, so
    nothing ever reflects back out of the wall sites.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    span = 1 << l
    if span - 1 > field.half_width:
        raise ValueError(
            f"wall separation 2^{l} needs interior sites up to {span - 1}, "
            f"beyond half_width {field.half_width}"
        )
    psi = _as_spinor(psi_ic)
    theta = np.array([field.angle(x) for x in range(1, span)])
    s = np.sin(theta)
    co = np.cos(theta)
    up = np.zeros(span + 1, dtype=complex)
    down = np.zeros(span + 1, dtype=complex)
    up[span // 2] = psi[0]
    down[span // 2] = psi[1]
    right = np.zeros((t_max, 2), dtype=complex)
    left = np.zeros((t_max, 2), dtype=complex)
    for t in range(t_max):
        u = up[1:span]
        d = down[1:span]
        cu = s * u + co * d
        cd = co * u - s * d
        up[2:] = cu
        up[1] = 0.0
        down[:span - 1] = cd
        down[span - 1] = 0.0
        right[t, 0] = up[span]
        up[span] = 0.0
        left[t, 1] = down[0]
        down[0] = 0.0
    return AbsorptionRecord(l=l, right=right, left=left)
