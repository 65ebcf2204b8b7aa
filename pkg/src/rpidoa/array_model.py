"""Uniform linear array geometry and narrowband snapshot synthesis.

The receive model for a single far-field emitter at angle ``theta`` is

    y(t) = a(theta) * s(t) + v(t)

with a unit-power complex-Gaussian baseband signal ``s`` and circularly
symmetric white Gaussian noise ``v``.  The manifold convention is
``a_n = exp(-1j * 2*pi * d_n * sin(theta))`` with element offsets ``d_n``
in wavelengths and the first element as the phase reference.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

_SNAPSHOT_MAGIC = b"DPSM"


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array described in wavelength units.

    Parameters
    ----------
    n_antennas : int
        Number of elements, at least 2.
    spacing : float, optional
        Inter-element spacing in wavelengths (default half-wavelength).
    """

    n_antennas: int
    spacing: float = 0.5
    positions: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n_antennas) != self.n_antennas or self.n_antennas < 2:
            raise ValueError(f"n_antennas must be an integer >= 2, got {self.n_antennas}")
        if not (self.spacing > 0):
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        object.__setattr__(self, "n_antennas", int(self.n_antennas))
        positions = np.arange(self.n_antennas, dtype=np.float64) * float(self.spacing)
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)


@dataclass(frozen=True)
class SourceScenario:
    """One emitter/noise configuration for snapshot synthesis.

    ``theta0_deg`` must lie strictly inside (-90, 90) so the phase-angle
    round trip through arcsin stays well defined.  ``seed`` makes every
    synthesis deterministic.
    """

    theta0_deg: float
    snr_db: float
    k_snapshots: int
    seed: int

    def __post_init__(self):
        if not (-90.0 < self.theta0_deg < 90.0):
            raise ValueError(f"theta0_deg must be in (-90, 90), got {self.theta0_deg}")
        if int(self.k_snapshots) != self.k_snapshots or self.k_snapshots < 1:
            raise ValueError(f"k_snapshots must be a positive integer, got {self.k_snapshots}")
        if int(self.seed) != self.seed or self.seed < 0 or self.seed > 2**64 - 1:
            raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {self.seed}")
        object.__setattr__(self, "k_snapshots", int(self.k_snapshots))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class SnapshotMatrix:
    """Complex N x K received-data block (antennas by time samples)."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.complex128)
        if data.ndim != 2:
            raise ValueError(f"snapshot data must be a 2-D matrix, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("snapshot data contains non-finite entries")
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def n_antennas(self) -> int:
        return self.data.shape[0]

    @property
    def k_snapshots(self) -> int:
        return self.data.shape[1]


def steering_vector(geometry: ArrayGeometry, theta_deg: float) -> np.ndarray:
    """Array manifold a(theta) for one angle in degrees.

    Every entry has unit modulus and the first entry is exactly 1.
    """
    if not (-90.0 <= theta_deg <= 90.0):
        raise ValueError(f"theta_deg must be in [-90, 90], got {theta_deg}")
    phase_step = 2.0 * np.pi * np.sin(np.deg2rad(theta_deg))
    return np.exp(-1j * phase_step * geometry.positions)


def synthesize_snapshots(
    geometry: ArrayGeometry,
    scenario: SourceScenario,
    noiseless: bool = False,
) -> SnapshotMatrix:
    """Draw one N x K data block from the single-emitter receive model.

    The signal has unit average power; the per-antenna noise variance is
    ``10**(-snr_db/10)``.  With ``noiseless=True`` the noise term is
    dropped but the signal draw (and therefore the seed stream) is
    unchanged, so noisy and noiseless blocks from the same seed share
    the same source waveform.
    """
    rng = np.random.default_rng(scenario.seed)
    n, k = geometry.n_antennas, scenario.k_snapshots
    signal = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / np.sqrt(2.0)
    manifold = steering_vector(geometry, scenario.theta0_deg)
    data = np.outer(manifold, signal)
    if not noiseless:
        sigma = 10.0 ** (-scenario.snr_db / 20.0)
        noise = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) / np.sqrt(2.0)
        data = data + sigma * noise
    return SnapshotMatrix(data)


def save_snapshots(snapshots: SnapshotMatrix, path) -> None:
    """Write a snapshot block to the binary interchange format.

    Layout: magic ``DPSM``, little-endian u32 N, u32 K, then N*K
    interleaved (re, im) float64 pairs in column-major order.
    """
    data = snapshots.data
    n, k = data.shape
    flat = data.flatten(order="F")
    payload = np.empty(2 * n * k, dtype="<f8")
    payload[0::2] = flat.real
    payload[1::2] = flat.imag
    with open(path, "wb") as fh:
        fh.write(_SNAPSHOT_MAGIC)
        fh.write(struct.pack("<II", n, k))
        fh.write(payload.tobytes())


def load_snapshots(path) -> SnapshotMatrix:
    """Read a snapshot block written by :func:`save_snapshots`."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _SNAPSHOT_MAGIC:
            raise ValueError(f"bad snapshot file magic: {magic!r}")
        n, k = struct.unpack("<II", fh.read(8))
        payload = np.frombuffer(fh.read(), dtype="<f8")
    if payload.size != 2 * n * k:
        raise ValueError(
            f"snapshot payload holds {payload.size} floats, expected {2 * n * k}"
        )
    flat = payload[0::2] + 1j * payload[1::2]
    return SnapshotMatrix(flat.reshape((n, k), order="F"))
