"""Frequency-swept two-port / N-port network algebra.

Networks are stored as per-frequency complex matrices on a shared
:class:`FrequencyGrid`.  Two representations are supported: scattering
parameters (:class:`NPortNetwork`) and the chain (ABCD) form
(:class:`AbcdSpectrum`), which cascades by matrix multiplication.

All values are immutable after construction and every operation is a pure
function, so everything here is safe for concurrent use.  Operations never
resample implicitly; grids must match exactly, and :func:`resample` is the
one explicit way to move a network onto a new grid.

Port indices in the public API are 1-based, matching S-parameter notation
(``s_db(n, 2, 1)`` is |S21| in dB).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

C0 = 299_792_458.0  # speed of light in vacuum, m/s

SERIES_IMPEDANCE = "series-impedance"
SHUNT_ADMITTANCE = "shunt-admittance"


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype).copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class FrequencyGrid:
    """Ordered sequence of frequency samples in Hz, shared by all spectra.

    points must be non-empty, strictly increasing and positive.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = _frozen_array(self.points, float)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("frequency grid must be a non-empty 1-D sequence")
        if not np.all(pts > 0):
            raise ValueError("frequencies must be positive")
        if not np.all(np.diff(pts) > 0):
            raise ValueError("frequencies must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def linspace(cls, f_start: float, f_stop: float, n: int) -> "FrequencyGrid":
        return cls(np.linspace(f_start, f_stop, n))

    def __len__(self) -> int:
        return self.points.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrequencyGrid):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash((self.points.size, float(self.points[0]), float(self.points[-1])))

    def index_of(self, f: float) -> int:
        """Index of the grid point closest to f."""
        return int(np.argmin(np.abs(self.points - f)))

    def span_contains(self, f_lo: float, f_hi: float) -> bool:
        return self.points[0] <= f_lo and f_hi <= self.points[-1]


def _require_same_grid(a: FrequencyGrid, b: FrequencyGrid, what: str):
    if a != b:
        raise ValueError(f"{what}: frequency grids differ; resample explicitly first")


@dataclass(frozen=True, eq=False)
class AbcdSpectrum:
    """Per-frequency complex 2x2 chain matrix.

    flags, when present, marks frequency points whose entries came out of a
    numerically singular conversion and should not be trusted.
    """

    grid: FrequencyGrid
    abcd: np.ndarray
    flags: Optional[np.ndarray] = None

    def __post_init__(self):
        m = _frozen_array(self.abcd, complex)
        if m.shape != (len(self.grid), 2, 2):
            raise ValueError(
                f"abcd must have shape ({len(self.grid)}, 2, 2), got {m.shape}"
            )
        object.__setattr__(self, "abcd", m)
        if self.flags is not None:
            fl = _frozen_array(self.flags, bool)
            if fl.shape != (len(self.grid),):
                raise ValueError("flags must be one boolean per frequency point")
            object.__setattr__(self, "flags", fl)

    @property
    def a(self) -> np.ndarray:
        return self.abcd[:, 0, 0]

    @property
    def b(self) -> np.ndarray:
        return self.abcd[:, 0, 1]

    @property
    def c(self) -> np.ndarray:
        return self.abcd[:, 1, 0]

    @property
    def d(self) -> np.ndarray:
        return self.abcd[:, 1, 1]


@dataclass(frozen=True, eq=False)
class NPortNetwork:
    """Complex N x N scattering matrices over a frequency grid.

    z_ref is the reference impedance per port in ohms (scalar broadcasts to
    every port).  flags, when present, marks per-frequency points produced by
    a singular conversion.
    """

    grid: FrequencyGrid
    s: np.ndarray
    z_ref: Union[float, np.ndarray] = 50.0
    flags: Optional[np.ndarray] = None

    def __post_init__(self):
        s = _frozen_array(self.s, complex)
        if s.ndim != 3 or s.shape[0] != len(self.grid) or s.shape[1] != s.shape[2]:
            raise ValueError(
                f"s must have shape (n_freq, N, N) with n_freq={len(self.grid)}, got {s.shape}"
            )
        if s.shape[1] < 1:
            raise ValueError("network needs at least one port")
        object.__setattr__(self, "s", s)
        z = np.asarray(self.z_ref, dtype=float)
        if z.ndim == 0:
            z = np.full(s.shape[1], float(z))
        if z.shape != (s.shape[1],):
            raise ValueError("z_ref must be a scalar or one value per port")
        if not np.all(z > 0):
            raise ValueError("reference impedances must be positive")
        object.__setattr__(self, "z_ref", _frozen_array(z, float))
        if self.flags is not None:
            fl = _frozen_array(self.flags, bool)
            if fl.shape != (len(self.grid),):
                raise ValueError("flags must be one boolean per frequency point")
            object.__setattr__(self, "flags", fl)

    @property
    def ports(self) -> int:
        return self.s.shape[1]

    def s_of(self, i: int, j: int) -> np.ndarray:
        """Complex S_ij over frequency, 1-based ports."""
        if not (1 <= i <= self.ports and 1 <= j <= self.ports):
            raise ValueError(f"port indices must be in 1..{self.ports}")
        return self.s[:, i - 1, j - 1]

    def s_db(self, i: int, j: int) -> np.ndarray:
        """|S_ij| in dB over frequency, 1-based ports."""
        mag = np.abs(self.s_of(i, j))
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(mag)

    def subnetwork(self, ports: Iterable[int]) -> "NPortNetwork":
        """Sub-select ports (1-based); remaining ports are treated as terminated."""
        idx = [p - 1 for p in ports]
        if any(not (0 <= k < self.ports) for k in idx):
            raise ValueError(f"port indices must be in 1..{self.ports}")
        sub = self.s[np.ix_(range(len(self.grid)), idx, idx)]
        return NPortNetwork(self.grid, sub, self.z_ref[idx], flags=self.flags)


@dataclass(frozen=True)
class NetworkCheckReport:
    """Per-frequency sanity figures for an S-parameter network."""

    grid: FrequencyGrid
    reciprocity_error: np.ndarray   # max over pairs of |S_ij - S_ji|
    max_singular_value: np.ndarray  # largest singular value of S

    @property
    def worst_reciprocity_error(self) -> float:
        return float(np.max(self.reciprocity_error))

    @property
    def worst_singular_value(self) -> float:
        return float(np.max(self.max_singular_value))

    def is_reciprocal(self, tol: float = 1e-9) -> bool:
        return self.worst_reciprocity_error <= tol

    def is_passive(self, tol: float = 1e-9) -> bool:
        return self.worst_singular_value <= 1.0 + tol


def element_abcd(kind: str, value_spectrum, grid: FrequencyGrid) -> AbcdSpectrum:
    """Chain matrix of a lumped series impedance or shunt admittance.

    kind is "series-impedance" (value in ohms) or "shunt-admittance" (value
    in siemens).  value_spectrum is one complex value per grid point; a
    scalar broadcasts.
    """
    v = np.asarray(value_spectrum, dtype=complex)
    if v.ndim == 0:
        v = np.full(len(grid), complex(v))
    if v.shape != (len(grid),):
        raise ValueError(
            f"value_spectrum length {v.shape} does not match grid length {len(grid)}"
        )
    m = np.zeros((len(grid), 2, 2), dtype=complex)
    m[:, 0, 0] = 1.0
    m[:, 1, 1] = 1.0
    if kind == SERIES_IMPEDANCE:
        m[:, 0, 1] = v
    elif kind == SHUNT_ADMITTANCE:
        m[:, 1, 0] = v
    else:
        raise ValueError(f"unknown element kind {kind!r}")
    return AbcdSpectrum(grid, m)


def tline_abcd(z0: float, eps_eff: float, length: float, grid: FrequencyGrid) -> AbcdSpectrum:
    """Chain matrix of a lossless transmission line.

    Electrical length is beta*l with beta = 2*pi*f*sqrt(eps_eff)/c0.
    """
    if z0 <= 0:
        raise ValueError("characteristic impedance must be positive")
    if eps_eff < 1:
        raise ValueError("effective permittivity must be >= 1")
    if length < 0:
        raise ValueError("line length must be non-negative")
    beta_l = 2.0 * np.pi * grid.points * np.sqrt(eps_eff) / C0 * length
    m = np.empty((len(grid), 2, 2), dtype=complex)
    m[:, 0, 0] = np.cos(beta_l)
    m[:, 0, 1] = 1j * z0 * np.sin(beta_l)
    m[:, 1, 0] = 1j * np.sin(beta_l) / z0
    m[:, 1, 1] = np.cos(beta_l)
    return AbcdSpectrum(grid, m)


def cascade(a: AbcdSpectrum, b: AbcdSpectrum) -> AbcdSpectrum:
    """Per-frequency matrix product a @ b (a is closest to port 1)."""
    _require_same_grid(a.grid, b.grid, "cascade")
    return AbcdSpectrum(a.grid, a.abcd @ b.abcd)


def cascade_all(first: AbcdSpectrum, *rest: AbcdSpectrum) -> AbcdSpectrum:
    out = first
    for nxt in rest:
        out = cascade(out, nxt)
    return out


def s_from_abcd(a: AbcdSpectrum, z0: float = 50.0) -> NPortNetwork:
    """Convert a two-port chain matrix to S-parameters at reference z0.

    Frequency points with a vanishing conversion denominator are kept in the
    sweep with NaN entries and marked in flags rather than aborting.
    """
    if z0 <= 0:
        raise ValueError("reference impedance must be positive")
    A, B, C, D = a.a, a.b, a.c, a.d
    denom = A + B / z0 + C * z0 + D
    bad = ~np.isfinite(denom) | (np.abs(denom) == 0.0)
    safe = np.where(bad, 1.0, denom)
    s = np.empty((len(a.grid), 2, 2), dtype=complex)
    s[:, 0, 0] = (A + B / z0 - C * z0 - D) / safe
    s[:, 0, 1] = 2.0 * (A * D - B * C) / safe
    s[:, 1, 0] = 2.0 / safe
    s[:, 1, 1] = (-A + B / z0 - C * z0 + D) / safe
    if np.any(bad):
        s[bad] = np.nan
    flags = bad if np.any(bad) else None
    return NPortNetwork(a.grid, s, z0, flags=flags)


def abcd_from_s(n: NPortNetwork) -> AbcdSpectrum:
    """Convert a two-port S-parameter network to its chain matrix.

    Requires equal reference impedances on both ports.  Points where S21 is
    exactly zero have no chain representation; they carry NaN entries and a
    flag (band-stop models legitimately approach S21 -> 0).
    """
    if n.ports != 2:
        raise ValueError("chain conversion is defined for two-ports only")
    if n.z_ref[0] != n.z_ref[1]:
        raise ValueError("chain conversion requires equal port reference impedances")
    z0 = float(n.z_ref[0])
    s11 = n.s[:, 0, 0]
    s12 = n.s[:, 0, 1]
    s21 = n.s[:, 1, 0]
    s22 = n.s[:, 1, 1]
    bad = np.abs(s21) == 0.0
    safe = np.where(bad, 1.0, 2.0 * s21)
    m = np.empty((len(n.grid), 2, 2), dtype=complex)
    m[:, 0, 0] = ((1 + s11) * (1 - s22) + s12 * s21) / safe
    m[:, 0, 1] = z0 * ((1 + s11) * (1 + s22) - s12 * s21) / safe
    m[:, 1, 0] = ((1 - s11) * (1 - s22) - s12 * s21) / (safe * z0)
    m[:, 1, 1] = ((1 - s11) * (1 + s22) + s12 * s21) / safe
    if np.any(bad):
        m[bad] = np.nan
    flags = bad if np.any(bad) else None
    return AbcdSpectrum(n.grid, m, flags=flags)


def network_checks(n: NPortNetwork) -> NetworkCheckReport:
    """Report reciprocity deviation and passivity margin per frequency."""
    diff = np.abs(n.s - np.transpose(n.s, (0, 2, 1)))
    recip = diff.reshape(len(n.grid), -1).max(axis=1)
    sv = np.linalg.svd(n.s, compute_uv=False)[:, 0]
    return NetworkCheckReport(n.grid, recip, sv)


def resample(n: NPortNetwork, new_grid: FrequencyGrid) -> NPortNetwork:
    """Linear interpolation of S onto new_grid (real/imag separately).

    new_grid must lie within the span of the existing grid.
    """
    f_old = n.grid.points
    f_new = new_grid.points
    if f_new[0] < f_old[0] or f_new[-1] > f_old[-1]:
        raise ValueError("new grid extends beyond the sampled span")
    s_new = np.empty((len(new_grid), n.ports, n.ports), dtype=complex)
    for i in range(n.ports):
        for j in range(n.ports):
            s_new[:, i, j] = np.interp(f_new, f_old, n.s[:, i, j].real) + 1j * np.interp(
                f_new, f_old, n.s[:, i, j].imag
            )
    return NPortNetwork(new_grid, s_new, n.z_ref)
