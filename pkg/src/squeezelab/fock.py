"""Truncated Fock-space representation of 1-3 bosonic modes.

States are dense complex amplitude tensors over occupation-number bases,
one axis per mode.  The module provides the standard constructors
(vacuum, number, coherent, squeezed vacuum), ladder-operator expectation
values, quadrature statistics, and an exact passive two-mode mixer
(beam splitter / interferometer arm) applied block-by-block in the
total-photon-number decomposition.  Everything here is brute force on
purpose: this layer is the numerical oracle against which the closed-form
results of :mod:`squeezelab.analytic` are checked.

Conventions
-----------
* Quadratures are normalized so the vacuum variance is 1:
  for a canonical lowering operator ``A`` (``[A, A†] = 1``) the quadrature
  at angle ``phi`` is ``Q = A e^{-i phi} + A† e^{i phi}``.
* A squeezed vacuum with parameters ``(s, theta)`` has even-occupation
  amplitudes proportional to ``(-e^{i theta} tanh s)^{n/2}``; at
  ``theta = 0`` the minimal-variance quadrature is ``a + a†`` with
  variance ``e^{-2s}``, and ``<a²> = -sinh(s) cosh(s)``.
* The "distance intensity" used by the phase-resolution metric is the
  lowering-part expectation ``<A†A>`` of the distance quadrature, so a
  coherent state of amplitude ``alpha`` has intensity ``|alpha|²`` and
  phase resolution exactly ``|alpha|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import lgamma
from typing import Sequence

import numpy as np

from .metrics import phase_resolution

__all__ = [
    "TruncationError",
    "FockState",
    "SqueezeParams",
    "QuadratureSpec",
    "vacuum_state",
    "number_state",
    "coherent_state",
    "squeezed_vacuum",
    "product_state",
    "default_cutoff",
    "apply_ladder",
    "expectation",
    "quadrature_stats",
    "distance_intensity",
    "state_phase_resolution",
    "phase_resolution_of_mode",
    "apply_mode_unitary",
    "apply_beam_splitter",
    "state_to_json",
    "state_from_json",
]

#: norm must stay this close to 1 after every constructor / unitary
NORM_TOL = 1e-9
#: maximum tolerated truncated-norm deficit for state constructors
DEFICIT_TOL = 1e-10


class TruncationError(Exception):
    """The requested state does not fit in the truncated basis."""


def default_cutoff(mean_photons: float) -> int:
    """Default per-mode occupation cutoff for a state with ``mean_photons``.

    Uses ``<n> + 6 sqrt(<n>) + 10``, which puts the truncation several
    standard deviations into the Poisson tail.
    """
    mean_photons = max(float(mean_photons), 0.0)
    return int(math.ceil(mean_photons + 6.0 * math.sqrt(mean_photons) + 10.0))


class FockState:
    """Pure state of 1-3 modes as a dense complex amplitude tensor.

    ``amps[n1, n2, ...]`` is the amplitude of the occupation basis state
    ``|n1, n2, ...>``.  Instances are treated as immutable: operations
    return new states rather than mutating in place.
    """

    __slots__ = ("amps",)

    def __init__(self, amps: np.ndarray):
        amps = np.asarray(amps, dtype=np.complex128)
        if amps.ndim < 1 or amps.ndim > 3:
            raise ValueError(f"expected 1-3 modes, got {amps.ndim}")
        self.amps = amps

    @property
    def n_modes(self) -> int:
        return self.amps.ndim

    @property
    def mode_dims(self) -> tuple[int, ...]:
        return self.amps.shape

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps.ravel()))

    def mean_photons(self, mode: int = 0) -> float:
        """Expectation of the number operator of ``mode``."""
        n = np.arange(self.amps.shape[mode]).reshape(
            [-1 if ax == mode else 1 for ax in range(self.amps.ndim)]
        )
        return float(np.sum(n * np.abs(self.amps) ** 2))

    def __repr__(self) -> str:
        return f"FockState(mode_dims={self.mode_dims}, norm={self.norm():.6f})"


def _check_norm(state: FockState) -> FockState:
    if abs(state.norm() - 1.0) > NORM_TOL:
        raise TruncationError(f"state norm {state.norm()} violates unit-norm invariant")
    return state


def vacuum_state(mode_dims: Sequence[int] | int) -> FockState:
    if isinstance(mode_dims, int):
        mode_dims = (mode_dims,)
    amps = np.zeros(tuple(mode_dims), dtype=np.complex128)
    amps[(0,) * len(mode_dims)] = 1.0
    return FockState(amps)


def number_state(occupations: Sequence[int] | int, mode_dims: Sequence[int] | int) -> FockState:
    if isinstance(occupations, int):
        occupations = (occupations,)
    if isinstance(mode_dims, int):
        mode_dims = (mode_dims,)
    occupations = tuple(occupations)
    mode_dims = tuple(mode_dims)
    for n, d in zip(occupations, mode_dims):
        if not 0 <= n < d:
            raise ValueError(f"occupation {n} outside [0, {d})")
    amps = np.zeros(mode_dims, dtype=np.complex128)
    amps[occupations] = 1.0
    return FockState(amps)


def _coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Coefficients exp(-|a|²/2) aⁿ/sqrt(n!) computed in log space.

    The log form avoids the underflow of the direct recursion (the n=0
    coefficient alone underflows once |alpha|² is a few hundred).
    """
    n = np.arange(dim)
    mag = abs(alpha)
    if mag == 0.0:
        out = np.zeros(dim, dtype=np.complex128)
        out[0] = 1.0
        return out
    log_mag = -0.5 * mag * mag + n * math.log(mag) - 0.5 * np.array([lgamma(k + 1.0) for k in range(dim)])
    phase = np.exp(1j * np.angle(alpha) * n)
    return np.exp(log_mag) * phase


def coherent_state(alpha: complex, cutoff: int | None = None) -> FockState:
    """Single-mode coherent state of amplitude ``alpha``.

    The occupation cutoff is raised to at least ``|alpha|² + 6|alpha| + 10``
    (callers may pass more).  Raises :class:`TruncationError` if the
    truncated-norm deficit still exceeds ``DEFICIT_TOL``.
    """
    mean = abs(alpha) ** 2
    floor = default_cutoff(mean)
    cutoff = floor if cutoff is None else max(int(cutoff), floor)
    amps = _coherent_amplitudes(alpha, cutoff + 1)
    deficit = 1.0 - float(np.sum(np.abs(amps) ** 2))
    if deficit > DEFICIT_TOL:
        raise TruncationError(
            f"coherent state |alpha|²={mean:g} at cutoff {cutoff}: norm deficit {deficit:.3e}"
        )
    return _check_norm(FockState(amps / np.linalg.norm(amps)))


@dataclass(frozen=True)
class SqueezeParams:
    """Squeezing magnitude ``s >= 0`` and phase ``theta`` (mod 2pi)."""

    s: float
    theta: float = 0.0

    def __post_init__(self):
        if self.s < 0:
            raise ValueError(f"squeezing magnitude must be >= 0, got {self.s}")
        object.__setattr__(self, "theta", float(self.theta) % (2.0 * math.pi))

    @property
    def mean_photons(self) -> float:
        return math.sinh(self.s) ** 2


def _squeezed_amplitudes(params: SqueezeParams, dim: int) -> np.ndarray:
    """Even-occupation coefficients via the stable two-term ratio recursion."""
    amps = np.zeros(dim, dtype=np.complex128)
    c = 1.0 / math.sqrt(math.cosh(params.s))
    ratio_base = -np.exp(1j * params.theta) * math.tanh(params.s)
    amps[0] = c
    n = 0
    while n + 2 < dim:
        # c_{n+2} / c_n = (-e^{i theta} tanh s) * sqrt((n+1)/(n+2))
        c = c * ratio_base * math.sqrt((n + 1.0) / (n + 2.0))
        amps[n + 2] = c
        n += 2
    return amps


def squeezed_vacuum(params: SqueezeParams, cutoff: int | None = None) -> FockState:
    """Single-mode squeezed vacuum ``|0, s e^{i theta}>``.

    Only even occupations are populated.  With ``cutoff=None`` the default
    cutoff is doubled until the truncated-norm deficit drops below
    ``DEFICIT_TOL``; an explicit cutoff is used as given and rejected if
    it leaves too large a deficit.
    """
    if params.s == 0.0:
        return vacuum_state(2 if cutoff is None else cutoff + 1)
    if cutoff is not None:
        amps = _squeezed_amplitudes(params, int(cutoff) + 1)
        deficit = 1.0 - float(np.sum(np.abs(amps) ** 2))
        if deficit > DEFICIT_TOL:
            raise TruncationError(
                f"squeezed vacuum s={params.s:g} at cutoff {cutoff}: norm deficit {deficit:.3e}"
            )
    else:
        trial = default_cutoff(params.mean_photons)
        for _ in range(20):
            amps = _squeezed_amplitudes(params, trial + 1)
            deficit = 1.0 - float(np.sum(np.abs(amps) ** 2))
            if deficit <= DEFICIT_TOL:
                break
            trial *= 2
        else:
            raise TruncationError(f"squeezed vacuum s={params.s:g}: cutoff search did not converge")
    return _check_norm(FockState(amps / np.linalg.norm(amps)))


def product_state(*states: FockState) -> FockState:
    """Tensor product of single-mode states into one multimode state."""
    amps = states[0].amps
    for st in states[1:]:
        amps = np.tensordot(amps, st.amps, axes=0)
    return FockState(amps)


# ---------------------------------------------------------------------------
# ladder-operator machinery

def apply_ladder(amps: np.ndarray, kind: str, mode: int) -> np.ndarray:
    """Apply a single ladder operator to an amplitude tensor.

    ``kind`` is ``"a"`` (annihilation) or ``"ad"`` (creation).  Creation
    out of the top truncated level is dropped, which is the action of the
    truncated-space operator.
    """
    dim = amps.shape[mode]
    out = np.zeros_like(amps)
    w_shape = [1] * amps.ndim
    w_shape[mode] = dim - 1
    weights = np.sqrt(np.arange(1, dim, dtype=float)).reshape(w_shape)
    src = [slice(None)] * amps.ndim
    dst = [slice(None)] * amps.ndim
    if kind == "a":
        src[mode] = slice(1, dim)
        dst[mode] = slice(0, dim - 1)
    elif kind == "ad":
        src[mode] = slice(0, dim - 1)
        dst[mode] = slice(1, dim)
    else:
        raise ValueError(f"unknown ladder kind {kind!r}")
    out[tuple(dst)] = weights * amps[tuple(src)]
    return out


def _normalize_operator(operator) -> list[tuple[complex, tuple[tuple[str, int], ...]]]:
    operator = list(operator)
    if operator and isinstance(operator[0], tuple) and isinstance(operator[0][0], str):
        return [(1.0 + 0.0j, tuple(operator))]
    return [(complex(c), tuple(prod)) for c, prod in operator]


def expectation(state: FockState, operator) -> complex:
    """Expectation value of a polynomial in the mode ladder operators.

    ``operator`` is either a single product -- a sequence of
    ``("a" | "ad", mode)`` factors read left to right as written, i.e.
    ``(("ad", 0), ("a", 0))`` is the number operator -- or a list of
    ``(coefficient, product)`` terms that are summed.
    """
    total = 0.0 + 0.0j
    for coeff, product in _normalize_operator(operator):
        vec = state.amps
        for kind, mode in reversed(product):
            if not 0 <= mode < state.n_modes:
                raise ValueError(f"mode index {mode} out of range for {state.n_modes}-mode state")
            vec = apply_ladder(vec, kind, mode)
        total += coeff * complex(np.vdot(state.amps, vec))
    return total


# ---------------------------------------------------------------------------
# quadratures

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class QuadratureSpec:
    """A vacuum-variance-1 quadrature, defined by its lowering operator.

    The quadrature operator is ``Q = A e^{-i angle}... `` -- concretely
    ``Q = A + A†`` with ``A = sum_k u_k a_k`` and ``sum |u_k|² = 1``.
    ``kind`` selects the preset combination:

    * ``"y2"`` / ``"x2"``: cosine / sine quadrature of mode 0
      (``a + a†`` and ``-i(a† - a)``),
    * ``"y3"`` / ``"x3"``: the same pair for the normalized two-mode
      combination ``i(a_0 - a_1)/sqrt(2)`` used for signal/idler pairs,
    * ``"generic"``: quadrature of one mode at an arbitrary angle.
    """

    kind: str
    mode: int = 0
    angle: float = 0.0

    @classmethod
    def y2(cls) -> "QuadratureSpec":
        return cls("y2")

    @classmethod
    def x2(cls) -> "QuadratureSpec":
        return cls("x2")

    @classmethod
    def y3(cls) -> "QuadratureSpec":
        return cls("y3")

    @classmethod
    def x3(cls) -> "QuadratureSpec":
        return cls("x3")

    @classmethod
    def generic(cls, mode: int, angle: float) -> "QuadratureSpec":
        return cls("generic", mode=mode, angle=angle)

    def lowering_coefficients(self) -> dict[int, complex]:
        """Mode -> coefficient ``u_k`` of the canonical lowering part."""
        if self.kind == "y2":
            return {0: 1.0 + 0.0j}
        if self.kind == "x2":
            # -i(a† - a) = (i)a + (-i)a†
            return {0: 1.0j}
        if self.kind == "y3":
            return {0: 1.0j / _SQRT2, 1: -1.0j / _SQRT2}
        if self.kind == "x3":
            return {0: -1.0 / _SQRT2, 1: 1.0 / _SQRT2}
        if self.kind == "generic":
            return {self.mode: complex(np.exp(-1j * self.angle))}
        raise ValueError(f"unknown quadrature kind {self.kind!r}")


def _lowering_moments(state: FockState, coeffs: dict[int, complex]):
    """First and second moments of A = sum u_k a_k."""
    modes = sorted(coeffs)
    mean_a = sum(coeffs[k] * expectation(state, (("a", k),)) for k in modes)
    sq = 0.0 + 0.0j
    adag_a = 0.0 + 0.0j
    for k in modes:
        for l in modes:
            sq += coeffs[k] * coeffs[l] * expectation(state, (("a", k), ("a", l)))
            adag_a += np.conj(coeffs[k]) * coeffs[l] * expectation(state, (("ad", k), ("a", l)))
    return mean_a, sq, adag_a


def quadrature_stats(state: FockState, spec: QuadratureSpec) -> tuple[float, float, float]:
    """Return ``(mean, variance, intensity)`` of a quadrature.

    ``intensity`` is ``<Q†Q> = <Q²>`` of the Hermitian quadrature operator;
    the variance is ``<Q²> - <Q>²`` and equals 1 on vacuum for every spec.
    """
    coeffs = spec.lowering_coefficients()
    for mode in coeffs:
        if not 0 <= mode < state.n_modes:
            raise ValueError(f"quadrature {spec.kind!r} needs mode {mode}, state has {state.n_modes}")
    mean_a, sq, adag_a = _lowering_moments(state, coeffs)
    mean = 2.0 * mean_a.real
    second = 2.0 * sq.real + 2.0 * adag_a.real + 1.0
    variance = second - mean * mean
    return mean, float(variance), float(second)


def distance_intensity(state: FockState, spec: QuadratureSpec) -> float:
    """Lowering-part intensity ``<A†A>`` of a quadrature.

    This is the photon-number-like numerator of the phase-resolution
    metric: for a coherent state along any direction it equals
    ``|alpha|²``, for a squeezed vacuum ``sinh²(s)``.
    """
    _, _, adag_a = _lowering_moments(state, spec.lowering_coefficients())
    if abs(adag_a.imag) > 1e-10:
        raise ValueError(f"intensity came out non-real: {adag_a}")
    return float(adag_a.real)


def state_phase_resolution(state: FockState, distance: QuadratureSpec, uncertainty: QuadratureSpec):
    """Phase resolution of ``state`` for a given distance/uncertainty pair."""
    intensity = distance_intensity(state, distance)
    _, variance, _ = quadrature_stats(state, uncertainty)
    return phase_resolution(intensity, variance)


def phase_resolution_of_mode(state: FockState, mode: int = 0):
    """Phase resolution of one mode with auto-aligned quadratures.

    The distance quadrature is aligned with the mean field; for zero-mean
    states (squeezed vacuum) it falls back to the major axis of the noise
    ellipse, whose orientation is defined to within pi.
    """
    mean_a = expectation(state, (("a", mode),))
    if abs(mean_a) > 1e-8:
        chi = float(np.angle(mean_a))
    else:
        sq = expectation(state, (("a", mode), ("a", mode)))
        chi = 0.0 if abs(sq) < 1e-14 else 0.5 * float(np.angle(sq))
    distance = QuadratureSpec.generic(mode, chi)
    uncertainty = QuadratureSpec.generic(mode, chi + 0.5 * math.pi)
    return state_phase_resolution(state, distance, uncertainty)


# ---------------------------------------------------------------------------
# passive two-mode mixing

_rotation_cache: dict[float, list[np.ndarray]] = {}
_ROTATION_CACHE_MAX = 4


def _rotation_block(n: int, theta: float) -> np.ndarray:
    """One total-photon-number block of exp[theta (a1† a2 - a2† a1)].

    The real orthogonal matrix ``B[m', m]`` mapping ``|m, n-m>`` to
    ``sum_m' B[m', m] |m', n-m'>``.  The anti-symmetric tridiagonal
    generator is gauged to a real symmetric tridiagonal matrix and
    exponentiated through its eigendecomposition, which keeps every block
    orthogonal to machine precision at any size (naive amplitude
    recursions blow up beyond n ~ 100, and factorial formulas overflow).
    """
    if n == 0:
        return np.ones((1, 1))
    from scipy.linalg import eigh_tridiagonal

    m = np.arange(n, dtype=float)
    offdiag = -np.sqrt((m + 1.0) * (n - m))
    vals, vecs = eigh_tridiagonal(np.zeros(n + 1), offdiag)
    core = (vecs * np.exp(-1j * theta * vals)) @ vecs.T
    gauge = 1j ** np.arange(n + 1)
    return (np.conj(gauge)[:, None] * core * gauge[None, :]).real


def _rotation_blocks(theta: float, n_max: int) -> list[np.ndarray]:
    theta = float(theta)
    blocks = _rotation_cache.get(theta)
    if blocks is None:
        if len(_rotation_cache) >= _ROTATION_CACHE_MAX:
            _rotation_cache.pop(next(iter(_rotation_cache)))
        blocks = [np.ones((1, 1))]
        _rotation_cache[theta] = blocks
    while len(blocks) <= n_max:
        blocks.append(_rotation_block(len(blocks), theta))
    return blocks


def _phase_diag(amps: np.ndarray, phi1: float, phi2: float) -> np.ndarray:
    """State-space action of the mode phase map diag(e^{i phi1}, e^{i phi2})."""
    d1, d2 = amps.shape
    p1 = np.exp(1j * phi1 * np.arange(d1))
    p2 = np.exp(1j * phi2 * np.arange(d2))
    return amps * p1[:, None] * p2[None, :]


def _apply_rotation(amps: np.ndarray, theta: float) -> np.ndarray:
    d1, d2 = amps.shape
    total = d1 + d2 - 1
    out = np.zeros((total, total), dtype=np.complex128)
    blocks = _rotation_blocks(theta, total - 1)
    for n in range(total):
        lo = max(0, n - (d2 - 1))
        hi = min(d1 - 1, n)
        if lo > hi:
            continue
        vin = np.zeros(n + 1, dtype=np.complex128)
        m = np.arange(lo, hi + 1)
        vin[m] = amps[m, n - m]
        vout = blocks[n] @ vin
        mo = np.arange(n + 1)
        out[mo, n - mo] = vout
    return out


def _decompose_mode_matrix(matrix: np.ndarray):
    """Split a 2x2 unitary into phases * real rotation * phases.

    Returns ``(mu1, mu2, theta, nu1, nu2)`` with
    ``M = diag(e^{i mu}) R(theta) diag(e^{i nu})`` and
    ``R = [[cos, sin], [-sin, cos]]``.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError("mode matrix must be 2x2")
    if np.max(np.abs(m @ m.conj().T - np.eye(2))) > 1e-12:
        raise ValueError("mode matrix is not unitary to 1e-12; coefficient set rejected")
    c = abs(m[0, 0])
    s = abs(m[0, 1])
    theta = math.atan2(s, c)
    if s < 1e-15:
        return float(np.angle(m[0, 0])), float(np.angle(m[1, 1])), 0.0, 0.0, 0.0
    if c < 1e-15:
        return float(np.angle(m[0, 1])), float(np.angle(-m[1, 0])), 0.5 * math.pi, 0.0, 0.0
    mu1 = float(np.angle(m[0, 0]))
    nu2 = float(np.angle(m[0, 1])) - mu1
    mu2 = float(np.angle(-m[1, 0]))
    return mu1, mu2, theta, 0.0, nu2


def apply_mode_unitary(state: FockState, matrix: np.ndarray) -> FockState:
    """Apply a passive (photon-conserving) 2-mode transformation.

    The output state reproduces, on its plain mode operators, the
    statistics of the transformed modes ``b_i = sum_j M[i, j] a_j`` on the
    input state.  Output mode dimensions are enlarged so that no amplitude
    is clipped; norm and total photon number are conserved exactly up to
    rounding.
    """
    if state.n_modes != 2:
        raise ValueError("mode mixing is defined for two-mode states")
    mu1, mu2, theta, nu1, nu2 = _decompose_mode_matrix(matrix)
    amps = _phase_diag(state.amps, nu1, nu2)
    amps = _apply_rotation(amps, theta)
    amps = _phase_diag(amps, mu1, mu2)
    return _check_norm(FockState(amps))


def apply_beam_splitter(state: FockState, cfg) -> FockState:
    """Mix a two-mode state on a lossless beam splitter.

    ``cfg`` is an :class:`squeezelab.analytic.BeamSplitterConfig` (anything
    with a ``mode_matrix()`` method works).  Mode 0 of the result is the
    transmitted-plus-reflected output port analyzed throughout the library.
    """
    return apply_mode_unitary(state, cfg.mode_matrix())


# ---------------------------------------------------------------------------
# debug serialization

def state_to_json(state: FockState, threshold: float = 0.0) -> dict:
    """JSON-friendly dump: occupation tuple -> [re, im]."""
    entries = {}
    for idx in np.ndindex(state.mode_dims):
        a = state.amps[idx]
        if abs(a) > threshold:
            entries[",".join(str(i) for i in idx)] = [float(a.real), float(a.imag)]
    return {"mode_dims": list(state.mode_dims), "amplitudes": entries}


def state_from_json(payload: dict) -> FockState:
    dims = tuple(int(d) for d in payload["mode_dims"])
    amps = np.zeros(dims, dtype=np.complex128)
    for key, (re, im) in payload["amplitudes"].items():
        idx = tuple(int(t) for t in key.split(","))
        amps[idx] = re + 1j * im
    return FockState(amps)
