"""Brute-force verification of the closed-form mixer results.

Each check builds the actual two-mode input state (coherent beam plus
squeezed vacuum) in a truncated Fock space, applies the mixer as an exact
passive unitary, measures the output-port statistics, and compares them
against the corresponding formula from :mod:`squeezelab.analytic`.

Input phase conventions: the coherent amplitude is oriented so the output
mean field lies on the imaginary axis, making the measured cosine
quadrature the uncertainty direction, and the squeeze phase is set to the
optimal value (``theta = -2 delta - 2 psi`` for the beam splitter,
``theta = -2 global_phase`` for the interferometer) unless overridden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .analytic import (
    BeamSplitterConfig,
    InterferometerConfig,
    beam_splitter_phase_resolution,
    beam_splitter_variance,
    interferometer_phase_resolution,
    interferometer_variance,
)
from .fock import (
    FockState,
    QuadratureSpec,
    SqueezeParams,
    apply_mode_unitary,
    coherent_state,
    distance_intensity,
    product_state,
    quadrature_stats,
    squeezed_vacuum,
)
from .metrics import phase_resolution

__all__ = [
    "CrosscheckReport",
    "beam_splitter_crosscheck",
    "interferometer_crosscheck",
    "beam_splitter_variance_crosscheck",
]


@dataclass(frozen=True)
class CrosscheckReport:
    """Analytic vs Fock-space values for one mixer configuration."""

    analytic_variance: float
    fock_variance: float
    analytic_intensity: float
    fock_intensity: float
    analytic_s: float
    fock_s: float

    @property
    def variance_rel_err(self) -> float:
        return _rel(self.analytic_variance, self.fock_variance)

    @property
    def intensity_rel_err(self) -> float:
        return _rel(self.analytic_intensity, self.fock_intensity)

    @property
    def s_rel_err(self) -> float:
        return _rel(self.analytic_s, self.fock_s)

    @property
    def max_rel_err(self) -> float:
        return max(self.variance_rel_err, self.intensity_rel_err, self.s_rel_err)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), 1e-12)


def _mixed_output(matrix, alpha: complex, params: SqueezeParams, cutoff: int | None) -> FockState:
    beam = coherent_state(alpha)
    squeezed = squeezed_vacuum(params, cutoff)
    return apply_mode_unitary(product_state(beam, squeezed), matrix)


def _port_statistics(out: FockState):
    _, variance, _ = quadrature_stats(out, QuadratureSpec.generic(0, 0.0))
    intensity = distance_intensity(out, QuadratureSpec.generic(0, 0.5 * math.pi))
    return variance, intensity


def beam_splitter_crosscheck(
    cfg: BeamSplitterConfig, s: float, alpha_mag: float, cutoff: int | None = None
) -> CrosscheckReport:
    """Optimal-phase beam splitter: formulas vs the truncated-space unitary."""
    theta = -2.0 * cfg.delta - 2.0 * cfg.psi
    alpha = 1j * alpha_mag * complex(math.cos(-cfg.delta), math.sin(-cfg.delta))
    out = _mixed_output(cfg.mode_matrix(), alpha, SqueezeParams(s, theta), cutoff)
    variance, intensity = _port_statistics(out)
    ana = beam_splitter_phase_resolution(cfg, s, alpha_mag)
    return CrosscheckReport(
        analytic_variance=ana.var_x,
        fock_variance=variance,
        analytic_intensity=ana.intensity_y,
        fock_intensity=intensity,
        analytic_s=ana.s,
        fock_s=phase_resolution(intensity, variance).s,
    )


def beam_splitter_variance_crosscheck(
    cfg: BeamSplitterConfig, s: float, theta: float, alpha_mag: float = 0.0, cutoff: int | None = None
) -> tuple[float, float]:
    """Variance only, at an arbitrary squeeze phase.

    Returns ``(analytic, fock)`` for the cosine quadrature of the bright
    port; useful for scanning the phase dependence away from the optimum.
    """
    out = _mixed_output(cfg.mode_matrix(), complex(alpha_mag), SqueezeParams(s, theta), cutoff)
    _, variance, _ = quadrature_stats(out, QuadratureSpec.generic(0, 0.0))
    return beam_splitter_variance(cfg, s, theta), variance


def interferometer_crosscheck(
    cfg: InterferometerConfig, s: float, alpha_mag: float, cutoff: int | None = None
) -> CrosscheckReport:
    """Interferometer bright port: formulas vs the truncated-space unitary."""
    theta = -2.0 * cfg.global_phase
    alpha = -alpha_mag * complex(math.cos(cfg.psi - cfg.global_phase), math.sin(cfg.psi - cfg.global_phase))
    out = _mixed_output(cfg.mode_matrix(), alpha, SqueezeParams(s, theta), cutoff)
    variance, intensity = _port_statistics(out)
    ana = interferometer_phase_resolution(cfg.phi, s, alpha_mag)
    return CrosscheckReport(
        analytic_variance=interferometer_variance(cfg.phi, s),
        fock_variance=variance,
        analytic_intensity=ana.intensity_y,
        fock_intensity=intensity,
        analytic_s=ana.s,
        fock_s=phase_resolution(intensity, variance).s,
    )
