"""Coordinate-free flame front models in the tangent-angle formulation.

A vertically traveling wave with speed parameter beta satisfies, on the
normalized-arclength grid with metric s_sigma = L/(2*pi),

    beta*cos(theta) = 1 + (alpha-1)*kappa + (closure terms),
    kappa = (2*pi/L)*theta_sigma,

where the closure is either the linearized curvature model (third
derivative with fixed coefficient 4) or the full nonlinear one (cubic
curvature terms, coefficient alpha^2*(alpha+3) on the third derivative).
This module evaluates residuals of that equation on the grid plus the
front kinematics and the flat-state dispersion relation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import ContractViolationError, DegenerateFrontError

__all__ = [
    "ModelKind",
    "WaveParams",
    "FrontKinematics",
    "length_from_theta",
    "kinematics",
    "residual",
    "dispersion_linear",
    "unstable_modes",
]

# Integral of cos(theta) below this is treated as a closed/degenerate front.
_DEGENERACY_THRESHOLD = 1e-8

_LENGTH_CONSISTENCY_RTOL = 1e-8


class ModelKind(enum.Enum):
    LINEAR = "linear"
    NONLINEAR = "nonlinear"


@dataclass(frozen=True)
class WaveParams:
    """Wave speed beta, model parameter alpha, and front length per period."""

    alpha: float
    beta: float
    length: float

    def __post_init__(self):
        if not (self.length > 0.0 and math.isfinite(self.length)):
            raise ContractViolationError(f"length must be positive, got {self.length!r}")


@dataclass(frozen=True)
class FrontKinematics:
    """Grid samples of the metric, curvature, and normal/tangential velocities."""

    s_sigma: float
    kappa: np.ndarray
    u: np.ndarray
    v: np.ndarray


def length_from_theta(p):
    """Front length per horizontal period, L = 4*pi^2 / integral(cos theta).

    The integral uses the spectral (mean-value) rule, which is exact for
    band-limited integrands.  Raises DegenerateFrontError when the integral
    is too small to define a graph-like front.
    """
    integral = 2.0 * np.pi * float(np.mean(np.cos(p.values)))
    if integral <= _DEGENERACY_THRESHOLD:
        raise DegenerateFrontError(
            f"integral of cos(theta) = {integral:.3e} is not positive; "
            "front is closed or vertical somewhere on average"
        )
    return 4.0 * np.pi**2 / integral


def kinematics(p, params):
    """Metric, curvature, and the traveling-wave velocity fields.

    For a wave translating vertically with speed beta the normal and
    tangential velocities are u = -beta*cos(theta), v = -beta*sin(theta).
    params.length must agree with length_from_theta(p).
    """
    expected = length_from_theta(p)
    if abs(params.length - expected) > _LENGTH_CONSISTENCY_RTOL * expected:
        raise ContractViolationError(
            f"params.length {params.length!r} inconsistent with the length "
            f"functional {expected!r}"
        )
    q = 2.0 * np.pi / params.length
    theta_s = spectral.deriv(p, 1).values
    return FrontKinematics(
        s_sigma=params.length / (2.0 * np.pi),
        kappa=q * theta_s,
        u=-params.beta * np.cos(p.values),
        v=-params.beta * np.sin(p.values),
    )


def residual(p, params, kind, quad_alpha_squared=False):
    """Pointwise traveling-wave residual on the grid.

    Linear closure:

        r = 1 + (alpha-1)*q*theta_s + 4*q^3*theta_sss - beta*cos(theta)

    Nonlinear closure (kappa = q*theta_s):

        r = 1 + (alpha-1)*kappa + alpha^2*(alpha+3)*q^3*theta_sss
              + (1 + alpha/2)*kappa^2
              + (2*alpha + 5*alpha^2 - alpha^3/3)*kappa^3
              - beta*cos(theta)

    with q = 2*pi/L.  Products are evaluated pointwise without dealiasing.
    quad_alpha_squared switches the quadratic coefficient to (1 + alpha^2/2)
    for sensitivity studies; the default follows the curvature expansion.
    """
    alpha, beta = params.alpha, params.beta
    q = 2.0 * np.pi / params.length
    theta_s = spectral.deriv(p, 1).values
    theta_sss = spectral.deriv(p, 3).values
    if kind is ModelKind.LINEAR:
        return (
            1.0
            + (alpha - 1.0) * q * theta_s
            + 4.0 * q**3 * theta_sss
            - beta * np.cos(p.values)
        )
    if kind is ModelKind.NONLINEAR:
        kappa = q * theta_s
        quad = 1.0 + (alpha**2 / 2.0 if quad_alpha_squared else alpha / 2.0)
        cubic = 2.0 * alpha + 5.0 * alpha**2 - alpha**3 / 3.0
        return (
            1.0
            + (alpha - 1.0) * kappa
            + alpha**2 * (alpha + 3.0) * q**3 * theta_sss
            + quad * kappa**2
            + cubic * kappa**3
            - beta * np.cos(p.values)
        )
    raise ValueError(f"unknown model kind {kind!r}")


def dispersion_linear(alpha, k):
    """Flat-state growth rate of mode k for the linear closure.

    lambda(k) = -4*k^4 + (alpha - 1)*k^2.
    """
    return -4.0 * float(k) ** 4 + (alpha - 1.0) * float(k) ** 2


def unstable_modes(alpha):
    """Positive integer modes with lambda(k) > 0, i.e. 0 < k < sqrt(alpha-1)/2."""
    if alpha <= 1.0:
        return []
    k_max = int(math.floor(math.sqrt(alpha - 1.0) / 2.0)) + 1
    return [k for k in range(1, k_max + 1) if dispersion_linear(alpha, k) > 0.0]
