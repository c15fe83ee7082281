"""
Physical parameters and the three energy conventions of the model.

The Hamiltonian H = -hbar^2/(2m) nabla^2 - Z e^2 / (4 pi eps0 (r + r0)) becomes,
with r measured in units of r0, the dimensionless tilde operator
-1/2 nabla^2 - beta/(r + 1), whose eigenvalues are E~ = m r0^2 E / hbar^2.
Rescaling once more by beta gives the breve operator with E~ = beta^2 E(breve).
All computation happens in the tilde frame; the other two frames only appear
at input and output.
"""

import enum
import math
from dataclasses import dataclass
from typing import Optional

from tcoulomb.errors import InconsistentModelError

FRAME_RTOL = 1e-12


class FrameKind(enum.Enum):
    PHYSICAL = 'physical'
    TILDE = 'tilde'
    BREVE = 'breve'


@dataclass(frozen=True)
class PhysicalParams:
    mass: float
    charge: float
    atomic_number: int
    permittivity: float
    cutoff_radius: float
    hbar: float

    def __post_init__(self):
        for name in ('mass', 'charge', 'atomic_number', 'permittivity', 'cutoff_radius', 'hbar'):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive, got {getattr(self, name)!r}")
        if int(self.atomic_number) != self.atomic_number:
            raise ValueError(f"atomic_number must be an integer, got {self.atomic_number!r}")

    @property
    def energy_scale(self):
        """hbar^2 / (m r0^2) in joules: one tilde energy unit."""
        return self.hbar ** 2 / (self.mass * self.cutoff_radius ** 2)


@dataclass(frozen=True)
class UnitFrame:
    kind: FrameKind
    beta: float

    def __post_init__(self):
        if not isinstance(self.kind, FrameKind):
            object.__setattr__(self, 'kind', FrameKind(self.kind))
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta!r}")

    def matches(self, other):
        return math.isclose(self.beta, other.beta, rel_tol=FRAME_RTOL, abs_tol=0.0)


@dataclass(frozen=True)
class Energy:
    value: float
    frame: UnitFrame

    @property
    def is_bound(self):
        return self.value < 0

    def to(self, kind, params=None):
        return convert_energy(self, UnitFrame(FrameKind(kind), self.frame.beta), params)


def beta_from_physical(p: PhysicalParams) -> float:
    """Dimensionless coupling beta = m r0 Z e^2 / (4 pi eps0 hbar^2)."""
    return (p.mass * p.cutoff_radius * p.atomic_number * p.charge ** 2
            / (4.0 * math.pi * p.permittivity * p.hbar ** 2))


def _check_params(frame, params):
    if params is None:
        raise ValueError("converting to or from the physical frame requires PhysicalParams")
    if not math.isclose(beta_from_physical(params), frame.beta, rel_tol=FRAME_RTOL):
        raise InconsistentModelError(
            f"frame beta {frame.beta!r} does not match the physical parameters "
            f"(beta = {beta_from_physical(params)!r})")


def _to_tilde(energy, params):
    frame = energy.frame
    if frame.kind is FrameKind.TILDE:
        return energy.value
    if frame.kind is FrameKind.BREVE:
        return frame.beta ** 2 * energy.value
    _check_params(frame, params)
    return energy.value / params.energy_scale


def _from_tilde(value, target, params):
    if target.kind is FrameKind.TILDE:
        return value
    if target.kind is FrameKind.BREVE:
        return value / target.beta ** 2
    _check_params(target, params)
    return value * params.energy_scale


def convert_energy(E: Energy, target: UnitFrame, params: Optional[PhysicalParams] = None) -> Energy:
    """
    Express an energy in another frame sharing the same beta.

    Breve and tilde are related by E~ = beta^2 E(breve); tilde and physical by
    E~ = m r0^2 E / hbar^2, which needs the physical parameters.
    """
    if not E.frame.matches(target):
        raise InconsistentModelError(
            f"cannot convert between frames with beta {E.frame.beta!r} and {target.beta!r}")
    if E.frame.kind is target.kind:
        return Energy(E.value, target)
    return Energy(_from_tilde(_to_tilde(E, params), target, params), target)
