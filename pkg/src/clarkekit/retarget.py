"""Joint-value retargeting between robot designs through a 2-D latent space.

A joint vector of a source robot is compressed to two latent values and
decoded into the joint space of a target robot.  In symmetric mode the
latent pair is the Clarke coordinates and only the joint angles enter; in
general mode the robot-dependent normalization removes the source's
kinematic design parameters and adds the target's, so the latent pair is
the planar arc pair and the mapping is geometrically exact for any two
designs.  Both modes collapse to a single m x n matrix that can be applied
per time step.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import (
    ArcParameters,
    RobotDesign,
    arc_forward_matrix,
    arc_inverse_matrix,
    check_joints,
    from_arc,
    to_arc,
    transform_pair,
    wrap_angle,
)
from .designs import design_from_dict, design_to_dict
from .errors import InvalidParameter

TRANSFER_MODES = ("symmetric", "general")


@dataclass(frozen=True, eq=False)
class TransferMap:
    """Precomposed m x n retargeting matrix between two designs.

    The matrix factors through the 2-D latent space, so its rank is at
    most two regardless of the joint counts involved.
    """

    source: RobotDesign
    target: RobotDesign
    mode: str
    matrix: np.ndarray

    def apply(self, joints) -> np.ndarray:
        """Retarget one joint vector or a (..., n) stack of joint vectors."""
        values = np.asarray(joints, dtype=float)
        if values.shape[-1] != self.source.n:
            raise InvalidParameter(
                f"expected {self.source.n} source joint values, got shape {values.shape}")
        return values @ self.matrix.T

    def __call__(self, joints) -> np.ndarray:
        return self.apply(joints)

    def to_dict(self) -> dict:
        return {
            "source": design_to_dict(self.source),
            "target": design_to_dict(self.target),
            "mode": self.mode,
            "matrix": [[float(x) for x in row] for row in self.matrix],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, raw: dict) -> "TransferMap":
        return make_transfer_map(design_from_dict(raw["source"]),
                                 design_from_dict(raw["target"]),
                                 raw["mode"])

    def save(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")


def make_transfer_map(source: RobotDesign, target: RobotDesign,
                      mode: str = "general") -> TransferMap:
    """Build the retargeting matrix for one ordered design pair."""
    if mode == "symmetric":
        matrix = transform_pair(target).inverse_matrix @ transform_pair(source).forward_matrix
    elif mode == "general":
        matrix = arc_inverse_matrix(target) @ arc_forward_matrix(source)
    else:
        raise InvalidParameter(f"unknown transfer mode {mode!r}; choose from {TRANSFER_MODES}")
    matrix.setflags(write=False)
    return TransferMap(source, target, mode, matrix)


def transfer_symmetric(source: RobotDesign, target: RobotDesign, joints) -> np.ndarray:
    """Retarget joint values assuming both designs only differ in joint angles.

    Encodes with the source's forward Clarke matrix and decodes with the
    target's inverse matrix; center-line distances and segment lengths are
    ignored, so the Clarke coordinates are preserved exactly.
    """
    source_pair = transform_pair(source)
    target_pair = transform_pair(target)
    return target_pair.inverse_matrix @ (source_pair.forward_matrix
                                         @ check_joints(joints, source.n))


def transfer_general(source: RobotDesign, target: RobotDesign, joints) -> np.ndarray:
    """Retarget joint values between two arbitrary designs.

    The source's kinematic design parameters are stripped and the target's
    added, so both robots realize the same arc.
    """
    w = arc_forward_matrix(source) @ check_joints(joints, source.n)
    return arc_inverse_matrix(target) @ w


@dataclass(frozen=True, eq=False)
class PerturbedDesign:
    """A nominal design together with the true (perturbed) joint locations."""

    nominal: RobotDesign
    true_psi: np.ndarray
    true_d: np.ndarray

    def __post_init__(self):
        true_psi = np.atleast_1d(np.asarray(self.true_psi, dtype=float))
        true_d = np.atleast_1d(np.asarray(self.true_d, dtype=float))
        if true_psi.shape != (self.nominal.n,) or true_d.shape != (self.nominal.n,):
            raise InvalidParameter("true_psi and true_d must match the nominal joint count")
        if not np.all(true_d > 0.0):
            raise InvalidParameter("true center-line distances must be positive")
        true_psi.setflags(write=False)
        true_d.setflags(write=False)
        object.__setattr__(self, "true_psi", true_psi)
        object.__setattr__(self, "true_d", true_d)

    def true_design(self) -> RobotDesign:
        return RobotDesign(name=self.nominal.name + "_true", psi=self.true_psi,
                           d=self.true_d, l=self.nominal.l)


@dataclass(frozen=True, eq=False)
class PerturbationRecord:
    """Commanded versus realized arc for one latent grid point."""

    clarke: np.ndarray
    commanded: ArcParameters
    realized: ArcParameters
    dkappa_l: float   # (kappa_realized - kappa_commanded) * l, dimensionless
    dtheta: float     # realized - commanded bending-plane angle, wrapped to [-pi, pi)


def perturbation_analysis(perturbed: PerturbedDesign, clarke_grid) -> list[PerturbationRecord]:
    """Propagate joint-location uncertainty onto the realized arc.

    Each grid point is a Clarke coordinate pair for the nominal design.  It
    is decoded to a commanded arc, the commanded joint displacements are
    computed on the nominal design, and the arc those displacements realize
    on the true design is compared against the commanded one.  With exact
    joint locations every deviation is zero.
    """
    nominal = perturbed.nominal
    true = perturbed.true_design()
    pair = transform_pair(nominal)
    records = []
    for point in np.atleast_2d(np.asarray(clarke_grid, dtype=float)):
        commanded = to_arc(nominal, pair.inverse(point))
        joints = from_arc(nominal, commanded)
        realized = to_arc(true, joints)
        records.append(PerturbationRecord(
            clarke=point,
            commanded=commanded,
            realized=realized,
            dkappa_l=(realized.kappa - commanded.kappa) * nominal.l,
            dtheta=_angle_deviation(commanded, realized),
        ))
    return records


def _angle_deviation(commanded: ArcParameters, realized: ArcParameters) -> float:
    if commanded.kappa == 0.0 and realized.kappa == 0.0:
        return 0.0
    return wrap_angle(realized.theta - commanded.theta)


def polar_clarke_grid(d_ref: float, radii: int = 5, angles: int = 16) -> np.ndarray:
    """Polar grid over the feasible latent disk of radius pi * d_ref.

    Convenience for perturbation studies: `radii` rings (excluding the
    center) crossed with `angles` equally spaced bending-plane directions.
    """
    if d_ref <= 0.0 or radii < 1 or angles < 1:
        raise InvalidParameter("d_ref must be positive and radii/angles at least 1")
    r = math.pi * d_ref * np.arange(1, radii + 1) / radii
    phi = -math.pi + 2.0 * math.pi * np.arange(angles) / angles
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    return np.column_stack([(rr * np.cos(pp)).ravel(), (rr * np.sin(pp)).ravel()])
