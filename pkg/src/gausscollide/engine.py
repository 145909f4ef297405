"""Collision-chain evolution engine.

Runs the tunable beam-splitter chain for L rounds and records, per step,
the network coefficients and the joint ancilla-system covariance matrix
(closed form).  An optional oracle path propagates the full
(L+3)-mode covariance matrix symplectically and stores it alongside,
which is the independent cross-check of the closed form and the source
of environment-mode reductions.
"""

from dataclasses import dataclass, field

import numpy as np

from .network import (
    CCoefficients,
    apply_collision_inplace,
    extract_c_coefficients,
    mixing_block,
    mode_unitary_to_symplectic,
)
from .states import EnvironmentSpec, JointSpec, reduce_to_modes, squeezed_thermal_cm, tmsv_cm


@dataclass(frozen=True)
class SimulationConfig:
    """Full parameter set of one collision-chain run.

    r1, r2 are the two beam-splitter reflectivities, phi_shift the phase
    on the system arm, joint the ancilla-system preparation, env the
    (identical) preparation of every environment mode, L the number of
    rounds.  oracle_enabled turns on full-chain covariance propagation.
    """

    r1: float
    r2: float
    phi_shift: float = 0.0
    joint: JointSpec = field(default_factory=lambda: JointSpec(xi=1.0))
    env: EnvironmentSpec = field(default_factory=EnvironmentSpec)
    L: int = 250
    oracle_enabled: bool = False

    def __post_init__(self):
        for name, r in (("r1", self.r1), ("r2", self.r2)):
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {r}")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")


@dataclass(frozen=True)
class StepRecord:
    """State of the chain after `j` rounds (j = 0 is the initial state)."""

    j: int
    coeffs: CCoefficients
    joint_cm: np.ndarray
    full_cm: np.ndarray | None = None


@dataclass(frozen=True)
class Trajectory:
    config: SimulationConfig
    steps: list[StepRecord]

    def __len__(self) -> int:
        return len(self.steps)

    def c22_series(self) -> np.ndarray:
        return np.array([s.coeffs.c22 for s in self.steps])

    def abs_c22_sq_series(self) -> np.ndarray:
        return np.array([s.coeffs.c22_abs_sq for s in self.steps])


def joint_cm_closed_form(
    coeffs: CCoefficients, joint: JointSpec, env: EnvironmentSpec
) -> np.ndarray:
    """4x4 ancilla-system covariance matrix after the recorded step.

    Closed form in the network coefficients: with c = c22,
    W = sum_m (env amplitude)^2 and V = e^{-i phi_env} W,

        V_An = cosh(xi) I
        V_J  = sinh(xi) [[Re c*, Im c*], [Im c*, -Re c*]]
        V_S,qq = cosh(xi)|c|^2 + (2n+1)[cosh(zeta)(1-|c|^2) + sinh(zeta) Re V]
        V_S,pp = same with -sinh(zeta) Re V
        V_S,qp = -(2n+1) sinh(zeta) Im V

    Ordering is (ancilla, system).
    """
    c = coeffs.c22
    csq = coeffs.c22_abs_sq
    v = np.exp(-1j * env.phi_env) * coeffs.env_square_sum
    nf = 2.0 * env.n + 1.0
    ch_x, sh_x = np.cosh(joint.xi), np.sinh(joint.xi)
    ch_z, sh_z = np.cosh(env.zeta), np.sinh(env.zeta)

    cm = np.zeros((4, 4))
    cm[:2, :2] = ch_x * np.eye(2)
    cstar = np.conj(c)
    vj = sh_x * np.array([[cstar.real, cstar.imag], [cstar.imag, -cstar.real]])
    cm[:2, 2:] = vj
    cm[2:, :2] = vj.T
    base = ch_x * csq + nf * ch_z * (1.0 - csq)
    cm[2, 2] = base + nf * sh_z * v.real
    cm[3, 3] = base - nf * sh_z * v.real
    cm[2, 3] = cm[3, 2] = -nf * sh_z * v.imag
    return cm


def initial_full_cm(config: SimulationConfig) -> np.ndarray:
    """Product-state covariance of [An, S, E_1 .. E_{L+1}] before round 1."""
    n_modes = config.L + 3
    cm = np.eye(2 * n_modes)
    cm[:4, :4] = tmsv_cm(config.joint)
    env_cm = squeezed_thermal_cm(config.env)
    for m in range(2, n_modes):
        cm[2 * m : 2 * m + 2, 2 * m : 2 * m + 2] = env_cm
    return cm


def apply_collision_to_cm(
    sigma: np.ndarray, j: int, r1: float, r2: float, phi: float = 0.0
) -> None:
    """Propagate the full covariance matrix through round j, in place.

    Round j only mixes modes (S, E_j, E_{j+1}), so the congruence
    sigma -> S sigma S^T reduces to a 6-row and 6-column update.
    """
    s6 = mode_unitary_to_symplectic(mixing_block(r1, r2, phi))
    rows = [q for m in (1, j + 1, j + 2) for q in (2 * m, 2 * m + 1)]
    sigma[rows, :] = s6 @ sigma[rows, :]
    sigma[:, rows] = sigma[:, rows] @ s6.T


def iter_steps(config: SimulationConfig):
    """Yield (j, coeffs, full_cm) for j = 0 .. L.

    full_cm is None unless config.oracle_enabled; when present it is a
    *view* of the running array, valid only until the next iteration —
    copy it to keep it.
    """
    L = config.L
    u = np.eye(L + 3, dtype=complex)
    sigma = initial_full_cm(config) if config.oracle_enabled else None
    yield 0, extract_c_coefficients(u, 0), sigma
    for j in range(1, L + 1):
        apply_collision_inplace(u, j, config.r1, config.r2, config.phi_shift)
        if sigma is not None:
            apply_collision_to_cm(sigma, j, config.r1, config.r2, config.phi_shift)
        yield j, extract_c_coefficients(u, j), sigma


def run(config: SimulationConfig) -> Trajectory:
    """Evolve the chain and collect one StepRecord per step, j = 0 .. L."""
    steps = []
    for j, coeffs, sigma in iter_steps(config):
        steps.append(
            StepRecord(
                j=j,
                coeffs=coeffs,
                joint_cm=joint_cm_closed_form(coeffs, config.joint, config.env),
                full_cm=None if sigma is None else sigma.copy(),
            )
        )
    return Trajectory(config=config, steps=steps)


def env_ancilla_cm(full_cm: np.ndarray | None, k: int) -> np.ndarray:
    """4x4 reduced covariance of (E_k, ancilla), in that order.

    Requires the full-chain covariance matrix; run with
    oracle_enabled=True to record it.
    """
    if full_cm is None:
        raise ValueError("full covariance not recorded; run with oracle_enabled=True")
    n_modes = full_cm.shape[0] // 2
    if not 1 <= k <= n_modes - 2:
        raise IndexError(f"environment index k = {k} out of range 1..{n_modes - 2}")
    return reduce_to_modes(full_cm, [k + 1, 0])
