"""Beam-splitter collision network: round unitaries, chronological
composition, transmission-coefficient extraction, and the passive
unitary -> symplectic map.

Mode ordering throughout: [An, S, E_1, ..., E_{L+1}], so a chain with L
rounds acts on L + 3 modes.  Round j mixes the system mode with
environment modes E_j and E_{j+1}; the ancilla is never touched.
"""

from dataclasses import dataclass, field

import numpy as np

UNITARITY_TOL = 1e-10
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class CCoefficients:
    """Transmission coefficients of the composed network after `step` rounds.

    c22 is the system->system amplitude of the inverse (adjoint) composed
    unitary; env_column holds the system->E_m amplitudes for
    m = 1 .. L + 1.  Column normalization |c22|^2 + sum |env|^2 = 1 is
    enforced at construction.
    """

    step: int
    c22: complex
    env_column: np.ndarray = field(repr=False)

    def __post_init__(self):
        env = np.asarray(self.env_column, dtype=complex)
        env.flags.writeable = False
        object.__setattr__(self, "env_column", env)
        total = abs(self.c22) ** 2 + float(np.sum(np.abs(env) ** 2))
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"coefficient column not normalized: sum of squares = {total!r}")

    @property
    def c22_abs_sq(self) -> float:
        return abs(self.c22) ** 2

    @property
    def env_square_sum(self) -> complex:
        """Complex sum of squared (not modulus-squared) environment amplitudes."""
        return complex(np.sum(self.env_column**2))


def mixing_block(r1: float, r2: float, phi: float = 0.0) -> np.ndarray:
    """3x3 unitary block acting on (S, E_j, E_{j+1}) in one round.

    Two cascaded beam splitters: BS1 couples S and E_j with reflectivity
    r1, BS2 couples E_j and E_{j+1} with reflectivity r2; the phase
    e^{i phi} sits on the system output arm.
    """
    for name, r in (("r1", r1), ("r2", r2)):
        if not 0.0 <= r <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {r}")
    t1 = np.sqrt(1.0 - r1 * r1)
    t2 = np.sqrt(1.0 - r2 * r2)
    ph = np.exp(1j * phi)
    return np.array(
        [
            [r1 * ph, t1 * ph, 0.0],
            [-r2 * t1, r1 * r2, t2],
            [t1 * t2, -r1 * t2, r2],
        ],
        dtype=complex,
    )


def collision_unitary(j: int, L: int, r1: float, r2: float, phi: float = 0.0) -> np.ndarray:
    """Full (L+3)-mode unitary of round j (identity outside S, E_j, E_{j+1})."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if not 1 <= j <= L:
        raise IndexError(f"round index j = {j} out of range 1..{L}")
    rows = _round_rows(j)
    u = np.eye(L + 3, dtype=complex)
    u[np.ix_(rows, rows)] = mixing_block(r1, r2, phi)
    return u


def _round_rows(j: int):
    # 0-based rows of (S, E_j, E_{j+1}) in the [An, S, E_1, ...] ordering
    return [1, j + 1, j + 2]


def apply_collision_inplace(u: np.ndarray, j: int, r1: float, r2: float, phi: float = 0.0) -> None:
    """Left-multiply the running composed unitary by round j in place.

    Only the three affected rows are updated, which keeps a full
    L-round composition at O(L^2) instead of O(L^3) per round.
    """
    if u.shape[0] < j + 3:
        raise IndexError(f"round index j = {j} out of range for dimension {u.shape[0]}")
    rows = _round_rows(j)
    u[rows, :] = mixing_block(r1, r2, phi) @ u[rows, :]


def compose_chronological(unitaries, dim: int | None = None) -> np.ndarray:
    """Product of round unitaries applied in chronological order.

    The first list element acts first, i.e. the result is
    U_n @ ... @ U_2 @ U_1.  An empty list composes to the identity, in
    which case `dim` must be given.
    """
    unitaries = list(unitaries)
    if not unitaries:
        if dim is None:
            raise ValueError("dim is required to compose an empty chain")
        return np.eye(dim, dtype=complex)
    out = np.array(unitaries[0], dtype=complex)
    for u in unitaries[1:]:
        out = u @ out
    return out


def extract_c_coefficients(u: np.ndarray, step: int) -> CCoefficients:
    """Coefficients of the inverse composed unitary's system column.

    For unitary u the inverse is the adjoint, so the system row of u,
    conjugated, gives the system column of u^{-1}.
    """
    return CCoefficients(step=step, c22=complex(np.conj(u[1, 1])), env_column=np.conj(u[1, 2:]))


def unitarity_defect(u: np.ndarray) -> float:
    """Max-abs deviation of u^dag u from the identity."""
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def mode_unitary_to_symplectic(u: np.ndarray) -> np.ndarray:
    """Symplectic matrix of a passive (linear-optics) mode unitary.

    Each complex entry u_kl becomes the 2x2 quadrature block
    [[Re u_kl, -Im u_kl], [Im u_kl, Re u_kl]] in interleaved ordering.
    The map is a group homomorphism.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    if unitarity_defect(u) > 1e-8:
        raise ValueError("input matrix is not unitary")
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    return np.kron(u.real, np.eye(2)) + np.kron(u.imag, rot)


def symplectic_defect(s: np.ndarray) -> float:
    """Max-abs deviation of S Omega S^T from Omega (interleaved ordering)."""
    from .states import symplectic_form

    s = np.asarray(s, dtype=float)
    omega = symplectic_form(s.shape[0] // 2)
    return float(np.max(np.abs(s @ omega @ s.T - omega)))
