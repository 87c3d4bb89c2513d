"""Two-site spin-1 bilinear-biquadratic Hamiltonian in a longitudinal field.

Single-site basis: computational label 0, 1, 2 carries S_z = +1, 0, -1.
Two-site basis: ``|m1, m2>`` sits at index ``3*m1 + m2`` (0-based), so the
rows run |0,0>, |0,1>, ..., |2,2>.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import InvalidHubbardParams
from .linalg import kron
from .tolerances import TOL

SITE_DIM = 3
DIM = SITE_DIM * SITE_DIM


@dataclass(frozen=True)
class ModelParams:
    J: float
    K: float
    Bz: float = 0.0
    include_chi: bool = False
    chi: float | None = None

    def __post_init__(self):
        for name in ("J", "K", "Bz"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite, got {getattr(self, name)}")

    @property
    def shift(self) -> float:
        """Constant energy offset added to every level."""
        if not self.include_chi:
            return 0.0
        return self.J - self.K if self.chi is None else self.chi

    def with_field(self, bz: float) -> "ModelParams":
        return ModelParams(self.J, self.K, bz, self.include_chi, self.chi)


@dataclass(frozen=True)
class HubbardParams:
    hop: float
    U0: float
    U2: float


def spin1_operators():
    """Return ``(Sx, Sy, Sz)`` for spin 1 with hbar = 1."""
    sp = math.sqrt(2.0) * np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=np.complex128)
    sm = sp.conj().T
    sx = 0.5 * (sp + sm)
    sy = -0.5j * (sp - sm)
    sz = np.diag([1.0, 0.0, -1.0]).astype(np.complex128)
    return sx, sy, sz


def basis_index(m1: int, m2: int) -> int:
    return SITE_DIM * m1 + m2


def hubbard_couplings(h: HubbardParams) -> ModelParams:
    """Effective J, K and the constant chi = J - K from Hubbard parameters."""
    if h.U0 == 0 or h.U2 == 0:
        raise InvalidHubbardParams(f"U0 and U2 must be nonzero (got U0={h.U0}, U2={h.U2})")
    t2 = h.hop * h.hop
    J = -2.0 * t2 / h.U2
    K = -2.0 * t2 / (3.0 * h.U2) - 4.0 * t2 / h.U0
    return ModelParams(J=J, K=K, Bz=0.0, include_chi=True, chi=J - K)


def spin_dot() -> np.ndarray:
    """S_1 . S_2 on the two-site space."""
    return sum(kron(s, s) for s in spin1_operators())


def total_sz() -> np.ndarray:
    sz = spin1_operators()[2]
    eye = np.eye(SITE_DIM)
    return kron(sz, eye) + kron(eye, sz)


def build_hamiltonian(p: ModelParams) -> np.ndarray:
    """9x9 Hamiltonian ``chi + J S1.S2 + K (S1.S2)^2 + Bz (S1z + S2z)``."""
    x = spin_dot()
    h = p.J * x + p.K * (x @ x) + p.Bz * total_sz()
    h = h + p.shift * np.eye(DIM)
    return 0.5 * (h + h.conj().T)


@dataclass(frozen=True)
class AnalyticEigenpair:
    label: int
    energy: float
    vector: np.ndarray


def _ket(*terms) -> np.ndarray:
    """Normalized two-site ket from ``(amplitude, m1, m2)`` triples."""
    v = np.zeros(DIM, dtype=np.complex128)
    for amp, m1, m2 in terms:
        v[basis_index(m1, m2)] += amp
    return v / np.linalg.norm(v)


# label -> (intercept in (J, K), field slope, ket terms)
# E_i(Bz) = j*J + k*K + slope*Bz
_TABLE = {
    1: ((-2, 4), 0, ((1, 2, 0), (-1, 1, 1), (1, 0, 2))),
    2: ((-1, 1), 0, ((1, 2, 0), (-1, 0, 2))),
    3: ((-1, 1), -1, ((1, 1, 2), (-1, 2, 1))),
    4: ((-1, 1), 1, ((1, 0, 1), (-1, 1, 0))),
    5: ((1, 1), 0, ((1, 2, 0), (2, 1, 1), (1, 0, 2))),
    6: ((1, 1), -2, ((1, 2, 2),)),
    7: ((1, 1), -1, ((1, 1, 2), (1, 2, 1))),
    8: ((1, 1), 1, ((1, 0, 1), (1, 1, 0))),
    9: ((1, 1), 2, ((1, 0, 0),)),
}


def energy_lines(p: ModelParams) -> list[tuple[float, float]]:
    """``(intercept, slope)`` of E_1..E_9 as affine functions of Bz."""
    return [(jc * p.J + kc * p.K + p.shift, float(slope))
            for (jc, kc), slope, _ in (_TABLE[i] for i in range(1, 10))]


def analytic_energies(p: ModelParams) -> np.ndarray:
    return np.array([a + b * p.Bz for a, b in energy_lines(p)])


def analytic_spectrum(p: ModelParams) -> list[AnalyticEigenpair]:
    """The nine closed-form eigenpairs E_1..E_9 (fixed label order, not sorted)."""
    energies = analytic_energies(p)
    return [AnalyticEigenpair(i, float(energies[i - 1]), _ket(*_TABLE[i][2]))
            for i in range(1, 10)]


def analytic_eigenvectors() -> np.ndarray:
    """Unitary whose column ``i-1`` is |E_i>; independent of the couplings."""
    return np.column_stack([_ket(*_TABLE[i][2]) for i in range(1, 10)])


@dataclass(frozen=True)
class Resonances:
    """Field values where two levels cross.

    ``crossings`` holds the distinct Bz values; ``pairs`` lists every
    ``(bz, i, j)`` crossing with 1-based level labels; ``permanent`` holds the
    label pairs that coincide at every field.
    """

    crossings: list[float]
    pairs: list[tuple[float, int, int]] = field(default_factory=list)
    permanent: list[tuple[int, int]] = field(default_factory=list)


def resonance_fields(p: ModelParams, tol: float | None = None) -> Resonances:
    tol = TOL.crossing if tol is None else tol
    lines = energy_lines(p)
    scale = max(1.0, abs(p.J), abs(p.K))
    pairs, permanent = [], []
    for i in range(9):
        for j in range(i + 1, 9):
            (ai, bi), (aj, bj) = lines[i], lines[j]
            if abs(bi - bj) <= tol:
                if abs(ai - aj) <= tol * scale:
                    permanent.append((i + 1, j + 1))
                continue
            bz = (aj - ai) / (bi - bj)
            if bz == 0.0:
                bz = 0.0  # drop the sign of -0.0
            pairs.append((bz, i + 1, j + 1))
    pairs.sort()

    crossings: list[float] = []
    for bz, _, _ in pairs:
        if not crossings or abs(bz - crossings[-1]) > tol * scale:
            crossings.append(bz)
    return Resonances(crossings, pairs, permanent)


def main_resonance(p: ModelParams) -> float:
    """|Bz| at which the singlet crosses the fully polarized states."""
    return 1.5 * abs(p.K - p.J)
