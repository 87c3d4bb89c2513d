"""Density matrices and the two-qutrit isotropic family."""

import math

import numpy as np

from .errors import InvalidP, InvalidState
from .linalg import as_matrix, eigvalsh, hermiticity_defect
from .model import DIM, basis_index
from .tolerances import TOL


class DensityMatrix:
    """A validated quantum state (Hermitian, unit trace, PSD).

    The wrapped array is read-only. Use :meth:`unchecked` in hot loops where
    the eigenvalue-based positivity check would dominate.
    """

    __slots__ = ("_m",)

    def __init__(self, matrix, *, herm_tol=None, trace_tol=None, psd_tol=None):
        m = np.array(as_matrix(matrix), dtype=np.complex128, copy=True)
        validate_density(m, herm_tol=herm_tol, trace_tol=trace_tol, psd_tol=psd_tol)
        m.setflags(write=False)
        self._m = m

    @classmethod
    def unchecked(cls, matrix) -> "DensityMatrix":
        obj = cls.__new__(cls)
        m = np.array(matrix, dtype=np.complex128, copy=True)
        m.setflags(write=False)
        obj._m = m
        return obj

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    def purity(self) -> float:
        m = self._m
        return float(np.real(np.vdot(m, m)))

    def validated(self, **tols) -> "DensityMatrix":
        """Run the full invariant check; returns ``self`` on success."""
        validate_density(self._m, **tols)
        return self

    def __array__(self, dtype=None, copy=None):
        return self._m if dtype is None else self._m.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim}, purity={self.purity():.6g})"


def validate_density(m: np.ndarray, *, herm_tol=None, trace_tol=None, psd_tol=None) -> None:
    herm_tol = TOL.hermitian if herm_tol is None else herm_tol
    trace_tol = TOL.trace if trace_tol is None else trace_tol
    psd_tol = TOL.psd if psd_tol is None else psd_tol
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidState(f"density matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidState("density matrix has non-finite entries")
    defect = hermiticity_defect(m)
    if defect > herm_tol:
        raise InvalidState(f"not Hermitian: defect {defect:.3e} > {herm_tol:.1e}")
    tr = np.trace(m)
    if abs(tr - 1.0) > trace_tol:
        raise InvalidState(f"trace {tr:.15g} differs from 1 by more than {trace_tol:.1e}")
    lo = float(eigvalsh(0.5 * (m + m.conj().T), herm_tol=np.inf)[0])
    if lo < -psd_tol:
        raise InvalidState(f"smallest eigenvalue {lo:.3e} below -{psd_tol:.1e}")


def _check_p(p: float) -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise InvalidP(f"p must lie in [0, 1], got {p}")
    return p


def max_entangled_vector() -> np.ndarray:
    """(|0,0> + |1,1> + |2,2>)/sqrt(3)."""
    psi = np.zeros(DIM, dtype=np.complex128)
    for m in range(3):
        psi[basis_index(m, m)] = 1.0
    return psi / math.sqrt(3.0)


def max_entangled_qutrit() -> DensityMatrix:
    psi = max_entangled_vector()
    return DensityMatrix(np.outer(psi, psi.conj()))


def isotropic_matrix(p: float) -> np.ndarray:
    """``(1-p)/9 I + p |psi><psi|`` as a plain array."""
    p = _check_p(p)
    psi = max_entangled_vector()
    return (1.0 - p) / DIM * np.eye(DIM, dtype=np.complex128) + p * np.outer(psi, psi.conj())


def isotropic_state(p: float) -> DensityMatrix:
    return DensityMatrix(isotropic_matrix(p))


def werner_negativity(p: float) -> float:
    """Closed-form negativity of the isotropic state."""
    return 3.0 * max(0.0, (4.0 * p - 1.0) / 9.0)


def werner_linear_entropy(p: float) -> float:
    return 1.0 - p * p


# Above this weight the isotropic state is entangled.
SEPARABILITY_THRESHOLD = 0.25


def werner_crossing() -> float:
    """Weight p at which the isotropic negativity equals its linear entropy.

    Root of 1 - p^2 = (4p - 1)/3 inside (1/4, 1], i.e. of 3p^2 + 4p - 4 = 0.
    """
    return (-4.0 + math.sqrt(16.0 + 48.0)) / 6.0


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random mixed state ``G G^dagger / Tr`` from a complex Ginibre matrix."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return DensityMatrix(0.5 * (m + m.conj().T))


def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)
