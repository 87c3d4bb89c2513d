"""Dense complex linear algebra on small matrices.

Matrices are plain ``numpy`` complex arrays. The Hermitian eigensolver is a
cyclic Jacobi iteration, which is exact to rounding at the sizes used here
(dimension 9 for two qutrits).
"""

from dataclasses import dataclass
from functools import reduce
import math

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian
from .tolerances import TOL


def as_matrix(x) -> np.ndarray:
    """Return ``x`` as a 2-d complex128 array (no copy if already one)."""
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def allclose_abs(a, b, atol: float) -> bool:
    """Entrywise max-abs comparison with an explicit absolute tolerance."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return max_abs(a - b) <= atol


def hermiticity_defect(a: np.ndarray) -> float:
    return max_abs(a - dagger(a))


def check_hermitian(a: np.ndarray, tol: float | None = None) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"matrix is not square: {a.shape}")
    tol = TOL.hermitian if tol is None else tol
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(f"||A - A^dagger||_max = {defect:.3e} exceeds {tol:.1e}")
    return a


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, (as_matrix(o) for o in ops))


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition ``h = V diag(w) V^dagger`` with ``w`` ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)

    def to_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        v = self.eigenvectors
        return dagger(v) @ op @ v

    def from_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        v = self.eigenvectors
        return v @ op @ dagger(v)

    def shifted(self, c: float) -> "Spectrum":
        """Spectrum of ``h + c*I``."""
        return Spectrum(self.eigenvalues + c, self.eigenvectors)


def _off_norm(a: list) -> float:
    n = len(a)
    total = 0.0
    for i in range(n):
        row = a[i]
        for j in range(n):
            if i != j:
                z = row[j]
                total += z.real * z.real + z.imag * z.imag
    return math.sqrt(total)


def hermitian_eig(h, *, herm_tol: float | None = None, rel_tol: float | None = None,
                  max_sweeps: int | None = None) -> Spectrum:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Cyclic Jacobi: each rotation first removes the phase of the pivot
    element, then applies a real Givens rotation that zeroes it. The sweep
    loop works on Python lists; at dimension 9 that is several times faster
    than per-rotation numpy calls.
    """
    h = check_hermitian(h, herm_tol)
    rel_tol = TOL.jacobi_rel if rel_tol is None else rel_tol
    max_sweeps = TOL.jacobi_max_sweeps if max_sweeps is None else max_sweeps

    n = h.shape[0]
    a = (0.5 * (h + dagger(h))).tolist()
    v = np.eye(n, dtype=np.complex128).tolist()
    target = rel_tol * float(np.linalg.norm(h))
    rng = range(n)

    converged = n < 2 or _off_norm(a) <= target
    sweeps = 0
    while not converged:
        if sweeps >= max_sweeps:
            raise NoConvergence(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-norm {_off_norm(a):.3e}, target {target:.3e})")
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                theta = (a[q][q].real - a[p][p].real) / (2.0 * r)
                t = 1.0 / (abs(theta) + math.hypot(theta, 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                sp = s * phase.conjugate()
                cp = c * phase.conjugate()
                sp_c = sp.conjugate()
                cp_c = cp.conjugate()
                # columns: A <- A W with W = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                for row in a:
                    x, y = row[p], row[q]
                    row[p] = c * x - sp * y
                    row[q] = s * x + cp * y
                # rows: A <- W^dagger A
                ap, aq = a[p], a[q]
                for k in rng:
                    x, y = ap[k], aq[k]
                    ap[k] = c * x - sp_c * y
                    aq[k] = s * x + cp_c * y
                ap[q] = aq[p] = 0j
                ap[p] = complex(ap[p].real)
                aq[q] = complex(aq[q].real)
                for row in v:
                    x, y = row[p], row[q]
                    row[p] = c * x - sp * y
                    row[q] = s * x + cp * y
        sweeps += 1
        converged = _off_norm(a) <= target

    w = np.array([a[i][i].real for i in rng])
    order = np.argsort(w, kind="stable")
    vecs = np.array(v, dtype=np.complex128)
    return Spectrum(w[order], vecs[:, order])


def eigvalsh(h, **kw) -> np.ndarray:
    return hermitian_eig(h, **kw).eigenvalues


def partial_transpose(rho, dim_a: int, dim_b: int, subsystem: str = "A") -> np.ndarray:
    """Transpose the ``subsystem`` ("A" or "B") factor of a bipartite operator."""
    rho = as_matrix(rho)
    n = dim_a * dim_b
    if rho.shape != (n, n):
        raise DimensionMismatch(f"expected a {n}x{n} matrix for dims ({dim_a}, {dim_b}), got {rho.shape}")
    t = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    if subsystem.upper() == "A":
        t = t.transpose(2, 1, 0, 3)
    elif subsystem.upper() == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return t.reshape(n, n).copy()


def trace_norm(x, herm_tol: float | None = None) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    x = check_hermitian(x, herm_tol)
    return float(np.sum(np.abs(hermitian_eig(x, herm_tol=np.inf).eigenvalues)))
