"""Closed-form two-qutrit solution for an isotropic initial state.

Everything here is expressed through five complex factors (with
``D = J - K``)::

    a   = exp(-2 Bz t (Bz gamma + i))
    b   = exp(-t (2Bz + 3D) (gamma/2 (2Bz + 3D) + i))
    c   = exp(-t (2Bz - 3D) (gamma/2 (2Bz - 3D) + i))
    d   = exp(-9/2 gamma t D^2 + 3 i t D)
    eps = exp(6 i t D)

All of them except ``eps`` decay for gamma > 0. ``d`` is the coherence factor
between the singlet E_1 and the S=2, M=0 level E_5.

Two tabulated conventions are tracked separately in :data:`PRINTED_FORMS`:
the tabulated ``d`` carries a growing exponent, and the matching entries of
the {|0,2>, |1,1>, |2,0>} block only reproduce the dynamics when read with
that growing factor in the denominator. The functions below use the
decaying ``d`` throughout, which stays finite for any gamma*t.
"""

from dataclasses import dataclass
import math

import numpy as np

from .model import DIM, ModelParams, analytic_eigenvectors, basis_index


@dataclass(frozen=True)
class AnalyticFactors:
    a: complex
    b: complex
    c: complex
    d: complex
    eps: complex

    @classmethod
    def compute(cls, mp: ModelParams, gamma: float, t: float) -> "AnalyticFactors":
        bz = mp.Bz
        dj = mp.J - mp.K
        plus = 2 * bz + 3 * dj
        minus = 2 * bz - 3 * dj
        return cls(
            a=complex(np.exp(-2 * bz * t * (bz * gamma + 1j))),
            b=complex(np.exp(-t * plus * (0.5 * gamma * plus + 1j))),
            c=complex(np.exp(-t * minus * (0.5 * gamma * minus + 1j))),
            d=complex(np.exp(-4.5 * gamma * t * dj * dj + 3j * t * dj)),
            eps=complex(np.exp(6j * t * dj)),
        )

    @property
    def d_printed(self) -> complex:
        """The tabulated growing-exponent factor, equal to 1/conj(d)."""
        return 1.0 / self.d.conjugate()


def _idx(label: int) -> int:
    """1-based computational row label -> 0-based index (1 = |0,0>, ..., 9 = |2,2>)."""
    return label - 1


def computational_elements(mp: ModelParams, p: float, gamma: float, t: float) -> dict:
    """Independent upper-triangle entries keyed by 1-based ``(row, col)``."""
    f = AnalyticFactors.compute(mp, gamma, t)
    a, b, c, d = f.a, f.b, f.c, f.d
    dr = 2.0 * d.real  # d + conj(d)
    corner = p / 3 * np.exp(-4 * mp.Bz * t * (2 * mp.Bz * gamma + 1j))
    return {
        (1, 1): (2 * p + 1) / 9,
        (9, 9): (2 * p + 1) / 9,
        (2, 2): (1 - p) / 9,
        (4, 4): (1 - p) / 9,
        (6, 6): (1 - p) / 9,
        (8, 8): (1 - p) / 9,
        (3, 3): ((3 - p) - p * dr) / 27,
        (7, 7): ((3 - p) - p * dr) / 27,
        (5, 5): ((3 + 2 * p) + 2 * p * dr) / 27,
        (1, 3): p / 9 * (a - b),
        (1, 7): p / 9 * (a - b),
        (1, 5): p / 9 * (2 * a + b),
        (1, 9): complex(corner),
        (3, 9): p / 9 * (a - c),
        (7, 9): p / 9 * (a - c),
        (5, 9): p / 9 * (2 * a + c),
        (3, 5): p / 27 * (1 - 2 * d + d.conjugate()),
        (5, 7): p / 27 * (1 - 2 * d.conjugate() + d),
        (3, 7): p / 27 * (2 - dr),
    }


def _fill(elements: dict) -> np.ndarray:
    m = np.zeros((DIM, DIM), dtype=np.complex128)
    for (r, c), val in elements.items():
        m[_idx(r), _idx(c)] = val
        if r != c:
            m[_idx(c), _idx(r)] = np.conj(val)
    return m


def analytic_rho_computational(mp: ModelParams, p: float, gamma: float, t: float) -> np.ndarray:
    """rho(t) for rho(0) = isotropic(p), computational basis, from the closed-form entries."""
    return _fill(computational_elements(mp, p, gamma, t))


# Energy-basis block: labels of the levels coupled by the isotropic state.
COUPLED_LEVELS = (1, 5, 6, 9)


def energy_elements(mp: ModelParams, p: float, gamma: float, t: float) -> dict:
    """Upper-triangle entries in the E_1..E_9 basis, keyed by 1-based label pairs."""
    f = AnalyticFactors.compute(mp, gamma, t)
    s3 = math.sqrt(3.0)
    out = {(i, i): (1 - p) / 9 for i in (2, 3, 4, 7, 8)}
    out.update({
        (1, 1): 1 / 9,
        (5, 5): (p + 1) / 9,
        (6, 6): (2 * p + 1) / 9,
        (9, 9): (2 * p + 1) / 9,
        (1, 5): -p / 9 * math.sqrt(2.0) * f.d,
        (1, 6): -p * f.c / (3 * s3),
        (1, 9): -p * f.b.conjugate() / (3 * s3),
        (5, 6): p / 3 * math.sqrt(2.0 / 3.0) * f.a,
        (5, 9): p / 3 * math.sqrt(2.0 / 3.0) * f.a.conjugate(),
        (6, 9): complex(p / 3 * np.exp(4 * mp.Bz * t * (-2 * mp.Bz * gamma + 1j))),
    })
    return out


def analytic_rho_energy_basis(mp: ModelParams, p: float, gamma: float, t: float,
                              block_first: bool = False) -> np.ndarray:
    """rho(t) in the analytic eigenbasis, rows/columns ordered E_1..E_9.

    With ``block_first`` the rows are permuted to (1, 5, 6, 9, 2, 3, 4, 7, 8)
    so the coupled 4x4 block sits in the top-left corner.
    """
    m = _fill(energy_elements(mp, p, gamma, t))
    if block_first:
        order = [i - 1 for i in (*COUPLED_LEVELS, 2, 3, 4, 7, 8)]
        m = m[np.ix_(order, order)]
    return m


def energy_to_computational(rho_e: np.ndarray) -> np.ndarray:
    """Map an E_1..E_9-ordered matrix back to the computational basis."""
    v = analytic_eigenvectors()
    return v @ rho_e @ v.conj().T


def computational_to_energy(rho_c: np.ndarray) -> np.ndarray:
    v = analytic_eigenvectors()
    return v.conj().T @ rho_c @ v


# --- tabulated forms, kept for the validation report -------------------------

def _printed_block(f: AnalyticFactors, p: float, d: complex) -> dict:
    """The |0,2>,|1,1>,|2,0> block entries exactly as tabulated, for a given ``d``."""
    e = f.eps
    return {
        (3, 3): d / 27 * (-e * p - (p - 3) * d - p),
        (3, 5): p * d / 27 * (-2 * e + d + 1),
        (3, 7): -p * d / 27 * (e - 2 * d + 1),
        (5, 5): d / 27 * (2 * e * p + (2 * p + 3) * d + 2 * p),
    }


def _reciprocal_block(f: AnalyticFactors, p: float) -> dict:
    """Same entries with the growing factor moved to the denominator: X / (27 d_printed)."""
    dp = f.d_printed
    e = f.eps
    return {
        (3, 3): (-e * p - (p - 3) * dp - p) / (27 * dp),
        (3, 5): p * (-2 * e + dp + 1) / (27 * dp),
        (3, 7): -p * (e - 2 * dp + 1) / (27 * dp),
        (5, 5): (2 * e * p + (2 * p + 3) * dp + 2 * p) / (27 * dp),
    }


@dataclass(frozen=True)
class PrintedForm:
    key: str
    description: str
    correction: str


PRINTED_FORMS = (
    PrintedForm(
        "d-exponent",
        "factor d = exp(+9/2 gamma t (J-K)^2 + 3 i t (J-K)) as tabulated",
        "sign of the real exponent flipped: d = exp(-9/2 gamma t (J-K)^2 + 3 i t (J-K)); "
        "the tabulated factor equals 1/conj(d)",
    ),
    PrintedForm(
        "rho15-exponent",
        "energy-basis rho_15 = -(sqrt2 p/9) exp(3/2 t (J-K)(3 gamma (K-J) + 2i))",
        "real part 9/2 gamma t (J-K)(K-J) = -9/2 gamma t (J-K)^2 checked to be decaying; "
        "used as rho_15 = -(sqrt2 p/9) d with the decaying d",
    ),
    PrintedForm(
        "block-prefactor",
        "rho_33, rho_35, rho_37, rho_55 with prefactor d/27",
        "prefactor must be 1/(27 d_tabulated) = conj(d)/27; rewritten as "
        "rho_33 = (3-p-2p Re d)/27, rho_35 = p(1-2d+conj d)/27, "
        "rho_37 = p(2-2 Re d)/27, rho_55 = (3+2p+4p Re d)/27",
    ),
)


def printed_block_variants(mp: ModelParams, p: float, gamma: float, t: float) -> dict:
    """Tabulated block entries under three readings, keyed by reading name.

    ``as_printed`` uses the growing factor with the d/27 prefactor,
    ``flipped_d`` the decaying factor with the same prefactor and
    ``reciprocal`` the growing factor in the denominator.
    """
    f = AnalyticFactors.compute(mp, gamma, t)
    with np.errstate(over="ignore", invalid="ignore"):
        return {
            "as_printed": _printed_block(f, p, f.d_printed),
            "flipped_d": _printed_block(f, p, f.d),
            "reciprocal": _reciprocal_block(f, p),
        }
