"""Truncated number-state representation of the abstract algebra.

The basis ``e_0 .. e_{N-1}`` stands for the number states Omega_n of the
bounded-below representation with Casimir eigenvalue -1/2.  Ladder
operators are exact there except in the last rows and columns; every
algebraic check is restricted to a leading "safe band" where truncation
cannot reach.

Group elements (displacement, squeeze) are returned as compressions of the
infinite-dimensional operator onto the first N states.  They are computed
by exponentiating in a padded space of ``N + guard`` states and cutting
back; with ``guard=0`` the plain exponential of the truncated generator is
returned instead (exactly unitary, but not the compression).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .errors import TruncationWarning


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    matrix: np.ndarray
    safe_band: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other):
        if isinstance(other, TruncatedOperator):
            return TruncatedOperator(self.matrix @ other.matrix,
                                     min(self.safe_band, other.safe_band))
        return self.matrix @ other

    @property
    def H(self) -> "TruncatedOperator":
        return TruncatedOperator(self.matrix.conj().T, self.safe_band)


@dataclass(frozen=True)
class SqueezeParams:
    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("squeeze magnitude r must be non-negative")

    @property
    def z(self) -> complex:
        return self.r * np.exp(1j * self.theta)

    @classmethod
    def from_z(cls, z: complex) -> "SqueezeParams":
        return cls(abs(z), float(np.angle(z)) if z != 0 else 0.0)


class Ladder(NamedTuple):
    J_minus: TruncatedOperator
    J_plus: TruncatedOperator
    M: TruncatedOperator
    identity: TruncatedOperator


class Su11(NamedTuple):
    K_minus: TruncatedOperator
    K_plus: TruncatedOperator
    K_3: TruncatedOperator


def _lowering(N):
    return np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1).astype(complex)


def build_ladder(N: int) -> Ladder:
    if N < 2:
        raise ValueError("need N >= 2")
    jm = _lowering(N)
    full = N - 1
    return Ladder(
        TruncatedOperator(jm, N - 2),
        TruncatedOperator(jm.conj().T.copy(), N - 2),
        TruncatedOperator(np.diag(np.arange(N) + 0.5).astype(complex), full),
        TruncatedOperator(np.eye(N, dtype=complex), full),
    )


def build_su11(N: int) -> Su11:
    """K_- = J_-^2/2, K_+ = J_+^2/2, K_3 = J_+ J_- + 1/2."""
    if N < 3:
        raise ValueError("need N >= 3")
    jm = _lowering(N)
    jp = jm.conj().T
    return Su11(
        TruncatedOperator(jm @ jm / 2, N - 3),
        TruncatedOperator(jp @ jp / 2, N - 3),
        TruncatedOperator(jp @ jm + 0.5 * np.eye(N), N - 1),
    )


def casimir(N: int) -> TruncatedOperator:
    """C = J_+ J_- - M, equal to -1/2 on every number state.

    Truncation cannot touch it (J_+ J_- is diagonal); the only deviation is
    the rounding of sqrt(n) * sqrt(n).
    """
    lad = build_ladder(N)
    c = lad.J_plus.matrix @ lad.J_minus.matrix - lad.M.matrix
    return TruncatedOperator(c, N - 1)


def number_state(n: int, N: int) -> np.ndarray:
    """(J_+)^n e_0 / sqrt(n!) built by repeated raising."""
    if not 0 <= n < N:
        raise ValueError(f"number state {n} not representable with N = {N}")
    jp = build_ladder(N).J_plus.matrix
    v = np.zeros(N, dtype=complex)
    v[0] = 1.0
    for _ in range(n):
        v = jp @ v
    return v / math.sqrt(math.factorial(n))


def _compressed_expm(generator_of_dim, N, guard):
    W = N + guard
    return expm(generator_of_dim(W))[:N, :N]


def default_guard(N: int) -> int:
    return N


def displacement(alpha: complex, N: int, guard: int | None = None) -> TruncatedOperator:
    """D(alpha) = exp(alpha J_+ - conj(alpha) J_-) on the first N states."""
    alpha = complex(alpha)
    if abs(alpha) ** 2 > N / 4:
        warnings.warn(f"|alpha|^2 = {abs(alpha)**2:.3g} exceeds N/4 = {N / 4}",
                      TruncationWarning, stacklevel=2)
    guard = default_guard(N) if guard is None else guard

    def gen(W):
        jm = _lowering(W)
        return alpha * jm.conj().T - np.conj(alpha) * jm

    return TruncatedOperator(_compressed_expm(gen, N, guard), N // 2)


def _k_pair(W):
    jm = _lowering(W)
    jp = jm.conj().T
    return jm @ jm / 2, jp @ jp / 2


def squeeze(z: SqueezeParams, N: int, guard: int | None = None) -> TruncatedOperator:
    """S(z) = exp(z K_+ - conj(z) K_-) on the first N states."""
    zc = z.z
    guard = default_guard(N) if guard is None else guard

    def gen(W):
        km, kp = _k_pair(W)
        return zc * kp - np.conj(zc) * km

    return TruncatedOperator(_compressed_expm(gen, N, guard), N // 2)


def bch_gammas(z: SqueezeParams) -> tuple[complex, complex, float]:
    """(gamma_-, gamma_+, gamma_3) of the normal-ordered squeeze factorisation.

    At z = 0 the phase factor z/|z| is taken as 0, so all three vanish.
    """
    r = z.r
    if r == 0:
        return 0j, 0j, 0.0
    phase = np.exp(1j * z.theta)
    t = math.tanh(r)
    return -np.conj(phase) * t, phase * t, -math.log(math.cosh(r))


def bch_squeeze(z: SqueezeParams, N: int) -> TruncatedOperator:
    """exp(g+ K_+) exp(g3 K_3) exp(g- K_-), computed directly in N states.

    The outer factors are triangular, so the product is already the exact
    compression of S(z).
    """
    gm, gp, g3 = bch_gammas(z)
    k = build_su11(N)
    out = (expm(gp * k.K_plus.matrix) @ expm(g3 * k.K_3.matrix)
           @ expm(gm * k.K_minus.matrix))
    return TruncatedOperator(out, N // 2)


# ---------------------------------------------------------------------------
# algebra verification
# ---------------------------------------------------------------------------

def commutator(a, b):
    a = a.matrix if isinstance(a, TruncatedOperator) else a
    b = b.matrix if isinstance(b, TruncatedOperator) else b
    return a @ b - b @ a


def algebra_basis(N: int) -> dict[str, np.ndarray]:
    """Matrices of the basis used by the closure check.

    The generic su(1,1) labels are M = K_3 and M_+- = -K_+-; the sign makes
    [M_-, J_+] = -J_- consistent with [K_-, J_+] = +J_-.
    """
    lad = build_ladder(N)
    k = build_su11(N)
    return {
        "K+": k.K_plus.matrix, "K-": k.K_minus.matrix, "K3": k.K_3.matrix,
        "J+": lad.J_plus.matrix, "J-": lad.J_minus.matrix, "I": lad.identity.matrix,
    }


def _relations(N):
    b = algebra_basis(N)
    M = b["K3"]
    Mp, Mm = -b["K+"], -b["K-"]
    Jp, Jm, I = b["J+"], b["J-"], b["I"]
    Kp, Km, K3 = b["K+"], b["K-"], b["K3"]
    return [
        ("[M,J+] = J+", commutator(M, Jp), Jp),
        ("[M,J-] = -J-", commutator(M, Jm), -Jm),
        ("[J-,J+] = I", commutator(Jm, Jp), I),
        ("[M+,M-] = -M", commutator(Mp, Mm), -M),
        ("[M,M+] = 2M+", commutator(M, Mp), 2 * Mp),
        ("[M,M-] = -2M-", commutator(M, Mm), -2 * Mm),
        ("[M-,J+] = -J-", commutator(Mm, Jp), -Jm),
        ("[M+,J-] = J+", commutator(Mp, Jm), Jp),
        ("[K+,K-] = -K3", commutator(Kp, Km), -K3),
        ("[K3,K+] = 2K+", commutator(K3, Kp), 2 * Kp),
        ("[K3,K-] = -2K-", commutator(K3, Km), -2 * Km),
        ("[K-,J-] = 0", commutator(Km, Jm), 0 * I),
        ("[K+,J-] = -J+", commutator(Kp, Jm), -Jp),
        ("[K3,J-] = -J-", commutator(K3, Jm), -Jm),
        ("[K-,J+] = J-", commutator(Km, Jp), Jm),
        ("[K+,J+] = 0", commutator(Kp, Jp), 0 * I),
        ("[K3,J+] = J+", commutator(K3, Jp), Jp),
    ]


# expected structure constants for the closure check: [a, b] = sum c_k basis_k
STRUCTURE = {
    ("K+", "K-"): {"K3": -1.0},
    ("K3", "K+"): {"K+": 2.0},
    ("K3", "K-"): {"K-": -2.0},
    ("K-", "J-"): {},
    ("K+", "J-"): {"J+": -1.0},
    ("K3", "J-"): {"J-": -1.0},
    ("K-", "J+"): {"J-": 1.0},
    ("K+", "J+"): {},
    ("K3", "J+"): {"J+": 1.0},
    ("J-", "J+"): {"I": 1.0},
}


MIN_SUITE_DIM = 5


def safe_band(N: int) -> int:
    """Largest n for which [A, B] restricted to e_0..e_n is truncation-exact."""
    return N - 3


def verify_algebra(N: int = 40) -> list[dict]:
    """Residual report for every commutation relation and the Casimir.

    Each entry is ``{"relation", "N", "band", "residual"}`` where the
    residual is the Frobenius norm over the leading ``band + 1`` block.
    Needs N >= 5 so that every basis element is visible on the band.
    """
    if N < MIN_SUITE_DIM:
        raise ValueError(f"algebra suite needs N >= {MIN_SUITE_DIM}")
    band = safe_band(N)
    blk = slice(0, band + 1)
    report = []
    for name, lhs, rhs in _relations(N):
        res = float(np.linalg.norm((lhs - rhs)[blk, blk]))
        report.append({"relation": name, "N": N, "band": band, "residual": res})
    c = casimir(N).matrix
    report.append({"relation": "casimir: C = -1/2 I (all entries)", "N": N, "band": N - 1,
                   "residual": float(np.max(np.abs(c + 0.5 * np.eye(N))))})
    report.extend(closure_report(N))
    return report


def decompose(mat: np.ndarray, N: int) -> tuple[dict[str, complex], float]:
    """Least-squares expansion of a band block in the algebra basis."""
    band = safe_band(N)
    blk = slice(0, band + 1)
    basis = algebra_basis(N)
    names = list(basis)
    A = np.stack([basis[k][blk, blk].ravel() for k in names], axis=1)
    y = mat[blk, blk].ravel()
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.linalg.norm(A @ coef - y))
    return dict(zip(names, coef)), resid


def closure_report(N: int) -> list[dict]:
    basis = algebra_basis(N)
    band = safe_band(N)
    names = list(basis)
    out = []
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            key = (a, b) if (a, b) in STRUCTURE else (b, a)
            sign = 1.0 if key == (a, b) else -1.0
            expected = STRUCTURE.get(key, {})
            coef, resid = decompose(commutator(basis[a], basis[b]), N)
            mismatch = max(abs(coef[k] - sign * expected.get(k, 0.0)) for k in names)
            out.append({"relation": f"closure: [{a},{b}]", "N": N, "band": band,
                        "residual": max(resid, float(mismatch))})
    return out
