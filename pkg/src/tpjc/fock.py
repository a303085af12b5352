"""Truncated Fock-space states, elementary field operators, and metrics.

The simulation space is spanned by the number states |0> .. |N-1>. Pure
states are amplitude vectors, mixed states dense N x N matrices. All
operators here act as index shifts or diagonal scalings on the amplitude
arrays; nothing is materialized as a dense operator matrix (the dense
route lives in :mod:`tpjc.dynamics` as the verification oracle).

Normalization policy: named constructors (``make_fock``, ``make_coherent``,
``pure_density``) return normalized states; raw operator applications
(``apply_lower`` etc.) do not renormalize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AllMassRemoved, DimensionMismatch, TruncationTooSmall


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used throughout the package.

    Defaults leave double-precision headroom for ~100 iterated matrix
    products (50 protocol passes).
    """

    norm_tol: float = 1e-10
    herm_tol: float = 1e-10
    psd_tol: float = 1e-8
    tail_tol: float = 1e-10


DEFAULT_TOL = Tolerances()

# Threshold below which low Fock components are treated as absent and the
# photon-subtraction map needs no renormalization.
LOW_MASS_TOL = 1e-12


class WarningLog:
    """Accumulates non-fatal advisories from the numerical layers.

    Experiment runs thread one instance through the protocol so every
    advisory ends up in the result file.
    """

    def __init__(self) -> None:
        self.entries: list[str] = []

    def add(self, message: str) -> None:
        self.entries.append(message)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class FockVector:
    """Pure field state: complex amplitudes c_j over |0> .. |dim-1>.

    Instances are immutable; operations return fresh vectors. The stored
    amplitudes are only guaranteed normalized when produced by a
    constructor or an explicitly normalizing operation.
    """

    amps: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.amps)
        if arr.ndim != 1 or arr.size < 1:
            raise DimensionMismatch(
                f"FockVector needs a 1-d amplitude array of length >= 1, got shape {arr.shape}"
            )
        object.__setattr__(self, "amps", _readonly(arr))

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "FockVector":
        n = self.norm()
        if n == 0.0:
            raise AllMassRemoved("cannot normalize a zero vector")
        return FockVector(self.amps / n)


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed field state: N x N complex matrix, Hermitian and unit trace."""

    elems: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.elems)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionMismatch(
                f"DensityMatrix needs a square 2-d array, got shape {arr.shape}"
            )
        object.__setattr__(self, "elems", _readonly(arr))

    @property
    def dim(self) -> int:
        return self.elems.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.elems).real)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.elems - self.elems.conj().T)))

    def smallest_eigenvalue(self) -> float:
        # Debug/test-mode check only; O(N^3).
        return float(np.linalg.eigvalsh(self.elems)[0])

    def validate(self, tol: Tolerances = DEFAULT_TOL, check_psd: bool = False) -> None:
        """Raise ValueError if the density-matrix invariants are violated."""
        defect = self.hermiticity_defect()
        if defect > tol.herm_tol:
            raise ValueError(f"hermiticity defect {defect:.3e} exceeds {tol.herm_tol:.3e}")
        drift = abs(self.trace() - 1.0)
        if drift > tol.norm_tol:
            raise ValueError(f"trace deviates from 1 by {drift:.3e}")
        if check_psd:
            lam = self.smallest_eigenvalue()
            if lam < -tol.psd_tol:
                raise ValueError(f"smallest eigenvalue {lam:.3e} below -{tol.psd_tol:.3e}")


@dataclass(frozen=True)
class QubitFieldState:
    """Joint pure state of qubit and field.

    ``e_amps[j]`` and ``g_amps[j]`` are the amplitudes on |j> attached to
    the excited and ground qubit level. Neither component is individually
    normalized; only the joint norm is 1.
    """

    e_amps: np.ndarray
    g_amps: np.ndarray

    def __post_init__(self) -> None:
        e = np.asarray(self.e_amps)
        g = np.asarray(self.g_amps)
        if e.ndim != 1 or g.ndim != 1 or e.size != g.size or e.size < 1:
            raise DimensionMismatch(
                f"qubit-field components must be equal-length 1-d arrays, got {e.shape} and {g.shape}"
            )
        object.__setattr__(self, "e_amps", _readonly(e))
        object.__setattr__(self, "g_amps", _readonly(g))

    @property
    def dim(self) -> int:
        return self.e_amps.size

    def joint_norm(self) -> float:
        return float(math.sqrt(np.sum(np.abs(self.e_amps) ** 2) + np.sum(np.abs(self.g_amps) ** 2)))


# ---------------------------------------------------------------------------
# constructors


def make_fock(n: int, dim: int) -> FockVector:
    """Number state |n> on a dim-dimensional space."""
    if not 0 <= n < dim:
        raise DimensionMismatch(f"Fock index {n} outside [0, {dim})")
    amps = np.zeros(dim, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def make_coherent(alpha: complex, dim: int, tol: Tolerances = DEFAULT_TOL) -> FockVector:
    """Coherent state |alpha>: c_j = exp(-|alpha|^2/2) alpha^j / sqrt(j!).

    Amplitudes are evaluated in log space so large |alpha| cannot overflow
    the intermediate powers. The Poisson mass beyond the truncation must
    not exceed ``tol.tail_tol`` (computed as the complement of the
    truncated sum); the truncated vector is renormalized.
    """
    if dim < 1:
        raise DimensionMismatch("dim must be >= 1")
    r = abs(alpha)
    if r == 0.0:
        return make_fock(0, dim)
    j = np.arange(dim)
    log_fact = np.array([math.lgamma(k + 1.0) for k in range(dim)])
    log_mag = -0.5 * r * r + j * math.log(r) - 0.5 * log_fact
    mag = np.exp(log_mag)
    tail = max(0.0, 1.0 - float(np.sum(mag * mag)))
    if tail > tol.tail_tol:
        raise TruncationTooSmall(
            f"coherent tail mass {tail:.3e} at dim={dim} exceeds tail_tol={tol.tail_tol:.3e}; "
            f"suggested minimum dim is {default_dim(alpha)}"
        )
    phase = np.exp(1j * np.angle(complex(alpha)) * j)
    return FockVector(mag * phase).normalized()


def pure_density(psi: FockVector) -> DensityMatrix:
    """Rank-one density matrix |psi><psi|."""
    v = psi.amps
    return DensityMatrix(np.outer(v, v.conj()))


def default_dim(alpha: complex, added_photons: int = 0) -> int:
    """Truncation sizing policy: Poisson bulk (mean + 10 sigma) plus the
    photon gain of the protocol plus margin.

    Sized so every truncation guard holds for coherent bases: the top
    ``added_photons`` amplitudes stay two orders of magnitude below the
    default tail_tol for |alpha| up to ~100 and up to 50 passes.
    """
    r = abs(alpha)
    return math.ceil(r * r + 10.0 * r + added_photons + 24)


# ---------------------------------------------------------------------------
# elementary operators (index shifts / diagonal scalings; never renormalize)


def apply_lower(psi: FockVector) -> FockVector:
    """Bare lowering ladder V: |n> -> |n-1>, with V|0> = 0.

    The |0> component of the input is discarded, so the output norm may
    shrink; callers track norm loss themselves.
    """
    out = np.zeros(psi.dim, dtype=complex)
    out[: psi.dim - 1] = psi.amps[1:]
    return FockVector(out)


def apply_lower_dm(rho: DensityMatrix) -> DensityMatrix:
    """V rho V^dag: shifts both row and column indices down by one."""
    out = np.zeros_like(rho.elems)
    out[: rho.dim - 1, : rho.dim - 1] = rho.elems[1:, 1:]
    return DensityMatrix(out)


def apply_raise(psi: FockVector, tol: Tolerances = DEFAULT_TOL) -> FockVector:
    """Bare raising ladder V^dag: |n> -> |n+1>.

    The top-of-space amplitude would be pushed out of the truncation, so
    it must already be negligible.
    """
    top = abs(psi.amps[-1])
    if top > tol.tail_tol:
        raise TruncationTooSmall(
            f"top amplitude {top:.3e} exceeds tail_tol={tol.tail_tol:.3e}; enlarge dim={psi.dim}"
        )
    out = np.zeros(psi.dim, dtype=complex)
    out[1:] = psi.amps[: psi.dim - 1]
    return FockVector(out)


def apply_parity(psi: FockVector) -> FockVector:
    """(-1)^n parity: flips the sign of odd Fock components."""
    signs = np.where(np.arange(psi.dim) % 2 == 0, 1.0, -1.0)
    return FockVector(psi.amps * signs)


def apply_annihilation(psi: FockVector) -> FockVector:
    """Harmonic-oscillator annihilation a: out_j = sqrt(j+1) c_{j+1}."""
    out = np.zeros(psi.dim, dtype=complex)
    j = np.arange(psi.dim - 1)
    out[: psi.dim - 1] = np.sqrt(j + 1.0) * psi.amps[1:]
    return FockVector(out)


def apply_number(psi: FockVector) -> FockVector:
    """Photon-number operator n = a^dag a: out_j = j c_j."""
    return FockVector(psi.amps * np.arange(psi.dim))


# ---------------------------------------------------------------------------
# metrics


def fock_distribution(state: FockVector | DensityMatrix) -> np.ndarray:
    """Fock-state probabilities p_j = |c_j|^2 (pure) or rho_jj (mixed)."""
    if isinstance(state, FockVector):
        return np.abs(state.amps) ** 2
    return np.real(np.diag(state.elems)).copy()


def mean_photon(state: FockVector | DensityMatrix) -> float:
    """First moment sum_j j p_j of the Fock distribution."""
    p = fock_distribution(state)
    return float(np.sum(np.arange(p.size) * p))


def photon_moment2(state: FockVector | DensityMatrix) -> float:
    """Second moment sum_j j^2 p_j of the Fock distribution."""
    p = fock_distribution(state)
    j = np.arange(p.size, dtype=float)
    return float(np.sum(j * j * p))


def fidelity(rho: DensityMatrix, target: FockVector) -> float:
    """Overlap <target| rho |target>, clamped to [0, 1].

    For a pure rho = |psi><psi| this is |<target|psi>|^2.
    """
    if rho.dim != target.dim:
        raise DimensionMismatch(f"density matrix dim {rho.dim} != target dim {target.dim}")
    value = np.real(target.amps.conj() @ rho.elems @ target.amps)
    return float(min(1.0, max(0.0, value)))
