"""Dense complex linear algebra over small Hilbert spaces.

Conventions used throughout the package:

- Subsystem order is written left to right with the leftmost tensor factor
  most significant (the convention of ``numpy.kron``).
- All operations are pure functions on immutable arrays; the only stateful
  inputs are explicit ``numpy.random.Generator`` streams.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

# Default tolerances for double-precision dense algebra at d <= 64.
TOL_HERM = 1e-9
TOL_TRACE = 1e-9
TOL_PSD = 1e-9
TOL_RECON = 1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def ket(index: int, d: int) -> np.ndarray:
    """Computational basis vector |index> in dimension d."""
    v = np.zeros(d, dtype=complex)
    v[index] = 1.0
    return v


def projector(psi: np.ndarray) -> np.ndarray:
    """Rank-one projector |psi><psi|."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def kron(*factors: np.ndarray) -> np.ndarray:
    """Tensor product of one or more matrices, leftmost factor most significant."""
    return reduce(np.kron, factors)


def max_entangled(d: int) -> np.ndarray:
    """|psi+_d> = sum_i |i,i> / sqrt(d)."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / np.sqrt(d)
    return v


def max_abs(m: np.ndarray) -> float:
    """Entrywise max-norm."""
    return float(np.max(np.abs(m))) if m.size else 0.0


def is_hermitian(m: np.ndarray, tol: float = TOL_HERM) -> bool:
    return max_abs(m - dag(m)) <= tol


def _require_hermitian(m: np.ndarray, tol: float) -> None:
    dev = max_abs(m - dag(m))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3e} > {tol:.1e})")


def eig_hermitian(m: np.ndarray, tol: float = TOL_HERM) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (real, descending) and orthonormal eigenvector columns.

    Raises ValueError for non-Hermitian input.
    """
    _require_hermitian(m, tol)
    w, v = np.linalg.eigh((m + dag(m)) / 2.0)
    return w[::-1].copy(), v[:, ::-1].copy()


def is_psd(m: np.ndarray, tol: float = TOL_PSD, herm_tol: float = TOL_HERM) -> bool:
    """True iff the Hermitian matrix m has min eigenvalue >= -tol."""
    w, _ = eig_hermitian(m, tol=herm_tol)
    return bool(w[-1] >= -tol)


def trace_norm(m: np.ndarray) -> float:
    """Trace norm ||m||_1 (sum of singular values)."""
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def permute_subsystems(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a square matrix.

    ``perm[j]`` is the index (into ``dims``) of the subsystem placed at the
    new position ``j``.
    """
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    t = m.reshape(dims + dims)
    axes = list(perm) + [n + p for p in perm]
    t = np.transpose(t, axes)
    total = int(np.prod(dims))
    return np.ascontiguousarray(t.reshape(total, total))


def permute_subsystems_vec(v: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a state vector (same convention as above)."""
    dims = tuple(int(d) for d in dims)
    t = v.reshape(dims)
    return np.ascontiguousarray(np.transpose(t, perm).reshape(-1))


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: int | Sequence[int]) -> np.ndarray:
    """Trace out all subsystems except ``keep`` (kept in their original order)."""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    keep_t = (keep,) if isinstance(keep, (int, np.integer)) else tuple(keep)
    keep_t = tuple(sorted(int(k) for k in keep_t))
    if any(k < 0 or k >= n for k in keep_t):
        raise ValueError(f"keep indices {keep_t} out of range for dims {dims}")
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = [row[i] if i not in keep_t else letters[n + i] for i in range(n)]
    out = "".join(row[i] for i in keep_t) + "".join(col[i] for i in keep_t)
    sub = "".join(row) + "".join(col) + "->" + out
    dkeep = int(np.prod([dims[i] for i in keep_t]))
    return np.einsum(sub, m.reshape(dims + dims)).reshape(dkeep, dkeep)


def check_density_matrix(
    rho: np.ndarray,
    tol_herm: float = TOL_HERM,
    tol_trace: float = TOL_TRACE,
    tol_psd: float = TOL_PSD,
) -> None:
    """Raise ValueError unless rho is Hermitian, unit trace and PSD within tolerance."""
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    _require_hermitian(rho, tol_herm)
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > tol_trace:
        raise ValueError(f"trace {tr} differs from 1 beyond {tol_trace:.1e}")
    w = np.linalg.eigvalsh((rho + dag(rho)) / 2.0)
    if w[0] < -tol_psd:
        raise ValueError(f"min eigenvalue {w[0]:.3e} below -{tol_psd:.1e}")


def check_pure_state(psi: np.ndarray, tol: float = TOL_TRACE) -> None:
    """Raise ValueError unless psi has unit squared norm."""
    if not np.all(np.isfinite(psi)):
        raise ValueError("state vector has non-finite entries")
    nrm = float(np.vdot(psi, psi).real)
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"squared norm {nrm} differs from 1 beyond {tol:.1e}")


def haar_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state: normalized vector of iid complex Gaussians."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase fixing."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases.conj()


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix with the given rank (full rank by default)."""
    k = d if rank is None else int(rank)
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ dag(g)
    return rho / np.trace(rho).real


def purify(rho: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Spectral purification of rho: a pure state on d (x) rank(rho).

    Tracing out the second factor of the result recovers rho.
    """
    w, v = eig_hermitian(rho)
    keep = w > tol
    w, v = w[keep], v[:, keep]
    r = int(w.size)
    d = rho.shape[0]
    phi = np.zeros(d * r, dtype=complex)
    for k in range(r):
        phi += np.sqrt(w[k]) * np.kron(v[:, k], ket(k, r))
    return phi / np.linalg.norm(phi)
