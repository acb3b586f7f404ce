"""Algorithmic causality analysis for bipartite channels.

A channel is A-/->B semicausal (Alice cannot signal Bob) iff tracing the
A-output factor of its Choi state leaves the maximally mixed state on the
A-reference factor times the Choi state of the reduced B map.  That single
partial-trace equality is the primary test; a superoperator comparison and a
sampling probe of the defining property are kept as independent oracles.

Residuals are entrywise max-norms; witness distinguishability is the full
trace norm ||rho_0 - rho_1||_1 of the receiver marginals (no 1/2 factor).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from .channels import (
    BipartiteChannel,
    Channel,
    ChoiState,
    apply,
    choi_of_bipartite,
    choi_to_kraus,
    depolarizing,
    identity_channel,
    kraus_to_choi,
    tensor,
)
from .linalg import (
    dag,
    eig_hermitian,
    ket,
    kron,
    max_abs,
    max_entangled,
    partial_trace,
    permute_subsystems,
    permute_subsystems_vec,
    projector,
    random_density,
    trace_norm,
)

TOL_CAUSAL = 1e-9
TOL_RECON_SL = 1e-8
TOL_CLASSIFY = 1e-8

A_TO_B = "AtoB"
B_TO_A = "BtoA"


class SemicausalityError(ValueError):
    """A construction required semicausality that the channel does not have."""


class NoWitnessError(ValueError):
    """Witness extraction was asked for a direction in which the map is semicausal."""


@dataclass(frozen=True)
class CausalityVerdict:
    semicausal_a_to_b: bool
    semicausal_b_to_a: bool
    causal: bool
    residual_a_to_b: float
    residual_b_to_a: float

    def to_json_dict(self) -> dict:
        return {
            "semicausal_ab": self.semicausal_a_to_b,
            "semicausal_ba": self.semicausal_b_to_a,
            "causal": self.causal,
            "residual_ab": self.residual_a_to_b,
            "residual_ba": self.residual_b_to_a,
        }


@dataclass(frozen=True)
class SignallingWitness:
    direction: str
    input_a: np.ndarray  # pure state on Alice's input factor
    input_b: np.ndarray  # pure state on Bob's input factor
    distinguishability: float  # trace norm of receiver-marginal difference

    def to_json_dict(self) -> dict:
        return {
            "direction": self.direction,
            "input_a": [[float(z.real), float(z.imag)] for z in self.input_a],
            "input_b": [[float(z.real), float(z.imag)] for z in self.input_b],
            "distinguishability": self.distinguishability,
        }


@dataclass(frozen=True)
class Semilocalization:
    """One-way realization of an A-/->B semicausal map: Bob's Stinespring
    isometry into an ancilla that is handed to Alice, then Alice's unitary."""

    v_be: np.ndarray  # isometry d_B_in -> d_B_out * d_E, factor order (B_out, E)
    u_ac: np.ndarray  # unitary on A (x) C
    d_e: int
    d_c: int
    reconstruction_error: float


@dataclass(frozen=True)
class UnitaryForm:
    kind: str  # "product" | "swap_product" | "entangling"
    factor_a: np.ndarray | None = None
    factor_b: np.ndarray | None = None


@dataclass(frozen=True)
class AssignmentTable:
    """Grid of output states on a product-projector operator basis."""

    basis_a: tuple[np.ndarray, ...]
    basis_b: tuple[np.ndarray, ...]
    cells: tuple[tuple[np.ndarray, ...], ...]


@dataclass(frozen=True)
class TableBuildResult:
    cp: bool
    channel: BipartiteChannel | None
    min_choi_eigenvalue: float
    choi: np.ndarray


def is_semicausal_a_to_b(bch: BipartiteChannel, tol: float = TOL_CAUSAL) -> tuple[bool, float]:
    """Choi-reduction test: Tr_Aout(rho) == I/d_Aref (x) rho_(Bref,Bout)."""
    rho, dims = choi_of_bipartite(bch)
    reduced = partial_trace(rho, dims, keep=(0, 1, 3))
    tau = partial_trace(rho, dims, keep=(1, 3))
    target = kron(np.eye(dims[0]) / dims[0], tau)
    residual = max_abs(reduced - target)
    return residual <= tol, residual


def is_semicausal_b_to_a(bch: BipartiteChannel, tol: float = TOL_CAUSAL) -> tuple[bool, float]:
    """Mirror test: Tr_Bout(rho) == rho_(Aref,Aout) (x) I/d_Bref, reordered."""
    rho, dims = choi_of_bipartite(bch)
    reduced = partial_trace(rho, dims, keep=(0, 1, 2))
    tau = partial_trace(rho, dims, keep=(0, 2))
    target = kron(tau, np.eye(dims[1]) / dims[1])  # order (A_ref, A_out, B_ref)
    target = permute_subsystems(target, (dims[0], dims[2], dims[1]), (0, 2, 1))
    residual = max_abs(reduced - target)
    return residual <= tol, residual


def is_causal(bch: BipartiteChannel, tol: float = TOL_CAUSAL) -> CausalityVerdict:
    ab, res_ab = is_semicausal_a_to_b(bch, tol)
    ba, res_ba = is_semicausal_b_to_a(bch, tol)
    return CausalityVerdict(ab, ba, ab and ba, res_ab, res_ba)


def _marginal_after(bch: BipartiteChannel, rho: np.ndarray, direction: str) -> np.ndarray:
    out = apply(bch, rho)
    out_dims = (bch.da_out, bch.db_out)
    return partial_trace(out, out_dims, 1 if direction == A_TO_B else 0)


def semicausal_superop_criterion(
    bch: BipartiteChannel, direction: str, tol: float = TOL_CAUSAL
) -> tuple[bool, float]:
    """Oracle: compare Tr_s o L o (D_s (x) id) with Tr_s o L as Choi matrices."""
    d_in = bch.channel.d_in
    if direction == A_TO_B:
        pre = tensor(depolarizing(bch.da_in), identity_channel(bch.db_in))
    elif direction == B_TO_A:
        pre = tensor(identity_channel(bch.da_in), depolarizing(bch.db_in))
    else:
        raise ValueError(f"unknown direction {direction!r}")
    residual = 0.0
    for r in range(d_in):
        for c in range(d_in):
            unit = np.outer(ket(r, d_in), ket(c, d_in))
            m_plain = _marginal_after(bch, unit, direction)
            m_dep = _marginal_after(bch, apply(pre, unit), direction)
            residual = max(residual, max_abs(m_plain - m_dep) / d_in)
    return residual <= tol, residual


def definitional_semicausality_probe(
    bch: BipartiteChannel,
    direction: str,
    trials: int,
    rng: np.random.Generator,
) -> float:
    """Max receiver-marginal deviation over sampled inputs and sender channels.

    Samples alternate between product and entangled inputs; the sender-side
    pre-processing is a random CPTP map.
    """
    from .channels import random_channel

    da, db = bch.da_in, bch.db_in
    d_sender = da if direction == A_TO_B else db
    worst = 0.0
    for t in range(trials):
        if t % 2 == 0:
            rho = kron(random_density(da, rng), random_density(db, rng))
        else:
            rho = random_density(da * db, rng)
        gamma = random_channel(d_sender, d_sender, rng, env=int(rng.integers(1, 4)))
        if direction == A_TO_B:
            pre = tensor(gamma, identity_channel(db))
        else:
            pre = tensor(identity_channel(da), gamma)
        diff = _marginal_after(bch, rho, direction) - _marginal_after(bch, apply(pre, rho), direction)
        worst = max(worst, max_abs(diff))
    return worst


def _distinguishability(bch: BipartiteChannel, psi_a: np.ndarray, psi_b: np.ndarray, direction: str) -> float:
    rho = kron(projector(psi_a), projector(psi_b))
    if direction == A_TO_B:
        dep = kron(np.eye(bch.da_in) / bch.da_in, projector(psi_b))
    else:
        dep = kron(projector(psi_a), np.eye(bch.db_in) / bch.db_in)
    return trace_norm(_marginal_after(bch, rho, direction) - _marginal_after(bch, dep, direction))


def _qubit_state(theta: float, phi: float) -> np.ndarray:
    return np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)])


def signalling_witness(
    bch: BipartiteChannel,
    direction: str,
    tol: float = TOL_CAUSAL,
    refine: bool = True,
) -> SignallingWitness:
    """Pure product input exposing the signalling of a non-semicausal channel.

    Searches the product-projector basis grid, then (for qubit factors)
    refines over Bloch angles.  The sender encodes one bit by either doing
    nothing or depolarizing; the reported distinguishability is the trace
    norm of the receiver's two output marginals.
    """
    test = is_semicausal_a_to_b if direction == A_TO_B else is_semicausal_b_to_a
    ok, _ = test(bch, tol)
    if ok:
        raise NoWitnessError(f"channel is {direction} semicausal; no witness exists")
    vecs_a = _projector_basis_vectors(bch.da_in)
    vecs_b = _projector_basis_vectors(bch.db_in)
    best = (-1.0, vecs_a[0], vecs_b[0])
    for va in vecs_a:
        for vb in vecs_b:
            d = _distinguishability(bch, va, vb, direction)
            if d > best[0]:
                best = (d, va, vb)
    dist, psi_a, psi_b = best
    if refine and bch.da_in == 2 and bch.db_in == 2:
        theta_a = 2.0 * np.arccos(np.clip(abs(psi_a[0]), 0.0, 1.0))
        theta_b = 2.0 * np.arccos(np.clip(abs(psi_b[0]), 0.0, 1.0))
        phi_a = float(np.angle(psi_a[1])) if abs(psi_a[1]) > 1e-12 else 0.0
        phi_b = float(np.angle(psi_b[1])) if abs(psi_b[1]) > 1e-12 else 0.0

        def neg(x):
            return -_distinguishability(bch, _qubit_state(x[0], x[1]), _qubit_state(x[2], x[3]), direction)

        res = scipy.optimize.minimize(
            neg,
            [theta_a, phi_a, theta_b, phi_b],
            method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 2000},
        )
        if -res.fun > dist:
            dist = -res.fun
            psi_a = _qubit_state(res.x[0], res.x[1])
            psi_b = _qubit_state(res.x[2], res.x[3])
    if dist <= tol:
        raise NoWitnessError("witness search did not exceed tolerance")
    return SignallingWitness(direction, psi_a, psi_b, float(dist))


def _projector_basis_vectors(d: int) -> list[np.ndarray]:
    """Unit vectors of the product-projector operator basis on dimension d."""
    vecs = [ket(k, d) for k in range(d)]
    for k in range(d):
        for l in range(k):
            vecs.append((ket(k, d) + ket(l, d)) / np.sqrt(2.0))
            vecs.append((ket(k, d) + 1j * ket(l, d)) / np.sqrt(2.0))
    return vecs


def product_projector_basis(d: int) -> tuple[np.ndarray, ...]:
    """d^2 pure projectors spanning the operator space: |k>, (|k>+|l>)/sqrt2,
    (|k>+i|l>)/sqrt2 for k > l."""
    if d < 2:
        raise ValueError("dimension must be >= 2")
    return tuple(projector(v) for v in _projector_basis_vectors(d))


def reduced_map(bch: BipartiteChannel, side: str, tol: float = TOL_CAUSAL) -> Channel:
    """Single-party channel induced on one side of a semicausal map.

    The A-side reduced map requires the channel to be A<-/-B semicausal
    (Bob cannot signal Alice); then Tr_B L[rho_A (x) omega_B] is independent
    of omega_B, which is verified on an operator basis.
    """
    rho, dims = choi_of_bipartite(bch)
    if side == "A":
        ok, res = is_semicausal_b_to_a(bch, tol)
        keep, d_in, d_out = (0, 2), bch.da_in, bch.da_out
        sweep = [(u, "B") for u in _projector_basis_vectors(bch.db_in)]
    elif side == "B":
        ok, res = is_semicausal_a_to_b(bch, tol)
        keep, d_in, d_out = (1, 3), bch.db_in, bch.db_out
        sweep = [(u, "A") for u in _projector_basis_vectors(bch.da_in)]
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    if not ok:
        raise SemicausalityError(
            f"reduced map on side {side} undefined: semicausality residual {res:.3e} > {tol:.1e}"
        )
    choi = partial_trace(rho, dims, keep)
    ch = choi_to_kraus(ChoiState(d_in, d_out, choi))
    _verify_reduction_independence(bch, side, ch, sweep, tol)
    return ch


def _verify_reduction_independence(bch, side, red, sweep, tol):
    """Check the reduction does not depend on the other party's state."""
    d_own = red.d_in
    out_dims = (bch.da_out, bch.db_out)
    for vec, other in sweep:
        omega = projector(vec)
        for r in range(d_own):
            for c in range(d_own):
                unit = np.outer(ket(r, d_own), ket(c, d_own))
                joint = kron(unit, omega) if side == "A" else kron(omega, unit)
                marg = partial_trace(apply(bch, joint), out_dims, 0 if side == "A" else 1)
                if max_abs(marg - apply(red, unit)) > 10 * tol:
                    raise SemicausalityError(
                        f"reduction on side {side} depends on the other party's state"
                    )


def same_reduced_class(
    ch1: BipartiteChannel, ch2: BipartiteChannel, tol: float = TOL_CAUSAL
) -> bool:
    """Whether two causal channels share both reduced maps (class membership)."""
    for ch in (ch1, ch2):
        v = is_causal(ch, tol)
        if not v.causal:
            raise SemicausalityError("reduced classes are defined for causal maps only")
    if (ch1.da_in, ch1.da_out) != (ch2.da_in, ch2.da_out) or (ch1.db_in, ch1.db_out) != (
        ch2.db_in,
        ch2.db_out,
    ):
        raise ValueError("cannot compare reduced maps across mismatched dimensions")
    for side in ("A", "B"):
        c1 = kraus_to_choi(reduced_map(ch1, side, tol)).matrix
        c2 = kraus_to_choi(reduced_map(ch2, side, tol)).matrix
        if max_abs(c1 - c2) > tol:
            return False
    return True


def _complete_basis(cols: np.ndarray, dim: int) -> np.ndarray:
    """Extend orthonormal columns to an orthonormal basis of C^dim."""
    if cols.shape[1] == dim:
        return cols
    comp = scipy.linalg.null_space(cols.conj().T)
    return np.hstack([cols, comp])


def semilocalize(
    bch: BipartiteChannel,
    tol: float = TOL_CAUSAL,
    cutoff: float = 1e-12,
) -> Semilocalization:
    """One-way-communication realization of an A-/->B semicausal channel.

    Builds the Stinespring isometry of the reduced B map, purifies the Choi
    state, and aligns it with the reference purification by a unitary acting
    on Alice's slot and the ancilla only.  The ancilla C is sized
    max(d_A * d_E, rank of the Choi state).
    """
    da_i, db_i, da_o, db_o = bch.dims
    if da_i != da_o:
        raise SemicausalityError("semilocalization needs matching A input/output dimensions")
    ok, res = is_semicausal_a_to_b(bch, tol)
    if not ok:
        raise SemicausalityError(f"channel is A->B signalling (residual {res:.3e})")
    rho, dims = choi_of_bipartite(bch)

    choi_b = partial_trace(rho, dims, keep=(1, 3))
    red_b = choi_to_kraus(ChoiState(db_i, db_o, choi_b))
    d_e = len(red_b.kraus)
    v_be = np.zeros((db_o * d_e, db_i), dtype=complex)
    for m, k in enumerate(red_b.kraus):
        for b in range(db_o):
            v_be[b * d_e + m, :] = k[b, :]

    w_rho, g = eig_hermitian(rho)
    rank_rho = int(np.sum(w_rho > cutoff))
    d_c = max(da_i * d_e, rank_rho)

    # Purification of the Choi state on (A_ref, B_ref, A_out, B_out) (x) C.
    psi = np.zeros(rho.shape[0] * d_c, dtype=complex)
    for k in range(rank_rho):
        psi += np.sqrt(w_rho[k]) * np.kron(g[:, k], ket(k, d_c))
    psi /= np.linalg.norm(psi)

    # Reference purification of sigma = Tr_Aout(rho) with purifier (A, E c C).
    phi_b = (np.kron(np.eye(db_i), v_be) @ max_entangled(db_i)).reshape(db_i, db_o, d_e)
    phi_b_c = np.zeros((db_i, db_o, d_c), dtype=complex)
    phi_b_c[:, :, :d_e] = phi_b
    phi = np.kron(max_entangled(da_i), phi_b_c.reshape(-1))
    # order (A_ref, A, B_ref, B_out, C) -> (A_ref, B_ref, B_out, A, C)
    phi = permute_subsystems_vec(phi, (da_i, da_i, db_i, db_o, d_c), (0, 2, 3, 1, 4))
    # order (A_ref, B_ref, A_out, B_out, C) -> (A_ref, B_ref, B_out, A_out, C)
    psi_s = permute_subsystems_vec(psi, (da_i, db_i, da_o, db_o, d_c), (0, 1, 3, 2, 4))

    d_s = da_i * db_i * db_o
    d_p = da_o * d_c
    m1 = phi.reshape(d_s, d_p)
    m2 = psi_s.reshape(d_s, d_p)

    sigma = partial_trace(rho, dims, keep=(0, 1, 3))
    w_s, u = eig_hermitian(sigma)
    r_s = int(np.sum(w_s > cutoff))
    v1 = np.zeros((d_p, r_s), dtype=complex)
    v2 = np.zeros((d_p, r_s), dtype=complex)
    for k in range(r_s):
        v1[:, k] = (dag(m1) @ u[:, k]).conj() / np.sqrt(w_s[k])
        v2[:, k] = (dag(m2) @ u[:, k]).conj() / np.sqrt(w_s[k])
    b1 = _complete_basis(v1, d_p)
    b2 = _complete_basis(v2, d_p)
    x = b2 @ dag(b1)
    # polar projection onto the unitary group absorbs completion round-off
    uu, _, vv = np.linalg.svd(x)
    u_ac = uu @ vv

    rec = reconstruct_semilocalization(bch.dims, v_be, u_ac, d_c)
    err = max_abs(rec - rho)
    return Semilocalization(v_be, u_ac, d_e, d_c, float(err))


def reconstruct_semilocalization(
    dims: tuple[int, int, int, int],
    v_be: np.ndarray,
    u_ac: np.ndarray,
    d_c: int,
) -> np.ndarray:
    """Choi state realized by the protocol: Bob's isometry into the ancilla
    (embedded in C), the ancilla handed to Alice, Alice's unitary on A (x) C."""
    da_i, db_i, da_o, db_o = dims
    d_e = v_be.shape[0] // db_o
    phi_b = (np.kron(np.eye(db_i), v_be) @ max_entangled(db_i)).reshape(db_i, db_o, d_e)
    phi_b_c = np.zeros((db_i, db_o, d_c), dtype=complex)
    phi_b_c[:, :, :d_e] = phi_b
    full = np.kron(max_entangled(da_i), phi_b_c.reshape(-1))
    # (A_ref, A, B_ref, B_out, C) -> (A_ref, B_ref, B_out, A, C)
    full = permute_subsystems_vec(full, (da_i, da_i, db_i, db_o, d_c), (0, 2, 3, 1, 4))
    mat = full.reshape(-1, da_i * d_c) @ u_ac.T
    chi = mat.reshape(-1)
    # trace out C, then reorder (A_ref, B_ref, B_out, A_out) -> (A_ref, B_ref, A_out, B_out)
    m3 = chi.reshape(-1, d_c)
    rho_no_c = m3 @ dag(m3)
    return permute_subsystems(rho_no_c, (da_i, db_i, db_o, da_o), (0, 1, 3, 2))


def _reshuffle(u: np.ndarray, da: int, db: int) -> np.ndarray:
    """Rearrange U[(i,j),(i',j')] into M[(i,i'),(j,j')] for operator-Schmidt SVD."""
    return u.reshape(da, db, da, db).transpose(0, 2, 1, 3).reshape(da * da, db * db)


def _swap_matrix(d: int) -> np.ndarray:
    s = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1.0
    return s


def _product_factors(u, da, db, tol):
    """Return (u_a, u_b) if u = u_a (x) u_b up to phase, else None."""
    m = _reshuffle(u, da, db)
    uu, s, vh = np.linalg.svd(m)
    weights = s / np.sqrt(da * db)  # normalized operator-Schmidt coefficients
    if weights.shape[0] > 1 and weights[1] > tol:
        return None
    fa = np.sqrt(da) * uu[:, 0].reshape(da, da)
    fb = np.sqrt(db) * vh[0, :].reshape(db, db)
    approx = np.kron(fa, fb)
    phase = np.vdot(approx.reshape(-1), u.reshape(-1)) / (da * db)
    fa = fa * phase
    # split the phase freedom canonically: leading entry of fa real positive
    lead = fa.reshape(-1)[np.argmax(np.abs(fa))]
    rot = lead / abs(lead)
    fa = fa / rot
    fb = fb * rot
    if max_abs(u - np.kron(fa, fb)) > max(100 * tol, 1e-7):
        return None
    return fa, fb


def unitary_form(
    u: np.ndarray, da: int, db: int, tol: float = TOL_CLASSIFY
) -> UnitaryForm:
    """Classify a unitary on A (x) B as product, swap-product or entangling.

    Product is tested first, then (for equal dimensions) the swap-product
    form U = (V (x) W) SWAP; everything else is entangling.
    """
    d = da * db
    if u.shape != (d, d) or max_abs(u @ dag(u) - np.eye(d)) > 1e-8:
        raise ValueError("input is not a unitary of the given dimensions")
    got = _product_factors(u, da, db, tol)
    if got is not None:
        return UnitaryForm("product", got[0], got[1])
    if da == db:
        got = _product_factors(u @ _swap_matrix(da), da, db, tol)
        if got is not None:
            return UnitaryForm("swap_product", got[0], got[1])
    return UnitaryForm("entangling")


def unitary_is_signalling(u: np.ndarray, da: int, db: int, tol: float = TOL_CLASSIFY) -> bool:
    """Conjugation by u can signal iff u is not a product unitary."""
    return unitary_form(u, da, db, tol).kind != "product"


def table_from_channel(bch: BipartiteChannel) -> AssignmentTable:
    """Evaluate the channel on the product-projector operator basis grid."""
    basis_a = product_projector_basis(bch.da_in)
    basis_b = product_projector_basis(bch.db_in)
    cells = tuple(
        tuple(apply(bch, kron(pa, pb)) for pb in basis_b) for pa in basis_a
    )
    return AssignmentTable(basis_a, basis_b, cells)


def channel_from_table(
    table: AssignmentTable, tol: float = 1e-9, psd_tol: float = 1e-9
) -> TableBuildResult:
    """Unique linear extension of the table; a channel when the Choi is PSD.

    Marginal consistency of the cells (row marginals independent of the
    column and vice versa) is required; by the equivalence-class argument the
    resulting map is then causal whenever it is completely positive.
    """
    na, nb = len(table.basis_a), len(table.basis_b)
    da = table.basis_a[0].shape[0]
    db = table.basis_b[0].shape[0]
    d = da * db
    out_dims = (da, db)  # the assignment scheme defines maps S_AB -> S_AB
    if table.cells[0][0].shape != (d, d):
        raise ValueError("table cells must be states on the full A (x) B space")
    for i in range(na):
        ref = partial_trace(table.cells[i][0], out_dims, 0)
        for j in range(1, nb):
            if max_abs(partial_trace(table.cells[i][j], out_dims, 0) - ref) > tol:
                raise ValueError(f"row {i}: A-marginal depends on the column index")
    for j in range(nb):
        ref = partial_trace(table.cells[0][j], out_dims, 1)
        for i in range(1, na):
            if max_abs(partial_trace(table.cells[i][j], out_dims, 1) - ref) > tol:
                raise ValueError(f"column {j}: B-marginal depends on the row index")

    g = np.zeros((d * d, na * nb), dtype=complex)
    r = np.zeros((d * d, na * nb), dtype=complex)
    for i in range(na):
        for j in range(nb):
            g[:, i * nb + j] = kron(table.basis_a[i], table.basis_b[j]).reshape(-1)
            r[:, i * nb + j] = table.cells[i][j].reshape(-1)
    s = r @ np.linalg.inv(g)
    c4 = s.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d * d, d * d)
    choi = c4 / d
    choi = (choi + dag(choi)) / 2.0
    w, _ = eig_hermitian(choi)
    lam_min = float(w[-1])
    if lam_min < -psd_tol:
        return TableBuildResult(False, None, lam_min, choi)
    ch = choi_to_kraus(ChoiState(d, d, choi), tol=psd_tol)
    bch = BipartiteChannel(ch, da, db, da, db)
    return TableBuildResult(True, bch, lam_min, choi)
