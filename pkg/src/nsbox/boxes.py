"""Classical non-signalling boxes and their quantum counterparts.

The quantum box families act on two qubits (inputs x, y prepared as
computational basis states) and output a two-qudit state; measuring the
output in the computational product basis recovers the classical box.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .channels import BipartiteChannel, Povm, apply, ebt_channel
from .linalg import dag, ket, kron, max_entangled, partial_trace, projector

BOX_TOL = 1e-12

PSI_0 = max_entangled(2)  # (|00> + |11>)/sqrt(2)
PSI_1 = np.kron(np.eye(2), np.array([[0, 1], [1, 0]])) @ PSI_0  # (|01> + |10>)/sqrt(2)


@dataclass(frozen=True)
class ClassicalBox:
    """Conditional probability tensor p(a,b|x,y), stored as probs[x,y,a,b]."""

    probs: np.ndarray

    def __post_init__(self):
        p = self.probs
        if p.ndim != 4:
            raise ValueError("probability tensor must have shape (nX, nY, nA, nB)")
        if np.any(p < -BOX_TOL) or np.any(p > 1 + BOX_TOL):
            raise ValueError("probabilities must lie in [0, 1]")
        totals = p.sum(axis=(2, 3))
        if np.max(np.abs(totals - 1.0)) > BOX_TOL:
            raise ValueError("outcome distributions must be normalized for every input pair")

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return self.probs.shape


@dataclass(frozen=True)
class QuantumBoxFamily:
    """One-parameter quantum box: coherent (pure Bell outputs) or dephased."""

    alpha: float
    coherent: bool = True
    k: int = 2

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.k < 2:
            raise ValueError("output alphabet must be >= 2")

    def channel(self) -> BipartiteChannel:
        if self.k != 2:
            raise ValueError("the one-parameter families are defined for k = 2")
        return lambda_alpha(self.alpha) if self.coherent else lambda_alpha_prime(self.alpha)


def is_nonsignalling_box(box: ClassicalBox, tol: float = BOX_TOL) -> bool:
    """Marginal of a independent of y, marginal of b independent of x."""
    p = box.probs
    pa = p.sum(axis=3)  # [x, y, a]
    pb = p.sum(axis=2)  # [x, y, b]
    dev_a = np.max(np.abs(pa - pa[:, :1, :]))
    dev_b = np.max(np.abs(pb - pb[:1, :, :]))
    return bool(max(dev_a, dev_b) <= tol)


def pr_extreme(k: int, da: int | None = None, db: int | None = None) -> ClassicalBox:
    """Extremal non-local box: p(a,b|x,y) = 1/k iff (b-a) mod k = x*y, a,b < k."""
    da = k if da is None else da
    db = k if db is None else db
    if not 2 <= k <= min(da, db):
        raise ValueError(f"need 2 <= k <= min(dA, dB), got k={k}, dA={da}, dB={db}")
    p = np.zeros((2, 2, da, db))
    for x in range(2):
        for y in range(2):
            for a in range(k):
                p[x, y, a, (a + x * y) % k] = 1.0 / k
    return ClassicalBox(p)


def shift_perm(k: int) -> np.ndarray:
    """Cyclic shift Sigma|b> = |(b+1) mod k>."""
    s = np.zeros((k, k), dtype=complex)
    for b in range(k):
        s[(b + 1) % k, b] = 1.0
    return s


def lambda_k(k: int) -> BipartiteChannel:
    """Quantum non-local box on 2(x)2 -> k(x)k.

    Measure-and-prepare form: the input is tested against |11>, and the
    output is the maximally entangled k-level pair, shifted on Bob's side
    when the test fires.
    """
    if k < 2:
        raise ValueError("output alphabet must be >= 2")
    p11 = projector(np.kron(ket(1, 2), ket(1, 2)))
    povm = Povm((np.eye(4) - p11, p11))
    plus = projector(max_entangled(k))
    shift = np.kron(np.eye(k), shift_perm(k))
    outputs = (plus, shift @ plus @ dag(shift))
    return ebt_channel(povm, outputs, (2, 2), (k, k))


def lambda_k_dilation(k: int) -> BipartiteChannel:
    """Independent realization of lambda_k: unitary on (a, b, x, y) adding
    x*y into b modulo k, acting on a shared maximally entangled ancilla,
    then discarding the inputs."""
    if k < 2:
        raise ValueError("output alphabet must be >= 2")
    d_anc = k * k
    dims = (k, k, 2, 2)
    u = np.zeros((d_anc * 4, d_anc * 4), dtype=complex)
    for a in range(k):
        for b in range(k):
            for x in range(2):
                for y in range(2):
                    src = ((a * k + b) * 2 + x) * 2 + y
                    dst = ((a * k + ((b + x * y) % k)) * 2 + x) * 2 + y
                    u[dst, src] = 1.0
    anc = projector(max_entangled(k))

    def act(rho_in: np.ndarray) -> np.ndarray:
        full = kron(anc, rho_in)
        return partial_trace(u @ full @ dag(u), dims, keep=(0, 1))

    from .channels import ChoiState, choi_to_kraus

    d_in, d_out = 4, k * k
    c = np.zeros((d_in * d_out,) * 2, dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            unit = np.outer(ket(i, d_in), ket(j, d_in))
            c += np.kron(unit, act(unit))
    ch = choi_to_kraus(ChoiState(d_in, d_out, c / d_in))
    return BipartiteChannel(ch, 2, 2, k, k)


def lambda_alpha(alpha: float) -> BipartiteChannel:
    """Coherent one-parameter box: rho -> (1-ap)|psi0><psi0| + ap|psi1><psi1|
    with p = <11|rho|11>."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    p11 = projector(np.kron(ket(1, 2), ket(1, 2)))
    povm = Povm((np.eye(4) - p11, p11))
    proj0, proj1 = projector(PSI_0), projector(PSI_1)
    outputs = (proj0, (1.0 - alpha) * proj0 + alpha * proj1)
    return ebt_channel(povm, outputs, (2, 2), (2, 2))


def lambda_alpha_prime(alpha: float) -> BipartiteChannel:
    """Dephased one-parameter box: the two Bell outputs are replaced by the
    corresponding computational-basis mixtures."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    p11 = projector(np.kron(ket(1, 2), ket(1, 2)))
    povm = Povm((np.eye(4) - p11, p11))
    xi0 = (projector(np.kron(ket(0, 2), ket(0, 2))) + projector(np.kron(ket(1, 2), ket(1, 2)))) / 2
    xi1 = (projector(np.kron(ket(0, 2), ket(1, 2))) + projector(np.kron(ket(1, 2), ket(0, 2)))) / 2
    outputs = (xi0, (1.0 - alpha) * xi0 + alpha * xi1)
    return ebt_channel(povm, outputs, (2, 2), (2, 2))


def lambda_nl() -> BipartiteChannel:
    """The coherent quantum non-local box (alpha = 1, k = 2)."""
    return lambda_alpha(1.0)


def lambda_nl_prime() -> BipartiteChannel:
    """The dephased quantum non-local box (alpha = 1, k = 2)."""
    return lambda_alpha_prime(1.0)


def measure_box(bch: BipartiteChannel) -> ClassicalBox:
    """Classical box induced by computational-basis preparation and readout."""
    if bch.da_in != 2 or bch.db_in != 2:
        raise ValueError("measured boxes take binary inputs (qubit input factors)")
    ka, kb = bch.da_out, bch.db_out
    p = np.zeros((2, 2, ka, kb))
    for x in range(2):
        for y in range(2):
            rho_in = projector(np.kron(ket(x, 2), ket(y, 2)))
            out = apply(bch, rho_in)
            p[x, y] = np.diag(out).real.reshape(ka, kb)
    p = np.clip(p, 0.0, 1.0)
    return ClassicalBox(p)


def box_to_csv(box: ClassicalBox) -> str:
    """CSV document with header x,y,a,b,p and 17-significant-digit entries."""
    buf = io.StringIO()
    buf.write("x,y,a,b,p\n")
    nx, ny, na, nb = box.shape
    for x in range(nx):
        for y in range(ny):
            for a in range(na):
                for b in range(nb):
                    buf.write(f"{x},{y},{a},{b},{box.probs[x, y, a, b]:.17g}\n")
    return buf.getvalue()


def box_from_csv(text: str) -> ClassicalBox:
    rows = []
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "x,y,a,b,p":
        raise ValueError("expected header x,y,a,b,p")
    for ln in lines[1:]:
        x, y, a, b, p = ln.split(",")
        rows.append((int(x), int(y), int(a), int(b), float(p)))
    nx = max(r[0] for r in rows) + 1
    ny = max(r[1] for r in rows) + 1
    na = max(r[2] for r in rows) + 1
    nb = max(r[3] for r in rows) + 1
    probs = np.zeros((nx, ny, na, nb))
    for x, y, a, b, p in rows:
        probs[x, y, a, b] = p
    return ClassicalBox(probs)
