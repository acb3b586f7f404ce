"""Quantum channels in Kraus and Choi form.

The Choi state of a channel uses the trace-one convention
``C = (id (x) L)[P+]`` with the normalized maximally entangled state on
(reference, input); factor order is (input reference, output).  For a
bipartite channel the same matrix therefore carries the factor order
(A_ref, B_ref, A_out, B_out).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .linalg import (
    PAULIS,
    TOL_HERM,
    TOL_PSD,
    dag,
    eig_hermitian,
    is_hermitian,
    ket,
    kron,
    max_abs,
)

TOL_TP = 1e-9


@dataclass(frozen=True)
class Channel:
    """Completely positive trace-preserving map given by Kraus operators."""

    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.kraus:
            raise ValueError("channel needs at least one Kraus operator")
        shape = self.kraus[0].shape
        if any(k.shape != shape for k in self.kraus):
            raise ValueError("Kraus operators must share a common shape")
        if any(not np.all(np.isfinite(k)) for k in self.kraus):
            raise ValueError("Kraus operators must be finite")
        ident = sum(dag(k) @ k for k in self.kraus)
        dev = max_abs(ident - np.eye(self.d_in))
        if dev > TOL_TP:
            raise ValueError(f"not trace preserving: |sum K^d K - I| = {dev:.3e}")

    @property
    def d_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.kraus[0].shape[0]


@dataclass(frozen=True)
class BipartiteChannel:
    """A channel on A(x)B together with its tensor factorization."""

    channel: Channel
    da_in: int
    db_in: int
    da_out: int
    db_out: int

    def __post_init__(self):
        if self.da_in * self.db_in != self.channel.d_in:
            raise ValueError("input factorization inconsistent with channel")
        if self.da_out * self.db_out != self.channel.d_out:
            raise ValueError("output factorization inconsistent with channel")

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.da_in, self.db_in, self.da_out, self.db_out)


@dataclass(frozen=True)
class ChoiState:
    """Trace-one positive Choi state of a CPTP map."""

    d_in: int
    d_out: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.d_in * self.d_out,) * 2:
            raise ValueError("Choi matrix shape inconsistent with dimensions")
        if not is_hermitian(self.matrix, TOL_HERM):
            raise ValueError("Choi matrix must be Hermitian")


@dataclass(frozen=True)
class LinearMapChoi:
    """Choi matrix of a Hermitian-preserving linear map, possibly non-PSD."""

    d_in: int
    d_out: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.d_in * self.d_out,) * 2:
            raise ValueError("Choi matrix shape inconsistent with dimensions")
        if not is_hermitian(self.matrix, TOL_HERM):
            raise ValueError("Choi matrix must be Hermitian")


@dataclass(frozen=True)
class Povm:
    """Positive operator-valued measure: PSD effects summing to the identity."""

    effects: tuple[np.ndarray, ...]

    def __post_init__(self):
        d = self.effects[0].shape[0]
        for f in self.effects:
            if f.shape != (d, d):
                raise ValueError("POVM effects must be square and share a dimension")
            w, _ = eig_hermitian(f)
            if w[-1] < -TOL_PSD:
                raise ValueError(f"effect has negative eigenvalue {w[-1]:.3e}")
        dev = max_abs(sum(self.effects) - np.eye(d))
        if dev > TOL_TP:
            raise ValueError(f"effects do not sum to the identity (deviation {dev:.3e})")

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]


def apply(ch: Channel | BipartiteChannel, rho: np.ndarray) -> np.ndarray:
    """Apply the channel; linear action, also valid on non-state operators."""
    if isinstance(ch, BipartiteChannel):
        ch = ch.channel
    if rho.shape != (ch.d_in, ch.d_in):
        raise ValueError(f"input shape {rho.shape} does not match d_in={ch.d_in}")
    out = np.zeros((ch.d_out, ch.d_out), dtype=complex)
    for k in ch.kraus:
        out += k @ rho @ dag(k)
    return out


def superoperator(ch: Channel | BipartiteChannel) -> np.ndarray:
    """Matrix of the channel on row-major vectorized operators."""
    if isinstance(ch, BipartiteChannel):
        ch = ch.channel
    s = np.zeros((ch.d_out**2, ch.d_in**2), dtype=complex)
    for k in ch.kraus:
        s += np.kron(k, k.conj())
    return s


def kraus_to_choi(ch: Channel | BipartiteChannel) -> ChoiState:
    """Choi state (id (x) L)[P+], trace one, factor order (reference, output)."""
    if isinstance(ch, BipartiteChannel):
        ch = ch.channel
    d_in, d_out = ch.d_in, ch.d_out
    c = np.zeros((d_in * d_out,) * 2, dtype=complex)
    for k in ch.kraus:
        w = k.T.reshape(-1)  # w[(i, m)] = K[m, i]
        c += np.outer(w, w.conj())
    return ChoiState(d_in, d_out, c / d_in)


def choi_to_kraus(c: ChoiState | LinearMapChoi, tol: float = TOL_PSD) -> Channel:
    """Spectral Kraus decomposition of a PSD Choi matrix.

    Eigenvalues below tol in magnitude are dropped; eigenvalues below -tol
    signal the map is not completely positive and raise ValueError.
    """
    w, v = eig_hermitian(c.matrix)
    if w[-1] < -tol:
        raise ValueError(f"Choi matrix is not PSD (min eigenvalue {w[-1]:.6e}); map is not CP")
    ops = []
    for lam, vec in zip(w, v.T):
        if lam <= tol:
            continue
        wvec = np.sqrt(lam * c.d_in) * vec
        ops.append(wvec.reshape(c.d_in, c.d_out).T.copy())
    return Channel(tuple(ops))


def choi_of_bipartite(bch: BipartiteChannel) -> tuple[np.ndarray, tuple[int, int, int, int]]:
    """Choi matrix of a bipartite channel with its factor dims (A_ref, B_ref, A_out, B_out)."""
    c = kraus_to_choi(bch.channel)
    return c.matrix, (bch.da_in, bch.db_in, bch.da_out, bch.db_out)


def identity_channel(d: int) -> Channel:
    return Channel((np.eye(d, dtype=complex),))


def unitary_channel(u: np.ndarray) -> Channel:
    return Channel((np.asarray(u, dtype=complex),))


def compose(f: Channel, g: Channel) -> Channel:
    """Sequential composition f after g."""
    if g.d_out != f.d_in:
        raise ValueError(f"cannot compose: g.d_out={g.d_out} != f.d_in={f.d_in}")
    ops = tuple(kf @ kg for kf in f.kraus for kg in g.kraus)
    ch = Channel(ops)
    if len(ops) > ch.d_in * ch.d_out:
        ch = minimal_kraus(ch)
    return ch


def tensor(f: Channel, g: Channel) -> Channel:
    """Parallel composition f (x) g."""
    return Channel(tuple(np.kron(kf, kg) for kf in f.kraus for kg in g.kraus))


def mix(channels: Sequence[Channel], weights: Sequence[float]) -> Channel:
    """Convex mixture of channels with the given probabilities."""
    if abs(sum(weights) - 1.0) > 1e-12 or any(w < 0 for w in weights):
        raise ValueError("weights must be a probability vector")
    ops = []
    for ch, w in zip(channels, weights):
        if w == 0.0:
            continue
        ops.extend(np.sqrt(w) * k for k in ch.kraus)
    return Channel(tuple(ops))


def minimal_kraus(ch: Channel) -> Channel:
    """Equivalent channel with at most d_in*d_out Kraus operators."""
    return choi_to_kraus(kraus_to_choi(ch))


def depolarizing(d: int) -> Channel:
    """Totally depolarizing channel: every input goes to I/d."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    ops = tuple(
        np.outer(ket(i, d), ket(j, d)) / np.sqrt(d) for i in range(d) for j in range(d)
    )
    return Channel(ops)


def shift_clock_unitaries(d: int) -> tuple[np.ndarray, ...]:
    """The d^2 unitaries L^k F^l; their uniform conjugation mixture depolarizes.

    L|j> = |(j+1) mod d>, F|j> = exp(2 pi i j / d)|j>.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    l_op = np.zeros((d, d), dtype=complex)
    for j in range(d):
        l_op[(j + 1) % d, j] = 1.0
    f_op = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    out = []
    for k in range(d):
        for l in range(d):
            out.append(np.linalg.matrix_power(l_op, k) @ np.linalg.matrix_power(f_op, l))
    return tuple(out)


def linear_map_choi(fn: Callable[[np.ndarray], np.ndarray], d_in: int, d_out: int) -> LinearMapChoi:
    """Choi matrix of an arbitrary linear map given by its action on matrix units."""
    c = np.zeros((d_in * d_out,) * 2, dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            unit = np.outer(ket(i, d_in), ket(j, d_in))
            c += np.kron(unit, fn(unit))
    return LinearMapChoi(d_in, d_out, c / d_in)


def _pauli_xi_action(x: np.ndarray) -> np.ndarray:
    """Two-qubit map flipping the sign of all sigma_a (x) sigma_b terms, a,b != 0."""
    out = np.zeros((4, 4), dtype=complex)
    for a, sa in enumerate(PAULIS):
        for b, sb in enumerate(PAULIS):
            basis = np.kron(sa, sb)
            coeff = np.trace(basis @ x) / 4.0
            sign = -1.0 if (a != 0 and b != 0) else 1.0
            out += sign * coeff * basis
    return out


def positive_map(kind: str, d: int | None = None) -> LinearMapChoi:
    """Choi matrix of a positive-but-not-CP reference map.

    kind: "transpose" (any d), "reflection" (X -> -X, any d) or "pauli_xi"
    (two qubits, d = 4).
    """
    if kind == "transpose":
        if d is None or d < 2:
            raise ValueError("transpose map needs a dimension d >= 2")
        return linear_map_choi(lambda x: x.T.copy(), d, d)
    if kind == "reflection":
        if d is None or d < 2:
            raise ValueError("reflection map needs a dimension d >= 2")
        return linear_map_choi(lambda x: -x, d, d)
    if kind == "pauli_xi":
        if d not in (None, 4):
            raise ValueError("pauli_xi is defined for two qubits (d = 4)")
        return linear_map_choi(_pauli_xi_action, 4, 4)
    raise ValueError(f"unknown positive map kind: {kind!r}")


def max_cp_mixing(m: LinearMapChoi) -> float:
    """Largest p in [0, 1] with p*Choi(m) + (1-p)*I/D positive semidefinite.

    Closed form 1 / (1 - D*lambda_min) for lambda_min < 0, else 1 (D = d_in*d_out).
    """
    w, _ = eig_hermitian(m.matrix)
    lam_min = float(w[-1])
    if lam_min >= 0.0:
        return 1.0
    big_d = m.d_in * m.d_out
    return 1.0 / (1.0 - big_d * lam_min)


def mix_with_depolarizing(m: LinearMapChoi, p: float, tol: float = TOL_PSD) -> Channel:
    """Channel p*m + (1-p)*D from the structural mixture of Choi matrices.

    Raises ValueError if the mixture Choi is not PSD (p above threshold) or if
    the mixed map is not trace preserving (the reflection map at p > 0).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("mixing probability must lie in [0, 1]")
    big_d = m.d_in * m.d_out
    mixture = p * m.matrix + (1.0 - p) * np.eye(big_d) / big_d
    w, _ = eig_hermitian(mixture)
    if w[-1] < -tol:
        raise ValueError(f"mixture Choi not PSD at p={p}: min eigenvalue {w[-1]:.6e}")
    return choi_to_kraus(ChoiState(m.d_in, m.d_out, mixture), tol=tol)


def ebt_channel(
    povm: Povm,
    outputs: Sequence[np.ndarray],
    factor_in: tuple[int, int],
    factor_out: tuple[int, int],
) -> BipartiteChannel:
    """Entanglement-breaking channel rho -> sum_i Tr(F_i rho) sigma_i."""
    if len(povm.effects) != len(outputs):
        raise ValueError("need one output state per POVM effect")
    d_in = povm.dim
    d_out = outputs[0].shape[0]
    if any(s.shape != (d_out, d_out) for s in outputs):
        raise ValueError("output states must share a common dimension")
    ops = []
    for f, sigma in zip(povm.effects, outputs):
        fw, fv = eig_hermitian(f)
        sw, sv = eig_hermitian(sigma)
        for lam_f, phi in zip(fw, fv.T):
            if lam_f <= TOL_PSD:
                continue
            for lam_s, psi in zip(sw, sv.T):
                if lam_s <= TOL_PSD:
                    continue
                ops.append(np.sqrt(lam_f * lam_s) * np.outer(psi, phi.conj()))
    ch = Channel(tuple(ops))
    return BipartiteChannel(ch, factor_in[0], factor_in[1], factor_out[0], factor_out[1])


def random_channel(
    d_in: int, d_out: int, rng: np.random.Generator, env: int | None = None
) -> Channel:
    """Random CPTP map from a Haar-random Stinespring isometry.

    ``env`` is the environment dimension (defaults to d_out); the isometry
    needs d_out*env >= d_in.
    """
    from .linalg import haar_unitary

    k = d_out if env is None else int(env)
    total = d_out * k
    if total < d_in:
        raise ValueError("environment too small for an isometry")
    v = haar_unitary(total, rng)[:, :d_in]
    return Channel(tuple(v[e::k, :] for e in range(k)))


def channel_to_json_dict(ch: Channel | BipartiteChannel) -> dict:
    """Serializable document holding the Choi matrix (row-major [re, im] pairs)."""
    doc: dict = {}
    if isinstance(ch, BipartiteChannel):
        doc["factor_in"] = [ch.da_in, ch.db_in]
        doc["factor_out"] = [ch.da_out, ch.db_out]
        base = ch.channel
    else:
        base = ch
    c = kraus_to_choi(base)
    doc["d_in"] = c.d_in
    doc["d_out"] = c.d_out
    doc["choi"] = [[float(z.real), float(z.imag)] for z in c.matrix.reshape(-1)]
    return doc


def channel_from_json_dict(doc: dict, tol: float = TOL_PSD) -> Channel | BipartiteChannel:
    """Rebuild a channel from the JSON document; raises on a non-PSD Choi."""
    try:
        d_in = int(doc["d_in"])
        d_out = int(doc["d_out"])
        entries = doc["choi"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed channel document: {exc}") from exc
    n = d_in * d_out
    if len(entries) != n * n:
        raise ValueError(f"choi length {len(entries)} does not match dims {d_in}x{d_out}")
    flat = np.array([complex(re, im) for re, im in entries])
    matrix = flat.reshape(n, n)
    ch = choi_to_kraus(ChoiState(d_in, d_out, matrix), tol=tol)
    if "factor_in" in doc or "factor_out" in doc:
        fa, fb = (int(x) for x in doc["factor_in"])
        ga, gb = (int(x) for x in doc["factor_out"])
        return BipartiteChannel(ch, fa, fb, ga, gb)
    return ch
