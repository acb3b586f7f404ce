"""Distributed boolean-function evaluation from PR boxes plus one bit.

Alice holds x, Bob holds y.  Each PR box takes one input bit from each
party and returns locally uniform bits a, b with a xor b = x*y.  Box uses
are not communication; the single classical bit Alice sends is.  The party
boundary is structural: Alice's computation sees only x and her box
outputs, Bob's only y, his box outputs and the received bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


def pr_sample(x: int, y: int, rng: np.random.Generator) -> tuple[int, int]:
    """One PR box use: a uniform, a xor b = x*y exactly."""
    if x not in (0, 1) or y not in (0, 1):
        raise ValueError("PR box inputs are bits")
    a = int(rng.integers(0, 2))
    return a, a ^ (x & y)


@dataclass
class PrBoxNet:
    """A bank of PR boxes drawing fresh randomness from one stream."""

    n_boxes: int
    rng: np.random.Generator
    _used: int = field(default=0, repr=False)

    def sample(self, x: int, y: int) -> tuple[int, int]:
        if self._used >= self.n_boxes:
            raise ValueError(f"all {self.n_boxes} boxes already used")
        self._used += 1
        return pr_sample(x, y, self.rng)

    @property
    def boxes_used(self) -> int:
        return self._used


@dataclass(frozen=True)
class Transcript:
    """Communication record: every bit that crossed the party boundary."""

    log: tuple[tuple[str, int], ...]

    @property
    def bits_sent(self) -> int:
        return len(self.log)


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table over (x, y) in {0,1}^nx x {0,1}^ny, 1-bit output.

    Bit strings are encoded as integers with bit i of the integer holding
    input bit i; table[x, y] is the function value.
    """

    nx: int
    ny: int
    table: np.ndarray

    def __post_init__(self):
        if self.table.shape != (1 << self.nx, 1 << self.ny):
            raise ValueError("table shape must be (2^nx, 2^ny)")
        if not np.all((self.table == 0) | (self.table == 1)):
            raise ValueError("table entries must be bits")

    @classmethod
    def inner_product(cls, n: int) -> "BooleanFunction":
        xs = np.arange(1 << n)
        tab = np.zeros((1 << n, 1 << n), dtype=np.uint8)
        for x in xs:
            for y in xs:
                tab[x, y] = bin(x & y).count("1") & 1
        return cls(n, n, tab)

    @classmethod
    def random(cls, nx: int, ny: int, rng: np.random.Generator) -> "BooleanFunction":
        return cls(nx, ny, rng.integers(0, 2, size=(1 << nx, 1 << ny)).astype(np.uint8))

    def value(self, x: int, y: int) -> int:
        return int(self.table[x, y])


def _monomial(mask: int, bits: int) -> int:
    """AND of the input bits selected by mask (empty mask = constant 1)."""
    return int((bits & mask) == mask)


def gf2_decompose(f: BooleanFunction) -> tuple[tuple[int, int], ...]:
    """Algebraic normal form split into (x-monomial, y-monomial) mask pairs.

    f(x, y) = XOR over pairs of u(x) * v(y); computed by the Moebius
    transform on the (nx + ny)-bit cube.
    """
    n = f.nx + f.ny
    coeffs = np.zeros(1 << n, dtype=np.uint8)
    for z in range(1 << n):
        coeffs[z] = f.value(z & ((1 << f.nx) - 1), z >> f.nx)
    for i in range(n):
        bit = 1 << i
        for z in range(1 << n):
            if z & bit:
                coeffs[z] ^= coeffs[z ^ bit]
    pairs = []
    for z in range(1 << n):
        if coeffs[z]:
            pairs.append((z & ((1 << f.nx) - 1), z >> f.nx))
    return tuple(pairs)


def inner_product_protocol(
    x: Sequence[int] | int, y: Sequence[int] | int, net: PrBoxNet
) -> tuple[int, Transcript]:
    """Compute XOR_i x_i y_i with net.n_boxes boxes and one bit from Alice."""
    n = net.n_boxes
    xi = _as_bits(x, n)
    yi = _as_bits(y, n)
    outs = [net.sample(xi[i], yi[i]) for i in range(n)]
    alice_parity = 0
    for a, _ in outs:
        alice_parity ^= a  # Alice sees only x and the a_i
    transcript = Transcript((("A", alice_parity),))
    bob_parity = 0
    for _, b in outs:
        bob_parity ^= b  # Bob sees only y, the b_i and the received bit
    return bob_parity ^ alice_parity, transcript


def general_protocol(
    f: BooleanFunction, x: int, y: int, rng: np.random.Generator
) -> tuple[int, Transcript]:
    """Evaluate any 1-bit function with one PR box per ANF monomial pair
    and a single bit of communication from Alice."""
    pairs = gf2_decompose(f)
    net = PrBoxNet(len(pairs), rng)
    outs = [net.sample(_monomial(u, x), _monomial(v, y)) for u, v in pairs]
    alice_parity = 0
    for a, _ in outs:
        alice_parity ^= a
    transcript = Transcript((("A", alice_parity),))
    bob_parity = 0
    for _, b in outs:
        bob_parity ^= b
    return bob_parity ^ alice_parity, transcript


def naive_cost(f: BooleanFunction) -> int:
    """Trivial upper bound on classical one-way communication: Alice sends
    all of x, unless the function does not depend on x at all (cost 0).

    This is an upper bound, not the exact deterministic complexity.
    """
    if np.all(f.table == f.table[0:1, :]):
        return 0
    return f.nx


def _as_bits(v: Sequence[int] | int, n: int) -> list[int]:
    if isinstance(v, (int, np.integer)):
        return [(int(v) >> i) & 1 for i in range(n)]
    bits = [int(b) for b in v]
    if len(bits) != n or any(b not in (0, 1) for b in bits):
        raise ValueError(f"need {n} bits")
    return bits


def bits_to_int(bits: Sequence[int]) -> int:
    return sum((int(b) & 1) << i for i, b in enumerate(bits))
