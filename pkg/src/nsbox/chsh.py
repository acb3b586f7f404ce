"""CHSH evaluation for classical boxes and for the quantum box experiment.

Measurement directions are 3-vectors whose components multiply the operator
triple (sigma_z, sigma_y, sigma_x).  In this frame the quantum box at full
strength is maximally violated by a_x = b_y = (1, 0, 0), and the planar
("xz") restriction keeps the second component zero.  The analytic optimum
formulas below are the closed forms of the same pipeline.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .boxes import ClassicalBox, QuantumBoxFamily
from .channels import apply, superoperator
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, kron, projector

OBS_AXES = (PAULI_Z, PAULI_Y, PAULI_X)

_VEC_TOL = 1e-12


@dataclass(frozen=True)
class CHSHSettings:
    """Measurement directions (unit 3-vectors) and input-state overlaps
    p^i = |<1|i>|^2 for the two preparations on each side."""

    a0: tuple[float, float, float]
    a1: tuple[float, float, float]
    b0: tuple[float, float, float]
    b1: tuple[float, float, float]
    p_a0: float
    p_a1: float
    p_b0: float
    p_b1: float

    def __post_init__(self):
        for v in (self.a0, self.a1, self.b0, self.b1):
            if abs(np.linalg.norm(v) - 1.0) > _VEC_TOL:
                raise ValueError(f"direction {v} is not unit norm")
        for p in (self.p_a0, self.p_a1, self.p_b0, self.p_b1):
            if not -1e-12 <= p <= 1 + 1e-12:
                raise ValueError("overlaps must lie in [0, 1]")


@dataclass(frozen=True)
class CHSHResult:
    value: float
    settings: CHSHSettings
    correlators: tuple[float, float, float, float]  # E00, E01, E10, E11


def observable(v) -> np.ndarray:
    return sum(float(c) * ax for c, ax in zip(v, OBS_AXES))


def overlap_state(p: float) -> np.ndarray:
    """Qubit preparation with |<1|psi>|^2 = p (real amplitudes)."""
    p = float(np.clip(p, 0.0, 1.0))
    return np.array([np.sqrt(1.0 - p), np.sqrt(p)], dtype=complex)


def chsh_box(box: ClassicalBox, sign_a=None, sign_b=None) -> float:
    """CHSH combination E00 + E01 + E10 - E11 from a binary-input box."""
    nx, ny, na, nb = box.shape
    if nx != 2 or ny != 2:
        raise ValueError("CHSH needs binary inputs on both sides")
    sign_a = sign_a or (lambda a: (-1) ** a)
    sign_b = sign_b or (lambda b: (-1) ** b)
    sa = np.array([sign_a(a) for a in range(na)], dtype=float)
    sb = np.array([sign_b(b) for b in range(nb)], dtype=float)
    e = np.einsum("xyab,a,b->xy", box.probs, sa, sb)
    return float(e[0, 0] + e[0, 1] + e[1, 0] - e[1, 1])


def chsh_experiment(family: QuantumBoxFamily, settings: CHSHSettings) -> CHSHResult:
    """Run the preparation -> box -> correlation pipeline for the settings."""
    ch = family.channel()
    obs_a = (observable(settings.a0), observable(settings.a1))
    obs_b = (observable(settings.b0), observable(settings.b1))
    p_a = (settings.p_a0, settings.p_a1)
    p_b = (settings.p_b0, settings.p_b1)
    e = np.zeros((2, 2))
    for x in range(2):
        for y in range(2):
            rho_in = kron(projector(overlap_state(p_a[x])), projector(overlap_state(p_b[y])))
            rho_out = apply(ch, rho_in)
            e[x, y] = np.trace(kron(obs_a[x], obs_b[y]) @ rho_out).real
    value = e[0, 0] + e[0, 1] + e[1, 0] - e[1, 1]
    return CHSHResult(float(value), settings, (e[0, 0], e[0, 1], e[1, 0], e[1, 1]))


def phi_opt(alpha: float) -> float:
    """Optimal planar half-angle for the coherent family."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if alpha <= 2.0 / 3.0:
        return float(np.arcsin(np.sqrt((2.0 - 3.0 * alpha) / (4.0 * (1.0 - alpha)))))
    return 0.0


def i_m_analytic(alpha: float) -> float:
    """Maximal CHSH value of the coherent family."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if alpha <= 2.0 / 3.0:
        return float(np.sqrt((2.0 - alpha) ** 3 / (1.0 - alpha)) + alpha)
    return 2.0 * (1.0 + alpha)


def i_m_prime_analytic(alpha: float) -> float:
    """Maximal CHSH value of the dephased family: 2(1 + alpha)."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    return 2.0 * (1.0 + alpha)


def optimal_settings(alpha: float) -> CHSHSettings:
    """Closed-form optimal settings of the coherent family (planar)."""
    phi = phi_opt(alpha)
    return CHSHSettings(
        a0=(np.cos(phi / 2), 0.0, np.sin(phi / 2)),
        b0=(np.cos(phi / 2), 0.0, -np.sin(phi / 2)),
        a1=(np.cos(1.5 * phi), 0.0, -np.sin(1.5 * phi)),
        b1=(np.cos(1.5 * phi), 0.0, np.sin(1.5 * phi)),
        p_a0=0.0,
        p_b0=0.0,
        p_a1=1.0,
        p_b1=1.0,
    )


def _planar(theta: float) -> tuple[float, float, float]:
    return (float(np.cos(theta)), 0.0, float(np.sin(theta)))


def _sphere(theta: float, phi: float) -> tuple[float, float, float]:
    return (
        float(np.cos(theta)),
        float(np.sin(theta) * np.sin(phi)),
        float(np.sin(theta) * np.cos(phi)),
    )


class _Pipeline:
    """Vectorized CHSH objective bound to one channel."""

    def __init__(self, family: QuantumBoxFamily):
        self.superop = superoperator(family.channel())
        # stacked two-party observables W[u, v] = w_u (x) w_v
        self.obs = np.stack(
            [np.stack([kron(wu, wv) for wv in OBS_AXES]) for wu in OBS_AXES]
        )

    def correlator_matrix(self, p1: float, p2: float) -> np.ndarray:
        """T[u, v] = Tr[(w_u (x) w_v) L[rho_in]] over the observable triple."""
        rho_in = kron(projector(overlap_state(p1)), projector(overlap_state(p2)))
        rho_out = (self.superop @ rho_in.reshape(-1)).reshape(4, 4)
        return np.einsum("uvij,ji->uv", self.obs, rho_out).real

    def value(self, vecs: list[np.ndarray], overlaps: list[float]) -> float:
        total = 0.0
        for x, y, sign in ((0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1)):
            t = self.correlator_matrix(overlaps[x], overlaps[2 + y])
            total += sign * float(vecs[x] @ t @ vecs[2 + y])
        return total


def chsh_optimize(
    family: QuantumBoxFamily,
    angle_grid: int = 24,
    full_sphere: bool = False,
) -> CHSHResult:
    """Numerically maximize I over planar angles and overlaps in [0, 1].

    Coarse stage: angle grid times overlap endpoints {0, 1}; ties break to
    the lowest grid index.  A Nelder-Mead refinement then polishes angles and
    overlaps jointly (overlaps through a smooth sin^2 squashing).  With
    ``full_sphere`` the refinement stage searches all Bloch directions.
    """
    pipe = _Pipeline(family)
    thetas = np.linspace(0.0, 2.0 * np.pi, angle_grid, endpoint=False)
    cos_t, sin_t = np.cos(thetas), np.sin(thetas)

    best = (-np.inf, None, None)
    for p_combo in itertools.product((0.0, 1.0), repeat=4):
        pa0, pa1, pb0, pb1 = p_combo
        tt = {
            (x, y): pipe.correlator_matrix((pa0, pa1)[x], (pb0, pb1)[y])[np.ix_([0, 2], [0, 2])]
            for x in range(2)
            for y in range(2)
        }

        def e_grid(t):
            ca = np.stack([cos_t, sin_t], axis=1)  # (m, 2)
            return ca @ t @ ca.T  # (m, m): rows angle_a, cols angle_b

        e00, e01 = e_grid(tt[(0, 0)]), e_grid(tt[(0, 1)])
        e10, e11 = e_grid(tt[(1, 0)]), e_grid(tt[(1, 1)])
        m = angle_grid
        grid = (
            e00[:, None, :, None]
            + e01[:, None, None, :]
            + e10[None, :, :, None]
            - e11[None, :, None, :]
        )
        idx = np.unravel_index(np.argmax(grid), (m, m, m, m))
        if grid[idx] > best[0]:
            best = (float(grid[idx]), tuple(thetas[i] for i in idx), p_combo)

    theta0 = best[1]
    p0 = best[2]

    def unsquash(p):
        return float(np.arcsin(np.sqrt(np.clip(p, 0.0, 1.0))))

    if full_sphere:
        x0 = [theta0[0], 0.0, theta0[1], 0.0, theta0[2], 0.0, theta0[3], 0.0] + [
            unsquash(p) for p in p0
        ]

        def objective(z):
            vecs = [np.array(_sphere(z[2 * i], z[2 * i + 1])) for i in range(4)]
            overlaps = [float(np.sin(t) ** 2) for t in z[8:]]
            return -pipe.value(vecs, overlaps)

    else:
        x0 = list(theta0) + [unsquash(p) for p in p0]

        def objective(z):
            vecs = [np.array(_planar(t)) for t in z[:4]]
            overlaps = [float(np.sin(t) ** 2) for t in z[4:]]
            return -pipe.value(vecs, overlaps)

    # Nelder-Mead with restarts: a fresh simplex at the previous optimum
    # escapes the flat valley near the branch point of the optimum angle.
    z = np.asarray(x0, dtype=float)
    fbest = objective(z)
    for _ in range(4):
        res = scipy.optimize.minimize(
            objective,
            z,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 8000, "maxfev": 8000},
        )
        if res.fun < fbest:
            z, improved = res.x, fbest - res.fun
            fbest = res.fun
            if improved < 1e-12:
                break
        else:
            break
    if full_sphere:
        vecs = [_sphere(z[2 * i], z[2 * i + 1]) for i in range(4)]
        overlaps = [float(np.sin(t) ** 2) for t in z[8:]]
    else:
        vecs = [_planar(t) for t in z[:4]]
        overlaps = [float(np.sin(t) ** 2) for t in z[4:]]
    settings = CHSHSettings(
        a0=vecs[0], a1=vecs[1], b0=vecs[2], b1=vecs[3],
        p_a0=overlaps[0], p_a1=overlaps[1], p_b0=overlaps[2], p_b1=overlaps[3],
    )
    return chsh_experiment(family, settings)


def sweep(alphas) -> list[dict]:
    """Analytic vs numeric CHSH maxima for both families on an alpha grid."""
    rows = []
    for alpha in alphas:
        rows.append(
            {
                "alpha": float(alpha),
                "I_coherent_analytic": i_m_analytic(alpha),
                "I_coherent_numeric": chsh_optimize(QuantumBoxFamily(alpha, True)).value,
                "I_incoherent_analytic": i_m_prime_analytic(alpha),
                "I_incoherent_numeric": chsh_optimize(QuantumBoxFamily(alpha, False)).value,
            }
        )
    return rows
