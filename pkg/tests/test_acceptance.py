"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line.  Tolerances are fixed here and are not calibration knobs.

Run with `pytest tests/test_acceptance.py -v -s` to see the report lines.
"""

import time

import numpy as np
import pytest

from nsbox import boxes as bx
from nsbox import causality as cz
from nsbox import channels as qc
from nsbox import chsh
from nsbox import entpower as ep
from nsbox import linalg as la
from nsbox import vandam as vd
from nsbox.boxes import QuantumBoxFamily

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def _report(tag: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {tag}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def conj2(u):
    return qc.BipartiteChannel(qc.unitary_channel(u), 2, 2, 2, 2)


def random_causal_ebt(rng):
    alpha = float(rng.uniform(0.0, 1.0))
    base = bx.lambda_alpha(alpha)
    pre = qc.unitary_channel(np.kron(la.haar_unitary(2, rng), la.haar_unitary(2, rng)))
    post = qc.unitary_channel(np.kron(la.haar_unitary(2, rng), la.haar_unitary(2, rng)))
    return qc.BipartiteChannel(qc.compose(post, qc.compose(base.channel, pre)), 2, 2, 2, 2)


def random_a_to_b_semicausal(rng, m=2):
    gs = []
    for _ in range(m):
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        gs.append(g @ g.conj().T)
    total = sum(gs)
    w, v = np.linalg.eigh(total)
    inv_sqrt = v @ np.diag(w**-0.5) @ v.conj().T
    effects = tuple(np.kron(np.eye(2), inv_sqrt @ g @ inv_sqrt) for g in gs)
    outs = tuple(la.random_density(4, rng) for _ in range(m))
    return qc.ebt_channel(qc.Povm(effects), outs, (2, 2), (2, 2))


def test_criterion_1_structural_approximation_thresholds():
    start = time.monotonic()
    expected = {"transpose": 1.0 / 5.0, "reflection": 1.0 / 17.0, "pauli_xi": 1.0 / 3.0}
    for kind, target in expected.items():
        lm = qc.positive_map(kind, 4 if kind != "pauli_xi" else None)
        p_max = qc.max_cp_mixing(lm)
        assert abs(p_max - target) < 1e-15, (kind, p_max)
        big_d = lm.d_in * lm.d_out
        over = (p_max + 1e-6) * lm.matrix + (1 - p_max - 1e-6) * np.eye(big_d) / big_d
        assert not la.is_psd(over, tol=1e-9), kind
    elapsed = time.monotonic() - start
    _report(
        "criterion 1: structural thresholds 1/5, 1/17, 1/3 exact; over-threshold Choi not PSD",
        elapsed < 1.0,
        f"{elapsed:.3f}s",
    )


def test_criterion_2_full_box_maximum_at_paper_settings():
    s = chsh.CHSHSettings((1, 0, 0), (1, 0, 0), (1, 0, 0), (1, 0, 0), 0.0, 1.0, 0.0, 1.0)
    r = chsh.chsh_experiment(QuantumBoxFamily(1.0, True), s)
    _report(
        "criterion 2: coherent box at full strength reaches I = 4 at a=b=(1,0,0)",
        abs(r.value - 4.0) < 1e-12,
        f"I = {r.value!r}",
    )


def test_criterion_3_numeric_optimizer_matches_analytic():
    start = time.monotonic()
    worst = 0.0
    for alpha in np.linspace(0.0, 1.0, 21):
        rc = chsh.chsh_optimize(QuantumBoxFamily(float(alpha), True))
        ri = chsh.chsh_optimize(QuantumBoxFamily(float(alpha), False))
        worst = max(
            worst,
            abs(rc.value - chsh.i_m_analytic(float(alpha))),
            abs(ri.value - chsh.i_m_prime_analytic(float(alpha))),
        )
    a = 2.0 / 3.0
    left = np.sqrt((2.0 - a) ** 3 / (1.0 - a)) + a
    right = 2.0 * (1.0 + a)
    elapsed = time.monotonic() - start
    ok = worst < 1e-6 and abs(left - 10.0 / 3.0) < 1e-12 and abs(right - 10.0 / 3.0) < 1e-12
    _report(
        "criterion 3: optimizer within 1e-6 of analytic on 21-point grid (both families)",
        ok and elapsed < 30.0,
        f"worst {worst:.2e}, branch values {left:.12f}/{right:.12f}, {elapsed:.1f}s",
    )


def test_criterion_4_tsirelson_endpoint_and_dominance():
    ok = abs(chsh.i_m_analytic(0.0) - 2.0 * np.sqrt(2.0)) < 1e-12
    for alpha in np.linspace(0.0, 1.0, 21):
        gap = chsh.i_m_analytic(float(alpha)) - chsh.i_m_prime_analytic(float(alpha))
        if alpha < 2.0 / 3.0 - 1e-12:
            ok = ok and gap > 1e-9
        else:
            ok = ok and abs(gap) < 1e-9
    _report(
        "criterion 4: I_M(0) = 2*sqrt(2); coherent >= dephased with equality on [2/3, 1]",
        ok,
    )


def test_criterion_5a_entangling_power_limit_at_tiny_alpha():
    # The exact small-alpha expansion is
    #   E_pow(alpha) = 1 + (alpha/4) log2(alpha) - alpha/(2 ln 2) + O(alpha^2),
    # so 1 - E_pow(1e-6) = 5.70e-6 and this bound cannot be met by a correct
    # evaluation; the tolerance is kept as stated rather than loosened.
    value, _ = ep.e_pow_quadrature(1e-6)
    _report(
        "criterion 5a: E_pow within 1e-6 of 1 at alpha = 1e-6",
        abs(value - 1.0) < 1e-6,
        f"E_pow(1e-6) = {value!r}, deviation {abs(value - 1.0):.3e}",
    )


def test_criterion_5b_quadrature_vs_monte_carlo():
    start = time.monotonic()
    rng = np.random.default_rng(20240917)
    ok = True
    detail = []
    for alpha in (0.25, 0.5, 1.0):
        q, _ = ep.e_pow_quadrature(alpha)
        m, s = ep.e_pow_monte_carlo(alpha, 10**6, rng)
        ok = ok and abs(q - m) < 3.0 * s
        detail.append(f"a={alpha}: |q-m|={abs(q - m):.2e} vs 3s={3 * s:.2e}")
    elapsed = time.monotonic() - start
    _report(
        "criterion 5b: quadrature agrees with 1e6-sample Monte Carlo within 3 stderr",
        ok and elapsed < 60.0,
        "; ".join(detail),
    )


def test_criterion_5c_monotone_curve_and_tradeoff_ordering():
    values = [ep.e_pow_quadrature(float(a))[0] for a in np.linspace(0.0, 1.0, 21)]
    decreasing = all(x > y for x, y in zip(values, values[1:]))
    pts = ep.tradeoff_curve(np.linspace(0.0, 1.0, 21))
    inverse = all(q.i_m > p.i_m and q.e_pow < p.e_pow for p, q in zip(pts, pts[1:]))
    _report(
        "criterion 5c: E_pow strictly decreasing; (I_M, E_pow) strictly inversely ordered",
        decreasing and inverse,
    )


def test_criterion_6_causality_checker():
    start = time.monotonic()
    rng = np.random.default_rng(6)

    for alpha in np.linspace(0.0, 1.0, 11):
        assert cz.is_causal(bx.lambda_alpha(float(alpha))).causal, alpha
        assert cz.is_causal(bx.lambda_alpha_prime(float(alpha))).causal, alpha
    assert cz.is_causal(qc.BipartiteChannel(qc.depolarizing(4), 2, 2, 2, 2)).causal

    for u, direction in ((CNOT, cz.A_TO_B), (SWAP, cz.B_TO_A)):
        assert not cz.is_causal(conj2(u)).causal
        w = cz.signalling_witness(conj2(u), direction)
        la.check_pure_state(w.input_a)
        la.check_pure_state(w.input_b)
        assert w.distinguishability > 1e-3

    for _ in range(100):
        u = la.haar_unitary(4, rng)
        assert cz.unitary_form(u, 2, 2).kind == "entangling"
        assert not cz.is_causal(conj2(u)).causal
    for _ in range(20):
        u = np.kron(la.haar_unitary(2, rng), la.haar_unitary(2, rng))
        assert cz.unitary_form(u, 2, 2).kind == "product"
        assert cz.is_causal(conj2(u)).causal

    agree = True
    for i in range(50):
        if i % 3 == 0:
            bch = random_a_to_b_semicausal(rng)
        else:
            bch = qc.BipartiteChannel(qc.random_channel(4, 4, rng), 2, 2, 2, 2)
        choi_ok, _ = cz.is_semicausal_a_to_b(bch, 1e-7)
        sup_ok, _ = cz.semicausal_superop_criterion(bch, cz.A_TO_B, 1e-7)
        probe_ok = cz.definitional_semicausality_probe(bch, cz.A_TO_B, 200, rng) <= 1e-7
        agree = agree and (choi_ok == sup_ok == probe_ok)
    elapsed = time.monotonic() - start
    _report(
        "criterion 6: checker verdicts, witnesses, unitary survey, criterion agreement",
        agree and elapsed < 120.0,
        f"{elapsed:.1f}s",
    )


def test_criterion_7_mixture_signalling_and_semigroup():
    rng = np.random.default_rng(7)
    ok = True
    for _ in range(20):
        u = la.haar_unitary(4, rng)
        causal_ch = random_causal_ebt(rng)
        for p in (0.01, 0.1, 0.5):
            mixed = qc.mix([qc.unitary_channel(u), causal_ch.channel], [p, 1 - p])
            ok = ok and not cz.is_causal(qc.BipartiteChannel(mixed, 2, 2, 2, 2)).causal
    for _ in range(20):
        ch1 = random_a_to_b_semicausal(rng)
        ch2 = random_a_to_b_semicausal(rng)
        comp = qc.BipartiteChannel(qc.compose(ch1.channel, ch2.channel), 2, 2, 2, 2)
        sc, _ = cz.is_semicausal_a_to_b(comp)
        ok = ok and sc
    _report(
        "criterion 7: signalling admixture breaks causality; composition keeps semicausality",
        ok,
    )


def test_criterion_8_quantum_box_reproduces_classical_extremal():
    ok = True
    for k in (2, 3):
        measured = bx.measure_box(bx.lambda_k(k))
        ok = ok and la.max_abs(measured.probs - bx.pr_extreme(k).probs) < 1e-12
        box = bx.pr_extreme(k)
        ok = ok and bx.is_nonsignalling_box(box, tol=1e-12)
        ok = ok and np.allclose(box.probs.sum(axis=3), 1.0 / k, atol=1e-12)
        ok = ok and np.allclose(box.probs.sum(axis=2), 1.0 / k, atol=1e-12)
    _report(
        "criterion 8: measured quantum box equals extremal classical box (k = 2, 3)",
        ok,
    )


def test_criterion_9_semilocalization_reconstruction():
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(5):
        u = np.kron(la.haar_unitary(2, rng), la.haar_unitary(2, rng))
        worst = max(worst, cz.semilocalize(conj2(u)).reconstruction_error)
    worst = max(worst, cz.semilocalize(bx.lambda_nl_prime()).reconstruction_error)
    for _ in range(20):
        worst = max(worst, cz.semilocalize(random_causal_ebt(rng)).reconstruction_error)
    _report(
        "criterion 9: semilocalization reconstruction error < 1e-8 on all instances",
        worst < 1e-8,
        f"worst {worst:.2e}",
    )


def test_criterion_10_van_dam_protocols():
    start = time.monotonic()
    ok = True
    f = vd.BooleanFunction.inner_product(4)
    for seed in range(10):
        rng = np.random.default_rng(seed)
        for x in range(16):
            for y in range(16):
                net = vd.PrBoxNet(4, rng)
                result, transcript = vd.inner_product_protocol(x, y, net)
                ok = ok and result == f.value(x, y)
                ok = ok and transcript.bits_sent == 1 and net.boxes_used == 4
    for k in range(10):
        g = vd.BooleanFunction.random(3, 3, np.random.default_rng(1000 + k))
        for seed in range(5):
            rng = np.random.default_rng(seed)
            for x in range(8):
                for y in range(8):
                    result, transcript = vd.general_protocol(g, x, y, rng)
                    ok = ok and result == g.value(x, y) and transcript.bits_sent == 1
    elapsed = time.monotonic() - start
    _report(
        "criterion 10: inner-product and general protocols exact with one bit sent",
        ok and elapsed < 30.0,
        f"{elapsed:.1f}s",
    )


def test_criterion_11_assignment_table_round_trip():
    bch = bx.lambda_nl()
    result = cz.channel_from_table(cz.table_from_channel(bch))
    ok = result.cp
    rng = np.random.default_rng(11)
    for _ in range(10):
        rho = la.random_density(4, rng)
        ok = ok and la.max_abs(qc.apply(result.channel, rho) - qc.apply(bch, rho)) < 1e-10

    table = cz.table_from_channel(qc.BipartiteChannel(qc.depolarizing(4), 2, 2, 2, 2))
    werner = 0.5 * la.projector(bx.PSI_0) + 0.5 * np.eye(4) / 4
    cells = [list(row) for row in table.cells]
    cells[0][0] = werner
    rebuilt = cz.channel_from_table(
        cz.AssignmentTable(table.basis_a, table.basis_b, tuple(tuple(r) for r in cells))
    )
    ok = ok and rebuilt.cp and cz.is_causal(rebuilt.channel).causal
    _report(
        "criterion 11: table round trip reproduces the box; consistent entangled cells stay causal",
        ok,
    )
