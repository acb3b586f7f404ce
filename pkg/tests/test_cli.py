"""Tests for the command-line surface: schemas, determinism, exit codes."""

import json

import numpy as np
import pytest

from nsbox import boxes as bx
from nsbox import channels as qc
from nsbox import chsh
from nsbox import linalg as la
from nsbox.cli import run

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def write_channel(tmp_path, bch, name="ch.json"):
    path = tmp_path / name
    path.write_text(json.dumps(qc.channel_to_json_dict(bch)))
    return str(path)


def cnot_channel(tmp_path):
    return write_channel(tmp_path, qc.BipartiteChannel(qc.unitary_channel(CNOT), 2, 2, 2, 2))


class TestSpa:
    def test_transpose_threshold(self, capsys):
        assert run(["spa", "--map", "transpose", "--d", "4"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["p_max"] == 0.2
        assert abs(doc["choi_min_eigenvalue"] + 0.25) < 1e-12

    def test_reflection_threshold(self, capsys):
        assert run(["spa", "--map", "reflection", "--d", "4"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert abs(doc["p_max"] - 1.0 / 17.0) < 1e-15

    def test_pauli_xi(self, capsys):
        assert run(["spa", "--map", "pauli_xi"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert abs(doc["p_max"] - 1.0 / 3.0) < 1e-15
        assert abs(doc["choi_min_eigenvalue"] + 0.125) < 1e-12

    def test_missing_dimension_is_domain_error(self, capsys):
        assert run(["spa", "--map", "transpose"]) == 1


class TestCheck:
    def test_cnot_verdict_with_witness(self, tmp_path, capsys):
        assert run(["check", "--channel", cnot_channel(tmp_path)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["causal"] is False
        assert doc["semicausal_ab"] is False
        w = doc["witness"]
        assert w["direction"] == "AtoB"
        assert w["distinguishability"] > 0.9
        amp = np.array([complex(re, im) for re, im in w["input_a"]])
        assert abs(np.vdot(amp, amp).real - 1.0) < 1e-9

    def test_causal_channel_has_no_witness(self, tmp_path, capsys):
        path = write_channel(tmp_path, bx.lambda_nl())
        assert run(["check", "--channel", path]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["causal"] is True
        assert "witness" not in doc
        assert doc["residual_ab"] < 1e-9 and doc["residual_ba"] < 1e-9

    def test_missing_file_is_domain_error(self, capsys):
        assert run(["check", "--channel", "/nonexistent.json"]) == 1
        assert "error" in capsys.readouterr().err

    def test_malformed_json_is_domain_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run(["check", "--channel", str(path)]) == 1

    def test_non_psd_choi_is_domain_error(self, tmp_path, capsys):
        n = 16
        flat = [[0.0, 0.0]] * (n * n)
        doc = {"d_in": 4, "d_out": 4, "factor_in": [2, 2], "factor_out": [2, 2], "choi": flat}
        # diagonal with a negative entry
        for i in range(n):
            doc["choi"][i * n + i] = [1.0 / 16.0, 0.0]
        doc["choi"][0] = [-0.5, 0.0]
        path = tmp_path / "npsd.json"
        path.write_text(json.dumps(doc))
        assert run(["check", "--channel", str(path)]) == 1

    def test_plain_channel_rejected(self, tmp_path, capsys):
        path = tmp_path / "plain.json"
        path.write_text(json.dumps(qc.channel_to_json_dict(qc.identity_channel(4))))
        assert run(["check", "--channel", str(path)]) == 1


class TestReduceAndSemilocalize:
    def test_reduce_depolarizing(self, tmp_path, capsys):
        path = write_channel(tmp_path, qc.BipartiteChannel(qc.depolarizing(4), 2, 2, 2, 2))
        assert run(["reduce", "--channel", path, "--side", "A"]) == 0
        doc = json.loads(capsys.readouterr().out)
        red = qc.channel_from_json_dict(doc)
        rho = la.random_density(2, np.random.default_rng(0))
        assert la.max_abs(qc.apply(red, rho) - np.eye(2) / 2) < 1e-10

    def test_reduce_requires_semicausality(self, tmp_path, capsys):
        assert run(["reduce", "--channel", cnot_channel(tmp_path), "--side", "A"]) == 1

    def test_semilocalize_happy_path(self, tmp_path, capsys):
        path = write_channel(tmp_path, bx.lambda_nl_prime())
        assert run(["semilocalize", "--channel", path]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["reconstruction_error"] < 1e-8
        assert doc["d_e"] >= 1 and doc["d_c"] >= doc["d_e"]

    def test_semilocalize_signalling_is_domain_error(self, tmp_path):
        assert run(["semilocalize", "--channel", cnot_channel(tmp_path)]) == 1


class TestBoxCommand:
    def test_pr_csv_schema(self, capsys):
        assert run(["box", "--k", "2"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "x,y,a,b,p"
        assert len(lines) == 1 + 16
        box = bx.box_from_csv("\n".join(lines))
        assert la.max_abs(box.probs - bx.pr_extreme(2).probs) == 0.0

    def test_measured_quantum_box_matches(self, capsys):
        assert run(["box", "--k", "3", "--measure"]) == 0
        box = bx.box_from_csv(capsys.readouterr().out)
        assert la.max_abs(box.probs - bx.pr_extreme(3).probs) < 1e-12


class TestSweeps:
    def test_chsh_sweep_numeric_matches_analytic(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run(["chsh-sweep", "--steps", "5", "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "alpha,I_coherent_analytic,I_coherent_numeric,I_incoherent_analytic,I_incoherent_numeric"
        assert len(lines) == 6
        for ln in lines[1:]:
            alpha, ca, cn, ia, inum = map(float, ln.split(","))
            assert abs(ca - cn) < 1e-6
            assert abs(ia - inum) < 1e-6
            assert abs(ca - chsh.i_m_analytic(alpha)) < 1e-12

    def test_entpower_sweep_schema(self, tmp_path):
        out = tmp_path / "ep.csv"
        assert run(["entpower-sweep", "--steps", "5", "--nodes", "32", "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "alpha,e_pow,err_estimate"
        values = [float(ln.split(",")[1]) for ln in lines[1:]]
        assert values[0] == 1.0
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_tradeoff_schema(self, tmp_path):
        out = tmp_path / "t.csv"
        assert run(["tradeoff", "--steps", "5", "--nodes", "32", "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "alpha,i_m,e_pow,err_estimate"
        rows = [tuple(map(float, ln.split(","))) for ln in lines[1:]]
        assert all(b[1] > a[1] and b[2] < a[2] for a, b in zip(rows, rows[1:]))


class TestVandamCommand:
    def test_inner_product_demo(self, capsys):
        assert run(["vandam", "--fn", "ip", "--n", "4", "--trials", "100", "--seed", "3"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc == {
            "f": "inner_product",
            "n": 4,
            "boxes_used": 4,
            "bits_sent": 1,
            "trials": 100,
            "errors": 0,
            "seed": 3,
        }

    def test_deterministic_given_seed(self, capsys):
        assert run(["vandam", "--fn", "rand", "--n", "3", "--trials", "50", "--seed", "11"]) == 0
        first = capsys.readouterr().out
        assert run(["vandam", "--fn", "rand", "--n", "3", "--trials", "50", "--seed", "11"]) == 0
        assert capsys.readouterr().out == first
        doc = json.loads(first)
        assert doc["errors"] == 0 and doc["bits_sent"] == 1


class TestUsageErrors:
    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            run(["frobnicate"])
        assert exc.value.code == 2

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as exc:
            run(["spa", "--map", "transpose", "--bogus", "1"])
        assert exc.value.code == 2

    def test_missing_required(self):
        with pytest.raises(SystemExit) as exc:
            run(["check"])
        assert exc.value.code == 2
