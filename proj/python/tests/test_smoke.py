import json
import os

import pytest

import qmitigate

GHZ_COUNTS = {"000": 898, "111": 1032, "100": 33, "110": 12,
              "010": 25, "011": 31, "001": 15, "101": 2}


def test_counts_round_trip():
    probs = qmitigate.counts_to_probs(GHZ_COUNTS)
    assert abs(sum(probs.values()) - 1.0) < 1e-12
    assert qmitigate.probs_to_counts(probs, 2048) == GHZ_COUNTS


def test_ghz_filter_golden_values():
    report = qmitigate.mitigate_counts(GHZ_COUNTS, (0.03, 0.97))
    rescaled = dict(report["rescaled"])
    assert abs(rescaled["000"] - 0.43454) < 1e-5
    assert abs(rescaled["111"] - 0.50415) < 1e-5
    assert len(report["zeroed"]) == 6
    assert sum(report["output_counts"]["counts"].values()) == 2048


def test_percent_range_and_annihilation():
    out = qmitigate.mitigate_counts({"0": 512, "1": 512}, "1%")
    assert out["output_counts"]["counts"] == {"0": 512, "1": 512}
    with pytest.raises(qmitigate.FilterAnnihilatedError, match="filter annihilated distribution"):
        qmitigate.mitigate_counts({"00": 1, "01": 1, "10": 1, "11": 1}, (0.5, 0.9))
    with pytest.raises(ValueError):
        qmitigate.mitigate_counts({"0": 1}, (0.7, 0.2))


def test_metrics():
    assert qmitigate.hellinger_fidelity({"0": 1.0}, {"0": 0.5, "1": 0.5}) == pytest.approx(0.5)
    assert qmitigate.parity_expectation({"01": 1.0}, "01") == -1.0
    assert qmitigate.success_probability({"111": 0.9, "011": 0.1}, "111") == 0.9
    with pytest.raises(ValueError):
        qmitigate.success_probability({"111": 1.0}, "11")


def test_m3_single_qubit_inverse():
    q = qmitigate.mitigate_m3({"0": 900, "1": 100}, [(0.1, 0.1)])
    assert q["0"] == pytest.approx(1.0)
    qi = qmitigate.mitigate_m3({"0": 900, "1": 100}, [(0.1, 0.1)], method="iterative")
    assert qi["0"] == pytest.approx(1.0, abs=1e-8)


def test_simulator_and_circuits():
    assert qmitigate.ideal_probabilities("bv", secret="101") == {"101": pytest.approx(1.0)}
    counts = qmitigate.run_shots("dynamic_bv", None, 100, 3, secret="1101")
    assert counts == {"1101": 100}
    noisy = qmitigate.run_shots("ghz", "paper-like", 2048, 1, qubits=3)
    assert noisy == qmitigate.run_shots("ghz", "paper-like", 2048, 1, qubits=3)
    assert sum(noisy.values()) == 2048
    with pytest.raises(qmitigate.UnsupportedCircuitError):
        qmitigate.ideal_probabilities("dynamic_bv", secret="11")


def test_noise_profile_file():
    profiles = os.environ.get("QMITIGATE_PROFILES")
    if not profiles:
        pytest.skip("profiles directory not provided")
    cal = qmitigate.calibrate(os.path.join(profiles, "noiseless.json"), 3, 1000, 0)
    assert cal == [(0.0, 0.0)] * 3


def test_vqe_exact():
    result = qmitigate.run_vqe({"exact": True})
    assert result["energy"] == pytest.approx(-0.44841884382998787, abs=5e-3)
    ring = "\n".join(f"1.0 {p}" for p in ["XXI", "YYI", "ZZI", "IXX", "IYY", "IZZ", "XIX", "YIY", "ZIZ"])
    assert qmitigate.exact_ground_energy(ring) == pytest.approx(-3.0)


def test_experiment_and_report(tmp_path):
    assert "bv-sweep" in qmitigate.experiment_ids
    report = qmitigate.run_experiment("ghz-demo")
    rows = {row["mitigator"]: row for row in report["rows"]}
    assert len(rows["filter(0.03,0.97)"]["zeroed"]) == 6
    files = qmitigate.emit_report(report, str(tmp_path), "json,csv,svg")
    assert len(files) == 3
    with open(tmp_path / "ghz-demo.json") as fh:
        assert json.load(fh)["rows"] == report["rows"]
    with pytest.raises(ValueError):
        qmitigate.run_experiment("kagome")
