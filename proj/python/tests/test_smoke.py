"""Smoke tests for the _symmcirc extension module."""

import json
import sys
import tempfile
from pathlib import Path

import _symmcirc as sc


def test_pauli_algebra():
    x = sc.PauliOperator("XI")
    z = sc.PauliOperator("ZI")
    assert not x.commutes_with(z)
    assert str(x * x) == "+II"
    assert (x * x).sign() == 1
    assert sc.PauliOperator("-YZ").sign() == -1


def test_stabilizer_state():
    s = sc.StabilizerState.zero_state(8)
    assert s.is_valid()
    assert s.entropy_interval(0, 3) == 0
    out = s.measure(sc.PauliOperator("XIIIIIII"), False)
    assert out == 1
    assert s.deterministic_outcome(sc.PauliOperator("XIIIIIII")) == 1
    g1, g2 = sc.symmetry_generators(8)
    assert str(g1) == "+IZIZIZIZ"
    assert s.member_sign(g2) is None  # X measurement broke the even-site charge


def test_percolation_matches_counting():
    p = sc.PercolationState(8)
    p.merge_at(1)
    p.merge_at(3)
    assert p.entropy_interval(0, 2) == 1
    assert p.prefix_profile()[0] == 1


def test_duality_involution():
    z = sc.PauliOperator("IIIZIIII")
    dual = sc.duality_transform(z)
    assert dual == sc.cluster_stabilizer(8, 3)
    assert sc.duality_transform(dual) == z


def test_run_trajectory_fixed_points():
    probes = sc.run_trajectory(n=16, p_s=0.0, master_seed=1)
    assert probes[-1]["s_topo"] == 2
    probes = sc.run_trajectory(n=16, p_s=1.0, master_seed=1)
    assert probes[-1]["s_topo"] == 0


def test_run_sweep_roundtrip():
    with tempfile.TemporaryDirectory() as tmp:
        manifest = {
            "kind": "sweep",
            "sizes": [8],
            "p_s": [0.3],
            "trajectories": 2,
            "master_seed": 3,
            "observables": ["s_topo"],
        }
        mpath = Path(tmp) / "m.json"
        mpath.write_text(json.dumps(manifest))
        report = sc.run_sweep(str(mpath), str(Path(tmp) / "out"))
        assert report["finished"]
        assert (Path(tmp) / "out" / "curves.csv").exists()


def test_fit_log_profile():
    import math

    L = 32
    prof = [
        0.2 * math.log2((L / math.pi) * math.sin(math.pi * x / L)) + 1.0
        for x in range(1, L)
    ]
    fit = sc.fit_log_profile(prof, L)
    assert abs(fit["slope"] - 0.2) < 1e-9


def main():
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"PASS {name}")
            except Exception as exc:  # noqa: BLE001
                failures += 1
                print(f"FAIL {name}: {exc!r}")
    return failures


if __name__ == "__main__":
    sys.exit(main())
