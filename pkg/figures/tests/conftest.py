import subprocess
import sys

import pytest


def run_cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "pinned_billiards.cli", *argv],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def simulate_dir(tmp_path_factory):
    """Half-plane simulate output: positions, snapshots, profiles, histograms."""
    out = tmp_path_factory.mktemp("simulate")
    run_cli("simulate", "--kind", "half-plane-rect", "--cols", "8", "--rows", "6",
            "--seed", "4", "--stop-accepted", "200", "--snap", "0",
            "--out", str(out))
    return out


@pytest.fixture(scope="session")
def sweep_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep")
    run_cli("sweep", "--sizes", "rect-10x5,rect-60x30", "--seeds-per-size", "2",
            "--budget-per-ball", "10", "--out", str(out))
    return out


@pytest.fixture(scope="session")
def batch_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("batch")
    run_cli("batch", "--kind", "torus", "--cols", "6", "--rows", "6",
            "--stop-accepted", "2000", "--runs", "20", "--out", str(out))
    return out


@pytest.fixture(scope="session")
def final_snapshot(simulate_dir):
    snaps = sorted(simulate_dir.glob("snapshot_*.csv"))
    assert snaps
    return snaps[-1]


@pytest.fixture(scope="session")
def final_profile(simulate_dir):
    profiles = sorted(simulate_dir.glob("profile_*.csv"))
    assert profiles
    return profiles[-1]


@pytest.fixture(scope="session")
def final_hist_x(simulate_dir):
    hists = sorted(simulate_dir.glob("hist_x_*.csv"))
    assert hists
    return hists[-1]
