import json
import math

import numpy as np
import pytest
from scipy.linalg import expm

from qfilab import (
    CutoffViolationError,
    EmptyStateError,
    apply_beamsplitter,
    apply_phase,
    beamsplitter_matrix,
    expect,
    load_state,
    make_state,
    noon,
    save_state,
    schwinger_matrices,
    sector_decompose,
    state_to_json_dict,
    vacuum,
)

RT2 = math.sqrt(2.0)


def random_state(rng, max_sector=8):
    sectors = rng.choice(max_sector + 1, size=int(rng.integers(1, 4)), replace=False)
    entries = []
    for n in sectors:
        for k in range(int(n) + 1):
            entries.append((k, int(n) - k, complex(rng.normal(), rng.normal())))
    return make_state(entries, cutoff=max_sector)


# ---------------------------------------------------------------------------
# construction

def test_make_state_normalizes():
    s = make_state([(1, 0, 1.0), (0, 1, 1.0)], cutoff=4)
    assert abs(s.amplitude(1, 0) - 1 / RT2) < 1e-12
    assert abs(s.amplitude(0, 1) - 1 / RT2) < 1e-12
    assert abs(s.norm() - 1.0) < 1e-12


def test_make_state_already_normalized():
    s = make_state([(3, 0, 1 / RT2), (0, 3, 1 / RT2)], cutoff=3)
    assert abs(s.norm() - 1.0) < 1e-12
    assert len(s) == 2


def test_make_state_cutoff_violation():
    with pytest.raises(CutoffViolationError):
        make_state([(5, 0, 1.0)], cutoff=4)
    with pytest.raises(CutoffViolationError):
        make_state([(-1, 0, 1.0)], cutoff=4)


def test_make_state_empty():
    with pytest.raises(EmptyStateError):
        make_state([], cutoff=2)
    with pytest.raises(EmptyStateError):
        make_state([(0, 0, 0.0), (1, 1, 0.0)], cutoff=2)


def test_make_state_merges_duplicates():
    s = make_state([(1, 0, 0.5), (1, 0, 0.5), (0, 1, 1.0)], cutoff=2)
    assert abs(s.amplitude(1, 0) - s.amplitude(0, 1)) < 1e-12


def test_canonical_order():
    s = make_state([(2, 0, 1.0), (0, 1, 1.0), (0, 2, 1.0), (1, 0, 1.0)], cutoff=2)
    assert [k for k, _ in s.items()] == [(0, 1), (1, 0), (0, 2), (2, 0)]


def test_prune_threshold():
    s = make_state([(0, 0, 1.0), (1, 1, 1e-18)], cutoff=2)
    assert len(s) == 1


# ---------------------------------------------------------------------------
# phase shift

def test_phase_single_photon():
    s = make_state([(1, 0, 1.0)], cutoff=1)
    out = apply_phase(s, 0.7)
    assert abs(out.amplitude(1, 0) - np.exp(-0.7j / 2)) < 1e-12


def test_phase_noon_relative_phase():
    for n in (1, 3, 5):
        phi = 0.43
        out = apply_phase(noon(n), phi)
        rel = out.amplitude(0, n) / out.amplitude(n, 0)
        assert abs(rel - np.exp(1j * n * phi)) < 1e-12


def test_phase_zero_is_identity():
    rng = np.random.default_rng(5)
    s = random_state(rng)
    assert apply_phase(s, 0.0).allclose(s, tol=1e-15)


def test_phase_composition():
    rng = np.random.default_rng(6)
    for _ in range(5):
        s = random_state(rng)
        a, b = rng.uniform(-3, 3, size=2)
        lhs = apply_phase(apply_phase(s, a), b)
        rhs = apply_phase(s, a + b)
        assert lhs.allclose(rhs, tol=1e-12)


# ---------------------------------------------------------------------------
# beam splitter

def test_beamsplitter_single_photon():
    out = apply_beamsplitter(make_state([(1, 0, 1.0)], cutoff=1))
    assert abs(out.amplitude(1, 0) - 1 / RT2) < 1e-12
    assert abs(out.amplitude(0, 1) - 1j / RT2) < 1e-12


def test_beamsplitter_hong_ou_mandel():
    out = apply_beamsplitter(make_state([(1, 1, 1.0)], cutoff=2))
    assert abs(out.amplitude(2, 0) - 1j / RT2) < 1e-12
    assert abs(out.amplitude(0, 2) - 1j / RT2) < 1e-12
    assert abs(out.amplitude(1, 1)) < 1e-12


def test_beamsplitter_vacuum():
    out = apply_beamsplitter(vacuum())
    assert abs(out.amplitude(0, 0) - 1.0) < 1e-15


def test_unitarity_random_states():
    rng = np.random.default_rng(7)
    for _ in range(20):
        s = random_state(rng)
        phi = rng.uniform(-4, 4)
        assert abs(apply_phase(s, phi).norm() - 1.0) < 1e-12
        assert abs(apply_beamsplitter(s).norm() - 1.0) < 1e-12


def test_beamsplitter_preserves_photon_distribution():
    rng = np.random.default_rng(8)
    for _ in range(10):
        s = random_state(rng)
        before = {c.n_total: c.probability for c in sector_decompose(s)}
        after = {c.n_total: c.probability for c in sector_decompose(apply_beamsplitter(s))}
        assert set(before) == set(after)
        for n in before:
            assert abs(before[n] - after[n]) < 1e-12


def test_beamsplitter_matches_matrix_exponential():
    # independent scaling-and-squaring oracle on the tridiagonal generator
    for n in range(1, 21):
        j1, _, _ = schwinger_matrices(n)
        oracle = expm(0.5j * np.pi * j1)
        assert np.abs(beamsplitter_matrix(n) - oracle).max() < 1e-10


def test_schwinger_commutators():
    for n in range(1, 21):
        j1, j2, j3 = schwinger_matrices(n)
        assert np.abs(j1 @ j2 - j2 @ j1 - 1j * j3).max() < 1e-12
        assert np.abs(j2 @ j3 - j3 @ j2 - 1j * j1).max() < 1e-12
        assert np.abs(j3 @ j1 - j1 @ j3 - 1j * j2).max() < 1e-12


def test_j3_eigenvalues_exact():
    s = make_state([(4, 1, 1.0)], cutoff=5)
    assert expect(s, "j3") == pytest.approx((4 - 1) / 2, abs=0)


# ---------------------------------------------------------------------------
# expectations

def test_expect_examples():
    assert expect(noon(3), "n_total") == pytest.approx(3.0, abs=1e-12)
    for n in (1, 2, 4):
        assert expect(noon(n), "j3_sq") == pytest.approx(n * n / 4.0, abs=1e-12)
        assert expect(noon(n), "j3") == pytest.approx(0.0, abs=1e-12)
    s = make_state([(2, 1, 1.0)], cutoff=3)
    assert expect(s, "parity_a") == pytest.approx(1.0, abs=0)
    assert expect(s, "delta") == pytest.approx(-1.0, abs=0)


def test_expect_unknown_observable():
    with pytest.raises(ValueError):
        expect(vacuum(), "n_a_times_n_b")


# ---------------------------------------------------------------------------
# sector decomposition

def test_sector_decompose_single_sector():
    comps = sector_decompose(noon(2))
    assert len(comps) == 1
    assert comps[0].n_total == 2
    assert comps[0].probability == pytest.approx(1.0, abs=1e-12)


def test_sector_decompose_two_sectors():
    s = make_state([(1, 0, 1.0), (2, 0, 1.0)], cutoff=2)
    comps = sector_decompose(s)
    assert [c.n_total for c in comps] == [1, 2]
    for c in comps:
        assert c.probability == pytest.approx(0.5, abs=1e-12)
        assert abs(c.state.norm() - 1.0) < 1e-12


def test_sector_decompose_reassembles():
    rng = np.random.default_rng(9)
    for _ in range(5):
        s = random_state(rng)
        rebuilt = {}
        for c in sector_decompose(s):
            scale = c.phase * math.sqrt(c.probability)
            for key, amp in c.state.items():
                rebuilt[key] = rebuilt.get(key, 0) + scale * amp
        for key, amp in s.items():
            assert abs(rebuilt[key] - amp) < 1e-12


# ---------------------------------------------------------------------------
# JSON state files

def test_json_roundtrip(tmp_path):
    rng = np.random.default_rng(10)
    s = random_state(rng)
    path = tmp_path / "state.json"
    save_state(s, path)
    loaded = load_state(path)
    assert loaded.cutoff == s.cutoff
    assert loaded.allclose(s, tol=1e-12)


def test_json_writer_byte_stable(tmp_path):
    s = make_state([(0, 2, 0.3), (2, 0, 0.5j), (1, 0, 1.0)], cutoff=3)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_state(s, p1)
    save_state(s, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_json_reader_normalizes(tmp_path):
    path = tmp_path / "raw.json"
    path.write_text(
        json.dumps(
            {
                "cutoff": 2,
                "entries": [
                    {"na": 1, "nb": 0, "re": 2.0, "im": 0.0},
                    {"na": 0, "nb": 1, "re": 0.0, "im": 2.0},
                ],
            }
        )
    )
    s = load_state(path)
    assert abs(s.norm() - 1.0) < 1e-12
    assert abs(abs(s.amplitude(1, 0)) - 1 / RT2) < 1e-12


def test_json_dict_sorted_by_sector_then_na():
    s = make_state([(2, 0, 1.0), (0, 1, 1.0), (1, 1, 1.0)], cutoff=3)
    entries = state_to_json_dict(s)["entries"]
    keys = [(e["na"] + e["nb"], e["na"]) for e in entries]
    assert keys == sorted(keys)


def test_states_are_immutable():
    s = noon(2)
    with pytest.raises(ValueError):
        s.amps[0] = 0.0


def test_beamsplitter_cache_safe_under_concurrent_first_use():
    import concurrent.futures

    import qfilab.fock as fock

    n = 37
    fock._BS_CACHE.pop(n, None)
    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
        mats = list(pool.map(lambda _: beamsplitter_matrix(n), range(16)))
    assert all(m is mats[0] for m in mats)  # one-time initialization
    assert not mats[0].flags.writeable
