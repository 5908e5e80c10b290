import json
import random

from strataplan import annulus, braids, harness
from strataplan.geometry import (
    annulus_config,
    configuration_to_dict,
    min_separation,
)


# ---------------------------------------------------------------------------
# random generation


def test_random_configuration_is_deterministic():
    a = harness.random_configuration("annulus", 4, 123)
    b = harness.random_configuration("annulus", 4, 123)
    assert a == b
    assert configuration_to_dict(a) == configuration_to_dict(b)
    assert a != harness.random_configuration("annulus", 4, 124)


def test_random_configuration_separation_floor():
    for seed in range(200):
        c = harness.random_configuration("annulus", 5, seed)
        assert min_separation(c) >= harness.SEPARATION_FLOOR
    for seed in range(100):
        c = harness.random_configuration("disc", 3, seed)
        assert min_separation(c) >= harness.SEPARATION_FLOOR
        assert all(abs(p.as_complex) <= 10.0 for p in c.points)


def test_random_configuration_single_point():
    c = harness.random_configuration("annulus", 1, 7)
    assert c.n == 1


def test_structured_samplers_are_valid():
    rng = random.Random(5)
    for _ in range(50):
        x, y = harness.structured_annulus_pair(3, rng)
        assert min_separation(x) >= harness.SEPARATION_FLOOR
        assert min_separation(y) >= harness.SEPARATION_FLOOR
    rng = random.Random(6)
    for _ in range(50):
        x, y = harness.structured_disc_pair(rng)
        assert x.n == y.n == 3


# ---------------------------------------------------------------------------
# partition census


def test_partition_check_annulus():
    report = harness.partition_check("annulus", 3, 2000, seed=0)
    assert sum(report.histogram.values()) == 2000
    degrees = {int(label[1:]) for label in report.histogram}
    assert degrees <= set(range(1, 7))
    assert degrees == set(range(1, 7))  # structured sampling reaches them all


def test_partition_check_disc():
    report = harness.partition_check("disc", 3, 2000, seed=1)
    assert sum(report.histogram.values()) == 2000
    assert set(report.histogram) == {"E0", "E1", "E2", "E3"}


def test_degree_batch_matches_scalar():
    tx, ty = harness.degree_census_angles(4, 300, seed=2)
    got = harness.degrees_from_angles(tx, ty, 1e-9)
    for row in range(0, 300, 7):
        x = annulus_config([(t, float(i)) for i, t in enumerate(tx[row])])
        y = annulus_config([(t, float(i)) for i, t in enumerate(ty[row])])
        assert got[row] == annulus.degree(x, y)


# ---------------------------------------------------------------------------
# continuity probe


def test_probe_with_zero_perturbation_has_zero_deviation():
    x = harness.random_configuration("annulus", 2, "p0x")
    y = harness.random_configuration("annulus", 2, "p0y")
    probe = harness.continuity_probe("annulus", (x, y), h=0.0, trials=3, seed=1)
    assert probe.escapes == 0
    assert probe.max_deviation == 0.0


def test_probe_counts_trials():
    x = harness.random_configuration("disc", 3, "p1x")
    y = harness.random_configuration("disc", 3, "p1y")
    probe = harness.continuity_probe("disc", (x, y), h=1e-6, trials=4, seed=2, n_samples=33)
    assert len(probe.deviations) + probe.escapes == 4


# ---------------------------------------------------------------------------
# export schema


def test_path_export_schema():
    x = harness.random_configuration("annulus", 2, "e0")
    y = harness.random_configuration("annulus", 2, "e1")
    p = annulus.plan(x, y)
    doc = harness.path_export(p, count=17)
    assert set(doc) == {"surface", "n", "stratum", "samples", "segments"}
    assert doc["surface"] == "annulus" and doc["n"] == 2
    assert len(doc["samples"]) == 17
    assert doc["samples"][0]["t"] == 0.0 and doc["samples"][-1]["t"] == 1.0
    for entry in doc["samples"]:
        assert len(entry["points"]) == 2
    assert len(doc["segments"]) == len(p.segments)
    json.dumps(doc)  # serialisable


def test_run_planner_record():
    x = harness.random_configuration("disc", 3, "r0")
    y = harness.random_configuration("disc", 3, "r1")
    run = harness.run_planner("disc3", x, y)
    assert run.report.endpoints_ok
    assert run.stratum.startswith("E")
    assert run.n == 3


# ---------------------------------------------------------------------------
# loops: winding versus crossing word


def _loop(x, y):
    pxy = annulus.plan(x, y)
    pyx = annulus.plan(y, x)
    return harness.loop_profile(pxy, pyx)


def test_loop_profile_stacked_pair_links_once():
    # both points share a fibre on each side; the round trip carries the pair
    # once around the annulus, which links the embedded strands once
    x = annulus_config([(0.0, 0.0), (0.0, 1.0)])
    y = annulus_config([(0.5, 0.0), (0.5, 1.0)])
    prof = _loop(x, y)
    assert prof.is_pure
    w = harness.winding_turns(prof)
    assert abs(w - round(w)) < 1e-9
    word = harness.crossing_word(prof)
    assert braids.is_pure(word)
    assert braids.linking_matrix(word)[1, 2] == round(w) == 1


def test_loop_profile_matches_crossing_word_on_random_pure_loops():
    checked = 0
    trial = 0
    while checked < 12 and trial < 60:
        trial += 1
        x = harness.random_configuration("annulus", 2, f"L{trial}a")
        y = harness.random_configuration("annulus", 2, f"L{trial}b")
        prof = _loop(x, y)
        if not prof.is_pure:
            continue
        w = harness.winding_turns(prof)
        word = harness.crossing_word(prof)
        assert braids.is_pure(word) == prof.is_pure
        assert abs(w - round(w)) < 1e-9
        assert braids.linking_matrix(word)[1, 2] == round(w)
        checked += 1
    assert checked == 12


def test_loop_profile_detects_swaps():
    # interleaved fibres produce a loop that exchanges the two points
    found_swap = False
    for trial in range(40):
        x = harness.random_configuration("annulus", 2, f"S{trial}a")
        y = harness.random_configuration("annulus", 2, f"S{trial}b")
        prof = _loop(x, y)
        if not prof.is_pure:
            word = harness.crossing_word(prof)
            assert not braids.is_pure(word)
            found_swap = True
            break
    assert found_swap
