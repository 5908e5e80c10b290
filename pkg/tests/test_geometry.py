import math

import pytest
from hypothesis import given, strategies as st

from strataplan.errors import DuplicatePoint, SizeMismatch
from strataplan.geometry import (
    AnnulusPoint,
    Configuration,
    PlanePoint,
    Tolerances,
    annulus_config,
    canonicalize,
    circle_gap,
    config_distance,
    configuration_from_dict,
    configuration_to_dict,
    disc_config,
    matched_distance,
    min_separation,
    signed_arc,
    wrap_unit,
)


def test_wrap_unit_range():
    assert wrap_unit(0.0) == 0.0
    assert wrap_unit(1.0) == 0.0
    assert wrap_unit(1.25) == 0.25
    assert wrap_unit(-0.25) == 0.75
    # tiny negatives must not round up to 1.0
    assert 0.0 <= wrap_unit(-1e-18) < 1.0


def test_circle_gap_and_signed_arc():
    assert circle_gap(0.1, 0.9) == pytest.approx(0.2)
    assert circle_gap(0.0, 0.5) == 0.5
    assert signed_arc(0.9, 0.1) == pytest.approx(0.2)
    assert signed_arc(0.1, 0.9) == pytest.approx(-0.2)


def test_annulus_point_normalizes_angle():
    p = AnnulusPoint(1.5, 2.0)
    assert p.theta == 0.5
    with pytest.raises(ValueError):
        AnnulusPoint(math.nan, 0.0)


def test_canonicalize_sorts():
    c = annulus_config([(0.5, 1), (0.0, 0)])
    assert c.coordinate_pairs() == ((0.0, 0.0), (0.5, 1.0))


def test_canonicalize_rejects_exact_duplicates():
    with pytest.raises(DuplicatePoint):
        annulus_config([(0.0, 0), (0.0, 0)])


def test_canonicalize_plane_sorts():
    c = disc_config([(1, 0), (-1, 0), (0, 0)])
    assert c.coordinate_pairs() == ((-1.0, 0.0), (0.0, 0.0), (1.0, 0.0))


def test_canonicalize_idempotent():
    c = annulus_config([(0.3, 1), (0.1, -2), (0.3, 5)])
    again = canonicalize(c.points)
    assert again == c


@given(
    st.lists(
        st.tuples(
            st.floats(0, 0.999, allow_nan=False),
            st.integers(-50, 50),
        ),
        min_size=1,
        max_size=6,
        unique=True,
    ),
    st.randoms(),
)
def test_canonicalize_order_insensitive(pairs, rnd):
    pts = [AnnulusPoint(a, float(b)) for a, b in pairs]
    base = canonicalize(pts)
    shuffled = list(pts)
    rnd.shuffle(shuffled)
    assert canonicalize(shuffled) == base


def test_mixed_point_types_rejected():
    with pytest.raises(TypeError):
        Configuration((AnnulusPoint(0.0, 0.0), PlanePoint(1.0, 0.0)))


def test_min_separation_same_fiber():
    assert min_separation(annulus_config([(0.0, 0), (0.0, 1)])) == 1.0


def test_min_separation_antipodal():
    assert min_separation(annulus_config([(0.0, 0), (0.5, 0)])) == 0.5


def test_min_separation_plane():
    assert min_separation(disc_config([0, 1, -1])) == 1.0


def test_min_separation_single_point():
    assert min_separation(annulus_config([(0.1, 0)])) == math.inf


def test_config_distance_and_matched_distance():
    a = annulus_config([(0.0, 0), (0.5, 1)])
    b = annulus_config([(0.0, 0.5), (0.5, 1)])
    assert config_distance(a, b) == 0.5
    assert matched_distance(a, b) == 0.5
    with pytest.raises(SizeMismatch):
        config_distance(a, annulus_config([(0.1, 0)]))


def test_matched_distance_survives_wrap_reordering():
    # a point near the angular seam flips canonical order under perturbation
    a = annulus_config([(1e-7, 0.0), (0.4, 0.0)])
    b = annulus_config([(1.0 - 1e-7, 1e-7), (0.4, 0.0)])
    assert matched_distance(a, b) < 1e-6
    assert config_distance(a, b) > 0.1  # canonical order swapped


def test_tolerances_validation():
    with pytest.raises(ValueError):
        Tolerances(tau_angle=0.0)
    with pytest.raises(ValueError):
        Tolerances(n_time_samples=0)


def test_configuration_document_round_trip():
    c = disc_config([(0.5, -1.5), (2.0, 0.0), (0.0, 3.0)])
    doc = configuration_to_dict(c)
    assert doc["surface"] == "disc"
    assert doc["n"] == 3
    assert configuration_from_dict(doc) == c


@pytest.mark.parametrize(
    "doc",
    [
        {},
        {"surface": "torus", "n": 1, "points": [[0, 0]]},
        {"surface": "annulus", "n": 2, "points": [[0, 0]]},
        {"surface": "annulus", "n": 1, "points": [[0, 0, 0]]},
        {"surface": "annulus", "n": 1, "points": "zero"},
    ],
)
def test_configuration_document_rejects_malformed(doc):
    with pytest.raises(ValueError):
        configuration_from_dict(doc)
