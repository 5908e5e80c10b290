import numpy as np
import pytest

from strataplan.errors import TimeOutOfRange
from strataplan.geometry import (
    Tolerances,
    annulus_config,
    config_distance,
    disc_config,
    min_separation,
)
from strataplan.moves import AnnulusMove, PlaneMove, constant_move
from strataplan.paths import PathPlan, evaluate_path, validate_path
from strataplan import annulus


def _constant_plan(c):
    return PathPlan((constant_move(c),))


def test_evaluate_path_endpoints():
    c = annulus_config([(0.1, 0), (0.6, 2)])
    p = _constant_plan(c)
    assert evaluate_path(p, 0.0) == c
    assert evaluate_path(p, 1.0) == c


def test_evaluate_path_constant_interior_time_is_exact():
    c = annulus_config([(0.1, 0.3), (0.6, 2.7)])
    p = _constant_plan(c)
    assert evaluate_path(p, 0.37) == c


def test_evaluate_path_out_of_range():
    p = _constant_plan(disc_config([0, 1, -1]))
    with pytest.raises(TimeOutOfRange):
        evaluate_path(p, 1.5)
    with pytest.raises(TimeOutOfRange):
        evaluate_path(p, -0.1)


def test_planner_endpoints_are_exact():
    x = annulus_config([(0.12, 0.5), (0.7, -3.0)])
    y = annulus_config([(0.3, 1.0), (0.9, 2.0)])
    p = annulus.plan(x, y)
    assert evaluate_path(p, 0.0) == x
    assert evaluate_path(p, 1.0) == y


def test_validate_constant_path():
    c = annulus_config([(0.0, 0), (0.25, 1), (0.5, -1)])
    rep = validate_path(_constant_plan(c), start=c, goal=c)
    assert rep.endpoints_ok
    assert rep.min_separation == pytest.approx(min_separation(c))
    assert rep.max_step_displacement == 0.0
    assert rep.ok


def test_validate_detects_linear_crossing():
    # two plane points swap along the same line and collide halfway;
    # an odd sample count puts t=1/2 exactly on the grid
    move = PlaneMove("plane-linear", (0j, 1 + 0j), (1 + 0j, 0j))
    p = PathPlan((move,))
    rep = validate_path(p, Tolerances(n_time_samples=1025))
    assert rep.min_separation == 0.0
    assert not rep.ok


def test_path_reversal_matches_time_reflection():
    x = annulus_config([(0.05, 0.0), (0.55, 1.0)])
    y = annulus_config([(0.2, 2.0), (0.8, -1.0)])
    p = annulus.plan(x, y)
    r = p.reverse()
    assert r.start == y and r.goal == x
    # exact at the ends, within rounding noise of the time arithmetic inside
    assert evaluate_path(r, 0.0) == y and evaluate_path(r, 1.0) == x
    for t in np.linspace(0.0, 1.0, 97):
        d = config_distance(evaluate_path(r, float(t)), evaluate_path(p, float(1.0 - t)))
        assert d < 1e-12


def test_step_displacement_bounded_by_segment_speed():
    x = annulus_config([(0.05, 0.0), (0.55, 1.0), (0.4, -2.0)])
    y = annulus_config([(0.2, 2.0), (0.8, -1.0), (0.4, 5.0)])
    p = annulus.plan(x, y)
    tol = Tolerances(n_time_samples=512)
    rep = validate_path(p, tol)
    # local step within one segment is at most 1/(weight * n_time_samples)
    worst = 0.0
    for seg, w in zip(p.segments, p.weights):
        local_h = 1.0 / max(1, round(w * tol.n_time_samples) - 1)
        worst = max(worst, seg.max_speed() * local_h)
    assert rep.max_step_displacement <= worst * 1.5 + 1e-12


def test_segments_must_chain():
    a = annulus_config([(0.0, 0.0)])
    b = annulus_config([(0.5, 0.0)])
    m1 = constant_move(a)
    m2 = constant_move(b)
    with pytest.raises(ValueError):
        PathPlan((m1, m2))


def test_annulus_move_rejects_inconsistent_arc():
    with pytest.raises(ValueError):
        AnnulusMove(
            "arc-slide",
            ((0.0, 0.0),),
            ((0.5, 0.0),),
            (0.25,),
        )


def test_weights_control_timing():
    x = annulus_config([(0.0, 0.0)])
    mid = annulus_config([(0.0, 1.0)])
    y = annulus_config([(0.0, 3.0)])
    m1 = AnnulusMove("fiberwise-linear", ((0.0, 0.0),), ((0.0, 1.0),), (0.0,))
    m2 = AnnulusMove("fiberwise-linear", ((0.0, 1.0),), ((0.0, 3.0),), (0.0,))
    p = PathPlan((m1, m2), (0.25, 0.75))
    assert evaluate_path(p, 0.25) == mid
    # halfway through the second segment
    assert evaluate_path(p, 0.625).points[0].height == pytest.approx(2.0)
    assert p.start == x and p.goal == y
