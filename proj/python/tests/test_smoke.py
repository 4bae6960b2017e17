import math

import numpy as np
import pytest

import geoflow


def test_spec_and_conserved_values():
    s = geoflow.spec("c112", [1, 2, 3])
    assert s.symmetry == "c112"
    assert list(s.alphas) == [1, 2, 3, 3]
    c = geoflow.conserved(s, [1, 0, 0, 0], [0, 0, math.sqrt(2), 0])
    assert c["H"] == pytest.approx(1)
    assert c["F0"] + c["F1"] + c["G"] == pytest.approx(2 * c["H"])


def test_integrate_conserves():
    s = geoflow.spec("c22", [1, 2])
    x, y = geoflow.random_point(s, seed=3, h=0.5)
    tr = geoflow.integrate(s, x, y, 20.0, samples=50)
    assert tr["x"].shape == (50, 4)
    assert max(tr["drift"].values()) < 1e-8
    assert np.all(np.diff(tr["t"]) > 0)


def test_diagram_landmarks():
    s = geoflow.spec("c112", [1, 2, 3])
    marks = {m["name"]: m for m in geoflow.landmarks(s, 1.0)}
    t = marks["tangency B/C +"]
    assert t["u"] == pytest.approx(math.sqrt(3))
    assert t["v"] == pytest.approx(2.5)
    assert t["type"] == "degenerate"
    assert geoflow.tangency_j(s, 1.0) == pytest.approx(math.sqrt(3))


def test_actions_match_and_glue():
    a = geoflow.action(1, 2, 1, 0.3, 0.5)
    b = geoflow.action(1, 2, 1, 0.3, 0.5, method="quadrature")
    assert a == pytest.approx(b, rel=1e-10)
    assert geoflow.dI_dJ(1, 2, 1, 1e-5, 0.5, 1) == pytest.approx(-1, abs=1e-3)
    left = geoflow.smooth_action(1, 2, 1, -1e-7, 0.5)[2]
    right = geoflow.smooth_action(1, 2, 1, 1e-7, 0.5)[2]
    assert left == pytest.approx(right, abs=1e-6)


def test_section_atoms():
    pts, pre, post = geoflow.section_curve([1, 2, 3], 1.0, 0.0, 100)
    assert pts.shape == (200, 2)
    assert (pre, post) == ("C2", "B")


def test_errors_map_to_value_error():
    with pytest.raises(geoflow.GeoflowError):
        geoflow.spec("c22", [2, 1])
    with pytest.raises(ValueError):
        geoflow.spec("c4", [1, 2])
    with pytest.raises(ValueError):
        geoflow.action(1, 2, 1, 0.3, 0.5, method="simpson")
