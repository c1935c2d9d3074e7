import numpy as np
import pytest
from sklearn.base import clone

from polytverb.estimator import PolytopalPartitioner
from polytverb.exceptions import InvalidInputError, WrongCountError
from polytverb.geometry import PlaneFrame


def test_params_and_clone():
    est = PolytopalPartitioner(kind="prism", factors=(3,), random_state=4)
    params = est.get_params()
    assert params["kind"] == "prism" and params["factors"] == (3,) and params["random_state"] == 4
    other = clone(est).set_params(random_state=5)
    assert other.random_state == 5 and est.random_state == 4


def test_fit_predict():
    X = np.random.default_rng(0).uniform(-1, 1, size=(8, 2))
    est = PolytopalPartitioner(kind="polygon", r=4)
    labels = est.fit_predict(X)
    assert labels.shape == (8,) and set(labels) <= {-1, 0, 1, 2, 3}
    assert set(labels) >= {0, 1, 2, 3}
    assert est.vertices_.shape == (4, 2) and est.n_features_in_ == 2
    assert est.certificate_.valid
    for a, g in enumerate(est.result_.group.elements):
        assert list(np.flatnonzero(labels == a)) == list(est.parts_[g])


def test_colored_uses_y():
    X = np.random.default_rng(1).uniform(-1, 1, size=(9, 2))
    y = np.repeat(np.arange(3), 3)
    est = PolytopalPartitioner(kind="colored-polygon", r=3).fit(X, y)
    for g, idx in est.parts_.items():
        assert sorted(y[list(idx)]) == [0, 1, 2]


def test_frame_as_vectors():
    X = np.random.default_rng(2).uniform(-1, 1, size=(7, 3))
    f = PlaneFrame.random(3, 1)
    est = PolytopalPartitioner(kind="polygon", r=3, frame=(f.u, f.w)).fit(X)
    diffs = est.vertices_ - est.vertices_[0]
    assert np.abs(diffs @ f.completion.T).max() < 1e-9


def test_errors():
    with pytest.raises(WrongCountError):
        PolytopalPartitioner(kind="polygon", r=3).fit(np.zeros((6, 2)))
    with pytest.raises(InvalidInputError):
        PolytopalPartitioner(kind="nonagon", r=9).fit(np.zeros((5, 2)))
    with pytest.raises(ValueError):
        PolytopalPartitioner(kind="polygon", r=3).fit(np.full((5, 2), np.nan))
