"""scikit-learn style front end."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array

from .caratheodory import EPS_ZERO
from .engine import find_partition
from .geometry import EPS_KILL, EPS_LEAD, PlaneFrame, PointCloud
from .problems import make_kind


class PolytopalPartitioner(ClusterMixin, BaseEstimator):
    """Partition a point cloud into parts whose witnesses span a regular polytope.

    Parameters
    ----------
    kind : str, default="polygon"
        One of ``polygon``, ``polygon-in-plane``, ``multiprism``, ``prism``,
        ``orthotope``, ``complex-flat``, ``colored-polygon``.
    r : int, optional
        Polygon size.
    factors : tuple of int, optional
        Polygon sizes of a multiprism or prism.
    k : int, optional
        Orthotope rank; defaults to the number of features.
    planes : sequence of (int, int), optional
        Coordinate planes for the polygon factors.
    frame : PlaneFrame or (u, w), optional
        Arbitrary 2-flat for a plane-prescribed polygon.
    eps_zero, eps_kill, eps_lead : float
        Solver and certificate tolerances.
    max_iter : int, default=20000
        Pivot budget per attempt.
    retries : int, default=5
    random_state : int, default=0
    allow_surplus : bool, default=False
        Accept more points than the problem needs.

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
        Enumeration index of each point's part, ``-1`` for unused points.
    parts_ : dict
        Group element to point indices.
    vertices_ : ndarray of shape (n_parts, n_features)
        Witness points, in group enumeration order.
    certificate_ : PolytopeCertificate
    result_ : PartitionResult
    kind_ : ProblemKind
    n_features_in_ : int

    Examples
    --------
    >>> import numpy as np
    >>> X = np.random.default_rng(1).uniform(-1, 1, size=(5, 2))
    >>> PolytopalPartitioner(kind="polygon", r=3).fit(X).vertices_.shape
    (3, 2)
    """

    def __init__(self, kind="polygon", r=None, factors=None, k=None, planes=None, frame=None,
                 eps_zero=EPS_ZERO, eps_kill=EPS_KILL, eps_lead=EPS_LEAD, max_iter=20000,
                 retries=5, random_state=0, allow_surplus=False):
        self.kind = kind
        self.r = r
        self.factors = factors
        self.k = k
        self.planes = planes
        self.frame = frame
        self.eps_zero = eps_zero
        self.eps_kill = eps_kill
        self.eps_lead = eps_lead
        self.max_iter = max_iter
        self.retries = retries
        self.random_state = random_state
        self.allow_surplus = allow_surplus

    def _make_kind(self, n_features):
        frame = self.frame
        if frame is not None and not isinstance(frame, PlaneFrame):
            frame = PlaneFrame(*(np.asarray(v, dtype=float) for v in frame))
        return make_kind(self.kind, dimension=n_features, r=self.r, factors=self.factors,
                         k=self.k, planes=self.planes, frame=frame)

    def fit(self, X, y=None):
        """Compute the partition.

        Parameters
        ----------
        X : array-like of shape (n_samples, n_features)
        y : array-like of int, optional
            Color class of each point; only ``colored-polygon`` uses it.
        """
        X = check_array(X, dtype=np.float64)
        colors = None if y is None else np.asarray(y, dtype=int)
        kind = self._make_kind(X.shape[1])
        cloud = PointCloud(X, colors)
        result = find_partition(cloud, kind, eps_zero=self.eps_zero, eps_kill=self.eps_kill,
                                eps_lead=self.eps_lead, max_iter=self.max_iter,
                                seed=self.random_state, retries=self.retries,
                                allow_surplus=self.allow_surplus)
        self.kind_ = kind
        self.result_ = result
        self.parts_ = dict(result.parts)
        self.vertices_ = result.vertex_array()
        self.certificate_ = result.certificate
        self.labels_ = result.labels(cloud.n_points)
        self.n_features_in_ = X.shape[1]
        return self
