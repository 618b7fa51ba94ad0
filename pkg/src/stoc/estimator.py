"""Scikit-learn style front end for the clustering pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .clustering import run_variant
from .graph import AttributedGraph


def check_graph(X):
    """Validate the estimator input: a non-empty AttributedGraph."""
    if not isinstance(X, AttributedGraph):
        raise TypeError(
            f"expected an AttributedGraph, got {type(X).__name__}; "
            "build one with stoc.load_graph or stoc.synth.generate"
        )
    if X.n < 1:
        raise ValueError("graph has no nodes")
    return X


class SToC(ClusterMixin, BaseEstimator):
    """Semantic-topological clustering of attributed graphs.

    Partitions the nodes into connected clusters whose members all lie
    within distance ``tau`` of the cluster seed, where distance is the max
    of an attribute distance and a neighborhood-overlap distance.  ``tau``
    and the hop radius ``l`` are auto-tuned from the attraction ratios
    unless given explicitly.  The number of clusters is an output.

    Parameters
    ----------
    alpha_s, alpha_t : float
        Semantic / topological attraction ratios in [0, 1]: the expected
        fraction of node pairs to treat as similar on each count.
    epsilon : float
        Approximation budget in (0, 1]; sizes both the CDF samples and the
        bottom-k sketches.
    tau, l : float, int, optional
        Explicit operating parameters; each one given bypasses the
        corresponding tuning step.
    l_max : int
        Cap for the hop-radius search.
    variant : {'stoc', 'sc', 'toc'}
        Full combined distance, attributes only, or topology only.
    discretize : bool
        Treat quantitative attributes as categories (ablation mode).
    backend : {'auto', 'exact', 'sketch'}
        Topological distances from exact neighborhoods or bottom-k sketches;
        'auto' switches on graph size.
    sketch_k : int, optional
        Sketch size override; default derives from epsilon and n.
    random_state : int, Generator, optional
        Seeds seed selection, sampling and the sketch hash.

    Attributes
    ----------
    labels_ : ndarray of shape (n,)
        Cluster id per dense node index.
    clustering_ : Clustering
        Full result (clusters, seeds, parameters).
    tuning_report_ : TuningReport
        Sampled CDFs, chosen tau and l, and the per-l trace.
    tau_, l_, n_clusters_ : resolved operating parameters and cluster count.

    Examples
    --------
    >>> from stoc import SToC, synth
    >>> graph, truth = synth.generate(synth.PlantedSpec(sizes=(40, 40), p_in=0.4, p_out=0.01, seed=3))
    >>> labels = SToC(alpha_s=0.4, alpha_t=0.4, random_state=0).fit_predict(graph)
    >>> len(labels)
    80
    """

    def __init__(
        self,
        alpha_s=0.4,
        alpha_t=0.4,
        epsilon=0.9,
        tau=None,
        l=None,
        l_max=10,
        variant="stoc",
        discretize=False,
        backend="auto",
        sketch_k=None,
        random_state=None,
    ):
        self.alpha_s = alpha_s
        self.alpha_t = alpha_t
        self.epsilon = epsilon
        self.tau = tau
        self.l = l
        self.l_max = l_max
        self.variant = variant
        self.discretize = discretize
        self.backend = backend
        self.sketch_k = sketch_k
        self.random_state = random_state

    def fit(self, X, y=None):
        """Cluster the attributed graph X; y is ignored."""
        graph = check_graph(X)
        rng = np.random.default_rng(self.random_state)
        clustering, report = run_variant(
            graph,
            variant=self.variant,
            alpha_s=self.alpha_s,
            alpha_t=self.alpha_t,
            epsilon=self.epsilon,
            rng=rng,
            tau=self.tau,
            l=self.l,
            l_max=self.l_max,
            backend=self.backend,
            discretize=self.discretize,
            k=self.sketch_k,
        )
        self.labels_ = clustering.labels.copy()
        self.clustering_ = clustering
        self.tuning_report_ = report
        self.tau_ = clustering.params["tau"]
        self.l_ = clustering.params["l"]
        self.n_clusters_ = clustering.k
        return self
