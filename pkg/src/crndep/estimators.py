"""scikit-learn style wrappers around the analysis pipeline.

The "data" handed to ``fit`` is a network (a ``MassActionSystem``, DSL text or a
path), not a sample matrix; ``EquilibriumSolver.transform`` maps a matrix of
anchor points to the equilibria in their compatibility classes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .decomp import finest_independent_decomposition
from .depone import check_deficiency_one, check_mass_action
from .equilib import solve_equilibrium
from .massaction import MassActionSystem, structural_report
from .netio import build_report, load_network, parse_network


def _as_system(network, rates) -> MassActionSystem:
    if isinstance(network, MassActionSystem):
        system = network
    elif isinstance(network, Path):
        system = load_network(network)
    elif isinstance(network, str):
        system = parse_network(network) if ("->" in network or "<-" in network or "{" in network) else load_network(network)
    else:
        raise TypeError(f"expected a MassActionSystem, DSL text or a path, got {type(network).__name__}")
    return system.with_rates(rates) if rates else system


class NetworkAnalyzer(BaseEstimator):
    """Structural report, finest decomposition and theorem verdicts for one network.

    Parameters
    ----------
    theorems : tuple of {"dep1", "def1"}
        Which verdicts to compute.
    rates : dict or None
        Rate constant overrides by name, applied before analysis.
    """

    def __init__(self, theorems=("dep1", "def1"), rates=None):
        self.theorems = theorems
        self.rates = rates

    def fit(self, X, y=None):
        bad = set(self.theorems) - {"dep1", "def1"}
        if bad:
            raise ValueError(f"unknown theorems {sorted(bad)}")
        system = _as_system(X, self.rates)
        dec = finest_independent_decomposition(system)
        checks = {"dep1": check_mass_action, "def1": check_deficiency_one}
        self.system_ = system
        self.structural_ = structural_report(system)
        self.decomposition_ = dec
        self.verdicts_ = {name: checks[name](system, dec) for name in self.theorems}
        self.report_ = build_report(system, list(self.verdicts_.values()), dec=dec)
        return self

    def predict(self, X=None):
        """Status of each requested theorem ("pass", "fail" or "n/a")."""
        check_is_fitted(self, "verdicts_")
        return np.array([self.verdicts_[name].status for name in self.theorems])


class EquilibriumSolver(TransformerMixin, BaseEstimator):
    """Maps anchor points ``x'`` (rows of X) to the unique positive equilibrium in their class.

    Parameters
    ----------
    class_kind : {"stoich", "kinetic"}
    rates : dict or None
        Rate constant overrides by name.
    """

    def __init__(self, class_kind="stoich", rates=None):
        self.class_kind = class_kind
        self.rates = rates

    def fit(self, X, y=None):
        if self.class_kind not in ("stoich", "kinetic"):
            raise ValueError(f"class_kind must be 'stoich' or 'kinetic', got {self.class_kind!r}")
        system = _as_system(X, self.rates)
        dec = finest_independent_decomposition(system)
        self.system_ = system
        self.decomposition_ = dec
        self.verdict_ = check_mass_action(system, dec)
        self.n_features_in_ = system.network.n
        return self

    def transform(self, X):
        check_is_fitted(self, "verdict_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        if np.any(X <= 0):
            raise ValueError("anchor points must be strictly positive")
        self.results_ = [
            solve_equilibrium(self.system_, self.decomposition_, self.verdict_, row, self.class_kind) for row in X
        ]
        return np.vstack([r.x_in_class for r in self.results_])

    def fit_transform(self, X, y=None, anchors=None):
        if anchors is None:
            raise ValueError("fit_transform needs anchors=")
        return self.fit(X).transform(anchors)
