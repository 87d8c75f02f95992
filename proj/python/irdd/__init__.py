"""Isotonic regression discontinuity estimators.

Thin wrapper around the compiled _irdd module: monotone least-squares fits at
support boundaries, sharp/fuzzy discontinuity estimates with boundary
correction, trimmed wild-bootstrap intervals, Monte Carlo tables, and
limit-law simulation helpers.
"""

try:
    from . import _irdd as _impl  # wheel layout: irdd/_irdd.so
except ImportError:
    import _irdd as _impl  # build-tree layout: _irdd.so on PYTHONPATH

DegenerateWindowError = _impl.DegenerateWindowError
InsufficientDataError = _impl.InsufficientDataError
WeakDiscontinuityError = _impl.WeakDiscontinuityError

baseline_estimate = _impl.baseline_estimate
chernoff_draw = _impl.chernoff_draw
dgp_sample = _impl.dgp_sample
estimate_cstar = _impl.estimate_cstar
eval_fit = _impl.eval_fit
fit = _impl.fit
fuzzy_estimate = _impl.fuzzy_estimate
mc_table = _impl.mc_table
sharp_estimate = _impl.sharp_estimate
sharp_wild_ci = _impl.sharp_wild_ci

__all__ = [
    "DegenerateWindowError",
    "InsufficientDataError",
    "WeakDiscontinuityError",
    "baseline_estimate",
    "chernoff_draw",
    "dgp_sample",
    "estimate_cstar",
    "eval_fit",
    "fit",
    "fuzzy_estimate",
    "mc_table",
    "sharp_estimate",
    "sharp_wild_ci",
]
