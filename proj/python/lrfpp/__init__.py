"""Long-range first-passage percolation laboratory.

Thin Python face over the native core: kernel arithmetic, growth-regime
classification, certified multiscale bounds, growth campaigns, and the
paired oracle check.  Heavy results cross the boundary as JSON text; the
helpers here parse them into dicts.
"""

import json as _json

try:  # installed wheel layout: extension lives inside the package
    from . import _lrfpp as _native  # type: ignore[attr-defined]
except ImportError:  # build-tree layout: extension next to the package
    import _lrfpp as _native  # type: ignore[no-redef]

__version__ = _native.__version__

DomainError = _native.DomainError
BudgetExceeded = _native.BudgetExceeded

rate = _native.rate
total_rate = _native.total_rate
shell_count = _native.shell_count
classify = _native.classify
ansatz_optimize = _native.ansatz_optimize
recursion_bound = _native.recursion_bound
envelope_bound = _native.envelope_bound
passage_bound = _native.passage_bound
ks_two_sample = _native.ks_two_sample
fit_stretched = _native.fit_stretched
fit_superlinear = _native.fit_superlinear
fit_linear_speed = _native.fit_linear_speed


def simulate(config_text, out_dir, jobs=1, seed=None, replicas=None):
    """Run a growth campaign and return the summary as a dict.

    Writes the full artifact directory (manifest, per-replica CSVs,
    occupation dumps, summary) to ``out_dir``.
    """
    return _json.loads(
        _native.simulate(config_text, str(out_dir), jobs, seed, replicas)
    )


def oracle_check(config_text, jobs=1, seed=None, replicas=None):
    """Run the paired growth-vs-shortest-path law check; return the report dict."""
    return _json.loads(_native.oracle_check(config_text, jobs, seed, replicas))


__all__ = [
    "DomainError",
    "BudgetExceeded",
    "__version__",
    "ansatz_optimize",
    "classify",
    "envelope_bound",
    "fit_linear_speed",
    "fit_stretched",
    "fit_superlinear",
    "ks_two_sample",
    "oracle_check",
    "passage_bound",
    "rate",
    "recursion_bound",
    "shell_count",
    "simulate",
    "total_rate",
]
