"""Distributed kernelized contextual bandit simulator (python bindings)."""

try:
    from ._kbandit import *  # noqa: F401,F403  (installed wheel layout)
    from ._kbandit import __doc__ as _core_doc
except ImportError:  # in-tree build: module sits next to the package on sys.path
    from _kbandit import *  # noqa: F401,F403
    from _kbandit import __doc__ as _core_doc

__all__ = [
    "kernel_eval", "kernel_matrix", "information_gain", "logdet_ratio",
    "f1", "f2",
    "qbar_from_theory", "rls_sample", "epsilon_accuracy",
    "theory_alpha_exact", "theory_alpha_approx",
    "MeanStd", "ExactPosterior", "Dictionary", "EmbeddedStats", "approx_mean_var",
    "run_config_file", "run_config_text",
]
