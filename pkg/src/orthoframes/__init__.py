"""orthoframes: localized kernels and tight needlet frames for classical
orthogonal expansions.

Submodules
----------
cutoff      admissible cutoff profiles with slowly growing derivative norms
orthopoly   stable orthogonal polynomial / function evaluation
quadrature  Gaussian rules (tridiagonal eigenvalue construction)
kernels     cutoff-weighted kernels, distances, weight factors
needlets    tight needlet frames with analysis / synthesis
decay       decay envelopes, bound fits, wavelet, counterexample suite
cli         command-line front end
"""

from . import cutoff, decay, kernels, needlets, orthopoly, quadrature

__version__ = "0.1.0"

__all__ = [
    "cutoff",
    "orthopoly",
    "quadrature",
    "kernels",
    "needlets",
    "decay",
    "__version__",
]
