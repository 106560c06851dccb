"""p-Bergman kernels, metrics and lacunary L^p criteria."""

import json as _json

from . import _pbergman
from ._pbergman import (
    Domain,
    MarginError,
    NumericalError,
    criterion_integral,
    direct_lp,
    equivalence_ratio,
    lacunarity_constant,
)

__all__ = [
    "Domain",
    "MarginError",
    "NumericalError",
    "Engine",
    "criterion_integral",
    "direct_lp",
    "equivalence_ratio",
    "lacunarity_constant",
    "lacunary",
]


class Engine(_pbergman.Engine):
    """Extremal-problem front end; results come back as plain dicts."""

    def kernel(self, p, z):
        return _json.loads(self.kernel_json(p, complex(z)))


def lacunary(exponents, coefficients, p, radial=256, angular=0):
    return _json.loads(_pbergman.lacunary_json(list(exponents), list(coefficients), p, radial, angular))
