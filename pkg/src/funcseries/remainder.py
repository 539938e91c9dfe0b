"""Truncation-error machinery for the functional expansions.

Three estimates are provided for the error after summing the first
N + 1 terms:

* :func:`measured_error` -- the exact |f(z) - partial_sum(z, N)|;
* :func:`lagrange_bound` -- real-segment bound in the mean-value style:
  |s(z) - s0|^(N+1)/(N+1)! times the largest magnitude of ladder entry
  N + 1 over sampled preimages of the s-segment.  The inner function
  must be monotone between z0 and z (checked by sampling the sign of
  s'); the intermediate point is unknown, so the bound maximizes over
  a sampled grid, which in principle can under-estimate.  The sample
  count is recorded on the result.
* :func:`complex_bound` -- bound for complex arguments treating the
  unknown mean-value rotation adversarially inside its unit disk, which
  makes it |s(z) - s0|^(N+1)/(N+1)! times |ladder entry N+1 at z0|.

All functions are pure over their inputs; note that they extend the
expansion's cached ladder, so do not share one SeriesExpansion between
threads while bounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonMonotoneComposite
from .expr import differentiate, evaluate
from .series import SeriesExpansion, partial_sum

#: grid size used for monotonicity checking and the intermediate-point scan
DEFAULT_SAMPLES = 64


@dataclass(frozen=True)
class RemainderEstimate:
    """A truncation-error number: exact measurement or upper bound."""

    order: int
    bound: float
    kind: str  # "measured" | "real-lagrange" | "complex-theta"
    z: complex
    samples: int | None = None

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "order": self.order,
            "z": [self.z.real, self.z.imag],
            "bound": self.bound,
            "samples": self.samples,
        }


def measured_error(exp: SeriesExpansion, z: complex, upto: int) -> RemainderEstimate:
    """Exact truncation error |f(z) - partial_sum(z, upto)|."""
    value = abs(evaluate(exp.f, z) - partial_sum(exp, z, upto))
    return RemainderEstimate(upto, value, "measured", complex(z))


def lagrange_bound(exp: SeriesExpansion, z: float, upto: int,
                   samples: int = DEFAULT_SAMPLES) -> RemainderEstimate:
    """Mean-value style bound on the real segment from z0 to z.

    Raises NonMonotoneComposite when the sampled s' changes sign (or
    vanishes) on the segment, since then the preimage of an
    intermediate s-value is ill-defined.
    """
    z = complex(z)
    if z.imag != 0 or exp.z0.imag != 0:
        raise ValueError("the real-segment bound needs real z and z0")
    if samples < 2:
        raise ValueError("need at least 2 samples")

    grid = np.linspace(exp.z0.real, z.real, samples)
    chain = exp.chain()
    # monotonicity of s: sample s' and require one strict sign
    ds = differentiate(exp.s, chain.letter)
    signs = set()
    for x in grid:
        v = evaluate(ds, complex(x))
        signs.add(1 if v.real > 0 else (-1 if v.real < 0 else 0))
    if len(signs) != 1 or 0 in signs:
        raise NonMonotoneComposite(
            f"s' changes sign on [{exp.z0.real}, {z.real}] "
            f"({samples} samples)")

    entry = chain.entry(upto + 1)
    largest = max(abs(evaluate(entry, complex(x))) for x in grid)
    span = abs(evaluate(exp.s, z) - exp.s0)
    bound = span ** (upto + 1) / math.factorial(upto + 1) * largest
    return RemainderEstimate(upto, bound, "real-lagrange", z, samples)


def complex_bound(exp: SeriesExpansion, z: complex, upto: int) -> RemainderEstimate:
    """Bound valid for complex arguments, evaluated at the expansion point.

    Depends only on |s(z) - s0| and the (upto+1)'th ladder entry at z0;
    the unknown unit-disk rotation contributes its supremum 1.
    """
    z = complex(z)
    entry_value = abs(evaluate(exp.chain().entry(upto + 1), exp.z0))
    span = abs(evaluate(exp.s, z) - exp.s0)
    bound = span ** (upto + 1) / math.factorial(upto + 1) * entry_value
    return RemainderEstimate(upto, bound, "complex-theta", z)
