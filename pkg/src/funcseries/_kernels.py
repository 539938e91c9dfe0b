"""Hot array kernels for truncated-series arithmetic.

Cauchy products, series long division, and Horner composition are the
inner loops of the jet oracle; orders stay small in routine use but the
cost is O(N^2)..O(N^3), so the loop kernels are compiled with numba
when it is importable.  Set ``FUNCSERIES_NO_NUMBA=1`` to force the
pure-numpy fallback (it is also used automatically when numba is
missing).  ``benchmarks/bench_kernels.py`` compares the two paths.

All kernels take C-contiguous complex128 arrays of length ``order + 1``
and return a fresh array of the same length.
"""

from __future__ import annotations

import os

import numpy as np


def _np_series_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(a, b)[: order + 1]


def _np_series_div(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros(order + 1, dtype=np.complex128)
    for n in range(order + 1):
        acc = a[n] - np.dot(out[:n], b[n:0:-1])
        out[n] = acc / b[0]
    return out


def _np_series_compose(outer: np.ndarray, inner: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros(order + 1, dtype=np.complex128)
    out[0] = outer[order]
    for k in range(order - 1, -1, -1):
        out = np.convolve(out, inner)[: order + 1]
        out[0] += outer[k]
    return out


_NUMPY_IMPL = {
    "series_mul": _np_series_mul,
    "series_div": _np_series_div,
    "series_compose": _np_series_compose,
}

IMPLEMENTATIONS: dict[str, dict] = {"numpy": _NUMPY_IMPL}

try:  # pragma: no cover - absence of numba is environment-dependent
    import numba
except ImportError:
    numba = None

if numba is not None:
    _njit = numba.njit(cache=True)

    @_njit
    def _nb_series_mul(a, b, order):
        out = np.zeros(order + 1, dtype=np.complex128)
        for i in range(order + 1):
            acc = 0j
            top = min(i, a.shape[0] - 1)
            for j in range(top + 1):
                if i - j < b.shape[0]:
                    acc += a[j] * b[i - j]
            out[i] = acc
        return out

    @_njit
    def _nb_series_div(a, b, order):
        out = np.zeros(order + 1, dtype=np.complex128)
        for n in range(order + 1):
            acc = a[n]
            for i in range(n):
                acc -= out[i] * b[n - i]
            out[n] = acc / b[0]
        return out

    @_njit
    def _nb_series_compose(outer, inner, order):
        out = np.zeros(order + 1, dtype=np.complex128)
        out[0] = outer[order]
        scratch = np.zeros(order + 1, dtype=np.complex128)
        for k in range(order - 1, -1, -1):
            for i in range(order + 1):
                acc = 0j
                for j in range(i + 1):
                    acc += out[j] * inner[i - j]
                scratch[i] = acc
            out[:] = scratch
            out[0] += outer[k]
        return out

    IMPLEMENTATIONS["numba"] = {
        "series_mul": _nb_series_mul,
        "series_div": _nb_series_div,
        "series_compose": _nb_series_compose,
    }


def _select_backend() -> str:
    if os.environ.get("FUNCSERIES_NO_NUMBA", "").strip() not in ("", "0"):
        return "numpy"
    return "numba" if "numba" in IMPLEMENTATIONS else "numpy"


BACKEND = _select_backend()
_ACTIVE = IMPLEMENTATIONS[BACKEND]


def series_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    """Coefficients of a*b truncated at the given order."""
    return _ACTIVE["series_mul"](a, b, order)


def series_div(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    """Coefficients of a/b truncated at the given order; b[0] must not be ~0."""
    return _ACTIVE["series_div"](a, b, order)


def series_compose(outer: np.ndarray, inner: np.ndarray, order: int) -> np.ndarray:
    """Coefficients of outer(inner(t)) truncated; inner[0] must be exactly 0."""
    return _ACTIVE["series_compose"](outer, inner, order)
