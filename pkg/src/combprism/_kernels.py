"""Integer kernels behind the hot loops: slack evaluation and exact rank.

Two interchangeable backends compute identical results on int64 data:

* ``numba``  -- @njit loops, used by default when numba imports cleanly;
* ``numpy``  -- vectorized fallback with no compilation step.

Selection is via the ``COMBPRISM_BACKEND`` environment variable
(``auto`` | ``numba`` | ``numpy``), read on first kernel use.  The rank
kernel is fraction-free integer elimination; it bails out (return -1) if
entry magnitudes approach int64 overflow and the caller reruns the
computation with arbitrary-precision rationals, so results stay exact
for any input.

``benchmarks/bench_kernels.py`` times the two backends side by side.
"""

from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

# Entry magnitude above which an int64 product of two entries could overflow.
_GUARD = 1 << 31

_impl = None
_backend_name = None


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def _np_slack_block(coeffs: np.ndarray, rhs: np.ndarray, incidence: np.ndarray) -> np.ndarray:
    return coeffs @ incidence.T - rhs[:, None]


def _np_min_slack(coeffs: np.ndarray, rhs: np.ndarray, incidence: np.ndarray):
    rows = coeffs.shape[0]
    mins = np.empty(rows, dtype=np.int64)
    args = np.empty(rows, dtype=np.int64)
    chunk = max(1, (1 << 24) // max(1, incidence.shape[0]))  # ~128MB of int64 per block
    inc_t = incidence.T
    for start in range(0, rows, chunk):
        stop = min(rows, start + chunk)
        block = coeffs[start:stop] @ inc_t
        a = block.argmin(axis=1)
        args[start:stop] = a
        mins[start:stop] = block[np.arange(stop - start), a] - rhs[start:stop]
    return mins, args


def _np_bareiss_rank(mat: np.ndarray) -> int:
    a = np.array(mat, dtype=np.int64, copy=True)
    rows, cols = a.shape
    rank = 0
    prev = np.int64(1)
    for col in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        r = rank + int(nz[0])
        if r != rank:
            a[[rank, r]] = a[[r, rank]]
        if np.abs(a[rank:, col:]).max() >= _GUARD:
            return -1
        p = a[rank, col]
        block = a[rank + 1:, col:]
        a[rank + 1:, col:] = (p * block - np.outer(a[rank + 1:, col], a[rank, col:])) // prev
        prev = p
        rank += 1
    return rank


class _NumpyImpl:
    name = "numpy"
    slack_block = staticmethod(_np_slack_block)
    min_slack = staticmethod(_np_min_slack)
    bareiss_rank = staticmethod(_np_bareiss_rank)


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

def _build_numba_impl():
    # workqueue avoids hard-to-diagnose TBB/OpenMP version issues and keeps
    # thread scheduling deterministic enough for reproducible timing
    os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")
    import numba

    @numba.njit(parallel=True, cache=False)
    def slack_block(coeffs, rhs, incidence):
        rows = coeffs.shape[0]
        n_cols = incidence.shape[0]
        n_edges = coeffs.shape[1]
        out = np.empty((rows, n_cols), dtype=np.int64)
        for i in numba.prange(rows):
            for c in range(n_cols):
                acc = np.int64(0)
                for e in range(n_edges):
                    acc += coeffs[i, e] * incidence[c, e]
                out[i, c] = acc - rhs[i]
        return out

    @numba.njit(parallel=True, cache=False)
    def min_slack(coeffs, rhs, incidence):
        rows = coeffs.shape[0]
        n_cols = incidence.shape[0]
        n_edges = coeffs.shape[1]
        mins = np.empty(rows, dtype=np.int64)
        args = np.empty(rows, dtype=np.int64)
        for i in numba.prange(rows):
            best = np.int64(2) ** 62
            best_c = np.int64(0)
            for c in range(n_cols):
                acc = np.int64(0)
                for e in range(n_edges):
                    acc += coeffs[i, e] * incidence[c, e]
                if acc < best:
                    best = acc
                    best_c = c
            mins[i] = best - rhs[i]
            args[i] = best_c
        return mins, args

    @numba.njit(cache=False)
    def bareiss_rank(mat):
        a = mat.astype(np.int64).copy()
        rows, cols = a.shape
        rank = 0
        prev = np.int64(1)
        for col in range(cols):
            if rank == rows:
                break
            piv = -1
            for r in range(rank, rows):
                if a[r, col] != 0:
                    piv = r
                    break
            if piv == -1:
                continue
            if piv != rank:
                for c in range(cols):
                    tmp = a[rank, c]
                    a[rank, c] = a[piv, c]
                    a[piv, c] = tmp
            big = np.int64(0)
            for r in range(rank, rows):
                for c in range(col, cols):
                    v = a[r, c]
                    if v < 0:
                        v = -v
                    if v > big:
                        big = v
            if big >= _GUARD:
                return -1
            p = a[rank, col]
            for r in range(rank + 1, rows):
                f = a[r, col]
                for c in range(col, cols):
                    a[r, c] = (p * a[r, c] - f * a[rank, c]) // prev
            prev = p
            rank += 1
        return rank

    class _NumbaImpl:
        pass

    _NumbaImpl.name = "numba"
    _NumbaImpl.slack_block = staticmethod(slack_block)
    _NumbaImpl.min_slack = staticmethod(min_slack)
    _NumbaImpl.bareiss_rank = staticmethod(bareiss_rank)
    return _NumbaImpl


def _resolve():
    global _impl, _backend_name
    if _impl is not None:
        return _impl
    mode = os.environ.get("COMBPRISM_BACKEND", "auto").lower()
    if mode not in ("auto", "numba", "numpy"):
        raise ValueError(f"COMBPRISM_BACKEND must be auto|numba|numpy, got {mode!r}")
    if mode in ("auto", "numba"):
        try:
            _impl = _build_numba_impl()
        except ImportError:
            if mode == "numba":
                raise
            _impl = _NumpyImpl
    else:
        _impl = _NumpyImpl
    _backend_name = _impl.name
    return _impl


def backend_name() -> str:
    return _resolve().name


def set_num_threads(jobs: int) -> None:
    """Limit kernel parallelism (numba backend only; numpy path is single-threaded)."""
    if _resolve().name == "numba":
        import numba

        numba.set_num_threads(max(1, jobs))


# ---------------------------------------------------------------------------
# Public kernels
# ---------------------------------------------------------------------------

def slack_block(coeffs, rhs, incidence) -> np.ndarray:
    """slack[i, c] = coeffs[i] . incidence[c] - rhs[i], all int64 exact."""
    impl = _resolve()
    return impl.slack_block(
        np.ascontiguousarray(coeffs, dtype=np.int64),
        np.ascontiguousarray(rhs, dtype=np.int64),
        np.ascontiguousarray(incidence, dtype=np.int64),
    )


def min_slack(coeffs, rhs, incidence):
    """Per-row minimum slack and the column index attaining it."""
    impl = _resolve()
    return impl.min_slack(
        np.ascontiguousarray(coeffs, dtype=np.int64),
        np.ascontiguousarray(rhs, dtype=np.int64),
        np.ascontiguousarray(incidence, dtype=np.int64),
    )


def fraction_rank(rows) -> int:
    """Rank over the rationals via exact Fraction elimination (slow, unbounded)."""
    m = [[Fraction(int(x)) for x in row] for row in rows]
    if not m:
        return 0
    rank, cols = 0, len(m[0])
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / pr[c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        rank += 1
        if rank == len(m):
            break
    return rank


def integer_rank(mat) -> int:
    """Exact rank of an integer matrix over the rationals.

    Fraction-free int64 elimination when magnitudes allow, otherwise exact
    rational fallback; the result is exact either way.
    """
    a = np.asarray(mat, dtype=np.int64)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    if np.abs(a).max() < _GUARD:
        r = _resolve().bareiss_rank(a)
        if r >= 0:
            return r
    return fraction_rank(a.tolist())
