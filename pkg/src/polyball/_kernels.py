"""Float hot loops: counter-based random stream, batch k-norms, Monte Carlo hit counts.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy version.
Both consume the same random stream, so hit counts agree between backends.
The active backend is chosen once at import from ``POLYBALL_BACKEND``
(``numba`` or ``numpy``); numba is used when it is importable and not
disabled.

Random stream: draw ``i`` of stream ``seed`` is ``mix(seed + (i + 1) * G)`` with
``G = 0x9E3779B97F4A7C15`` and the splitmix64 finalizer::

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

all arithmetic mod 2**64. The uniform is ``(z >> 11) * 2**-53`` in [0, 1).
Sample ``j`` coordinate ``c`` of a d-dimensional run uses draw ``j*d + c``.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1

# body kinds understood by count_hits
CUBE = 0
RHO = 1
RHO_STAR = 2
HALFSPACE_UNIT_CUBE = 3

_CHUNK = 1 << 16


def _requested_backend() -> str:
    name = os.environ.get("POLYBALL_BACKEND", "numba").strip().lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"POLYBALL_BACKEND must be 'numba' or 'numpy', got {name!r}")
    if name == "numba" and numba is None:
        return "numpy"
    return name


BACKEND = _requested_backend()


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if numba is not None else ("numpy",)


def splitmix64_reference(seed: int, index: int) -> int:
    """Pure-Python reference for draw ``index`` of stream ``seed``."""
    z = (seed + (index + 1) * GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


# ---------------------------------------------------------------- numpy path


def uniforms_numpy(seed: int, start: int, n: int) -> np.ndarray:
    idx = np.arange(start + 1, start + n + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def knorm_rows_numpy(x: np.ndarray, k: float) -> np.ndarray:
    a = -np.sort(-np.abs(x), axis=1)
    m = int(np.floor(k))
    d = a.shape[1]
    out = a[:, :m].sum(axis=1)
    if m < d:
        out = out + (k - m) * a[:, m]
    return out


def _member_numpy(pts, kind, k, a, c):
    if kind == CUBE:
        return np.all(np.abs(pts) <= 1.0, axis=1)
    if kind == RHO:
        return knorm_rows_numpy(pts, k) <= 1.0
    if kind == RHO_STAR:
        ab = np.abs(pts)
        return (ab.max(axis=1) <= 1.0) & (ab.sum(axis=1) <= k)
    if kind == HALFSPACE_UNIT_CUBE:
        return (pts + 0.5) @ a <= c
    raise ValueError(f"unknown body kind {kind}")


def count_hits_numpy(kind, k, a, c, d, w, n, seed):
    hits = 0
    done = 0
    while done < n:
        m = min(_CHUNK, n - done)
        u = uniforms_numpy(seed, done * d, m * d).reshape(m, d)
        pts = w * (2.0 * u - 1.0)
        hits += int(np.count_nonzero(_member_numpy(pts, kind, k, a, c)))
        done += m
    return hits


def count_hits_callable(member, d, w, n, seed):
    """Hit count for an arbitrary vectorized predicate ``member(points) -> bool array``."""
    hits = 0
    done = 0
    while done < n:
        m = min(_CHUNK, n - done)
        u = uniforms_numpy(seed, done * d, m * d).reshape(m, d)
        pts = w * (2.0 * u - 1.0)
        hits += int(np.count_nonzero(np.asarray(member(pts), dtype=bool)))
        done += m
    return hits


# ---------------------------------------------------------------- numba path

if numba is not None:
    _G = np.uint64(GOLDEN)
    _M1 = np.uint64(MIX1)
    _M2 = np.uint64(MIX2)
    _S30 = np.uint64(30)
    _S27 = np.uint64(27)
    _S31 = np.uint64(31)
    _S11 = np.uint64(11)

    @numba.njit(cache=True, nogil=True)
    def _draw(seed, index):
        z = seed + (index + np.uint64(1)) * _G
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
        z = z ^ (z >> _S31)
        return np.float64(z >> _S11) * (1.0 / 9007199254740992.0)

    @numba.njit(cache=True, nogil=True)
    def uniforms_numba(seed, start, n):
        out = np.empty(n, dtype=np.float64)
        s = np.uint64(seed)
        base = np.uint64(start)
        for i in range(n):
            out[i] = _draw(s, base + np.uint64(i))
        return out

    @numba.njit(cache=True, nogil=True)
    def _knorm_point(x, k, buf):
        # insertion sort of |x| into buf, descending; d is small
        d = x.shape[0]
        for i in range(d):
            v = abs(x[i])
            j = i
            while j > 0 and buf[j - 1] < v:
                buf[j] = buf[j - 1]
                j -= 1
            buf[j] = v
        m = int(np.floor(k))
        total = 0.0
        for i in range(m):
            total += buf[i]
        if m < d:
            total += (k - m) * buf[m]
        return total

    @numba.njit(cache=True, nogil=True)
    def knorm_rows_numba(x, k):
        out = np.empty(x.shape[0], dtype=np.float64)
        buf = np.empty(x.shape[1], dtype=np.float64)
        for r in range(x.shape[0]):
            out[r] = _knorm_point(x[r], k, buf)
        return out

    @numba.njit(cache=True, nogil=True)
    def _count_hits_numba(kind, k, a, c, d, w, n, seed):
        s = np.uint64(seed)
        pt = np.empty(d, dtype=np.float64)
        buf = np.empty(d, dtype=np.float64)
        hits = 0
        for j in range(n):
            base = np.uint64(j) * np.uint64(d)
            for t in range(d):
                pt[t] = w * (2.0 * _draw(s, base + np.uint64(t)) - 1.0)
            inside = True
            if kind == 0:
                for t in range(d):
                    if abs(pt[t]) > 1.0:
                        inside = False
                        break
            elif kind == 1:
                inside = _knorm_point(pt, k, buf) <= 1.0
            elif kind == 2:
                tot = 0.0
                for t in range(d):
                    v = abs(pt[t])
                    if v > 1.0:
                        inside = False
                        break
                    tot += v
                if inside:
                    inside = tot <= k
            else:
                dot = 0.0
                for t in range(d):
                    dot += (pt[t] + 0.5) * a[t]
                inside = dot <= c
            if inside:
                hits += 1
        return hits

    def count_hits_numba(kind, k, a, c, d, w, n, seed):
        return int(_count_hits_numba(kind, float(k), np.ascontiguousarray(a, dtype=np.float64),
                                     float(c), d, float(w), n, seed & MASK64))


# ---------------------------------------------------------------- dispatch


def _resolve(backend: str | None) -> str:
    name = backend or BACKEND
    if name not in available_backends():
        raise ValueError(f"backend {name!r} is not available; choose from {available_backends()}")
    return name


def uniforms(seed: int, start: int, n: int, backend: str | None = None) -> np.ndarray:
    if _resolve(backend) == "numba":
        return uniforms_numba(seed & MASK64, start, n)
    return uniforms_numpy(seed, start, n)


def knorm_rows(x, k: float, backend: str | None = None) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.float64)
    if _resolve(backend) == "numba":
        return knorm_rows_numba(x, float(k))
    return knorm_rows_numpy(x, float(k))


def count_hits(kind: int, k: float, a, c: float, d: int, w: float, n: int, seed: int,
               backend: str | None = None) -> int:
    a = np.zeros(d) if a is None else np.asarray(a, dtype=np.float64)
    if _resolve(backend) == "numba":
        return count_hits_numba(kind, k, a, c, d, w, n, seed)
    return count_hits_numpy(kind, float(k), a, float(c), d, float(w), n, seed)
