"""Adjacency spectra: spectral radius, Perron vector, full spectrum, 4-walks.

Two eigen-backends are provided:

* ``dense_full``: Householder reduction to tridiagonal form followed by
  implicit QL with Wilkinson-style shifts (eigenvalues only); the Perron
  vector is then recovered by inverse iteration.
* ``power_iteration``: power iteration on ``A + shift*I`` (shift defaults to
  the maximum degree so the top eigenvalue dominates even for bipartite
  graphs).  Accepts a warm-start vector.

Disconnected graphs are handled component by component.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, GraphError, bits_of

DEFAULT_DENSE_CAP = 2048
POWER_TOL = 1e-10
POWER_MAX_ITER = 100_000


def dense_cap() -> int:
    return int(os.environ.get("BTR_DENSE_CAP", DEFAULT_DENSE_CAP))


class ConvergenceError(RuntimeError):
    def __init__(self, msg: str, residual: float):
        super().__init__(f"{msg} (last residual {residual:.3e})")
        self.residual = residual


@dataclass
class SpectralSummary:
    lam: float
    perron: np.ndarray
    cw4: int
    method: str
    residual: float
    eigenvalues: np.ndarray | None = field(default=None)

    def to_dict(self, with_vector: bool = False) -> dict:
        out = {"lambda": self.lam, "cw4": self.cw4, "method": self.method,
               "residual": self.residual}
        if self.eigenvalues is not None:
            out["eigenvalues"] = [float(x) for x in self.eigenvalues]
        if with_vector:
            out["perron"] = [float(x) for x in self.perron]
        return out


# -- dense symmetric eigensolver --------------------------------------------

def tridiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Householder reduction of a symmetric matrix.

    Returns ``(d, e)``: the diagonal and the sub-diagonal (``e[k]`` couples
    ``k`` and ``k+1``; length ``n-1``).
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros(0)
    d = np.empty(n)
    e = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        x = a[k + 1:, k]
        norm = math.sqrt(float(x @ x))
        d[k] = a[k, k]
        if norm == 0.0:
            e[k] = 0.0
            continue
        alpha = -norm if x[0] >= 0 else norm
        v = x.copy()
        v[0] -= alpha
        v /= math.sqrt(float(v @ v))
        block = a[k + 1:, k + 1:]
        p = block @ v
        w = p - float(v @ p) * v
        block -= 2.0 * (np.outer(v, w) + np.outer(w, v))
        e[k] = alpha
    if n >= 2:
        d[n - 2] = a[n - 2, n - 2]
        e[n - 2] = a[n - 1, n - 2]
    d[n - 1] = a[n - 1, n - 1]
    return d, e


def tridiagonal_ql(d, e, max_iter: int = 60) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix by implicit QL."""
    d = [float(x) for x in d]
    n = len(d)
    e = [float(x) for x in e] + [0.0]
    eps = np.finfo(float).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise ConvergenceError("QL iteration did not converge", abs(e[l]))
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            early = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    early = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if early:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.array(sorted(d, reverse=True))


def symmetric_eigenvalues(a: np.ndarray) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, descending."""
    d, e = tridiagonalize(a)
    return tridiagonal_ql(d, e)


# -- power iteration ---------------------------------------------------------

def power_iteration(a: np.ndarray, x0=None, tol: float = POWER_TOL,
                    max_iter: int = POWER_MAX_ITER, shift: float | None = None):
    """Dominant eigenpair of a nonnegative symmetric matrix.

    Iterates on ``a + shift*I``.  Returns ``(lam, x, residual, iterations)``
    where ``residual = ||a x - lam x||``; stops once
    ``residual <= tol * max(1, lam)``.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if shift is None:
        shift = float(a.sum(axis=1).max()) if n else 0.0
    if x0 is None:
        x = np.ones(n)
    else:
        # keep every coordinate positive so the Perron direction is present
        x = np.abs(np.asarray(x0, dtype=float)) + 1e-3 / math.sqrt(max(n, 1))
    x /= np.linalg.norm(x)
    lam = 0.0
    res = math.inf
    for it in range(1, max_iter + 1):
        y = a @ x
        lam = float(x @ y)
        res = float(np.linalg.norm(y - lam * x))
        if res <= tol * max(1.0, lam):
            return lam, x, res, it
        y += shift * x
        x = y / np.linalg.norm(y)
    raise ConvergenceError(f"power iteration exceeded {max_iter} iterations", res)


def _inverse_iteration(a: np.ndarray, lam: float, tol: float):
    n = a.shape[0]
    x = np.ones(n) / math.sqrt(n)
    mu = lam + 1e-10 * max(1.0, abs(lam))
    m = a - mu * np.eye(n)
    res = math.inf
    for _ in range(50):
        try:
            y = np.linalg.solve(m, x)
        except np.linalg.LinAlgError:
            mu += 1e-9 * max(1.0, abs(lam))
            m = a - mu * np.eye(n)
            continue
        x = y / np.linalg.norm(y)
        if x.sum() < 0:
            x = -x
        res = float(np.linalg.norm(a @ x - lam * x))
        if res <= tol * max(1.0, lam):
            break
    return x, res


def _fix_sign(x: np.ndarray, tol: float) -> np.ndarray:
    if x[np.argmax(np.abs(x))] < 0:
        x = -x
    x = np.where((x < 0) & (x >= -tol), 0.0, x)
    return x


# -- public API ----------------------------------------------------------------

def closed_walks_4(g: Graph, check: bool = True) -> int:
    """Number of closed walks of length 4, i.e. trace(A^4), exactly.

    With ``check`` the value is cross-checked against
    ``8*C4 + 2*sum(d(v)^2) - 2*e(G)``; a mismatch raises ``ArithmeticError``.
    """
    trace = _trace_a4(g)
    if check:
        from .counting import count_c4

        degs = g.degrees()
        via_c4 = 8 * count_c4(g) + 2 * sum(d * d for d in degs) - 2 * g.edge_count
        if via_c4 != trace:
            raise ArithmeticError(f"closed-walk mismatch: trace {trace} vs count {via_c4}")
    return trace


def _trace_a4(g: Graph) -> int:
    if g.n == 0:
        return 0
    if g.n <= 512:
        a = g.adjacency_matrix(np.int64)
        a2 = a @ a
    else:
        # BLAS product of 0/1 matrices is exact: all partial sums are integers <= n
        a = g.adjacency_matrix(np.float64)
        a2 = np.rint(a @ a).astype(np.int64)
    return int((a2 * a2).sum())


def _components_adj(g: Graph):
    a = g.adjacency_matrix(np.float64)
    for comp in g.components():
        idx = list(bits_of(comp))
        yield idx, a[np.ix_(idx, idx)]


def spectral_radius(g: Graph, mode: str = "auto", tol: float = POWER_TOL,
                    x0=None, max_iter: int = POWER_MAX_ITER,
                    with_cw4: bool = True) -> SpectralSummary:
    """Largest adjacency eigenvalue and a nonnegative unit Perron vector.

    ``mode`` is ``"dense_full"``, ``"power_iteration"`` or ``"auto"`` (dense
    below the dense cap).  ``x0`` warm-starts power iteration.
    """
    if g.n == 0:
        raise GraphError("spectral radius of the null graph is undefined")
    if mode == "auto":
        mode = "dense_full" if g.n <= dense_cap() else "power_iteration"
    if mode not in ("dense_full", "power_iteration"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "dense_full" and g.n > dense_cap():
        raise GraphError(f"order {g.n} above dense cap {dense_cap()}")

    best = None
    for idx, sub in _components_adj(g):
        if len(idx) == 1:
            lam, vec, res = 0.0, np.ones(1), 0.0
        elif mode == "dense_full":
            lam = float(symmetric_eigenvalues(sub)[0])
            vec, res = _inverse_iteration(sub, lam, tol)
        else:
            start = None if x0 is None else np.asarray(x0, dtype=float)[idx]
            lam, vec, res, _ = power_iteration(sub, start, tol=tol, max_iter=max_iter)
        # keep the first component that attains the maximum
        if best is None or lam > best[0] + tol * max(1.0, lam):
            best = (lam, idx, vec, res)
    lam, idx, vec, res = best
    x = np.zeros(g.n)
    x[idx] = _fix_sign(vec, tol)
    x /= np.linalg.norm(x)
    a = g.adjacency_matrix(np.float64)
    res = float(np.linalg.norm(a @ x - lam * x))
    cw4 = _trace_a4(g) if with_cw4 else -1
    return SpectralSummary(lam=lam, perron=x, cw4=cw4, method=mode, residual=res)


def full_spectrum(g: Graph) -> SpectralSummary:
    """Every adjacency eigenvalue (descending) plus the Perron data."""
    if g.n > dense_cap():
        raise GraphError(f"order {g.n} above dense cap {dense_cap()}")
    eig = symmetric_eigenvalues(g.adjacency_matrix(np.float64)) if g.n else np.zeros(0)
    if g.n == 0:
        return SpectralSummary(lam=0.0, perron=np.zeros(0), cw4=0, method="dense_full",
                               residual=0.0, eigenvalues=eig)
    summ = spectral_radius(g, mode="dense_full")
    summ.eigenvalues = eig
    return summ


def hofmeister_margin(g: Graph, lam: float | None = None) -> float:
    """lambda^2 - (1/n) * sum of squared degrees; never below -tol."""
    if g.n == 0:
        raise GraphError("empty graph")
    if lam is None:
        lam = spectral_radius(g, with_cw4=False).lam
    return lam * lam - sum(d * d for d in g.degrees()) / g.n
