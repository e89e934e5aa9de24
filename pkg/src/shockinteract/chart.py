"""Characteristic-coordinate region, its lattice, and the phi normalization.

Lattice layout
--------------
``v`` is sampled with spacing ``h = eps / N`` and ``u`` with spacing
``hu = a h``, so lattice node ``(i, j)`` sits at ``(i hu, j h)``. With this
choice the lower shock ``u = a v`` is the lattice diagonal ``i = j`` and
each column ``i`` ends exactly on it. The other shock ``u = v`` crosses the
columns at height ``i hu``; an extra node is placed there for every column,
so both shock traces are sampled at exact nodes. Values on the extra
horizontal segments through those nodes are interpolated along columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import sparse
from scipy.interpolate import CubicSpline
from scipy.spatial import cKDTree

from .errors import BadResolution, InadmissibleConfiguration, NoConvergence

INTERIOR, DIAGONAL, LOWER, ORIGIN = 0, 1, 2, 3
KIND_NAMES = {INTERIOR: "interior", DIAGONAL: "diagonal", LOWER: "lower", ORIGIN: "origin"}

_COINCIDE = 1e-9


@dataclass(frozen=True)
class Region:
    epsilon: float
    a: float

    def __post_init__(self) -> None:
        if not self.epsilon > 0.0:
            raise InadmissibleConfiguration("epsilon must be positive")
        if not 0.0 < self.a < 1.0:
            raise InadmissibleConfiguration("a must lie in (0, 1)")


def contains(region: Region, u, v):
    """``0 <= u <= v <= u/a <= eps``, written without dividing by ``a``."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    ok = (u >= 0.0) & (u <= v) & (region.a * v <= u) & (u <= region.a * region.epsilon)
    return bool(ok) if ok.ndim == 0 else ok


def lagrange_weights(xs: np.ndarray, x: float, order: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Indices and weights of local Lagrange interpolation at ``x``."""
    n = len(xs)
    m = min(order, n)
    k = int(np.searchsorted(xs, x))
    lo = int(np.clip(k - m // 2, 0, n - m))
    idx = np.arange(lo, lo + m)
    pts = xs[idx]
    w = np.ones(m)
    for p in range(m):
        for q in range(m):
            if q != p:
                w[p] *= (x - pts[q]) / (pts[p] - pts[q])
    return idx, w


def first_cell_weights(d1, d2):
    """Weights of ``int_{x0}^{x1}`` of the quadratic through ``x0 < x1 < x2``.

    ``d1 = x1 - x0`` and ``d2 = x2 - x1``.
    """
    d1, d2 = np.asarray(d1, dtype=float), np.asarray(d2, dtype=float)
    w0 = d1 * (2.0 * d1 + 3.0 * d2) / (6.0 * (d1 + d2))
    w1 = d1 * (d1 + 3.0 * d2) / (6.0 * d2)
    w2 = -(d1**3) / (6.0 * d2 * (d1 + d2))
    return np.array([w0, w1, w2])


def _derivative_rows(n: int, step: float) -> np.ndarray:
    """Second-order first-derivative weights on ``n`` uniform points."""
    D = np.zeros((n, n))
    if n == 2:
        D[:, 0], D[:, 1] = -1.0 / step, 1.0 / step
    elif n >= 3:
        D[0, :3] = np.array([-3.0, 4.0, -1.0]) / (2.0 * step)
        D[-1, -3:] = np.array([1.0, -4.0, 3.0]) / (2.0 * step)
        for k in range(1, n - 1):
            D[k, k - 1], D[k, k + 1] = -0.5 / step, 0.5 / step
    return D


def clipped_line_weights(xs: np.ndarray, step: float) -> np.ndarray:
    """Cumulative quadrature weights on ``x0 < x1 < ... `` with ``x1, x2, ...`` uniform.

    Row ``k`` integrates from ``xs[0]`` to ``xs[k]``. The clipped cell
    ``[x0, x1]`` uses the quadratic through ``x0, x1, x2``; the uniform part is
    the trapezoid rule with end corrections ``-(step^2/12)(f'(b) - f'(a))``.
    Both pieces are fourth-order, so the error does not depend on where the
    clipped cell ends.
    """
    xs = np.asarray(xs, dtype=float)
    n = xs.size
    W = np.zeros((n, n))
    if n == 1:
        return W
    if n >= 3:
        W[1:, :3] += first_cell_weights(xs[1] - xs[0], xs[2] - xs[1])
    else:
        W[1, :2] += 0.5 * (xs[1] - xs[0])
    if n == 3:
        # a single uniform cell: reuse the quadratic, mirrored
        W[2, :3] += first_cell_weights(xs[2] - xs[1], xs[1] - xs[0])[::-1]
        return W
    D = _derivative_rows(n - 1, step)
    for k in range(2, n):
        W[k, 1:k] += 0.5 * step
        W[k, 2 : k + 1] += 0.5 * step
        W[k, 1:] -= step**2 / 12.0 * (D[k - 1] - D[0])
    return W


def _padded(lists: list[list[int]]) -> np.ndarray:
    width = max(len(x) for x in lists)
    out = np.full((len(lists), width), -1, dtype=int)
    for k, x in enumerate(lists):
        out[k, : len(x)] = x
    return out


@dataclass
class CharGrid:
    region: Region
    N: int
    h: float
    hu: float
    u: np.ndarray
    v: np.ndarray
    kind: np.ndarray
    lattice_index: np.ndarray  # (N+1, N+1) -> node id or -1
    diag: np.ndarray  # node ids on u = v, column order
    lower: np.ndarray  # node ids on u = a v, row order
    columns: np.ndarray  # padded node ids per column, upward from the diagonal
    rows: np.ndarray  # padded lattice node ids per row, rightward from u = a v
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_nodes(self) -> int:
        return self.u.size

    @property
    def u_trace(self) -> np.ndarray:
        """Parameter of the diagonal trace."""
        return self.u[self.diag]

    @property
    def v_trace(self) -> np.ndarray:
        """Parameter of the lower trace."""
        return self.v[self.lower]

    def kind_names(self) -> list[str]:
        return [KIND_NAMES[int(k)] for k in self.kind]

    # -- line quadrature -------------------------------------------------

    def _line_cumtrapz(self, ids: np.ndarray, coord: np.ndarray, f: np.ndarray) -> np.ndarray:
        mask = ids >= 0
        x = np.where(mask, coord[np.where(mask, ids, 0)], 0.0)
        y = np.where(mask, f[np.where(mask, ids, 0)], 0.0)
        seg_ok = mask[:, 1:] & mask[:, :-1]
        seg = np.where(seg_ok, 0.5 * (y[:, 1:] + y[:, :-1]) * (x[:, 1:] - x[:, :-1]), 0.0)
        return np.concatenate([np.zeros((ids.shape[0], 1)), np.cumsum(seg, axis=1)], axis=1)

    def column_operator(self) -> sparse.csr_matrix:
        """Sparse map from node values to ``int_{diag}^{v} f(u_i, v') dv'`` at every node."""
        if "C" not in self._cache:
            rows, cols, vals = [], [], []
            gx, gw = np.polynomial.legendre.leggauss(3)
            for i, ids in enumerate(self.columns):
                ids = ids[ids >= 0]
                xs = self.v[ids]
                if ids.size >= 5 or ids.size == 1:
                    W = clipped_line_weights(xs, self.h)
                    r, c = np.nonzero(W)
                    rows += ids[r].tolist()
                    cols += ids[c].tolist()
                    vals += W[r, c].tolist()
                    continue
                # short columns near the origin: Gauss cells on the 2D fit
                mid, half = 0.5 * (xs[1:] + xs[:-1]), 0.5 * np.diff(xs)
                pts = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
                L = self.lsq_values(np.full(pts.size, i * self.hu), pts).toarray()
                cell = (half[:, None] * gw[None, :]).ravel()[:, None] * L
                cell = cell.reshape(len(mid), 3, -1).sum(axis=1)
                cum = np.cumsum(cell, axis=0)
                for k in range(1, ids.size):
                    c = np.nonzero(cum[k - 1])[0]
                    rows += [int(ids[k])] * c.size
                    cols += c.tolist()
                    vals += cum[k - 1, c].tolist()
            self._cache["C"] = sparse.csr_matrix((vals, (rows, cols)), shape=(self.n_nodes, self.n_nodes))
        return self._cache["C"]

    def column_cumtrapz(self, f: np.ndarray) -> np.ndarray:
        """``int_{diag}^{v} f(u_i, v') dv'`` at every node.

        Fourth-order: the clipped first cell changes length from column to
        column, and second-order errors there would turn into O(h^2 / a)
        jumps once differenced across columns.
        """
        return self.column_operator() @ f

    def column_totals(self, f: np.ndarray) -> np.ndarray:
        """Full column integrals from the diagonal to the lower shock, per column."""
        return (self.column_operator() @ f)[self.lower]

    def row_cumtrapz(self, f: np.ndarray) -> np.ndarray:
        """``int_{a v_j}^{u} f(u', v_j) du'`` at lattice nodes (NaN on extra nodes)."""
        cum = self._line_cumtrapz(self.rows, self.u, f)
        out = np.full(self.n_nodes, np.nan)
        m = self.rows >= 0
        out[self.rows[m]] = cum[m]
        return out

    @staticmethod
    def trace_cumtrapz(f: np.ndarray, spacing: float) -> np.ndarray:
        out = np.zeros_like(f, dtype=float)
        out[1:] = np.cumsum(0.5 * (f[1:] + f[:-1])) * spacing
        return out

    # -- interpolation operators ------------------------------------------

    def lower_at_diag_heights(self) -> sparse.csr_matrix:
        """Maps lower-trace samples (at ``v_j``) to values at ``v = i hu``."""
        if "Ly" not in self._cache:
            vt = self.v_trace
            rows, cols, vals = [], [], []
            for i, y in enumerate(self.u_trace):
                idx, w = lagrange_weights(vt, y)
                rows += [i] * len(idx)
                cols += idx.tolist()
                vals += w.tolist()
            self._cache["Ly"] = sparse.csr_matrix((vals, (rows, cols)), shape=(self.N + 1, self.N + 1))
        return self._cache["Ly"]

    def extra_row_operator(self) -> sparse.csr_matrix:
        """Trapezoid integrals along ``v = i hu`` from ``u = a v`` to the diagonal.

        Returns a sparse ``(N+1, n_nodes)`` matrix ``E`` so that ``E @ f`` gives
        ``int_{a u_i}^{u_i} f(u', u_i) du'`` for each column ``i``.
        """
        if "E" in self._cache:
            return self._cache["E"]
        a, hu = self.region.a, self.hu
        Ly = self.lower_at_diag_heights().tocsr()
        rows, cols, vals = [], [], []
        for i in range(1, self.N + 1):
            y = i * hu
            ks = [k for k in range(int(np.floor(a * i)) + 1, i) if k > a * i + _COINCIDE]
            if not ks:
                # no lattice column crosses this segment: Gauss on the 2D fit
                gx, gw = np.polynomial.legendre.leggauss(3)
                lo, hi = a * y, y
                S = self.lsq_values(0.5 * (hi + lo) + 0.5 * (hi - lo) * gx, np.full(3, y)).tocoo()
                rows += [i] * S.nnz
                cols += S.col.tolist()
                vals += (0.5 * (hi - lo) * gw[S.row] * S.data).tolist()
                continue
            xs = [a * y] + [k * hu for k in ks] + [i * hu]
            wts = clipped_line_weights(np.array(xs), hu)[-1]
            # left end on the lower shock: interpolate the lower trace
            row = Ly.getrow(i)
            for c, w in zip(row.indices, row.data):
                rows.append(i)
                cols.append(int(self.lower[c]))
                vals.append(wts[0] * w)
            for n, k in enumerate(ks, start=1):
                ids = self.columns[k][self.columns[k] >= 0]
                if ids.size < 4:
                    # short column near the origin: local 2D quadratic fit
                    S = self.lsq_values(np.array([k * hu]), np.array([y])).tocoo()
                    idx, w, ids = S.col, S.data, np.arange(self.n_nodes)
                else:
                    idx, w = lagrange_weights(self.v[ids], y)
                rows += [i] * len(idx)
                cols += ids[idx].tolist()
                vals += (wts[n] * w).tolist()
            rows.append(i)
            cols.append(int(self.diag[i]))
            vals.append(wts[-1])
        E = sparse.csr_matrix((vals, (rows, cols)), shape=(self.N + 1, self.n_nodes))
        self._cache["E"] = E
        return E

    # -- derivatives ----------------------------------------------------

    def lsq_operators(self, k: int = 14) -> dict[str, sparse.csr_matrix]:
        """Sparse derivative operators from local quadratic least-squares fits.

        Fits use the ``k`` nearest nodes in index-scaled coordinates and are
        exact for quadratics, so first derivatives are second-order accurate at
        every node, including shock nodes and the corners. Keys: ``u``, ``v``,
        ``uu``, ``uv``, ``vv``.
        """
        if "D" in self._cache:
            return self._cache["D"]
        xi, zeta = self.u / self.hu, self.v / self.h
        pts = np.column_stack([xi, zeta])
        k = min(k, self.n_nodes)
        _, nb = cKDTree(pts).query(pts, k=k)
        d = pts[nb] - pts[:, None, :]
        dx, dz = d[..., 0], d[..., 1]
        A = np.stack([np.ones_like(dx), dx, dz, 0.5 * dx * dx, dx * dz, 0.5 * dz * dz], axis=-1)
        pinv = np.linalg.pinv(A)
        rows = np.repeat(np.arange(self.n_nodes), k)
        scale = {"u": (1, self.hu), "v": (2, self.h), "uu": (3, self.hu**2),
                 "uv": (4, self.hu * self.h), "vv": (5, self.h**2)}
        ops = {}
        for key, (c, s) in scale.items():
            ops[key] = sparse.csr_matrix((pinv[:, c, :].ravel() / s, (rows, nb.ravel())),
                                         shape=(self.n_nodes, self.n_nodes))
        self._cache["D"] = ops
        return ops

    def lsq_values(self, u: np.ndarray, v: np.ndarray, k: int = 14) -> sparse.csr_matrix:
        """Values of the local quadratic least-squares fit at arbitrary points."""
        pts = np.column_stack([self.u / self.hu, self.v / self.h])
        q = np.column_stack([np.asarray(u, dtype=float) / self.hu, np.asarray(v, dtype=float) / self.h])
        k = min(k, self.n_nodes)
        _, nb = cKDTree(pts).query(q, k=k)
        d = pts[nb] - q[:, None, :]
        dx, dz = d[..., 0], d[..., 1]
        A = np.stack([np.ones_like(dx), dx, dz, 0.5 * dx * dx, dx * dz, 0.5 * dz * dz], axis=-1)
        w = np.linalg.pinv(A)[:, 0, :]
        rows = np.repeat(np.arange(q.shape[0]), k)
        return sparse.csr_matrix((w.ravel(), (rows, nb.ravel())), shape=(q.shape[0], self.n_nodes))

    def derivative_operators(self) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
        """First-derivative operators ``(D_u, D_v)``."""
        ops = self.lsq_operators()
        return ops["u"], ops["v"]

    @property
    def col_of(self) -> np.ndarray:
        """Column index of every node."""
        if "col_of" not in self._cache:
            out = np.empty(self.n_nodes, dtype=int)
            for i, ids in enumerate(self.columns):
                out[ids[ids >= 0]] = i
            self._cache["col_of"] = out
        return self._cache["col_of"]

    @property
    def row_of(self) -> np.ndarray:
        """Row index of every lattice node, -1 for the extra diagonal nodes."""
        if "row_of" not in self._cache:
            out = np.full(self.n_nodes, -1, dtype=int)
            for j, ids in enumerate(self.rows):
                out[ids[ids >= 0]] = j
            self._cache["row_of"] = out
        return self._cache["row_of"]

    def lattice_array(self, f: np.ndarray) -> np.ndarray:
        """Scatter node values onto the ``(N+1, N+1)`` lattice (NaN elsewhere)."""
        out = np.full(self.lattice_index.shape, np.nan)
        m = self.lattice_index >= 0
        out[m] = f[self.lattice_index[m]]
        return out


def build_grid(region: Region, N: int) -> CharGrid:
    if int(N) != N or N < 8:
        raise BadResolution(f"need N >= 8 subdivisions, got {N}")
    N = int(N)
    a, eps = region.a, region.epsilon
    h = eps / N
    hu = a * h
    lat = np.full((N + 1, N + 1), -1, dtype=int)
    us, vs, kinds = [], [], []
    diag_on_lattice = {}
    for i in range(N + 1):
        for j in range(N + 1):
            if j > i or j < a * i - _COINCIDE:
                continue
            if i > 0 and abs(j - a * i) <= _COINCIDE:
                diag_on_lattice[i] = (i, j)  # the diagonal node takes this slot
                continue
            lat[i, j] = len(us)
            us.append(i * hu)
            vs.append(j * h)
            kinds.append(ORIGIN if i == j == 0 else LOWER if i == j else INTERIOR)
    diag = np.empty(N + 1, dtype=int)
    diag[0] = lat[0, 0]
    for i in range(1, N + 1):
        diag[i] = len(us)
        us.append(i * hu)
        vs.append(i * hu)
        kinds.append(DIAGONAL)
    lower = np.array([lat[j, j] for j in range(N + 1)], dtype=int)
    cols = []
    for i in range(N + 1):
        ids = [int(diag[i])] + [int(lat[i, j]) for j in range(N + 1) if lat[i, j] >= 0 and j * h > i * hu]
        cols.append(ids)
    rows = []
    for j in range(N + 1):
        ids = [int(lat[i, j]) for i in range(j, N + 1) if lat[i, j] >= 0]
        rows.append(ids)
    return CharGrid(region, N, h, hu, np.array(us), np.array(vs), np.array(kinds, dtype=np.int8),
                    lat, diag, lower, _padded(cols), _padded(rows))


# -- phi normalization ------------------------------------------------------


@dataclass(frozen=True)
class PhiResult:
    x: np.ndarray
    phi: np.ndarray
    a: float
    iterations: int
    deltas: np.ndarray
    ratios: np.ndarray
    phi0: float
    dphi0: float
    conjugation_residual: float


def _derivative_at_zero(f: Callable, scale: float) -> float:
    hstep = 1e-6 * scale
    return float((-3.0 * f(0.0) + 4.0 * f(hstep) - f(2.0 * hstep)) / (2.0 * hstep))


def phi_normalize(f: Callable[[np.ndarray], np.ndarray], x_max: float, a: float | None = None,
                  n_max: int = 200, tol: float = 1e-14, n_points: int = 1001) -> PhiResult:
    """Limit of ``phi_n = f^(n) / a^n`` on a uniform grid of ``[0, x_max]``.

    ``phi`` conjugates ``f`` to the linear map: ``phi(f(x)) = a phi(x)``.
    """
    if not x_max > 0.0:
        raise InadmissibleConfiguration("x_max must be positive")
    if a is None:
        a = _derivative_at_zero(f, x_max)
    if not 0.0 < a < 1.0:
        raise InadmissibleConfiguration(f"f'(0) = {a} is not in (0, 1); f is not a contraction at 0")
    x = np.linspace(0.0, x_max, n_points)
    fx = np.asarray(f(x), dtype=float)
    if abs(fx[0]) > 1e-14 or np.any(np.abs(fx[1:]) > x[1:] * (1.0 + 1e-12)):
        raise InadmissibleConfiguration("f does not map [0, x_max] into itself with f(0) = 0")
    y = x.copy()
    phi = x.copy()
    deltas = []
    for n in range(1, n_max + 1):
        y = np.asarray(f(y), dtype=float)
        new = y / a**n
        deltas.append(float(np.max(np.abs(new - phi))))
        phi = new
        if deltas[-1] <= tol:
            break
    else:
        raise NoConvergence(f"phi iteration did not reach tol={tol} in {n_max} steps")
    deltas = np.array(deltas)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = deltas[1:] / deltas[:-1]
    spline = CubicSpline(x, phi)
    resid = float(np.max(np.abs(spline(fx) - a * phi)))
    dx = x[1] - x[0]
    # fourth-order one-sided difference
    dphi0 = float((-25.0 * phi[0] + 48.0 * phi[1] - 36.0 * phi[2] + 16.0 * phi[3] - 3.0 * phi[4])
                  / (12.0 * dx))
    return PhiResult(x, phi, float(a), len(deltas), deltas, ratios, float(phi[0]), dphi0, resid)
