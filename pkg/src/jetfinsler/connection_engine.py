"""Nonlinear connections, adapted frames, the Cartan canonical connection and
its torsion/curvature tensors, all computed from first-principles definitions.

Frame convention: for a nonlinear connection with temporal components M^p and
spatial components N^p_j, the adapted derivatives are

    delta/delta t   = d/dt   - M^p     d/dy_p
    delta/delta x^j = d/dx^j - N^p_j   d/dy_p,

so the a-priori pair (M^p = -kappa y^p, N^p_j = -(kappa/2) delta^p_j) gives
the frame d/dt + kappa y^p d/dy_p and d/dx^j + (kappa/2) d/dy_j.

Per point, everything is derived from a single 4th-order jet of F^2: the
metric g_ij = (h11/2) d^2(F^2)/dy_i dy_j is carried as an order-2 truncated
series, its inverse by cofactor expansion over series, the connection
coefficients as order-1 series, and the curvature components as their first
formal derivatives.  The series coefficients are exactly the adapted-frame
partials that the defining formulas call for, so the whole chain is exact up
to rounding.  ``deriv_mode="fd"`` swaps the two base jets (F^2 and h11) for
finite-difference tables; downstream algebra is unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from . import difftools as dt
from .errors import DegenerateMetric
from .jetspace import CubicForm, DTensorBundle, JetPoint, TemporalMetric
from .metric_engine import finsler_F_squared_field


class NonlinearConnection:
    """Temporal components M^i and spatial components N^i_j (1-based labels),
    duck-evaluable on floats or Taylor values."""

    def __init__(self, M: Callable, N: Callable, kind: str = "custom"):
        self._M = M
        self._N = N
        self.kind = kind

    def M(self, i: int, t, x, y):
        return self._M(i, t, x, y)

    def N(self, i: int, j: int, t, x, y):
        return self._N(i, j, t, x, y)

    @classmethod
    def canonical(cls, tm: TemporalMetric) -> "NonlinearConnection":
        """M^i = -kappa y^i, N = 0 (the energy-action-functional connection)."""
        return cls(
            M=lambda i, t, x, y: -tm.kappa_eval(t) * y[i - 1],
            N=lambda i, j, t, x, y: 0.0,
            kind="canonical",
        )

    @classmethod
    def apriori(cls, tm: TemporalMetric) -> "NonlinearConnection":
        """M^i = -kappa y^i, N^i_j = -(kappa/2) delta^i_j."""
        return cls(
            M=lambda i, t, x, y: -tm.kappa_eval(t) * y[i - 1],
            N=lambda i, j, t, x, y: -tm.kappa_eval(t) * 0.5 if i == j else 0.0,
            kind="apriori",
        )


@dataclass
class CartanConnection:
    """Adapted components (kappa, G^k_j1, L^i_jk, C^i_j(k)) of the Cartan
    canonical connection.  Arrays are indexed [upper, lower...] 0-based."""

    kappa: float
    G_time: np.ndarray        # (3, 3)  G^k_j1 as [k, j]
    L: np.ndarray             # (3, 3, 3)  L^i_jk as [i, j, k]
    C: np.ndarray             # (3, 3, 3)  C^{i(1)}_{j(k)} as [i, j, k]
    _state: Optional["PointContext"] = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class TorsionSet:
    """The three surviving torsion tensors of the Cartan connection."""

    P_mixed: np.ndarray       # (3, 3, 3)  P^{(k)(1)}_{(1)i(j)} as [k, i, j]
    P_fiber: np.ndarray       # (3, 3, 3)  P^{k(1)}_{i(j)} as [k, i, j]
    R_time: np.ndarray        # (3, 3)     R^{(k)}_{(1)1j} as [k, j]


@dataclass(frozen=True)
class CurvatureSet:
    """The three surviving curvature tensors of the Cartan connection."""

    R_hh: np.ndarray          # (3, 3, 3, 3)  R^l_ijk as [l, i, j, k]
    P_hv: np.ndarray          # (3, 3, 3, 3)  P^{l (1)}_{ij(k)} as [l, i, j, k]
    S_vv: np.ndarray          # (3, 3, 3, 3)  S^{l(1)(1)}_{i(j)(k)} as [l, i, j, k]


@dataclass(frozen=True)
class RicciSet:
    """Ricci traces: R_ij = R^m_ijm, P_ij = P^{m(1)}_{ij(m)}, S_ij = S^m_i(j)(m)."""

    R: np.ndarray             # (3, 3)
    P: np.ndarray             # (3, 3)
    S: np.ndarray             # (3, 3)


_Y0 = 4  # slot of y1 among the seven coordinates


class PointContext:
    """Lazy per-point evaluation of every generic object.

    Builds the 4th-order jet of F^2 once and memoizes g, its inverse and the
    connection coefficient series, so each is computed at most once per point.
    Instances are single-use and not shared across threads.
    """

    def __init__(
        self,
        cubic: CubicForm,
        tm: TemporalMetric,
        nlc: NonlinearConnection,
        point: JetPoint,
        deriv_mode: str = "exact",
    ):
        if deriv_mode not in ("exact", "fd"):
            raise ValueError(f"unknown derivative mode {deriv_mode!r}")
        self.cubic = cubic
        self.tm = tm
        self.nlc = nlc
        self.point = point
        self.deriv_mode = deriv_mode

    # -- base jets -----------------------------------------------------------

    @cached_property
    def f2_ser(self) -> dt.Taylor:
        fld = finsler_F_squared_field(self.cubic, self.tm)
        if self.deriv_mode == "fd":
            return dt.fd_jet(fld, self.point, 4)
        return dt.jet_eval(fld, self.point, 4).taylor()

    @cached_property
    def h_ser(self) -> dt.Taylor:
        if self.deriv_mode == "fd":
            fld = lambda t, *rest: self.tm.h11_eval(t)
            return dt.fd_jet(fld, self.point, 4, active=(0,))
        return self.tm.h11_jet(self.point.t, 4)

    @cached_property
    def seeds1(self):
        return dt.seed_point(self.point.coords(), 1)

    # -- adapted frame helpers -------------------------------------------------

    def _adapted_dx(self, u: dt.Taylor, a: int) -> dt.Taylor:
        out = dt.deriv(u, 1 + a)
        for p in range(3):
            out = out - self.N_ser[p][a] * dt.deriv(u, _Y0 + p)
        return out

    def _adapted_dt(self, u: dt.Taylor) -> dt.Taylor:
        out = dt.deriv(u, 0)
        for p in range(3):
            out = out - self.M_ser[p] * dt.deriv(u, _Y0 + p)
        return out

    # -- nonlinear connection as order-1 series -------------------------------

    @cached_property
    def M_ser(self):
        t, x1, x2, x3, y1, y2, y3 = self.seeds1
        x, y = (x1, x2, x3), (y1, y2, y3)
        return [
            dt.as_taylor(self.nlc.M(i + 1, t, x, y), 1) for i in range(3)
        ]

    @cached_property
    def N_ser(self):
        t, x1, x2, x3, y1, y2, y3 = self.seeds1
        x, y = (x1, x2, x3), (y1, y2, y3)
        return [
            [dt.as_taylor(self.nlc.N(i + 1, j + 1, t, x, y), 1) for j in range(3)]
            for i in range(3)
        ]

    @cached_property
    def M_val(self) -> np.ndarray:
        return np.array([m.value for m in self.M_ser])

    @cached_property
    def N_val(self) -> np.ndarray:
        return np.array([[n.value for n in row] for row in self.N_ser])

    # -- metric as order-2 series ----------------------------------------------

    @cached_property
    def g_ser(self):
        f2 = self.f2_ser
        h = self.h_ser
        rows = []
        for i in range(3):
            di = dt.deriv(f2, _Y0 + i)
            rows.append(
                [0.5 * (h * dt.deriv(di, _Y0 + j)) for j in range(3)]
            )
        return rows

    @cached_property
    def g_val(self) -> np.ndarray:
        g = np.array([[e.value for e in row] for row in self.g_ser])
        det = float(np.linalg.det(g))
        norm = float(np.linalg.norm(g))
        if abs(det) <= 1e-12 * norm**3:
            raise DegenerateMetric(f"det(g) = {det} with norm {norm}")
        return g

    @cached_property
    def ginv_ser(self):
        self.g_val  # degeneracy check
        g = self.g_ser

        def minor(r, c):
            rows = [i for i in range(3) if i != r]
            cols = [j for j in range(3) if j != c]
            return (
                g[rows[0]][cols[0]] * g[rows[1]][cols[1]]
                - g[rows[0]][cols[1]] * g[rows[1]][cols[0]]
            )

        det = sum((-1.0) ** c * g[0][c] * minor(0, c) for c in range(3))
        inv_det = 1.0 / det
        return [
            [(-1.0) ** (i + j) * minor(j, i) * inv_det for j in range(3)]
            for i in range(3)
        ]

    @cached_property
    def ginv_val(self) -> np.ndarray:
        return np.array([[e.value for e in row] for row in self.ginv_ser])

    # -- Cartan coefficients as order-1 series ----------------------------------

    @cached_property
    def C_ser(self):
        """C^{i(1)}_{j(k)} = (g^im / 2) dg_jk/dy^m."""
        dg = [
            [[dt.deriv(self.g_ser[j][k], _Y0 + m) for m in range(3)] for k in range(3)]
            for j in range(3)
        ]
        out = []
        for i in range(3):
            plane = []
            for j in range(3):
                row = []
                for k in range(3):
                    acc = self.ginv_ser[i][0] * dg[j][k][0]
                    for m in range(1, 3):
                        acc = acc + self.ginv_ser[i][m] * dg[j][k][m]
                    row.append(0.5 * acc)
                plane.append(row)
            out.append(plane)
        return out

    @cached_property
    def dgdx_ser(self):
        """delta g_ij / delta x^a (adapted), indexed [a][i][j]."""
        return [
            [[self._adapted_dx(self.g_ser[i][j], a) for j in range(3)] for i in range(3)]
            for a in range(3)
        ]

    @cached_property
    def L_ser(self):
        """L^i_jk = (g^im / 2)(delta g_jm/dx^k + delta g_km/dx^j - delta g_jk/dx^m)."""
        dg = self.dgdx_ser
        out = []
        for i in range(3):
            plane = []
            for j in range(3):
                row = []
                for k in range(3):
                    acc = None
                    for m in range(3):
                        term = self.ginv_ser[i][m] * (
                            dg[k][j][m] + dg[j][k][m] - dg[m][j][k]
                        )
                        acc = term if acc is None else acc + term
                    row.append(0.5 * acc)
                plane.append(row)
            out.append(plane)
        return out

    @cached_property
    def G_time_ser(self):
        """G^k_j1 = (g^km / 2) delta g_mj / delta t."""
        dgt = [
            [self._adapted_dt(self.g_ser[m][j]) for j in range(3)] for m in range(3)
        ]
        out = []
        for k in range(3):
            row = []
            for j in range(3):
                acc = self.ginv_ser[k][0] * dgt[0][j]
                for m in range(1, 3):
                    acc = acc + self.ginv_ser[k][m] * dgt[m][j]
                row.append(0.5 * acc)
            out.append(row)
        return out

    @cached_property
    def C_val(self) -> np.ndarray:
        return np.array(
            [[[e.value for e in row] for row in plane] for plane in self.C_ser]
        )

    @cached_property
    def L_val(self) -> np.ndarray:
        return np.array(
            [[[e.value for e in row] for row in plane] for plane in self.L_ser]
        )

    # -- assembled objects --------------------------------------------------------

    def cartan(self) -> CartanConnection:
        g_time = np.array(
            [[e.value for e in row] for row in self.G_time_ser]
        )
        return CartanConnection(
            kappa=self.tm.kappa(self.point.t),
            G_time=g_time,
            L=self.L_val,
            C=self.C_val,
            _state=self,
        )

    def torsions(self, L: Optional[np.ndarray] = None) -> TorsionSet:
        if L is None:
            L = self.L_val
        p_mixed = np.empty((3, 3, 3))
        for k in range(3):
            for i in range(3):
                for j in range(3):
                    p_mixed[k, i, j] = (
                        dt.deriv(self.N_ser[k][i], _Y0 + j).value - L[k, j, i]
                    )
        r_time = np.empty((3, 3))
        for k in range(3):
            for j in range(3):
                dm = self._adapted_dx(self.M_ser[k], j).value
                dn = self._adapted_dt(self.N_ser[k][j]).value
                r_time[k, j] = dm - dn
        return TorsionSet(P_mixed=p_mixed, P_fiber=self.C_val.copy(), R_time=r_time)

    def curvatures(self) -> CurvatureSet:
        C0 = self.C_val
        L0 = self.L_val
        p_mixed = self.torsions().P_mixed

        dC = np.empty((3, 3, 3, 3))  # [l, i, j, k] = d C^l_i(j) / dy_k
        for l in range(3):
            for i in range(3):
                for j in range(3):
                    for k in range(3):
                        dC[l, i, j, k] = dt.deriv(self.C_ser[l][i][j], _Y0 + k).value
        s_vv = (
            dC
            - dC.transpose(0, 1, 3, 2)
            + np.einsum("mij,lmk->lijk", C0, C0)
            - np.einsum("mik,lmj->lijk", C0, C0)
        )

        dCdx = np.empty((3, 3, 3, 3))  # [l, i, k, a] = delta C^l_i(k) / delta x^a
        for l in range(3):
            for i in range(3):
                for k in range(3):
                    for a in range(3):
                        dCdx[l, i, k, a] = self._adapted_dx(
                            self.C_ser[l][i][k], a
                        ).value
        # C^{l(1)}_{i(k)|j}
        c_bar = (
            dCdx
            + np.einsum("mik,lmj->likj", C0, L0)
            - np.einsum("lmk,mij->likj", C0, L0)
            - np.einsum("lim,mkj->likj", C0, L0)
        )

        dLdy = np.empty((3, 3, 3, 3))  # [l, i, j, k] = d L^l_ij / dy_k
        dLdx = np.empty((3, 3, 3, 3))  # [l, i, j, a] = delta L^l_ij / delta x^a
        for l in range(3):
            for i in range(3):
                for j in range(3):
                    for k in range(3):
                        dLdy[l, i, j, k] = dt.deriv(self.L_ser[l][i][j], _Y0 + k).value
                        dLdx[l, i, j, k] = self._adapted_dx(
                            self.L_ser[l][i][j], k
                        ).value
        p_hv = (
            dLdy
            - c_bar.transpose(0, 1, 3, 2)
            + np.einsum("lim,mjk->lijk", C0, p_mixed)
        )
        r_hh = (
            dLdx
            - dLdx.transpose(0, 1, 3, 2)
            + np.einsum("mij,lmk->lijk", L0, L0)
            - np.einsum("mik,lmj->lijk", L0, L0)
        )
        return CurvatureSet(R_hh=r_hh, P_hv=p_hv, S_vv=s_vv)

    def ricci(self) -> RicciSet:
        return ricci_generic(self.curvatures())

    def scalar_curvature(self) -> float:
        return scalar_curvature_generic(
            self.ginv_val, self.ricci(), self.h_ser.value
        )

    def tensor_bundle(self) -> DTensorBundle:
        """Every generic tensor at the point, packed with its species tags.

        Time indices (all carrying the label 1) contribute no array axis."""
        cart = self.cartan()
        tors = self.torsions()
        curv = self.curvatures()
        ric = self.ricci()
        bundle = DTensorBundle()
        bundle.add("g_lower", self.g_val, ("S-", "S-"))
        bundle.add("g_upper", self.ginv_val, ("S+", "S+"))
        bundle.add("C", cart.C, ("F+", "S-", "F-"))
        bundle.add("L", cart.L, ("S+", "S-", "S-"))
        bundle.add("G_time", cart.G_time, ("S+", "S-", "T-"))
        bundle.add("P_mixed", tors.P_mixed, ("F+", "T-", "S-", "F-"))
        bundle.add("P_fiber", tors.P_fiber, ("F+", "S-", "F-"))
        bundle.add("R_time", tors.R_time, ("F+", "T-", "S-"))
        bundle.add("R_hh", curv.R_hh, ("S+", "S-", "S-", "S-"))
        bundle.add("P_hv", curv.P_hv, ("S+", "S-", "S-", "F-"))
        bundle.add("S_vv", curv.S_vv, ("F+", "S-", "F-", "F-"))
        bundle.add("ricci_R", ric.R, ("S-", "S-"))
        bundle.add("ricci_P", ric.P, ("S-", "F-"))
        bundle.add("ricci_S", ric.S, ("F-", "F-"))
        bundle.add("S_raised", self.ginv_val @ ric.S, ("F+", "F-"))
        bundle.add("scalar_curvature", self.scalar_curvature(), ())
        return bundle


# -- public operations ---------------------------------------------------------


def adapted_derivative(field: Callable, p: JetPoint, nlc: NonlinearConnection, direction):
    """Directional derivative of a scalar field along the adapted frame.

    ``direction`` is ``"time"``, ``("spatial", i)`` or ``("fiber", i)`` with
    1-based i.
    """
    table = dt.jet_eval(field, p, 1)
    x, y = p.x, p.y
    if direction == "time":
        out = table.partial("t")
        for q in range(3):
            m = float(nlc.M(q + 1, p.t, x, y))
            out -= m * table.partial(f"y{q + 1}")
        return out
    kind, i = direction
    if kind == "spatial":
        out = table.partial(f"x{i}")
        for q in range(3):
            n = float(nlc.N(q + 1, i, p.t, x, y))
            out -= n * table.partial(f"y{q + 1}")
        return out
    if kind == "fiber":
        return table.partial(f"y{i}")
    raise ValueError(f"unknown direction {direction!r}")


def cartan_generic(
    cubic: CubicForm,
    tm: TemporalMetric,
    p: JetPoint,
    nlc: NonlinearConnection,
    deriv_mode: str = "exact",
) -> CartanConnection:
    """Cartan canonical connection from the defining adapted-derivative formulas."""
    return PointContext(cubic, tm, nlc, p, deriv_mode).cartan()


def torsions_generic(
    cubic: CubicForm,
    tm: TemporalMetric,
    p: JetPoint,
    nlc: NonlinearConnection,
    cartan: CartanConnection,
) -> TorsionSet:
    """The three surviving torsions, from the nonlinear connection and L."""
    ctx = cartan._state or PointContext(cubic, tm, nlc, p)
    return ctx.torsions(L=cartan.L)


def curvatures_generic(
    cubic: CubicForm,
    tm: TemporalMetric,
    p: JetPoint,
    nlc: NonlinearConnection,
    cartan: CartanConnection,
) -> CurvatureSet:
    """The three surviving curvatures, from first derivatives of L and C."""
    ctx = cartan._state or PointContext(cubic, tm, nlc, p)
    return ctx.curvatures()


def ricci_generic(curv: CurvatureSet) -> RicciSet:
    return RicciSet(
        R=np.einsum("mijm->ij", curv.R_hh),
        P=np.einsum("mijm->ij", curv.P_hv),
        S=np.einsum("mijm->ij", curv.S_vv),
    )


def scalar_curvature_generic(
    g_upper: np.ndarray, ricci: RicciSet, h11: float
) -> float:
    """Sc = g^pq R_pq + h11 g^pq S_(p)(q)."""
    return float(
        np.einsum("pq,pq->", g_upper, ricci.R)
        + h11 * np.einsum("pq,pq->", g_upper, ricci.S)
    )
