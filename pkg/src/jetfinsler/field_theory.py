"""Gravitational and electromagnetic field-theory blocks.

The Einstein-equation assembler computes the geometric left-hand sides
Ric - (Sc/2) G, scaled by 1/K, i.e. the stress-energy components that any
matter model coupled to the Berwald-Moor geometry (with the a-priori
connection) must equal.  Nothing is solved for: the blocks are reported.

The mixed (index-raised) stress-energy components have closed expressions in
kappa, h11, xi11 and the raised vertical Ricci tensor; they satisfy three
conservation laws whose covariant divergences are assembled here term by term
with the exact differentiation kernel.  The first law has a nonzero
right-hand side driven by dh11/dt; the residual |LHS - RHS| is reported, not
interpreted.

The electromagnetic 2-form F^{(1)}_{(i)j} and its auxiliary tensors are
computed for an arbitrary cubic form; for the Berwald-Moor metric they vanish
identically, as do the three covariant derivatives of F.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import difftools as dt
from .berwald_moor import bm_cartan, bm_metric, bm_ricci, bm_S_raised
from .connection_engine import (
    CartanConnection,
    NonlinearConnection,
    PointContext,
    adapted_derivative,
)
from .errors import ZeroEinsteinConstant
from .jetspace import CubicForm, JetPoint, TemporalMetric

_Y0 = 4  # slot of y1 among the seven coordinates


@dataclass(frozen=True)
class EinsteinBlocks:
    """Blocks of the adapted Einstein equations.

    ``T_11``, ``T_ij`` and ``T_fiber`` are the three diagonal blocks; the six
    off-diagonal blocks comprise four vanishing ones (``t_time_spatial`` =
    T_1i, ``t_spatial_time`` = T_i1, ``t_fiber_time`` = T^(1)_(i)1,
    ``t_time_fiber`` = T^(1)_1(i)) and the two equal kappa-weighted ones
    (``t_spatial_fiber`` = T^(1)_i(j), ``t_fiber_spatial`` = T^(1)_(i)j).
    """

    K: float
    xi11: float
    T_11: float
    T_ij: np.ndarray              # (3, 3)
    T_fiber: np.ndarray           # (3, 3)
    t_time_spatial: np.ndarray    # (3,)
    t_spatial_time: np.ndarray    # (3,)
    t_fiber_time: np.ndarray      # (3,)
    t_time_fiber: np.ndarray      # (3,)
    t_spatial_fiber: np.ndarray   # (3, 3)
    t_fiber_spatial: np.ndarray   # (3, 3)


@dataclass(frozen=True)
class StressEnergyMixed:
    """The nine index-raised stress-energy components.

    Field names are (upper index species)(lower index species) with t/s/f for
    time/spatial/fiber: ``tt`` = T^1_1, ``st`` = T^m_1, ``ft`` = T^(m)_(1)1,
    ``ts`` = T^1_i, ``ss`` = T^m_i, ``fs`` = T^(m)_(1)i, ``tf`` = T^1(1)_(i),
    ``sf`` = T^m(1)_(i), ``ff`` = T^(m)(1)_(1)(i).
    """

    tt: float
    st: np.ndarray    # (3,)
    ft: np.ndarray    # (3,)
    ts: np.ndarray    # (3,)
    ss: np.ndarray    # (3, 3)
    fs: np.ndarray    # (3, 3)
    tf: np.ndarray    # (3,)
    sf: np.ndarray    # (3, 3)
    ff: np.ndarray    # (3, 3)


@dataclass(frozen=True)
class ConservationReport:
    law1_lhs: float
    law1_rhs: float
    law2_lhs: np.ndarray   # (3,)
    law3_lhs: np.ndarray   # (3,)

    @property
    def law1_residual(self) -> float:
        return abs(self.law1_lhs - self.law1_rhs)


@dataclass(frozen=True)
class EMSet:
    F_em: np.ndarray     # (3, 3)  F^{(1)}_{(i)j}
    D_bar: np.ndarray    # (3,)    Dbar^{(1)}_{(i)1}
    D: np.ndarray        # (3, 3)  D^{(1)}_{(i)j}
    d_em: np.ndarray     # (3, 3)  d^{(1)(1)}_{(i)(j)}


@dataclass(frozen=True)
class EMDerivatives:
    """Covariant derivatives of the 2-form: temporal, spatial, fiber."""

    F_time: np.ndarray     # (3, 3)     F_{(i)j/1}
    F_spatial: np.ndarray  # (3, 3, 3)  F_{(i)j|k}
    F_fiber: np.ndarray    # (3, 3, 3)  F_{(i)j}|^(1)_(k)


def _check_K(K: float) -> None:
    if K == 0.0:
        raise ZeroEinsteinConstant("the Einstein constant must be nonzero")


def einstein_blocks(p: JetPoint, tm: TemporalMetric, K: float = 1.0) -> EinsteinBlocks:
    """Assemble every block of the adapted Einstein equations at a point."""
    _check_K(K)
    p.require_positive_fiber()
    h11 = tm.h11(p.t)
    kappa = tm.kappa(p.t)
    xi11 = (4.0 * h11 + kappa * kappa) / (4.0 * K)
    g23inv = (p.y[0] * p.y[1] * p.y[2]) ** (-2.0 / 3.0)
    metric = bm_metric(p, tm)
    s_ric = bm_ricci(p, tm).S
    zeros = np.zeros(3)
    off = 0.5 * kappa / K * s_ric
    return EinsteinBlocks(
        K=K,
        xi11=xi11,
        T_11=xi11 * g23inv * h11,
        T_ij=0.25 * kappa * kappa / K * s_ric + xi11 * g23inv * metric.g_lower,
        T_fiber=s_ric / K + xi11 * g23inv / h11 * metric.g_lower,
        t_time_spatial=zeros.copy(),
        t_spatial_time=zeros.copy(),
        t_fiber_time=zeros.copy(),
        t_time_fiber=zeros.copy(),
        t_spatial_fiber=off,
        t_fiber_spatial=off.copy(),
    )


def stress_energy_mixed(p: JetPoint, tm: TemporalMetric, K: float = 1.0) -> StressEnergyMixed:
    """The nine raised components from their closed expressions."""
    _check_K(K)
    p.require_positive_fiber()
    h11 = tm.h11(p.t)
    kappa = tm.kappa(p.t)
    xi11 = (4.0 * h11 + kappa * kappa) / (4.0 * K)
    g23inv = (p.y[0] * p.y[1] * p.y[2]) ** (-2.0 / 3.0)
    s_up = bm_S_raised(p)
    eye = np.eye(3)
    zeros = np.zeros(3)
    return StressEnergyMixed(
        tt=xi11 * g23inv,
        st=zeros.copy(),
        ft=zeros.copy(),
        ts=zeros.copy(),
        ss=0.25 * kappa * kappa / K * s_up + xi11 * g23inv * eye,
        fs=0.5 * h11 * kappa / K * s_up,
        tf=zeros.copy(),
        sf=0.5 * kappa / K * s_up,
        ff=h11 / K * s_up + xi11 * g23inv * eye,
    )


def stress_energy_contracted(
    blocks: EinsteinBlocks, p: JetPoint, tm: TemporalMetric
) -> StressEnergyMixed:
    """The same nine components by direct contraction of the Einstein blocks
    with g^{mr} and the h11 factors (second computation path, for checking)."""
    h11 = tm.h11(p.t)
    h_up = 1.0 / h11
    g_up = bm_metric(p, tm).g_upper
    return StressEnergyMixed(
        tt=h_up * blocks.T_11,
        st=g_up @ blocks.t_spatial_time,
        ft=h11 * (g_up @ blocks.t_fiber_time),
        ts=h_up * blocks.t_time_spatial,
        ss=g_up @ blocks.T_ij,
        fs=h11 * (g_up @ blocks.t_fiber_spatial),
        tf=h_up * blocks.t_time_fiber,
        sf=g_up @ blocks.t_spatial_fiber,
        ff=h11 * (g_up @ blocks.T_fiber),
    )


def _mixed_component_fields(tm: TemporalMetric, K: float):
    """Duck-typed scalar fields for every mixed stress-energy component."""

    def xi11(t):
        kap = tm.kappa_eval(t)
        return (4.0 * tm.h11_eval(t) + kap * kap) / (4.0 * K)

    def g23inv(y1, y2, y3):
        return dt.powf(y1 * y2 * y3, -2.0 / 3.0)

    def s_raised(m, i, y):
        d = 3.0 if m == i else 0.0
        return dt.powf(y[0] * y[1] * y[2], -2.0 / 3.0) * ((1.0 - d) / 3.0) * y[m] / y[i]

    zero = lambda *coords: 0.0

    def tt(t, x1, x2, x3, y1, y2, y3):
        return xi11(t) * g23inv(y1, y2, y3)

    def ss(m, i):
        def fld(t, x1, x2, x3, y1, y2, y3):
            kap = tm.kappa_eval(t)
            out = 0.25 * kap * kap / K * s_raised(m, i, (y1, y2, y3))
            if m == i:
                out = out + xi11(t) * g23inv(y1, y2, y3)
            return out

        return fld

    def fs(m, i):
        def fld(t, x1, x2, x3, y1, y2, y3):
            kap = tm.kappa_eval(t)
            return 0.5 * tm.h11_eval(t) * kap / K * s_raised(m, i, (y1, y2, y3))

        return fld

    def sf(m, i):
        def fld(t, x1, x2, x3, y1, y2, y3):
            return 0.5 * tm.kappa_eval(t) / K * s_raised(m, i, (y1, y2, y3))

        return fld

    def ff(m, i):
        def fld(t, x1, x2, x3, y1, y2, y3):
            out = tm.h11_eval(t) / K * s_raised(m, i, (y1, y2, y3))
            if m == i:
                out = out + xi11(t) * g23inv(y1, y2, y3)
            return out

        return fld

    return {"tt": tt, "st": zero, "ft": zero, "ts": zero, "ss": ss, "fs": fs,
            "tf": zero, "sf": sf, "ff": ff}


def conservation_residuals(
    p: JetPoint, tm: TemporalMetric, K: float = 1.0
) -> ConservationReport:
    """Left-hand sides of the three conservation laws (each a sum of three
    covariant-divergence terms with their connection corrections) plus the
    closed right-hand side of the first law."""
    _check_K(K)
    p.require_positive_fiber()
    nlc = NonlinearConnection.apriori(tm)
    cart = bm_cartan(p, tm)
    kappa, L, C, G_t = cart.kappa, cart.L, cart.C, cart.G_time
    fields = _mixed_component_fields(tm, K)
    se = stress_energy_mixed(p, tm, K)

    def d_t(fld):
        return adapted_derivative(fld, p, nlc, "time")

    def d_x(fld, a):
        return adapted_derivative(fld, p, nlc, ("spatial", a + 1))

    def d_y(fld, a):
        return adapted_derivative(fld, p, nlc, ("fiber", a + 1))

    # Law 1: T^1_1/1 + T^m_1|m + T^(m)_(1)1 |^(1)_(m)
    law1 = d_t(fields["tt"]) + se.tt * kappa - se.tt * kappa
    for m in range(3):
        law1 += d_x(fields["st"], m)
        law1 += d_y(fields["ft"], m)
        for r in range(3):
            law1 += se.st[r] * L[m, r, m]
            law1 += se.ft[r] * C[m, r, m]

    h2 = tm.h11_jet(p.t, 2)
    h = h2.value
    hp = dt.deriv(h2, "t").value
    hpp = dt.deriv(dt.deriv(h2, "t"), "t").value
    g23inv = (p.y[0] * p.y[1] * p.y[2]) ** (-2.0 / 3.0)
    law1_rhs = (
        (1.0 / h) ** 2 / (16.0 * K) * hp * (2.0 * hpp - 3.0 / h * hp * hp) * g23inv
    )

    # Law 2: T^1_i/1 + T^m_i|m + T^(m)_(1)i |^(1)_(m)
    law2 = np.zeros(3)
    for i in range(3):
        acc = d_t(fields["ts"]) + se.ts[i] * kappa
        for r in range(3):
            acc -= se.ts[r] * G_t[r, i]
        for m in range(3):
            acc += d_x(fields["ss"](m, i), m)
            acc += d_y(fields["fs"](m, i), m)
            for r in range(3):
                acc += se.ss[r, i] * L[m, r, m] - se.ss[m, r] * L[r, i, m]
                acc += se.fs[r, i] * C[m, r, m] - se.fs[m, r] * C[r, i, m]
        law2[i] = acc

    # Law 3: T^1(1)_(i)/1 + T^m(1)_(i)|m + T^(m)(1)_(1)(i) |^(1)_(m)
    law3 = np.zeros(3)
    for i in range(3):
        acc = d_t(fields["tf"]) + 2.0 * se.tf[i] * kappa
        for m in range(3):
            acc += d_x(fields["sf"](m, i), m)
            acc += d_y(fields["ff"](m, i), m)
            for r in range(3):
                acc += se.sf[r, i] * L[m, r, m] - se.sf[m, r] * L[r, i, m]
                acc += se.ff[r, i] * C[m, r, m] - se.ff[m, r] * C[r, i, m]
        law3[i] = acc

    return ConservationReport(
        law1_lhs=float(law1), law1_rhs=float(law1_rhs), law2_lhs=law2, law3_lhs=law3
    )


def _em_form_series(ctx: PointContext):
    """F^{(1)}_{(i)j} as order-1 series (enough for its first derivatives)."""
    g = ctx.g_ser
    L = ctx.L_ser
    N = ctx.N_ser
    y = ctx.seeds1[_Y0:]
    h_up = 1.0 / ctx.h_ser
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = None
            for m in range(3):
                term = g[j][m] * N[m][i] - g[i][m] * N[m][j]
                acc = term if acc is None else acc + term
            for r in range(3):
                for m in range(3):
                    acc = acc + (g[i][r] * L[r][j][m] - g[j][r] * L[r][i][m]) * y[m]
            row.append(0.5 * (h_up * acc))
        out.append(row)
    return out


def em_two_form(
    cubic: CubicForm,
    tm: TemporalMetric,
    p: JetPoint,
    nlc: NonlinearConnection,
    cartan: CartanConnection,
) -> EMSet:
    """The electromagnetic 2-form and its auxiliary tensors for any cubic:

        F^{(1)}_{(i)j} = (h^11/2)[g_jm N^m_i - g_im N^m_j
                                  + (g_ir L^r_jm - g_jr L^r_im) y^m]
        Dbar^{(1)}_{(i)1} = (h^11/2) (delta g_im/delta t) y^m
        D^{(1)}_{(i)j} = h^11 g_ip [-N^p_j + L^p_jm y^m]
        d^{(1)(1)}_{(i)(j)} = h^11 [g_ij + g_ip C^p_m(j) y^m]
    """
    ctx = cartan._state or PointContext(cubic, tm, nlc, p)
    f_ser = _em_form_series(ctx)
    f_em = np.array([[f_ser[i][j].value for j in range(3)] for i in range(3)])
    y = np.asarray(p.y)
    h_up = 1.0 / ctx.h_ser.value
    g = ctx.g_val
    L = cartan.L
    C = cartan.C
    d_bar = np.empty(3)
    for i in range(3):
        d_bar[i] = 0.5 * h_up * sum(
            ctx._adapted_dt(ctx.g_ser[i][m]).value * y[m] for m in range(3)
        )
    D = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            D[i, j] = h_up * sum(
                g[i, q] * (-ctx.N_val[q, j] + sum(L[q, j, m] * y[m] for m in range(3)))
                for q in range(3)
            )
    d_em = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            d_em[i, j] = h_up * (
                g[i, j]
                + sum(g[i, q] * C[q, m, j] * y[m] for q in range(3) for m in range(3))
            )
    return EMSet(F_em=f_em, D_bar=d_bar, D=D, d_em=d_em)


def em_covariant_derivatives(
    cubic: CubicForm,
    tm: TemporalMetric,
    p: JetPoint,
    nlc: NonlinearConnection,
    cartan: CartanConnection,
) -> EMDerivatives:
    """The temporal, spatial and fiber covariant derivatives of the 2-form."""
    ctx = cartan._state or PointContext(cubic, tm, nlc, p)
    f_ser = _em_form_series(ctx)
    f0 = np.array([[f_ser[i][j].value for j in range(3)] for i in range(3)])
    kappa = cartan.kappa
    G_t, L, C = cartan.G_time, cartan.L, cartan.C
    f_time = np.empty((3, 3))
    f_spatial = np.empty((3, 3, 3))
    f_fiber = np.empty((3, 3, 3))
    for i in range(3):
        for j in range(3):
            f_time[i, j] = (
                ctx._adapted_dt(f_ser[i][j]).value
                + f0[i, j] * kappa
                - sum(f0[m, j] * G_t[m, i] + f0[i, m] * G_t[m, j] for m in range(3))
            )
            for k in range(3):
                f_spatial[i, j, k] = ctx._adapted_dx(f_ser[i][j], k).value - sum(
                    f0[m, j] * L[m, i, k] + f0[i, m] * L[m, j, k] for m in range(3)
                )
                f_fiber[i, j, k] = dt.deriv(f_ser[i][j], _Y0 + k).value - sum(
                    f0[m, j] * C[m, i, k] + f0[i, m] * C[m, j, k] for m in range(3)
                )
    return EMDerivatives(F_time=f_time, F_spatial=f_spatial, F_fiber=f_fiber)
