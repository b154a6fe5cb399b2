"""Closed-form tensors of the rheonomic Berwald-Moor metric of order three.

With G111 = y1 y2 y3 on the positive orthant, every geometric object has an
explicit expression; this module implements them all:

    g_ij   = ((2 - 3 delta_ij)/9) G111^(2/3) / (y_i y_j)
    g^jk   = (2 - 3 delta^jk) G111^(-2/3) y_j y_k
    C^i_j(k) = A^i_jk y_i / (y_j y_k),  A^i_jk in {-2/9, 1/9}
    Cartan: (kappa, G^k_j1 = 0, L = (kappa/2) C, C)
    torsions: P_mixed = -(kappa/2) C, P_fiber = C,
              R_time = (1/2)(kappa' - kappa^2) I
    curvatures: R_hh = (kappa^2/4) S, P_hv = (kappa/2) S, S from a 9-case table
    Ricci: S_(i)(j) = ((3 delta_ij - 1)/9) / (y_i y_j) with (kappa^2/4) and
           (kappa/2) prefactors for the R- and P-traces
    raised: S^m11_i = G111^(-2/3) ((1 - 3 delta^m_i)/3) y_m / y_i
    scalar: Sc = -((4 h11 + kappa^2)/2) G111^(-2/3)

Repeated indices in these formulas are NOT summed; every component is written
with explicit per-index loops to keep the no-sum convention visible.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools

import numpy as np

from .connection_engine import CartanConnection, CurvatureSet, RicciSet, TorsionSet
from .jetspace import JetPoint, TemporalMetric


def _a_coefficients() -> np.ndarray:
    a = np.empty((3, 3, 3))
    for i, j, k in itertools.product(range(3), repeat=3):
        dij = 1.0 if i == j else 0.0
        dik = 1.0 if i == k else 0.0
        djk = 1.0 if j == k else 0.0
        a[i, j, k] = (3 * dij + 3 * dik + 3 * djk - 9 * dij * djk - 2.0) / 9.0
    return a


#: A^i_jk: -2/9 when i, j, k are all distinct or all equal, 1/9 when exactly
#: two coincide.  Row sums over either lower index vanish, as does the trace
#: over (upper, one lower).
A_COEFFICIENTS = _a_coefficients()
A_COEFFICIENTS.setflags(write=False)


@dataclass(frozen=True)
class BMMetric:
    g_lower: np.ndarray
    g_upper: np.ndarray


def _g111(p: JetPoint) -> float:
    return p.y[0] * p.y[1] * p.y[2]


def bm_metric(p: JetPoint, tm: TemporalMetric) -> BMMetric:
    """Fundamental metric and its inverse; y must be positive."""
    p.require_positive_fiber()
    tm.h11(p.t)
    y = p.y
    g23 = _g111(p) ** (2.0 / 3.0)
    lower = np.empty((3, 3))
    upper = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            d = 3.0 if i == j else 0.0
            lower[i, j] = (2.0 - d) / 9.0 * g23 / (y[i] * y[j])
            upper[i, j] = (2.0 - d) / g23 * y[i] * y[j]
    return BMMetric(g_lower=lower, g_upper=upper)


def bm_C(p: JetPoint) -> np.ndarray:
    """C^{i(1)}_{j(k)} = A^i_jk y_i / (y_j y_k), no sums."""
    p.require_positive_fiber()
    y = p.y
    c = np.empty((3, 3, 3))
    for i, j, k in itertools.product(range(3), repeat=3):
        c[i, j, k] = A_COEFFICIENTS[i, j, k] * y[i] / (y[j] * y[k])
    return c


def bm_cartan(p: JetPoint, tm: TemporalMetric) -> CartanConnection:
    """Cartan canonical connection: (kappa, G = 0, L = (kappa/2) C, C)."""
    c = bm_C(p)
    kappa = tm.kappa(p.t)
    return CartanConnection(
        kappa=kappa, G_time=np.zeros((3, 3)), L=0.5 * kappa * c, C=c
    )


def bm_torsions(p: JetPoint, tm: TemporalMetric) -> TorsionSet:
    """P_mixed = -(kappa/2) C, P_fiber = C, R_time = (kappa' - kappa^2)/2 I."""
    c = bm_C(p)
    kappa = tm.kappa(p.t)
    kappa_dot = tm.kappa_dot(p.t)
    return TorsionSet(
        P_mixed=-0.5 * kappa * c,
        P_fiber=c,
        R_time=0.5 * (kappa_dot - kappa * kappa) * np.eye(3),
    )


def bm_S(p: JetPoint) -> np.ndarray:
    """The vertical curvature S^{l(1)(1)}_{i(j)(k)} from its 9-case table."""
    p.require_positive_fiber()
    y = p.y
    s = np.zeros((3, 3, 3, 3))
    for l, i, j, k in itertools.product(range(3), repeat=4):
        if j == k:
            continue  # antisymmetric in (j, k)
        if i == l and j == l:          # case 8: S^l_l(l)(k) = 0
            v = 0.0
        elif i == l and k == l:        # case 9: S^l_l(j)(l) = 0
            v = 0.0
        elif l == i:                   # case 3: i, j, k distinct
            v = 0.0
        elif i == j and k == l:        # case 6
            v = 1.0 / (9.0 * y[i] * y[i])
        elif j == l and k == i:        # case 7
            v = -1.0 / (9.0 * y[i] * y[i])
        elif i == j:                   # case 1: i, k, l distinct
            v = -(1.0 / 9.0) * y[l] / (y[i] * y[i] * y[k])
        elif i == k:                   # case 2: i, j, l distinct
            v = (1.0 / 9.0) * y[l] / (y[i] * y[i] * y[j])
        elif j == l:                   # case 4: i, k, l distinct
            v = 1.0 / (9.0 * y[i] * y[k])
        elif k == l:                   # case 5: i, j, l distinct
            v = -1.0 / (9.0 * y[i] * y[j])
        else:
            raise AssertionError("unreachable index pattern")
        s[l, i, j, k] = v
    return s


def bm_S_bracket(p: JetPoint) -> np.ndarray:
    """S again, from the A-coefficient bracket expansion (cross-check path):

    [A^l_ij d^l_k/(y_i y_j) - A^l_ik d^l_j/(y_i y_k)]
    + [A^l_ik d_ij y_l/(y_i^2 y_k) - A^l_ij d_ik y_l/(y_i^2 y_j)]
    + sum_m [A^m_ij A^l_mk - A^m_ik A^l_mj] y_l/(y_i y_j y_k),  j != k.
    """
    p.require_positive_fiber()
    y = p.y
    a = A_COEFFICIENTS
    s = np.zeros((3, 3, 3, 3))
    for l, i, j, k in itertools.product(range(3), repeat=4):
        if j == k:
            continue
        dlk = 1.0 if l == k else 0.0
        dlj = 1.0 if l == j else 0.0
        dij = 1.0 if i == j else 0.0
        dik = 1.0 if i == k else 0.0
        t1 = a[l, i, j] * dlk / (y[i] * y[j]) - a[l, i, k] * dlj / (y[i] * y[k])
        t2 = a[l, i, k] * dij * y[l] / (y[i] ** 2 * y[k]) - a[l, i, j] * dik * y[
            l
        ] / (y[i] ** 2 * y[j])
        t3 = sum(
            a[m, i, j] * a[l, m, k] - a[m, i, k] * a[l, m, j] for m in range(3)
        ) * y[l] / (y[i] * y[j] * y[k])
        s[l, i, j, k] = t1 + t2 + t3
    return s


def bm_curvatures(p: JetPoint, tm: TemporalMetric) -> CurvatureSet:
    """R_hh = (kappa^2/4) S, P_hv = (kappa/2) S."""
    s = bm_S(p)
    kappa = tm.kappa(p.t)
    return CurvatureSet(
        R_hh=0.25 * kappa * kappa * s, P_hv=0.5 * kappa * s, S_vv=s
    )


def bm_ricci(p: JetPoint, tm: TemporalMetric) -> RicciSet:
    """Ricci traces: S_(i)(j) = ((3 delta_ij - 1)/9)/(y_i y_j), scaled by
    (kappa^2/4) and (kappa/2) for the R- and P-parts."""
    p.require_positive_fiber()
    y = p.y
    s = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            d = 3.0 if i == j else 0.0
            s[i, j] = (d - 1.0) / 9.0 / (y[i] * y[j])
    kappa = tm.kappa(p.t)
    return RicciSet(R=0.25 * kappa * kappa * s, P=0.5 * kappa * s, S=s)


def bm_S_raised(p: JetPoint) -> np.ndarray:
    """S^{m11}_i = g^{mr} S_(r)(i) = G111^(-2/3) (1 - 3 delta^m_i)/3 * y_m/y_i."""
    p.require_positive_fiber()
    y = p.y
    g23 = _g111(p) ** (2.0 / 3.0)
    out = np.empty((3, 3))
    for m in range(3):
        for i in range(3):
            d = 3.0 if m == i else 0.0
            out[m, i] = (1.0 - d) / 3.0 / g23 * y[m] / y[i]
    return out


def bm_scalar_curvature(p: JetPoint, tm: TemporalMetric) -> float:
    """Sc = -((4 h11 + kappa^2)/2) G111^(-2/3)."""
    p.require_positive_fiber()
    h11 = tm.h11(p.t)
    kappa = tm.kappa(p.t)
    return float(-(4.0 * h11 + kappa * kappa) / 2.0 * _g111(p) ** (-2.0 / 3.0))


def closed_form_bundle(p: JetPoint, tm: TemporalMetric, connection: str = "apriori"):
    """Every closed-form tensor at a point, as a name -> array mapping.

    ``connection="apriori"`` uses the full formulas above.  With the canonical
    connection (N = 0) the adapted spatial frame loses its fiber correction,
    so L, both kappa-weighted torsions, R_time, R_hh, P_hv and the R/P Ricci
    traces all vanish and the scalar curvature keeps only its h11 part; the
    purely vertical objects (g, C, S and their traces) are unchanged.
    """
    metric = bm_metric(p, tm)
    c = bm_C(p)
    s = bm_S(p)
    ricci = bm_ricci(p, tm)
    zeros3 = np.zeros((3, 3, 3))
    zeros4 = np.zeros((3, 3, 3, 3))
    if connection == "apriori":
        cartan = bm_cartan(p, tm)
        torsion = bm_torsions(p, tm)
        curv = bm_curvatures(p, tm)
        ricci_R, ricci_P = ricci.R, ricci.P
        scalar = bm_scalar_curvature(p, tm)
        L = cartan.L
        p_mixed, r_time = torsion.P_mixed, torsion.R_time
        r_hh, p_hv = curv.R_hh, curv.P_hv
    elif connection == "canonical":
        L = zeros3
        p_mixed = zeros3
        r_time = np.zeros((3, 3))
        r_hh = p_hv = zeros4
        ricci_R = ricci_P = np.zeros((3, 3))
        scalar = float(-2.0 * tm.h11(p.t) * _g111(p) ** (-2.0 / 3.0))
    else:
        raise ValueError(f"unknown connection {connection!r}")
    return {
        "g_lower": metric.g_lower,
        "g_upper": metric.g_upper,
        "C": c,
        "L": L,
        "G_time": np.zeros((3, 3)),
        "P_mixed": p_mixed,
        "P_fiber": c,
        "R_time": r_time,
        "R_hh": r_hh,
        "P_hv": p_hv,
        "S_vv": s,
        "ricci_R": ricci_R,
        "ricci_P": ricci_P,
        "ricci_S": ricci.S,
        "S_raised": bm_S_raised(p),
        "scalar_curvature": scalar,
    }
