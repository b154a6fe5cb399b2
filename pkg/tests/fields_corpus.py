"""Closed-form scalar fields with hand-derived mixed partials up to order 4.

Each entry pairs a field with an ``expected(exps, coords)`` closure that
implements the derivative formula worked out by hand, so the corpus is an
oracle independent of the package's differentiation machinery.  ``exps`` is
the 7-slot exponent tuple over (t, x1, x2, x3, y1, y2, y3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from jetfinsler import difftools as dt

T, X1, X2, X3, Y1, Y2, Y3 = range(7)


def _falling(alpha: float, m: int) -> float:
    out = 1.0
    for i in range(m):
        out *= alpha - i
    return out


def _only(exps, allowed) -> bool:
    return all(m == 0 for v, m in enumerate(exps) if v not in allowed)


@dataclass(frozen=True)
class CorpusField:
    name: str
    field: Callable
    expected: Callable          # (exps, coords) -> float
    points: tuple               # 7-coordinate tuples inside the domain


def _poly_deriv(value: float, power: int, m: int) -> float:
    # d^m/du^m of u^power at u=value
    if m > power:
        return 0.0
    return _falling(power, m) * value ** (power - m)


def _t4():
    def expected(exps, c):
        if not _only(exps, {T}):
            return 0.0
        return _poly_deriv(c[T], 4, exps[T])

    return CorpusField(
        "t_fourth",
        lambda t, x1, x2, x3, y1, y2, y3: t**4,
        expected,
        ((1.0, 0, 0, 0, 1, 1, 1), (-0.7, 0, 0, 0, 1, 1, 1)),
    )


def _product_y():
    def expected(exps, c):
        if not _only(exps, {Y1, Y2, Y3}):
            return 0.0
        out = 1.0
        for v in (Y1, Y2, Y3):
            if exps[v] > 1:
                return 0.0
            if exps[v] == 0:
                out *= c[v]
        return out

    return CorpusField(
        "product_y",
        lambda t, x1, x2, x3, y1, y2, y3: y1 * y2 * y3,
        expected,
        ((0.0, 0, 0, 0, 1.0, 2.0, 3.0), (0.5, 0, 0, 0, 0.3, 1.7, 4.2)),
    )


def _third_root_power():
    # (y1 y2 y3)^(2/3) is separable: each factor differentiates independently.
    def expected(exps, c):
        if not _only(exps, {Y1, Y2, Y3}):
            return 0.0
        out = 1.0
        for v in (Y1, Y2, Y3):
            out *= _falling(2.0 / 3.0, exps[v]) * c[v] ** (2.0 / 3.0 - exps[v])
        return out

    return CorpusField(
        "third_root_power",
        lambda t, x1, x2, x3, y1, y2, y3: dt.powf(y1 * y2 * y3, 2.0 / 3.0),
        expected,
        ((0.0, 0, 0, 0, 1.0, 1.0, 1.0), (0.0, 0, 0, 0, 0.4, 2.5, 3.1)),
    )


def _exp2t():
    def expected(exps, c):
        if not _only(exps, {T}):
            return 0.0
        return 2.0 ** exps[T] * math.exp(2.0 * c[T])

    return CorpusField(
        "exp_2t",
        lambda t, x1, x2, x3, y1, y2, y3: dt.exp(2.0 * t),
        expected,
        ((0.0, 0, 0, 0, 1, 1, 1), (0.9, 0, 0, 0, 1, 1, 1)),
    )


def _sin_x1():
    def expected(exps, c):
        if not _only(exps, {X1}):
            return 0.0
        return math.sin(c[X1] + exps[X1] * math.pi / 2.0)

    return CorpusField(
        "sin_x1",
        lambda t, x1, x2, x3, y1, y2, y3: dt.sin(x1),
        expected,
        ((0.0, 0.3, 0, 0, 1, 1, 1), (0.0, -1.2, 0, 0, 1, 1, 1)),
    )


def _poly_x():
    def expected(exps, c):
        if not _only(exps, {X1, X2}):
            return 0.0
        return _poly_deriv(c[X1], 2, exps[X1]) * _poly_deriv(c[X2], 2, exps[X2])

    return CorpusField(
        "poly_x1x2",
        lambda t, x1, x2, x3, y1, y2, y3: x1**2 * x2**2,
        expected,
        ((0.0, 1.5, -2.0, 0, 1, 1, 1), (0.0, 0.2, 0.7, 0, 1, 1, 1)),
    )


def _recip_x3():
    def expected(exps, c):
        if not _only(exps, {X3}):
            return 0.0
        k = exps[X3]
        return (-1.0) ** k * math.factorial(k) / (1.0 + c[X3]) ** (k + 1)

    return CorpusField(
        "recip_1px3",
        lambda t, x1, x2, x3, y1, y2, y3: 1.0 / (1.0 + x3),
        expected,
        ((0.0, 0, 0, 0.5, 1, 1, 1), (0.0, 0, 0, -0.3, 1, 1, 1)),
    )


def _bilinear():
    def expected(exps, c):
        table = {
            (0, 0, 0, 0, 0, 0, 0): c[T] * c[Y1] + c[X2] * c[Y3],
            (1, 0, 0, 0, 0, 0, 0): c[Y1],
            (0, 0, 0, 0, 1, 0, 0): c[T],
            (1, 0, 0, 0, 1, 0, 0): 1.0,
            (0, 0, 1, 0, 0, 0, 0): c[Y3],
            (0, 0, 0, 0, 0, 0, 1): c[X2],
            (0, 0, 1, 0, 0, 0, 1): 1.0,
        }
        return table.get(tuple(exps), 0.0)

    return CorpusField(
        "bilinear",
        lambda t, x1, x2, x3, y1, y2, y3: t * y1 + x2 * y3,
        expected,
        ((0.8, 0, -0.4, 0, 1.1, 1, 2.3),),
    )


def _exp_sin():
    def expected(exps, c):
        if not _only(exps, {X1, X2}):
            return 0.0
        return math.exp(c[X1]) * math.sin(c[X2] + exps[X2] * math.pi / 2.0)

    return CorpusField(
        "exp_x1_sin_x2",
        lambda t, x1, x2, x3, y1, y2, y3: dt.exp(x1) * dt.sin(x2),
        expected,
        ((0.0, 0.4, 1.1, 0, 1, 1, 1),),
    )


def _sqrt_1py1sq():
    # f = sqrt(1 + y1^2); hand derivatives with s = sqrt(1 + y1^2):
    # f' = y/s, f'' = s^-3, f''' = -3 y s^-5, f'''' = (12 y^2 - 3) s^-7.
    def expected(exps, c):
        if not _only(exps, {Y1}):
            return 0.0
        y = c[Y1]
        s = math.sqrt(1.0 + y * y)
        return [s, y / s, s**-3, -3.0 * y * s**-5, (12.0 * y * y - 3.0) * s**-7][
            exps[Y1]
        ]

    return CorpusField(
        "sqrt_1_plus_y1sq",
        lambda t, x1, x2, x3, y1, y2, y3: dt.sqrt(1.0 + y1 * y1),
        expected,
        ((0.0, 0, 0, 0, 0.6, 1, 1), (0.0, 0, 0, 0, 2.4, 1, 1)),
    )


def _log_t():
    def expected(exps, c):
        k = exps[T]
        if not _only(exps, {T}):
            return 0.0
        if k == 0:
            return math.log(c[T])
        return (-1.0) ** (k - 1) * math.factorial(k - 1) / c[T] ** k

    return CorpusField(
        "log_t",
        lambda t, x1, x2, x3, y1, y2, y3: dt.log(t),
        expected,
        ((0.7, 0, 0, 0, 1, 1, 1), (2.5, 0, 0, 0, 1, 1, 1)),
    )


def _cos_combo():
    def expected(exps, c):
        if not _only(exps, {X2, Y2}):
            return 0.0
        a, b = exps[X2], exps[Y2]
        return 2.0**a * math.cos(2.0 * c[X2] + c[Y2] + (a + b) * math.pi / 2.0)

    return CorpusField(
        "cos_2x2_plus_y2",
        lambda t, x1, x2, x3, y1, y2, y3: dt.cos(2.0 * x2 + y2),
        expected,
        ((0.0, 0, 0.5, 0, 1, 0.9, 1),),
    )


CORPUS = (
    _t4(),
    _product_y(),
    _third_root_power(),
    _exp2t(),
    _sin_x1(),
    _poly_x(),
    _recip_x3(),
    _bilinear(),
    _exp_sin(),
    _sqrt_1py1sq(),
    _log_t(),
    _cos_combo(),
)
