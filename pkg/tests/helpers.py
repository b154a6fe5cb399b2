"""Shared test utilities: the independent finite-difference oracle."""

from __future__ import annotations

from jetfinsler.difftools import PartialSpec


def central_difference(field, coords, spec, step=1e-5):
    """Plain second-order central differences, orders 1 and 2 only.

    Kept deliberately independent of the package's differentiation paths: it
    evaluates the field at shifted float coordinates and nothing else.
    """
    spec = PartialSpec.coerce(spec)
    coords = tuple(float(v) for v in coords)
    idx = spec.indices
    if len(idx) == 1:
        return (_shift(field, coords, {idx[0]: step}) -
                _shift(field, coords, {idx[0]: -step})) / (2 * step)
    if len(idx) == 2 and idx[0] == idx[1]:
        v = idx[0]
        return (
            _shift(field, coords, {v: step})
            - 2.0 * field(*coords)
            + _shift(field, coords, {v: -step})
        ) / step**2
    if len(idx) == 2:
        a, b = idx
        return (
            _shift(field, coords, {a: step, b: step})
            - _shift(field, coords, {a: step, b: -step})
            - _shift(field, coords, {a: -step, b: step})
            + _shift(field, coords, {a: -step, b: -step})
        ) / (4 * step**2)
    raise ValueError("central_difference supports orders 1 and 2 only")


def _shift(field, coords, offsets):
    shifted = list(coords)
    for v, d in offsets.items():
        shifted[v] += d
    return field(*shifted)
