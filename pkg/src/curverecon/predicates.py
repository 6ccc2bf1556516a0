"""Robust 2-D orientation and in-circle tests.

A floating-point filter settles almost every call; the rest are decided in
exact rational arithmetic, so results are correct signs for the given
doubles.  The compiled core carries an expansion-arithmetic version of the
same two predicates.
"""
from __future__ import annotations

from fractions import Fraction

_EPS = 2.0 ** -53
_CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_BOUND = (10.0 + 96.0 * _EPS) * _EPS


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def orient2d_exact(a, b, c) -> int:
    ax, ay, bx, by, cx, cy = (Fraction(float(v)) for v in (a[0], a[1], b[0], b[1], c[0], c[1]))
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def incircle_exact(a, b, c, d) -> int:
    dx, dy = Fraction(float(d[0])), Fraction(float(d[1]))
    rows = []
    for p in (a, b, c):
        x = Fraction(float(p[0])) - dx
        y = Fraction(float(p[1])) - dy
        rows.append((x, y, x * x + y * y))
    (ax, ay, al), (bx, by, bl), (cx, cy, cl) = rows
    det = al * (bx * cy - cx * by) + bl * (cx * ay - ax * cy) + cl * (ax * by - bx * ay)
    return _sign(det)


def orient2d(a, b, c) -> int:
    """+1 if a, b, c turn counter-clockwise, -1 if clockwise, 0 if collinear."""
    ax, ay, bx, by, cx, cy = float(a[0]), float(a[1]), float(b[0]), float(b[1]), float(c[0]), float(c[1])
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    bound = _CCW_BOUND * (abs(detleft) + abs(detright))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return orient2d_exact(a, b, c)


def incircle(a, b, c, d) -> int:
    """+1 if d lies inside the circle through counter-clockwise a, b, c."""
    if orient2d(a, b, c) == 0:
        raise ValueError("incircle undefined: a, b, c are collinear")
    return incircle_unchecked(a, b, c, d)


def incircle_unchecked(a, b, c, d) -> int:
    dx, dy = float(d[0]), float(d[1])
    adx, ady = float(a[0]) - dx, float(a[1]) - dy
    bdx, bdy = float(b[0]) - dx, float(b[1]) - dy
    cdx, cdy = float(c[0]) - dx, float(c[1]) - dy
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    perm = ((abs(bdxcdy) + abs(cdxbdy)) * alift
            + (abs(cdxady) + abs(adxcdy)) * blift
            + (abs(adxbdy) + abs(bdxady)) * clift)
    bound = _ICC_BOUND * perm
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return incircle_exact(a, b, c, d)
