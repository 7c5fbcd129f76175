"""Anderson's trick: maps supported in a ball as single commutators.

The translator b pushes the support hull off itself in one step and then
squeezes geometrically (ratio 1/2) toward an attracting point strictly
inside the ball, so supp(b) stays compactly inside the open ball and all
forward iterates of supp(f) are pairwise disjoint.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import (
    BallsNotDisjoint,
    DomainMismatch,
    PreconditionViolated,
    SupportTooLarge,
)
from .plmaps import (
    CIRCLE,
    INTERVAL,
    PLMap,
    SupportSet,
    arc_contains_closed,
    frac,
    support,
)
from .towers import (
    DEFAULT_DEPTH_BOUND,
    AndersonTower,
    DisjointUnionMap,
    commutator_value,
)


def _normalize_ball(domain, ball):
    lo, hi = frac(ball[0]), frac(ball[1])
    if domain == INTERVAL:
        if not (0 <= lo < hi <= 1):
            raise PreconditionViolated(f"bad interval ball ({lo},{hi})")
        return lo, hi
    if not lo < hi:
        raise PreconditionViolated(f"bad arc ({lo},{hi})")
    if hi - lo >= 1:
        raise PreconditionViolated("circle ball must be a proper arc")
    shift = math.floor(lo)
    return lo - shift, hi - shift


def _hull_in_window(domain, supp: SupportSet, ball):
    """Support hull shifted into the ball's lift window; SupportTooLarge if it pokes out."""
    lo, hi = ball
    if not supp.contained_in_arcs([ball], domain):
        raise SupportTooLarge("support closure not compactly contained in the ball")
    if domain == INTERVAL:
        return supp.hull()
    pts = []
    for a, b in supp.components:
        a_sh = a - math.floor(a - lo)
        pts.append((a_sh, a_sh + (b - a)))
    return (min(p[0] for p in pts), max(p[1] for p in pts))


def build_translator(ball, supp: SupportSet, domain=None, depth_check=10) -> PLMap:
    """PL map b supported in the ball with b^n(supp), n >= 0, pairwise disjoint.

    Anchors: identity up to m = mid(ball_lo, s_lo); the support hull
    [s_lo, s_hi] jumps past itself in one step; on [s_hi, p] the map is
    x -> (x + p)/2, squeezing with ratio 1/2 toward p = mid(s_hi, ball_hi).
    """
    domain = domain or supp.domain
    lo, hi = _normalize_ball(domain, ball)
    if supp.is_empty():
        return PLMap.identity(domain)
    s_lo, s_hi = _hull_in_window(domain, supp, (lo, hi))
    m = (lo + s_lo) / 2
    p = (s_hi + hi) / 2
    jump = (3 * s_hi + p) / 4          # where s_lo lands: inside (s_hi, (s_hi+p)/2)
    top = (s_hi + p) / 2               # where s_hi lands
    pts = [(m, m), (s_lo, jump), (s_hi, top), (p, p)]
    if domain == INTERVAL:
        anchors = [(Fraction(0), Fraction(0))] + pts + [(Fraction(1), Fraction(1))]
        anchors = [(x, y) for x, y in anchors]
        b = PLMap(INTERVAL, [a[0] for a in anchors], [a[1] for a in anchors])
    else:
        b = PLMap(CIRCLE, [a[0] for a in pts], [a[1] for a in pts])
    _verify_disjoint_iterates(b, (s_lo, s_hi), depth_check)
    return b


def _verify_disjoint_iterates(b: PLMap, hull, depth):
    s_lo, s_hi = hull
    prev_hi = s_hi
    lo, hi = b.evaluate(s_lo), b.evaluate(s_hi)
    for _ in range(depth):
        if lo <= prev_hi:
            raise SupportTooLarge("translator iterates overlap")
        prev_hi = hi
        lo, hi = b.evaluate(lo), b.evaluate(hi)


def anderson_factor(f: PLMap, ball, depth_bound=DEFAULT_DEPTH_BOUND):
    """Write f = [a, b] with supp(a), supp(b) inside the ball.

    a is the Anderson tower over the translator b: a = b^n f b^{-n} on
    b^n(supp f), identity elsewhere.  Returns (a, b); for f = identity both
    factors are the identity.
    """
    lo, hi = _normalize_ball(f.domain, ball)
    supp = support(f)
    if supp.is_empty():
        return (
            AndersonTower(f, PLMap.identity(f.domain), (lo, hi), depth_bound),
            PLMap.identity(f.domain),
        )
    b = build_translator((lo, hi), supp, f.domain)
    a = AndersonTower(f, b, (lo, hi), depth_bound)
    return a, b


def restrict_to_ball(f: PLMap, ball) -> PLMap:
    """The factor of f acting on the support components inside the ball.

    f must map each of its support components into itself (automatic in
    dimension 1); the restriction equals f there and the identity elsewhere.
    """
    domain = f.domain
    lo, hi = _normalize_ball(domain, ball)
    supp = support(f)
    pieces = [c for c in supp.components if arc_contains_closed(domain, (lo, hi), c)]
    if not pieces:
        return PLMap.identity(domain)
    if domain == INTERVAL:
        pts = {Fraction(0): Fraction(0), Fraction(1): Fraction(1)}
        for a, b in pieces:
            pts[a] = a
            pts[b] = b
            for k in f.knots:
                if a <= k <= b:
                    pts[k] = f.evaluate(k)
        xs = sorted(pts)
        return PLMap(INTERVAL, xs, [pts[x] for x in xs])
    # circle: assemble lift anchors on one period starting at the ball base
    pts = {}
    for a, b in pieces:
        a_sh = a - math.floor(a - lo)
        b_sh = a_sh + (b - a)
        pts[a_sh] = a_sh
        pts[b_sh] = b_sh
        for k in f.knots:
            k_sh = k - math.floor(k - a_sh)
            if k_sh <= b_sh:
                pts[k_sh] = f.evaluate(k_sh)
    # anchor a fixed point outside the ball so the identity part is pinned
    pts.setdefault(hi, hi)
    xs = sorted(pts)
    return PLMap(CIRCLE, xs, [pts[x] for x in xs])


def _balls_pairwise_disjoint(domain, balls):
    norm = [_normalize_ball(domain, b) for b in balls]
    if domain == INTERVAL:
        srt = sorted(norm)
        return all(a[1] <= b[0] for a, b in zip(srt, srt[1:]))
    srt = sorted(norm)
    for (lo1, hi1), (lo2, hi2) in zip(srt, srt[1:]):
        if hi1 > lo2:
            return False
    if len(srt) > 1 and srt[-1][1] > srt[0][0] + 1:
        return False
    return True


def multi_anderson(f: PLMap, balls, depth_bound=DEFAULT_DEPTH_BOUND):
    """Simultaneous Anderson factorization over a finite set of disjoint balls.

    supp(f) must lie in the union, compactly in each ball.  Returns (a, b)
    where each is a product of per-ball factors with disjoint supports and
    [a, b] = f pointwise.
    """
    domain = f.domain
    if not balls:
        raise PreconditionViolated("need at least one ball")
    if not _balls_pairwise_disjoint(domain, balls):
        raise BallsNotDisjoint("balls overlap")
    norm = [_normalize_ball(domain, b) for b in balls]
    supp = support(f)
    if not supp.contained_in_arcs(norm, domain):
        raise SupportTooLarge("support not contained in the union of balls")
    a_pieces = []
    b_factors = []
    for ball in norm:
        f_b = restrict_to_ball(f, ball)
        a_b, bb = anderson_factor(f_b, ball, depth_bound)
        a_pieces.append((ball, a_b))
        b_factors.append(bb)
    a = DisjointUnionMap(a_pieces)
    b = b_factors[0]
    from .plmaps import compose

    for extra in b_factors[1:]:
        b = compose(b, extra)
    return a, b


def _agree_on_arc(m1, m2, domain, arc, extra_points=()):
    """Exact agreement of two maps on a closed-up arc.

    For PL inputs agreement at the union of their knots inside the arc plus
    the arc endpoints is exact and complete; tower inputs are compared at
    the same canonical point set.
    """
    lo, hi = arc
    pts = {frac(lo), frac(hi), (frac(lo) + frac(hi)) / 2}
    for m in (m1, m2):
        for k in getattr(m, "knots", ()):
            if domain == INTERVAL:
                if lo <= k <= hi:
                    pts.add(k)
            else:
                k_sh = k - math.floor(k - lo)
                if k_sh <= hi:
                    pts.add(k_sh)
    pts.update(extra_points)
    return all(m1.evaluate(x) == m2.evaluate(x) for x in pts)


def commutator_locality_check(a, b, a2, b2, inner_ball, mid_ball, outer_ball,
                              grid_exponent=12):
    """Verify the locality identity [a, b] = [a2, b2].

    Preconditions (raise PreconditionViolated when broken): supp(a) and
    supp(b) inside the inner ball; a2 agrees with a on the inner ball with
    supp(a2) in the middle ball; b2 agrees with b on the middle ball with
    supp(b2) in the outer ball; balls nested.  Under these the commutators
    coincide; the check evaluates both at the canonical grid and returns
    whether they match everywhere.
    """
    domain = a.domain
    inner = _normalize_ball(domain, inner_ball)
    mid = _normalize_ball(domain, mid_ball)
    outer = _normalize_ball(domain, outer_ball)
    if not arc_contains_closed(domain, mid, inner) and inner != mid:
        # allow equal balls; otherwise require strict nesting
        if not (inner[0] >= mid[0] and inner[1] <= mid[1]):
            raise PreconditionViolated("inner ball not inside middle ball")
    for m, region, name in ((a, inner, "a"), (b, inner, "b"),
                            (a2, mid, "a2"), (b2, outer, "b2")):
        s = _support_of(m)
        if s is not None and not s.contained_in_arcs([region], domain):
            raise PreconditionViolated(f"supp({name}) escapes its ball")
    if not _agree_on_arc(a, a2, domain, inner):
        raise PreconditionViolated("a2 does not agree with a on the inner ball")
    if not _agree_on_arc(b, b2, domain, mid):
        raise PreconditionViolated("b2 does not agree with b on the middle ball")
    step = Fraction(1, 2 ** grid_exponent)
    pts = [k * step for k in range(2 ** grid_exponent)]
    if domain == INTERVAL:
        pts.append(Fraction(1))
    for x in pts:
        if commutator_value(a, b, x) != commutator_value(a2, b2, x):
            return False
    return True


def _support_of(m):
    if isinstance(m, PLMap):
        return support(m)
    hull = getattr(m, "support_hull", None)
    if hull is None:
        return None
    h = hull() if callable(hull) else hull
    if h is None:
        return SupportSet(m.domain, [])
    lo, hi = h
    if m.domain == CIRCLE:
        sh = math.floor(lo)
        lo, hi = lo - sh, hi - sh
    return SupportSet(m.domain, [(lo, hi)])
