"""Exact piecewise-linear homeomorphisms of the interval and the circle.

Interval maps are orientation preserving homeomorphisms of [0,1] fixing the
endpoints.  Circle maps are stored as lifts on one period: knots in [0,1),
strictly increasing values with values[-1] < values[0] + 1, and the wraparound
relation F(x+1) = F(x) + 1 implied.  The canonical lift has values[0] in [0,1).

All arithmetic is exact rational; no floats enter the core.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from fractions import Fraction

from .errors import DomainError, DomainMismatch, InvariantViolation

INTERVAL = "interval"
CIRCLE = "circle"

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _dedupe_collinear(pairs):
    """Drop interior points lying on the segment of their neighbours."""
    out = list(pairs)
    i = 1
    while i < len(out) - 1:
        (x0, y0), (x1, y1), (x2, y2) = out[i - 1], out[i], out[i + 1]
        if (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0):
            del out[i]
        else:
            i += 1
    return out


class PLMap:
    """Orientation-preserving PL homeomorphism with rational knots and values.

    Canonical form: collinear interior knots are removed on construction; for
    circle maps the lift is shifted so the first knot lies in [0,1) and its
    value in [0,1).  Equality is structural equality of canonical forms.
    """

    __slots__ = ("domain", "knots", "values")

    def __init__(self, domain, knots, values):
        knots = [frac(k) for k in knots]
        values = [frac(v) for v in values]
        if domain not in (INTERVAL, CIRCLE):
            raise InvariantViolation(f"unknown domain {domain!r}")
        if len(knots) != len(values) or not knots:
            raise InvariantViolation("knots and values must be nonempty, same length")
        if domain == INTERVAL:
            pairs = self._canon_interval(knots, values)
        else:
            pairs = self._canon_circle(knots, values)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "knots", tuple(p[0] for p in pairs))
        object.__setattr__(self, "values", tuple(p[1] for p in pairs))

    def __setattr__(self, *a):
        raise AttributeError("PLMap is immutable")

    @staticmethod
    def _canon_interval(knots, values):
        pairs = sorted(zip(knots, values))
        # drop exact duplicate anchor points (shared cell boundaries etc.)
        dedup = [pairs[0]]
        for p in pairs[1:]:
            if p == dedup[-1]:
                continue
            dedup.append(p)
        pairs = dedup
        if pairs[0] != (_ZERO, _ZERO) or pairs[-1] != (_ONE, _ONE):
            raise InvariantViolation("interval maps must fix 0 and 1")
        for i, ((x0, y0), (x1, y1)) in enumerate(zip(pairs, pairs[1:])):
            if x1 <= x0:
                raise InvariantViolation(f"knots not strictly increasing at index {i + 1}")
            if y1 <= y0:
                raise InvariantViolation(f"values not strictly increasing at index {i + 1}")
        return _dedupe_collinear(pairs)

    @staticmethod
    def _canon_circle(knots, values):
        # Shift each lift point by an integer so the knot lands in [0,1);
        # F(x - k) = F(x) - k keeps the pair on the same lift.
        moved = []
        for x, y in zip(knots, values):
            k = math.floor(x)
            moved.append((x - k, y - k))
        moved.sort()
        dedup = [moved[0]]
        for p in moved[1:]:
            if p[0] == dedup[-1][0]:
                if p[1] != dedup[-1][1]:
                    raise InvariantViolation(f"conflicting values at knot {p[0]}")
                continue
            dedup.append(p)
        pairs = dedup
        for i, ((x0, y0), (x1, y1)) in enumerate(zip(pairs, pairs[1:])):
            if y1 <= y0:
                raise InvariantViolation(f"values not strictly increasing at index {i + 1}")
        if len(pairs) > 1 and pairs[-1][1] >= pairs[0][1] + 1:
            raise InvariantViolation("lift must increase by less than 1 over one period")
        # cyclic collinearity: a knot is redundant if the slopes on both sides agree
        if len(pairs) > 1:
            ext = pairs + [(pairs[0][0] + 1, pairs[0][1] + 1)]
            keep = []
            n = len(pairs)
            for i in range(n):
                xm, ym = ext[i - 1] if i > 0 else (pairs[-1][0] - 1, pairs[-1][1] - 1)
                x0, y0 = ext[i]
                x1, y1 = ext[i + 1]
                if (y0 - ym) * (x1 - x0) != (y1 - y0) * (x0 - xm):
                    keep.append(pairs[i])
            if not keep:
                # pure rotation: anchor at 0
                x0, y0 = pairs[0]
                rot = y0 - x0
                pairs = [(_ZERO, rot)]
            else:
                pairs = keep
        # normalize the lift band: first value in [0,1)
        shift = math.floor(pairs[0][1])
        if shift:
            pairs = [(x, y - shift) for x, y in pairs]
        return pairs

    # -- basic protocol -------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, PLMap)
            and self.domain == other.domain
            and self.knots == other.knots
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.domain, self.knots, self.values))

    def __repr__(self):
        pts = ", ".join(f"({k},{v})" for k, v in zip(self.knots, self.values))
        return f"PLMap({self.domain}: {pts})"

    @classmethod
    def identity(cls, domain) -> "PLMap":
        if domain == INTERVAL:
            return cls(INTERVAL, [_ZERO, _ONE], [_ZERO, _ONE])
        return cls(CIRCLE, [_ZERO], [_ZERO])

    @classmethod
    def rotation(cls, amount) -> "PLMap":
        return cls(CIRCLE, [_ZERO], [frac(amount)])

    def is_identity(self) -> bool:
        return self == PLMap.identity(self.domain)

    # -- evaluation ------------------------------------------------------

    def _interp(self, ext_knots, ext_values, x):
        i = bisect_right(ext_knots, x) - 1
        if i == len(ext_knots) - 1:
            return ext_values[-1]
        x0, x1 = ext_knots[i], ext_knots[i + 1]
        y0, y1 = ext_values[i], ext_values[i + 1]
        return y0 + (x - x0) * (y1 - y0) / (x1 - x0)

    def evaluate(self, x) -> Fraction:
        """Exact value; for circle maps, the value of the canonical lift."""
        x = frac(x)
        if self.domain == INTERVAL:
            if not _ZERO <= x <= _ONE:
                raise DomainError(f"{x} outside [0,1]")
            return self._interp(self.knots, self.values, x)
        x0 = self.knots[0]
        j = math.floor(x - x0)
        xr = x - j
        ext_k = self.knots + (x0 + 1,)
        ext_v = self.values + (self.values[0] + 1,)
        return self._interp(ext_k, ext_v, xr) + j

    def evaluate_inverse(self, y) -> Fraction:
        y = frac(y)
        if self.domain == INTERVAL:
            if not _ZERO <= y <= _ONE:
                raise DomainError(f"{y} outside [0,1]")
            return self._interp(self.values, self.knots, y)
        v0 = self.values[0]
        j = math.floor(y - v0)
        yr = y - j
        ext_v = self.values + (v0 + 1,)
        ext_k = self.knots + (self.knots[0] + 1,)
        return self._interp(ext_v, ext_k, yr) + j

    __call__ = evaluate

    # -- group operations --------------------------------------------------

    def invert(self) -> "PLMap":
        return PLMap(self.domain, self.values, self.knots)

    def inverse(self) -> "PLMap":
        return self.invert()


def _reduce_mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


def compose(f: PLMap, g: PLMap, *rest: PLMap) -> PLMap:
    """compose(f, g)(x) = f(g(x)); extra arguments compose on the right."""
    if rest:
        out = compose(f, g)
        for h in rest:
            out = compose(out, h)
        return out
    if not isinstance(f, PLMap) or not isinstance(g, PLMap):
        raise DomainMismatch("compose expects PLMap operands")
    if f.domain != g.domain:
        raise DomainMismatch(f"{f.domain} vs {g.domain}")
    if f.domain == INTERVAL:
        cand = set(g.knots)
        cand.update(g.evaluate_inverse(k) for k in f.knots)
        xs = sorted(cand)
        ys = [f.evaluate(g.evaluate(x)) for x in xs]
        return PLMap(INTERVAL, xs, ys)
    cand = set(g.knots)
    cand.update(_reduce_mod1(g.evaluate_inverse(k)) for k in f.knots)
    xs = sorted(cand)
    ys = [f.evaluate(g.evaluate(x)) for x in xs]
    return PLMap(CIRCLE, xs, ys)


def compose_all(maps, domain=None) -> PLMap:
    """Ordered product m_0 ∘ m_1 ∘ ... ∘ m_{k-1}."""
    maps = list(maps)
    if not maps:
        if domain is None:
            raise DomainMismatch("empty product needs an explicit domain")
        return PLMap.identity(domain)
    out = maps[0]
    for m in maps[1:]:
        out = compose(out, m)
    return out


def invert(f: PLMap) -> PLMap:
    return f.invert()


def evaluate(m, x) -> Fraction:
    """Evaluate a PLMap or any object exposing .evaluate (self-similar maps)."""
    return m.evaluate(x)


# -- metrics ----------------------------------------------------------------


def _circle_point_distance(t: Fraction) -> Fraction:
    """Arc-length distance on R/Z of a displacement t."""
    r = _reduce_mod1(t)
    return min(r, 1 - r)


def _refinement(f: PLMap, g: PLMap):
    return sorted(set(f.knots) | set(g.knots))


def sup_distance(f: PLMap, g: PLMap) -> Fraction:
    """max_x d_M(f(x), g(x)), exact.

    The displacement f - g is PL, so on the interval the maximum sits at a
    knot of the refinement.  On the circle the arc-length distance of the
    displacement additionally peaks at 1/2 whenever the displacement crosses
    a half-integer inside a linear piece.
    """
    if f.domain != g.domain:
        raise DomainMismatch(f"{f.domain} vs {g.domain}")
    xs = _refinement(f, g)
    if f.domain == INTERVAL:
        best = _ZERO
        for x in xs:
            d = abs(f.evaluate(x) - g.evaluate(x))
            if d > best:
                best = d
        return best
    best = _ZERO
    disp = [f.evaluate(x) - g.evaluate(x) for x in xs]
    n = len(xs)
    for i in range(n):
        h0 = disp[i]
        h1 = disp[(i + 1) % n]  # displacement is 1-periodic
        for h in (h0,):
            d = _circle_point_distance(h)
            if d > best:
                best = d
        lo, hi = min(h0, h1), max(h0, h1)
        # does the piece cross a half-integer strictly inside?
        n_max = math.ceil(hi - _HALF) - 1
        n_min = math.floor(lo - _HALF) + 1
        if n_max >= n_min:
            return _HALF
    return best


def complete_distance(f: PLMap, g: PLMap) -> Fraction:
    """D(f,g) = d(f,g) + d(f^{-1}, g^{-1}); a complete metric for the C0 topology."""
    return sup_distance(f, g) + sup_distance(f.invert(), g.invert())


def displacement(f: PLMap) -> Fraction:
    return sup_distance(f, PLMap.identity(f.domain))


# -- supports -----------------------------------------------------------------


class SupportSet:
    """Finite union of disjoint closed intervals/arcs with rational endpoints.

    Interval components satisfy 0 <= lo <= hi <= 1.  Circle components are
    arcs [lo, hi] in lift coordinates with lo in [0,1) and hi - lo <= 1; a
    single component of length 1 is the whole circle.
    """

    __slots__ = ("domain", "components")

    def __init__(self, domain, components):
        comps = []
        for lo, hi in components:
            lo, hi = frac(lo), frac(hi)
            if domain == INTERVAL:
                if not (_ZERO <= lo <= hi <= _ONE):
                    raise InvariantViolation(f"bad interval component [{lo},{hi}]")
            else:
                if not (_ZERO <= lo < _ONE and lo <= hi <= lo + 1):
                    raise InvariantViolation(f"bad circle component [{lo},{hi}]")
            comps.append((lo, hi))
        comps.sort()
        for (a, b), (c, d) in zip(comps, comps[1:]):
            if c <= b:
                raise InvariantViolation("components must be pairwise disjoint")
        if domain == CIRCLE and len(comps) > 1:
            # wraparound disjointness: last component must end before first + 1
            if comps[-1][1] >= comps[0][0] + 1:
                raise InvariantViolation("components must be pairwise disjoint (wrap)")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "components", tuple(comps))

    def __setattr__(self, *a):
        raise AttributeError("SupportSet is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, SupportSet)
            and self.domain == other.domain
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.domain, self.components))

    def __repr__(self):
        return f"SupportSet({self.domain}, {list(self.components)})"

    def is_empty(self) -> bool:
        return not self.components

    def is_whole_circle(self) -> bool:
        return (
            self.domain == CIRCLE
            and len(self.components) == 1
            and self.components[0][1] == self.components[0][0] + 1
        )

    def hull(self):
        """(lo, hi) of the smallest closed interval/arc containing the set."""
        if not self.components:
            return None
        return (self.components[0][0], self.components[-1][1])

    def map_by(self, h: PLMap) -> "SupportSet":
        """Image under a PL homeomorphism (monotone, so endpoints map to endpoints)."""
        if h.domain != self.domain:
            raise DomainMismatch(f"{h.domain} vs {self.domain}")
        comps = []
        for lo, hi in self.components:
            a, b = h.evaluate(lo), h.evaluate(hi)
            if self.domain == CIRCLE:
                k = math.floor(a)
                a, b = a - k, b - k
            comps.append((a, b))
        return SupportSet(self.domain, comps)

    def contained_in_arcs(self, arcs, domain=None) -> bool:
        """True iff every component sits strictly inside some open arc."""
        domain = domain or self.domain
        for comp in self.components:
            if not any(arc_contains_closed(domain, arc, comp) for arc in arcs):
                return False
        return True


def arc_contains_point(domain, arc, p) -> bool:
    """Is the point p strictly inside the open arc/interval?"""
    lo, hi = frac(arc[0]), frac(arc[1])
    p = frac(p)
    if domain == INTERVAL:
        return lo < p < hi
    shifted = p - math.floor(p - lo)  # into [lo, lo+1)
    return lo < shifted < hi


def arc_contains_closed(domain, arc, comp) -> bool:
    """Is the closed interval/arc comp strictly inside the open arc?"""
    lo, hi = frac(arc[0]), frac(arc[1])
    a, b = frac(comp[0]), frac(comp[1])
    if domain == INTERVAL:
        return lo < a and b < hi
    if b - a >= 1:
        return False  # whole circle never fits in a proper open arc
    a_shift = a - math.floor(a - lo)  # into [lo, lo+1)
    return lo < a_shift and a_shift + (b - a) < hi


def _fixed_intervals(xs, diffs):
    """Maximal nondegenerate closed intervals where the PL diff vanishes."""
    fixed = []
    run_start = None
    for i in range(len(xs) - 1):
        z0, z1 = diffs[i] == 0, diffs[i + 1] == 0
        if z0 and z1:
            if run_start is None:
                run_start = xs[i]
        else:
            if run_start is not None:
                fixed.append((run_start, xs[i]))
                run_start = None
    if run_start is not None:
        fixed.append((run_start, xs[-1]))
    return fixed


def support(f: PLMap) -> SupportSet:
    """Closure of the moved set {x : f(x) != x}, exact.

    Equals the complement of the union of interiors of the maximal fixed
    intervals; isolated fixed points are swallowed by the closure.
    """
    if f.domain == INTERVAL:
        xs = list(f.knots)
        diffs = [f.values[i] - f.knots[i] for i in range(len(xs))]
        fixed = _fixed_intervals(xs, diffs)
        comps = []
        cur = _ZERO
        for a, b in fixed:
            if a > cur:
                comps.append((cur, a))
            cur = b
        if cur < _ONE:
            comps.append((cur, _ONE))
        return SupportSet(INTERVAL, comps)

    # circle: displacement h(x) = F(x) - x is 1-periodic; fixed points are
    # where h hits an integer (at most one integer value is attained).
    x0 = f.knots[0]
    xs = list(f.knots) + [x0 + 1]
    hs = [f.evaluate(x) - x for x in xs]
    attained = set()
    for i in range(len(xs) - 1):
        lo, hi = min(hs[i], hs[i + 1]), max(hs[i], hs[i + 1])
        k0 = math.ceil(lo)
        while k0 <= math.floor(hi):
            attained.add(k0)
            k0 += 1
    if not attained:
        return SupportSet(CIRCLE, [(_ZERO, _ONE)])  # moved everywhere
    if len(attained) > 1:
        raise InvariantViolation("circle displacement attains two integers")
    k = attained.pop()
    diffs = [h - k for h in hs]
    fixed = _fixed_intervals(xs, diffs)
    if not fixed:
        return SupportSet(CIRCLE, [(_ZERO, _ONE)])
    comps = []
    for (a1, b1), (a2, b2) in zip(fixed, fixed[1:]):
        comps.append((b1, a2))
    # wrap gap: from the last fixed interval around to the first
    wrap_lo = fixed[-1][1]
    wrap_hi = fixed[0][0] + 1
    if wrap_hi > wrap_lo:
        comps.append((wrap_lo, wrap_hi))
    comps = [(_reduce_mod1(a), _reduce_mod1(a) + (b - a)) for a, b in comps]
    return SupportSet(CIRCLE, comps)
