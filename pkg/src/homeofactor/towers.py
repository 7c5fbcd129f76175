"""Self-similar interval/circle maps evaluated by finite descent.

These are exact maps with infinitely many linear pieces accumulating at a
point, so they cannot be stored as finite PL data.  Evaluation at any
rational terminates within a depth bound or raises DepthExceeded.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DepthExceeded, DomainMismatch, InvariantViolation
from .plmaps import CIRCLE, INTERVAL, PLMap, frac, support

DEFAULT_DEPTH_BOUND = 64


class ExactMap:
    """Minimal interface shared by PL and self-similar maps."""

    domain = None

    def evaluate(self, x):  # pragma: no cover - interface
        raise NotImplementedError

    def evaluate_inverse(self, y):  # pragma: no cover - interface
        raise NotImplementedError

    def inverse(self):
        return InverseMap(self)

    def is_identity(self):
        return False

    def __call__(self, x):
        return self.evaluate(x)


class InverseMap(ExactMap):
    """Lazy inverse of any exact map."""

    def __init__(self, base):
        self.base = base
        self.domain = base.domain

    def evaluate(self, x):
        return self.base.evaluate_inverse(x)

    def evaluate_inverse(self, y):
        return self.base.evaluate(y)

    def inverse(self):
        return self.base

    def is_identity(self):
        return self.base.is_identity()


class ComposedMap(ExactMap):
    """Ordered composition m_0 ∘ m_1 ∘ ... ∘ m_{k-1}, evaluated pointwise."""

    def __init__(self, maps):
        maps = list(maps)
        if not maps:
            raise InvariantViolation("empty composition")
        dom = maps[0].domain
        for m in maps:
            if m.domain != dom:
                raise DomainMismatch("mixed domains in composition")
        self.maps = maps
        self.domain = dom

    def evaluate(self, x):
        for m in reversed(self.maps):
            x = m.evaluate(x)
        return x

    def evaluate_inverse(self, y):
        for m in self.maps:
            y = m.evaluate_inverse(y)
        return y


class AndersonTower(ExactMap):
    """The map a(x) = b^n f b^{-n}(x) on b^n(supp f) for n >= 0, identity elsewhere.

    b must translate supp(f) off itself with all forward iterates pairwise
    disjoint; this is checked up to depth_bound at construction.  Circle data
    is handled in the lift window [ball_lo, ball_lo + 1); b and f must fix
    the window base point (true for translator-built b and f supported in
    the ball).  support_hull assumes b's attracting fixed point is a knot,
    which holds for translator-built b.
    """

    def __init__(self, f: PLMap, b: PLMap, ball, depth_bound=DEFAULT_DEPTH_BOUND):
        if f.domain != b.domain:
            raise DomainMismatch(f"{f.domain} vs {b.domain}")
        if depth_bound < 1:
            raise InvariantViolation("depth_bound must be positive")
        self.f = f
        self.b = b
        self.domain = f.domain
        self.ball = (frac(ball[0]), frac(ball[1]))
        self.depth_bound = depth_bound
        self._b_inv = b.invert()
        self._f_inv = f.invert()
        supp = support(f)
        self._supp_window = self._shift_components(supp.components)
        if self._supp_window:
            self._hull = (
                min(a for a, _ in self._supp_window),
                max(b_ for _, b_ in self._supp_window),
            )
            self._check_window_consistency()
            self._check_disjoint_iterates()
        else:
            self._hull = None

    def _shift_components(self, comps):
        if self.domain == INTERVAL:
            return list(comps)
        lo = self.ball[0]
        out = []
        for a, b_ in comps:
            a_sh = a - math.floor(a - lo)
            out.append((a_sh, a_sh + (b_ - a)))
        out.sort()
        return out

    def _check_window_consistency(self):
        lo, hi = self.ball
        if self.domain == CIRCLE:
            # the canonical lifts of b and f must fix the window base point
            for m in (self.b, self.f):
                if m.evaluate(lo) != lo:
                    raise InvariantViolation("map does not fix the ball boundary")
        if not (lo < self._hull[0] and self._hull[1] < hi):
            raise InvariantViolation("support of f not compactly contained in the ball")

    def _check_disjoint_iterates(self):
        s_lo, s_hi = self._hull
        prev_hi = s_hi
        lo, hi = self.b.evaluate(s_lo), self.b.evaluate(s_hi)
        for _ in range(self.depth_bound):
            if lo <= prev_hi:
                raise InvariantViolation("translator iterates of the support overlap")
            prev_hi = hi
            lo, hi = self.b.evaluate(lo), self.b.evaluate(hi)

    def is_identity(self):
        return self._hull is None

    def support_hull(self):
        """Closed arc (in window coordinates) containing the support exactly."""
        if self._hull is None:
            return None
        return (self._hull[0], self._attracting_point())

    def _attracting_point(self):
        _, s_hi = self._hull
        b = self.b
        lo = self.ball[0]
        candidates = []
        for k in b.knots:
            k_sh = k if self.domain == INTERVAL else k - math.floor(k - lo)
            if k_sh >= s_hi and b.evaluate(k_sh) == k_sh:
                candidates.append(k_sh)
        if candidates:
            return min(candidates)
        return self.ball[1]

    def _to_window(self, x):
        if self.domain == INTERVAL:
            return x, 0
        lo = self.ball[0]
        j = math.floor(x - lo)
        return x - j, j

    def _in_support(self, y):
        for a, b_ in self._supp_window:
            if a <= y <= b_:
                return True
            if y < a:
                return False
        return False

    def _descend(self, inner: PLMap, x):
        if self._hull is None:
            return x
        xw, j = self._to_window(x)
        s_lo = self._hull[0]
        y = xw
        for n in range(self.depth_bound + 1):
            if y < s_lo:
                return x
            if self._in_support(y):
                z = inner.evaluate(y)
                for _ in range(n):
                    z = self.b.evaluate(z)
                return z + j if self.domain == CIRCLE else z
            y_next = self._b_inv.evaluate(y)
            if y_next == y:
                return x
            y = y_next
        raise DepthExceeded(f"descent exceeded depth bound {self.depth_bound}")

    def evaluate(self, x):
        return self._descend(self.f, frac(x))

    def evaluate_inverse(self, y):
        return self._descend(self._f_inv, frac(y))


class EquivariantTower(ExactMap):
    """Increasing map h of [0,1] with h(g(x)) = h(x)/2 for all x in (0, t].

    Built from a PL base phi: [g(t), t] -> [t/2, t]; the full map is
    h(x) = 2^{-n} phi(g^{-n}(x)) on the annulus g^{n}([g(t), t]).  Identity
    at 0 and beyond t.
    """

    def __init__(self, base_pairs, inner, window_t, depth_bound=DEFAULT_DEPTH_BOUND):
        self.base_pairs = tuple((frac(a), frac(b)) for a, b in base_pairs)
        self.inner = inner
        self.t = frac(window_t)
        self.depth_bound = depth_bound
        self.domain = INTERVAL
        if self.t <= 0:
            raise InvariantViolation("window must be positive")
        gt = inner.evaluate(self.t)
        if not (0 < gt < self.t):
            raise InvariantViolation("inner map must contract the window endpoint")
        if self.base_pairs[0] != (gt, self.t / 2) or self.base_pairs[-1] != (self.t, self.t):
            raise InvariantViolation("base must map [g(t), t] onto [t/2, t] fixing t")
        for (x0, y0), (x1, y1) in zip(self.base_pairs, self.base_pairs[1:]):
            if x1 <= x0 or y1 <= y0:
                raise InvariantViolation("base must be strictly increasing")
        self._gt = gt

    @classmethod
    def linear_base(cls, inner, window_t, depth_bound=DEFAULT_DEPTH_BOUND):
        t = frac(window_t)
        gt = inner.evaluate(t)
        return cls([(gt, t / 2), (t, t)], inner, t, depth_bound)

    def _base_eval(self, x):
        pairs = self.base_pairs
        for (x0, y0), (x1, y1) in zip(pairs, pairs[1:]):
            if x0 <= x <= x1:
                return y0 + (x - x0) * (y1 - y0) / (x1 - x0)
        raise InvariantViolation(f"{x} outside base domain")

    def _base_inverse(self, y):
        pairs = self.base_pairs
        for (x0, y0), (x1, y1) in zip(pairs, pairs[1:]):
            if y0 <= y <= y1:
                return x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        raise InvariantViolation(f"{y} outside base image")

    def is_identity(self):
        if any(a != b for a, b in self.base_pairs):
            return False
        g = self.inner
        knots = [k for k in getattr(g, "knots", ()) if 0 < k <= self.t]
        pts = knots + [self.t]
        return all(g.evaluate(x) == x / 2 for x in pts)

    def evaluate(self, x):
        x = frac(x)
        if x < 0:
            raise InvariantViolation(f"{x} below 0")
        if x == 0:
            return Fraction(0)
        if x >= self.t:
            return x  # identity extension beyond the window
        y = x
        n = 0
        while y < self._gt:
            y = self.inner.evaluate_inverse(y)
            n += 1
            if n > self.depth_bound:
                raise DepthExceeded(f"descent exceeded depth bound {self.depth_bound}")
        return self._base_eval(y) / (2 ** n)

    def evaluate_inverse(self, z):
        z = frac(z)
        if z < 0:
            raise InvariantViolation(f"{z} below 0")
        if z == 0:
            return Fraction(0)
        if z >= self.t:
            return z
        n = 0
        y = z
        half_t = self.t / 2
        while y < half_t:
            y = y * 2
            n += 1
            if n > self.depth_bound:
                raise DepthExceeded(f"descent exceeded depth bound {self.depth_bound}")
        x = self._base_inverse(y)
        for _ in range(n):
            x = self.inner.evaluate(x)
        return x


class DisjointUnionMap(ExactMap):
    """Product of maps with pairwise disjoint supports, one per open ball.

    Each piece must map its ball onto itself (true for Anderson towers and
    maps supported inside the ball).
    """

    def __init__(self, pieces):
        if not pieces:
            raise InvariantViolation("need at least one piece")
        self.pieces = [((frac(b[0]), frac(b[1])), m) for b, m in pieces]
        self.domain = pieces[0][1].domain

    def _locate(self, x):
        from .plmaps import arc_contains_point

        for ball, m in self.pieces:
            if arc_contains_point(self.domain, ball, x):
                return ball, m
        return None, None

    def _shift_into(self, ball, x):
        if self.domain == INTERVAL:
            return x, 0
        j = math.floor(x - ball[0])
        return x - j, j

    def evaluate(self, x):
        x = frac(x)
        ball, m = self._locate(x)
        if m is None:
            return x
        xw, j = self._shift_into(ball, x)
        return m.evaluate(xw) + j

    def evaluate_inverse(self, y):
        y = frac(y)
        ball, m = self._locate(y)
        if m is None:
            return y
        yw, j = self._shift_into(ball, y)
        return m.evaluate_inverse(yw) + j

    def is_identity(self):
        return all(m.is_identity() for _, m in self.pieces)


def commutator_value(a, b, x):
    """[a, b](x) = a b a^{-1} b^{-1} (x), evaluated exactly."""
    y = b.evaluate_inverse(frac(x))
    y = a.evaluate_inverse(y)
    y = b.evaluate(y)
    return a.evaluate(y)
