"""Graded index groupoids: partial composition, additive grade, unique neutral.

Three concrete instances are provided:

* ``NatMonoid``        — natural numbers under addition (elements are ints,
                         neutral is 0).
* ``IntervalGroupoid`` — integer intervals [a', b'] inside a window, composed
                         by endpoint matching: compose(i, j) glues j (earlier)
                         to i (later) when the initial point of i equals the
                         final point of j.
* ``BoxGroupoid``      — axis-aligned integer boxes inside a window, composed
                         by stacking along a designated axis when the shared
                         full face matches exactly.

Every instance satisfies: grade 0 only at the neutral element, grade
additivity, associativity (if either nested composite is defined, both are
and they agree), absence of inverses, and finitely many decompositions of
each element.
"""

from __future__ import annotations

from itertools import product as iter_product


class _Neutral:
    """Shared neutral element for the interval and box groupoids."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "e"


NEUTRAL = _Neutral()


class GradedGroupoid:
    """Base interface; instances are immutable and safe to share."""

    name = "groupoid"

    @property
    def neutral(self):
        raise NotImplementedError

    def __contains__(self, element) -> bool:
        raise NotImplementedError

    def ord(self, element) -> int:
        """Grade of an element; raises ValueError on elements outside the groupoid."""
        raise NotImplementedError

    def compose(self, i, j):
        """i after j; returns the composite or None when undefined."""
        raise NotImplementedError

    def elements_up_to(self, max_grade: int):
        """All elements of grade <= max_grade, neutral first, grade-sorted."""
        raise NotImplementedError

    def decompositions(self, k):
        """All ordered pairs (i, j) with compose(i, j) == k, including the
        trivial ones (neutral, k) and (k, neutral)."""
        raise NotImplementedError

    def element_id(self, element) -> str:
        """Stable string id used in serialized series."""
        raise NotImplementedError

    def parse_element(self, text: str):
        raise NotImplementedError

    def _require(self, element):
        if element not in self:
            raise ValueError(f"{element!r} is not an element of {self.name}")


class NatMonoid(GradedGroupoid):
    """(N, +) with grade the number itself; composition is total."""

    name = "nat"

    def __init__(self, max_grade: int | None = None):
        # max_grade only bounds enumeration; composition itself is unbounded.
        self.max_grade = max_grade

    @property
    def neutral(self):
        return 0

    def __contains__(self, element):
        return isinstance(element, int) and element >= 0

    def ord(self, element):
        self._require(element)
        return element

    def compose(self, i, j):
        self._require(i)
        self._require(j)
        return i + j

    def elements_up_to(self, max_grade):
        return list(range(max_grade + 1))

    def decompositions(self, k):
        self._require(k)
        return [(i, k - i) for i in range(k + 1)]

    def element_id(self, element):
        return f"n:{element}"

    def parse_element(self, text):
        if not text.startswith("n:"):
            raise ValueError(f"bad nat element id {text!r}")
        return int(text[2:])

    def __eq__(self, other):
        return isinstance(other, NatMonoid)

    def __hash__(self):
        return hash("nat")

    def __repr__(self):
        return "NatMonoid()"


class IntervalGroupoid(GradedGroupoid):
    """Integer intervals (a', b') with a <= a' < b' <= b inside window (a, b).

    An interval runs from its initial point a' to its final point b'; the
    grade is the length b' - a'.  compose(i, j) is defined when the initial
    point of i equals the final point of j (j happens first).
    """

    def __init__(self, a: int, b: int):
        if not (isinstance(a, int) and isinstance(b, int) and a < b):
            raise ValueError("interval window must satisfy a < b")
        self.window = (a, b)
        self.name = f"interval:{a}..{b}"

    @property
    def neutral(self):
        return NEUTRAL

    def __contains__(self, element):
        if element is NEUTRAL:
            return True
        if not (isinstance(element, tuple) and len(element) == 2):
            return False
        a, b = self.window
        lo, hi = element
        return isinstance(lo, int) and isinstance(hi, int) and a <= lo < hi <= b

    def ord(self, element):
        self._require(element)
        if element is NEUTRAL:
            return 0
        return element[1] - element[0]

    def compose(self, i, j):
        self._require(i)
        self._require(j)
        if i is NEUTRAL:
            return j
        if j is NEUTRAL:
            return i
        if i[0] != j[1]:
            return None
        return (j[0], i[1])

    def elements_up_to(self, max_grade):
        a, b = self.window
        out = [NEUTRAL]
        for lo in range(a, b):
            for hi in range(lo + 1, min(b, lo + max_grade) + 1):
                out.append((lo, hi))
        out.sort(key=lambda x: (self.ord(x), (0, 0) if x is NEUTRAL else x))
        return out

    def decompositions(self, k):
        self._require(k)
        if k is NEUTRAL:
            return [(NEUTRAL, NEUTRAL)]
        lo, hi = k
        out = [(NEUTRAL, k), (k, NEUTRAL)]
        out.extend(((cut, hi), (lo, cut)) for cut in range(lo + 1, hi))
        return out

    def element_id(self, element):
        if element is NEUTRAL:
            return "e"
        return f"i:{element[0]}..{element[1]}"

    def parse_element(self, text):
        if text == "e":
            return NEUTRAL
        if not text.startswith("i:") or ".." not in text:
            raise ValueError(f"bad interval element id {text!r}")
        lo, hi = text[2:].split("..")
        return (int(lo), int(hi))

    def __eq__(self, other):
        return isinstance(other, IntervalGroupoid) and self.window == other.window

    def __hash__(self):
        return hash(("interval", self.window))

    def __repr__(self):
        return f"IntervalGroupoid{self.window}"


class BoxGroupoid(GradedGroupoid):
    """Axis-aligned integer boxes in a window, graded by cell-count volume.

    A box is a tuple of per-axis (lo, hi) pairs with lo < hi.  Composition
    stacks along ``axis``: compose(i, j) is defined when the lower face of i
    along that axis equals the upper face of j exactly (all other axes have
    identical extents), the face-matching form of the cut-into-two-pieces
    condition.  Restricting the gluing to one designated axis is what keeps
    the partial composition associative in the strong sense.
    """

    def __init__(self, window, axis: int = 0):
        window = tuple((int(lo), int(hi)) for lo, hi in window)
        if not window or any(lo >= hi for lo, hi in window):
            raise ValueError("box window must be non-empty in every axis")
        if not 0 <= axis < len(window):
            raise ValueError("composition axis outside dimension range")
        self.window = window
        self.dim = len(window)
        self.axis = axis
        spans = "x".join(f"{lo}..{hi}" for lo, hi in window)
        self.name = f"box:{self.dim}:{spans}"

    @property
    def neutral(self):
        return NEUTRAL

    def __contains__(self, element):
        if element is NEUTRAL:
            return True
        if not (isinstance(element, tuple) and len(element) == self.dim):
            return False
        for (lo, hi), (wlo, whi) in zip(element, self.window):
            if not (isinstance(lo, int) and isinstance(hi, int)
                    and wlo <= lo < hi <= whi):
                return False
        return True

    def ord(self, element):
        self._require(element)
        if element is NEUTRAL:
            return 0
        vol = 1
        for lo, hi in element:
            vol *= hi - lo
        return vol

    def compose(self, i, j):
        self._require(i)
        self._require(j)
        if i is NEUTRAL:
            return j
        if j is NEUTRAL:
            return i
        t = self.axis
        if j[t][1] != i[t][0]:
            return None
        for a in range(self.dim):
            if a != t and i[a] != j[a]:
                return None
        merged = list(i)
        merged[t] = (j[t][0], i[t][1])
        return tuple(merged)

    def elements_up_to(self, max_grade):
        out = [NEUTRAL]
        ranges = [[(lo2, hi2) for lo2 in range(lo, hi) for hi2 in range(lo2 + 1, hi + 1)]
                  for lo, hi in self.window]
        for combo in iter_product(*ranges):
            if self.ord(combo) <= max_grade:
                out.append(combo)
        out.sort(key=lambda x: (self.ord(x), () if x is NEUTRAL else x))
        return out

    def decompositions(self, k):
        self._require(k)
        if k is NEUTRAL:
            return [(NEUTRAL, NEUTRAL)]
        out = [(NEUTRAL, k), (k, NEUTRAL)]
        t = self.axis
        lo, hi = k[t]
        for cut in range(lo + 1, hi):
            upper = list(k)
            upper[t] = (cut, hi)
            lower = list(k)
            lower[t] = (lo, cut)
            out.append((tuple(upper), tuple(lower)))
        return out

    def element_id(self, element):
        if element is NEUTRAL:
            return "e"
        return "b:" + "x".join(f"{lo}..{hi}" for lo, hi in element)

    def parse_element(self, text):
        if text == "e":
            return NEUTRAL
        if not text.startswith("b:"):
            raise ValueError(f"bad box element id {text!r}")
        spans = text[2:].split("x")
        box = tuple(tuple(int(v) for v in span.split("..")) for span in spans)
        return box

    def __eq__(self, other):
        return (isinstance(other, BoxGroupoid)
                and self.window == other.window and self.axis == other.axis)

    def __hash__(self):
        return hash(("box", self.window, self.axis))

    def __repr__(self):
        return f"BoxGroupoid({self.window}, axis={self.axis})"


def make_nat_monoid() -> NatMonoid:
    return NatMonoid()


def make_interval_groupoid(a: int, b: int) -> IntervalGroupoid:
    return IntervalGroupoid(a, b)


def make_box_groupoid(dim: int, window, axis: int = 0) -> BoxGroupoid:
    window = tuple(window)
    if len(window) != dim:
        raise ValueError("window must provide one span per axis")
    return BoxGroupoid(window, axis=axis)


def from_spec(text: str) -> GradedGroupoid:
    """Parse 'nat', 'interval:a..b', or 'box:d:a..bxc..d,...' (axes comma- or x-separated)."""
    text = text.strip()
    if text == "nat":
        return NatMonoid()
    if text.startswith("interval:"):
        span = text[len("interval:"):]
        a, b = span.split("..")
        return IntervalGroupoid(int(a), int(b))
    if text.startswith("box:"):
        rest = text[len("box:"):]
        dim_str, _, spans = rest.partition(":")
        dim = int(dim_str)
        parts = spans.replace(",", "x").split("x")
        window = tuple(tuple(int(v) for v in part.split("..")) for part in parts)
        return make_box_groupoid(dim, window)
    raise ValueError(f"unknown groupoid spec {text!r}")


def axiom_violations(groupoid: GradedGroupoid, max_grade: int) -> list[str]:
    """Exhaustively check the groupoid laws up to a grade bound.

    Returns human-readable violation strings (empty means all laws hold):
    neutral laws, grade additivity, strong associativity, absence of
    inverses, and correctness/exhaustiveness of decompositions.
    """
    bad = []
    e = groupoid.neutral
    elems = groupoid.elements_up_to(max_grade)
    if groupoid.ord(e) != 0:
        bad.append("neutral element has nonzero grade")
    for i in elems:
        if groupoid.ord(i) == 0 and i != e and i is not e:
            bad.append(f"grade-0 element {i!r} differs from the neutral element")
        if groupoid.compose(e, i) != i or groupoid.compose(i, e) != i:
            bad.append(f"neutral law fails at {i!r}")
    for i in elems:
        for j in elems:
            k = groupoid.compose(i, j)
            if k is None:
                continue
            if groupoid.ord(k) != groupoid.ord(i) + groupoid.ord(j):
                bad.append(f"grade not additive on ({i!r}, {j!r})")
            if k == e and not (i == e and j == e):
                bad.append(f"unexpected inverse pair ({i!r}, {j!r})")
    for i in elems:
        for j in elems:
            ij = groupoid.compose(i, j)
            for k in elems:
                jk = groupoid.compose(j, k)
                left = groupoid.compose(ij, k) if ij is not None else None
                right = groupoid.compose(i, jk) if jk is not None else None
                if (left is None) != (right is None) or left != right:
                    bad.append(f"associativity fails on ({i!r}, {j!r}, {k!r})")
    for k in elems:
        decs = groupoid.decompositions(k)
        if len(set(map(_dec_key, decs))) != len(decs):
            bad.append(f"duplicate decompositions of {k!r}")
        for (i, j) in decs:
            if groupoid.compose(i, j) != k:
                bad.append(f"decomposition ({i!r}, {j!r}) of {k!r} does not compose back")
        found = {_dec_key((i, j)) for i in elems for j in elems
                 if groupoid.compose(i, j) == k}
        if found != set(map(_dec_key, decs)):
            bad.append(f"decompositions of {k!r} are not exhaustive within the window")
    return bad


def _dec_key(pair):
    return (repr(pair[0]), repr(pair[1]))
