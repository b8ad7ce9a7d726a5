"""Finite groups given by Cayley tables, and the function algebra on them.

Elements are integers 0..n-1 with 0 the identity.  The group law is
validated on construction, so a FiniteGroup that exists is a group.
Functions G -> scalar are represented densely; their product is group
convolution in one of two normalizations:

* ``counting``   : (f*g)(x) = sum_y f(x y^-1) g(y); unit = indicator of e.
* ``probability``: (f*g)(x) = (1/|G|) sum_y f(x y^-1) g(y); unit = |G| * indicator of e
  (the Dirac density with respect to the uniform probability measure).
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

COUNTING = "counting"
PROBABILITY = "probability"


class FiniteGroup:
    """A finite group: order, labels, multiplication table, inverses, classes."""

    def __init__(self, name, table, labels=None):
        self.name = str(name)
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        n = self.order
        if n == 0:
            raise ValueError("group must be non-empty")
        if any(len(row) != n for row in self.table):
            raise ValueError("Cayley table must be square")
        if any(not (0 <= x < n) for row in self.table for x in row):
            raise ValueError("Cayley table entries must be element indices")
        if labels is None:
            labels = [str(i) for i in range(n)]
        self.labels = tuple(str(x) for x in labels)
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise ValueError("labels must be distinct and match the order")
        self._validate()
        self.inv_table = self._build_inverses()
        self._classes = None
        self._abelian = None

    def _validate(self):
        n = self.order
        t = self.table
        if any(t[0][a] != a or t[a][0] != a for a in range(n)):
            raise ValueError("element 0 must be the identity")
        for a in range(n):
            if len(set(t[a])) != n or len({t[x][a] for x in range(n)}) != n:
                raise ValueError("Cayley table rows/columns must be permutations")
        for a in range(n):
            for b in range(n):
                tab = t[a][b]
                for c in range(n):
                    if t[tab][c] != t[a][t[b][c]]:
                        raise ValueError("Cayley table is not associative")

    def _build_inverses(self):
        n = self.order
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == 0:
                    inv[a] = b
                    break
            if inv[a] is None or self.table[inv[a]][a] != 0:
                raise ValueError(f"element {a} has no two-sided inverse")
        return tuple(inv)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inv_table[a]

    @property
    def identity(self) -> int:
        return 0

    def elements(self):
        return range(self.order)

    def product(self, elems) -> int:
        out = 0
        for x in elems:
            out = self.table[out][x]
        return out

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            t = self.table
            self._abelian = all(t[a][b] == t[b][a]
                                for a in range(self.order) for b in range(a))
        return self._abelian

    def conjugacy_classes(self):
        """Partition of elements into conjugacy classes, identity class first."""
        if self._classes is None:
            seen = set()
            classes = []
            for a in self.elements():
                if a in seen:
                    continue
                orbit = {self.table[self.table[g][a]][self.inv_table[g]]
                         for g in self.elements()}
                seen |= orbit
                classes.append(tuple(sorted(orbit)))
            self._classes = tuple(classes)
        return self._classes

    def center(self):
        t = self.table
        return tuple(a for a in self.elements()
                     if all(t[a][b] == t[b][a] for b in self.elements()))

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"


def cyclic(n: int) -> FiniteGroup:
    """Z_n with additive notation, element k labelled by its residue."""
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(f"Z{n}", table, labels=[str(k) for k in range(n)])


def symmetric3() -> FiniteGroup:
    """S_3 on {0,1,2}; element 0 is the identity, 1..3 transpositions."""
    perms = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
    index = {p: i for i, p in enumerate(perms)}
    # (p q)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms]
    labels = ["e", "(01)", "(02)", "(12)", "(012)", "(021)"]
    return FiniteGroup("S3", table, labels=labels)


def quaternion8() -> FiniteGroup:
    """Q_8 = {1, -1, i, -i, j, -j, k, -k} in that element order."""
    # encode x as (sign, axis) with axis 0 = scalar, 1 = i, 2 = j, 3 = k
    def decode(a):
        return (1 if a % 2 == 0 else -1), a // 2

    def encode(sign, axis):
        return 2 * axis + (0 if sign == 1 else 1)

    mul_axis = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (2, 0): (1, 2), (3, 0): (1, 3),
        (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
        (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
        (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
    }
    n = 8
    table = []
    for a in range(n):
        sa, xa = decode(a)
        row = []
        for b in range(n):
            sb, xb = decode(b)
            s, x = mul_axis[(xa, xb)]
            row.append(encode(sa * sb * s, x))
        table.append(row)
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return FiniteGroup("Q8", table, labels=labels)


_BUILTIN_CACHE: dict[str, FiniteGroup] = {}


def builtin_group(name: str) -> FiniteGroup:
    """Look up Z2..Z12, S3, Q8 by name (case-insensitive)."""
    key = name.strip().upper()
    if key not in _BUILTIN_CACHE:
        if key.startswith("Z") and key[1:].isdigit():
            n = int(key[1:])
            if not 2 <= n <= 12:
                raise ValueError("built-in cyclic groups cover Z2..Z12")
            _BUILTIN_CACHE[key] = cyclic(n)
        elif key == "S3":
            _BUILTIN_CACHE[key] = symmetric3()
        elif key == "Q8":
            _BUILTIN_CACHE[key] = quaternion8()
        else:
            raise ValueError(f"unknown group {name!r}")
    return _BUILTIN_CACHE[key]


def load_cayley_file(path) -> FiniteGroup:
    """Load a group from a JSON document with fields order/labels/table[/inverses]."""
    with open(path) as fh:
        doc = json.load(fh)
    unknown = set(doc) - {"name", "order", "labels", "table", "inverses"}
    if unknown:
        raise ValueError(f"unknown fields in Cayley table file: {sorted(unknown)}")
    for field in ("order", "labels", "table"):
        if field not in doc:
            raise ValueError(f"Cayley table file is missing field {field!r}")
    order = int(doc["order"])
    table = doc["table"]
    if len(table) != order:
        raise ValueError("table size does not match declared order")
    group = FiniteGroup(doc.get("name", Path(path).stem), table, labels=doc["labels"])
    if "inverses" in doc:
        declared = tuple(int(x) for x in doc["inverses"])
        if declared != group.inv_table:
            raise ValueError("declared inverses are inconsistent with the table")
    return group


def dump_cayley_file(group: FiniteGroup, path) -> None:
    doc = {
        "name": group.name,
        "order": group.order,
        "labels": list(group.labels),
        "table": [list(row) for row in group.table],
        "inverses": list(group.inv_table),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


class GroupFunction:
    """A function G -> scalar; the algebra product is group convolution.

    ``normalization`` decides the convolution unit: COUNTING uses the plain
    sum with unit 1_e, PROBABILITY carries the 1/|G| factor with unit
    |G|·1_e.  Values may be exact (int/Fraction) or float.
    """

    __slots__ = ("group", "values", "normalization")

    def __init__(self, group, values, normalization=PROBABILITY):
        if normalization not in (COUNTING, PROBABILITY):
            raise ValueError(f"unknown normalization {normalization!r}")
        values = tuple(values)
        if len(values) != group.order:
            raise ValueError("value vector length must equal the group order")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "normalization", normalization)

    def __setattr__(self, name, value):
        raise AttributeError("GroupFunction is immutable")

    def __call__(self, g: int):
        return self.values[g]

    def _check_compatible(self, other):
        if self.group != other.group:
            raise ValueError("group mismatch")
        if self.normalization != other.normalization:
            raise ValueError("normalization mismatch")

    def __add__(self, other):
        if not isinstance(other, GroupFunction):
            return NotImplemented
        self._check_compatible(other)
        return GroupFunction(self.group, tuple(a + b for a, b in zip(self.values, other.values)),
                             self.normalization)

    def __sub__(self, other):
        if not isinstance(other, GroupFunction):
            return NotImplemented
        self._check_compatible(other)
        return GroupFunction(self.group, tuple(a - b for a, b in zip(self.values, other.values)),
                             self.normalization)

    def __neg__(self):
        return GroupFunction(self.group, tuple(-a for a in self.values), self.normalization)

    def __mul__(self, other):
        if isinstance(other, GroupFunction):
            self._check_compatible(other)
            return convolve(self, other)
        if isinstance(other, (int, float, Fraction)):
            return GroupFunction(self.group, tuple(a * other for a in self.values),
                                 self.normalization)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, GroupFunction):
            return NotImplemented
        return (self.group == other.group
                and self.normalization == other.normalization
                and self.values == other.values)

    def __hash__(self):
        return hash((self.group, self.values, self.normalization))

    def __bool__(self):
        return any(self.values)

    def mass(self):
        """Total integral against the reference measure of the normalization."""
        total = sum(self.values)
        if self.normalization == PROBABILITY:
            return total / self.group.order if not isinstance(total, (int, Fraction)) \
                else Fraction(total, self.group.order)
        return total

    def max_abs(self):
        return max(abs(v) for v in self.values)

    def allclose(self, other, tol=1e-12) -> bool:
        self._check_compatible(other)
        return all(abs(a - b) <= tol for a, b in zip(self.values, other.values))

    def __repr__(self):
        vals = ", ".join(f"{lbl}:{v}" for lbl, v in zip(self.group.labels, self.values))
        return f"GroupFunction[{self.group.name};{self.normalization}]({vals})"


def convolve(f: GroupFunction, g: GroupFunction) -> GroupFunction:
    """(f*g)(x) = sum_y f(x y^-1) g(y), scaled by 1/|G| in probability mode."""
    f._check_compatible(g)
    grp = f.group
    n = grp.order
    out = []
    for x in grp.elements():
        acc = sum(f.values[grp.table[x][grp.inv_table[y]]] * g.values[y]
                  for y in grp.elements())
        if f.normalization == PROBABILITY:
            acc = acc * Fraction(1, n) if isinstance(acc, (int, Fraction)) else acc / n
        out.append(acc)
    return GroupFunction(grp, tuple(out), f.normalization)


def delta(group: FiniteGroup, g: int = 0, normalization=PROBABILITY) -> GroupFunction:
    """The convolution unit translated to g (indicator, resp. |G|·indicator)."""
    height = 1 if normalization == COUNTING else group.order
    return GroupFunction(group, tuple(height if x == g else 0 for x in group.elements()),
                         normalization)


def haar_uniform(group: FiniteGroup, normalization=PROBABILITY) -> GroupFunction:
    """The uniform density: constant 1 in probability mode, 1/|G| in counting mode."""
    value = Fraction(1, group.order) if normalization == COUNTING else 1
    return GroupFunction(group, (value,) * group.order, normalization)


def is_class_function(f: GroupFunction) -> bool:
    return all(len({f.values[x] for x in cls}) == 1
               for cls in f.group.conjugacy_classes())


def random_group_function(group, rng, normalization=PROBABILITY,
                          numerator=9, denominator=5) -> GroupFunction:
    """Random rational-valued function, for algebra property checks."""
    vals = tuple(Fraction(rng.randint(-numerator, numerator),
                          rng.randint(1, denominator))
                 for _ in group.elements())
    return GroupFunction(group, vals, normalization)
