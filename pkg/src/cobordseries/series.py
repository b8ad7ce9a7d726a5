"""Truncated formal series over a graded groupoid.

A series stores finitely many coefficients indexed by groupoid elements of
grade <= N; multiplication is graded convolution (grades above N are
dropped silently, mixing different N values is an error).  The coefficient
algebra is anything with +, -, * (including scalar int/Fraction on the
right) and a truthiness test for zero: Fraction scalars, RationalMatrix,
GroupFunction, and the time polynomials of the product-integral module all
qualify.

Because coefficients of positive grade are nilpotent at truncation N, the
exponential and logarithm are finite sums and are exact mutual inverses
over exact coefficient arithmetic.
"""

from __future__ import annotations

from fractions import Fraction


class FormalSeries:
    """Finitely supported map {groupoid element -> coefficient}, grade <= order."""

    __slots__ = ("groupoid", "order", "unit", "coeffs")

    def __init__(self, groupoid, order, coeffs=None, unit=Fraction(1)):
        self.groupoid = groupoid
        self.order = int(order)
        if self.order < 0:
            raise ValueError("truncation order must be >= 0")
        self.unit = unit
        clean = {}
        for elem, value in (coeffs or {}).items():
            if elem not in groupoid:
                raise ValueError(f"{elem!r} is not in {groupoid.name}")
            if groupoid.ord(elem) > self.order:
                raise ValueError(f"{elem!r} exceeds truncation order {self.order}")
            if value:
                clean[elem] = value
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, groupoid, order, unit=Fraction(1)):
        return cls(groupoid, order, {}, unit)

    @classmethod
    def one(cls, groupoid, order, unit=Fraction(1)):
        return cls(groupoid, order, {groupoid.neutral: unit}, unit)

    @classmethod
    def monomial(cls, groupoid, order, elem, value, unit=Fraction(1)):
        return cls(groupoid, order, {elem: value}, unit)

    # -- basics ------------------------------------------------------------

    @property
    def zero_coeff(self):
        return self.unit * 0

    def coefficient(self, elem):
        if elem not in self.groupoid:
            raise ValueError(f"{elem!r} is not in {self.groupoid.name}")
        return self.coeffs.get(elem, self.zero_coeff)

    def support(self):
        return set(self.coeffs)

    @property
    def e_coefficient(self):
        return self.coefficient(self.groupoid.neutral)

    def is_unital(self) -> bool:
        return self.e_coefficient == self.unit

    def has_zero_e_part(self) -> bool:
        return self.groupoid.neutral not in self.coeffs

    def _check_compatible(self, other):
        if self.groupoid != other.groupoid:
            raise ValueError("series live over different groupoids")
        if self.order != other.order:
            raise ValueError(f"truncation mismatch: {self.order} vs {other.order}")
        if not self.unit == other.unit:
            raise ValueError("coefficient algebras differ")

    # -- linear structure ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self.coeffs)
        for elem, value in other.coeffs.items():
            out[elem] = out[elem] + value if elem in out else value
        return FormalSeries(self.groupoid, self.order, out, self.unit)

    def __sub__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return FormalSeries(self.groupoid, self.order,
                            {e: -v for e, v in self.coeffs.items()}, self.unit)

    def scale(self, scalar):
        return FormalSeries(self.groupoid, self.order,
                            {e: v * scalar for e, v in self.coeffs.items()}, self.unit)

    # -- graded convolution --------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, FormalSeries):
            self._check_compatible(other)
            gpd = self.groupoid
            out = {}
            for i, a in self.coeffs.items():
                for j, b in other.coeffs.items():
                    k = gpd.compose(i, j)
                    if k is None or gpd.ord(k) > self.order:
                        continue
                    term = a * b
                    out[k] = out[k] + term if k in out else term
            return FormalSeries(gpd, self.order, out, self.unit)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = FormalSeries.one(self.groupoid, self.order, self.unit)
        for _ in range(k):
            out = out * self
        return out

    # -- group structure on 1 + positive-grade part ---------------------------

    def inverse(self) -> "FormalSeries":
        """Multiplicative inverse of a unital series, by the geometric sum."""
        if not self.is_unital():
            raise ValueError("inverse requires leading coefficient equal to the unit")
        a = self - FormalSeries.one(self.groupoid, self.order, self.unit)
        one = FormalSeries.one(self.groupoid, self.order, self.unit)
        # Horner form of 1 - a + a^2 - ... (nilpotency truncates at the order)
        out = one
        for _ in range(self.order):
            out = one - a * out
        return out

    def exp(self) -> "FormalSeries":
        """exp of a series with zero neutral part: finite sum of a^k / k!."""
        if not self.has_zero_e_part():
            raise ValueError("exp requires a zero coefficient at the neutral element")
        result = FormalSeries.one(self.groupoid, self.order, self.unit)
        term = result
        for k in range(1, self.order + 1):
            term = (term * self).scale(Fraction(1, k))
            result = result + term
        return result

    def log(self) -> "FormalSeries":
        """log of a unital series: finite alternating sum of a^k / k."""
        if not self.is_unital():
            raise ValueError("log requires leading coefficient equal to the unit")
        a = self - FormalSeries.one(self.groupoid, self.order, self.unit)
        result = FormalSeries.zero(self.groupoid, self.order, self.unit)
        power = FormalSeries.one(self.groupoid, self.order, self.unit)
        for k in range(1, self.order + 1):
            power = power * a
            result = result + power.scale(Fraction((-1) ** (k + 1), k))
        return result

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return (self.groupoid == other.groupoid and self.order == other.order
                and self.unit == other.unit and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.groupoid, self.order, frozenset(self.coeffs.items())))

    def __repr__(self):
        gpd = self.groupoid
        if not self.coeffs:
            return f"FormalSeries<{gpd.name}, N={self.order}>(0)"
        parts = [f"{gpd.element_id(e)}: {v!r}"
                 for e, v in sorted(self.coeffs.items(),
                                    key=lambda kv: (gpd.ord(kv[0]), gpd.element_id(kv[0])))]
        return f"FormalSeries<{gpd.name}, N={self.order}>({', '.join(parts)})"

    # -- serialization ---------------------------------------------------------

    def to_payload(self) -> dict:
        """JSON-ready mapping element-id -> coefficient payload."""
        return {self.groupoid.element_id(e): coeff_to_payload(v)
                for e, v in self.coeffs.items()}

    @classmethod
    def from_payload(cls, groupoid, order, payload: dict, unit=Fraction(1)):
        coeffs = {groupoid.parse_element(key): coeff_from_payload(value)
                  for key, value in payload.items()}
        return cls(groupoid, order, coeffs, unit)


def coeff_to_payload(value):
    from .matrices import RationalMatrix

    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    if isinstance(value, RationalMatrix):
        return [[str(x) for x in row] for row in value.rows]
    raise ValueError(f"cannot serialize coefficient of type {type(value).__name__}")


def coeff_from_payload(payload):
    from .matrices import RationalMatrix

    if isinstance(payload, str):
        return Fraction(payload)
    if isinstance(payload, list):
        return RationalMatrix([[Fraction(x) for x in row] for row in payload])
    raise ValueError(f"cannot parse coefficient payload {payload!r}")


class SemidirectElement:
    """Pair (g, a): an invertible matrix acting on a zero-neutral-part series.

    The pair stands for the product g·(1 + a) with the matrix group acting
    on coefficients by conjugation, so the group law is

        (g, a) · (g', a') = (g g', b)   with  1 + b = (1 + g'^-1 a g')(1 + a').
    """

    __slots__ = ("g", "a")

    def __init__(self, g, a: FormalSeries):
        if not a.has_zero_e_part():
            raise ValueError("series part must have zero coefficient at the neutral element")
        g.inverse()  # raises on singular g
        self.g = g
        self.a = a

    @classmethod
    def identity(cls, n, groupoid, order):
        from .matrices import RationalMatrix

        unit = RationalMatrix.identity(n)
        return cls(RationalMatrix.identity(n),
                   FormalSeries.zero(groupoid, order, unit))

    @staticmethod
    def _conjugate(series: FormalSeries, h) -> FormalSeries:
        h_inv = h.inverse()
        return FormalSeries(series.groupoid, series.order,
                            {e: h * v * h_inv for e, v in series.coeffs.items()},
                            series.unit)

    def __mul__(self, other):
        if not isinstance(other, SemidirectElement):
            return NotImplemented
        self.a._check_compatible(other.a)
        twisted = self._conjugate(self.a, other.g.inverse())
        b = twisted + other.a + twisted * other.a
        return SemidirectElement(self.g * other.g, b)

    def inverse(self) -> "SemidirectElement":
        twisted = self._conjugate(self.a, self.g)
        one = FormalSeries.one(self.a.groupoid, self.a.order, self.a.unit)
        b = (one + twisted).inverse() - one
        return SemidirectElement(self.g.inverse(), b)

    def __eq__(self, other):
        if not isinstance(other, SemidirectElement):
            return NotImplemented
        return self.g == other.g and self.a == other.a

    def __repr__(self):
        return f"SemidirectElement(g={self.g!r}, a={self.a!r})"


def semidirect_mul(x: SemidirectElement, y: SemidirectElement) -> SemidirectElement:
    return x * y


def semidirect_inverse(x: SemidirectElement) -> SemidirectElement:
    return x.inverse()
