"""Exact rational square matrices, used as non-commutative series coefficients."""

from __future__ import annotations

from fractions import Fraction


class RationalMatrix:
    """Immutable n x n matrix over Fraction.

    All arithmetic is exact.  Multiplication by a scalar (int/Fraction)
    scales entrywise; multiplication by another matrix is the usual row
    by column product, so the non-commutativity of matrix products is
    visible to everything built on top.
    """

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("matrix must be square and non-empty")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> "RationalMatrix":
        return cls(tuple((0,) * n for _ in range(n)))

    @classmethod
    def unit(cls, n: int, i: int, j: int, value=1) -> "RationalMatrix":
        """Matrix with a single nonzero entry at (i, j)."""
        return cls(tuple(tuple(value if (r, c) == (i, j) else 0 for c in range(n))
                         for r in range(n)))

    @classmethod
    def diagonal(cls, entries) -> "RationalMatrix":
        entries = tuple(entries)
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n))
                         for i in range(n)))

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __bool__(self):
        return any(any(x for x in row) for row in self.rows)

    def __add__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        self._check_shape(other)
        return RationalMatrix(tuple(tuple(a + b for a, b in zip(r1, r2))
                                    for r1, r2 in zip(self.rows, other.rows)))

    def __sub__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        self._check_shape(other)
        return RationalMatrix(tuple(tuple(a - b for a, b in zip(r1, r2))
                                    for r1, r2 in zip(self.rows, other.rows)))

    def __neg__(self):
        return RationalMatrix(tuple(tuple(-a for a in row) for row in self.rows))

    def __mul__(self, other):
        if isinstance(other, RationalMatrix):
            self._check_shape(other)
            cols = tuple(zip(*other.rows))
            return RationalMatrix(tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.rows))
        if isinstance(other, (int, Fraction)):
            return RationalMatrix(tuple(tuple(a * other for a in row) for row in self.rows))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = RationalMatrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _check_shape(self, other):
        if self.n != other.n:
            raise ValueError(f"matrix size mismatch: {self.n} vs {other.n}")

    def inverse(self) -> "RationalMatrix":
        """Exact inverse by Gauss-Jordan elimination; raises on singular input.

        >>> RationalMatrix([[1, 1], [0, 1]]).inverse()
        RationalMatrix([[1, -1], [0, 1]])
        >>> m = RationalMatrix([["1/2", 3], [1, "5/7"]])
        >>> m * m.inverse() == RationalMatrix.identity(2)
        True
        """
        n = self.n
        m = [list(row) for row in self.rows]
        b = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        for i in range(n):
            for k in range(i, n):
                if m[k][i] != 0:
                    break
            else:
                raise ValueError("matrix is singular")
            if k != i:
                m[i], m[k] = m[k], m[i]
                b[i], b[k] = b[k], b[i]
            inv = Fraction(1, 1) / m[i][i]
            m[i] = [x * inv for x in m[i]]
            b[i] = [x * inv for x in b[i]]
            for j in range(n):
                if j == i or m[j][i] == 0:
                    continue
                d = m[j][i]
                m[j] = [x - d * y for x, y in zip(m[j], m[i])]
                b[j] = [x - d * y for x, y in zip(b[j], b[i])]
        return RationalMatrix(tuple(tuple(row) for row in b))

    def max_abs(self) -> Fraction:
        """Largest absolute entry; the norm used by convergence tables."""
        return max((abs(x) for row in self.rows for x in row), default=Fraction(0))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.rows)
        return f"RationalMatrix([{body}])"


if __name__ == "__main__":
    import doctest

    doctest.testmod()
