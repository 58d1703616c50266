"""Exact scalars over Q (``fractions.Fraction``) or F2, plus small dense linear algebra."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class GF2:
    """Residue modulo 2.  Immutable, hashable, compares equal to ints of the same parity."""

    __slots__ = ("v",)

    def __init__(self, v=0):
        if isinstance(v, GF2):
            v = v.v
        elif isinstance(v, Fraction):
            if v.denominator % 2 == 0:
                raise ZeroDivisionError(f"{v} has no residue mod 2")
            v = v.numerator
        object.__setattr__(self, "v", int(v) % 2)

    def __setattr__(self, name, value):
        raise AttributeError("GF2 is immutable")

    def _coerce(self, other):
        if isinstance(other, GF2):
            return other
        if isinstance(other, (int, Fraction)):
            return GF2(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GF2(self.v ^ other.v)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GF2(self.v & other.v)

    __rmul__ = __mul__

    def __neg__(self):
        return self

    def __pow__(self, n: int):
        if n == 0:
            return GF2(1)
        if n < 0 and not self.v:
            raise ZeroDivisionError("0 has no inverse in F2")
        return self

    def __truediv__(self, other):
        other = self._coerce(other)
        if not other.v:
            raise ZeroDivisionError("division by zero in F2")
        return self

    def __bool__(self):
        return bool(self.v)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.v == other.v

    def __hash__(self):
        return hash(("GF2", self.v))

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"GF2({self.v})"

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class Field:
    name: str  # "Q" or "F2"

    def __post_init__(self):
        if self.name not in ("Q", "F2"):
            raise ValueError(f"unknown field {self.name!r}; expected 'Q' or 'F2'")

    @property
    def zero(self):
        return Fraction(0) if self.name == "Q" else GF2(0)

    @property
    def one(self):
        return Fraction(1) if self.name == "Q" else GF2(1)

    def __call__(self, x):
        """Coerce an int, Fraction, GF2 or ``"p/q"`` string into this field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.name == "Q":
            if isinstance(x, GF2):
                raise TypeError("cannot lift an F2 residue to Q")
            return Fraction(x)
        return GF2(x)

    def format(self, x) -> str | int:
        if self.name == "F2":
            return int(GF2(x))
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


Q = Field("Q")
F2 = Field("F2")


def field_of(name: str) -> Field:
    return Q if name == "Q" else F2 if name == "F2" else Field(name)


class SingularMatrix(ArithmeticError):
    pass


def identity(n: int, field: Field):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def mat_mul(a, b, field: Field):
    m = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [field.zero] * m
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(m):
                    if bk[j]:
                        acc[j] = acc[j] + x * bk[j]
        out.append(acc)
    return out


def transpose(a):
    return [list(col) for col in zip(*a)]


def inverse(a: Sequence[Sequence], field: Field):
    """Gauss-Jordan inverse; raises ``SingularMatrix`` when ``a`` is not invertible."""
    n = len(a)
    aug = [list(map(field, row)) + identity(n, field)[i] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise SingularMatrix(f"matrix is singular over {field.name}")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = field.one / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def rank(a: Sequence[Sequence], field: Field) -> int:
    rows = [list(map(field, r)) for r in a]
    if not rows:
        return 0
    r, ncols = 0, len(rows[0])
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col] / rows[r][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r
