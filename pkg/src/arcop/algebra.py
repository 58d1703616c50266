"""Finite-dimensional Frobenius algebras and basic brane-labelled Frobenius systems.

Elements are tuples of field scalars in the algebra's chosen basis.  Everything is
validated once at construction; afterwards objects are read-only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .errors import (
    FieldMismatch,
    NotAnAlgebraMap,
    NotAssociative,
    NotUnital,
    OddDegreeBasis,
    PairingDegenerate,
    PairingNotInvariant,
)
from .field import Field, Q, SingularMatrix, inverse, mat_mul, transpose

Vector = tuple


class FrobeniusAlgebra:
    """Unital algebra with a nondegenerate invariant trace pairing.

    ``mul`` is a mapping ``(i, j) -> {k: c}`` of structure constants; missing
    entries are zero.  Derived data (metric, inverse metric, Casimir, Euler
    element) is computed eagerly.
    """

    def __init__(self, name: str, labels: Sequence[str], degrees: Sequence[int],
                 unit: Sequence, trace: Sequence, mul: Mapping, field: Field = Q):
        self.name = name
        self.field = field
        self.labels = tuple(labels)
        self.degrees = tuple(int(d) for d in degrees)
        self.dim = len(self.labels)
        if self.dim == 0 or len(self.degrees) != self.dim:
            raise ValueError("basis must be non-empty with one degree per label")
        if len(set(self.labels)) != self.dim:
            raise ValueError(f"duplicate basis labels in {name}")
        for lab, d in zip(self.labels, self.degrees):
            if d < 0 or (d % 2 and field.name == "Q"):
                raise OddDegreeBasis(f"basis element {lab!r} of {name} has degree {d}", lab)
        f = field
        self.unit = tuple(f(x) for x in unit)
        self.trace_form = tuple(f(x) for x in trace)
        if len(self.unit) != self.dim or len(self.trace_form) != self.dim:
            raise ValueError("unit and trace vectors must have length dim")
        table = [[[f.zero] * self.dim for _ in range(self.dim)] for _ in range(self.dim)]
        for (i, j), out in mul.items():
            for k, c in out.items():
                table[i][j][k] = table[i][j][k] + f(c)
        self._table = tuple(tuple(tuple(v) for v in row) for row in table)
        self._validate()
        self.metric = tuple(tuple(self.pair(self.basis(i), self.basis(j)) for j in range(self.dim))
                            for i in range(self.dim))
        try:
            ginv = inverse(self.metric, f)
        except SingularMatrix:
            raise PairingDegenerate(f"trace pairing of {name} is degenerate") from None
        self.inverse_metric = tuple(tuple(r) for r in ginv)
        self.casimir = tuple((i, j, c) for i in range(self.dim) for j in range(self.dim)
                             if (c := self.inverse_metric[i][j]))
        self.euler = self._sum(self.scale(c, self.mul(self.basis(i), self.basis(j)))
                               for i, j, c in self.casimir)
        try:
            self.unit_index = next(i for i in range(self.dim) if self.unit == self.basis(i))
        except StopIteration:
            self.unit_index = None

    # --- element arithmetic -------------------------------------------------
    def basis(self, i: int) -> Vector:
        f = self.field
        return tuple(f.one if k == i else f.zero for k in range(self.dim))

    @property
    def zero(self) -> Vector:
        return (self.field.zero,) * self.dim

    def element(self, coeffs) -> Vector:
        if isinstance(coeffs, Mapping):
            idx = {lab: i for i, lab in enumerate(self.labels)}
            v = [self.field.zero] * self.dim
            for lab, c in coeffs.items():
                v[idx[lab]] = self.field(c)
            return tuple(v)
        return tuple(self.field(c) for c in coeffs)

    def add(self, a: Vector, b: Vector) -> Vector:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Vector, b: Vector) -> Vector:
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, c, a: Vector) -> Vector:
        return tuple(c * x for x in a)

    def _sum(self, vectors) -> Vector:
        acc = self.zero
        for v in vectors:
            acc = self.add(acc, v)
        return acc

    def mul(self, a: Vector, b: Vector) -> Vector:
        acc = [self.field.zero] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            row = self._table[i]
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for k, c in enumerate(row[j]):
                    if c:
                        acc[k] = acc[k] + xy * c
        return tuple(acc)

    def prod(self, factors) -> Vector:
        acc = self.unit
        for a in factors:
            acc = self.mul(acc, a)
        return acc

    def trace(self, a: Vector):
        acc = self.field.zero
        for x, t in zip(a, self.trace_form):
            if x and t:
                acc = acc + x * t
        return acc

    def pair(self, a: Vector, b: Vector):
        return self.trace(self.mul(a, b))

    def power(self, a: Vector, n: int) -> Vector:
        acc = self.unit
        for _ in range(n):
            acc = self.mul(acc, a)
        return acc

    def structure_constant(self, i: int, j: int, k: int):
        return self._table[i][j][k]

    def is_commutative(self) -> bool:
        return all(self._table[i][j] == self._table[j][i]
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    def format(self, a: Vector) -> str:
        terms = []
        for lab, c in zip(self.labels, a):
            if not c:
                continue
            s = self.field.format(c)
            terms.append(lab if s in ("1", 1) else f"{s}*{lab}")
        return " + ".join(terms) if terms else "0"

    # --- validation --------------------------------------------------------
    def _validate(self):
        n, B = self.dim, self.basis
        for i in range(n):
            b = B(i)
            if self.mul(self.unit, b) != b or self.mul(b, self.unit) != b:
                raise NotUnital(f"unit of {self.name} fails on basis element {self.labels[i]!r}",
                                self.labels[i])
        for i, j, k in itertools.product(range(n), repeat=3):
            lhs = self.mul(self.mul(B(i), B(j)), B(k))
            rhs = self.mul(B(i), self.mul(B(j), B(k)))
            if lhs != rhs:
                trip = (self.labels[i], self.labels[j], self.labels[k])
                raise NotAssociative(f"{self.name}: (ab)c != a(bc) on {trip}", trip)
        # with <a,b> = int(ab) invariance is associativity; symmetry is trace cyclicity
        for i, j in itertools.combinations(range(n), 2):
            if self.pair(B(i), B(j)) != self.pair(B(j), B(i)):
                pair = (self.labels[i], self.labels[j])
                raise PairingNotInvariant(f"{self.name}: <a,b> != <b,a> on {pair}", pair)

    def __repr__(self):
        return f"FrobeniusAlgebra({self.name!r}, dim={self.dim}, field={self.field.name})"


@dataclass(frozen=True)
class AlgebraMap:
    """Linear map given by ``matrix[k][i]`` = coefficient of target basis k in image of source basis i."""

    source: FrobeniusAlgebra
    target: FrobeniusAlgebra
    matrix: tuple

    def __call__(self, a: Vector) -> Vector:
        f = self.target.field
        out = []
        for row in self.matrix:
            acc = f.zero
            for m, x in zip(row, a):
                if m and x:
                    acc = acc + m * x
            out.append(acc)
        return tuple(out)


def make_algebra_map(source: FrobeniusAlgebra, target: FrobeniusAlgebra, matrix) -> AlgebraMap:
    """Build and validate a unital, multiplicative, degree-preserving map."""
    if source.field != target.field:
        raise FieldMismatch(f"{source.name} is over {source.field.name}, {target.name} over {target.field.name}")
    f = target.field
    m = tuple(tuple(f(x) for x in row) for row in matrix)
    if len(m) != target.dim or any(len(r) != source.dim for r in m):
        raise NotAnAlgebraMap(f"matrix shape must be {target.dim}x{source.dim}")
    r = AlgebraMap(source, target, m)
    for k, i in itertools.product(range(target.dim), range(source.dim)):
        if m[k][i] and target.degrees[k] != source.degrees[i]:
            raise NotAnAlgebraMap(f"map {source.name}->{target.name} does not preserve degree at "
                                  f"{source.labels[i]!r}", source.labels[i])
    if r(source.unit) != target.unit:
        raise NotAnAlgebraMap(f"map {source.name}->{target.name} does not preserve the unit")
    for i, j in itertools.product(range(source.dim), repeat=2):
        a, b = source.basis(i), source.basis(j)
        if r(source.mul(a, b)) != target.mul(r(a), r(b)):
            pair = (source.labels[i], source.labels[j])
            raise NotAnAlgebraMap(f"map {source.name}->{target.name} is not multiplicative on {pair}", pair)
    return r


@dataclass(frozen=True)
class LinearMap:
    source: FrobeniusAlgebra
    target: FrobeniusAlgebra
    matrix: tuple

    __call__ = AlgebraMap.__call__


def adjoint(r: AlgebraMap) -> LinearMap:
    """The pairing transpose r^dagger: target -> source, int_s r^dag(b) a = int_t b r(a).

    Solved densely: r^dag = G_s^{-1} R^T G_t.
    """
    s, t = r.source, r.target
    if s.field != t.field:
        raise FieldMismatch("adjoint needs both algebras over the same field")
    m = mat_mul(mat_mul(s.inverse_metric, transpose(r.matrix), s.field), t.metric, s.field)
    return LinearMap(t, s, tuple(tuple(row) for row in m))


def adjoint_defect(r: AlgebraMap, rdag: LinearMap) -> list:
    """Basis pairs (a, b) where the defining identity of the adjoint fails."""
    s, t = r.source, r.target
    bad = []
    for i in range(s.dim):
        a = s.basis(i)
        for k in range(t.dim):
            b = t.basis(k)
            if s.pair(rdag(b), a) != t.pair(b, r(a)):
                bad.append((s.labels[i], t.labels[k]))
    return bad


@dataclass
class ConditionReport:
    commutative_C: bool
    euler_E: bool
    euler_violations: list = dc_field(default_factory=list)
    self_intersection_I1: bool = True
    I1_violations: list = dc_field(default_factory=list)
    self_intersection_I2: bool = True
    I2_violations: list = dc_field(default_factory=list)
    projection_formula: bool = True

    def as_dict(self) -> dict:
        return {"C": self.commutative_C, "E": self.euler_E, "I1": self.self_intersection_I1,
                "I2": self.self_intersection_I2, "projection_formula": self.projection_formula,
                "E_violations": self.euler_violations, "I1_violations": self.I1_violations,
                "I2_violations": self.I2_violations}


class BraneSystem:
    """Basic B-Frobenius system: a closed algebra and one algebra per brane label.

    Multi-label algebras A_S with |S| >= 2 are zero and never materialised.
    """

    def __init__(self, closed: FrobeniusAlgebra, branes: Mapping[str, FrobeniusAlgebra],
                 restrictions: Mapping[str, AlgebraMap]):
        self.closed = closed
        self.field = closed.field
        self.branes = dict(sorted(branes.items()))
        if set(self.branes) != set(restrictions):
            raise ValueError("every brane label needs exactly one restriction map")
        for b, alg in self.branes.items():
            if alg.field != self.field:
                raise FieldMismatch(f"brane {b!r} algebra is over {alg.field.name}, closed over {self.field.name}")
            r = restrictions[b]
            if r.source is not closed or r.target is not alg:
                raise ValueError(f"restriction for {b!r} must map the closed algebra to A_{b}")
        self.restrictions = {b: restrictions[b] for b in self.branes}
        self.adjoints = {b: adjoint(r) for b, r in self.restrictions.items()}
        self.e_perp = {b: self.restrictions[b](self.adjoints[b](alg.unit)) for b, alg in self.branes.items()}
        # r^dag(e_b): the factor contributed by a puncture labelled b
        self.puncture_factor = {b: self.adjoints[b](alg.euler) for b, alg in self.branes.items()}

    @property
    def labels(self) -> tuple:
        return tuple(self.branes)

    def algebra(self, label: frozenset | str | None) -> FrobeniusAlgebra | None:
        """A_S for a label set; None stands for the zero algebra (|S| >= 2)."""
        if label is None:
            return self.closed
        if isinstance(label, str):
            return self.branes[label]
        if len(label) == 0:
            return self.closed
        if len(label) == 1:
            return self.branes[next(iter(label))]
        return None

    def puncture_weight(self, label: frozenset):
        """Element of A_empty inserted for a puncture; zero vector for multi-label punctures."""
        A = self.closed
        if len(label) == 0:
            return A.euler
        if len(label) == 1:
            return self.puncture_factor[next(iter(label))]
        return A.zero


def projection_formula_check(sys: BraneSystem, adjoints: Mapping | None = None) -> bool:
    """r^dag(r(a) b) == a r^dag(b) on all basis pairs; ``adjoints`` overrides the stored ones."""
    A = sys.closed
    adj = adjoints or sys.adjoints
    for b, Ab in sys.branes.items():
        r, rd = sys.restrictions[b], adj[b]
        for i in range(A.dim):
            a = A.basis(i)
            for k in range(Ab.dim):
                y = Ab.basis(k)
                if rd(Ab.mul(r(a), y)) != A.mul(a, rd(y)):
                    return False
    return True


def euler_condition_sides(sys: BraneSystem, b: str, i: int, k: int):
    """Both sides of condition (E) for basis elements a1 = Delta_i, a2 = Delta_k of A_b."""
    A, Ab = sys.closed, sys.branes[b]
    rd = sys.adjoints[b]
    a1, a2 = Ab.basis(i), Ab.basis(k)
    lhs = A.zero
    for p, q, c in Ab.casimir:
        term = A.mul(rd(Ab.mul(a1, Ab.basis(p))), rd(Ab.mul(Ab.basis(q), a2)))
        lhs = A.add(lhs, A.scale(c, term))
    rhs = A.mul(A.euler, rd(Ab.mul(a1, a2)))
    return lhs, rhs


class ImplicationViolated(AssertionError):
    """(I1) and (I2) hold but (E) fails; impossible for a correct implementation."""


def check_conditions(sys: BraneSystem) -> ConditionReport:
    A = sys.closed
    rep = ConditionReport(commutative_C=A.is_commutative(), euler_E=True)
    for b, Ab in sys.branes.items():
        r, rd, ep = sys.restrictions[b], sys.adjoints[b], sys.e_perp[b]
        for i, k in itertools.product(range(Ab.dim), repeat=2):
            lhs, rhs = euler_condition_sides(sys, b, i, k)
            if lhs != rhs:
                rep.euler_violations.append((b, Ab.labels[i], Ab.labels[k]))
        for i in range(Ab.dim):
            a = Ab.basis(i)
            if r(rd(a)) != Ab.mul(a, ep):
                rep.I1_violations.append((b, Ab.labels[i]))
        if Ab.mul(Ab.euler, ep) != r(A.euler):
            rep.I2_violations.append((b,))
    rep.euler_E = not rep.euler_violations
    rep.self_intersection_I1 = not rep.I1_violations
    rep.self_intersection_I2 = not rep.I2_violations
    rep.projection_formula = projection_formula_check(sys)
    if rep.self_intersection_I1 and rep.self_intersection_I2 and not rep.euler_E:
        raise ImplicationViolated(f"(I) holds but (E) fails: {rep.euler_violations}")
    return rep
