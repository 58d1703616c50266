"""Double-sided bar complexes B_n(A_S, A, A_T), the reduced cyclic bar complex of the
closed sector, their (co)differentials, degeneracies, pairings and Casimir
composition of correlators.

A basis tuple of B_n(S, T) is ``(b_S, a_1, ..., a_n, b_T)`` and of the closed
complex ``(a_0, a_1, ..., a_n)``; entries are basis indices of the factor algebras.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .algebra import BraneSystem
from .errors import DegreeMismatch, NotReduced, SlotError


@dataclass(frozen=True, order=True)
class WindowLabel:
    kind: str  # "open" | "closed"
    left: frozenset = frozenset()
    right: frozenset = frozenset()

    @staticmethod
    def closed() -> "WindowLabel":
        return WindowLabel("closed")

    @staticmethod
    def open(left, right) -> "WindowLabel":
        return WindowLabel("open", _labelset(left), _labelset(right))

    @property
    def is_closed(self) -> bool:
        return self.kind == "closed"

    def bar(self) -> "WindowLabel":
        return self if self.is_closed else WindowLabel("open", self.right, self.left)

    def __str__(self):
        if self.is_closed:
            return "closed"
        return f"({_fmt_set(self.left)},{_fmt_set(self.right)})"


def _labelset(x) -> frozenset:
    if isinstance(x, str):
        return frozenset([x]) if x else frozenset()
    return frozenset(x)


def _fmt_set(s: frozenset) -> str:
    return "+".join(sorted(s)) if s else "0"


def factor_algebras(system: BraneSystem, label: WindowLabel, n: int) -> tuple | None:
    """Tensor factors of B_n(label), or None if an end algebra is the zero algebra."""
    A = system.closed
    if label.is_closed:
        return (A,) * (n + 1)
    AS, AT = system.algebra(label.left), system.algebra(label.right)
    if AS is None or AT is None:
        return None
    return (AS,) + (A,) * n + (AT,)


def restriction_for(system: BraneSystem, s: frozenset):
    """r_S: A -> A_S; the identity for the empty label."""
    if not s:
        return lambda a: a
    return system.restrictions[next(iter(s))]


def basis_tuples(system: BraneSystem, label: WindowLabel, n: int, reduced: bool = False):
    facs = factor_algebras(system, label, n)
    if facs is None:
        return []
    ranges = [range(a.dim) for a in facs]
    if reduced and label.is_closed:
        u = system.closed.unit_index
        ranges = [ranges[0]] + [[i for i in r if i != u] for r in ranges[1:]]
    return list(itertools.product(*ranges))


class BarElement:
    """Homogeneous element of B_n(label): a finite map from basis tuples to scalars."""

    __slots__ = ("system", "label", "n", "terms", "reduced")

    def __init__(self, system: BraneSystem, label: WindowLabel, n: int,
                 terms: Mapping | Iterable = (), reduced: bool | None = None):
        self.system = system
        self.label = label
        self.n = n
        self.reduced = label.is_closed if reduced is None else reduced
        f = system.field
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        expected = n + 1 if label.is_closed else n + 2
        facs = factor_algebras(system, label, n)
        for key, c in items:
            key = tuple(key)
            if len(key) != expected:
                raise DegreeMismatch(f"tuple {key} has length {len(key)}, expected {expected} for n={n}")
            if facs is None:
                continue
            c = f(c) if not isinstance(c, type(f.zero)) else c
            if not c:
                continue
            acc[key] = acc.get(key, f.zero) + c
        self.terms = {k: v for k, v in acc.items() if v}
        if self.reduced and label.is_closed:
            u = system.closed.unit_index
            for key in self.terms:
                if u in key[1:]:
                    raise NotReduced(f"closed element term {key} has a unit in a middle slot", key)

    # basic algebra
    def __add__(self, other: "BarElement") -> "BarElement":
        self._check_same(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, self.system.field.zero) + v
        return BarElement(self.system, self.label, self.n, terms, self.reduced and other.reduced)

    def __neg__(self):
        return BarElement(self.system, self.label, self.n, {k: -v for k, v in self.terms.items()},
                          self.reduced)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BarElement":
        return BarElement(self.system, self.label, self.n, {k: c * v for k, v in self.terms.items()},
                          self.reduced)

    def __eq__(self, other):
        if not isinstance(other, BarElement):
            return NotImplemented
        return (self.label, self.n, self.terms) == (other.label, other.n, other.terms)

    def __hash__(self):
        return hash((self.label, self.n, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def _check_same(self, other):
        if (self.label, self.n) != (other.label, other.n):
            raise DegreeMismatch(f"cannot add B_{self.n}{self.label} and B_{other.n}{other.label}")

    def factors(self):
        return factor_algebras(self.system, self.label, self.n)

    def format(self) -> str:
        if not self.terms:
            return "0"
        facs = self.factors()
        f = self.system.field
        out = []
        for key in sorted(self.terms):
            word = "⊗".join(a.labels[i] for a, i in zip(facs, key))
            c = f.format(self.terms[key])
            out.append(word if c in ("1", 1) else f"{c}*{word}")
        return " + ".join(out)

    def __repr__(self):
        return f"BarElement({self.label}, n={self.n}, {self.format()})"

    @staticmethod
    def from_words(system, label, words: Mapping) -> "BarElement":
        """Build from ``{("1", "x", "1"): coeff}`` using basis labels of each factor."""
        words = dict(words)
        if not words:
            raise ValueError("from_words needs at least one word to fix the degree")
        length = len(next(iter(words)))
        n = length - 1 if label.is_closed else length - 2
        facs = factor_algebras(system, label, n)
        terms = {}
        for w, c in words.items():
            if facs is None:
                continue
            terms[tuple(a.labels.index(x) for a, x in zip(facs, w))] = c
        return BarElement(system, label, n, terms, reduced=False if label.is_closed else None)


def element(system, label, *word, coeff=1) -> BarElement:
    """Single-word element, e.g. ``element(sys, lab, "1", "x", "1")``."""
    return BarElement.from_words(system, label, {tuple(word): coeff})


# --- faces, differential, degeneracies ---------------------------------------

def _face_terms(system: BraneSystem, label: WindowLabel, n: int, key: tuple, i: int):
    """The i-th face d_i of a basis tuple, as a list of (tuple, coeff)."""
    A = system.closed
    if label.is_closed:
        a = [A.basis(k) for k in key]
        if i < n:
            prod = A.mul(a[i], a[i + 1])
            head, tail = list(key[:i]), list(key[i + 2:])
        else:
            prod = A.mul(a[n], a[0])
            head, tail = [], list(key[1:n])
        return [(tuple(head + [k] + tail), c) for k, c in enumerate(prod) if c]
    AS, AT = system.algebra(label.left), system.algebra(label.right)
    if i == 0:
        r = restriction_for(system, label.left)
        prod = AS.mul(AS.basis(key[0]), r(A.basis(key[1])))
        return [((k,) + key[2:], c) for k, c in enumerate(prod) if c]
    if i == n:
        r = restriction_for(system, label.right)
        prod = AT.mul(r(A.basis(key[n])), AT.basis(key[n + 1]))
        return [(key[:n] + (k,), c) for k, c in enumerate(prod) if c]
    prod = A.mul(A.basis(key[i]), A.basis(key[i + 1]))
    return [(key[:i] + (k,) + key[i + 2:], c) for k, c in enumerate(prod) if c]


def face(i: int, x: BarElement) -> BarElement:
    if x.n < 1 or not 0 <= i <= x.n:
        raise IndexError(f"face d_{i} undefined on B_{x.n}")
    f = x.system.field
    out = defaultdict(lambda: f.zero)
    for key, c in x.terms.items():
        for k2, c2 in _face_terms(x.system, x.label, x.n, key, i):
            out[k2] = out[k2] + c * c2
    return _project(x.system, x.label, x.n - 1, out, x.reduced)


def _project(system, label, n, terms, reduced) -> BarElement:
    if reduced and label.is_closed:
        u = system.closed.unit_index
        terms = {k: v for k, v in terms.items() if u not in k[1:]}
    return BarElement(system, label, n, terms, reduced)


def differential(x: BarElement) -> BarElement:
    """d = sum_i (-1)^i d_i; closed elements are projected back to the reduced complex."""
    f = x.system.field
    if x.n == 0:
        return BarElement(x.system, x.label, 0, {}, x.reduced)
    out = defaultdict(lambda: f.zero)
    for key, c in x.terms.items():
        for i in range(x.n + 1):
            sign = c if i % 2 == 0 else -c
            for k2, c2 in _face_terms(x.system, x.label, x.n, key, i):
                out[k2] = out[k2] + sign * c2
    return _project(x.system, x.label, x.n - 1, out, x.reduced)


def degeneracy(i: int, x: BarElement) -> BarElement:
    """s_i inserts the unit as the i-th middle factor, 1 <= i <= n+1."""
    if not 1 <= i <= x.n + 1:
        raise IndexError(f"degeneracy s_{i} out of range for B_{x.n} (1..{x.n + 1})")
    u = x.system.closed.unit_index
    if u is None:
        raise ValueError("degeneracies need the unit to be a basis vector of the closed algebra")
    terms = {key[:i] + (u,) + key[i:]: c for key, c in x.terms.items()}
    return BarElement(x.system, x.label, x.n + 1, terms, reduced=False)


def involution(x: BarElement) -> BarElement:
    terms = {bar_tuple(x.label, key): c for key, c in x.terms.items()}
    return BarElement(x.system, x.label.bar(), x.n, terms, x.reduced)


def bar_tuple(label: WindowLabel, key: tuple) -> tuple:
    if label.is_closed:
        return (key[0],) + tuple(reversed(key[1:]))
    return tuple(reversed(key))


# --- pairing and Casimir ------------------------------------------------------

def pair_tuples(system, label: WindowLabel, n: int, x: tuple, y: tuple):
    """<x, y> for basis tuples x of B_n(label) and y of B_n(bar label)."""
    facs = factor_algebras(system, label, n)
    f = system.field
    acc = f.one
    for a, i, j in zip(facs, x, bar_tuple(label.bar(), y)):
        g = a.metric[i][j]
        if not g:
            return f.zero
        acc = acc * g
    return acc


def pairing(x: BarElement, y: BarElement):
    if y.label != x.label.bar() or y.n != x.n:
        raise DegreeMismatch(f"cannot pair B_{x.n}{x.label} with B_{y.n}{y.label}")
    f = x.system.field
    acc = f.zero
    for kx, cx in x.terms.items():
        for ky, cy in y.terms.items():
            p = pair_tuples(x.system, x.label, x.n, kx, ky)
            if p:
                acc = acc + cx * cy * p
    return acc


@lru_cache(maxsize=None)
def _casimir_cached(system, label, n):
    facs = factor_algebras(system, label, n)
    if facs is None:
        return ()
    f = system.field
    out = []
    per_factor = [a.casimir for a in facs]
    for combo in itertools.product(*per_factor):
        left = tuple(i for i, _, _ in combo)
        right_aligned = tuple(j for _, j, _ in combo)
        c = f.one
        for _, _, cc in combo:
            c = c * cc
        # right_aligned lives in B(label) positions; move it to B(bar label)
        out.append((left, bar_tuple(label, right_aligned), c))
    return tuple(out)


def casimir(system: BraneSystem, label: WindowLabel, n: int):
    """List of (basis tuple of B_n(label), basis tuple of B_n(bar label), coefficient)."""
    return list(_casimir_cached(system, label, n))


@lru_cache(maxsize=None)
def _casimir_index(system, label, n):
    idx = defaultdict(list)
    for left, right, c in _casimir_cached(system, label, n):
        idx[left].append((right, c))
    return dict(idx)


# --- correlators ---------------------------------------------------------------

@dataclass(frozen=True)
class Slot:
    name: str
    label: WindowLabel
    degree: int


class Correlator:
    """Multilinear functional on fixed-degree bar spaces, stored as a sparse table.

    Keys of ``table`` are tuples with one basis tuple per slot.
    """

    def __init__(self, system: BraneSystem, slots: Sequence[Slot], table: Mapping):
        self.system = system
        self.slots = tuple(slots)
        self.table = {k: v for k, v in table.items() if v}

    def slot_index(self, name) -> int:
        if isinstance(name, int):
            return name
        for i, s in enumerate(self.slots):
            if s.name == name:
                return i
        raise KeyError(name)

    def __call__(self, inputs: Mapping | Sequence):
        """Evaluate on BarElements (one per slot, by slot name or position)."""
        if isinstance(inputs, Mapping):
            missing = [s.name for s in self.slots if s.name not in inputs]
            if missing:
                raise SlotError(f"no input for window(s) {', '.join(map(str, missing))}", missing[0])
            elems = [inputs[s.name] for s in self.slots]
        else:
            elems = list(inputs)
        f = self.system.field
        for s, x in zip(self.slots, elems):
            if x.label != s.label or x.n != s.degree:
                return f.zero
        acc = f.zero
        for combo in itertools.product(*[x.terms.items() for x in elems]):
            key = tuple(k for k, _ in combo)
            v = self.table.get(key)
            if v:
                c = v
                for _, cc in combo:
                    c = c * cc
                acc = acc + c
        return acc

    def renamed(self, mapping: Mapping[str, str]) -> "Correlator":
        slots = [Slot(mapping.get(s.name, s.name), s.label, s.degree) for s in self.slots]
        return Correlator(self.system, slots, self.table)

    def permuted(self, names: Sequence[str]) -> "Correlator":
        """Reorder slots to the given name order."""
        order = [self.slot_index(n) for n in names]
        slots = [self.slots[i] for i in order]
        table = {tuple(k[i] for i in order): v for k, v in self.table.items()}
        return Correlator(self.system, slots, table)

    def __eq__(self, other):
        if not isinstance(other, Correlator):
            return NotImplemented
        if sorted(s.name for s in self.slots) != sorted(s.name for s in other.slots):
            return False
        o = other.permuted([s.name for s in self.slots])
        return self.slots == o.slots and self.table == o.table

    def is_zero(self) -> bool:
        return not self.table

    def __repr__(self):
        sl = ", ".join(f"{s.name}:{s.label}/{s.degree}" for s in self.slots)
        return f"Correlator([{sl}], nnz={len(self.table)})"


def compose_correlators(Y: Correlator, Yp: Correlator, l0, l0p) -> Correlator:
    """(Y o Y')(...) = sum_ij Y(..., Delta_i) g^ij Y'(..., bar Delta_j)."""
    i0, j0 = Y.slot_index(l0), Yp.slot_index(l0p)
    s, sp = Y.slots[i0], Yp.slots[j0]
    if s.degree != sp.degree:
        raise DegreeMismatch(f"slot {s.name} has degree {s.degree}, slot {sp.name} has {sp.degree}")
    slots = Y.slots[:i0] + Y.slots[i0 + 1:] + Yp.slots[:j0] + Yp.slots[j0 + 1:]
    system = Y.system
    if s.label != sp.label.bar():
        return Correlator(system, slots, {})
    f = system.field
    cas = _casimir_index(system, s.label, s.degree)
    by_slot = defaultdict(list)
    for k, v in Yp.table.items():
        by_slot[k[j0]].append((k[:j0] + k[j0 + 1:], v))
    out = defaultdict(lambda: f.zero)
    for k, v in Y.table.items():
        rest = k[:i0] + k[i0 + 1:]
        for right, c in cas.get(k[i0], ()):
            for rest_p, vp in by_slot.get(right, ()):
                key = rest + rest_p
                out[key] = out[key] + v * c * vp
    return Correlator(system, slots, out)


def self_compose(Y: Correlator, l0, l1) -> Correlator:
    """Contract two slots of one correlator with the Casimir of the first slot's space."""
    i0, i1 = Y.slot_index(l0), Y.slot_index(l1)
    s, sp = Y.slots[i0], Y.slots[i1]
    if s.degree != sp.degree:
        raise DegreeMismatch(f"slot {s.name} has degree {s.degree}, slot {sp.name} has {sp.degree}")
    keep = [i for i in range(len(Y.slots)) if i not in (i0, i1)]
    slots = [Y.slots[i] for i in keep]
    system = Y.system
    if s.label != sp.label.bar():
        return Correlator(system, slots, {})
    f = system.field
    cas = _casimir_index(system, s.label, s.degree)
    out = defaultdict(lambda: f.zero)
    for k, v in Y.table.items():
        for right, c in cas.get(k[i0], ()):
            if k[i1] == right:
                key = tuple(k[i] for i in keep)
                out[key] = out[key] + v * c
    return Correlator(system, slots, out)


class DualizedMap:
    """Y with some slots turned into outputs: inputs on the remaining slots map to
    ``{tuple of out basis tuples: coeff}`` in the tensor product of the barred spaces."""

    def __init__(self, Y: Correlator, out_slots: Sequence):
        self.system = Y.system
        self.out_idx = [Y.slot_index(l) for l in out_slots]
        self.in_idx = [i for i in range(len(Y.slots)) if i not in self.out_idx]
        self.in_slots = [Y.slots[i] for i in self.in_idx]
        self.out_slots = [Y.slots[i] for i in self.out_idx]
        f = self.system.field
        cas = [_casimir_index(self.system, s.label, s.degree) for s in self.out_slots]
        self.table: dict = defaultdict(lambda: defaultdict(lambda: f.zero))
        for k, v in Y.table.items():
            kin = tuple(k[i] for i in self.in_idx)
            for combo in itertools.product(*[c.get(k[i], ()) for c, i in zip(cas, self.out_idx)]):
                coeff = v
                for _, c in combo:
                    coeff = coeff * c
                kout = tuple(r for r, _ in combo)
                self.table[kin][kout] = self.table[kin][kout] + coeff

    def __call__(self, inputs: Sequence[BarElement]):
        f = self.system.field
        out = defaultdict(lambda: f.zero)
        for s, x in zip(self.in_slots, inputs):
            if x.label != s.label or x.n != s.degree:
                return {}
        for combo in itertools.product(*[x.terms.items() for x in inputs]):
            kin = tuple(k for k, _ in combo)
            c = f.one
            for _, cc in combo:
                c = c * cc
            for kout, v in self.table.get(kin, {}).items():
                out[kout] = out[kout] + c * v
        return {k: v for k, v in out.items() if v}

    def apply_single(self, inputs: Sequence[BarElement]) -> BarElement:
        """For one output slot: the image as a BarElement of B(bar label)."""
        if len(self.out_slots) != 1:
            raise ValueError("apply_single needs exactly one output slot")
        s = self.out_slots[0]
        res = self(inputs)
        return BarElement(self.system, s.label.bar(), s.degree, {k[0]: v for k, v in res.items()},
                          reduced=False)


def dualize(Y: Correlator, out_slots: Sequence) -> DualizedMap:
    return DualizedMap(Y, out_slots)


def codifferential(x: BarElement) -> BarElement:
    """Adjoint of d under the bar pairing: <y, delta x> = <d y, x> for y in B_{n+1}(bar label)."""
    system, label, n = x.system, x.label, x.n
    f = system.field
    out = defaultdict(lambda: f.zero)
    for left, right, c in _casimir_cached(system, label, n + 1):
        y = BarElement(system, label.bar(), n + 1, {right: f.one}, reduced=False)
        p = _pair_d(x, y)
        if p:
            out[left] = out[left] + c * p
    return BarElement(system, label, n + 1, out, reduced=False)


def _pair_d(x: BarElement, y: BarElement):
    dy = differential(y)
    f = x.system.field
    acc = f.zero
    for ky, cy in dy.terms.items():
        for kx, cx in x.terms.items():
            p = pair_tuples(x.system, x.label, x.n, kx, ky)
            if p:
                acc = acc + cx * cy * p
    return acc
