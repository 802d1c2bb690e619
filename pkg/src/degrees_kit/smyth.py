"""Finite posets, the Smyth preorder and the frame of upper sets.

Also the classical (two-valued) degree computation used as an oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence


class PosetError(ValueError):
    pass


class FinitePoset:
    def __init__(self, elements: Sequence[Hashable], leq):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise PosetError("duplicate elements")
        if callable(leq):
            rel = {(a, b) for a in self.elements for b in self.elements if leq(a, b)}
        else:
            rel = {tuple(p) for p in leq}
            rel |= {(a, a) for a in self.elements}
        unknown = {x for p in rel for x in p} - set(self.elements)
        if unknown:
            raise PosetError(f"relation mentions unknown elements {sorted(map(repr, unknown))}")
        self._rel = frozenset(rel)
        self._validate()

    def _validate(self):
        E, R = self.elements, self._rel
        for a in E:
            if (a, a) not in R:
                raise PosetError(f"not reflexive at {a!r}")
        for a, b in R:
            if a != b and (b, a) in R:
                raise PosetError(f"not antisymmetric: {a!r}, {b!r}")
            for c in E:
                if (b, c) in R and (a, c) not in R:
                    raise PosetError(f"not transitive: {a!r} <= {b!r} <= {c!r}")

    def leq(self, a, b) -> bool:
        return (a, b) in self._rel

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FinitePoset({list(self.elements)})"

    def to_json(self):
        return {"elements": list(self.elements),
                "leq": sorted([a, b] for a, b in self._rel if a != b)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["elements"], [tuple(p) for p in obj["leq"]])


def chain(n: int) -> FinitePoset:
    return FinitePoset(range(n), lambda a, b: a <= b)


def antichain(n: int) -> FinitePoset:
    return FinitePoset(range(n), lambda a, b: a == b)


def diamond() -> FinitePoset:
    return FinitePoset(["bot", "l", "r", "top"],
                       [("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top"), ("bot", "top")])


def all_posets(n: int):
    """Every partial order on {0, ..., n-1} (labelled, not up to isomorphism)."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    for bits in itertools.product((False, True), repeat=len(pairs)):
        rel = [p for p, on in zip(pairs, bits) if on]
        try:
            yield FinitePoset(range(n), rel)
        except PosetError:
            continue


def curated_posets():
    """Small posets used across the checks (size at most 4)."""
    return [chain(1), chain(2), chain(3), antichain(2), antichain(3), diamond(),
            FinitePoset(["a", "b", "c"], [("a", "c"), ("b", "c")]),
            FinitePoset(["a", "b", "c", "d"], [("a", "c"), ("b", "c"), ("b", "d")])]


# ----------------------------------------------------------------------------
# upper sets


def _check_subset(P: FinitePoset, S):
    S = frozenset(S)
    if not S <= set(P.elements):
        raise PosetError("not a subset of the poset")
    return S


def upper_closure(P: FinitePoset, S: Iterable) -> frozenset:
    S = _check_subset(P, S)
    return frozenset(y for y in P.elements if any(P.leq(x, y) for x in S))


def is_upper(P: FinitePoset, S: Iterable) -> bool:
    S = _check_subset(P, S)
    return upper_closure(P, S) == S


def upper_sets(P: FinitePoset) -> list:
    out = []
    for r in range(len(P) + 1):
        for S in itertools.combinations(P.elements, r):
            if is_upper(P, S):
                out.append(frozenset(S))
    return out


def smyth_leq(P: FinitePoset, S: Iterable, T: Iterable) -> bool:
    """``S below T``: every x in S is above some y in T."""
    S, T = _check_subset(P, S), _check_subset(P, T)
    by_cones = upper_closure(P, S) <= upper_closure(P, T)
    direct = all(any(P.leq(y, x) for y in T) for x in S)
    assert by_cones == direct
    return direct


@dataclass(frozen=True)
class Frame:
    poset: FinitePoset
    elements: tuple
    bottom: frozenset
    top: frozenset
    meet: Callable
    join: Callable
    heyting: Callable


def frame_ops(P: FinitePoset) -> Frame:
    top = frozenset(P.elements)

    def meet(*us):
        out = top
        for u in us:
            out = out & u
        return out

    def join(*us):
        return frozenset().union(*us)

    def heyting(U, V):
        return frozenset(x for x in P.elements if upper_closure(P, [x]) & U <= V)

    return Frame(P, tuple(upper_sets(P)), frozenset(), top, meet, join, heyting)


# ----------------------------------------------------------------------------
# classical degrees

# the two truth values, ordered False < True
OMEGA = FinitePoset([False, True], lambda a, b: (not a) or b)


def classical_leq(phi: Mapping, psi: Mapping) -> bool:
    """``forall x exists y. psi(y) -> phi(x)``, read classically."""
    return all(any((not psi[y]) or phi[x] for y in psi) for x in phi)


def image(phi: Mapping) -> frozenset:
    return frozenset(bool(v) for v in phi.values())


def classical_degree(phi: Mapping) -> frozenset:
    """The degree as an upper set of the truth values."""
    return upper_closure(OMEGA, image(phi))


def classical_sup(degrees: Sequence[frozenset]) -> frozenset:
    return frozenset().union(*degrees)


@dataclass
class DegreeQuotient:
    classes: list  # lists of indices into the input
    leq: set  # pairs (i, j) of class indices

    def is_chain(self) -> bool:
        n = len(self.classes)
        return all((i, j) in self.leq or (j, i) in self.leq for i in range(n) for j in range(n))


def classical_degree_order(preds: Sequence[Mapping], max_carrier: int = 4) -> DegreeQuotient:
    if any(len(p) > max_carrier for p in preds):
        raise PosetError(f"carriers are limited to {max_carrier} points")
    n = len(preds)
    rel = [[classical_leq(preds[i], preds[j]) for j in range(n)] for i in range(n)]
    classes, owner = [], {}
    for i in range(n):
        for c, members in enumerate(classes):
            j = members[0]
            if rel[i][j] and rel[j][i]:
                members.append(i)
                owner[i] = c
                break
        else:
            owner[i] = len(classes)
            classes.append([i])
    leq = {(a, b) for a in range(len(classes)) for b in range(len(classes))
           if rel[classes[a][0]][classes[b][0]]}
    # order the classes bottom-up so reports are stable
    order = sorted(range(len(classes)), key=lambda c: sum((d, c) in leq for d in range(len(classes))))
    renum = {c: k for k, c in enumerate(order)}
    return DegreeQuotient([classes[c] for c in order], {(renum[a], renum[b]) for a, b in leq})


def all_classical_predicates(max_size: int = 3):
    """Every boolean predicate on {0, ..., k-1} for k up to ``max_size``."""
    for k in range(max_size + 1):
        for vals in itertools.product((False, True), repeat=k):
            yield dict(enumerate(vals))
