"""Realizability predicates and the realizability interpretation of logic."""
from __future__ import annotations

from typing import Mapping, Optional

from .assemblies import Assembly, AssemblyError, assembly_from_json, assembly_to_json, product
from .assemblies import label_to_json, rset_from_json, rset_to_json
from .rsets import (
    ALL, EMPTY, ByPredicate, Ctx, Fails, Holds, RSet, Unknown, Verdict, all_of,
    arrow, finite, is_empty, meet, member, paired, union,
)


class RzPredicate:
    """A map from the carrier of an assembly to realizer sets.

    ``assembly`` may be None: that is the predicate on the empty assembly,
    which we keep symbolically because assemblies have nonempty carriers.
    """

    def __init__(self, assembly: Optional[Assembly], at, name: str = "phi"):
        self.assembly, self.name = assembly, name
        if assembly is None:
            self._at = {}
            return
        table = dict(at) if isinstance(at, Mapping) else {x: at(x) for x in assembly.carrier}
        missing = [x for x in assembly.carrier if x not in table]
        if missing:
            raise AssemblyError(f"predicate undefined at {missing}")
        self._at = {x: table[x] for x in assembly.carrier}

    @property
    def pca(self):
        return self.assembly.pca

    @property
    def is_bottom(self) -> bool:
        return self.assembly is None

    @property
    def carrier(self):
        return () if self.assembly is None else self.assembly.carrier

    def at(self, x) -> RSet:
        return self._at[x]

    def fibers(self):
        return [self._at[x] for x in self.carrier]

    def __repr__(self):
        return f"RzPredicate({self.name})"


def _same(*preds):
    a = preds[0].assembly
    if any(p.assembly is not a for p in preds):
        raise AssemblyError("predicates live on different assemblies")
    return a


def bottom_predicate(name: str = "bottom") -> RzPredicate:
    return RzPredicate(None, {}, name)


def bot(S: Assembly) -> RzPredicate:
    return RzPredicate(S, {x: EMPTY for x in S.carrier}, "bot")


def top(S: Assembly) -> RzPredicate:
    return RzPredicate(S, {x: ALL for x in S.carrier}, "top")


def conj(phi: RzPredicate, psi: RzPredicate) -> RzPredicate:
    S = _same(phi, psi)
    return RzPredicate(S, lambda x: paired(S.pca, phi.at(x), psi.at(x)), f"({phi.name} & {psi.name})")


def tagged(pca, n: int, R: RSet) -> RSet:
    return paired(pca, finite([pca.numeral(n)]), R)


def disj_sets(pca, A: RSet, B: RSet) -> RSet:
    return union(tagged(pca, 0, A), tagged(pca, 1, B))


def disj(phi: RzPredicate, psi: RzPredicate) -> RzPredicate:
    S = _same(phi, psi)
    return RzPredicate(S, lambda x: disj_sets(S.pca, phi.at(x), psi.at(x)), f"({phi.name} | {psi.name})")


def impl(phi: RzPredicate, psi: RzPredicate) -> RzPredicate:
    S = _same(phi, psi)
    return RzPredicate(S, lambda x: arrow(phi.at(x), psi.at(x)), f"({phi.name} -> {psi.name})")


def _truth(R: RSet, ctx: Ctx, negate: bool, name: str) -> RSet:
    e = is_empty(R, ctx)
    if e is None:
        return ByPredicate(lambda r: None, name=name)
    return ALL if e == negate else EMPTY


def neg(phi: RzPredicate) -> RzPredicate:
    S = phi.assembly
    ctx = Ctx(S.pca)
    return RzPredicate(S, lambda x: _truth(phi.at(x), ctx, True, f"not {phi.name}({x!r})"), f"~{phi.name}")


def dneg(phi: RzPredicate) -> RzPredicate:
    S = phi.assembly
    ctx = Ctx(S.pca)
    return RzPredicate(S, lambda x: _truth(phi.at(x), ctx, False, f"not not {phi.name}({x!r})"), f"~~{phi.name}")


def forall_unary(S: Assembly, phi: RzPredicate) -> RSet:
    return meet(*(arrow(S.realize(x), phi.at(x)) for x in S.carrier))


def exists_unary(S: Assembly, phi: RzPredicate) -> RSet:
    return union(*(paired(S.pca, S.realize(x), phi.at(x)) for x in S.carrier))


def forall_q(S: Assembly, T: Assembly, rho: RzPredicate) -> RzPredicate:
    """``y |-> forall x:S. rho(x, y)`` for rho on S x T."""
    return RzPredicate(
        T,
        lambda y: meet(*(arrow(S.realize(x), arrow(T.realize(y), rho.at((x, y)))) for x in S.carrier)),
        f"forall.{rho.name}",
    )


def exists_q(S: Assembly, T: Assembly, rho: RzPredicate) -> RzPredicate:
    """``y |-> exists x:S. rho(x, y)`` for rho on S x T."""
    return RzPredicate(
        T,
        lambda y: arrow(T.realize(y), union(*(paired(S.pca, S.realize(x), rho.at((x, y))) for x in S.carrier))),
        f"exists.{rho.name}",
    )


def eq_pred(S: Assembly) -> RzPredicate:
    P = product(S, S)
    return RzPredicate(P, lambda xy: ALL if xy[0] == xy[1] else EMPTY, "eq")


def leq_S(phi: RzPredicate, psi: RzPredicate, search_depth: int = 2000,
          fuel: int = 10_000, samples: int = 64) -> Verdict:
    """Search the sub-PCA for r with ``s |- x, t in phi(x)  =>  r s t in psi(x)``."""
    S = _same(phi, psi)
    pca = S.pca
    ctx = Ctx(pca, fuel, samples)
    goal = meet(*(arrow(S.realize(x), arrow(phi.at(x), psi.at(x))) for x in S.carrier))
    for x in S.carrier:
        if is_empty(arrow(S.realize(x), arrow(phi.at(x), psi.at(x))), ctx) is True:
            return Fails(f"no realizer can work at {x!r}", {"point": x})
    for i in range(search_depth):
        r = pca.enum_sub(i)
        if r is None:
            break
        if member(ctx, r, goal).holds:
            return Holds(f"witness {pca.show(r)}", {"witness": r, "index": i})
    return Unknown(f"no witness among {search_depth} candidates")


def is_dense(phi: RzPredicate) -> Verdict:
    if phi.is_bottom:
        return Holds("empty carrier")
    ctx = Ctx(phi.pca)
    out = []
    for x in phi.carrier:
        e = is_empty(phi.at(x), ctx)
        if e is True:
            return Fails(f"empty fiber at {x!r}", {"point": x})
        if e is None:
            out.append(Unknown(f"cannot tell whether the fiber at {x!r} is inhabited"))
    return all_of(out, "every fiber inhabited")


# ----------------------------------------------------------------------------
# JSON


def predicate_from_json(obj, pca, assemblies: Mapping = None, name: str = "phi") -> RzPredicate:
    ref = obj["assembly"]
    if isinstance(ref, str):
        if not assemblies or ref not in assemblies:
            raise AssemblyError(f"unknown assembly {ref!r}")
        S = assemblies[ref]
    else:
        S = assembly_from_json(ref, pca)
    at = obj["at"]
    table = {}
    for x in S.carrier:
        k = x if isinstance(x, str) else _key(x)
        if k not in at:
            raise AssemblyError(f"predicate undefined at {x!r}")
        table[x] = rset_from_json(at[k], pca)
    return RzPredicate(S, table, obj.get("name", name))


def _key(x):
    import json
    return json.dumps(label_to_json(x))


def predicate_to_json(phi: RzPredicate):
    if phi.is_bottom:
        return {"name": phi.name, "bottom": True}
    return {
        "name": phi.name,
        "assembly": assembly_to_json(phi.assembly),
        "at": {(x if isinstance(x, str) else _key(x)): rset_to_json(phi.at(x), phi.pca) for x in phi.carrier},
    }
