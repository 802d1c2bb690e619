"""Assemblies over a PCA: finite carriers whose points carry realizer sets."""
from __future__ import annotations

import itertools
from typing import Mapping

from .pca import Pca
from .rsets import (
    ALL, EMPTY, Arrow, ByPredicate, Ctx, Fails, Finite, Holds, Meet, Paired, RSet,
    Union, Unknown, Verdict, all_of, contains, finite, is_empty, paired,
    realizes_impl, union,
)


class AssemblyError(ValueError):
    pass


class Assembly:
    """A finite carrier with a realizability relation ``realize(x)``."""

    def __init__(self, pca: Pca, carrier, realize, name: str = "S"):
        carrier = tuple(carrier)
        if not carrier:
            raise AssemblyError("carrier must be nonempty")
        if len(set(carrier)) != len(carrier):
            raise AssemblyError("carrier labels must be distinct")
        self.pca, self.carrier, self.name = pca, carrier, name
        table = dict(realize) if isinstance(realize, Mapping) else {x: realize(x) for x in carrier}
        missing = [x for x in carrier if x not in table]
        if missing:
            raise AssemblyError(f"no realizers given for {missing}")
        ctx = Ctx(pca)
        for x in carrier:
            if is_empty(table[x], ctx) is True:
                raise AssemblyError(f"point {x!r} has no realizer")
        self._realize = table

    def realize(self, x) -> RSet:
        return self._realize[x]

    def __len__(self):
        return len(self.carrier)

    def __repr__(self):
        return f"Assembly({self.name}, {list(self.carrier)})"


def _same_pca(*assemblies):
    p = assemblies[0].pca
    if any(a.pca is not p for a in assemblies):
        raise AssemblyError("assemblies live over different PCAs")
    return p


def nabla(pca: Pca, labels, name: str = "nabla") -> Assembly:
    return Assembly(pca, labels, {x: ALL for x in labels}, name)


def nat_assembly(pca: Pca, bound: int) -> Assembly:
    if bound < 1:
        raise AssemblyError("bound must be at least 1")
    return Assembly(pca, range(bound), {n: finite([pca.numeral(n)]) for n in range(bound)}, f"N{bound}")


def product(S: Assembly, T: Assembly) -> Assembly:
    pca = _same_pca(S, T)
    carrier = [(x, y) for x in S.carrier for y in T.carrier]
    return Assembly(
        pca, carrier,
        {(x, y): paired(pca, S.realize(x), T.realize(y)) for x, y in carrier},
        f"{S.name}x{T.name}",
    )


def coproduct(S: Assembly, T: Assembly) -> Assembly:
    pca = _same_pca(S, T)
    tag = [finite([pca.numeral(0)]), finite([pca.numeral(1)])]
    real = {(0, x): paired(pca, tag[0], S.realize(x)) for x in S.carrier}
    real.update({(1, y): paired(pca, tag[1], T.realize(y)) for y in T.carrier})
    return Assembly(pca, list(real), real, f"{S.name}+{T.name}")


def coproduct_family(index: Assembly, family: Mapping) -> Assembly:
    """Disjoint union of ``family[i]`` over the index assembly."""
    pca = _same_pca(index, *family.values())
    real = {}
    for i in index.carrier:
        A = family[i]
        for x in A.carrier:
            real[(i, x)] = paired(pca, index.realize(i), A.realize(x))
    return Assembly(pca, list(real), real, "Sum")


def inclusion_trackers(pca: Pca):
    """Trackers of the two coproduct inclusions (``[s] pair 0 s``, ``[s] pair 1 s``)."""
    from .pca import Hole, ap
    return tuple(
        pca.bracket("s", ap(pca.pair, pca.numeral(n), Hole("s"))) for n in (0, 1)
    )


# ----------------------------------------------------------------------------
# tracking


def check_tracks(S: Assembly, T: Assembly, f, r, fuel: int = 10_000, samples: int = 64) -> Verdict:
    """Does ``r`` track the carrier map ``f`` (a mapping or a callable)?"""
    pca = _same_pca(S, T)
    fmap = f if callable(f) else f.__getitem__
    ctx = Ctx(pca, fuel, samples)
    out = []
    for x in S.carrier:
        v = realizes_impl(ctx, r, S.realize(x), T.realize(fmap(x)))
        if v.fails:
            data = dict(v.data or {})
            data["point"] = x
            return Fails(f"tracking fails at {x!r}", data)
        out.append(v)
    return all_of(out, "tracks")


def recheck_tracks(S: Assembly, T: Assembly, f, r, x, s, fuel: int = 10_000) -> Verdict:
    """Re-run one case of :func:`check_tracks` (reproducing a counterexample)."""
    pca = _same_pca(S, T)
    fmap = f if callable(f) else f.__getitem__
    ctx = Ctx(pca, fuel)
    if contains(ctx, s, S.realize(x)) is False:
        return Unknown("input does not realize the point")
    return realizes_impl(ctx, r, finite([s]), T.realize(fmap(x)))


def find_tracker(S: Assembly, T: Assembly, f, search_depth: int = 2000,
                 fuel: int = 10_000, samples: int = 64, full: bool = False):
    """First element (sub-PCA order, or full-PCA order if ``full``) tracking ``f``."""
    pca = _same_pca(S, T)
    enum = pca.enum_all if full else pca.enum_sub
    for i in range(search_depth):
        r = enum(i)
        if r is None:
            return None
        if check_tracks(S, T, f, r, fuel, samples).holds:
            return r
    return None


def all_maps(S: Assembly, T: Assembly):
    for values in itertools.product(T.carrier, repeat=len(S.carrier)):
        yield dict(zip(S.carrier, values))


def exponential_bounded(S: Assembly, T: Assembly, search_depth: int = 200,
                        fuel: int = 2_000, samples: int = 16) -> Assembly:
    """Maps |S| -> |T| with a tracker among the first ``search_depth`` elements.

    Trackers are drawn from the whole algebra.  This under-approximates the
    exponential; ``search_depth`` is recorded on the result.
    """
    pca = _same_pca(S, T)
    real = {}
    for f in all_maps(S, T):
        r = find_tracker(S, T, f, search_depth, fuel, samples, full=True)
        if r is None:
            continue
        label = tuple(f[x] for x in S.carrier)

        def test(c, f=f):
            v = check_tracks(S, T, f, c, fuel, samples)
            return True if v.holds else False if v.fails else None

        real[label] = ByPredicate(test, lambda i, r=r: r if i == 0 else None,
                                  name=f"tracks[{S.name}->{T.name}]{label}")
    if not real:
        raise AssemblyError("no tracked map found at this depth")
    E = Assembly(pca, list(real), real, f"{T.name}^{S.name}")
    E.search_depth = search_depth
    return E


# ----------------------------------------------------------------------------
# modesty


def disjoint(ctx: Ctx, A: RSet, B: RSet) -> Verdict:
    if A is EMPTY or B is EMPTY:
        return Holds()
    if A is ALL:
        return Fails("shared realizer", {"realizer": _some(ctx, B)})
    if B is ALL:
        return Fails("shared realizer", {"realizer": _some(ctx, A)})
    if isinstance(A, Paired) and isinstance(B, Paired):
        l = disjoint(ctx, A.left, B.left)
        if l.holds:
            return l
        r = disjoint(ctx, A.right, B.right)
        if r.holds:
            return r
        if l.fails and r.fails:
            a, b = l.data["realizer"], r.data["realizer"]
            return Fails("shared realizer", {"realizer": ctx.pca.make_pair(a, b)})
        return Unknown("overlap undecided")
    if isinstance(B, Finite) and not isinstance(A, Finite):
        A, B = B, A
    if isinstance(A, Finite):
        vs = [(e, contains(ctx, e, B)) for e in A.elements]
        for e, v in vs:
            if v is True:
                return Fails("shared realizer", {"realizer": e})
        if all(v is False for _, v in vs):
            return Holds()
        return Unknown("overlap undecided")
    if isinstance(A, Union):
        return all_of(disjoint(ctx, b, B) for b in A.branches)
    if isinstance(B, Union):
        return all_of(disjoint(ctx, A, b) for b in B.branches)
    return Unknown("overlap undecided")


def _some(ctx, R):
    from .rsets import _witness
    return _witness(R, ctx)


def is_modest(S: Assembly) -> Verdict:
    ctx = Ctx(S.pca)
    out = []
    for i, x in enumerate(S.carrier):
        for y in S.carrier[i + 1:]:
            v = disjoint(ctx, S.realize(x), S.realize(y))
            if v.fails:
                return Fails(f"{x!r} and {y!r} share a realizer", {"points": (x, y), **v.data})
            out.append(v)
    return all_of(out, "realizer sets pairwise disjoint")


def is_partitioned(S: Assembly) -> Verdict:
    out = []
    for x in S.carrier:
        R = S.realize(x)
        if isinstance(R, Finite):
            if len(R.elements) > 1:
                return Fails(f"{x!r} has several realizers", {"point": x})
            continue
        if R is ALL:
            return Fails(f"{x!r} is realized by everything", {"point": x})
        out.append(Unknown(f"cannot count the realizers of {x!r}"))
    return all_of(out, "every point has exactly one realizer")


# ----------------------------------------------------------------------------
# JSON


def rset_from_json(obj, pca: Pca) -> RSet:
    if obj == "all":
        return ALL
    if obj == "empty":
        return EMPTY
    if isinstance(obj, dict):
        if "finite" in obj:
            return finite(_elem(pca, e) for e in obj["finite"])
        if "paired" in obj:
            a, b = obj["paired"]
            return paired(pca, rset_from_json(a, pca), rset_from_json(b, pca))
        if "union" in obj:
            return union(*(rset_from_json(b, pca) for b in obj["union"]))
        if "arrow" in obj:
            a, b = obj["arrow"]
            return Arrow(rset_from_json(a, pca), rset_from_json(b, pca))
        if "meet" in obj:
            return Meet([rset_from_json(b, pca) for b in obj["meet"]])
    raise AssemblyError(f"unrecognised realizer set: {obj!r}")


def _elem(pca, e):
    if isinstance(e, str):
        return pca.parse_element(e)
    if isinstance(e, dict) and pca.model == "k2":
        from .k2 import from_json
        return from_json(e)
    raise AssemblyError(f"unrecognised element: {e!r}")


def rset_to_json(R: RSet, pca: Pca):
    if R is ALL:
        return "all"
    if R is EMPTY:
        return "empty"
    if isinstance(R, Finite):
        return {"finite": [_elem_json(pca, e) for e in R.elements]}
    if isinstance(R, Paired):
        return {"paired": [rset_to_json(R.left, pca), rset_to_json(R.right, pca)]}
    if isinstance(R, Union):
        return {"union": [rset_to_json(b, pca) for b in R.branches]}
    if isinstance(R, Arrow):
        return {"arrow": [rset_to_json(R.src, pca), rset_to_json(R.tgt, pca)]}
    if isinstance(R, Meet):
        return {"meet": [rset_to_json(p, pca) for p in R.parts]}
    return {"predicate": R.name}


def _elem_json(pca, e):
    if pca.model == "k2":
        from .k2 import to_json
        return to_json(e)
    return pca.show(e)


def label_to_json(x):
    return [label_to_json(y) for y in x] if isinstance(x, tuple) else x


def label_from_json(x):
    return tuple(label_from_json(y) for y in x) if isinstance(x, list) else x


def assembly_from_json(obj, pca: Pca, name: str = "S") -> Assembly:
    carrier = [label_from_json(x) for x in obj["carrier"]]
    realize = obj["realize"]
    table = {}
    for x in carrier:
        k = x if isinstance(x, str) else _label_key(x)
        if k not in realize:
            raise AssemblyError(f"no realizers given for {x!r}")
        table[x] = rset_from_json(realize[k], pca)
    return Assembly(pca, carrier, table, obj.get("name", name))


def _label_key(x) -> str:
    import json
    return json.dumps(label_to_json(x))


def assembly_to_json(S: Assembly):
    return {
        "name": S.name,
        "carrier": [label_to_json(x) for x in S.carrier],
        "realize": {
            (x if isinstance(x, str) else _label_key(x)): rset_to_json(S.realize(x), S.pca)
            for x in S.carrier
        },
    }
