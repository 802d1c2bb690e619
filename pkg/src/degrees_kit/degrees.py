"""Instance reducibility between realizability predicates.

A reduction ``phi <= psi`` (phi on S, psi on T) is witnessed by a pair
(l1, l2) of sub-PCA elements such that for every x in |S| and s |- x there
is y in |T| with ``l1 s |-_T y`` and ``l2 s`` mapping psi(y) into phi(x).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import terms as T
from .assemblies import (
    Assembly, AssemblyError, check_tracks, coproduct, coproduct_family, find_tracker,
    nabla, nat_assembly, product,
)
from .logic import RzPredicate, bot, disj_sets, forall_unary, top
from .pca import Hole, Pca, PcaError, ap
from .rsets import (
    ALL, EMPTY, Ctx, Fails, Holds, RSet, Unknown, Verdict, _apply_into,
    _open_impl, all_of, arrow, finite, generics, is_empty, meet, member, paired,
    samples_of, union,
)


class ResourceError(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    l1: object
    l2: object

    def show(self, pca: Pca) -> str:
        return f"({pca.show(self.l1)}) ({pca.show(self.l2)})"


def check_witness(pca: Pca, w: Witness) -> None:
    for name, e in (("l1", w.l1), ("l2", w.l2)):
        pca.check(e)
        if not pca.in_sub(e):
            raise PcaError(f"{name} is not in the sub-PCA: {pca.show(e)}")


def _pca_of(*preds):
    pcas = [p.pca for p in preds if not p.is_bottom]
    if pcas and any(q is not pcas[0] for q in pcas):
        raise AssemblyError("predicates live over different PCAs")
    return pcas[0] if pcas else None


# ----------------------------------------------------------------------------
# verification


def _maps_into(ctx: Ctx, f, pat, env, target: RSet) -> Verdict:
    """``f . pat`` lands in ``target`` (pat is an element, or a term with generics)."""
    if env is None:
        return _apply_into(ctx, f, pat, target)
    return _open_impl(ctx, T.app(ctx.pca.to_term(f), pat), env, target)


def _instances(ctx: Ctx, R: RSet):
    """Patterns covering R: (pattern, env) with env None for concrete elements."""
    pca = ctx.pca
    if R.finite:
        return [(s, None) for s in R.elements]
    if pca.symbolic:
        pats = generics(R, pca)
        if pats is not None:
            return [(p, env) if env else (pca.from_term(p), None) for p, env in pats]
    return None


def _concretize(ctx: Ctx, pat, env):
    """Concrete instances of an open pattern (for refutation)."""
    pca = ctx.pca
    names = sorted(g for g in pat.fv if g in env)
    per = max(2, int(ctx.samples ** (1 / max(1, len(names)))))
    pools = [samples_of(ctx, env[g], per) for g in names]
    for combo in itertools.islice(itertools.product(*pools), ctx.samples):
        u = pat
        for g, val in zip(names, combo):
            u = T.substitute(u, g, pca.to_term(val))
        try:
            yield pca.from_term(T.normalize(u, T.Fuel(ctx.fuel)))
        except T.OutOfFuel:
            continue


def _point_case(ctx, w, phi, psi, x, s, env) -> Verdict:
    """Some y works for the realizer (pattern) s of x."""
    failures = 0
    unknown = None
    for y in psi.carrier:
        v1 = _maps_into(ctx, w.l1, s, env, psi.assembly.realize(y))
        if v1.fails:
            failures += 1
            continue
        v2 = _maps_into(ctx, w.l2, s, env, arrow(psi.at(y), phi.at(x)))
        if v1.holds and v2.holds:
            return Holds(f"{x!r} reduces to {y!r}", {"point": x, "target": y})
        if v2.fails:
            failures += 1
        elif unknown is None:
            unknown = v2 if v2.unknown else v1
    if failures == len(psi.carrier):
        return Fails(f"no instance of the right side serves {x!r}", {"point": x})
    return unknown or Unknown("undecided")


def check_reduction(phi: RzPredicate, psi: RzPredicate, w: Witness,
                    fuel: int = 10_000, samples: int = 64) -> Verdict:
    if phi.is_bottom:
        return Holds("left side is the bottom predicate")
    pca = _pca_of(phi, psi)
    check_witness(pca, w)
    if psi.is_bottom:
        x = phi.carrier[0]
        return Fails("nothing reduces to the bottom predicate", {"point": x})
    ctx = Ctx(pca, fuel, samples)
    out = []
    for x in phi.carrier:
        R = phi.assembly.realize(x)
        cases = _instances(ctx, R)
        if cases is None:
            v = _sampled_point(ctx, w, phi, psi, x, R)
            if v.fails:
                return v
            out.append(v)
            continue
        for s, env in cases:
            v = _point_case(ctx, w, phi, psi, x, s, env)
            if v.fails and env is not None:
                v = _refute_open(ctx, w, phi, psi, x, s, env)
            if v.fails:
                if env is None:
                    v = Fails(v.detail, {"point": x, "realizer": s, "fuel": fuel})
                return v
            out.append(v)
    return all_of(out, "reduction verified")


def _refute_open(ctx, w, phi, psi, x, pat, env) -> Verdict:
    for s in _concretize(ctx, pat, env):
        v = _point_case(ctx, w, phi, psi, x, s, None)
        if v.fails:
            return Fails(v.detail, {"point": x, "realizer": s, "fuel": ctx.fuel})
    return Unknown("different realizers need different instances; no single failing realizer sampled")


def _sampled_point(ctx, w, phi, psi, x, R) -> Verdict:
    for s in samples_of(ctx, R, ctx.samples):
        v = _point_case(ctx, w, phi, psi, x, s, None)
        if v.fails:
            return Fails(v.detail, {"point": x, "realizer": s, "fuel": ctx.fuel})
    return Unknown(f"realizers of {x!r} are not enumerable; no counterexample sampled")


def recheck_case(phi, psi, w, x, s, fuel: int = 10_000) -> Verdict:
    """Re-run a single (point, realizer) case of :func:`check_reduction`."""
    ctx = Ctx(phi.pca, fuel)
    return _point_case(ctx, w, phi, psi, x, s, None)


# ----------------------------------------------------------------------------
# search


@dataclass
class SearchResult:
    witness: Optional[Witness]
    verdict: Verdict
    tried: int = 0
    diagnostic: str = ""

    @property
    def found(self) -> bool:
        return self.witness is not None


def _l1_ok(ctx, phi, psi, l1) -> bool:
    """Condition on l1 alone: every realizer of every x lands in some psi point."""
    for x in phi.carrier:
        R = phi.assembly.realize(x)
        cases = _instances(ctx, R)
        if cases is None:
            cases = [(s, None) for s in samples_of(ctx, R, 8)]
        for s, env in cases:
            if all(_maps_into(ctx, l1, s, env, psi.assembly.realize(y)).fails for y in psi.carrier):
                return False
    return True


def search_reduction(phi: RzPredicate, psi: RzPredicate, search_depth: int = 2000,
                     fuel: int = 10_000, samples: int = 64, hints: Sequence[Witness] = ()) -> SearchResult:
    """First witness (hints first, then Cantor order over the sub-PCA enumeration)."""
    if phi.is_bottom:
        pca = _pca_of(psi)
        i = pca.i if pca is not None else None
        return SearchResult(Witness(i, i), Holds("left side is the bottom predicate"), 0)
    pca = _pca_of(phi, psi)
    if psi.is_bottom:
        return SearchResult(None, Fails("nothing reduces to the bottom predicate"), 0)
    tried = 0
    for w in hints:
        tried += 1
        v = check_reduction(phi, psi, w, fuel, samples)
        if v.holds:
            return SearchResult(w, v, tried)
    ctx = Ctx(pca, fuel, samples)
    l1_cache = {}
    last = None
    for k in range(search_depth):
        i, j = _cantor(k)
        l1, l2 = pca.enum_sub(i), pca.enum_sub(j)
        if l1 is None or l2 is None:
            continue
        tried += 1
        if i not in l1_cache:
            l1_cache[i] = _l1_ok(ctx, phi, psi, l1)
        if not l1_cache[i]:
            continue
        w = Witness(l1, l2)
        v = check_reduction(phi, psi, w, fuel, samples)
        if v.holds:
            return SearchResult(w, v, tried)
        last = v
    why = f"no witness among {tried} candidates"
    return SearchResult(None, Unknown(why), tried, last.detail if last is not None else "")


def _cantor(k: int):
    from .numbering import cantor_unpair
    return cantor_unpair(k)


# ----------------------------------------------------------------------------
# small combinator library (built by bracket abstraction)


def numeral_case(pca: Pca, n, branches):
    """Expression selecting ``branches[n]`` for the numeral n (term models)."""
    if len(branches) == 1:
        return branches[0]
    rest = numeral_case(pca, ap(pca.snd, n), branches[1:])
    return ap(n, pca.k, branches[0], rest)


def tuple_expr(pca: Pca, items):
    if len(items) == 1:
        return items[0]
    return ap(pca.pair, items[0], tuple_expr(pca, items[1:]))


def proj_expr(pca: Pca, i: int, k: int, e):
    for _ in range(i):
        e = ap(pca.snd, e)
    return e if i == k - 1 else ap(pca.fst, e)


def identity_witness(pca: Pca) -> Witness:
    s, p = Hole("s"), Hole("p")
    return Witness(pca.bracket("s", s), pca.bracket(["s", "p"], p))


def compose(pca: Pca, w1: Witness, w2: Witness) -> Witness:
    """Witness for phi <= chi from w1: phi <= psi and w2: psi <= chi."""
    s, p = Hole("s"), Hole("p")
    l1 = pca.bracket("s", ap(w2.l1, ap(w1.l1, s)))
    l2 = pca.bracket(["s", "p"], ap(w1.l2, s, ap(w2.l2, ap(w1.l1, s), p)))
    return Witness(l1, l2)


def lem_witness(pca: Pca) -> Witness:
    return Witness(ap_value(pca, pca.k, pca.k), ap_value(pca, pca.k, pca.snd))


def ap_value(pca: Pca, f, *args):
    out = pca.apply_many(f, *args)
    if not out.converged:
        raise PcaError("combinator application did not converge")
    return out.value


# ----------------------------------------------------------------------------
# lattice operations


def sup2(phi: RzPredicate, psi: RzPredicate) -> RzPredicate:
    if phi.is_bottom:
        return psi
    if psi.is_bottom:
        return phi
    C = coproduct(phi.assembly, psi.assembly)
    return RzPredicate(C, lambda u: (phi if u[0] == 0 else psi).at(u[1]), f"({phi.name} v {psi.name})")


def inf2(phi: RzPredicate, psi: RzPredicate) -> RzPredicate:
    if phi.is_bottom or psi.is_bottom:
        return phi if phi.is_bottom else psi
    P = product(phi.assembly, psi.assembly)
    pca = P.pca
    return RzPredicate(P, lambda u: disj_sets(pca, phi.at(u[0]), psi.at(u[1])), f"({phi.name} ^ {psi.name})")


def inclusion_witnesses(pca: Pca):
    """(phi <= phi v psi, psi <= phi v psi)."""
    s, p = Hole("s"), Hole("p")
    idp = pca.bracket(["s", "p"], p)
    return tuple(Witness(pca.bracket("s", ap(pca.pair, pca.numeral(n), s)), idp) for n in (0, 1))


def projection_witnesses(pca: Pca):
    """(phi ^ psi <= phi, phi ^ psi <= psi)."""
    p = Hole("p")
    return tuple(
        Witness(proj, pca.bracket(["s", "p"], ap(pca.pair, pca.numeral(n), p)))
        for n, proj in ((0, pca.fst), (1, pca.snd))
    )


def copair_witness(pca: Pca, wa: Witness, wb: Witness) -> Witness:
    """phi v psi <= theta from phi <= theta and psi <= theta (case on the tag)."""
    s, p = Hole("s"), Hole("p")
    tag, body = ap(pca.fst, s), ap(pca.snd, s)
    l1 = pca.bracket("s", numeral_case(pca, tag, [ap(wa.l1, body), ap(wb.l1, body)]))
    l2 = pca.bracket(["s", "p"], numeral_case(pca, tag, [ap(wa.l2, body, p), ap(wb.l2, body, p)]))
    return Witness(l1, l2)


def pair_witness(pca: Pca, wa: Witness, wb: Witness) -> Witness:
    """theta <= phi ^ psi from theta <= phi and theta <= psi."""
    s, p = Hole("s"), Hole("p")
    l1 = pca.bracket("s", ap(pca.pair, ap(wa.l1, s), ap(wb.l1, s)))
    tag, body = ap(pca.fst, p), ap(pca.snd, p)
    l2 = pca.bracket(["s", "p"], numeral_case(pca, tag, [ap(wa.l2, s, body), ap(wb.l2, s, body)]))
    return Witness(l1, l2)


def distributivity_witness(pca: Pca) -> Witness:
    """(phi v psi) ^ theta <= (phi ^ theta) v (psi ^ theta) by the canonical isomorphism."""
    s, p = Hole("s"), Hole("p")
    l1 = pca.bracket("s", ap(pca.pair, ap(pca.fst, ap(pca.fst, s)),
                             ap(pca.pair, ap(pca.snd, ap(pca.fst, s)), ap(pca.snd, s))))
    return Witness(l1, pca.bracket(["s", "p"], p))


def distributivity_instance(phi, psi, theta):
    """Both sides of the distributive law, with the point map between carriers."""
    lhs = inf2(sup2(phi, psi), theta)
    rhs = sup2(inf2(phi, theta), inf2(psi, theta))
    return lhs, rhs


def _index_assembly(pca: Pca, k: int) -> Assembly:
    return nat_assembly(pca, k)


def sup_family(family: Sequence[RzPredicate]) -> RzPredicate:
    """Supremum over the coproduct, indexed by 0..k-1 realized by numerals."""
    family = [f for f in family if not f.is_bottom]
    if not family:
        from .logic import bottom_predicate
        return bottom_predicate("sup()")
    pca = _pca_of(*family)
    index = _index_assembly(pca, len(family))
    C = coproduct_family(index, {i: f.assembly for i, f in enumerate(family)})
    return RzPredicate(C, lambda u: family[u[0]].at(u[1]), "sup[" + ",".join(f.name for f in family) + "]")


def _nonempty_subsets(xs):
    xs = list(xs)
    for r in range(1, len(xs) + 1):
        yield from itertools.combinations(xs, r)


def _tuple_set(pca, sets):
    """Realizers of a tuple: right-nested pairs of members of ``sets``."""
    if len(sets) == 1:
        return sets[0]
    return paired(pca, sets[0], _tuple_set(pca, sets[1:]))


def inf_family(family: Sequence[RzPredicate], max_index: int = 3, max_carrier: int = 3) -> RzPredicate:
    """Infimum over tuples of inhabited subsets.

    A tuple (U_0, ..., U_{k-1}) is realized by a tuple of realizers of
    members u_i in U_i; the fiber is ``exists i, exists x in U_i, phi_i(x)``.
    """
    if len(family) > max_index or any(len(f.carrier) > max_carrier for f in family):
        raise ResourceError("inf_family size guard exceeded")
    if not family:
        raise ResourceError("empty family")
    if any(f.is_bottom for f in family):
        return next(f for f in family if f.is_bottom)
    pca = _pca_of(*family)
    carrier = list(itertools.product(*(list(_nonempty_subsets(f.carrier)) for f in family)))
    realize = {
        g: _tuple_set(pca, [union(*(f.assembly.realize(x) for x in U)) for f, U in zip(family, g)])
        for g in carrier
    }
    A = Assembly(pca, carrier, realize, "InfCarrier")

    def fiber(g):
        return union(*(
            paired(pca, finite([pca.numeral(i)]), paired(pca, f.assembly.realize(x), f.at(x)))
            for i, (f, U) in enumerate(zip(family, g)) for x in U
        ))

    return RzPredicate(A, fiber, "inf[" + ",".join(f.name for f in family) + "]")


def inf_family_simple(family: Sequence[RzPredicate]) -> RzPredicate:
    """Infimum over the plain product: ``exists i, phi_i(f(i))``."""
    if any(f.is_bottom for f in family):
        return next(f for f in family if f.is_bottom)
    pca = _pca_of(*family)
    carrier = list(itertools.product(*(f.carrier for f in family)))
    realize = {g: _tuple_set(pca, [f.assembly.realize(x) for f, x in zip(family, g)]) for g in carrier}
    A = Assembly(pca, carrier, realize, "Prod")

    def fiber(g):
        return union(*(paired(pca, finite([pca.numeral(i)]), f.at(x))
                       for i, (f, x) in enumerate(zip(family, g))))

    return RzPredicate(A, fiber, "inf0[" + ",".join(f.name for f in family) + "]")


def family_witnesses(pca: Pca, k: int):
    """Canonical witnesses between inf_family_simple and inf_family for k indices."""
    s, p = Hole("s"), Hole("p")
    tag, body = ap(pca.fst, p), ap(pca.snd, p)
    # simple <= full: same tuple; strip the member realizer
    simple_to_full = Witness(pca.bracket("s", s), pca.bracket(
        ["s", "p"], ap(pca.pair, tag, ap(pca.snd, body))))
    # full <= simple: same tuple; supply the member realizer for the chosen index
    branches = [ap(pca.pair, pca.numeral(i), ap(pca.pair, proj_expr(pca, i, k, s), body)) for i in range(k)]
    full_to_simple = Witness(pca.bracket("s", s), pca.bracket(["s", "p"], numeral_case(pca, tag, branches)))
    return simple_to_full, full_to_simple


def family_projection_witness(pca: Pca, j: int, k: int) -> Witness:
    """inf_family <= phi_j: take the j-th component, tag the answer."""
    s, p = Hole("s"), Hole("p")
    comp = proj_expr(pca, j, k, s)
    return Witness(pca.bracket("s", comp), pca.bracket(
        ["s", "p"], ap(pca.pair, pca.numeral(j), ap(pca.pair, comp, p))))


# ----------------------------------------------------------------------------
# transfer along maps


class AssemblyMap:
    def __init__(self, S: Assembly, T_: Assembly, mapping, tracker=None,
                 search_depth: int = 500, fuel: int = 10_000):
        self.source, self.target = S, T_
        self.mapping = dict(mapping) if not callable(mapping) else {x: mapping(x) for x in S.carrier}
        if tracker is None:
            tracker = find_tracker(S, T_, self.mapping, search_depth, fuel)
            if tracker is None:
                raise AssemblyError("no tracker found for the map")
        elif not check_tracks(S, T_, self.mapping, tracker, fuel).holds:
            raise AssemblyError("the given element does not track the map")
        self.tracker = tracker

    def __call__(self, x):
        return self.mapping[x]

    @property
    def surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.target.carrier)


def transfer_pullback(f: AssemblyMap, psi: RzPredicate) -> RzPredicate:
    return RzPredicate(f.source, lambda x: psi.at(f(x)), f"f*{psi.name}")


def _eq(f, x, y):
    return ALL if f(x) == y else EMPTY


def transfer_forall(f: AssemblyMap, phi: RzPredicate) -> RzPredicate:
    S = f.source
    return RzPredicate(
        f.target,
        lambda y: meet(*(arrow(S.realize(x), arrow(_eq(f, x, y), phi.at(x))) for x in S.carrier)),
        f"forall_f {phi.name}",
    )


def transfer_exists(f: AssemblyMap, phi: RzPredicate) -> RzPredicate:
    S = f.source
    pca = S.pca
    return RzPredicate(
        f.target,
        lambda y: union(*(paired(pca, S.realize(x), paired(pca, _eq(f, x, y), phi.at(x))) for x in S.carrier)),
        f"exists_f {phi.name}",
    )


def transfer_witnesses(f: AssemblyMap):
    """Witnesses for f*psi <= psi and phi <= forall_f phi."""
    pca = f.source.pca
    s, p = Hole("s"), Hole("p")
    pull = Witness(f.tracker, pca.bracket(["s", "p"], p))
    fa = Witness(f.tracker, pca.bracket(["s", "p"], ap(p, s, pca.i)))
    return pull, fa


# ----------------------------------------------------------------------------
# Heyting implication, parameterization, truth values


def implication_condition(phi: RzPredicate, psi: RzPredicate, theta: RSet) -> RSet:
    """Realizers of ``forall x:S exists y:T. psi(y) -> phi(x) v theta``."""
    pca = phi.pca
    S, Tt = phi.assembly, psi.assembly
    return meet(*(
        arrow(S.realize(x), union(*(
            paired(pca, Tt.realize(y), arrow(psi.at(y), disj_sets(pca, phi.at(x), theta)))
            for y in Tt.carrier
        )))
        for x in S.carrier
    ))


def heyting_impl_degree(phi: RzPredicate, psi: RzPredicate, theta_catalog: Sequence[RSet],
                        search_depth: int = 60, candidates: Sequence = (),
                        fuel: int = 10_000, samples: int = 64) -> RzPredicate:
    """Points (r, theta) with r realizing the implication condition; fiber theta.

    Candidate r are ``candidates`` followed by the first ``search_depth``
    sub-PCA elements, so the carrier under-approximates the true one.
    """
    pca = phi.pca
    ctx = Ctx(pca, fuel, samples)
    pool = list(candidates) + [pca.enum_sub(i) for i in range(search_depth)]
    seen, points = set(), []
    for j, theta in enumerate(theta_catalog):
        cond = implication_condition(phi, psi, theta)
        for r in pool:
            if r is None or (pca.key(r), j) in seen:
                continue
            if member(ctx, r, cond).holds:
                seen.add((pca.key(r), j))
                points.append((r, j))
    if not points:
        from .logic import bottom_predicate
        out = bottom_predicate(f"({phi.name} => {psi.name})")
        out.degenerate = True
        return out
    # labels (k, j): the k-th realizer found, paired with catalog entry j
    labels = [(k, j) for k, (_, j) in enumerate(points)]
    A = Assembly(pca, labels, {lab: finite([points[lab[0]][0]]) for lab in labels}, "Impl")
    out = RzPredicate(A, {lab: theta_catalog[lab[1]] for lab in labels}, f"({phi.name} => {psi.name})")
    out.degenerate = False
    return out


def curry_candidates(theta: RzPredicate, phi: RzPredicate, w: Witness):
    """From w: theta ^ phi <= psi, the realizers r_z (one per realizer of z)."""
    pca = phi.pca
    s, q = Hole("sx"), Hole("q")
    out = []
    for z in theta.carrier:
        R = theta.assembly.realize(z)
        if not R.finite:
            raise AssemblyError("curry needs finitely many realizers per point")
        for sz in R.elements:
            u = ap(pca.pair, sz, s)
            d = ap(w.l2, u, q)
            swapped = numeral_case(pca, ap(pca.fst, d), [
                ap(pca.pair, pca.numeral(1), ap(pca.snd, d)),
                ap(pca.pair, pca.numeral(0), ap(pca.snd, d)),
            ])
            r = pca.bracket("sx", ap(pca.pair, ap(w.l1, u), _lam(pca, "q", swapped)))
            out.append((z, sz, r))
    return out


def _lam(pca, name, e):
    """Expression for ``[name] e`` usable inside a larger bracket expression."""
    return pca.translate(name, e)


def curry_witness(theta: RzPredicate, phi: RzPredicate, w: Witness) -> Witness:
    """theta <= (phi => psi) from w: theta ^ phi <= psi."""
    pca = phi.pca
    sz, sx, q = Hole("sz"), Hole("sx"), Hole("q")
    u = ap(pca.pair, sz, sx)
    d = ap(w.l2, u, q)
    swapped = numeral_case(pca, ap(pca.fst, d), [
        ap(pca.pair, pca.numeral(1), ap(pca.snd, d)),
        ap(pca.pair, pca.numeral(0), ap(pca.snd, d)),
    ])
    inner = ap(pca.pair, ap(w.l1, u), _lam(pca, "q", swapped))
    l1 = pca.bracket("sz", _lam(pca, "sx", inner))
    return Witness(l1, pca.bracket(["s", "p"], Hole("p")))


def uncurry_witness(pca: Pca, w: Witness) -> Witness:
    """theta ^ phi <= psi from w: theta <= (phi => psi)."""
    u, p = Hole("u"), Hole("p")
    sz, sx = ap(pca.fst, u), ap(pca.snd, u)
    rs = ap(w.l1, sz, sx)
    l1 = pca.bracket("u", ap(pca.fst, rs))
    d = ap(pca.snd, rs, p)
    l2 = pca.bracket(["u", "p"], numeral_case(pca, ap(pca.fst, d), [
        ap(pca.pair, pca.numeral(1), ap(pca.snd, d)),
        ap(pca.pair, pca.numeral(0), ap(w.l2, sz, ap(pca.snd, d))),
    ]))
    return Witness(l1, l2)


def parameterize(phi: RzPredicate, k) -> RzPredicate:
    """phi^I for a finite I (an int k or a list of index labels)."""
    index = list(range(k)) if isinstance(k, int) else list(k)
    if not index:
        raise AssemblyError("index set must be inhabited")
    pca = phi.pca
    S = phi.assembly
    carrier = list(itertools.product(S.carrier, repeat=len(index)))
    A = Assembly(pca, carrier, {t: _tuple_set(pca, [S.realize(x) for x in t]) for t in carrier}, f"{S.name}^{len(index)}")
    return RzPredicate(A, lambda t: _tuple_set(pca, [phi.at(x) for x in t]), f"{phi.name}^{len(index)}")


def constant_tuple_witness(pca: Pca, k: int) -> Witness:
    s, p = Hole("s"), Hole("p")
    return Witness(pca.bracket("s", tuple_expr(pca, [s] * k)),
                   pca.bracket(["s", "p"], proj_expr(pca, 0, k, p)))


def embed_truth_anti(pca: Pca, theta: RSet) -> RzPredicate:
    """The one-point predicate with fiber theta."""
    return RzPredicate(nabla(pca, ["*"], "1"), {"*": theta}, f"hat({theta!r})")


def embed_truth_monotone(pca: Pca, theta: RSet) -> RzPredicate:
    """Truth on the subsingleton {* | theta}: one point realized by theta."""
    if is_empty(theta, Ctx(pca)) is True:
        from .logic import bottom_predicate
        return bottom_predicate("T(empty)")
    return RzPredicate(Assembly(pca, ["*"], {"*": theta}, "sub1"), {"*": ALL}, f"T({theta!r})")


def true_one(pca: Pca) -> RzPredicate:
    return top(nabla(pca, ["*"], "1"))


def top_degree(pca: Pca) -> RzPredicate:
    return bot(nabla(pca, ["*"], "1"))


def lem_predicate(pca: Pca, catalog: Sequence[RSet]) -> RzPredicate:
    """Excluded middle lifted to the nabla of a finite catalog of truth values."""
    cat = []
    for th in catalog:
        if th not in cat:
            cat.append(th)
    zero, one = finite([pca.numeral(0)]), finite([pca.numeral(1)])

    ctx = Ctx(pca)

    def fiber(th):
        return paired(pca, zero, ALL) if is_empty(th, ctx) is True else paired(pca, one, th)

    return RzPredicate(nabla(pca, cat, "nablaP"), fiber, "LEM")


def default_catalog(*preds) -> list:
    out = [EMPTY, ALL]
    for p in preds:
        for f in p.fibers():
            if f not in out:
                out.append(f)
    return out


# ----------------------------------------------------------------------------
# classification


def is_top(phi: RzPredicate, search_depth: int = 200) -> Verdict:
    """A counter-example x (empty fiber) realized by some sub-PCA element."""
    if phi.is_bottom:
        return Fails("bottom predicate")
    pca = phi.pca
    ctx = Ctx(pca)
    pending = []
    for x in phi.carrier:
        e = is_empty(phi.at(x), ctx)
        if e is False:
            continue
        R = phi.assembly.realize(x)
        r = _sub_member(ctx, R, search_depth)
        if r is not None and e is True:
            return Holds(f"counter-example {x!r}", {"point": x, "realizer": r})
        if e is True and R.finite:
            continue  # decided: no sub-PCA realizer
        pending.append(x)
    if pending:
        return Unknown(f"undecided at {pending}")
    return Fails("no counter-example with a sub-PCA realizer")


def _sub_member(ctx, R, depth):
    pca = ctx.pca
    if R is ALL:
        return pca.i
    if R.finite:
        return next((r for r in R.elements if pca.in_sub(r)), None)
    for i in range(depth):
        r = pca.enum_sub(i)
        if r is None:
            break
        if member(ctx, r, R).holds:
            return r
    return None


def below_true_one(phi: RzPredicate, search_depth: int = 2000,
                   fuel: int = 10_000, samples: int = 64) -> Verdict:
    """phi <= 1: a sub-PCA realizer of ``forall x. phi(x)``."""
    if phi.is_bottom:
        return Holds("bottom")
    pca = phi.pca
    ctx = Ctx(pca, fuel, samples)
    goal = forall_unary(phi.assembly, phi)
    if is_empty(goal, ctx) is True:
        return Fails("some point has an empty fiber")
    for i in range(search_depth):
        r = pca.enum_sub(i)
        if r is None:
            break
        if member(ctx, r, goal).holds:
            return Holds(f"realizer {pca.show(r)}", {"realizer": r})
    return Unknown(f"no realizer among {search_depth} candidates")


def top_certificate(phi: RzPredicate, search_depth: int = 2000, fuel: int = 10_000,
                    samples: int = 16) -> SearchResult:
    """Search a witness for top <= phi (phi is the top degree)."""
    if phi.is_bottom:
        return SearchResult(None, Fails("bottom predicate"), 0)
    return search_reduction(top_degree(phi.pca), phi, search_depth, fuel, samples)


def classify(phi: RzPredicate, search_depth: int = 2000) -> dict:
    from .logic import is_dense
    return {
        "is_bottom": Holds("empty carrier") if phi.is_bottom else Fails("carrier inhabited"),
        "is_top": is_top(phi, min(search_depth, 200)),
        "is_dense": is_dense(phi),
        "below_true_one": below_true_one(phi, search_depth),
    }


@dataclass
class Degree:
    representative: RzPredicate
    tags: dict = field(default_factory=dict)

    def classify(self, search_depth: int = 2000) -> dict:
        if not self.tags:
            self.tags = classify(self.representative, search_depth)
        return self.tags


def drinker_check(values: dict) -> Verdict:
    """Classical finite check of the drinker equivalence on an inhabited set.

    ``values`` maps points to booleans.  The left side compares the degree of
    the anti-embedded ``forall x phi`` with the supremum of the anti-embedded
    ``phi(x)``; the right side is ``exists x (phi(x) -> forall y phi(y))``.
    """
    from .smyth import classical_degree, classical_sup
    if not values:
        raise AssemblyError("drinker check needs an inhabited set")
    every = all(values.values())
    lhs_a = classical_degree({"*": every})
    lhs_b = classical_sup([classical_degree({"*": v}) for v in values.values()])
    equivalent = lhs_a == lhs_b
    drinker = any((not v) or every for v in values.values())
    if equivalent == drinker:
        return Holds("both sides agree", {"equivalent": equivalent, "drinker": drinker})
    return Fails("the two sides disagree", {"equivalent": equivalent, "drinker": drinker})
