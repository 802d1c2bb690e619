"""Extended and ordinary Weihrauch predicates.

An extended predicate maps each element r to a finite family of realizer
sets (``[]`` outside the support).  Elements are not enumerable in
general, so every predicate carries a finite list of *probes*; verdicts
about reductions are relative to those probes.
"""
from __future__ import annotations

import json
from typing import Callable, Optional, Sequence

from . import k2 as K2
from .assemblies import Assembly, AssemblyError, rset_from_json, rset_to_json
from .degrees import SearchResult, Witness, check_witness, _cantor
from .logic import RzPredicate, tagged
from .pca import Pca, PcaError, Undefined
from .rsets import (
    ALL, EMPTY, ByPredicate, Ctx, Fails, Finite, RSet, Unknown, Verdict,
    all_of, finite, is_empty, member, realizes_impl,
)

# rule results: a list of sets, or None when undecided
Rule = Callable[[object], Optional[list]]


class ExtWPredicate:
    """``at(r)`` is a list of realizer sets; ``options(r)`` lists the possible
    values of ``at(r)`` when it cannot be computed."""

    def __init__(self, pca: Pca, probes: Sequence, rule: Rule, name: str = "f",
                 options: Callable = None, modest: bool = False, dense: bool = False):
        self.pca, self.name = pca, name
        self.probes = _dedupe(pca, probes)
        self._rule = rule
        self._options = options or (lambda r: None)
        # facts that hold at every element, not just the probes
        self.always_modest, self.always_dense = modest, dense

    def at(self, r) -> Optional[list]:
        out = self._rule(r)
        return None if out is None else _uniq(out)

    def options(self, r) -> Optional[list]:
        v = self.at(r)
        if v is not None:
            return [v]
        return self._options(r)

    def support(self):
        return [r for r in self.probes if self.at(r)]

    def __repr__(self):
        return f"ExtWPredicate({self.name})"


def _uniq(sets):
    out = []
    for s in sets:
        if s not in out:
            out.append(s)
    return out


def _dedupe(pca, xs):
    seen, out = set(), []
    for x in xs:
        k = pca.key(x)
        if k not in seen:
            seen.add(k)
            out.append(x)
    return out


def table_predicate(pca: Pca, table: Sequence, probes: Sequence = (), name: str = "f") -> ExtWPredicate:
    """From ``[(r, [theta, ...]), ...]``; elements not listed are outside the support."""
    fib = {pca.key(r): _uniq(thetas) for r, thetas in table}
    return ExtWPredicate(pca, [r for r, _ in table] + list(probes),
                         lambda r: fib.get(pca.key(r), []), name)


def same(f: ExtWPredicate, g: ExtWPredicate) -> bool:
    """Equality of fibers on the union of both probe sets."""
    for r in _dedupe(f.pca, list(f.probes) + list(g.probes)):
        a, b = f.at(r), g.at(r)
        if a is None or b is None or set(a) != set(b):
            return False
    return True


class OrdWPredicate:
    """A relation given by its sections ``U[r]`` on a probe list."""

    def __init__(self, pca: Pca, probes: Sequence, section: Callable, name: str = "U"):
        self.pca, self.name = pca, name
        self.probes = _dedupe(pca, probes)
        self._section = section

    def section(self, r) -> RSet:
        return self._section(r)

    def support(self):
        ctx = Ctx(self.pca)
        return [r for r in self.probes if is_empty(self.section(r), ctx) is False]


def ord_table(pca: Pca, table: Sequence, probes: Sequence = (), name: str = "U") -> OrdWPredicate:
    sec = {pca.key(r): R for r, R in table}
    return OrdWPredicate(pca, [r for r, _ in table] + list(probes),
                         lambda r: sec.get(pca.key(r), EMPTY), name)


def same_ord(U: OrdWPredicate, V: OrdWPredicate) -> bool:
    return all(U.section(r) == V.section(r) for r in _dedupe(U.pca, list(U.probes) + list(V.probes)))


# ----------------------------------------------------------------------------
# reductions


def _show(pca, e) -> str:
    n = pca.numeral_decode(e)
    return f"{n}̄" if n is not None else pca.show(e)


def _conflict(ctx, thetas) -> Optional[str]:
    """Two disjoint singleton demands on the answer b from a single answer set."""
    singles = [t for t in thetas if isinstance(t, Finite) and len(t.elements) == 1]
    for i, a in enumerate(singles):
        for c in singles[i + 1:]:
            if ctx.pca.equal(a.elements[0], c.elements[0]) is False:
                u, v = _show(ctx.pca, a.elements[0]), _show(ctx.pca, c.elements[0])
                return f"requires both ℓ₂(α,b) = {u} and ℓ₂(α,b) = {v}"
    return None


def _second_condition(ctx, l2r, thetas, xis) -> Verdict:
    out = []
    for th in thetas:
        vs = [realizes_impl(ctx, l2r, xi, th) for xi in xis]
        if any(v.holds for v in vs):
            continue
        if all(v.fails for v in vs):
            return Fails("no answer set serves a demanded set", {"theta": th})
        out.append(Unknown("undecided answer set"))
    return all_of(out)


def check_ext_reduction(f: ExtWPredicate, g: ExtWPredicate, w: Witness,
                        fuel: int = 10_000, samples: int = 64) -> Verdict:
    pca = f.pca
    if g.pca is not pca:
        raise AssemblyError("predicates live over different PCAs")
    check_witness(pca, w)
    ctx = Ctx(pca, fuel, samples)
    out = []
    for r in f.probes:
        thetas = f.at(r)
        if thetas is None:
            out.append(Unknown(f"fiber of {f.name} undecided at a probe"))
            continue
        if not thetas:
            continue
        a = pca.apply(w.l1, r, fuel)
        if not a.converged:
            if isinstance(a, Undefined):
                return Fails("l1 undefined on a probe", {"probe": r})
            out.append(Unknown("l1 ran out of fuel"))
            continue
        r2 = a.value
        opts = g.options(r2)
        l2r = None
        if opts is None:
            out.append(Unknown(f"fiber of {g.name} undecided"))
            continue
        per = []
        for xis in opts:
            if not xis:
                per.append(Fails("l1 leaves the support", {"probe": r}))
                continue
            if len(xis) == 1 and is_empty(xis[0], ctx) is False:
                why = _conflict(ctx, thetas)
                if why is not None:
                    per.append(Fails(why, {"probe": r, "conflict": why}))
                    continue
            if l2r is None:
                l2r = pca.apply(w.l2, r, fuel)
            if not l2r.converged:
                per.append(Unknown("l2 did not converge") if not isinstance(l2r, Undefined)
                           else Fails("l2 undefined on a probe", {"probe": r}))
                continue
            per.append(_second_condition(ctx, l2r.value, thetas, xis))
        if all(v.fails for v in per):
            v = per[0]
            return Fails(v.detail, {**(v.data or {}), "probe": r})
        if all(v.holds for v in per):
            continue
        out.append(Unknown("the answer depends on an undecided fiber"))
    return all_of(out, f"verified on {len(f.probes)} probes")


def forced_conflict(f: ExtWPredicate, g: ExtWPredicate) -> Optional[Verdict]:
    """Witness-independent refutation.

    If every fiber of g is a single inhabited set, the one answer b it
    supplies must land in every set demanded by f; two disjoint demands
    rule out any l2.
    """
    if not (g.always_modest and g.always_dense):
        return None
    ctx = Ctx(f.pca)
    for r in f.support():
        why = _conflict(ctx, f.at(r))
        if why is not None:
            return Fails(why, {"probe": r, "conflict": why})
    return None


def search_ext_reduction(f: ExtWPredicate, g: ExtWPredicate, search_depth: int = 400,
                         fuel: int = 10_000, samples: int = 32, hints: Sequence[Witness] = ()) -> SearchResult:
    pca = f.pca
    tried, last = 0, None
    for w in hints:
        tried += 1
        v = check_ext_reduction(f, g, w, fuel, samples)
        if v.holds:
            return SearchResult(w, v, tried)
    for k in range(search_depth):
        i, j = _cantor(k)
        l1, l2 = pca.enum_sub(i), pca.enum_sub(j)
        if l1 is None or l2 is None:
            continue
        tried += 1
        w = Witness(l1, l2)
        v = check_ext_reduction(f, g, w, fuel, samples)
        if v.holds:
            return SearchResult(w, v, tried)
        last = v
    forced = forced_conflict(f, g)
    if forced is not None:
        return SearchResult(None, forced, tried, forced.detail)
    diag = last.detail if last is not None else ""
    return SearchResult(None, Unknown(f"no witness among {tried} candidates"), tried, diag)


def check_ord_reduction(U: OrdWPredicate, V: OrdWPredicate, w: Witness,
                        fuel: int = 10_000, samples: int = 64) -> Verdict:
    pca = U.pca
    check_witness(pca, w)
    ctx = Ctx(pca, fuel, samples)
    out = []
    for r in U.probes:
        e = is_empty(U.section(r), ctx)
        if e is True:
            continue
        if e is None:
            out.append(Unknown("support undecided at a probe"))
            continue
        a = pca.apply(w.l1, r, fuel)
        if not a.converged:
            out.append(Unknown("l1 ran out of fuel"))
            continue
        sec = V.section(a.value)
        if is_empty(sec, ctx) is True:
            return Fails("l1 leaves the support", {"probe": r})
        l2r = pca.apply(w.l2, r, fuel)
        if not l2r.converged:
            out.append(Unknown("l2 did not converge"))
            continue
        v = realizes_impl(ctx, l2r.value, sec, U.section(r))
        if v.fails:
            return Fails(v.detail, {**(v.data or {}), "probe": r})
        out.append(v)
    return all_of(out, f"verified on {len(U.probes)} probes")


# ----------------------------------------------------------------------------
# the correspondence with instance reducibility


def to_instance(f: ExtWPredicate) -> RzPredicate:
    """Partitioned assembly of pairs (r, theta) with theta in f(r); fiber theta."""
    pca = f.pca
    labels, realize = [], {}
    for i, r in enumerate(f.probes):
        thetas = f.at(r)
        if thetas is None:
            raise AssemblyError("fiber undecided at a probe")
        for th in thetas:
            lab = (i, th)
            labels.append(lab)
            realize[lab] = finite([r])
    if not labels:
        from .logic import bottom_predicate
        return bottom_predicate(f.name)
    S = Assembly(pca, labels, realize, f"S_{f.name}")
    return RzPredicate(S, lambda lab: lab[1], f.name)


def from_instance(phi: RzPredicate, name: str = None) -> ExtWPredicate:
    """``r |-> {phi(x) | r realizes x}``; probes are the listed realizers."""
    if phi.is_bottom:
        raise AssemblyError("the bottom predicate has no realizers to probe")
    pca = phi.pca
    S = phi.assembly
    probes, table = [], {}
    for x in S.carrier:
        R = S.realize(x)
        if not isinstance(R, Finite):
            raise AssemblyError("from_instance needs finitely many realizers per point")
        for r in R.elements:
            probes.append(r)
            table.setdefault(pca.key(r), []).append(phi.at(x))
    return ExtWPredicate(pca, probes, lambda r: table.get(pca.key(r), []), name or phi.name)


def embed_ordinary(U: OrdWPredicate) -> ExtWPredicate:
    ctx = Ctx(U.pca)

    def rule(r):
        R = U.section(r)
        e = is_empty(R, ctx)
        return None if e is None else ([] if e else [R])

    return ExtWPredicate(U.pca, U.probes, rule, U.name + "^e")


def is_modest_ext(f: ExtWPredicate) -> Verdict:
    out = []
    for r in f.probes:
        v = f.at(r)
        if v is None:
            out.append(Unknown("fiber undecided"))
        elif len(v) > 1:
            return Fails(f"{len(v)} sets at one probe", {"probe": r, "count": len(v)})
    return all_of(out, f"at most one set at each of {len(f.probes)} probes")


def is_dense_ext(f: ExtWPredicate) -> Verdict:
    ctx = Ctx(f.pca)
    out = []
    for r in f.probes:
        v = f.at(r)
        if v is None:
            out.append(Unknown("fiber undecided"))
            continue
        for th in v:
            e = is_empty(th, ctx)
            if e is True:
                return Fails("an empty set in a fiber", {"probe": r})
            if e is None:
                out.append(Unknown("cannot tell whether a set is inhabited"))
    return all_of(out, "all sets inhabited")


def project_ordinary(f: ExtWPredicate) -> OrdWPredicate:
    for check in (is_modest_ext, is_dense_ext):
        v = check(f)
        if not v.holds:
            raise AssemblyError(f"{check.__name__} does not hold: {v.detail}")
    return OrdWPredicate(f.pca, f.probes, lambda r: (f.at(r) or [EMPTY])[0], f.name.removesuffix("^e"))


# ----------------------------------------------------------------------------
# built-in predicates


def _need_k2(pca, what):
    if getattr(pca, "model", None) != "k2":
        raise PcaError(f"{what} needs the K2 model")


def lpo_probes(radius: int = 8, count: int = 10):
    """The all-zero table plus spiked tables, so both cases occur."""
    return [K2.Table({}, 0)] + [K2.Table({i % radius: 1 + i // radius}, 0) for i in range(count)]


def _all_zero(alpha) -> Optional[bool]:
    if isinstance(alpha, K2.Table):
        return alpha.default == 0 and not alpha.entries
    return None


def builtin_lpo(pca: Pca, probes=None) -> ExtWPredicate:
    _need_k2(pca, "LPO")
    zero, one = finite([pca.numeral(0)]), finite([pca.numeral(1)])

    def rule(a):
        z = _all_zero(a)
        return None if z is None else [zero if z else one]

    return ExtWPredicate(pca, probes or lpo_probes(), rule, "LPO",
                         options=lambda a: [[zero], [one]], modest=True, dense=True)


def builtin_wlem(pca: Pca, probes=None) -> ExtWPredicate:
    _need_k2(pca, "WLEM")
    sets = [finite([pca.numeral(0)]), finite([pca.numeral(1)])]
    return ExtWPredicate(pca, probes or lpo_probes(), lambda a: list(sets), "WLEM", dense=True)


def lpo_wlem_witness(pca: Pca) -> Witness:
    """LPO <= WLEM: pass the answer through."""
    return Witness(pca.i, pca.apply(pca.k, pca.i).value)


def computes_fn(pca: Pca, r, bound: int = 8, fuel: int = 10_000) -> RSet:
    """Elements that agree with r on numerals (checked up to ``bound``)."""

    def values(m):
        out = []
        for k in range(bound):
            o = pca.apply(m, pca.numeral(k), fuel)
            if not o.converged:
                return None
            n = pca.numeral_decode(o.value)
            if n is None:
                return None
            out.append(n)
        return out

    target = values(r)

    def test(m):
        vm = values(m)
        if vm is None or target is None:
            return None
        return None if vm == target else False

    return ByPredicate(test, lambda i: r if i == 0 else None, f"computes[{pca.show(r)}]")


def total_on_numerals(pca: Pca, r, bound: int = 8, fuel: int = 10_000) -> Optional[bool]:
    for k in range(bound):
        o = pca.apply(r, pca.numeral(k), fuel)
        if not o.converged:
            return False if isinstance(o, Undefined) else None
        if pca.numeral_decode(o.value) is None:
            return False
    return True


def builtin_ct(pca: Pca, probes: Sequence, bound: int = 8) -> ExtWPredicate:
    """Church's thesis as an extended predicate.

    In the term models an element computes its own function, so the codes
    of r's function are the elements computing it.  In K2 a Table has no
    code; a programmed stream is coded by the elements computing it.
    """
    model = getattr(pca, "model", "")

    def rule(r):
        if model == "k2":
            if isinstance(r, K2.Table):
                return [EMPTY]
            if isinstance(r, K2.Programmed):
                return [computes_fn(pca, r, bound)]
            return None
        t = total_on_numerals(pca, r, bound)
        if t is None:
            return None
        return [computes_fn(pca, r, bound)] if t else []

    return ExtWPredicate(pca, probes, rule, "CT")


def function_assembly(pca: Pca, fns: dict, bound: int = 8) -> Assembly:
    """Number-theoretic functions, realized by the elements computing them.

    ``fns`` maps labels to a representative element.
    """
    if getattr(pca, "model", "") == "k2":
        return Assembly(pca, list(fns), {f: finite([r]) for f, r in fns.items()}, "F")
    return Assembly(pca, list(fns), {f: computes_fn(pca, r, bound) for f, r in fns.items()}, "F")


def ct_predicate(F: Assembly, fns: dict, bound: int = 8) -> RzPredicate:
    """CT on F: the codes of f.  In K2 a Table has none."""
    pca = F.pca
    if getattr(pca, "model", "") == "k2":
        return RzPredicate(F, lambda f: EMPTY if isinstance(fns[f], K2.Table)
                           else computes_fn(pca, fns[f], bound), "CT")
    return RzPredicate(F, lambda f: F.realize(f), "CT")


def builtin_lem(pca: Pca, catalog: Sequence[RSet], probes: Sequence = None) -> ExtWPredicate:
    """Excluded middle over a catalog of truth values (realized by anything)."""
    fib = [tagged(pca, 0, ALL) if th is EMPTY else tagged(pca, 1, th) for th in catalog]
    probes = probes if probes is not None else list(pca.iter_sub(4))
    return ExtWPredicate(pca, probes, lambda r: list(fib), "LEM")


def builtin_medvedev_T(pca: Pca, theta: RSet, probes: Sequence = (), name: str = None) -> ExtWPredicate:
    ctx = Ctx(pca)
    base = list(theta.elements) if isinstance(theta, Finite) else []

    def rule(r):
        v = member(ctx, r, theta)
        return [ALL] if v.holds else [] if v.fails else None

    return ExtWPredicate(pca, base + list(probes), rule, name or f"T[{_desc(pca, theta)}]")


def builtin_medvedev_star(pca: Pca, theta: RSet, probes: Sequence = None, name: str = None) -> ExtWPredicate:
    probes = probes if probes is not None else list(pca.iter_sub(4))
    return ExtWPredicate(pca, probes, lambda r: [theta], name or f"star[{_desc(pca, theta)}]", modest=True)


def _desc(pca, R):
    from .rsets import describe
    return describe(R, pca.show)


# ----------------------------------------------------------------------------
# JSON


def ext_from_json(obj, pca: Pca, name: str = "f") -> ExtWPredicate:
    table = []
    for entry in obj["fibers"]:
        r = _elem(pca, entry["r"])
        table.append((r, [rset_from_json(t, pca) for t in entry["thetas"]]))
    probes = [_elem(pca, p) for p in obj.get("probes", [])]
    return table_predicate(pca, table, probes, obj.get("name", name))


def ext_to_json(f: ExtWPredicate):
    from .assemblies import _elem_json
    out = {"name": f.name, "fibers": [], "probes": []}
    for r in f.probes:
        thetas = f.at(r)
        if thetas:
            out["fibers"].append({"r": _elem_json(f.pca, r), "thetas": [rset_to_json(t, f.pca) for t in thetas]})
        else:
            out["probes"].append(_elem_json(f.pca, r))
    return out


def _elem(pca, e):
    from .assemblies import _elem as conv
    if isinstance(e, dict) and getattr(pca, "model", "") == "k2":
        return K2.from_json(e)
    return conv(pca, e)


def dumps(f: ExtWPredicate) -> str:
    return json.dumps(ext_to_json(f), sort_keys=True)
