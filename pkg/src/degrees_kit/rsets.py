"""Sets of realizers and three-valued verdicts.

An :class:`RSet` is a possibly infinite set of PCA elements.  Membership
is three-valued (True / False / None for "could not decide").  The
interesting case is the implication set ``Arrow(src, tgt)``: deciding
``r in Arrow(src, tgt)`` quantifies over all of ``src``.  For the
term-based models this is done symbolically, by applying ``r`` to a
generic pattern of ``src`` (free variables standing for arbitrary members)
and inspecting the normal form.  When the normal form uses a generic
variable as a function, or a PCA has no term syntax, we fall back to
sampling concrete members, which can refute but never confirm.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from . import terms as T
from .pca import FuelExhausted, Pca, Undefined, unpair_term
from .terms import Fuel, OutOfFuel

DEFAULT_SAMPLES = 64
MAX_PATTERNS = 256


# ----------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    detail: str = ""
    data: Any = field(default=None, compare=False)

    @property
    def holds(self) -> bool:
        return isinstance(self, Holds)

    @property
    def fails(self) -> bool:
        return isinstance(self, Fails)

    @property
    def unknown(self) -> bool:
        return isinstance(self, Unknown)

    @property
    def tag(self) -> str:
        return type(self).__name__


class Holds(Verdict):
    pass


class Fails(Verdict):
    pass


class Unknown(Verdict):
    pass


def all_of(verdicts, detail: str = "") -> Verdict:
    """Conjunction: first Fails wins, then any Unknown, else Holds."""
    unknown = None
    for v in verdicts:
        if v.fails:
            return v
        if v.unknown and unknown is None:
            unknown = v
    if unknown is not None:
        return unknown
    return Holds(detail)


def from_bool(b: Optional[bool], detail: str = "", data=None) -> Verdict:
    if b is True:
        return Holds(detail, data)
    if b is False:
        return Fails(detail, data)
    return Unknown(detail, data)


# ----------------------------------------------------------------------------
# realizer sets


class RSet:
    __slots__ = ("_key",)

    def key(self):
        k = getattr(self, "_key", None)
        if k is None:
            k = self._key = self._make_key()
        return k

    def __eq__(self, other):
        return isinstance(other, RSet) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return describe(self)

    finite = False


class _Empty(RSet):
    __slots__ = ()

    def _make_key(self):
        return ("empty",)

    finite = True
    elements = ()


class _All(RSet):
    __slots__ = ()

    def _make_key(self):
        return ("all",)


EMPTY = _Empty()
ALL = _All()


class Finite(RSet):
    __slots__ = ("elements", "_set")
    finite = True

    def __init__(self, elements):
        seen, out = set(), []
        for e in elements:
            if e not in seen:
                seen.add(e)
                out.append(e)
        self.elements = tuple(out)
        self._set = frozenset(out)

    def _make_key(self):
        return ("finite", self._set)


class Paired(RSet):
    """Canonical pairs ``pair a b`` with a in ``left`` and b in ``right``."""

    __slots__ = ("left", "right")

    def __init__(self, left: RSet, right: RSet):
        self.left, self.right = left, right

    def _make_key(self):
        return ("paired", self.left.key(), self.right.key())


class Union(RSet):
    __slots__ = ("branches",)

    def __init__(self, branches):
        self.branches = tuple(branches)

    def _make_key(self):
        return ("union", frozenset(b.key() for b in self.branches))


class Arrow(RSet):
    """``{r | for all p in src, r p is defined and lies in tgt}``."""

    __slots__ = ("src", "tgt")

    def __init__(self, src: RSet, tgt: RSet):
        self.src, self.tgt = src, tgt

    def _make_key(self):
        return ("arrow", self.src.key(), self.tgt.key())


class Meet(RSet):
    __slots__ = ("parts",)

    def __init__(self, parts):
        self.parts = tuple(parts)

    def _make_key(self):
        return ("meet", frozenset(p.key() for p in self.parts))


class ByPredicate(RSet):
    """Membership by a three-valued test; ``sample(i)`` lists known members."""

    __slots__ = ("member", "sample", "name")

    def __init__(self, member: Callable, sample: Callable = None, name: str = "pred"):
        self.member = member
        self.sample = sample or (lambda i: None)
        self.name = name

    def _make_key(self):
        return ("pred", self.name)


def finite(elements) -> RSet:
    f = Finite(elements)
    return f if f.elements else EMPTY


def paired(pca: Pca, left: RSet, right: RSet) -> RSet:
    if left is EMPTY or right is EMPTY:
        return EMPTY
    if left.finite and right.finite:
        return finite(pca.make_pair(a, b) for a in left.elements for b in right.elements)
    return Paired(left, right)


def union(*branches) -> RSet:
    flat = []
    for b in branches:
        if isinstance(b, Union):
            flat.extend(b.branches)
        elif b is not EMPTY:
            flat.append(b)
    if any(b is ALL for b in flat):
        return ALL
    if not flat:
        return EMPTY
    if all(b.finite for b in flat):
        return finite(e for b in flat for e in b.elements)
    if len(flat) == 1:
        return flat[0]
    return Union(flat)


def meet(*parts) -> RSet:
    flat = []
    for p in parts:
        if isinstance(p, Meet):
            flat.extend(p.parts)
        elif p is not ALL:
            flat.append(p)
    if any(p is EMPTY for p in flat):
        return EMPTY
    if not flat:
        return ALL
    if len(flat) == 1:
        return flat[0]
    return Meet(flat)


def arrow(src: RSet, tgt: RSet) -> RSet:
    if src is EMPTY:
        return ALL
    return Arrow(src, tgt)


def describe(R: RSet, show=repr) -> str:
    if R is EMPTY:
        return "empty"
    if R is ALL:
        return "all"
    if isinstance(R, Finite):
        return "{" + ", ".join(show(e) for e in R.elements) + "}"
    if isinstance(R, Paired):
        return f"<{describe(R.left, show)}, {describe(R.right, show)}>"
    if isinstance(R, Union):
        return " | ".join(describe(b, show) for b in R.branches)
    if isinstance(R, Arrow):
        return f"({describe(R.src, show)} => {describe(R.tgt, show)})"
    if isinstance(R, Meet):
        return " & ".join(describe(p, show) for p in R.parts)
    if isinstance(R, ByPredicate):
        return R.name
    return repr(R)


# ----------------------------------------------------------------------------
# membership


@dataclass
class Ctx:
    pca: Pca
    fuel: int = 10_000
    samples: int = DEFAULT_SAMPLES


def is_empty(R: RSet, ctx: Ctx) -> Optional[bool]:
    """Whether ``R`` has no members (None if undecided)."""
    if R is EMPTY:
        return True
    if R is ALL or isinstance(R, Finite):
        return False
    if isinstance(R, Paired):
        l, r = is_empty(R.left, ctx), is_empty(R.right, ctx)
        if l or r:
            return True
        if l is False and r is False:
            return False
        return None
    if isinstance(R, Union):
        vals = [is_empty(b, ctx) for b in R.branches]
        if any(v is False for v in vals):
            return False
        return True if all(vals) else None
    if isinstance(R, Arrow):
        src = is_empty(R.src, ctx)
        if src:
            return False
        tgt = is_empty(R.tgt, ctx)
        if tgt and src is False:
            return True
        if tgt is False and _witness(R.tgt, ctx) is not None:
            return False  # K . w maps everything to w
        return None
    if isinstance(R, Meet) and any(is_empty(q, ctx) is True for q in R.parts):
        return True
    if isinstance(R, Meet) and any(q.finite for q in R.parts):
        # a finite part bounds the meet, so membership of its elements decides
        base = next(q for q in R.parts if q.finite)
        vals = [contains(ctx, e, R) for e in base.elements]
        if any(v is True for v in vals):
            return False
        return True if all(v is False for v in vals) else None
    return None if _witness(R, ctx) is None else False


def _witness(R: RSet, ctx: Ctx):
    if R is ALL:
        return ctx.pca.i
    if isinstance(R, Finite):
        return R.elements[0]
    if isinstance(R, Paired):
        a, b = _witness(R.left, ctx), _witness(R.right, ctx)
        if a is None or b is None:
            return None
        return ctx.pca.make_pair(a, b)
    if isinstance(R, Union):
        for b in R.branches:
            w = _witness(b, ctx)
            if w is not None:
                return w
        return None
    if isinstance(R, ByPredicate):
        return R.sample(0)
    if isinstance(R, Meet) and any(q.finite for q in R.parts):
        base = next(q for q in R.parts if q.finite)
        return next((e for e in base.elements if contains(ctx, e, R) is True), None)
    if isinstance(R, (Arrow, Meet)):
        for i in range(ctx.samples):
            c = ctx.pca.enum_sub(i)
            if c is None:
                break
            if contains(ctx, c, R) is True:
                return c
    return None


def member(ctx: Ctx, r, R: RSet) -> Verdict:
    """Three-valued membership of the element ``r`` in ``R``."""
    pca = ctx.pca
    if R is EMPTY:
        return Fails("empty set", {"element": r})
    if R is ALL:
        return Holds()
    if isinstance(R, Finite):
        eqs = [pca.equal(r, e) for e in R.elements]
        if any(e is True for e in eqs):
            return Holds()
        if all(e is False for e in eqs):
            return Fails("not among the listed realizers", {"element": r})
        return Unknown("equality undecided")
    if isinstance(R, Paired):
        parts = pca.unpair(r)
        if parts is None:
            if pca.symbolic:
                return Fails("not a pair", {"element": r})
            a, b = pca.proj_fst(r, ctx.fuel), pca.proj_snd(r, ctx.fuel)
            if not (a.converged and b.converged):
                return Unknown("projection did not converge")
            parts = (a.value, b.value)
        return all_of([member(ctx, parts[0], R.left), member(ctx, parts[1], R.right)])
    if isinstance(R, Union):
        vs = [member(ctx, r, b) for b in R.branches]
        if any(v.holds for v in vs):
            return Holds()
        if all(v.fails for v in vs):
            return Fails("in no branch", {"element": r})
        return Unknown("branch membership undecided")
    if isinstance(R, Meet):
        return all_of(member(ctx, r, p) for p in R.parts)
    if isinstance(R, ByPredicate):
        return from_bool(R.member(r), R.name)
    if isinstance(R, Arrow):
        return realizes_impl(ctx, r, R.src, R.tgt)
    raise TypeError(f"unknown realizer set {R!r}")


def contains(ctx: Ctx, r, R: RSet) -> Optional[bool]:
    v = member(ctx, r, R)
    return True if v.holds else False if v.fails else None


# ----------------------------------------------------------------------------
# implication: r maps src into tgt


def realizes_impl(ctx: Ctx, r, src: RSet, tgt: RSet) -> Verdict:
    """Does ``r . p`` converge into ``tgt`` for every ``p`` in ``src``?"""
    pca = ctx.pca
    if src is EMPTY:
        return Holds("vacuous")
    if src.finite:
        return all_of(_apply_into(ctx, r, p, tgt) for p in src.elements)
    listed = _finite_view(ctx, src)
    if listed is not None:
        return all_of((_apply_into(ctx, r, p, tgt) for p in listed), "vacuous")
    if pca.symbolic:
        pats = generics(src, pca)
        if pats is not None:
            rt = pca.to_term(r)
            out = []
            for pat, env in pats:
                out.append(_open_impl(ctx, T.app(rt, pat), env, tgt))
                if out[-1].fails:
                    return out[-1]
            v = all_of(out, "checked on generic inputs")
            return v
    return _sample_impl(ctx, r, src, tgt, "source not enumerable")


def _finite_view(ctx: Ctx, R: RSet):
    """Members of a meet with a finite part, when every membership is decided."""
    if not isinstance(R, Meet):
        return None
    base = next((q for q in R.parts if q.finite), None)
    if base is None:
        return None
    vals = [contains(ctx, e, R) for e in base.elements]
    if any(v is None for v in vals):
        return None
    return [e for e, v in zip(base.elements, vals) if v]


def _apply_into(ctx: Ctx, r, p, tgt: RSet) -> Verdict:
    out = ctx.pca.apply(r, p, ctx.fuel)
    if isinstance(out, Undefined):
        return Fails("application undefined", {"input": p, "fuel": ctx.fuel})
    if isinstance(out, FuelExhausted):
        return Unknown("fuel exhausted", {"input": p, "fuel": ctx.fuel})
    v = member(ctx, out.value, tgt)
    if v.fails:
        return Fails("result outside target", {"input": p, "output": out.value, "fuel": ctx.fuel})
    return v


def samples_of(ctx: Ctx, R: RSet, limit: int):
    """Up to ``limit`` concrete members of ``R`` (deterministic order)."""
    pca = ctx.pca
    if R is EMPTY:
        return []
    if R.finite:
        return list(R.elements[:limit])
    if R is ALL:
        out = []
        for i in range(limit):
            a = pca.enum_all(i)
            if a is None:
                break
            out.append(a)
        return out
    if isinstance(R, Paired):
        ls = samples_of(ctx, R.left, max(2, int(limit ** 0.5)))
        rs = samples_of(ctx, R.right, max(2, int(limit ** 0.5)))
        return [pca.make_pair(a, b) for a in ls for b in rs][:limit]
    if isinstance(R, Union):
        per = max(1, limit // len(R.branches))
        return [x for b in R.branches for x in samples_of(ctx, b, per)][:limit]
    if isinstance(R, ByPredicate):
        out = []
        for i in range(limit):
            a = R.sample(i)
            if a is None:
                break
            out.append(a)
        return out
    out = []
    for i in range(limit * 4):
        a = pca.enum_all(i)
        if a is None:
            break
        if contains(ctx, a, R) is True:
            out.append(a)
            if len(out) >= limit:
                break
    return out


def _sample_impl(ctx: Ctx, r, src, tgt, why: str) -> Verdict:
    for p in samples_of(ctx, src, ctx.samples):
        v = _apply_into(ctx, r, p, tgt)
        if v.fails:
            return v
    return Unknown(f"{why}; no counterexample among {ctx.samples} samples")


# ----------------------------------------------------------------------------
# the symbolic engine (term-based models only)


def _pair_term(a: T.Term, b: T.Term) -> T.Term:
    return T.lam(T.app(T.idx(0), a, b))


def generics(R: RSet, pca: Pca):
    """Generic patterns covering ``R``: list of (term, env) or None.

    ``env`` maps each fresh variable to the set it ranges over.
    """
    if R is EMPTY:
        return []
    if isinstance(R, Finite):
        return [(pca.to_term(e), {}) for e in R.elements]
    if isinstance(R, Paired):
        ls, rs = generics(R.left, pca), generics(R.right, pca)
        if ls is None or rs is None or len(ls) * len(rs) > MAX_PATTERNS:
            return None
        return [(_pair_term(a, b), {**ea, **eb}) for a, ea in ls for b, eb in rs]
    if isinstance(R, Union):
        out = []
        for b in R.branches:
            g = generics(b, pca)
            if g is None:
                return None
            out.extend(g)
        return out if len(out) <= MAX_PATTERNS else None
    g = T.fresh_name()
    return [(T.var(g), {g: R})]


def _normal(ctx: Ctx, t: T.Term):
    f = Fuel(ctx.fuel)
    try:
        return T.normalize(t, f)
    except OutOfFuel:
        return None


def _open_impl(ctx: Ctx, t: T.Term, env: dict, tgt: RSet) -> Verdict:
    nf = _normal(ctx, t)
    if nf is None:
        return _sample_open(ctx, t, env, tgt, "fuel exhausted on generic input")
    return open_member(ctx, nf, env, tgt)


def _subset(S: RSet, tgt: RSet) -> bool:
    if tgt is ALL or S is EMPTY or S == tgt:
        return True
    if isinstance(tgt, Union):
        return any(_subset(S, b) for b in tgt.branches)
    if isinstance(S, Union):
        return all(_subset(b, tgt) for b in S.branches)
    if isinstance(S, Finite) and isinstance(tgt, Finite):
        return S._set <= tgt._set
    if isinstance(S, Paired) and isinstance(tgt, Paired):
        return _subset(S.left, tgt.left) and _subset(S.right, tgt.right)
    return False


def open_member(ctx: Ctx, t: T.Term, env: dict, tgt: RSet) -> Verdict:
    """Is the normal open term ``t`` in ``tgt`` for every instance of ``env``?"""
    pca = ctx.pca
    live = {g: env[g] for g in t.fv if g in env}
    if not live:
        if t.fv:
            return Unknown("stray free variables")
        return member(ctx, pca.from_term(t), tgt)
    if T.head_vars(t) & set(live):
        if tgt is ALL and _heads_take_bound_args(t, live):
            return Holds()
        step = _eliminate(ctx, t, env)
        if step is not None:
            v = open_member(ctx, step[0], step[1], tgt)
            if not v.fails:
                return v
        return _sample_open(ctx, t, env, tgt, "generic input used as a function")
    if tgt is ALL:
        # a normal term with generics off the head stays normal when instantiated
        return Holds()
    if isinstance(t, T.Var):
        if _subset(live[t.name], tgt):
            return Holds()
    if tgt is EMPTY:
        return _sample_open(ctx, t, env, tgt, "")
    if isinstance(tgt, Meet):
        return all_of(open_member(ctx, t, env, p) for p in tgt.parts)
    if isinstance(tgt, Paired):
        parts = unpair_term(t)
        if parts is not None:
            return all_of([open_member(ctx, parts[0], env, tgt.left),
                           open_member(ctx, parts[1], env, tgt.right)])
        if isinstance(t, T.Lam) or isinstance(t, T.App):
            return _sample_open(ctx, t, env, tgt, "")
    if isinstance(tgt, Finite):
        return _sample_open(ctx, t, env, tgt, "")
    if isinstance(tgt, Union):
        for b in tgt.branches:
            v = open_member(ctx, t, env, b)
            if v.holds:
                return v
        return _sample_open(ctx, t, env, tgt, "no branch covers the generic result")
    if isinstance(tgt, Arrow):
        if tgt.src is EMPTY:
            return Holds()
        if tgt.src.finite:
            return all_of(
                _open_impl(ctx, T.app(t, pca.to_term(p)), env, tgt.tgt) for p in tgt.src.elements
            )
        pats = generics(tgt.src, pca)
        if pats is None:
            return _sample_open(ctx, t, env, tgt, "")
        out = []
        for pat, env2 in pats:
            v = _open_impl(ctx, T.app(t, pat), {**env, **env2}, tgt.tgt)
            if v.fails:
                return v
            out.append(v)
        return all_of(out)
    return _sample_open(ctx, t, env, tgt, "target not decidable symbolically")


def _heads_take_bound_args(t: T.Term, live) -> bool:
    """Generic heads are applied only to neutral terms headed by a bound variable.

    Instantiating such a generic by a closed normal term then substitutes
    neutral terms for its binders, which creates no redex, so the
    (normal) result exists.
    """
    stack = [t]
    while stack:
        u = stack.pop()
        if not u.fv:
            continue
        if isinstance(u, T.Lam):
            stack.append(u.body)
        elif isinstance(u, T.App):
            h, args = T.spine(u)
            if isinstance(h, T.Var) and h.name in live:
                if not all(isinstance(T.spine(a)[0], T.Idx) for a in args):
                    return False
                stack.extend(args)
            else:
                stack.append(h)
                stack.extend(args)
    return True


def _arrow_parts(R: RSet):
    if isinstance(R, Arrow):
        return [R]
    if isinstance(R, Meet):
        return [p for p in R.parts if isinstance(p, Arrow)]
    return []


def _generic_redex(t: T.Term, env: dict):
    """An application ``g a`` with g a generic of implication type and a
    free of bound variables, or None."""
    stack = [t]
    while stack:
        u = stack.pop()
        if not u.fv:
            continue
        if isinstance(u, T.Lam):
            stack.append(u.body)
            continue
        if isinstance(u, T.App):
            if isinstance(u.fn, T.Var) and u.fn.name in env and u.arg.loose == 0 \
                    and _arrow_parts(env[u.fn.name]):
                return u
            stack.extend((u.fn, u.arg))
    return None


def _replace(t: T.Term, old: T.Term, new: T.Term) -> T.Term:
    memo = {}

    def go(u):
        if u is old:
            return new
        if not (old.fv <= u.fv) or u.size < old.size:
            return u
        k = id(u)
        if k not in memo:
            if isinstance(u, T.Lam):
                memo[k] = T.lam(go(u.body))
            elif isinstance(u, T.App):
                memo[k] = T.app(go(u.fn), go(u.arg))
            else:
                memo[k] = u
        return memo[k]

    return go(t)


def _eliminate(ctx: Ctx, t: T.Term, env: dict):
    """Replace one application ``g a`` (g ranging over implications) by a
    fresh generic ranging over the targets whose source provably holds a.

    The new generic over-approximates the values of ``g a``, so a Holds on
    the result is sound; refutations must come from the original term.
    """
    redex = _generic_redex(t, env)
    if redex is None:
        return None
    arg = redex.arg
    tgts = []
    for p in _arrow_parts(env[redex.fn.name]):
        if p.src is EMPTY:
            continue
        if open_member(ctx, arg, env, p.src).holds:
            tgts.append(p.tgt)
    if not tgts:
        return None
    h = T.fresh_name()
    env2 = dict(env)
    env2[h] = meet(*tgts)
    nf = _normal(ctx, _replace(t, redex, T.var(h)))
    if nf is None:
        return None
    return nf, env2


def _sample_open(ctx: Ctx, t: T.Term, env: dict, tgt: RSet, why: str) -> Verdict:
    """Refute by instantiating the generic variables with concrete members."""
    pca = ctx.pca
    names = sorted(g for g in t.fv if g in env)
    per = max(2, int(ctx.samples ** (1 / max(1, len(names)))))
    pools = [samples_of(ctx, env[g], per) for g in names]
    if any(not p for p in pools):
        # some generic ranges over a set with no known member
        return Unknown(why or "no sample members")
    for combo in itertools.islice(itertools.product(*pools), ctx.samples):
        u = t
        for g, val in zip(names, combo):
            u = T.substitute(u, g, pca.to_term(val))
        nf = _normal(ctx, u)
        if nf is None:
            continue
        if nf.fv:
            continue
        v = member(ctx, pca.from_term(nf), tgt)
        if v.fails:
            return Fails("counterexample found by instantiation",
                         {"instance": dict(zip(names, combo)), "fuel": ctx.fuel})
    return Unknown(why or f"no counterexample among {ctx.samples} instances")
