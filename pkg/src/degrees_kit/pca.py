"""Partial combinatory algebras with fuel-bounded application.

Two term-based models live here: :class:`LambdaPca` (closed normal
lambda terms) and :class:`K1Pca` (the same algebra transported along the
Goedel numbering, so elements are naturals).  Kleene's second algebra is
in :mod:`degrees_kit.k2`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from . import terms as T
from .numbering import cantor_unpair, decode_term, encode_term
from .terms import Fuel, OutOfFuel, Term


class PcaError(ValueError):
    """Invalid input to a PCA operation (model mismatch, open term, ...)."""


# ----------------------------------------------------------------------------
# outcomes


@dataclass(frozen=True)
class Outcome:
    @property
    def converged(self) -> bool:
        return isinstance(self, Converged)


@dataclass(frozen=True)
class Converged(Outcome):
    value: Any
    steps: int = 0


@dataclass(frozen=True)
class FuelExhausted(Outcome):
    pass


@dataclass(frozen=True)
class Undefined(Outcome):
    reason: str = ""


# ----------------------------------------------------------------------------
# combinatory expressions (input to bracket abstraction)


@dataclass(frozen=True)
class Hole:
    name: str


@dataclass(frozen=True)
class Ap:
    fn: Any
    arg: Any


def ap(f, *args):
    for a in args:
        f = Ap(f, a)
    return f


def holes(e) -> frozenset:
    if isinstance(e, Hole):
        return frozenset((e.name,))
    if isinstance(e, Ap):
        return holes(e.fn) | holes(e.arg)
    return frozenset()


class Pca:
    """Common interface; subclasses provide ``apply`` and the basic combinators."""

    model = "abstract"
    symbolic = False

    def __init__(self, enum_size_limit: int = 60, enum_fuel: int = 200):
        self.enum_size_limit = enum_size_limit
        self.enum_fuel = enum_fuel
        self._sub_cache: list = []
        self._sub_keys: set = set()
        self._sub_gen = None

    # --- required by subclasses -------------------------------------------
    def check(self, a) -> None:
        raise NotImplementedError

    def apply(self, a, b, fuel: int = 10_000) -> Outcome:
        raise NotImplementedError

    def key(self, a):
        return a

    def equal(self, a, b) -> Optional[bool]:
        return self.key(a) == self.key(b)

    def in_sub(self, a) -> bool:
        return True

    def basis(self) -> list:
        raise NotImplementedError

    def show(self, a) -> str:
        return repr(a)

    # --- derived operations -------------------------------------------------
    def apply_many(self, f, *args, fuel: int = 10_000) -> Outcome:
        out = Converged(f)
        for a in args:
            out = self.apply(out.value, a, fuel)
            if not out.converged:
                return out
        return out

    def make_pair(self, a, b):
        out = self.apply_many(self.pair, a, b, fuel=100)
        assert out.converged
        return out.value

    def proj_fst(self, p, fuel: int = 10_000) -> Outcome:
        return self.apply(self.fst, p, fuel)

    def proj_snd(self, p, fuel: int = 10_000) -> Outcome:
        return self.apply(self.snd, p, fuel)

    def evaluate(self, e, env=None, fuel: int = 10_000) -> Outcome:
        """Evaluate a combinatory expression; holes are looked up in ``env``."""
        env = env or {}
        if isinstance(e, Hole):
            if e.name not in env:
                raise PcaError(f"unbound hole {e.name!r}")
            return Converged(env[e.name])
        if isinstance(e, Ap):
            f = self.evaluate(e.fn, env, fuel)
            if not f.converged:
                return f
            a = self.evaluate(e.arg, env, fuel)
            if not a.converged:
                return a
            return self.apply(f.value, a.value, fuel)
        return Converged(e)

    def translate(self, name: str, e):
        """K/S/I translation of ``[name] e`` as a combinatory expression."""
        if e == Hole(name):
            return self.i
        if name not in holes(e):
            return Ap(self.k, e)
        return ap(self.s, self.translate(name, e.fn), self.translate(name, e.arg))

    def bracket(self, names, e, fuel: int = 10_000):
        """``[x1]...[xn] e`` as an element; raises PcaError on stray holes."""
        if isinstance(names, str):
            names = [names]
        stray = holes(e) - set(names)
        if stray:
            raise PcaError(f"free variables {sorted(stray)} in abstraction body")
        for n in reversed(list(names)):
            e = self.translate(n, e)
        out = self.evaluate(e, fuel=fuel)
        if not out.converged:
            raise PcaError(f"abstraction did not normalize: {out}")
        return out.value

    # --- enumeration of the elementary sub-PCA -----------------------------
    def _generate(self):
        found = self._sub_cache
        for b in self.basis():
            k = self.key(b)
            if k not in self._sub_keys:
                self._sub_keys.add(k)
                found.append(b)
                yield b
        d = 0
        while True:
            for i in range(d + 1):
                j = d - i
                if i >= len(found) or j >= len(found):
                    continue
                out = self.apply(found[i], found[j], self.enum_fuel)
                if not out.converged or not self._small(out.value):
                    continue
                k = self.key(out.value)
                if k in self._sub_keys:
                    continue
                self._sub_keys.add(k)
                found.append(out.value)
                yield out.value
            d += 1
            if d > 2 * len(found) + 2:
                return

    def _small(self, v) -> bool:
        return True

    def enum_sub(self, i: int):
        """The ``i``-th element of the elementary sub-PCA (stable order)."""
        if self._sub_gen is None:
            self._sub_gen = self._generate()
        while len(self._sub_cache) <= i:
            try:
                next(self._sub_gen)
            except StopIteration:
                return None
        return self._sub_cache[i]

    def iter_sub(self, limit: int):
        for i in range(limit):
            v = self.enum_sub(i)
            if v is None:
                return
            yield v

    def enum_all(self, i: int):
        """Sampling order for the whole algebra (defaults to the sub-PCA)."""
        return self.enum_sub(i)


# ----------------------------------------------------------------------------
# lambda-calculus PCA


def _lam_combinators():
    x, y, z = T.var("x"), T.var("y"), T.var("z")
    c = {}
    c["I"] = T.lams("x", x)
    c["K"] = T.lams("xy", x)
    c["F"] = T.lams("xy", y)
    c["S"] = T.lams("xyz", T.app(x, z, T.app(y, z)))
    c["pair"] = T.lams("xyz", T.app(z, x, y))
    c["fst"] = T.lams("x", T.app(x, c["K"]))
    c["snd"] = T.lams("x", T.app(x, c["F"]))
    c["succ"] = T.lams("xz", T.app(z, c["F"], x))
    c["pred"] = c["snd"]
    c["iszero"] = T.lams("x", T.app(x, c["K"]))
    c["B"] = T.lams("xyz", T.app(x, T.app(y, z)))
    c["C"] = T.lams("xyz", T.app(x, z, y))
    return c


COMB = _lam_combinators()


def curry_numeral(n: int) -> Term:
    """0 = I, n+1 = pair F n (Barendregt-style numerals)."""
    cache = _NUMERALS
    if not cache:
        cache.append(COMB["I"])
    F = COMB["F"]
    while len(cache) <= n:
        cache.append(T.lam(T.app(T.idx(0), F, cache[-1])))
    return cache[n]


# strong references keep the interned numerals alive
_NUMERALS: list = []


def decode_numeral(t: Term) -> Optional[int]:
    n = 0
    F = COMB["F"]
    I = COMB["I"]
    while True:
        if t is I:
            return n
        if not isinstance(t, T.Lam):
            return None
        body = t.body
        h, args = T.spine(body)
        if h is not T.idx(0) or len(args) != 2 or args[0] is not F or args[1].loose:
            return None
        t = args[1]
        n += 1


def normal_apply(a: Term, b: Term, fuel: int) -> Outcome:
    f = Fuel(fuel)
    try:
        v = T.normalize(T.app(a, b), f)
    except OutOfFuel:
        return FuelExhausted()
    return Converged(v, f.used)


def unpair_term(t: Term):
    """Match the canonical pair ``lam z. z a b``; returns (a, b) or None."""
    if not isinstance(t, T.Lam):
        return None
    h, args = T.spine(t.body)
    if h is not T.idx(0) or len(args) != 2:
        return None
    a, b = args
    if a.loose or b.loose:
        return None
    return a, b


class LambdaPca(Pca):
    """Closed beta-normal lambda terms under normal-order application.

    The elementary sub-PCA is the whole algebra.
    """

    model = "lambda"
    symbolic = True

    def __init__(self, **kw):
        super().__init__(**kw)
        self.k, self.s, self.i = COMB["K"], COMB["S"], COMB["I"]
        self.pair, self.fst, self.snd = COMB["pair"], COMB["fst"], COMB["snd"]
        self.succ = COMB["succ"]
        self._names = {v: k for k, v in COMB.items() if k not in ("pred", "iszero")}

    # conversions used by the symbolic engine
    def to_term(self, a) -> Term:
        return a

    def from_term(self, t: Term):
        return t

    def check(self, a) -> None:
        if not isinstance(a, Term):
            raise PcaError(f"not an element of the lambda PCA: {a!r}")
        if not a.closed:
            raise PcaError(f"element must be closed: {self.show(a)}")

    def element(self, t: Term, fuel: int = 10_000) -> Term:
        """Normalize a closed term into an element."""
        self.check(t)
        f = Fuel(fuel)
        try:
            return T.normalize(t, f)
        except OutOfFuel:
            raise PcaError("term has no normal form within fuel") from None

    def apply(self, a, b, fuel: int = 10_000) -> Outcome:
        if fuel <= 0:
            raise PcaError("fuel must be positive")
        self.check(a)
        self.check(b)
        return normal_apply(a, b, fuel)

    def numeral(self, n: int):
        return curry_numeral(n)

    def numeral_decode(self, e) -> Optional[int]:
        return decode_numeral(e) if isinstance(e, Term) else None

    def unpair(self, a):
        return unpair_term(a)

    def make_pair(self, a, b):
        return T.lam(T.app(T.idx(0), a, b))

    def basis(self) -> list:
        c = COMB
        K, I = c["K"], c["I"]
        n0, n1, n2 = (curry_numeral(i) for i in range(3))
        KI = c["F"]
        apk = lambda *xs: normal_apply_chain(*xs)
        inl = T.lams("s", T.app(c["pair"], n0, T.var("s")))
        inr = T.lams("s", T.app(c["pair"], n1, T.var("s")))
        items = [
            I, K, KI, c["S"], c["pair"], c["fst"], c["snd"], n0, n1, n2, c["succ"],
            apk(K, K), apk(K, c["snd"]), apk(K, c["fst"]), apk(K, n0), apk(K, n1),
            inl, inr, apk(K, KI), c["B"], c["C"], apk(K, inl), apk(K, inr),
            apk(K, n2), apk(K, c["pair"]),
        ]
        return [self.element(t) for t in items]

    def _small(self, v) -> bool:
        return v.size <= self.enum_size_limit

    def show(self, a) -> str:
        if isinstance(a, Term):
            return T.to_sexpr(a, self._namer)
        return repr(a)

    def _namer(self, t):
        name = self._names.get(t)
        if name is not None:
            return name
        n = decode_numeral(t)
        if n is not None:
            return f"(num {n})"
        return None

    def constants(self) -> dict:
        out = {k: v for k, v in COMB.items()}
        out["num"] = lambda n: curry_numeral(int(n))
        return out

    def parse(self, text: str) -> Term:
        return T.parse(text, self.constants())

    def parse_element(self, text: str, fuel: int = 10_000):
        return self.element(self.parse(text), fuel)

    def expr_of_term(self, t: Term, fuel: int = 10_000):
        """Turn an open term into a combinatory expression (holes = free vars)."""
        if not t.fv:
            return self.element(t, fuel)
        if isinstance(t, T.Var):
            return Hole(t.name)
        if isinstance(t, T.App):
            return Ap(self.expr_of_term(t.fn, fuel), self.expr_of_term(t.arg, fuel))
        name = T.fresh_name("%b")
        inner = self.expr_of_term(T.instantiate(t.body, T.var(name)), fuel)
        return self.translate(name, inner)


def normal_apply_chain(f, *args) -> Term:
    t = T.app(f, *args)
    return T.normalize(t, Fuel(10_000))


def bracket_abstract(pca: Pca, name: str, body, fuel: int = 10_000):
    """``[name] body`` for a term-based PCA; ``body`` is an open term or an expression."""
    if isinstance(body, Term):
        if not isinstance(pca, (LambdaPca, K1Pca)):
            raise PcaError("term bodies need a term-based PCA")
        stray = body.fv - {name}
        if stray:
            raise PcaError(f"free variables {sorted(stray)} in abstraction body")
        lam_pca = pca if isinstance(pca, LambdaPca) else pca.inner
        e = lam_pca.expr_of_term(body, fuel)
        if isinstance(pca, K1Pca):
            e = _map_consts(e, pca.from_term)
        return pca.bracket(name, e, fuel)
    return pca.bracket(name, body, fuel)


def _map_consts(e, f):
    if isinstance(e, Hole):
        return e
    if isinstance(e, Ap):
        return Ap(_map_consts(e.fn, f), _map_consts(e.arg, f))
    return f(e)


# ----------------------------------------------------------------------------
# numbered lambda terms (Kleene-first-style)


def k1_encode(t: Term) -> int:
    if not t.closed:
        raise PcaError("only closed terms are numbered programs")
    return encode_term(t)


def k1_apply(m: int, n: int, fuel: int = 10_000) -> Outcome:
    """Run program ``m`` on numeral ``n``; the value is a natural number."""
    prog = decode_term(m)
    if prog.loose:
        return Undefined("code does not denote a closed term")
    out = normal_apply(prog, curry_numeral(n), fuel)
    if not out.converged:
        return out
    v = decode_numeral(out.value)
    if v is None:
        return Undefined("result is not a numeral")
    return Converged(v, out.steps)


class K1Pca(Pca):
    """Goedel-numbered normal lambda terms; application via the numbering.

    Elements are naturals.  The sub-PCA is everything, as in Kleene's first
    algebra.
    """

    model = "k1"
    symbolic = True

    def __init__(self, **kw):
        super().__init__(**kw)
        self.inner = LambdaPca()
        enc = encode_term
        self.k, self.s, self.i = enc(COMB["K"]), enc(COMB["S"]), enc(COMB["I"])
        self.pair, self.fst, self.snd = enc(COMB["pair"]), enc(COMB["fst"]), enc(COMB["snd"])
        self.succ = enc(COMB["succ"])

    def to_term(self, a) -> Term:
        return decode_term(a)

    def from_term(self, t: Term) -> int:
        return encode_term(t)

    def check(self, a) -> None:
        if isinstance(a, bool) or not isinstance(a, int) or a < 0:
            raise PcaError(f"not an element of the numbered PCA: {a!r}")

    def apply(self, a, b, fuel: int = 10_000) -> Outcome:
        if fuel <= 0:
            raise PcaError("fuel must be positive")
        self.check(a)
        self.check(b)
        ta, tb = decode_term(a), decode_term(b)
        if ta.loose or tb.loose:
            return Undefined("code does not denote a closed term")
        out = normal_apply(ta, tb, fuel)
        if not out.converged:
            return out
        return Converged(encode_term(out.value), out.steps)

    def numeral(self, n: int) -> int:
        return encode_term(curry_numeral(n))

    def numeral_decode(self, e) -> Optional[int]:
        if not isinstance(e, int):
            return None
        return decode_numeral(decode_term(e))

    def unpair(self, a):
        p = unpair_term(decode_term(a))
        return None if p is None else (encode_term(p[0]), encode_term(p[1]))

    def make_pair(self, a, b):
        return encode_term(self.inner.make_pair(decode_term(a), decode_term(b)))

    def basis(self) -> list:
        return [encode_term(t) for t in self.inner.basis()]

    def _small(self, v) -> bool:
        return decode_term(v).size <= self.enum_size_limit

    def show(self, a) -> str:
        return f"#{a}" if isinstance(a, int) else repr(a)

    def parse_element(self, text: str, fuel: int = 10_000) -> int:
        text = text.strip()
        if text.startswith("#") and text[1:].isdigit():
            return int(text[1:])
        return encode_term(self.inner.parse_element(text, fuel))


def cantor_index(i: int) -> tuple[int, int]:
    """Decode an index into a pair of indices (Cantor order)."""
    w, y = cantor_unpair(i)
    return w, y
