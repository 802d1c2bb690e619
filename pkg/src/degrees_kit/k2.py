"""Kleene's second algebra on Baire space, at desk scale.

Points of Baire space are represented by:

* :class:`Table` - finite support plus a default value.  Tables stand in
  for arbitrary (non-computable) oracles and are never in the sub-PCA.
* :class:`Programmed` - a lambda term computing n -> f(n) on numerals.
* :class:`Native` - a (partially applied) continuous functional written
  in Python, e.g. the combinators K and S.  Its stream values are defined
  through the application protocol, so applying it by the protocol and
  applying it directly give the same answers.
* :class:`Stream` - lazily computed results (pairs, protocol applications).

Application ``alpha | beta`` follows the usual protocol: scan k = 0, 1, ...
until ``alpha(<n> ++ beta[:k]) > 0`` and return that value minus one.
"""
from __future__ import annotations

from typing import Callable, Optional

from . import terms as T
from .numbering import decode_seq, encode_seq_capped
from .pca import (
    COMB, Converged, FuelExhausted, Outcome, Pca, PcaError, Undefined,
    curry_numeral, decode_numeral,
)
from .terms import Fuel, OutOfFuel

# codes above this are out of reach for stream lookups
CODE_CAP = 1 << 64


class NeedMore(Exception):
    """A finite prefix was read past its end."""

    def __init__(self, prefix):
        super().__init__()
        self.prefix = prefix


class NotANumber(Exception):
    pass


class Baire:
    __slots__ = ("_key",)

    def key(self):
        k = getattr(self, "_key", None)
        if k is None:
            k = self._key = self._make_key()
        return k

    def __eq__(self, other):
        return isinstance(other, Baire) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return show(self)

    def in_sub(self) -> bool:
        raise NotImplementedError

    def at(self, n: int, fuel: Fuel) -> int:
        raise NotImplementedError

    def at_seq(self, seq, fuel: Fuel) -> int:
        code = encode_seq_capped(seq, CODE_CAP)
        if code is None:
            raise OutOfFuel()
        return self.at(code, fuel)


class Table(Baire):
    __slots__ = ("entries", "default", "_map", "_cap")

    def __init__(self, entries=None, default: int = 0):
        m = {int(k): int(v) for k, v in dict(entries or {}).items() if int(v) != default}
        if any(v < 0 for v in m.values()) or default < 0:
            raise PcaError("Baire values are natural numbers")
        self._map = m
        self.entries = tuple(sorted(m.items()))
        self.default = int(default)
        self._cap = max(m) if m else -1

    def _make_key(self):
        return ("table", self.entries, self.default)

    def in_sub(self) -> bool:
        return False

    def at(self, n: int, fuel: Fuel) -> int:
        return self._map.get(n, self.default)

    def at_seq(self, seq, fuel: Fuel) -> int:
        code = encode_seq_capped(seq, self._cap)
        if code is None:
            return self.default
        return self._map.get(code, self.default)

    def constant_beyond(self) -> int:
        """Largest code with a non-default entry (-1 if none)."""
        return self._cap


class Programmed(Baire):
    __slots__ = ("program",)

    def __init__(self, program: T.Term):
        if not program.closed:
            raise PcaError("stream programs must be closed terms")
        self.program = program

    def _make_key(self):
        return ("prog", T.to_sexpr(self.program))

    def in_sub(self) -> bool:
        return True

    def at(self, n: int, fuel: Fuel) -> int:
        fuel.tick(n)  # building the numeral costs its size
        v = T.normalize(T.app(self.program, curry_numeral(n)), fuel)
        out = decode_numeral(v)
        if out is None:
            raise NotANumber()
        return out

    def at_seq(self, seq, fuel: Fuel) -> int:
        code = encode_seq_capped(seq, max(fuel.left, 0))
        if code is None:
            raise OutOfFuel()
        return self.at(code, fuel)


class Prefix(Baire):
    """A finite initial segment; reading past it raises :class:`NeedMore`."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = tuple(values)

    def _make_key(self):
        return ("prefix", self.values)

    def in_sub(self) -> bool:
        return False

    def at(self, n: int, fuel: Fuel) -> int:
        if n < len(self.values):
            return self.values[n]
        raise NeedMore(self)


class Native(Baire):
    """A continuous functional of fixed arity, possibly partially applied."""

    __slots__ = ("name", "arity", "fn", "args")

    def __init__(self, name: str, arity: int, fn: Callable, args=()):
        self.name, self.arity, self.fn, self.args = name, arity, fn, tuple(args)

    def _make_key(self):
        return ("native", self.name, tuple(a.key() for a in self.args))

    def in_sub(self) -> bool:
        return all(a.in_sub() for a in self.args)

    def feed(self, b: Baire) -> Baire:
        args = self.args + (b,)
        if len(args) < self.arity:
            return Native(self.name, self.arity, self.fn, args)
        return self.fn(*args)

    def at_seq(self, seq, fuel: Fuel) -> int:
        if not seq:
            return 0
        p = Prefix(seq[1:])
        try:
            v = self.feed(p).at(seq[0], fuel)
        except NeedMore as e:
            if e.prefix is p:
                return 0
            raise
        return v + 1

    def at(self, n: int, fuel: Fuel) -> int:
        return self.at_seq(decode_seq(n), fuel)


class Stream(Baire):
    __slots__ = ("label", "parts", "fn", "extra")

    def __init__(self, label: str, parts, fn: Callable, extra=None):
        self.label, self.parts, self.fn, self.extra = label, tuple(parts), fn, extra

    def _make_key(self):
        return (self.label, self.extra, tuple(p.key() for p in self.parts))

    def in_sub(self) -> bool:
        return all(p.in_sub() for p in self.parts)

    def at(self, n: int, fuel: Fuel) -> int:
        fuel.tick()
        return self.fn(n, fuel)


def const(n: int) -> Stream:
    return Stream("num", (), lambda k, fuel: n, extra=n)


class Pair(Stream):
    __slots__ = ()

    def __init__(self, a: Baire, b: Baire):
        super().__init__(
            "pair", (a, b),
            lambda n, fuel: (a if n % 2 == 0 else b).at(n // 2, fuel),
        )


# ----------------------------------------------------------------------------
# application


def protocol(alpha: Baire, beta: Baire, n: int, fuel: Fuel) -> int:
    """The raw protocol; raises OutOfFuel / NotANumber / NeedMore."""
    prefix = []
    k = 0
    while True:
        fuel.tick()
        if isinstance(alpha, Table) and k:
            code = encode_seq_capped([n, *prefix], alpha.constant_beyond())
            if code is None:
                # every longer query has a larger code, so alpha is constant from here on
                if alpha.default == 0:
                    raise OutOfFuel()
                return alpha.default - 1
        v = alpha.at_seq([n, *prefix], fuel)
        if v > 0:
            return v - 1
        prefix.append(beta.at(k, fuel))
        k += 1


def k2_lookup(alpha: Baire, n: int, fuel: int = 10_000) -> Outcome:
    f = Fuel(fuel)
    try:
        v = alpha.at(n, f)
    except OutOfFuel:
        return FuelExhausted()
    except NotANumber:
        return Undefined("program returned a non-numeral")
    return Converged(v, f.used)


def k2_apply(alpha: Baire, beta: Baire, n: int, fuel: int = 10_000) -> Outcome:
    """Value of ``(alpha | beta)(n)`` by running the protocol literally."""
    f = Fuel(fuel)
    try:
        v = protocol(alpha, beta, n, f)
    except OutOfFuel:
        return FuelExhausted()
    except NotANumber:
        return Undefined("program returned a non-numeral")
    return Converged(v, f.used)


def trace(alpha: Baire, beta: Baire, n: int, fuel: int = 10_000):
    """Interrogation depth k used by the protocol, or None."""
    f = Fuel(fuel)
    prefix = []
    try:
        for k in range(fuel):
            f.tick()
            if alpha.at_seq([n, *prefix], f) > 0:
                return k
            prefix.append(beta.at(k, f))
    except (OutOfFuel, NotANumber):
        return None
    return None


def lazy_app(alpha: Baire, beta: Baire) -> Baire:
    """``alpha | beta`` as a lazy point (direct route for native functionals)."""
    if isinstance(alpha, Native):
        return alpha.feed(beta)
    return Stream("app", (alpha, beta), lambda n, fuel: protocol(alpha, beta, n, fuel))


def k2_in_subpca(alpha: Baire) -> bool:
    return alpha.in_sub()


# ----------------------------------------------------------------------------
# combinators


def _fst(p):
    if isinstance(p, Pair):
        return p.parts[0]
    return Stream("fst", (p,), lambda n, fuel: p.at(2 * n, fuel))


def _snd(p):
    if isinstance(p, Pair):
        return p.parts[1]
    return Stream("snd", (p,), lambda n, fuel: p.at(2 * n + 1, fuel))


def _succ(a):
    if isinstance(a, Stream) and a.label == "num":
        return const(a.extra + 1)
    return Stream("succ", (a,), lambda n, fuel: a.at(n, fuel) + 1)


I = Native("I", 1, lambda a: a)
K = Native("K", 2, lambda a, b: a)
S = Native("S", 3, lambda a, b, c: lazy_app(lazy_app(a, c), lazy_app(b, c)))
PAIR = Native("pair", 2, Pair)
FST = Native("fst", 1, _fst)
SND = Native("snd", 1, _snd)
SUCC = Native("succ", 1, _succ)

NATIVES = {"I": I, "K": K, "S": S, "pair": PAIR, "fst": FST, "snd": SND, "succ": SUCC}


def show(a: Baire) -> str:
    if isinstance(a, Table):
        entries = ", ".join(f"{k}: {v}" for k, v in a.entries)
        return f"(table {{{entries}}} {a.default})"
    if isinstance(a, Programmed):
        return f"(prog {T.to_sexpr(a.program)})"
    if isinstance(a, Native):
        if not a.args:
            return a.name
        return "(" + " ".join([a.name, *map(show, a.args)]) + ")"
    if isinstance(a, Prefix):
        return f"(prefix {list(a.values)})"
    if isinstance(a, Stream):
        if a.label == "num":
            return f"(num {a.extra})"
        return "(" + " ".join([a.label, *map(show, a.parts)]) + ")"
    return repr(a)


def from_json(obj, lam_pca=None) -> Baire:
    """``{"table": {"0": 1}, "default": 0}`` or ``{"program": "<s-expr>"}``."""
    if "table" in obj:
        return Table({int(k): v for k, v in obj["table"].items()}, obj.get("default", 0))
    if "program" in obj:
        from .pca import LambdaPca
        lam_pca = lam_pca or LambdaPca()
        return Programmed(lam_pca.parse_element(obj["program"]))
    if "native" in obj:
        return NATIVES[obj["native"]]
    if "num" in obj:
        return const(int(obj["num"]))
    raise PcaError(f"unrecognised Baire element: {obj!r}")


def to_json(a: Baire):
    if isinstance(a, Table):
        return {"table": {str(k): v for k, v in a.entries}, "default": a.default}
    if isinstance(a, Programmed):
        return {"program": T.to_sexpr(a.program)}
    if isinstance(a, Native) and not a.args:
        return {"native": a.name}
    if isinstance(a, Stream) and a.label == "num":
        return {"num": a.extra}
    return {"expr": show(a)}


class K2Pca(Pca):
    """Kleene's second algebra with the computable points as sub-PCA.

    Equality of points is checked on the first ``horizon`` entries, except
    that a Table never equals a computable point.  ``apply`` additionally
    probes the first ``probe`` entries of the result for definedness.
    """

    model = "k2"
    symbolic = False

    def __init__(self, horizon: int = 12, probe: int = 4, **kw):
        super().__init__(**kw)
        self.horizon, self.probe = horizon, probe
        self.k, self.s, self.i = K, S, I
        self.pair, self.fst, self.snd, self.succ = PAIR, FST, SND, SUCC

    def check(self, a) -> None:
        if not isinstance(a, Baire):
            raise PcaError(f"not a point of Baire space: {a!r}")

    def key(self, a):
        return a.key()

    def in_sub(self, a) -> bool:
        return a.in_sub()

    def apply(self, a, b, fuel: int = 10_000) -> Outcome:
        if fuel <= 0:
            raise PcaError("fuel must be positive")
        self.check(a)
        self.check(b)
        r = lazy_app(a, b)
        f = Fuel(fuel)
        try:
            for n in range(self.probe):
                r.at(n, f)
        except OutOfFuel:
            return FuelExhausted()
        except NotANumber:
            return Undefined("program returned a non-numeral")
        return Converged(r, f.used)

    def values(self, a, count: int, fuel: int = 10_000):
        f = Fuel(fuel)
        try:
            return [a.at(n, f) for n in range(count)]
        except (OutOfFuel, NotANumber):
            return None

    def equal(self, a, b) -> Optional[bool]:
        if a.key() == b.key():
            return True
        if a.in_sub() != b.in_sub():
            return False
        if isinstance(a, Table) and isinstance(b, Table):
            return False
        va, vb = self.values(a, self.horizon), self.values(b, self.horizon)
        if va is None or vb is None:
            return None
        return va == vb

    def numeral(self, n: int):
        return const(n)

    def numeral_decode(self, e) -> Optional[int]:
        if isinstance(e, Stream) and e.label == "num":
            return e.extra
        if not isinstance(e, Baire) or not e.in_sub():
            return None
        vs = self.values(e, self.horizon)
        if vs and all(v == vs[0] for v in vs):
            return vs[0]
        return None

    def unpair(self, a):
        if isinstance(a, Pair):
            return a.parts
        return None

    def make_pair(self, a, b):
        return Pair(a, b)

    def basis(self) -> list:
        ap = lambda f, *xs: _chain(f, *xs)
        n0, n1, n2 = const(0), const(1), const(2)
        KI = ap(K, I)
        inl = self.bracket("s", _pair_expr(n0))
        inr = self.bracket("s", _pair_expr(n1))
        progs = [Programmed(COMB["I"]), Programmed(COMB["succ"]),
                 Programmed(T.lam(curry_numeral(0)))]
        return [
            I, K, KI, S, PAIR, FST, SND, n0, n1, n2, SUCC,
            ap(K, K), ap(K, SND), ap(K, FST), ap(K, n0), ap(K, n1),
            inl, inr, ap(K, KI), ap(K, inl), ap(K, inr), *progs,
        ]

    def enum_all(self, i: int):
        if i % 2 == 0:
            return self.enum_sub(i // 2)
        j = i // 2
        return Table({j % 8: 1 + j // 8}, 0)

    def show(self, a) -> str:
        return show(a) if isinstance(a, Baire) else repr(a)

    def parse_element(self, text: str, fuel: int = 10_000) -> Baire:
        """Combinator expressions over the natives, ``(num n)``, ``(table {...} d)``."""
        import json
        text = text.strip()
        if text.startswith("{"):
            return from_json(json.loads(text))
        x = T.read_sexpr(text)
        return self._build(x)

    def _build(self, x):
        if isinstance(x, str):
            if x in NATIVES:
                return NATIVES[x]
            raise PcaError(f"unknown K2 constant {x!r}")
        if x and x[0] == "num":
            return const(int(x[1]))
        if x and x[0] == "prog":
            from .pca import LambdaPca
            return Programmed(LambdaPca().element(T.from_sexpr(x[1], LambdaPca().constants())))
        parts = [self._build(p) for p in (x[1:] if x and x[0] == "app" else x)]
        return _chain(*parts)


def _chain(f, *args):
    for a in args:
        f = lazy_app(f, a)
    return f


def _pair_expr(tag):
    from .pca import Hole, ap
    return ap(PAIR, tag, Hole("s"))
