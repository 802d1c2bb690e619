"""Untyped lambda terms: hash-consed de Bruijn syntax, s-expressions,
and a fuel-bounded normal-order normalizer.

Terms are interned, so two terms are structurally (alpha-)equal exactly
when they are the same object.  Bound variables are de Bruijn indices;
free variables are named (``Var``) and only appear in open terms such as
bracket-abstraction bodies or symbolic evaluation.
"""
from __future__ import annotations

import sys
import weakref
from contextlib import contextmanager
from itertools import count

_EMPTY = frozenset()
_TABLE: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()

# normal forms larger than this are treated like fuel exhaustion
SIZE_LIMIT = 200_000
# nesting depth beyond which evaluation gives up (keeps recursion bounded)
DEPTH_LIMIT = 5_000


class TermError(ValueError):
    pass


class OutOfFuel(Exception):
    pass


class Fuel:
    """Mutable step budget shared by one evaluation."""

    __slots__ = ("left", "used")

    def __init__(self, amount: int):
        self.left = amount
        self.used = 0

    def tick(self, n: int = 1) -> None:
        self.left -= n
        self.used += n
        if self.left < 0:
            raise OutOfFuel()


class Term:
    __slots__ = ("loose", "fv", "size", "depth", "__weakref__")

    def __repr__(self):
        return to_sexpr(self)

    # interned: identity is structural equality
    __eq__ = object.__eq__
    __hash__ = object.__hash__

    @property
    def closed(self) -> bool:
        return self.loose == 0 and not self.fv


class Var(Term):
    __slots__ = ("name",)


class Idx(Term):
    __slots__ = ("index",)


class Lam(Term):
    __slots__ = ("body",)


class App(Term):
    __slots__ = ("fn", "arg")


def var(name: str) -> Var:
    key = ("v", name)
    t = _TABLE.get(key)
    if t is None:
        t = Var()
        t.name = name
        t.loose, t.fv, t.size, t.depth = 0, frozenset((name,)), 1, 1
        _TABLE[key] = t
    return t


def idx(i: int) -> Idx:
    key = ("i", i)
    t = _TABLE.get(key)
    if t is None:
        t = Idx()
        t.index = i
        t.loose, t.fv, t.size, t.depth = i + 1, _EMPTY, 1, 1
        _TABLE[key] = t
    return t


def lam(body: Term) -> Lam:
    key = ("l", id(body))
    t = _TABLE.get(key)
    if t is None:
        t = Lam()
        t.body = body
        t.loose = max(body.loose - 1, 0)
        t.fv = body.fv
        t.size = body.size + 1
        t.depth = body.depth + 1
        _TABLE[key] = t
    return t


def app(fn: Term, arg: Term, *more: Term) -> Term:
    key = ("a", id(fn), id(arg))
    t = _TABLE.get(key)
    if t is None:
        t = App()
        t.fn, t.arg = fn, arg
        t.loose = max(fn.loose, arg.loose)
        t.fv = fn.fv | arg.fv if arg.fv else fn.fv
        t.size = fn.size + arg.size + 1
        t.depth = max(fn.depth, arg.depth) + 1
        _TABLE[key] = t
    for a in more:
        t = app(t, a)
    return t


def abstract(name: str, body: Term) -> Lam:
    """Bind the free variable ``name`` in ``body`` (named lambda)."""
    memo = {}

    def go(t, depth):
        if name not in t.fv:
            return t
        k = (id(t), depth)
        if k in memo:
            return memo[k]
        if isinstance(t, Var):
            r = idx(depth)
        elif isinstance(t, Lam):
            r = lam(go(t.body, depth + 1))
        else:
            r = app(go(t.fn, depth), go(t.arg, depth))
        memo[k] = r
        return r

    return lam(go(shift(body, 1), 0))


def lams(names, body: Term) -> Term:
    for n in reversed(list(names)):
        body = abstract(n, body)
    return body


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    if t.loose <= cutoff or by == 0:
        return t
    memo = {}

    def go(t, c):
        if t.loose <= c:
            return t
        k = (id(t), c)
        if k in memo:
            return memo[k]
        if isinstance(t, Idx):
            r = idx(t.index + by)
        elif isinstance(t, Lam):
            r = lam(go(t.body, c + 1))
        else:
            r = app(go(t.fn, c), go(t.arg, c))
        memo[k] = r
        return r

    return go(t, cutoff)


def instantiate(body: Term, arg: Term) -> Term:
    """Contract the redex (lam body) arg."""
    if body.loose == 0:
        return body
    memo = {}

    def go(t, d):
        if t.loose <= d:
            return t
        k = (id(t), d)
        if k in memo:
            return memo[k]
        if isinstance(t, Idx):
            i = t.index
            r = shift(arg, d) if i == d else idx(i - 1)
        elif isinstance(t, Lam):
            r = lam(go(t.body, d + 1))
        else:
            r = app(go(t.fn, d), go(t.arg, d))
        memo[k] = r
        return r

    return go(body, 0)


def substitute(t: Term, name: str, value: Term) -> Term:
    """Replace free ``Var(name)`` by the closed term ``value``."""
    if value.loose:
        raise TermError("substituted value must not have loose indices")
    memo = {}

    def go(t):
        if name not in t.fv:
            return t
        k = id(t)
        if k in memo:
            return memo[k]
        if isinstance(t, Var):
            r = value
        elif isinstance(t, Lam):
            r = lam(go(t.body))
        else:
            r = app(go(t.fn), go(t.arg))
        memo[k] = r
        return r

    return go(t)


def spine(t: Term):
    """Split ``t`` into head and argument list."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def whnf(t: Term, fuel: Fuel) -> Term:
    stack = []
    while True:
        if isinstance(t, App):
            stack.append(t.arg)
            t = t.fn
        elif isinstance(t, Lam) and stack:
            fuel.tick()
            t = instantiate(t.body, stack.pop())
            if t.size > SIZE_LIMIT or t.depth > DEPTH_LIMIT:
                raise OutOfFuel()
        else:
            break
    while stack:
        t = app(t, stack.pop())
    return t


# recursion needed for terms up to DEPTH_LIMIT deep (a few frames per level)
_RECURSION = 4 * DEPTH_LIMIT + 2000


@contextmanager
def deep_recursion():
    """Temporarily raise the interpreter's recursion limit."""
    old = sys.getrecursionlimit()
    need = _stack_depth() + _RECURSION
    if old >= need:
        yield
        return
    sys.setrecursionlimit(need)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def _stack_depth() -> int:
    f, n = sys._getframe(), 0
    while f is not None:
        f, n = f.f_back, n + 1
    return n


def normalize(t: Term, fuel: Fuel) -> Term:
    """Normal-order (leftmost-outermost) normal form; raises OutOfFuel."""
    with deep_recursion():
        return _normalize(t, fuel, 0)


def _normalize(t: Term, fuel: Fuel, level: int) -> Term:
    if level > DEPTH_LIMIT:
        raise OutOfFuel()
    t = whnf(t, fuel)
    if isinstance(t, Lam):
        return lam(_normalize(t.body, fuel, level + 1))
    head, args = spine(t)
    out = head
    for a in args:
        out = app(out, _normalize(a, fuel, level + 1))
    if out.size > SIZE_LIMIT or out.depth > DEPTH_LIMIT:
        raise OutOfFuel()
    return out


def is_normal(t: Term) -> bool:
    if isinstance(t, Lam):
        return is_normal(t.body)
    head, args = spine(t)
    if isinstance(head, Lam) and args:
        return False
    return all(is_normal(a) for a in args)


def head_vars(t: Term) -> frozenset:
    """Free variables occurring in the head position of an application."""
    out = set()
    stack = [t]
    seen = set()
    while stack:
        u = stack.pop()
        if id(u) in seen or not u.fv:
            continue
        seen.add(id(u))
        if isinstance(u, Lam):
            stack.append(u.body)
        elif isinstance(u, App):
            h, args = spine(u)
            if isinstance(h, Var):
                out.add(h.name)
            else:
                stack.append(h)
            stack.extend(args)
    return frozenset(out)


# ----------------------------------------------------------------------------
# s-expressions

_fresh = count()


def fresh_name(prefix: str = "%g") -> str:
    return f"{prefix}{next(_fresh)}"


def tokenize(text: str):
    return text.replace("(", " ( ").replace(")", " ) ").split()


def read_sexpr(text: str):
    tokens = tokenize(text)
    if not tokens:
        raise TermError("empty expression")
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(tokens):
            raise TermError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while True:
                if pos >= len(tokens):
                    raise TermError("missing ')'")
                if tokens[pos] == ")":
                    pos += 1
                    return items
                items.append(read())
        if tok == ")":
            raise TermError("unexpected ')'")
        return tok

    out = read()
    if pos != len(tokens):
        raise TermError(f"trailing tokens: {' '.join(tokens[pos:])}")
    return out


def parse(text: str, constants=None) -> Term:
    """Parse the s-expression term syntax.

    Forms: identifiers, ``(lam x body)``, ``(lam (x y) body)``,
    ``(app f a b ...)`` and, through ``constants``, named combinators
    (``K``, ``S``, ...) and macros such as ``(num 3)`` or ``(pair a b)``.
    """
    return from_sexpr(read_sexpr(text), constants or {})


def from_sexpr(x, constants) -> Term:
    if isinstance(x, str):
        if x in constants and not callable(constants[x]):
            return constants[x]
        if x.isdigit():
            raise TermError(f"bare number {x!r}; write (num {x})")
        return var(x)
    if not x:
        raise TermError("empty list")
    op, *rest = x
    if op == "lam":
        if len(rest) != 2:
            raise TermError("lam takes a binder and a body")
        binders = rest[0] if isinstance(rest[0], list) else [rest[0]]
        if not binders or not all(isinstance(b, str) for b in binders):
            raise TermError("bad binder list")
        return lams(binders, from_sexpr(rest[1], constants))
    if op == "app":
        if len(rest) < 2:
            raise TermError("app takes at least two arguments")
        parts = [from_sexpr(r, constants) for r in rest]
        return app(*parts)
    if isinstance(op, str) and callable(constants.get(op)):
        return constants[op](*[r if isinstance(r, str) and r.isdigit() else from_sexpr(r, constants) for r in rest])
    # implicit application: (f a b)
    parts = [from_sexpr(p, constants) for p in x]
    if len(parts) == 1:
        return parts[0]
    return app(*parts)


_NAMES = "abcdefghijklmnopqrstuvwxyz"


def _binder_names(avoid):
    """Binder names by depth, skipping the free variables of the term."""
    out, counter = [], count()

    def name(depth):
        while len(out) <= depth:
            i = next(counter)
            cand = _NAMES[i] if i < len(_NAMES) else f"v{i}"
            if cand not in avoid:
                out.append(cand)
        return out[depth]

    return name


def to_sexpr(t: Term, names=None) -> str:
    """Render a term; ``names`` maps known closed terms to symbols."""
    if names is None:
        lookup = lambda t: None
    elif callable(names):
        lookup = names
    else:
        lookup = names.get
    _binder_name = _binder_names(t.fv)

    def go(t, depth):
        if t.closed:
            label = lookup(t)
            if label is not None:
                return label
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Idx):
            if t.index >= depth:
                return f"#{t.index - depth}"
            return _binder_name(depth - 1 - t.index)
        if isinstance(t, Lam):
            binders = []
            while isinstance(t, Lam):
                binders.append(_binder_name(depth))
                depth += 1
                t = t.body
                if t.closed and lookup(t) is not None:
                    break
            b = binders[0] if len(binders) == 1 else "(" + " ".join(binders) + ")"
            return f"(lam {b} {go(t, depth)})"
        head, args = spine(t)
        return "(app " + " ".join(go(u, depth) for u in [head, *args]) + ")"

    return go(t, 0)
