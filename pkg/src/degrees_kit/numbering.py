"""Goedel numbering of de Bruijn terms and of finite sequences.

Both codings are bijections onto the naturals, built from the Cantor
pairing function.  See ``docs/numbering.md`` for the exact definition.
"""
from __future__ import annotations

from math import isqrt

from .terms import Idx, Lam, Term, TermError, app, idx, lam


def cantor_pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def encode_seq(seq) -> int:
    """<> = 0 and <a, rest...> = 1 + pair(a, <rest...>)."""
    code = 0
    for a in reversed(list(seq)):
        code = 1 + cantor_pair(a, code)
    return code


def encode_seq_capped(seq, cap: int):
    """Like :func:`encode_seq` but returns None as soon as the code exceeds ``cap``.

    Codes grow monotonically with every entry, so an intermediate value
    above the cap already bounds the final code from below.
    """
    code = 0
    for a in reversed(list(seq)):
        if a > cap:
            return None
        code = 1 + cantor_pair(a, code)
        if code > cap:
            return None
    return code


def decode_seq(code: int) -> tuple[int, ...]:
    out = []
    while code:
        a, code = cantor_unpair(code - 1)
        out.append(a)
    return tuple(out)


def encode_term(t: Term) -> int:
    """Idx i -> 3i, Lam b -> 3c(b)+1, App f a -> 3 pair(c(f), c(a)) + 2."""
    if t.fv:
        raise TermError("cannot number a term with named free variables")
    memo = {}

    def go(u):
        k = id(u)
        if k in memo:
            return memo[k]
        if isinstance(u, Idx):
            r = 3 * u.index
        elif isinstance(u, Lam):
            r = 3 * go(u.body) + 1
        else:
            r = 3 * cantor_pair(go(u.fn), go(u.arg)) + 2
        memo[k] = r
        return r

    return go(t)


def decode_term(code: int) -> Term:
    if code < 0:
        raise TermError("negative code")
    q, r = divmod(code, 3)
    if r == 0:
        return idx(q)
    if r == 1:
        return lam(decode_term(q))
    f, a = cantor_unpair(q)
    return app(decode_term(f), decode_term(a))

