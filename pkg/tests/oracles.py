"""Reference implementations used only by the tests.

They are written independently of the package: named variables with
capture-avoiding substitution instead of de Bruijn indices, pairing by
walking the diagonals, and so on.
"""
import itertools

# ----------------------------------------------------------------------------
# named lambda terms: ("v", name) | ("l", name, body) | ("a", f, x)

_counter = itertools.count()


def free(t):
    if t[0] == "v":
        return {t[1]}
    if t[0] == "l":
        return free(t[2]) - {t[1]}
    return free(t[1]) | free(t[2])


def subst(t, x, s):
    if t[0] == "v":
        return s if t[1] == x else t
    if t[0] == "a":
        return ("a", subst(t[1], x, s), subst(t[2], x, s))
    y, body = t[1], t[2]
    if y == x:
        return t
    if y in free(s):
        z = f"_{y}{next(_counter)}"
        body = subst(body, y, ("v", z))
        y = z
    return ("l", y, subst(body, x, s))


class Diverged(Exception):
    pass


def normalize(t, budget=20_000):
    """Leftmost-outermost normal form, or Diverged."""
    steps = [budget]

    def step(t):
        steps[0] -= 1
        if steps[0] < 0:
            raise Diverged()

    def whnf(t):
        while t[0] == "a":
            f = whnf(t[1])
            if f[0] != "l":
                return ("a", f, t[2])
            step(t)
            t = subst(f[2], f[1], t[2])
        return t

    def nf(t):
        t = whnf(t)
        if t[0] == "l":
            return ("l", t[1], nf(t[2]))
        if t[0] == "a":
            return ("a", nf_head(t[1]), nf(t[2]))
        return t

    def nf_head(t):
        # t is already in whnf and not a lambda
        if t[0] == "a":
            return ("a", nf_head(t[1]), nf(t[2]))
        return t

    return nf(t)


def to_debruijn(t, env=()):
    """Nested tuples ("i", k) / ("L", b) / ("A", f, x) for comparison."""
    if t[0] == "v":
        return ("i", env.index(t[1])) if t[1] in env else ("free", t[1])
    if t[0] == "l":
        return ("L", to_debruijn(t[2], (t[1],) + env))
    return ("A", to_debruijn(t[1], env), to_debruijn(t[2], env))


def from_package(term, names=()):
    """Convert a package term to a named term."""
    from degrees_kit import terms as T
    if isinstance(term, T.Idx):
        return ("v", names[term.index])
    if isinstance(term, T.Var):
        return ("v", term.name)
    if isinstance(term, T.Lam):
        x = f"x{len(names)}"
        return ("l", x, from_package(term.body, (x,) + names))
    return ("a", from_package(term.fn, names), from_package(term.arg, names))


def package_shape(term):
    from degrees_kit import terms as T
    if isinstance(term, T.Idx):
        return ("i", term.index)
    if isinstance(term, T.Var):
        return ("free", term.name)
    if isinstance(term, T.Lam):
        return ("L", package_shape(term.body))
    return ("A", package_shape(term.fn), package_shape(term.arg))


def church_free_numeral(n):
    """Curry numeral built from named terms: 0 = I, n+1 = pair F n."""
    I = ("l", "x", ("v", "x"))
    F = ("l", "x", ("l", "y", ("v", "y")))
    t = I
    for _ in range(n):
        t = ("l", "z", ("a", ("a", ("v", "z"), F), t))
    return t


# ----------------------------------------------------------------------------
# pairing by enumeration


def diagonal_pairs(limit):
    """The first ``limit`` pairs in Cantor order (by diagonal, y ascending)."""
    out = []
    s = 0
    while len(out) < limit:
        for y in range(s + 1):
            out.append((s - y, y))
        s += 1
    return out[:limit]


# ----------------------------------------------------------------------------
# orders

# number of partial orders on a labelled n-element set
LABELLED_POSETS = [1, 1, 3, 19, 219]


def brute_upper_sets(elements, leq):
    out = []
    for r in range(len(elements) + 1):
        for S in itertools.combinations(elements, r):
            S = set(S)
            if all(y in S for x in S for y in elements if leq(x, y)):
                out.append(frozenset(S))
    return out
