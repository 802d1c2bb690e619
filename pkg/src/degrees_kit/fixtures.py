"""A corpus of small realizability predicates used by the example suite."""
from __future__ import annotations

from .assemblies import Assembly, coproduct, nabla, nat_assembly, product
from .logic import RzPredicate, bot, bottom_predicate, top
from .pca import Pca
from .rsets import ALL, EMPTY, arrow, finite, paired, union


def corpus(pca: Pca) -> dict:
    """Named predicates over finite assemblies (insertion order is stable)."""
    n = pca.numeral

    def num(*ks):
        return finite([n(k) for k in ks])

    N1, N2, N3, N4 = (nat_assembly(pca, k) for k in (1, 2, 3, 4))
    one = nabla(pca, ["*"], "1")
    nab2 = nabla(pca, [0, 1], "nabla2")
    nab3 = nabla(pca, [0, 1, 2], "nabla3")
    overlap = Assembly(pca, ["a", "b", "c"], {"a": num(0, 1), "b": num(1, 2), "c": ALL}, "Overlap")

    c = {}
    c["top_N2"] = top(N2)
    c["bot_N2"] = bot(N2)
    c["true_one"] = top(one)
    c["false_one"] = bot(one)
    c["split_N2"] = RzPredicate(N2, {0: num(0), 1: num(1)}, "split_N2")
    c["mixed_N3"] = RzPredicate(N3, {0: ALL, 1: EMPTY, 2: num(0)}, "mixed_N3")
    c["dense_N3"] = RzPredicate(N3, {0: ALL, 1: num(1), 2: num(0, 1)}, "dense_N3")
    c["split_nabla2"] = RzPredicate(nab2, {0: num(0), 1: num(1)}, "split_nabla2")
    c["mixed_nabla2"] = RzPredicate(nab2, {0: ALL, 1: EMPTY}, "mixed_nabla2")
    c["tagged_N2"] = RzPredicate(N2, {x: paired(pca, num(x), ALL) for x in (0, 1)}, "tagged_N2")
    c["fun_N2"] = RzPredicate(N2, {0: arrow(ALL, num(0)), 1: arrow(num(0), num(1))}, "fun_N2")
    c["union_N2"] = RzPredicate(N2, {0: union(num(0), paired(pca, num(1), ALL)), 1: num(2)}, "union_N2")
    c["overlap"] = RzPredicate(overlap, {"a": num(0), "b": EMPTY, "c": num(1)}, "overlap")
    C = coproduct(N2, one)
    c["coprod"] = RzPredicate(C, {(0, 0): num(0), (0, 1): ALL, (1, "*"): num(1)}, "coprod")
    P = product(N2, nab2)
    c["prod"] = RzPredicate(P, {(x, y): num(x) if y == 0 else ALL for x, y in P.carrier}, "prod")
    c["zero_N1"] = RzPredicate(N1, {0: num(0)}, "zero_N1")
    c["dense_nabla3"] = RzPredicate(nab3, {k: num(k) for k in range(3)}, "dense_nabla3")
    c["two_one"] = RzPredicate(one, {"*": num(0, 1)}, "two_one")
    c["guard_N2"] = RzPredicate(N2, {x: arrow(num(0), ALL) for x in (0, 1)}, "guard_N2")
    c["lazy_N2"] = RzPredicate(N2, {0: EMPTY, 1: ALL}, "lazy_N2")
    c["parity_N4"] = RzPredicate(N4, {k: num(k % 2) for k in range(4)}, "parity_N4")
    c["bottom"] = bottom_predicate("bottom")
    return c


def finite_realizers(phi: RzPredicate) -> bool:
    """Every point has finitely many listed realizers."""
    return not phi.is_bottom and all(phi.assembly.realize(x).finite for x in phi.carrier)
