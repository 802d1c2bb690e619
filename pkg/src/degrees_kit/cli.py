"""Command-line front end.

Exit codes: 0 holds / pass, 1 fails, 2 unknown or no witness found,
3 and above for usage, parse and input errors.
"""
from __future__ import annotations

import json
import os
import shlex
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import click

from . import degrees as D
from . import terms as T
from . import weihrauch as W
from .assemblies import AssemblyError
from .fixtures import corpus, finite_realizers
from .k2 import K2Pca
from .logic import bottom_predicate, predicate_from_json, predicate_to_json
from .pca import K1Pca, LambdaPca, PcaError
from .rsets import Holds, Unknown

EXIT_ERROR = 3
CONFIG_ENV = "DEGREES_KIT_CONFIG"
MODELS = ("lambda", "k1", "k2")


@dataclass
class RunConfig:
    fuel: int = 10_000
    search_depth: int = 2000
    samples: int = 64
    seed: int = 0
    pca_model: str = "lambda"

    def validate(self):
        for k in ("fuel", "search_depth", "samples"):
            if getattr(self, k) <= 0:
                raise click.UsageError(f"{k} must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise click.UsageError("seed must be a 64-bit natural number")
        if self.pca_model not in MODELS:
            raise click.UsageError(f"unknown model {self.pca_model!r}")
        return self

    def flags(self) -> list:
        return ["--fuel", str(self.fuel), "--depth", str(self.search_depth),
                "--samples", str(self.samples), "--seed", str(self.seed), "--model", self.pca_model]


def load_config(fuel, depth, samples, seed, model) -> RunConfig:
    cfg = RunConfig()
    path = os.environ.get(CONFIG_ENV)
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, ValueError) as e:
            raise click.UsageError(f"cannot read {CONFIG_ENV}={path}: {e}")
        aliases = {"depth": "search_depth", "model": "pca_model"}
        for k, v in data.items():
            k = aliases.get(k, k)
            if k not in asdict(cfg):
                raise click.UsageError(f"unknown config key {k!r}")
            setattr(cfg, k, v)
    for k, v in (("fuel", fuel), ("search_depth", depth), ("samples", samples),
                 ("seed", seed), ("pca_model", model)):
        if v is not None:
            setattr(cfg, k, v)
    return cfg.validate()


def make_pca(model: str):
    return {"lambda": LambdaPca, "k1": K1Pca, "k2": K2Pca}[model]()


def common(f):
    f = click.option("--json", "as_json", is_flag=True, help="Machine-readable report.")(f)
    f = click.option("--model", type=click.Choice(MODELS), default=None)(f)
    f = click.option("--seed", type=int, default=None)(f)
    f = click.option("--samples", type=int, default=None)(f)
    f = click.option("--depth", type=int, default=None, help="Witness search depth.")(f)
    f = click.option("--fuel", type=int, default=None, help="Step budget per application.")(f)
    return f


# ----------------------------------------------------------------------------
# reports


def _plain(x):
    """JSON-safe rendering of labels and verdict data."""
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return repr(x)


def emit(report: dict, as_json: bool, out=None):
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(_plain(report), sort_keys=True, ensure_ascii=False) + "\n")
        return
    for k in sorted(report):
        v = report[k]
        if k == "trace" and v:
            out.write("trace:\n")
            for line in v:
                out.write(f"  {line}\n")
        elif k == "config":
            out.write("config: " + " ".join(f"{a}={b}" for a, b in sorted(v.items())) + "\n")
        elif v not in (None, [], ""):
            out.write(f"{k}: {_plain(v)}\n")


def verdict_code(v) -> int:
    return 0 if v.holds else 1 if v.fails else 2


def reproduce(argv_tail: list, cfg: RunConfig, witness: str = None) -> str:
    parts = ["degrees-kit", *argv_tail]
    if witness is not None:
        parts += ["--witness", witness]
    return " ".join(shlex.quote(p) for p in parts + cfg.flags())


def fail(msg: str, code: int = EXIT_ERROR):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


# ----------------------------------------------------------------------------
# inputs


def split_sexprs(text: str) -> list:
    """Top-level s-expressions of ``text`` as strings."""
    items = T.read_sexpr("(" + text + ")")

    def show(x):
        return x if isinstance(x, str) else "(" + " ".join(show(y) for y in x) + ")"

    out = []
    for x in items:
        # "(F)" is a parenthesised atom; unwrap it
        if isinstance(x, list) and len(x) == 1:
            x = x[0]
        out.append(show(x))
    return out


def parse_witness(pca, text: str) -> D.Witness:
    parts = split_sexprs(text)
    if len(parts) != 2:
        raise PcaError("a witness is two expressions: l1 and l2")
    return D.Witness(*(pca.parse_element(p) for p in parts))


def load_instance(ref: str, pca):
    fx = corpus(pca)
    if ref in fx:
        return fx[ref]
    data = _read_json(ref)
    if data.get("bottom"):
        return bottom_predicate(data.get("name", "bottom"))
    return predicate_from_json(data, pca, name=Path(ref).stem)


def load_ext(ref: str, pca):
    if ref == "lpo":
        return W.builtin_lpo(pca)
    if ref == "wlem":
        return W.builtin_wlem(pca)
    fx = corpus(pca)
    if ref in fx:
        if not finite_realizers(fx[ref]):
            raise AssemblyError(f"fixture {ref!r} has no finite realizer table")
        return W.from_instance(fx[ref])
    return W.ext_from_json(_read_json(ref), pca, Path(ref).stem)


def load_ord(ref: str, pca):
    data = _read_json(ref)
    table = [(W._elem(pca, e["r"]), _rset(e["theta"], pca)) for e in data["sections"]]
    probes = [W._elem(pca, p) for p in data.get("probes", [])]
    return W.ord_table(pca, table, probes, data.get("name", Path(ref).stem))


def _rset(obj, pca):
    from .assemblies import rset_from_json
    return rset_from_json(obj, pca)


def _read_json(ref: str):
    try:
        return json.loads(Path(ref).read_text())
    except FileNotFoundError:
        raise AssemblyError(f"no fixture or file named {ref!r}")
    except ValueError as e:
        raise AssemblyError(f"{ref}: invalid JSON ({e})")


INPUT_ERRORS = (AssemblyError, PcaError, T.TermError, KeyError, ValueError, D.ResourceError)


# ----------------------------------------------------------------------------
# commands


@click.group()
def main():
    """Realizability degrees at desk scale."""


@main.command("eval")
@click.argument("term")
@common
def cmd_eval(term, fuel, depth, samples, seed, model, as_json):
    """Evaluate an s-expression term (free names stay symbolic)."""
    cfg = load_config(fuel, depth, samples, seed, model)
    pca = make_pca(cfg.pca_model)
    try:
        if cfg.pca_model == "k2":
            value = pca.parse_element(term, cfg.fuel)
            shown = pca.show(value)
        else:
            t = LambdaPca().parse(term)
            nf = T.normalize(t, T.Fuel(cfg.fuel))
            shown = T.to_sexpr(nf)
            if cfg.pca_model == "k1" and not nf.fv:
                shown += f"  = {pca.show(pca.from_term(nf))}"
    except T.OutOfFuel:
        emit({"outcome": "fuel-exhausted", "config": asdict(cfg)}, as_json)
        sys.exit(2)
    except INPUT_ERRORS as e:
        fail(f"cannot parse {term!r}: {e}")
    if as_json:
        emit({"outcome": "converged", "value": shown, "config": asdict(cfg)}, True)
    else:
        click.echo(shown)


@main.command("bracket")
@click.argument("body")
@click.option("--var", "names", multiple=True, required=True, help="Variable to abstract (repeatable, outermost first).")
@common
def cmd_bracket(body, names, fuel, depth, samples, seed, model, as_json):
    """Compile [x1]...[xn] BODY to an element."""
    cfg = load_config(fuel, depth, samples, seed, model)
    pca = make_pca(cfg.pca_model)
    try:
        t = LambdaPca().parse(body)
        inner = LambdaPca().expr_of_term(t, cfg.fuel)
        if cfg.pca_model != "lambda":
            inner = _convert_expr(inner, pca)
        value = pca.bracket(list(names), inner, cfg.fuel)
    except INPUT_ERRORS as e:
        fail(f"cannot compile: {e}")
    emit({"value": pca.show(value), "config": asdict(cfg)} if as_json else {"value": pca.show(value)}, as_json)


def _convert_expr(e, pca):
    from .pca import Ap, Hole
    if isinstance(e, Hole):
        return e
    if isinstance(e, Ap):
        return Ap(_convert_expr(e.fn, pca), _convert_expr(e.arg, pca))
    return pca.parse_element(T.to_sexpr(e))


@main.command("reduce")
@click.argument("kind", type=click.Choice(["instance", "ord", "ext"]))
@click.argument("lhs")
@click.argument("rhs")
@click.option("--witness", default=None, help='Two s-expressions "(l1) (l2)"; omit to search.')
@common
def cmd_reduce(kind, lhs, rhs, witness, fuel, depth, samples, seed, model, as_json):
    """Check (with --witness) or search a reduction LHS <= RHS."""
    if kind == "ext" and model is None and (lhs in ("lpo", "wlem") or rhs in ("lpo", "wlem")):
        model = "k2"
    cfg = load_config(fuel, depth, samples, seed, model)
    pca = make_pca(cfg.pca_model)
    tail = ["reduce", kind, lhs, rhs]
    try:
        if kind == "instance":
            a, b = load_instance(lhs, pca), load_instance(rhs, pca)
        elif kind == "ext":
            a, b = load_ext(lhs, pca), load_ext(rhs, pca)
        else:
            a, b = load_ord(lhs, pca), load_ord(rhs, pca)
        w = parse_witness(pca, witness) if witness else None
    except INPUT_ERRORS as e:
        fail(f"bad input: {e}")
    report = {"kind": kind, "lhs": lhs, "rhs": rhs, "config": asdict(cfg), "trace": []}
    if w is not None:
        v = _check(kind, a, b, w, cfg)
        report["witness"] = w.show(pca)
    else:
        r = _search(kind, a, b, cfg)
        v = r.verdict
        report["candidates_tried"] = r.tried
        if r.found:
            w = r.witness
            report["witness"] = w.show(pca)
        else:
            report["witness"] = None
            report["result"] = "absent"
            if r.diagnostic:
                report["diagnostic"] = r.diagnostic
    report["verdict"] = v.tag
    report["detail"] = v.detail
    if v.data:
        report["evidence"] = _plain(v.data)
    if v.fails:
        report["reproduce"] = reproduce(tail, cfg, w.show(pca) if w is not None else None)
    report["trace"] = [f"{v.tag}: {v.detail}"]
    emit(report, as_json)
    # a search that finds nothing reports "absent" (exit 2) even when it proved a conflict
    sys.exit(verdict_code(v) if w is not None else 2)


def _check(kind, a, b, w, cfg):
    if kind == "instance":
        return D.check_reduction(a, b, w, cfg.fuel, cfg.samples)
    if kind == "ext":
        return W.check_ext_reduction(a, b, w, cfg.fuel, cfg.samples)
    return W.check_ord_reduction(a, b, w, cfg.fuel, cfg.samples)


def _search(kind, a, b, cfg):
    if kind == "instance":
        return D.search_reduction(a, b, cfg.search_depth, cfg.fuel, cfg.samples,
                                  hints=[D.identity_witness(a.pca if not a.is_bottom else b.pca)]
                                  if not (a.is_bottom and b.is_bottom) else ())
    if kind == "ord":
        a, b = W.embed_ordinary(a), W.embed_ordinary(b)
    return W.search_ext_reduction(a, b, cfg.search_depth, cfg.fuel, cfg.samples,
                                  hints=[D.identity_witness(a.pca)])


@main.command("lattice")
@click.argument("op", type=click.Choice(["sup", "inf", "impl", "param"]))
@click.argument("inputs", nargs=-1, required=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Write the predicate JSON here.")
@common
def cmd_lattice(op, inputs, output, fuel, depth, samples, seed, model, as_json):
    """Build sup/inf/impl of two predicates, or PHI^K for ``param PHI K``."""
    cfg = load_config(fuel, depth, samples, seed, model)
    pca = make_pca(cfg.pca_model)
    if len(inputs) != 2:
        fail(f"{op} takes two arguments")
    try:
        phi = load_instance(inputs[0], pca)
        if op == "param":
            k = int(inputs[1])
            if k <= 0:
                raise ValueError("the exponent must be positive")
        else:
            psi = load_instance(inputs[1], pca)
    except INPUT_ERRORS as e:
        fail(f"bad input: {e}")
    checks = []
    if op == "sup":
        out = D.sup2(phi, psi)
        inl, inr = D.inclusion_witnesses(pca)
        checks = [("left inclusion", phi, out, inl), ("right inclusion", psi, out, inr)]
    elif op == "inf":
        out = D.inf2(phi, psi)
        pl, pr = D.projection_witnesses(pca)
        checks = [("left projection", out, phi, pl), ("right projection", out, psi, pr)]
    elif op == "param":
        out = D.parameterize(phi, k)
        checks = [("diagonal", phi, out, D.constant_tuple_witness(pca, k))]
    else:
        out = D.heyting_impl_degree(phi, psi, D.default_catalog(phi, psi), min(cfg.search_depth, 200),
                                    candidates=_impl_candidates(pca, phi, psi, cfg),
                                    fuel=cfg.fuel, samples=cfg.samples)
    trace, verdicts = [], []
    for name, a, b, w in checks:
        v = D.check_reduction(a, b, w, cfg.fuel, cfg.samples)
        verdicts.append(v)
        trace.append(f"{name} {w.show(pca)}: {v.tag}")
    if op == "impl":
        v = Unknown("no realizer of the implication condition found") if out.degenerate \
            else Holds(f"{len(out.carrier)} (realizer, truth value) points")
        verdicts.append(v)
        trace.append(f"implication condition: {v.tag} ({v.detail})")
    data = predicate_to_json(out)
    if output:
        Path(output).write_text(json.dumps(_plain(data), sort_keys=True, indent=1) + "\n")
    report = {"op": op, "inputs": list(inputs), "name": out.name, "config": asdict(cfg), "trace": trace,
              "verdict": "Holds" if all(v.holds for v in verdicts) else
              "Fails" if any(v.fails for v in verdicts) else "Unknown"}
    if output:
        report["output"] = output
    elif as_json:
        report["predicate"] = data
    emit(report, as_json)
    sys.exit({"Holds": 0, "Fails": 1, "Unknown": 2}[report["verdict"]])


def _impl_candidates(pca, phi, psi, cfg) -> list:
    """Realizers worth trying for the implication condition.

    Constant maps into the right disjunct (one per listed realizer of a
    psi point), and the map into the left disjunct built from a
    reduction phi <= psi when the search finds one.
    """
    from .pca import Hole, ap
    if phi.is_bottom or psi.is_bottom:
        return []
    s, p = Hole("s"), Hole("p")
    right = pca.translate("p", ap(pca.pair, pca.numeral(1), p))
    out = []
    for y in psi.carrier:
        R = psi.assembly.realize(y)
        if R.finite:
            out += [pca.bracket("s", ap(pca.pair, t, right)) for t in R.elements]
    r = D.search_reduction(phi, psi, min(cfg.search_depth, 300), cfg.fuel, 16, hints=[D.identity_witness(pca)])
    if r.found:
        left = pca.translate("p", ap(pca.pair, pca.numeral(0), ap(r.witness.l2, s, p)))
        out.append(pca.bracket("s", ap(pca.pair, ap(r.witness.l1, s), left)))
    return out


@main.command("examples")
@click.argument("which", type=click.Choice(["paper", "all"]))
@click.option("--only", type=int, multiple=True, help="Run only the numbered check (repeatable).")
@common
def cmd_examples(which, only, fuel, depth, samples, seed, model, as_json):
    """Run the numbered example checks and print a pass/fail table."""
    from . import suite
    cfg = load_config(fuel, depth, samples, seed, model)
    settings = suite.Settings(cfg.fuel, cfg.search_depth, cfg.samples, cfg.seed)
    results = suite.run(which, settings, set(only) if only else None)
    if as_json:
        emit({"suite": which, "config": asdict(cfg), "results": [r.to_json() for r in results]}, True)
    else:
        for r in results:
            c = r.counts
            click.echo(f"{r.number:>2} {r.status.upper():<7} {r.name}: {r.detail}"
                       + (f" [{c['pass']} pass, {c['fail']} fail, {c['unknown']} unknown]" if c else ""))
    statuses = {r.status for r in results}
    sys.exit(1 if "fail" in statuses else 2 if "unknown" in statuses else 0)


def run(argv=None):
    """Console entry point; click's usage errors get exit code 3, not 2."""
    try:
        rv = main.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        sys.exit(EXIT_ERROR + 1)
    except click.ClickException as e:
        e.show()
        sys.exit(EXIT_ERROR)
    sys.exit(rv or 0)


if __name__ == "__main__":
    run()
