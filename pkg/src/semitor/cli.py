"""Command-line interface: ``semitor <group> <command> [options]``.

Output is JSON with sorted keys (or TSV for tables with ``--format tsv``).
Exit codes: 0 success, 1 validation error, 2 budget exceeded, 3 internal
inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path

from . import __version__
from .cartan import PRESETS, CartanDatum, RootDatum, classify, load_datum, preset
from .characters import CharacterEngine
from .convex import ConvexOrder, Imag, Real, Window
from .errors import SemitorError, UsageError, ValidationError
from .qalgebra import GradedAlgebra, koszul_homology, quadratic_dual, tor_dual_homology
from .roots import RootSystem
from .weyl import DEFAULT_ITERATION_CAP, TranslationVector, WeylGroup


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2, which is reserved for budgets
        raise UsageError(message)


# -- session ----------------------------------------------------------------------


class Session:
    def __init__(self, args):
        self.args = args
        if args.datum:
            self.datum = _read_datum(args.datum)
            self.source = str(args.datum)
        else:
            self.datum = preset(args.type)
            self.source = args.type
        self.rd = RootDatum(self.datum)
        self.W = WeylGroup(self.rd, iteration_cap=args.iteration_cap)
        self.R = RootSystem(self.W)
        self._order = None

    @property
    def x(self) -> TranslationVector:
        if self.args.x is None:
            return self.W.default_dominant()
        vals = _ints(self.args.x, "--x")
        if len(vals) != len(self.rd.finite):
            raise ValidationError(f"--x needs {len(self.rd.finite)} coefficients")
        return TranslationVector(tuple(vals))

    @property
    def order(self) -> ConvexOrder:
        if self._order is None:
            self._order = ConvexOrder(self.R, self.x)
        return self._order

    def engine(self) -> CharacterEngine:
        return CharacterEngine(self.order, ball_budget=self.args.ball_budget)

    def element(self, text: str):
        return self.W.parse_word(text)

    def weight(self) -> tuple[int, ...]:
        if self.args.lam is None:
            raise UsageError("--lambda is required")
        vals = _ints(self.args.lam, "--lambda")
        if len(vals) != self.W.n:
            raise ValidationError(f"--lambda needs {self.W.n} pairings in label order {list(self.rd.labels)}")
        return tuple(vals)

    def word(self, w) -> str:
        return self.W.format_word(w.word)

    def meta(self) -> dict:
        a = self.args
        out = {
            "budgets": {"ball_budget": a.ball_budget, "iteration_cap": a.iteration_cap},
            "datum": self.source,
            "seed": a.seed,
        }
        if self._order is not None:
            out["x"] = list(self._order.x.coeffs)
        return out


def _read_datum(path: str) -> CartanDatum:
    p = Path(path)
    if not p.exists():
        # bundled file names and preset names are accepted as a convenience
        for name, fname in PRESETS.items():
            if path in (name, fname):
                return preset(name)
    return load_datum(p)


def _ints(text: str, flag: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise ValidationError(f"{flag} expects comma-separated integers, got {text!r}") from None


def _range(text: str, flag: str = "--window") -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise ValidationError(f"{flag} expects lo:hi, got {text!r}") from None
    if lo > hi:
        raise ValidationError(f"{flag}: empty range {text!r}")
    return lo, hi


def _index_json(order: ConvexOrder, a) -> dict:
    return a.to_json(order.rd.labels)


def _parse_index(order: ConvexOrder, tok: str):
    """``k`` for the real root ``beta_k``; ``cM:label`` for the imaginary root ``M c`` at ``label``."""
    tok = tok.strip()
    if tok.startswith("c"):
        try:
            m, label = tok[1:].split(":")
            return Imag(int(m), order.rd.index(label))
        except (ValueError, KeyError):
            raise ValidationError(f"bad imaginary index {tok!r}; expected cM:label") from None
    try:
        return Real(int(tok))
    except ValueError:
        raise ValidationError(f"bad index {tok!r}") from None


# -- command implementations ----------------------------------------------------------


def cmd_datum_validate(s: Session) -> dict:
    return {
        "classification": classify(s.datum).value,
        "irreducible": s.datum.is_irreducible(),
        "labels": list(s.rd.labels),
        "valid": True,
    }


def cmd_datum_describe(s: Session) -> dict:
    return s.rd.describe()


def cmd_weyl_length(s: Session) -> dict:
    w = s.element(s.args.word)
    return {"length": w.length, "reduced_word": s.word(w)}


def cmd_weyl_word(s: Session) -> dict:
    w = s.element(s.args.word)
    return {"length": w.length, "reduced_word": s.word(w), "matrix": [list(r) for r in w.matrix]}


def cmd_weyl_bruhat(s: Session) -> dict:
    u, w = s.element(s.args.u), s.element(s.args.w)
    return {"leq": s.W.bruhat_leq(u, w), "u": s.word(u), "w": s.word(w)}


def cmd_weyl_normal_form(s: Session) -> dict:
    w = s.element(s.args.word)
    z, wbar = s.W.normal_form(w)
    return {"finite_part": s.word(wbar), "translation": z.to_json(s.rd), "word": s.word(w)}


def cmd_roots_semiinf_length(s: Session) -> dict:
    w = s.element(s.args.word)
    return {"semiinf_length": s.R.semiinf_length(w), "word": s.word(w)}


def cmd_roots_twisted_length(s: Session) -> dict:
    twist, u = s.element(s.args.twist), s.element(s.args.word)
    return {"twist": s.word(twist), "twisted_length": s.R.twisted_length(twist, u), "word": s.word(u)}


def cmd_roots_stabilize(s: Session) -> dict:
    w = s.element(s.args.word)
    m0, value, seq = s.R.stabilization_m0(w, s.order.x, s.args.stable_window, s.args.max_m)
    return {
        "certificate": {"max_m": s.args.max_m, "stable_window": s.args.stable_window},
        "m0": m0,
        "semiinf_length": s.R.semiinf_length(w),
        "sequence": seq,
        "stable_value": value,
        "word": s.word(w),
    }


def cmd_roots_semiinf_bruhat(s: Session) -> dict:
    u, w = s.element(s.args.u), s.element(s.args.w)
    verdict = s.R.semiinf_bruhat_leq(u, w, certify_depth=s.args.certify_depth, x=s.order.x)
    return {"certificate": {"certify_depth": s.args.certify_depth}, "u": s.word(u), "verdict": verdict, "w": s.word(w)}


def cmd_convex_window(s: Session) -> dict:
    o = s.order
    win = o.theta_window(s.args.m)
    return {
        "generators": [_index_json(o, a) for a in win["generators"]],
        "minus": [_index_json(o, a) for a in win["minus"]],
        "m": s.args.m,
        "period": o.period,
        "plus": [_index_json(o, a) for a in win["plus"]],
        "roots": {str(a.k): list(o.beck_root(a.k)) for a in win["minus"] + win["plus"]},
        "theta_word": s.W.format_word(o.theta_word),
    }


def cmd_convex_check(s: Session) -> dict:
    o = s.order
    window = Window.parse(s.args.window)
    violations = o.convexity_check(window)
    cov = o.coverage(s.args.max_height)
    return {
        "certificate": {"coverage_height": s.args.max_height, "window": str(window)},
        "covered_roots": len(cov),
        "violations": [
            {k: (_index_json(o, v) if isinstance(v, (Real, Imag)) else v) for k, v in viol.items()}
            for viol in violations
        ],
    }


def cmd_pbw_dim(s: Session) -> dict:
    alg = GradedAlgebra(s.order)
    degree = _ints(s.args.degree, "--degree")
    if len(degree) != s.W.n:
        raise ValidationError(f"--degree needs {s.W.n} entries")
    if s.args.window:
        window = Window.parse(s.args.window)
        dim = alg.semiinf_pbw_dimension(window, degree)
        return {"certificate": {"window": str(window)}, "degree": degree, "dimension": dim, "kind": "semiinf"}
    if min(degree) < 0:
        raise ValidationError("positive-part degrees must be nonnegative")
    return {"certificate": {"max_height": sum(degree)}, "degree": degree, "dimension": alg.graded_dimension(None, degree), "kind": "positive"}


def cmd_pbw_straighten(s: Session) -> dict:
    o = s.order
    alg = GradedAlgebra(o)
    word = [_parse_index(o, t) for t in s.args.word.split(",") if t.strip()]
    coeff, mono = alg.straighten_word(word)
    return {
        "coefficient": str(coeff),
        "monomial": [{"exponent": e, "index": _index_json(o, a)} for a, e in mono.factors],
    }


def cmd_koszul_check(s: Session) -> dict:
    res = koszul_homology(s.order, s.args.m, s.args.energy, seed=s.args.seed, orientation=s.args.orientation)
    res["certificate"] = {"energy_cap": s.args.energy}
    qd = quadratic_dual(s.order, s.args.m)
    res["quadratic_dual"] = {
        "dim_J": qd["dim_J"],
        "dim_J_perp": qd["dim_J_perp"],
        "exponents": [e["exponent"] for e in qd["exponents"]],
        "matches_plain_exterior_up_to_rescaling": qd["matches_plain_exterior_up_to_rescaling"],
        "matches_v_twisted_exterior": qd["matches_v_twisted_exterior"],
    }
    return res


def cmd_koszul_tor_dual(s: Session) -> dict:
    res = tor_dual_homology(s.order, s.args.m, s.args.energy, seed=s.args.seed)
    res["certificate"] = {"energy_cap": s.args.energy}
    return res


def cmd_char_verma(s: Session) -> dict:
    return s.engine().verma_character(s.weight(), s.args.depth).to_json(s.rd)


def cmd_char_bgg(s: Session) -> dict:
    return s.engine().bgg_euler(s.weight(), s.args.depth).to_json(s.rd)


def cmd_char_twisted_bgg(s: Session) -> dict:
    return s.engine().twisted_bgg_euler(s.weight(), s.args.m, s.args.depth).to_json(s.rd)


def cmd_tor_table(s: Session) -> dict:
    return s.engine().tor_table(s.weight(), s.args.m, _range(s.args.window)).to_json(s.W)


def cmd_tor_limit(s: Session) -> dict:
    return s.engine().tor_limit_table(s.weight(), _range(s.args.window), box=s.args.box).to_json(s.W)


@lru_cache(maxsize=4)
def _worker_system(datum_json: str, iteration_cap: int) -> RootSystem:
    rd = RootDatum(CartanDatum.from_json(json.loads(datum_json)))
    return RootSystem(WeylGroup(rd, iteration_cap=iteration_cap))


def _stabilize_one(job) -> dict:
    datum_json, cap, x, word, stable_window, max_m, n = job
    R = _worker_system(datum_json, cap)
    w = R.W.parse_word(word) if word else R.W.identity
    m0, value, seq = R.stabilization_m0(w, TranslationVector(tuple(x)), stable_window, max_m)
    return {"m0": m0, "semiinf_length": n, "sequence": seq, "stable_value": value, "verdict": value == n, "word": word}


def cmd_tor_stabilization(s: Session) -> dict:
    a = s.args
    limit = s.engine().tor_limit_table(s.weight(), _range(a.window), box=a.box)
    datum_json = json.dumps(s.datum.to_json(), sort_keys=True)
    jobs = [
        (datum_json, a.iteration_cap, s.order.x.coeffs, s.word(e.element), a.stable_window, a.max_m, e.n)
        for e in limit.entries
    ]
    if a.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=a.workers) as pool:
            rows = list(pool.map(_stabilize_one, jobs))
    else:
        rows = [_stabilize_one(j) for j in jobs]
    return {
        "certificate": {**limit.certificate, "max_m": a.max_m, "stable_window": a.stable_window},
        "max_m0": max((r["m0"] for r in rows), default=0),
        "rows": rows,
        "window": list(limit.window),
    }


# -- parser --------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("session")
    g.add_argument("--type", default="A1~", choices=sorted(PRESETS), help="bundled datum preset")
    g.add_argument("--datum", help="path to a datum JSON file (overrides --type)")
    g.add_argument("--x", help="strictly dominant x, one coefficient per finite node")
    g.add_argument("--seed", type=int, default=0, help="seed for modular specializations")
    g.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    g.add_argument("--format", choices=("json", "tsv"), default="json")
    g.add_argument("--ball-budget", type=int, default=200_000, help="max elements in a length ball")
    g.add_argument("--iteration-cap", type=int, default=DEFAULT_ITERATION_CAP, help="max reduction steps per element")


COMMANDS: dict[tuple[str, str], tuple] = {}


def _build() -> argparse.ArgumentParser:
    parser = _Parser(prog="semitor", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"semitor {__version__}")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def add(group_parsers, group, name, fn, help_text, configure=None):
        p = group_parsers.add_parser(name, help=help_text)
        _common(p)
        if configure:
            configure(p)
        p.set_defaults(func=fn)
        COMMANDS[(group, name)] = fn
        return p

    def word(p, flag="--word", required=True):
        p.add_argument(flag, required=required, help="comma-separated labels, e.g. 0,1,0")

    def lam(p):
        p.add_argument("--lambda", dest="lam", required=True, help="pairings <i,lambda> in label order")

    def pair(p):
        word(p, "--u")
        word(p, "--w")

    def stab(p):
        p.add_argument("--max-m", type=int, default=16)
        p.add_argument("--stable-window", type=int, default=3)

    g = groups.add_parser("datum", help="Cartan data").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn, h in (("validate", cmd_datum_validate, "validate and classify"), ("describe", cmd_datum_describe, "marks, comarks and constants")):
        add(g, "datum", name, fn, h, lambda p: p.add_argument("path", nargs="?", help="datum file (alternative to --datum)"))

    g = groups.add_parser("weyl", help="affine Weyl group").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    add(g, "weyl", "length", cmd_weyl_length, "length of a word", word)
    add(g, "weyl", "word", cmd_weyl_word, "canonical reduced word", word)
    add(g, "weyl", "bruhat", cmd_weyl_bruhat, "Bruhat comparison u <= w", pair)
    add(g, "weyl", "normal-form", cmd_weyl_normal_form, "translation times finite part", word)

    g = groups.add_parser("roots", help="affine roots and lengths").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    add(g, "roots", "semiinf-length", cmd_roots_semiinf_length, "semi-infinite length", word)

    def twisted(p):
        word(p)
        word(p, "--twist")

    add(g, "roots", "twisted-length", cmd_roots_twisted_length, "twisted length", twisted)
    add(g, "roots", "stabilize", cmd_roots_stabilize, "stabilization of twisted lengths", lambda p: (word(p), stab(p)))
    add(
        g, "roots", "semiinf-bruhat", cmd_roots_semiinf_bruhat, "semi-infinite Bruhat comparison",
        lambda p: (pair(p), p.add_argument("--certify-depth", type=int, default=3)),
    )

    g = groups.add_parser("convex", help="convex order").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    add(g, "convex", "window", cmd_convex_window, "theta window index sets", lambda p: p.add_argument("--m", type=int, default=1))
    add(
        g, "convex", "check", cmd_convex_check, "convexity and coverage",
        lambda p: (p.add_argument("--window", default="-10:10,2"), p.add_argument("--max-height", type=int, default=8)),
    )

    g = groups.add_parser("pbw", help="graded algebra").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    add(
        g, "pbw", "dim", cmd_pbw_dim, "graded dimension",
        lambda p: (p.add_argument("--degree", required=True), p.add_argument("--window", help="semi-infinite window lo:hi[,imcap]")),
    )
    add(g, "pbw", "straighten", cmd_pbw_straighten, "straighten a word of root vectors",
        lambda p: p.add_argument("--word", required=True, help="indices: k for beta_k, cM:label for imaginary"))

    g = groups.add_parser("koszul", help="Koszul complexes").add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def kz(p, orient=False):
        p.add_argument("--m", type=int, default=1)
        p.add_argument("--energy", type=int, default=4)
        if orient:
            p.add_argument("--orientation", choices=("right", "left"), default="right")

    add(g, "koszul", "check", cmd_koszul_check, "Koszul homology", lambda p: kz(p, True))
    add(g, "koszul", "tor-dual", cmd_koszul_tor_dual, "homology of the dual against the Koszul complex", kz)

    g = groups.add_parser("char", help="characters").add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def ch(p, twisted=False):
        lam(p)
        p.add_argument("--depth", type=int, default=4)
        if twisted:
            p.add_argument("--m", type=int, default=1)

    add(g, "char", "verma", cmd_char_verma, "Verma character", ch)
    add(g, "char", "bgg", cmd_char_bgg, "BGG Euler characteristic", ch)
    add(g, "char", "twisted-bgg", cmd_char_twisted_bgg, "twisted BGG Euler characteristic", lambda p: ch(p, True))

    g = groups.add_parser("tor", help="semi-infinite Tor tables").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    add(g, "tor", "table", cmd_tor_table, "Tor table for a fixed twist",
        lambda p: (lam(p), p.add_argument("--m", type=int, default=1), p.add_argument("--window", default="-2:6")))

    def lim(p):
        lam(p)
        p.add_argument("--window", default="-3:3")
        p.add_argument("--box", type=int, help="translation box in rank above one")

    add(g, "tor", "limit", cmd_tor_limit, "limit table graded by semi-infinite length", lim)
    add(g, "tor", "stabilization", cmd_tor_stabilization, "stabilization report", lambda p: (lim(p), stab(p)))
    return parser


# -- output ------------------------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _tsv(result: dict) -> str:
    rows = None
    for key in ("entries", "rows", "table", "violations"):
        val = result.get(key)
        if isinstance(val, list) and val and all(isinstance(r, dict) for r in val):
            rows = result[key]
            break
    if rows is None:
        return "".join(f"{k}\t{_cell(result[k])}\n" for k in sorted(result))
    cols = sorted({c for r in rows for c in r})
    lines = ["\t".join(cols)] + ["\t".join(_cell(r.get(c, "")) for c in cols) for r in rows]
    return "\n".join(lines) + "\n"


def render(result: dict, fmt: str) -> str:
    if fmt == "tsv":
        return _tsv(result)
    return json.dumps(result, sort_keys=True, indent=2) + "\n"


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-3:3" or "-1,0" as an option; "--window -3:3" becomes "--window=-3:3"
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (
            tok.startswith("--") and "=" not in tok and nxt is not None
            and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == ":")
        ):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = _build().parse_args(_glue_negative_values(list(argv)))
        if getattr(args, "path", None):
            args.datum = args.path
        if args.workers < 1 or args.ball_budget < 1 or args.iteration_cap < 1:
            raise ValidationError("budgets and worker counts must be positive")
        session = Session(args)
        result = args.func(session)
        result["meta"] = session.meta()
        out.write(render(result, args.format))
        return 0
    except SemitorError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        data = getattr(exc, "data", None)
        if data is not None:
            payload["data"] = data
        err.write(json.dumps(payload, sort_keys=True, default=str) + "\n")
        return exc.exit_code


def main() -> None:
    sys.exit(run())
