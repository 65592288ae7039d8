"""Command-line interface.

Subcommands: info, bics, lookup, euler, eval, cache.  Signatures are comma
separated integers with components separated by semicolons; residue
conditions are semicolon-separated lists of point tuples.  Exit codes:
0 ok, 2 parse error, 3 oracle miss, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import ast
import json
import re
import sys
from fractions import Fraction

from . import evaluation
from .errors import InternalInconsistency, OracleMiss
from .euler import info_string
from .stratum import GeneralisedStratum


class CliParseError(ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


def parse_signature(text):
    components = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            raise CliParseError(f"empty component in signature {text!r}")
        try:
            components.append(tuple(int(x) for x in part.split(",") if x.strip()))
        except ValueError as exc:
            raise CliParseError(f"bad signature component {part!r}") from exc
    return components

def parse_residues(text):
    if not text:
        return []
    conds = []
    for part in text.split(";"):
        part = part.strip()
        try:
            cond = ast.literal_eval(part)
        except (ValueError, SyntaxError) as exc:
            raise CliParseError(f"bad residue condition {part!r}") from exc
        conds.append([tuple(p) for p in cond])
    return conds


def parse_profile(text):
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise CliParseError(f"bad profile {text!r}") from exc


# -- expression grammar:  ^  >  *  >  +/-  ;  ^ right-associative ---------------

_TOKEN = re.compile(r"\s*(\d+/\d+|\d+|[A-Za-z_]+|[()^*+;,-])")


def _tokenize(expr):
    pos, out = 0, []
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m:
            raise CliParseError("unexpected character", pos)
        out.append((m.group(1), pos))
        pos = m.end()
    return out


class _ExprParser:
    def __init__(self, X, tokens):
        self.X = X
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, want):
        tok, pos = self.next() if self.i < len(self.tokens) else (None, -1)
        if tok != want:
            raise CliParseError(f"expected {want!r}, found {tok!r}", pos)

    def parse(self):
        value = self.sum()
        if self.i < len(self.tokens):
            raise CliParseError("trailing input", self.tokens[self.i][1])
        return value

    def sum(self):
        value = self.product()
        while self.peek() in ("+", "-"):
            op, _ = self.next()
            rhs = self.product()
            value = value + rhs if op == "+" else value - rhs
        return value

    def product(self):
        value = self.power()
        while self.peek() == "*":
            self.next()
            value = value * self.power()
        return value

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.next()
            tok, pos = self.next() if self.i < len(self.tokens) else (None, -1)
            if tok is None or not tok.isdigit():
                raise CliParseError("exponent must be an integer", pos)
            exp = int(tok)
            if isinstance(base, Fraction):
                return base ** exp
            return self.X.pow(base, exp)
        return base

    def atom(self):
        tok, pos = self.next() if self.i < len(self.tokens) else (None, -1)
        if tok is None:
            raise CliParseError("unexpected end of expression", pos)
        if tok == "(":
            value = self.sum()
            self.expect(")")
            return value
        if tok == "-":
            return -self.atom()
        if re.fullmatch(r"\d+/\d+|\d+", tok):
            return Fraction(tok)
        if tok == "xi":
            return self.X.xi
        if tok == "psi":
            self.expect("(")
            num, npos = self.next()
            if not num.isdigit():
                raise CliParseError("psi needs a leg number", npos)
            self.expect(")")
            return self.X.psi(int(num))
        if tok == "D":
            self.expect("(")
            entries, comp = [], 0
            while True:
                t, tpos = self.next()
                if t.isdigit():
                    entries.append(int(t))
                else:
                    raise CliParseError("D needs BIC indices", tpos)
                t = self.peek()
                if t == ",":
                    self.next()
                    continue
                if t == ";":
                    self.next()
                    c, cpos = self.next()
                    if not c.isdigit():
                        raise CliParseError("component must be an integer",
                                            cpos)
                    comp = int(c)
                    self.expect(")")
                    break
                if t == ")":
                    self.next()
                    break
                raise CliParseError("bad D(...) syntax", tpos)
            return self.X.taut_from_graph(tuple(entries), comp)
        raise CliParseError(f"unknown name {tok!r}", pos)


def parse_expression(X, text):
    return _ExprParser(X, _tokenize(text)).parse()


# -- subcommands ---------------------------------------------------------------------


def _stratum(args):
    return GeneralisedStratum(parse_signature(args.sig),
                              parse_residues(getattr(args, "res", "") or ""))


def cmd_info(args):
    print(info_string(_stratum(args)))
    return 0


def cmd_bics(args):
    X = _stratum(args)
    rows = []
    for i, B in enumerate(X.bics):
        genera = [[B.LG.genera[v] for v in B.LG.vertices_at_rank(r)]
                  for r in range(2)]
        rows.append({
            "index": i,
            "level_genera": genera,
            "prongs": sorted(B.LG.prongs.values()),
            "automorphisms": len(B.automorphisms),
            "ell": B.ell,
        })
    if args.format == "json":
        print(json.dumps(rows))
    else:
        print(f"{'idx':>4} {'genera':<16} {'prongs':<12} {'|Aut|':>6} "
              f"{'ell':>4}")
        for r in rows:
            print(f"{r['index']:>4} {str(r['level_genera']):<16} "
                  f"{str(r['prongs']):<12} {r['automorphisms']:>6} "
                  f"{r['ell']:>4}")
    return 0


def cmd_lookup(args):
    X = _stratum(args)
    profile = parse_profile(args.profile)
    graphs = X.lookup(profile)
    if not graphs:
        print(f"profile {profile} is empty", file=sys.stderr)
        return 1
    if args.component is not None:
        graphs = [graphs[args.component]]
    if args.format == "json":
        print(json.dumps([G.serialize() for G in graphs]))
    else:
        for G in graphs:
            print(G.explain_string())
            print()
    return 0


def cmd_euler(args):
    X = _stratum(args)
    print(X.euler_characteristic(quiet=not args.verbose))
    return 0


def cmd_eval(args):
    X = _stratum(args)
    value = parse_expression(X, args.expr)
    if isinstance(value, Fraction):
        print(value)
    else:
        print(value.evaluate())
    return 0


def cmd_cache(args):
    cache = evaluation.DEFAULT_CACHE
    if args.action == "print":
        evaluation.print_top_xis()
        print()
        evaluation.print_adm_evals()
    elif args.action == "import":
        if args.kind in ("adm", "all"):
            cache.import_adm_evals(args.file)
        if args.kind in ("xi", "all"):
            cache.import_top_xis(args.file)
    elif args.action == "export":
        if args.kind == "adm":
            cache.export_adm_evals(args.file)
        else:
            cache.export_top_xis(args.file)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="strataring",
        description="Boundary graphs and tautological-ring calculations "
                    "for strata of abelian differentials.")
    parser.add_argument("--cache-dir", help="directory for the value caches")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sig(p):
        p.add_argument("--sig", required=True,
                       help='signature, e.g. "2,1,-1,0" or "0,0;0"')
        p.add_argument("--res", default="",
                       help='residue conditions, e.g. "[(0,1),(0,2)];[(0,3)]"')

    p = sub.add_parser("info", help="boundary graph counts")
    add_sig(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("bics", help="list the two-level boundary graphs")
    add_sig(p)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_bics)

    p = sub.add_parser("lookup", help="describe the graphs of a profile")
    add_sig(p)
    p.add_argument("--profile", required=True, help='e.g. "1,0"')
    p.add_argument("--component", type=int, default=None)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_lookup)

    p = sub.add_parser("euler", help="Euler characteristic")
    add_sig(p)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("eval", help="evaluate a tautological expression")
    add_sig(p)
    p.add_argument("--expr", required=True,
                   help='e.g. "xi^3*psi(1)" or "D(1,0;0)"')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("cache", help="inspect or transfer the value caches")
    p.add_argument("action", choices=["print", "import", "export"])
    p.add_argument("file", nargs="?")
    p.add_argument("--kind", choices=["adm", "xi", "all"], default="all")
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cache_dir:
        evaluation.set_cache_dir(args.cache_dir)
    try:
        return args.func(args)
    except CliParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OracleMiss as exc:
        print(f"missing oracle value for key: {exc.key}", file=sys.stderr)
        return 3
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 4
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
