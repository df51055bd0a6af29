"""Command-line front end: expression parsing, subcommand dispatch,
human-readable and JSON output.

Grammar (tightest first): `o` (composition), `*` (transfer product),
`#` (multiplicative action), `+`.  Atoms: E0_n, E1_n, [n], integers,
parenthesized expressions.  Class symbols z[d] / x[d] appear only in the
dl-to-e / e-to-dl word grammars.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import dl_bridge, free_einfty, oracle, ring_ops, semiring, sequences
from .arith import check_prime
from .eops_algebra import (EElement, RING_E, RING_EHAT,
                           verify_defining_relations)
from .semiring import SemiringElement, inject_e

MAX_DEGREE_CAP = 64


class ParseError(Exception):
    def __init__(self, message, offset, expected=()):
        super().__init__(f"{message} at offset {offset}"
                         + (f" (expected one of: {', '.join(expected)})" if expected else ""))
        self.offset = offset
        self.expected = expected


TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<gen>E[01]_\d+)
  | (?P<bracket>\[\d+\])
  | (?P<cls>[a-wyA-Z]\w*\[\d+\]|[xz]\[\d+\])
  | (?P<int>\d+)
  | (?P<op>[o*#+()])
""", re.VERBOSE)


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"bad character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class ExpressionParser:
    """Recursive descent over  expr := sharp ('+' sharp)*,
    sharp := dot ('#' dot)*, dot := circ ('*' circ)*, circ := atom ('o' atom)*."""

    def __init__(self, text, p, ring="semiring"):
        check_prime(p)
        self.p = p
        self.ring = ring
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_end(self):
        kind, val, off = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", off, ("end of input",))

    def parse(self):
        out = self.parse_expr()
        self.expect_end()
        return out

    def parse_expr(self):
        acc = self.parse_sharp()
        while self.peek()[1] == "+":
            self.take()
            acc = acc + self.parse_sharp()
        return acc

    def parse_sharp(self):
        acc = self.parse_dot()
        while self.peek()[1] == "#":
            kind, val, off = self.take()
            if self.ring != "semiring":
                raise ParseError("'#' needs the semiring domain", off)
            acc = ring_ops.sharp(acc, self.parse_dot())
        return acc

    def parse_dot(self):
        acc = self.parse_circ()
        while self.peek()[1] == "*":
            kind, val, off = self.take()
            rhs = self.parse_circ()
            if self.ring != "semiring":
                raise ParseError("'*' needs the semiring domain", off)
            acc = acc.dot(rhs)
        return acc

    def parse_circ(self):
        acc = self.parse_atom()
        while self.peek()[1] == "o":
            self.take()
            acc = acc.circ(self.parse_atom())
        return acc

    def parse_atom(self):
        kind, val, off = self.take()
        if val == "(":
            inner = self.parse_expr()
            kind2, val2, off2 = self.take()
            if val2 != ")":
                raise ParseError("unbalanced parenthesis", off2, (")",))
            return inner
        if kind == "gen":
            eps = int(val[1])
            n = int(val.split("_")[1])
            try:
                sequences.check_legitimate(((eps, n),), self.p)
            except sequences.IllegitimateSequence as exc:
                raise ParseError(str(exc), off) from None
            if self.ring == "semiring":
                return inject_e(EElement.gen(self.p, eps, n, RING_E))
            return EElement.gen(self.p, eps, n, self.ring)
        if kind == "bracket":
            n = int(val[1:-1])
            if self.ring != "semiring":
                if n == 1:
                    return EElement.one(self.p, self.ring)
                raise ParseError(f"[{n}] needs the semiring domain", off)
            return SemiringElement.bracket(self.p, n)
        if kind == "int":
            c = int(val)
            if self.ring == "semiring":
                return c * SemiringElement.one(self.p)
            return c * EElement.one(self.p, self.ring)
        raise ParseError(f"unexpected token {val!r}", off,
                         ("E0_n", "E1_n", "[n]", "integer", "("))


def parse_expression(text, p, ring="semiring"):
    return ExpressionParser(text, p, ring).parse()


DL_WORD_RE = re.compile(r"^(?P<ops>(?:b?Q_\d+\s+)*)(?:[xz])\[(?P<deg>\d+)\]$")
E_WORD_RE = re.compile(r"^(?P<ops>(?:E[01]_\d+\s+o\s+)*)(?:[xz])\[(?P<deg>\d+)\]$")


def _print_element(el, as_json):
    if as_json:
        print(json.dumps(el.to_json(), sort_keys=True))
    else:
        print(el)


def _resolve_degree(args):
    d = args.max_degree
    if d > MAX_DEGREE_CAP and not getattr(args, "force", False):
        raise SystemExit(f"--max-degree {d} exceeds the cap {MAX_DEGREE_CAP}; pass --force to override")
    return d


def main(argv=None):
    parser = argparse.ArgumentParser(prog="eops", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, ring_flag=False, degree_flag=False):
        sp.add_argument("--p", type=int, required=True, help="the prime (required)")
        sp.add_argument("--json", action="store_true")
        if ring_flag:
            sp.add_argument("--ring", choices=["E", "Ehat", "semiring"], default="semiring")
        if degree_flag:
            sp.add_argument("--max-degree", type=int, default=16)
            sp.add_argument("--force", action="store_true",
                            help="override the max-degree cap")

    sp = sub.add_parser("reduce", help="normal form of an expression")
    add_common(sp, ring_flag=True)
    sp.add_argument("expr")

    for name in ("circ", "dot", "sharp"):
        sp = sub.add_parser(name, help=f"{name} of two expressions")
        add_common(sp)
        sp.add_argument("left")
        sp.add_argument("right")
        if name == "sharp":
            sp.add_argument("--allow-large-p", action="store_true",
                            help="lift the p>=5 sharp gate (expect blow-up)")

    for name in ("psi", "counit", "bockstein"):
        sp = sub.add_parser(name)
        add_common(sp, ring_flag=True)
        sp.add_argument("expr")

    sp = sub.add_parser("steenrod")
    add_common(sp, ring_flag=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("expr")

    sp = sub.add_parser("basis", help="allowable basis listing")
    add_common(sp, degree_flag=True)
    sp.add_argument("--ring", choices=["E", "Ehat", "semiring-generators"], default="Ehat")
    sp.add_argument("--length", type=int, required=True)

    sp = sub.add_parser("dl-to-e", help='evaluate "Q_5 Q_2 x[d]" on the E-side')
    add_common(sp)
    sp.add_argument("word")

    sp = sub.add_parser("e-to-dl", help='convert "E0_5 o E0_2 o x[d]" to Dyer-Lashof words')
    add_common(sp)
    sp.add_argument("word")

    sp = sub.add_parser("free-homology")
    add_common(sp, degree_flag=True)
    sp.add_argument("--input", required=True, help="presentation JSON file, or S0/S1/... shorthand")
    sp.add_argument("--qz", action="store_true")
    sp.add_argument("--generators", action="store_true")

    sp = sub.add_parser("oracle")
    add_common(sp, degree_flag=True)
    sp.add_argument("what", choices=["coinvariants"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--table", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("verify")
    add_common(sp, degree_flag=True)
    sp.add_argument("what", choices=["relations", "mixed-adem"])

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, sequences.IllegitimateSequence) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args):
    p = args.p
    check_prime(p)

    if args.command == "reduce":
        ring = args.ring
        el = parse_expression(args.expr, p, ring)
        if ring != "semiring":
            el = el.normal_form()
        _print_element(el, args.json)
        return 0

    if args.command in ("circ", "dot", "sharp"):
        left = parse_expression(args.left, p)
        right = parse_expression(args.right, p)
        if args.command == "circ":
            out = left.circ(right)
        elif args.command == "dot":
            out = left.dot(right)
        else:
            out = ring_ops.sharp(left, right,
                                 allow_large_p=getattr(args, "allow_large_p", False))
        _print_element(out, args.json)
        return 0

    if args.command in ("psi", "counit", "bockstein", "steenrod"):
        el = parse_expression(args.expr, p, args.ring)
        if args.command == "psi":
            ten = el.psi() if args.ring == "semiring" else el.coproduct()
            print(_format_tensor(ten, args.ring))
        elif args.command == "counit":
            print(el.counit())
        elif args.command == "bockstein":
            _print_element(el.bockstein(), args.json)
        else:
            _print_element(el.steenrod(args.k), args.json)
        return 0

    if args.command == "basis":
        max_degree = _resolve_degree(args)
        cond = {"Ehat": sequences.COND_EHAT, "E": sequences.COND_E,
                "semiring-generators": sequences.COND_SEMIRING}[args.ring]
        rows = sequences.enumerate_allowable(p, args.length, max_degree, cond)
        if args.json:
            print(json.dumps([[list(e) for e in j] for j in rows]))
        else:
            for j in rows:
                print(f"deg {sequences.degree(j, p):3d}  {sequences.format_word(j)}")
        return 0

    if args.command == "dl-to-e":
        m = DL_WORD_RE.match(args.word.strip())
        if not m:
            raise ParseError("expected 'Q_a bQ_b ... x[d]'", 0)
        d = int(m.group("deg"))
        ops = m.group("ops").split()
        module = free_einfty.FreeModule(free_einfty.CoalgebraPresentation.sphere(d), p)
        el = module.class_element("z")
        for tok in reversed(ops):
            eps = 1 if tok.startswith("b") else 0
            n = int(tok.split("_")[1])
            el = dl_bridge.q_from_e(n, el, eps)
        print(el)
        return 0

    if args.command == "e-to-dl":
        m = E_WORD_RE.match(args.word.strip())
        if not m:
            raise ParseError("expected 'E0_a o E1_b o ... o x[d]'", 0)
        d = int(m.group("deg"))
        toks = [t.strip() for t in m.group("ops").split("o") if t.strip()]
        word = tuple((int(t[1]), int(t.split("_")[1])) for t in toks)
        print(dl_bridge.e_word_to_dl(word, p, d))
        return 0

    if args.command == "free-homology":
        max_degree = _resolve_degree(args)
        pres = _load_presentation(args.input)
        if args.generators:
            for j, name in free_einfty.generators(pres, p, max_degree):
                d = sequences.degree(j, p) + pres.classes[name]
                print(f"deg {d:3d}  {sequences.format_word(j)} o {name}")
            return 0
        series = (free_einfty.qz_poincare(pres, p, max_degree) if args.qz
                  else free_einfty.poincare_series(pres, p, max_degree))
        if args.json:
            print(json.dumps(series))
        else:
            for d, dim in enumerate(series):
                print(f"{d:3d} {dim}")
        return 0

    if args.command == "oracle":
        max_degree = _resolve_degree(args)
        degrees = list(range(max_degree + 1))
        if args.jobs > 1:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=args.jobs) as ex:
                dims = list(ex.map(lambda d: oracle.coinvariant_dim(args.n, d, p), degrees))
        else:
            dims = [oracle.coinvariant_dim(args.n, d, p) for d in degrees]
        if args.json:
            print(json.dumps(dims))
        elif args.table:
            for d, dim in zip(degrees, dims):
                print(f"{d:3d} {dim}")
        else:
            print(" ".join(map(str, dims)))
        return 0

    if args.command == "verify":
        max_degree = _resolve_degree(args)
        if args.what == "relations":
            mismatches = verify_defining_relations(p, max_degree)
            if mismatches:
                for fam, key, lhs, rhs in mismatches:
                    print(f"identity {fam} mismatch at {key}")
                return 2
            print("OK")
            return 0
        # mixed-adem
        failures = _verify_mixed_adem_grid(p, max_degree)
        if failures:
            for f in failures:
                print("mixed-adem mismatch:", f)
            return 2
        print("OK")
        return 0

    raise SystemExit(f"unknown command {args.command}")


def _verify_mixed_adem_grid(p, max_degree):
    gens = []
    for eps in ((0,) if p == 2 else (0, 1)):
        for i in range(max(eps, 1), 3):
            gens.append(inject_e(EElement.gen(p, eps, i, RING_E)))
    xs = [SemiringElement.bracket(p, 1), SemiringElement.bracket(p, 2)]
    for j in semiring.generator_sequences(p, min(4, max_degree)):
        xs.append(SemiringElement.generator(p, j))
    failures = []
    for r in gens:
        for s in gens:
            if r.degree() + s.degree() > max_degree:
                continue
            for x in xs:
                ok, lhs, rhs = ring_ops.verify_mixed_adem(r, s, x)
                if not ok:
                    failures.append((str(r), str(s), str(x)))
    return failures


def _format_tensor(ten, ring):
    if ring == "semiring":
        bits = []
        for (a, b), c in sorted(ten.terms.items()):
            sa = str(SemiringElement(ten.p, {a: 1}))
            sb = str(SemiringElement(ten.p, {b: 1}))
            bits.append((f"{c}*" if c != 1 else "") + f"({sa}) (x) ({sb})")
        return " + ".join(bits) if bits else "0"
    return str(ten)


def _load_presentation(spec_arg):
    shorthand = re.match(r"^S(\d+)$", spec_arg)
    if shorthand:
        return free_einfty.CoalgebraPresentation.sphere(int(shorthand.group(1)))
    wedge = re.match(r"^S(\d+)(vS\d+)+$", spec_arg)
    if wedge:
        degs = [int(x) for x in re.findall(r"S(\d+)", spec_arg)]
        return free_einfty.CoalgebraPresentation.wedge_of_spheres(degs)
    with open(spec_arg) as fh:
        return free_einfty.CoalgebraPresentation.from_json(fh.read())


if __name__ == "__main__":
    sys.exit(main())
