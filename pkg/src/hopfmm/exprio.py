"""Expression grammar: parsing and byte-stable printing.

Atoms are generator names, integers, fractions like -3/2, the ring symbols q
and hbar, and parenthesized sums.  Products are written by juxtaposition or
*, powers ^n bind to the preceding atom (negative n only on q and on torus
generators with a declared inverse), and (x) is the tensor separator.  The
token (x) is matched byte-exactly, so a generator literally named x must be
parenthesized with spaces, ( x ), to avoid the separator.

parse_expression builds the formal combination without reducing it; printing
normal forms back through format_element yields strings that re-parse to the
same element, which is what failure witnesses rely on.
"""

from __future__ import annotations

from fractions import Fraction

from .ncalg import Element, GeneratorTable, TensorElement
from .scalars import DualScalar, QRat, ScalarRing, hbar_parts


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        self.pos = pos
        super().__init__(f"{msg} (at position {pos})")


_NAME_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
_NAME_CONT = _NAME_START | set("0123456789_")


def tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if text.startswith("(x)", i):
            toks.append(("TENSOR", "(x)", i))
            i += 3
            continue
        if ch == "(":
            toks.append(("LPAREN", ch, i))
            i += 1
            continue
        if ch == ")":
            toks.append(("RPAREN", ch, i))
            i += 1
            continue
        if ch in "+-*^/":
            kind = {"+": "PLUS", "-": "MINUS", "*": "STAR", "^": "CARET", "/": "SLASH"}[ch]
            toks.append((kind, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("INT", text[i:j], i))
            i = j
            continue
        if ch in _NAME_START:
            j = i
            while j < n and text[j] in _NAME_CONT:
                j += 1
            toks.append(("NAME", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("EOF", "", n))
    return toks


def _free_mul(a: Element, b: Element) -> Element:
    terms: dict = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            w = u + v
            c = cu * cv
            s = terms.get(w)
            s = c if s is None else s + c
            if s:
                terms[w] = s
            elif w in terms:
                del terms[w]
    return Element(terms)


class _Parser:
    def __init__(self, text: str, table: GeneratorTable, ring: ScalarRing):
        self.toks = tokenize(text)
        self.i = 0
        self.table = table
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise ParseError(f"expected {kind}, found {t[1]!r} ({t[0]})", t[2])
        return t

    # expr := sign? tterm ((+|-) tterm)*
    def parse_expr(self, allow_tensor: bool):
        neg = False
        if self.peek()[0] == "MINUS":
            self.next()
            neg = True
        first = self.parse_tterm(allow_tensor)
        if neg:
            first = -first
        out = first
        while self.peek()[0] in ("PLUS", "MINUS"):
            op = self.next()
            nxt = self.parse_tterm(allow_tensor)
            a1 = out.arity if isinstance(out, TensorElement) else 1
            a2 = nxt.arity if isinstance(nxt, TensorElement) else 1
            if a1 != a2:
                raise ParseError(
                    f"tensor arity mismatch in sum ({a1} vs {a2})", op[2]
                )
            out = out + nxt if op[0] == "PLUS" else out - nxt
        return out

    # tterm := term ((x) term)*
    def parse_tterm(self, allow_tensor: bool):
        parts = [self.parse_term()]
        while allow_tensor and self.peek()[0] == "TENSOR":
            self.next()
            parts.append(self.parse_term())
        if len(parts) == 1:
            return parts[0]
        return TensorElement.outer(parts)

    # term := factor+
    def parse_term(self) -> Element:
        out = self.parse_factor()
        while True:
            k = self.peek()[0]
            if k == "STAR":
                self.next()
                out = _free_mul(out, self.parse_factor())
            elif k in ("NAME", "INT", "LPAREN"):
                out = _free_mul(out, self.parse_factor())
            else:
                return out

    # factor := atom (^ int)?
    def parse_factor(self) -> Element:
        atom, kind, info = self.parse_atom()
        if self.peek()[0] != "CARET":
            return atom
        caret = self.next()
        neg = False
        if self.peek()[0] == "MINUS":
            self.next()
            neg = True
        n = int(self.expect("INT")[1])
        if neg:
            n = -n
        if n >= 0:
            out = Element.unit(self.ring.one())
            for _ in range(n):
                out = _free_mul(out, atom)
            return out
        if kind == "scalar_q":
            return Element({(): self.ring.coerce(info ** n)})
        if kind == "gen":
            inv = self.table.inverse_of(info)
            if inv is None:
                raise ParseError(
                    f"negative power needs a declared inverse for "
                    f"{self.table.name_of(info)}",
                    caret[2],
                )
            return Element({(inv,) * (-n): self.ring.one()})
        raise ParseError("negative power only on q or torus generators", caret[2])

    def parse_atom(self):
        t = self.next()
        kind, val, pos = t
        if kind == "INT":
            num = int(val)
            if self.peek()[0] == "SLASH":
                self.next()
                den = int(self.expect("INT")[1])
                if den == 0:
                    raise ParseError("zero denominator", pos)
                return (
                    Element({(): self.ring.from_fraction(Fraction(num, den))}),
                    "scalar",
                    None,
                )
            return Element({(): self.ring.from_int(num)}), "scalar", None
        if kind == "NAME":
            if val == "q" and self.ring.has_q:
                q = QRat.q_power(1)
                return Element({(): self.ring.coerce(q)}), "scalar_q", q
            if val == "hbar" and self.ring.has_hbar:
                return Element({(): self.ring.hbar()}), "scalar", None
            try:
                gid = self.table.id_of(val)
            except ValueError:
                raise ParseError(f"unknown name {val!r}", pos) from None
            return Element({(gid,): self.ring.one()}), "gen", gid
        if kind == "LPAREN":
            inner = self.parse_expr(allow_tensor=False)
            self.expect("RPAREN")
            if isinstance(inner, TensorElement):
                raise ParseError("tensor inside parentheses", pos)
            return inner, "paren", None
        raise ParseError(f"unexpected token {val!r}", pos)


def parse_expression(text: str, table: GeneratorTable, ring: ScalarRing):
    """Parse into an Element or TensorElement over free (unreduced) words."""
    p = _Parser(text, table, ring)
    out = p.parse_expr(allow_tensor=True)
    p.expect("EOF")
    return out


def parse_element(text: str, table: GeneratorTable, ring: ScalarRing) -> Element:
    out = parse_expression(text, table, ring)
    if isinstance(out, TensorElement):
        raise ParseError("expected a plain element, found a tensor", 0)
    return out


def parse_scalar(text: str, ring: ScalarRing):
    empty = GeneratorTable([], [])
    e = parse_element(text, empty, ring)
    if not e.terms:
        return ring.zero()
    if set(e.terms) != {()}:
        raise ParseError("expected a scalar expression", 0)
    return e.terms[()]


# ---------------------------------------------------------------------------
# printing


class NotLaurentPrintable(ValueError):
    """Scalar has a q-denominator, so it has no flat grammar form."""


def _base_monomials(s):
    """Decompose a base scalar into (Fraction, q-exponent) pieces."""
    if isinstance(s, int):
        s = Fraction(s)
    if isinstance(s, Fraction):
        return [(s, 0)] if s else []
    if isinstance(s, QRat):
        if not s.is_laurent():
            raise NotLaurentPrintable(repr(s))
        return [(c, k) for k, c in s.laurent_terms()]
    raise TypeError(f"not a base scalar: {type(s).__name__}")


def _monomial_pieces(coeff):
    """(Fraction, q-exp, hbar?) triples for one coefficient."""
    body, slope = hbar_parts(coeff)
    out = [(c, k, False) for c, k in _base_monomials(body)]
    out.extend((c, k, True) for c, k in _base_monomials(slope))
    return out


def _render_piece(frac, qexp, has_hbar, word_str):
    parts = []
    a = abs(frac)
    if a != 1:
        parts.append(str(a))
    if qexp:
        parts.append("q" if qexp == 1 else f"q^{qexp}")
    if has_hbar:
        parts.append("hbar")
    if word_str != "1":
        parts.append(word_str)
    if not parts:
        parts = ["1"]
    return "*".join(parts)


def _join_signed(pieces):
    out = []
    for neg, text in pieces:
        if not out:
            out.append(("-" if neg else "") + text)
        else:
            out.append(("- " if neg else "+ ") + text)
    return " ".join(out)


def format_element(table: GeneratorTable, e: Element) -> str:
    if not e.terms:
        return "0"
    pieces = []
    for w, c in e.sorted_terms(table):
        ws = table.format_word(w)
        for frac, qexp, hb in _monomial_pieces(c):
            pieces.append((frac < 0, _render_piece(frac, qexp, hb, ws)))
    return _join_signed(pieces)


def format_tensor(tables, t: TensorElement) -> str:
    if not t.terms:
        return "0"
    if len(tables) != t.arity:
        raise ValueError("table count must match tensor arity")
    keys = sorted(
        t.terms.items(),
        key=lambda kv: tuple(
            tables[i].order_key(kv[0][i]) for i in range(t.arity)
        ),
        reverse=True,
    )
    pieces = []
    for key, c in keys:
        ws = " (x) ".join(tables[i].format_word(key[i]) for i in range(t.arity))
        for frac, qexp, hb in _monomial_pieces(c):
            pieces.append((frac < 0, _render_piece_tensor(frac, qexp, hb, ws)))
    return _join_signed(pieces)


def _render_piece_tensor(frac, qexp, has_hbar, tensor_str):
    prefix = []
    a = abs(frac)
    if a != 1:
        prefix.append(str(a))
    if qexp:
        prefix.append("q" if qexp == 1 else f"q^{qexp}")
    if has_hbar:
        prefix.append("hbar")
    if prefix:
        return "*".join(prefix) + "*" + tensor_str
    return tensor_str


def format_scalar(s) -> str:
    pieces = [
        (frac < 0, _render_piece(frac, qexp, hb, "1"))
        for frac, qexp, hb in _monomial_pieces(s)
    ]
    if not pieces:
        return "0"
    return _join_signed(pieces)


def format_scalar_pair(s):
    """(num, den) strings for scalars outside the Laurent subring."""
    if isinstance(s, QRat):
        num = QRat(s.num, (Fraction(1),))
        den = QRat(s.den, (Fraction(1),))
        return format_scalar(num), format_scalar(den)
    return format_scalar(s), "1"
