"""Noncommutative polynomial engine: words, rewriting, tensors.

Words are tuples of generator ids.  The term order is (degree, length,
lexicographic by id); degree alone with a lexicographic tiebreak is not
well-founded once a rewrite keeps the degree (b > ab > aab > ... descends
forever), so length is the required middle tiebreak.

Reduction applies the leftmost redex, first matching rule in declaration
order, and counts rule applications against a step budget.  Exceeding the
budget raises NonTerminating with a short trace of the last applications.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .scalars import ScalarRing

Word = tuple  # tuple[int, ...]

DEFAULT_STEP_BOUND = 10**6
STEP_BOUND_ENV = "HOPFMM_STEP_BOUND"

_default_step_bound = [DEFAULT_STEP_BOUND]


def set_default_step_bound(n: int) -> None:
    if n < 1:
        raise ValueError("step bound must be positive")
    _default_step_bound[0] = n


def get_default_step_bound() -> int:
    return _default_step_bound[0]


class NonTerminating(RuntimeError):
    """Reduction exceeded its step budget."""

    def __init__(self, word, bound, trace):
        self.word = word
        self.bound = bound
        self.trace = tuple(trace)
        super().__init__(
            f"reduction of {word} exceeded {bound} steps; "
            f"last applications: {self.trace}"
        )


class GeneratorTable:
    """Named generators with nonnegative degrees and declared inverse pairs.

    Degree-0 generators model torus variables; each must belong to exactly
    one declared inverse pair (t, t_inv), both members degree 0.
    """

    def __init__(
        self,
        names: Sequence[str],
        degrees: Sequence[int],
        inverse_pairs: Iterable[tuple[int, int]] = (),
    ):
        names = tuple(names)
        degrees = tuple(int(d) for d in degrees)
        if len(names) != len(degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for n in names:
            if not n or not (n[0].isalpha() and n.replace("_", "").isalnum()):
                raise ValueError(f"bad generator name {n!r}")
        for d in degrees:
            if d < 0:
                raise ValueError("generator degrees must be nonnegative")
        pairs = tuple(tuple(p) for p in inverse_pairs)
        paired: dict[int, int] = {}
        for a, b in pairs:
            for g in (a, b):
                if not 0 <= g < len(names):
                    raise ValueError(f"inverse pair references unknown id {g}")
                if degrees[g] != 0:
                    raise ValueError(
                        f"inverse-paired generator {names[g]} must have degree 0"
                    )
                if g in paired:
                    raise ValueError(f"generator {names[g]} in two inverse pairs")
            paired[a] = b
            paired[b] = a
        for g, d in enumerate(degrees):
            if d == 0 and g not in paired:
                raise ValueError(
                    f"degree-0 generator {names[g]} lacks a declared inverse pair"
                )
        self.names = names
        self.degrees = degrees
        self.inverse_pairs = pairs
        self._inverse_of = paired
        self._ids = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def id_of(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise ValueError(f"unknown generator {name!r}") from None

    def name_of(self, gid: int) -> str:
        return self.names[gid]

    def degree_of(self, gid: int) -> int:
        return self.degrees[gid]

    def inverse_of(self, gid: int) -> Optional[int]:
        return self._inverse_of.get(gid)

    def word_degree(self, w: Word) -> int:
        return sum(self.degrees[g] for g in w)

    def order_key(self, w: Word):
        return (self.word_degree(w), len(w), w)

    def format_word(self, w: Word) -> str:
        if not w:
            return "1"
        return "*".join(self.names[g] for g in w)


class Element:
    """Finite scalar combination of words.  Zero coefficients are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        self.terms = {w: c for w, c in terms.items() if c}

    @classmethod
    def unit(cls, one) -> "Element":
        return cls({(): one})

    @classmethod
    def generator(cls, gid: int, one) -> "Element":
        return cls({(gid,): one})

    @classmethod
    def from_word(cls, w: Word, one) -> "Element":
        return cls({tuple(w): one})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s:
                out[w] = s
            elif w in out:
                del out[w]
        return Element(out)

    def __neg__(self):
        return Element({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "Element":
        if not c:
            return Element()
        return Element({w: c * cw for w, cw in self.terms.items()})

    def degree(self, table: GeneratorTable) -> int:
        if not self.terms:
            return 0
        return max(table.word_degree(w) for w in self.terms)

    def sorted_terms(self, table: GeneratorTable):
        """Terms leading-first (descending order key)."""
        return sorted(
            self.terms.items(), key=lambda t: table.order_key(t[0]), reverse=True
        )

    def __repr__(self):
        if not self.terms:
            return "Element(0)"
        bits = [f"{c!r}*{w}" for w, c in sorted(self.terms.items())]
        return "Element(" + " + ".join(bits) + ")"


class TensorElement:
    """Finite scalar combination of tensor words (fixed arity)."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms=None):
        if terms is None:
            terms = {}
        self.arity = arity
        for k in terms:
            if len(k) != arity:
                raise ValueError(f"tensor term {k} has arity != {arity}")
        self.terms = {k: c for k, c in terms.items() if c}

    @classmethod
    def unit(cls, arity: int, one) -> "TensorElement":
        return cls(arity, {((),) * arity: one})

    @classmethod
    def outer(cls, elements: Sequence[Element], one=None) -> "TensorElement":
        arity = len(elements)
        terms = {}
        for combo in itertools.product(*(e.terms.items() for e in elements)):
            key = tuple(w for w, _ in combo)
            c = combo[0][1]
            for _, ci in combo[1:]:
                c = c * ci
            s = terms.get(key)
            s = c if s is None else s + c
            if s:
                terms[key] = s
            elif key in terms:
                del terms[key]
        return cls(arity, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __add__(self, other):
        if not isinstance(other, TensorElement) or other.arity != self.arity:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return TensorElement(self.arity, out)

    def __neg__(self):
        return TensorElement(self.arity, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TensorElement) or other.arity != self.arity:
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        if not c:
            return TensorElement(self.arity)
        return TensorElement(self.arity, {k: c * ck for k, ck in self.terms.items()})

    def slot_element(self, term_key, slot: int, one) -> Element:
        return Element.from_word(term_key[slot], one)

    def __repr__(self):
        if not self.terms:
            return f"TensorElement({self.arity}, 0)"
        bits = [f"{c!r}*{k}" for k, c in sorted(self.terms.items())]
        return f"TensorElement({self.arity}, " + " + ".join(bits) + ")"


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Element
    index: int = 0

    def __repr__(self):
        return f"Rule({self.lhs} -> {self.rhs!r})"


@dataclass
class CriticalPair:
    word: Word
    rule_a: int
    rule_b: int
    pos_a: int
    pos_b: int
    nf_a: Element = field(repr=False, default=None)
    nf_b: Element = field(repr=False, default=None)
    joinable: bool = False


@dataclass
class ConfluenceReport:
    max_degree: int
    pairs: list
    confluent: bool

    @property
    def unresolved(self):
        return [p for p in self.pairs if not p.joinable]


class RewriteSystem:
    """Ordered rewriting presentation of an associative algebra."""

    def __init__(self, table: GeneratorTable, ring: ScalarRing, rules):
        self.table = table
        self.ring = ring
        prepared = []
        for i, (lhs, rhs) in enumerate(rules):
            lhs = tuple(lhs)
            if len(lhs) < 1:
                raise ValueError("rule lhs must be a nonempty word")
            rhs = Element({tuple(w): ring.coerce(c) for w, c in rhs.terms.items()})
            lk = table.order_key(lhs)
            for w in rhs.terms:
                for g in w:
                    if not 0 <= g < len(table):
                        raise ValueError(f"rule rhs uses unknown generator id {g}")
                if table.order_key(w) >= lk:
                    raise ValueError(
                        f"rule {table.format_word(lhs)} -> ... not order-decreasing "
                        f"at term {table.format_word(w)}"
                    )
            prepared.append(Rule(lhs, rhs, i))
        self.rules = tuple(prepared)
        self._by_first: dict[int, list[Rule]] = {}
        for r in self.rules:
            self._by_first.setdefault(r.lhs[0], []).append(r)
        self._lhs_set = {r.lhs for r in self.rules}
        self._max_lhs_len = max((len(r.lhs) for r in self.rules), default=0)
        self._word_cache: dict[Word, Element] = {}

    # -- matching ----------------------------------------------------------

    def first_redex(self, w: Word):
        """Leftmost position and rule, or None when w is normal."""
        n = len(w)
        for i in range(n):
            rules = self._by_first.get(w[i])
            if not rules:
                continue
            for r in rules:
                L = len(r.lhs)
                if i + L <= n and w[i : i + L] == r.lhs:
                    return i, r
        return None

    def is_normal(self, w: Word) -> bool:
        return self.first_redex(w) is None

    # -- reduction ---------------------------------------------------------

    def reduce_word(self, w: Word, step_bound: Optional[int] = None) -> Element:
        w = tuple(w)
        cached = self._word_cache.get(w)
        if cached is not None:
            return cached
        bound = step_bound if step_bound is not None else _default_step_bound[0]
        one = self.ring.one()
        out: dict[Word, object] = {}
        stack = [(w, one)]
        steps = 0
        trace = []
        while stack:
            cur, c = stack.pop()
            hit = self._word_cache.get(cur)
            if hit is not None:
                for w2, c2 in hit.terms.items():
                    s = out.get(w2)
                    s = c * c2 if s is None else s + c * c2
                    if s:
                        out[w2] = s
                    elif w2 in out:
                        del out[w2]
                continue
            pos = self.first_redex(cur)
            if pos is None:
                s = out.get(cur)
                s = c if s is None else s + c
                if s:
                    out[cur] = s
                elif cur in out:
                    del out[cur]
                continue
            steps += 1
            if steps > bound:
                raise NonTerminating(w, bound, trace)
            i, rule = pos
            trace.append((self.table.format_word(cur), rule.index))
            if len(trace) > 16:
                del trace[0]
            pre = cur[:i]
            post = cur[i + len(rule.lhs) :]
            for w2, c2 in rule.rhs.terms.items():
                stack.append((pre + w2 + post, c * c2))
        result = Element(out)
        self._word_cache[w] = result
        return result

    def reduce(self, e: Element, step_bound: Optional[int] = None) -> Element:
        acc: dict[Word, object] = {}
        for w, c in e.terms.items():
            for w2, c2 in self.reduce_word(w, step_bound).terms.items():
                s = acc.get(w2)
                s = c * c2 if s is None else s + c * c2
                if s:
                    acc[w2] = s
                elif w2 in acc:
                    del acc[w2]
        return Element(acc)

    def multiply(self, a: Element, b: Element, step_bound=None) -> Element:
        acc: dict[Word, object] = {}
        for u, cu in a.terms.items():
            for v, cv in b.terms.items():
                w = u + v
                c = cu * cv
                s = acc.get(w)
                s = c if s is None else s + c
                if s:
                    acc[w] = s
                elif w in acc:
                    del acc[w]
        return self.reduce(Element(acc), step_bound)

    def multiply_many(self, factors: Sequence[Element]) -> Element:
        out = Element.unit(self.ring.one())
        for f in factors:
            out = self.multiply(out, f)
        return out

    def power(self, a: Element, n: int) -> Element:
        out = Element.unit(self.ring.one())
        for _ in range(n):
            out = self.multiply(out, a)
        return out

    # -- basis enumeration -------------------------------------------------

    def normal_words(self, max_degree: int, max_length: Optional[int] = None):
        """Normal words with degree <= max_degree and length <= max_length.

        max_length defaults to max_degree; the explicit length cap keeps the
        sweep finite in the presence of degree-0 torus generators.
        """
        if max_length is None:
            max_length = max_degree
        out = [()]
        frontier = [()]
        while frontier:
            nxt = []
            for w in frontier:
                if len(w) >= max_length:
                    continue
                d = self.table.word_degree(w)
                for g in range(len(self.table)):
                    if d + self.table.degrees[g] > max_degree:
                        continue
                    w2 = w + (g,)
                    if self._normal_after_append(w2):
                        nxt.append(w2)
            out.extend(nxt)
            frontier = nxt
        return out

    def _normal_after_append(self, w: Word) -> bool:
        # w[:-1] is known normal; only redexes ending at the last letter matter
        n = len(w)
        for L in range(2, min(self._max_lhs_len, n) + 1):
            if w[n - L :] in self._lhs_set:
                return False
        if (w[-1],) in self._lhs_set:
            return False
        return True

    # -- confluence --------------------------------------------------------

    def _apply_at(self, w: Word, pos: int, rule: Rule) -> Element:
        pre = w[:pos]
        post = w[pos + len(rule.lhs) :]
        return Element({pre + t + post: c for t, c in rule.rhs.terms.items()})

    def confluence_report(self, max_degree: int) -> ConfluenceReport:
        """Critical-pair joinability up to max_degree.  Reports only; the
        system is never completed automatically."""
        pairs = []
        seen = set()
        for ra in self.rules:
            for rb in self.rules:
                u, v = ra.lhs, rb.lhs
                # suffix of u equals prefix of v
                for k in range(1, min(len(u), len(v))):
                    if u[-k:] == v[:k]:
                        w = u + v[k:]
                        self._record_pair(
                            pairs, seen, w, ra, 0, rb, len(u) - k, max_degree
                        )
                # v contained strictly inside u
                if len(v) < len(u) or (len(v) == len(u) and ra.index != rb.index):
                    for ofs in range(0, len(u) - len(v) + 1):
                        if u[ofs : ofs + len(v)] == v:
                            if ra.index == rb.index and ofs == 0:
                                continue
                            self._record_pair(
                                pairs, seen, u, ra, 0, rb, ofs, max_degree
                            )
        return ConfluenceReport(
            max_degree, pairs, confluent=all(p.joinable for p in pairs)
        )

    def _record_pair(self, pairs, seen, w, ra, pa, rb, pb, max_degree):
        if self.table.word_degree(w) > max_degree:
            return
        key = (w, ra.index, pa, rb.index, pb)
        if key in seen:
            return
        seen.add(key)
        nf_a = self.reduce(self._apply_at(w, pa, ra))
        nf_b = self.reduce(self._apply_at(w, pb, rb))
        pairs.append(
            CriticalPair(
                word=w,
                rule_a=ra.index,
                rule_b=rb.index,
                pos_a=pa,
                pos_b=pb,
                nf_a=nf_a,
                nf_b=nf_b,
                joinable=(nf_a == nf_b),
            )
        )

    # -- tensors -----------------------------------------------------------

    def unit_element(self) -> Element:
        return Element.unit(self.ring.one())

    def generator_element(self, gid: int) -> Element:
        return Element.generator(gid, self.ring.one())


def tensor_reduce(systems: Sequence[RewriteSystem], t: TensorElement) -> TensorElement:
    """Reduce every slot; cross-multiply the per-slot normal forms."""
    if len(systems) != t.arity:
        raise ValueError("system count must match tensor arity")
    out = TensorElement(t.arity)
    for key, c in t.terms.items():
        slot_elts = [systems[i].reduce_word(key[i]) for i in range(t.arity)]
        out = out + TensorElement.outer(slot_elts).scale(c)
    return out


def tensor_multiply(
    systems: Sequence[RewriteSystem], a: TensorElement, b: TensorElement
) -> TensorElement:
    if a.arity != b.arity or len(systems) != a.arity:
        raise ValueError("tensor arity mismatch")
    acc: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            key = tuple(ka[i] + kb[i] for i in range(a.arity))
            c = ca * cb
            s = acc.get(key)
            s = c if s is None else s + c
            if s:
                acc[key] = s
            elif key in acc:
                del acc[key]
    return tensor_reduce(systems, TensorElement(a.arity, acc))


def map_slot(
    t: TensorElement, slot: int, fn: Callable[[Word], object], one
) -> TensorElement:
    """Replace the given slot of each term by fn(word).

    fn returns an Element (slot stays one slot) or a TensorElement (slot
    expands into that many slots).  All terms must expand consistently.
    """
    out = None
    for key, c in t.terms.items():
        img = fn(key[slot])
        if isinstance(img, Element):
            img = TensorElement(1, {(w,): cw for w, cw in img.terms.items()})
        pre = key[:slot]
        post = key[slot + 1 :]
        piece_terms = {}
        for ik, ic in img.terms.items():
            piece_terms[pre + ik + post] = ic * c
        piece = TensorElement(len(key) - 1 + img.arity, piece_terms)
        out = piece if out is None else out + piece
    if out is None:
        return TensorElement(t.arity)
    return out
