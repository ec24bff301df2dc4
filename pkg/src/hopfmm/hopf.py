"""Hopf structures on rewriting presentations, Hopf maps, module helpers.

Structure tables give the coproduct, counit, and antipode on generators;
the extensions (multiplicative, multiplicative, anti-multiplicative) are
computed on demand and cached per word.  Validation sweeps run over normal
words with degree and length both bounded by N; the explicit length bound
keeps torus towers finite.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from .exprio import (
    format_element,
    format_scalar,
    format_tensor,
    parse_element,
    parse_expression,
)
from .ncalg import (
    Element,
    GeneratorTable,
    RewriteSystem,
    TensorElement,
    map_slot,
    tensor_multiply,
    tensor_reduce,
)
from .reports import CheckReport
from .scalars import ScalarRing


class ValidationFailed(ValueError):
    """Structure data is malformed before any axiom can be checked."""


class AlgebraPresentation:
    """Named algebra given by generators and an ordered rewriting system."""

    def __init__(self, name: str, ring: ScalarRing, table: GeneratorTable, rules):
        self.name = name
        self.ring = ring
        self.table = table
        self.rs = RewriteSystem(table, ring, rules)

    def basis(self, max_degree: int, max_length: Optional[int] = None):
        return self.rs.normal_words(max_degree, max_length)

    def element(self, text: str) -> Element:
        return self.rs.reduce(parse_element(text, self.table, self.ring))

    def expression(self, text: str):
        out = parse_expression(text, self.table, self.ring)
        if isinstance(out, TensorElement):
            return tensor_reduce([self.rs] * out.arity, out)
        return self.rs.reduce(out)

    def format(self, e: Element) -> str:
        return format_element(self.table, e)

    def format_tensor(self, t: TensorElement) -> str:
        return format_tensor([self.table] * t.arity, t)

    def unit(self) -> Element:
        return self.rs.unit_element()

    def gen(self, name: str) -> Element:
        return self.rs.generator_element(self.table.id_of(name))

    def __repr__(self):
        return f"AlgebraPresentation({self.name!r}, {len(self.table)} generators)"


class HopfStructure:
    """Coproduct / counit / antipode tables over an algebra presentation."""

    def __init__(
        self,
        alg: AlgebraPresentation,
        coproduct: dict,
        counit: dict,
        antipode: dict,
    ):
        self.alg = alg
        n = len(alg.table)
        for label, tbl in (
            ("coproduct", coproduct),
            ("counit", counit),
            ("antipode", antipode),
        ):
            missing = [alg.table.name_of(g) for g in range(n) if g not in tbl]
            if missing:
                raise ValidationFailed(
                    f"{label} table missing generators: {', '.join(missing)}"
                )
        rs = alg.rs
        self.coproduct_table = {
            g: tensor_reduce([rs, rs], t) for g, t in coproduct.items()
        }
        self.counit_table = {g: alg.ring.coerce(c) for g, c in counit.items()}
        self.antipode_table = {g: rs.reduce(e) for g, e in antipode.items()}
        self._cop_cache: dict = {}
        self._antipode_cache: dict = {}

    # -- extensions --------------------------------------------------------

    def coproduct_word(self, w) -> TensorElement:
        w = tuple(w)
        hit = self._cop_cache.get(w)
        if hit is not None:
            return hit
        rs = self.alg.rs
        if not w:
            out = TensorElement.unit(2, self.alg.ring.one())
        else:
            out = self.coproduct_table[w[0]]
            for g in w[1:]:
                out = tensor_multiply([rs, rs], out, self.coproduct_table[g])
        self._cop_cache[w] = out
        return out

    def coproduct(self, e: Element) -> TensorElement:
        out = TensorElement(2)
        for w, c in e.terms.items():
            out = out + self.coproduct_word(w).scale(c)
        return out

    def counit_word(self, w):
        out = self.alg.ring.one()
        for g in w:
            out = out * self.counit_table[g]
            if not out:
                return out
        return out

    def counit(self, e: Element):
        out = self.alg.ring.zero()
        for w, c in e.terms.items():
            out = out + c * self.counit_word(w)
        return out

    def antipode_word(self, w) -> Element:
        w = tuple(w)
        hit = self._antipode_cache.get(w)
        if hit is not None:
            return hit
        rs = self.alg.rs
        out = rs.unit_element()
        for g in reversed(w):
            out = rs.multiply(out, self.antipode_table[g])
        self._antipode_cache[w] = out
        return out

    def antipode(self, e: Element) -> Element:
        out = Element()
        for w, c in e.terms.items():
            out = out + self.antipode_word(w).scale(c)
        return out

    def iterated_coproduct(self, e: Element, legs: int) -> TensorElement:
        if legs < 1:
            raise ValueError("legs must be >= 1")
        out = TensorElement(1, {(w,): c for w, c in e.terms.items()})
        one = self.alg.ring.one()
        while out.arity < legs:
            out = map_slot(out, 0, self.coproduct_word, one)
        return out

    # -- validation --------------------------------------------------------

    def _tensor_witness(self, w, lhs, rhs, extra=None):
        wit = {"word": self.alg.table.format_word(w)}
        if extra:
            wit.update(extra)
        wit["lhs"] = (
            format_tensor([self.alg.table] * lhs.arity, lhs)
            if isinstance(lhs, TensorElement)
            else format_element(self.alg.table, lhs)
        )
        wit["rhs"] = (
            format_tensor([self.alg.table] * rhs.arity, rhs)
            if isinstance(rhs, TensorElement)
            else format_element(self.alg.table, rhs)
        )
        return wit

    def check_bialgebra(self, max_degree: int) -> CheckReport:
        rep = CheckReport("bialgebra", self.alg.name, max_degree)
        rs = self.alg.rs
        table = self.alg.table
        for rule in rs.rules:
            lhs_cop = self.coproduct_word(rule.lhs)
            rhs_cop = self.coproduct(rule.rhs)
            name = f"coproduct respects {table.format_word(rule.lhs)}"
            if lhs_cop == rhs_cop:
                rep.add(name, True)
            else:
                rep.add(
                    name, False, self._tensor_witness(rule.lhs, lhs_cop, rhs_cop)
                )
            lhs_cou = self.counit_word(rule.lhs)
            rhs_cou = self.counit(rule.rhs)
            name = f"counit respects {table.format_word(rule.lhs)}"
            if lhs_cou == rhs_cou:
                rep.add(name, True)
            else:
                rep.add(
                    name,
                    False,
                    {
                        "word": table.format_word(rule.lhs),
                        "lhs": format_scalar(lhs_cou),
                        "rhs": format_scalar(rhs_cou),
                    },
                )
        one = self.alg.ring.one()
        coassoc_fail = counit_fail = 0
        checked = 0
        for w in self.alg.basis(max_degree):
            checked += 1
            t = self.coproduct_word(w)
            left = tensor_reduce(
                [rs] * 3, map_slot(t, 0, self.coproduct_word, one)
            )
            right = tensor_reduce(
                [rs] * 3, map_slot(t, 1, self.coproduct_word, one)
            )
            if left != right:
                coassoc_fail += 1
                rep.add(
                    f"coassociativity at {table.format_word(w)}",
                    False,
                    self._tensor_witness(w, left, right),
                )
            here = Element({w: one})
            eps_left = Element()
            eps_right = Element()
            for key, c in t.terms.items():
                eps_left = eps_left + Element(
                    {key[1]: c * self.counit_word(key[0])}
                )
                eps_right = eps_right + Element(
                    {key[0]: c * self.counit_word(key[1])}
                )
            eps_left = rs.reduce(eps_left)
            eps_right = rs.reduce(eps_right)
            if eps_left != here or eps_right != here:
                counit_fail += 1
                rep.add(
                    f"counit law at {table.format_word(w)}",
                    False,
                    self._tensor_witness(w, eps_left, eps_right),
                )
        rep.add(f"coassociativity on {checked} basis words", coassoc_fail == 0)
        rep.add(f"counit laws on {checked} basis words", counit_fail == 0)
        return rep

    def check_antipode(self, max_degree: int) -> CheckReport:
        rep = CheckReport("antipode", self.alg.name, max_degree)
        rs = self.alg.rs
        table = self.alg.table
        for rule in rs.rules:
            lhs_s = self.antipode_word(rule.lhs)
            rhs_s = self.antipode(rule.rhs)
            name = f"antipode respects {table.format_word(rule.lhs)}"
            if lhs_s == rhs_s:
                rep.add(name, True)
            else:
                rep.add(name, False, self._tensor_witness(rule.lhs, lhs_s, rhs_s))
        fails = 0
        checked = 0
        for w in self.alg.basis(max_degree):
            checked += 1
            t = self.coproduct_word(w)
            left = Element()
            right = Element()
            for key, c in t.terms.items():
                left = left + rs.multiply(
                    self.antipode_word(key[0]), Element({key[1]: c})
                )
                right = right + rs.multiply(
                    Element({key[0]: c}), self.antipode_word(key[1])
                )
            target = rs.unit_element().scale(self.counit_word(w))
            if left != target or right != target:
                fails += 1
                rep.add(
                    f"antipode law at {table.format_word(w)}",
                    False,
                    self._tensor_witness(w, left, right),
                )
        rep.add(f"antipode laws on {checked} basis words", fails == 0)
        return rep

    def validate(self, max_degree: int) -> CheckReport:
        rep = CheckReport("hopf", self.alg.name, max_degree)
        conf = self.alg.rs.confluence_report(max_degree)
        rep.add(
            f"rewriting confluent to degree {max_degree} "
            f"({len(conf.pairs)} critical pairs)",
            conf.confluent,
            None
            if conf.confluent
            else {
                "word": self.alg.table.format_word(conf.unresolved[0].word),
                "nf_a": format_element(self.alg.table, conf.unresolved[0].nf_a),
                "nf_b": format_element(self.alg.table, conf.unresolved[0].nf_b),
            },
        )
        rep.extend(self.check_bialgebra(max_degree))
        rep.extend(self.check_antipode(max_degree))
        return rep


class HopfMap:
    """Algebra map between Hopf structures given on generators."""

    def __init__(
        self,
        name: str,
        dom: HopfStructure,
        cod: HopfStructure,
        images: dict,
    ):
        self.name = name
        self.dom = dom
        self.cod = cod
        missing = [
            dom.alg.table.name_of(g)
            for g in range(len(dom.alg.table))
            if g not in images
        ]
        if missing:
            raise ValidationFailed(
                f"map {name} missing images for: {', '.join(missing)}"
            )
        self.images = {g: cod.alg.rs.reduce(e) for g, e in images.items()}
        self._cache: dict = {}

    def apply_word(self, w) -> Element:
        w = tuple(w)
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        rs = self.cod.alg.rs
        out = rs.unit_element()
        for g in w:
            out = rs.multiply(out, self.images[g])
        self._cache[w] = out
        return out

    def apply(self, e: Element) -> Element:
        out = Element()
        for w, c in e.terms.items():
            out = out + self.apply_word(w).scale(c)
        return out

    def check(self, max_degree: int) -> CheckReport:
        rep = CheckReport("hopfmap", self.name, max_degree)
        dt = self.dom.alg.table
        ct = self.cod.alg.table
        crs = self.cod.alg.rs
        for rule in self.dom.alg.rs.rules:
            lhs = self.apply_word(rule.lhs)
            rhs = self.apply(rule.rhs)
            rep.add(
                f"algebra map respects {dt.format_word(rule.lhs)}",
                lhs == rhs,
                None
                if lhs == rhs
                else {
                    "word": dt.format_word(rule.lhs),
                    "lhs": format_element(ct, lhs),
                    "rhs": format_element(ct, rhs),
                },
            )
        one = self.cod.alg.ring.one()
        for g in range(len(dt)):
            gname = dt.name_of(g)
            dom_cop = self.dom.coproduct_table[g]
            lhs = tensor_reduce(
                [crs, crs],
                map_slot(
                    map_slot(dom_cop, 0, self.apply_word, one),
                    1,
                    self.apply_word,
                    one,
                ),
            )
            rhs = self.cod.coproduct(self.images[g])
            rep.add(
                f"coproduct compatible at {gname}",
                lhs == rhs,
                None
                if lhs == rhs
                else {
                    "generator": gname,
                    "lhs": format_tensor([ct, ct], lhs),
                    "rhs": format_tensor([ct, ct], rhs),
                },
            )
            lc = self.cod.counit(self.images[g])
            rc = self.dom.counit_table[g]
            rep.add(f"counit compatible at {gname}", lc == rc)
            ls = self.apply(self.dom.antipode_table[g])
            rs_ = self.cod.antipode(self.images[g])
            rep.add(
                f"antipode compatible at {gname}",
                ls == rs_,
                None
                if ls == rs_
                else {
                    "generator": gname,
                    "lhs": format_element(ct, ls),
                    "rhs": format_element(ct, rs_),
                },
            )
        return rep


class LeftModule:
    """Left module over a Hopf structure's algebra; carrier is another
    rewriting presentation, the action is given per generator."""

    def __init__(
        self,
        name: str,
        hopf: HopfStructure,
        carrier: AlgebraPresentation,
        act_gen: Callable[[int, Element], Element],
    ):
        self.name = name
        self.hopf = hopf
        self.carrier = carrier
        self.act_gen = act_gen

    def act_word(self, w, v: Element) -> Element:
        for g in reversed(tuple(w)):
            v = self.act_gen(g, v)
        return v

    def act(self, h: Element, v: Element) -> Element:
        out = Element()
        for w, c in h.terms.items():
            out = out + self.act_word(w, v).scale(c)
        return out


def regular_module(h: HopfStructure) -> LeftModule:
    rs = h.alg.rs

    def act(gid: int, v: Element) -> Element:
        return rs.multiply(rs.generator_element(gid), v)

    return LeftModule(f"{h.alg.name}:regular", h, h.alg, act)


def trivial_module(h: HopfStructure) -> LeftModule:
    def act(gid: int, v: Element) -> Element:
        return v.scale(h.counit_table[gid])

    return LeftModule(f"{h.alg.name}:trivial", h, h.alg, act)


def hopf_module_alpha(m: LeftModule, t: TensorElement) -> TensorElement:
    """h (x) v  ->  h_(1) (x) h_(2).v  on each term, extended linearly."""
    if t.arity != 2:
        raise ValueError("expected an H (x) V tensor")
    h = m.hopf
    out = TensorElement(2)
    for (hw, vw), c in t.terms.items():
        v = Element.from_word(vw, m.carrier.ring.one())
        for (k1, k2), c2 in h.coproduct_word(hw).terms.items():
            acted = m.act_word(k2, v)
            piece = TensorElement.outer(
                [Element.from_word(k1, h.alg.ring.one()), acted]
            )
            out = out + piece.scale(c * c2)
    return out


def hopf_module_beta(m: LeftModule, t: TensorElement) -> TensorElement:
    """h (x) v  ->  h_(1) (x) S(h_(2)).v  on each term, extended linearly."""
    if t.arity != 2:
        raise ValueError("expected an H (x) V tensor")
    h = m.hopf
    out = TensorElement(2)
    for (hw, vw), c in t.terms.items():
        v = Element.from_word(vw, m.carrier.ring.one())
        for (k1, k2), c2 in h.coproduct_word(hw).terms.items():
            acted = m.act(h.antipode_word(k2), v)
            piece = TensorElement.outer(
                [Element.from_word(k1, h.alg.ring.one()), acted]
            )
            out = out + piece.scale(c * c2)
    return out
