"""Skew pairings, coquasitriangular checks, comodule algebras.

A skew pairing between Hopf presentations is determined by its values on
generator pairs.  Extension to words follows the canonical recursion

    gamma(1, b)  = counit(b)            gamma(a, 1)  = counit(a)
    gamma(a, bc) = gamma(a_(1), b) gamma(a_(2), c)
    gamma(ab, c) = gamma(a, c_(2)) gamma(b, c_(1))

with the second-slot split reversed; the convolution inverse is
gamma(S(a), b).  The recursion is well defined on arbitrary words, so
validation can compare its value on a rule's lhs word against the rhs
element without circularity.
"""

from __future__ import annotations

from .exprio import format_element, format_scalar, format_tensor
from .hopf import AlgebraPresentation, HopfMap, HopfStructure, ValidationFailed
from .ncalg import Element, TensorElement, map_slot, tensor_multiply, tensor_reduce
from .reports import CheckReport


class SkewPairing:
    def __init__(self, name: str, left: HopfStructure, right: HopfStructure, table):
        if left.alg.ring is not right.alg.ring:
            raise ValidationFailed(
                f"pairing {name}: sides live over different scalar rings"
            )
        self.name = name
        self.left = left
        self.right = right
        self.ring = left.alg.ring
        tbl = {}
        for (gl, gr), c in table.items():
            c = self.ring.coerce(c)
            if c:
                tbl[(gl, gr)] = c
        self.table = tbl
        self._memo: dict = {}

    def pair_words(self, u, w):
        u = tuple(u)
        w = tuple(w)
        key = (u, w)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        ring = self.ring
        if not u:
            out = self.right.counit_word(w)
        elif not w:
            out = self.left.counit_word(u)
        elif len(u) == 1 and len(w) == 1:
            out = self.table.get((u[0], w[0]), ring.zero())
        elif len(u) == 1:
            head, rest = (w[0],), w[1:]
            out = ring.zero()
            for (k1, k2), c in self.left.coproduct_word(u).terms.items():
                p1 = self.pair_words(k1, head)
                if not p1:
                    continue
                p2 = self.pair_words(k2, rest)
                if p2:
                    out = out + c * p1 * p2
        else:
            head, rest = (u[0],), u[1:]
            out = ring.zero()
            for (k1, k2), c in self.right.coproduct_word(w).terms.items():
                p1 = self.pair_words(head, k2)
                if not p1:
                    continue
                p2 = self.pair_words(rest, k1)
                if p2:
                    out = out + c * p1 * p2
        self._memo[key] = out
        return out

    def pair(self, a: Element, b: Element):
        out = self.ring.zero()
        for u, cu in a.terms.items():
            for w, cw in b.terms.items():
                p = self.pair_words(u, w)
                if p:
                    out = out + cu * cw * p
        return out

    def inverse_pair(self, a: Element, b: Element):
        """Convolution inverse gamma^-1(a, b) = gamma(a, S(b))."""
        return self.pair(a, self.right.antipode(b))

    # -- validation --------------------------------------------------------

    def check_laws(self, max_degree: int) -> CheckReport:
        rep = CheckReport("pairing", self.name, max_degree)
        lt, rt = self.left.alg.table, self.right.alg.table
        rbasis = self.right.alg.basis(max_degree)
        lbasis = self.left.alg.basis(max_degree)
        fails = 0
        for rule in self.left.alg.rs.rules:
            for w in rbasis:
                lhs = self.pair_words(rule.lhs, w)
                rhs = self.ring.zero()
                for t, c in rule.rhs.terms.items():
                    p = self.pair_words(t, w)
                    if p:
                        rhs = rhs + c * p
                if lhs != rhs:
                    fails += 1
                    if fails <= 3:
                        rep.add(
                            f"left relation {lt.format_word(rule.lhs)} "
                            f"against {rt.format_word(w)}",
                            False,
                            {
                                "left": lt.format_word(rule.lhs),
                                "right": rt.format_word(w),
                                "lhs": format_scalar(lhs),
                                "rhs": format_scalar(rhs),
                            },
                        )
        rep.add(
            f"left relations against {len(rbasis)} right words", fails == 0
        )
        fails = 0
        for rule in self.right.alg.rs.rules:
            for u in lbasis:
                lhs = self.pair_words(u, rule.lhs)
                rhs = self.ring.zero()
                for t, c in rule.rhs.terms.items():
                    p = self.pair_words(u, t)
                    if p:
                        rhs = rhs + c * p
                if lhs != rhs:
                    fails += 1
                    if fails <= 3:
                        rep.add(
                            f"right relation {rt.format_word(rule.lhs)} "
                            f"against {lt.format_word(u)}",
                            False,
                            {
                                "left": lt.format_word(u),
                                "right": rt.format_word(rule.lhs),
                                "lhs": format_scalar(lhs),
                                "rhs": format_scalar(rhs),
                            },
                        )
        rep.add(
            f"right relations against {len(lbasis)} left words", fails == 0
        )
        # product laws cross-checked through reduced products
        fails = 0
        pairs_checked = 0
        for u1 in lbasis:
            if len(u1) != 1:
                continue
            for u2 in lbasis:
                if len(u2) != 1:
                    continue
                prod = self.left.alg.rs.reduce_word(u1 + u2)
                for w in rbasis:
                    pairs_checked += 1
                    via_product = self.pair(prod, Element.from_word(w, self.ring.one()))
                    via_law = self.pair_words(u1 + u2, w)
                    if via_product != via_law:
                        fails += 1
        rep.add(
            f"product law consistency on {pairs_checked} triples", fails == 0
        )
        # convolution inverse: gamma(a_(1), S(b_(1))) gamma(a_(2), b_(2)) = eps eps
        fails = 0
        checked = 0
        s_pair_memo: dict = {}

        def s_pair(u1, w1):
            hit = s_pair_memo.get((u1, w1))
            if hit is None:
                hit = self.ring.zero()
                for t, c in self.right.antipode_word(w1).terms.items():
                    p = self.pair_words(u1, t)
                    if p:
                        hit = hit + c * p
                s_pair_memo[(u1, w1)] = hit
            return hit

        for u in lbasis:
            if len(u) > 2:
                continue
            for w in rbasis:
                if len(w) > 2:
                    continue
                checked += 1
                acc = self.ring.zero()
                for (u1, u2), cu in self.left.coproduct_word(u).terms.items():
                    for (w1, w2), cw in self.right.coproduct_word(w).terms.items():
                        p1 = s_pair(u1, w1)
                        if not p1:
                            continue
                        p2 = self.pair_words(u2, w2)
                        if p2:
                            acc = acc + cu * cw * p1 * p2
                want = self.left.counit_word(u) * self.right.counit_word(w)
                if acc != want:
                    fails += 1
                    if fails <= 3:
                        rep.add(
                            f"convolution inverse at "
                            f"({lt.format_word(u)}, {rt.format_word(w)})",
                            False,
                            {
                                "left": lt.format_word(u),
                                "right": rt.format_word(w),
                                "lhs": format_scalar(acc),
                                "rhs": format_scalar(want),
                            },
                        )
        rep.add(f"convolution inverse on {checked} pairs", fails == 0)
        return rep


def counit_pairing(name: str, left, right) -> SkewPairing:
    """Pairing with gamma(a, b) = eps(a) eps(b).

    The generator table must carry the counit products; an empty table
    encodes the zero pairing instead whenever some generator has nonzero
    counit."""
    table = {}
    nl = len(left.alg.table)
    nr = len(right.alg.table)
    for gl in range(nl):
        cl = left.counit_word((gl,))
        if not cl:
            continue
        for gr in range(nr):
            cr = right.counit_word((gr,))
            if cr:
                table[(gl, gr)] = cl * cr
    return SkewPairing(name, left, right, table)


def check_coquasitriangular(r: SkewPairing, max_degree: int) -> CheckReport:
    """Pairing laws plus the braiding identity

        r(a_(1), b_(1)) b_(2) a_(2) = r(a_(2), b_(2)) a_(1) b_(1)

    on pairs of basis words of the (single) underlying Hopf presentation."""
    if r.left is not r.right:
        raise ValidationFailed(
            "coquasitriangularity needs both pairing slots on one Hopf structure"
        )
    h = r.left
    rep = CheckReport("coquasitriangular", f"{h.alg.name}:{r.name}", max_degree)
    rep.extend(r.check_laws(max_degree), prefix="pairing: ")
    rs = h.alg.rs
    table = h.alg.table
    # name-lexicographic sweep keeps the first witness deterministic
    basis = sorted(
        h.alg.basis(max_degree),
        key=lambda w: (
            table.word_degree(w),
            len(w),
            tuple(table.name_of(g) for g in w),
        ),
    )
    fails = 0
    checked = 0
    first_witness = None

    def accumulate(acc, word_pair, c):
        for word, cx in rs.reduce_word(word_pair).terms.items():
            s = acc.get(word)
            s = c * cx if s is None else s + c * cx
            if s:
                acc[word] = s
            elif word in acc:
                del acc[word]

    for u in basis:
        if not u:
            continue
        cu = h.coproduct_word(u)
        for w in basis:
            if not w:
                continue
            checked += 1
            cw = h.coproduct_word(w)
            lhs: dict = {}
            rhs: dict = {}
            for (u1, u2), c1 in cu.terms.items():
                for (w1, w2), c2 in cw.terms.items():
                    c = c1 * c2
                    pl = r.pair_words(u1, w1)
                    if pl:
                        accumulate(lhs, w2 + u2, c * pl)
                    pr = r.pair_words(u2, w2)
                    if pr:
                        accumulate(rhs, u1 + w1, c * pr)
            if lhs != rhs:
                fails += 1
                if first_witness is None:
                    first_witness = {
                        "a": table.format_word(u),
                        "b": table.format_word(w),
                        "lhs": format_element(table, Element(lhs)),
                        "rhs": format_element(table, Element(rhs)),
                    }
    rep.add(
        f"braiding identity on {checked} word pairs",
        fails == 0,
        first_witness if fails else None,
    )
    return rep


def check_relative_coquasitriangular(
    rH: SkewPairing, f: HopfMap, rD: SkewPairing, max_degree: int
) -> CheckReport:
    """Relative structure along a Hopf map f: D -> H.

    Checks (1) rD = rH after pushing the second slot through f, and
    (2) the intertwiner identity
        rH(d_(1), h_(1)) h_(2) f(d_(2)) = rH(d_(2), h_(2)) f(d_(1)) h_(1)."""
    D = f.dom
    H = f.cod
    if rH.left is not D or rH.right is not H:
        raise ValidationFailed("rH must pair D against H along the map")
    if rD.left is not D or rD.right is not D:
        raise ValidationFailed("rD must pair D against itself")
    rep = CheckReport(
        "relative-coquasitriangular", f"{D.alg.name}->{H.alg.name}", max_degree
    )
    dt = D.alg.table
    ht = H.alg.table
    hrs = H.alg.rs
    one = H.alg.ring.one()
    dbasis = D.alg.basis(max_degree)
    hbasis = H.alg.basis(max_degree)
    fails = 0
    checked = 0
    witness = None
    for d1 in dbasis:
        for d2 in dbasis:
            checked += 1
            lhs = rD.pair_words(d1, d2)
            rhs = rH.pair(
                Element.from_word(d1, one), f.apply_word(d2)
            )
            if lhs != rhs:
                fails += 1
                if witness is None:
                    witness = {
                        "d1": dt.format_word(d1),
                        "d2": dt.format_word(d2),
                        "lhs": format_scalar(lhs),
                        "rhs": format_scalar(rhs),
                    }
    rep.add(
        f"restriction agrees on {checked} word pairs",
        fails == 0,
        witness,
    )
    fails = 0
    checked = 0
    witness = None
    for d in dbasis:
        if not d:
            continue
        cd = D.coproduct_word(d)
        for h in hbasis:
            if not h:
                continue
            checked += 1
            ch = H.coproduct_word(h)
            lhs = Element()
            rhs = Element()
            for (d1, d2), c1 in cd.terms.items():
                fd2 = f.apply_word(d2)
                fd1 = f.apply_word(d1)
                for (h1, h2), c2 in ch.terms.items():
                    c = c1 * c2
                    lhs = lhs + hrs.multiply(
                        Element.from_word(h2, one), fd2
                    ).scale(c * rH.pair_words(d1, h1))
                    rhs = rhs + hrs.multiply(
                        fd1, Element.from_word(h1, one)
                    ).scale(c * rH.pair_words(d2, h2))
            if lhs != rhs:
                fails += 1
                if witness is None:
                    witness = {
                        "d": dt.format_word(d),
                        "h": ht.format_word(h),
                        "lhs": format_element(ht, lhs),
                        "rhs": format_element(ht, rhs),
                    }
    rep.add(
        f"intertwiner identity on {checked} word pairs",
        fails == 0,
        witness,
    )
    return rep


class ComoduleAlgebra:
    """Algebra with a right coaction into a Hopf structure.

    Coaction tensors put the carrier slot first and the Hopf slot second.
    Iterating the coaction splits the Hopf leg against the opposite
    coproduct; the reversed second-slot law of the pairing recursion needs
    this orientation for the induced action to be a left action.
    """

    def __init__(
        self,
        name: str,
        alg: AlgebraPresentation,
        hopf: HopfStructure,
        coaction: dict,
    ):
        if alg.ring is not hopf.alg.ring:
            raise ValidationFailed(
                f"comodule {name}: carrier and Hopf side have different rings"
            )
        self.name = name
        self.alg = alg
        self.hopf = hopf
        systems = [alg.rs, hopf.alg.rs]
        missing = [
            alg.table.name_of(g) for g in range(len(alg.table)) if g not in coaction
        ]
        if missing:
            raise ValidationFailed(
                f"comodule {name} missing coaction for: {', '.join(missing)}"
            )
        self.coaction_table = {
            g: tensor_reduce(systems, t) for g, t in coaction.items()
        }
        self._cache: dict = {}

    def coact_word(self, w) -> TensorElement:
        w = tuple(w)
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        systems = [self.alg.rs, self.hopf.alg.rs]
        if not w:
            out = TensorElement.unit(2, self.alg.ring.one())
        else:
            out = self.coaction_table[w[0]]
            for g in w[1:]:
                out = tensor_multiply(systems, out, self.coaction_table[g])
        self._cache[w] = out
        return out

    def coact(self, e: Element) -> TensorElement:
        out = TensorElement(2)
        for w, c in e.terms.items():
            out = out + self.coact_word(w).scale(c)
        return out

    def validate(self, max_degree: int) -> CheckReport:
        rep = CheckReport("comodule", self.name, max_degree)
        at = self.alg.table
        ht = self.hopf.alg.table
        for rule in self.alg.rs.rules:
            lhs = self.coact_word(rule.lhs)
            rhs = self.coact(rule.rhs)
            name = f"coaction respects {at.format_word(rule.lhs)}"
            rep.add(
                name,
                lhs == rhs,
                None
                if lhs == rhs
                else {
                    "word": at.format_word(rule.lhs),
                    "lhs": format_tensor([at, ht], lhs),
                    "rhs": format_tensor([at, ht], rhs),
                },
            )
        one = self.alg.ring.one()
        ars = self.alg.rs
        hrs = self.hopf.alg.rs
        fails = 0
        checked = 0
        for w in self.alg.basis(max_degree):
            checked += 1
            t = self.coact_word(w)
            split = map_slot(t, 1, self.hopf.coproduct_word, one)
            swapped = TensorElement(
                3, {(k[0], k[2], k[1]): c for k, c in split.terms.items()}
            )
            left = tensor_reduce([ars, hrs, hrs], swapped)
            right = tensor_reduce(
                [ars, hrs, hrs], map_slot(t, 0, self.coact_word, one)
            )
            if left != right:
                fails += 1
                if fails <= 3:
                    rep.add(
                        f"coassociativity at {at.format_word(w)}",
                        False,
                        {
                            "word": at.format_word(w),
                            "lhs": format_tensor([at, ht, ht], left),
                            "rhs": format_tensor([at, ht, ht], right),
                        },
                    )
            here = Element({w: one})
            eps = Element()
            for key, c in t.terms.items():
                eps = eps + Element({key[0]: c * self.hopf.counit_word(key[1])})
            eps = ars.reduce(eps)
            if eps != here:
                fails += 1
                rep.add(
                    f"counit law at {at.format_word(w)}",
                    False,
                    {
                        "word": at.format_word(w),
                        "lhs": format_element(at, eps),
                        "rhs": format_element(at, here),
                    },
                )
        rep.add(f"comodule axioms on {checked} basis words", fails == 0)
        return rep


class CoactionAction:
    """Left action induced from a coaction through a pairing:
    h |> v = v_(0) p(h, v_(1)).  Requires p.right to be the coacting Hopf."""

    def __init__(self, p: SkewPairing, ca: ComoduleAlgebra):
        if p.right is not ca.hopf:
            raise ValidationFailed(
                "action needs the pairing's right side to be the coacting Hopf"
            )
        self.p = p
        self.ca = ca

    def act(self, h: Element, v: Element) -> Element:
        out = Element()
        for vw, c in v.terms.items():
            for (v0, v1), c2 in self.ca.coact_word(vw).terms.items():
                s = self.p.pair(h, Element.from_word(v1, self.p.ring.one()))
                out = out + Element({v0: c * c2 * s})
        return self.ca.alg.rs.reduce(out)

    def act_word(self, hw, v: Element) -> Element:
        return self.act(Element.from_word(hw, self.p.ring.one()), v)


def distributive_law(
    p: SkewPairing, w_side: ComoduleAlgebra, v_side: ComoduleAlgebra,
    w: Element, v: Element,
) -> TensorElement:
    """Braided transposition W (x) V -> V (x) W:
    w (x) v  ->  v_(0) (x) w_(0) p(w_(1), v_(1))."""
    if w_side.hopf is not p.left or v_side.hopf is not p.right:
        raise ValidationFailed(
            "distributive law needs W coacting along p.left and V along p.right"
        )
    out = TensorElement(2)
    one = p.ring.one()
    for ww, cw in w.terms.items():
        for vw, cv in v.terms.items():
            for (w0, w1), c1 in w_side.coact_word(ww).terms.items():
                for (v0, v1), c2 in v_side.coact_word(vw).terms.items():
                    s = cw * cv * c1 * c2 * p.pair_words(w1, v1)
                    out = out + TensorElement(2, {(v0, w0): s})
    return tensor_reduce([v_side.alg.rs, w_side.alg.rs], out)
