"""Moment maps on comodule algebras: identity checks, centrality, fusion,
Hamiltonian reduction, and the counit-coaction composite map.

A moment source bundles a bialgebroid-style base F: its presentation, its
coaction along the acting Hopf algebra H, a covector coaction into the dual
side H^v (second tensor slot holds the H^v leg), a counit, and a fusion
coproduct F -> F (x) F.  A moment map into a comodule algebra A is an
algebra map mu: F -> A satisfying

    mu(h) a = (h_(1) |> a) mu(h_(0))

with h_(0) (x) h_(1) the covector coaction and |> the action induced from
A's coaction through the evaluation pairing.

Centrality is phrased in the crossed product A # H^v whose product twists
by the antipode:  (x (x) u)(y (x) v) = x (u_(1) |>~ y) (x) u_(2) v  with
u |>~ y = y_(0) ev(S(u), y_(1)).  With that twist, centrality of
mu'(h) = mu(h_(0)) (x) h_(1) against A (x) 1 is equivalent to the moment
identity, so the two checkers must agree input by input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import linalg
from .exprio import (
    format_element,
    format_scalar,
    format_scalar_pair,
    format_tensor,
    NotLaurentPrintable,
)
from .hopf import AlgebraPresentation, HopfStructure, ValidationFailed
from .ncalg import (
    Element,
    GeneratorTable,
    TensorElement,
    map_slot,
    tensor_multiply,
    tensor_reduce,
)
from .pairing import CoactionAction, ComoduleAlgebra, SkewPairing
from .reports import CheckReport


class MomentSource:
    """Base data F for moment maps over a fixed Hopf pair (H, H^v)."""

    def __init__(
        self,
        name: str,
        h_comodule: ComoduleAlgebra,
        covector: ComoduleAlgebra,
        counit: dict,
        fusion_coproduct: dict,
    ):
        if h_comodule.alg is not covector.alg:
            raise ValidationFailed(
                f"source {name}: H-comodule and covector coaction must share "
                "one carrier presentation"
            )
        self.name = name
        self.algebra = h_comodule.alg
        self.h_comodule = h_comodule
        self.covector = covector
        ring = self.algebra.ring
        n = len(self.algebra.table)
        for label, tbl in (("counit", counit), ("fusion coproduct", fusion_coproduct)):
            missing = [
                self.algebra.table.name_of(g) for g in range(n) if g not in tbl
            ]
            if missing:
                raise ValidationFailed(
                    f"source {name} {label} missing: {', '.join(missing)}"
                )
        self.counit = {g: ring.coerce(c) for g, c in counit.items()}
        rs = self.algebra.rs
        self.fusion_coproduct = {
            g: tensor_reduce([rs, rs], t) for g, t in fusion_coproduct.items()
        }

    @property
    def hopf(self) -> HopfStructure:
        return self.h_comodule.hopf

    @property
    def dual_hopf(self) -> HopfStructure:
        return self.covector.hopf

    def counit_word(self, w):
        out = self.algebra.ring.one()
        for g in w:
            out = out * self.counit[g]
            if not out:
                return out
        return out

    def counit_of(self, e: Element):
        out = self.algebra.ring.zero()
        for w, c in e.terms.items():
            out = out + c * self.counit_word(w)
        return out

    def validate(self, max_degree: int) -> CheckReport:
        rep = CheckReport("moment-source", self.name, max_degree)
        table = self.algebra.table
        for rule in self.algebra.rs.rules:
            lhs = self.counit_word(rule.lhs)
            rhs = self.counit_of(rule.rhs)
            rep.add(
                f"counit respects {table.format_word(rule.lhs)}",
                lhs == rhs,
                None
                if lhs == rhs
                else {
                    "word": table.format_word(rule.lhs),
                    "lhs": format_scalar(lhs),
                    "rhs": format_scalar(rhs),
                },
            )
        rep.extend(self.h_comodule.validate(max_degree), prefix="H side: ")
        rep.extend(self.covector.validate(max_degree), prefix="covector: ")
        # fusion coproduct: coassociative, counital against the source counit
        rs = self.algebra.rs
        one = self.algebra.ring.one()
        fails = 0
        for g in range(len(table)):
            t = self.fusion_coproduct[g]
            left = tensor_reduce(
                [rs] * 3, map_slot(t, 0, self._fusion_word, one)
            )
            right = tensor_reduce(
                [rs] * 3, map_slot(t, 1, self._fusion_word, one)
            )
            if left != right:
                fails += 1
            eps_left = Element()
            for key, c in t.terms.items():
                eps_left = eps_left + Element({key[1]: c * self.counit_word(key[0])})
            if rs.reduce(eps_left) != rs.generator_element(g):
                fails += 1
        rep.add("fusion coproduct coassociative and counital", fails == 0)
        return rep

    def _fusion_word(self, w) -> TensorElement:
        rs = self.algebra.rs
        out = TensorElement.unit(2, self.algebra.ring.one())
        for g in w:
            out = tensor_multiply([rs, rs], out, self.fusion_coproduct[g])
        return out

    # -- counit-coaction composite (dual-side character map) ---------------

    def rosso_word(self, w) -> Element:
        """(counit (x) id) of the covector coaction, landing in H^v."""
        out = Element()
        for (f0, x1), c in self.covector.coact_word(w).terms.items():
            out = out + Element({x1: c * self.counit_word(f0)})
        return self.dual_hopf.alg.rs.reduce(out)

    def rosso(self, e: Element) -> Element:
        out = Element()
        for w, c in e.terms.items():
            out = out + self.rosso_word(w).scale(c)
        return out

    def check_rosso(self, max_degree: int) -> CheckReport:
        rep = CheckReport("rosso", self.name, max_degree)
        table = self.algebra.table
        dual = self.dual_hopf.alg
        fails = 0
        checked = 0
        witness = None
        words = [w for w in self.algebra.basis(max_degree) if w]
        for u in words:
            for v in words:
                if self.algebra.table.word_degree(u + v) > max_degree:
                    continue
                checked += 1
                prod = self.algebra.rs.reduce_word(u + v)
                lhs = self.rosso(prod)
                rhs = dual.rs.multiply(self.rosso_word(u), self.rosso_word(v))
                if lhs != rhs:
                    fails += 1
                    if witness is None:
                        witness = {
                            "u": table.format_word(u),
                            "v": table.format_word(v),
                            "lhs": format_element(dual.table, lhs),
                            "rhs": format_element(dual.table, rhs),
                        }
        rep.add(
            f"multiplicative on {checked} word pairs", fails == 0, witness
        )
        return rep


class MomentMap:
    """Algebra map from a moment source into a comodule algebra."""

    def __init__(
        self,
        name: str,
        source: MomentSource,
        target: ComoduleAlgebra,
        images: dict,
        ev: SkewPairing,
    ):
        if target.hopf is not source.hopf:
            raise ValidationFailed(
                f"map {name}: target must coact along the source's Hopf side"
            )
        if ev.left is not source.dual_hopf or ev.right is not source.hopf:
            raise ValidationFailed(
                f"map {name}: evaluation pairing must pair H^v against H"
            )
        n = len(source.algebra.table)
        missing = [
            source.algebra.table.name_of(g) for g in range(n) if g not in images
        ]
        if missing:
            raise ValidationFailed(
                f"map {name} missing images for: {', '.join(missing)}"
            )
        self.name = name
        self.source = source
        self.target = target
        self.ev = ev
        self.images = {g: target.alg.rs.reduce(e) for g, e in images.items()}
        self.action = CoactionAction(ev, target)
        self._cache: dict = {}

    def apply_word(self, w) -> Element:
        w = tuple(w)
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        rs = self.target.alg.rs
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

    def validate(self, max_degree: int) -> CheckReport:
        rep = CheckReport("moment-map-structure", self.name, max_degree)
        st = self.source.algebra.table
        tt = self.target.alg.table
        ht = self.target.hopf.alg.table
        for rule in self.source.algebra.rs.rules:
            lhs = self.apply_word(rule.lhs)
            rhs = self.apply(rule.rhs)
            rep.add(
                f"algebra map respects {st.format_word(rule.lhs)}",
                lhs == rhs,
                None
                if lhs == rhs
                else {
                    "word": st.format_word(rule.lhs),
                    "lhs": format_element(tt, lhs),
                    "rhs": format_element(tt, rhs),
                },
            )
        one = self.target.alg.ring.one()
        systems = [self.target.alg.rs, self.target.hopf.alg.rs]
        for g in range(len(st)):
            lhs = self.target.coact(self.images[g])
            rhs = tensor_reduce(
                systems,
                map_slot(
                    self.source.h_comodule.coaction_table[g], 0, self.apply_word, one
                ),
            )
            rep.add(
                f"equivariant at {st.name_of(g)}",
                lhs == rhs,
                None
                if lhs == rhs
                else {
                    "generator": st.name_of(g),
                    "lhs": format_tensor([tt, ht], lhs),
                    "rhs": format_tensor([tt, ht], rhs),
                },
            )
        return rep

    # -- the moment identity ----------------------------------------------

    def _sweep_words(self, alg: AlgebraPresentation, max_degree: int):
        gens = [(g,) for g in range(len(alg.table))]
        rest = [
            w for w in alg.basis(max_degree) if len(w) >= 2 or w == ()
        ]
        return gens + rest

    def check_moment(self, max_degree: int) -> CheckReport:
        rep = CheckReport("moment", self.name, max_degree)
        st = self.source.algebra.table
        tt = self.target.alg.table
        rs = self.target.alg.rs
        one = self.target.alg.ring.one()
        fails = 0
        checked = 0
        witness = None
        for hw in self._sweep_words(self.source.algebra, max_degree):
            cov = self.source.covector.coact_word(hw)
            for aw in self._sweep_words(self.target.alg, max_degree):
                checked += 1
                a = Element.from_word(aw, one)
                lhs = rs.multiply(self.apply_word(hw), a)
                rhs = Element()
                for (f0, x1), c in cov.terms.items():
                    acted = self.action.act_word(x1, a)
                    rhs = rhs + rs.multiply(acted, self.apply_word(f0)).scale(c)
                if lhs != rhs:
                    fails += 1
                    if witness is None:
                        witness = {
                            "h": st.format_word(hw),
                            "a": tt.format_word(aw),
                            "lhs": format_element(tt, lhs),
                            "rhs": format_element(tt, rhs),
                        }
        rep.add(
            f"moment identity on {checked} (h, a) pairs",
            fails == 0,
            witness,
        )
        return rep

    # -- centrality in the crossed product ---------------------------------

    def adjoint_image(self, e: Element) -> TensorElement:
        """mu'(h) = mu(h_(0)) (x) h_(1) in A # H^v."""
        out = TensorElement(2)
        for w, c in e.terms.items():
            for (f0, x1), c2 in self.source.covector.coact_word(w).terms.items():
                piece = TensorElement.outer(
                    [self.apply_word(f0), Element.from_word(x1, self.ev.ring.one())]
                )
                out = out + piece.scale(c * c2)
        return out

    def twisted_act_word(self, uw, y: Element) -> Element:
        """u |>~ y = y_(0) ev(S(u), y_(1))."""
        su = self.source.dual_hopf.antipode_word(uw)
        out = Element()
        one = self.ev.ring.one()
        for yw, cy in y.terms.items():
            for (y0, y1), c in self.target.coact_word(yw).terms.items():
                s = self.ev.pair(su, Element.from_word(y1, one))
                out = out + Element({y0: cy * c * s})
        return self.target.alg.rs.reduce(out)

    def crossed_multiply(self, t1: TensorElement, t2: TensorElement) -> TensorElement:
        """Product in A # H^v (A slot first, H^v slot second)."""
        ars = self.target.alg.rs
        drs = self.source.dual_hopf.alg.rs
        dual = self.source.dual_hopf
        out = TensorElement(2)
        one = self.ev.ring.one()
        for (x, u), c1 in t1.terms.items():
            ucop = dual.coproduct_word(u)
            for (y, v), c2 in t2.terms.items():
                yel = Element.from_word(y, one)
                for (u1, u2), cu in ucop.terms.items():
                    acted = self.twisted_act_word(u1, yel)
                    left = ars.multiply(Element.from_word(x, one), acted)
                    right = drs.reduce_word(u2 + v)
                    out = out + TensorElement.outer([left, right]).scale(
                        c1 * c2 * cu
                    )
        return out

    def check_centrality(self, max_degree: int) -> CheckReport:
        rep = CheckReport("centrality", self.name, max_degree)
        st = self.source.algebra.table
        tt = self.target.alg.table
        dt = self.source.dual_hopf.alg.table
        one = self.target.alg.ring.one()
        fails = 0
        checked = 0
        witness = None
        for hw in self._sweep_words(self.source.algebra, max_degree):
            mu_h = self.adjoint_image(Element.from_word(hw, one))
            for aw in self._sweep_words(self.target.alg, max_degree):
                checked += 1
                a_tensor = TensorElement(2, {(aw, ()): one})
                lhs = self.crossed_multiply(mu_h, a_tensor)
                rhs = self.crossed_multiply(a_tensor, mu_h)
                if lhs != rhs:
                    fails += 1
                    if witness is None:
                        witness = {
                            "h": st.format_word(hw),
                            "a": tt.format_word(aw),
                            "lhs": format_tensor([tt, dt], lhs),
                            "rhs": format_tensor([tt, dt], rhs),
                        }
        rep.add(
            f"centrality of mu' against A (x) 1 on {checked} pairs",
            fails == 0,
            witness,
        )
        return rep


# ---------------------------------------------------------------------------
# fusion


def _remap_element(e: Element, offset: int) -> Element:
    return Element({tuple(g + offset for g in w): c for w, c in e.terms.items()})


def fuse(
    m1: MomentMap, m2: MomentMap, braiding: SkewPairing, name: Optional[str] = None
) -> MomentMap:
    """Braided tensor product of two targets over one source, with the fused
    map (mu1 (x) mu2) composed with the source's fusion coproduct.

    Cross rule, from the comodule braiding
    psi(b (x) c) = c_(0) (x) b_(0) r(b_(1), c_(1)):

        b' c' -> r(b_(1), c_(1)) c_(0)' b_(0)'   for b in A2, c in A1.
    """
    if m1.source is not m2.source:
        raise ValidationFailed("fusion needs both maps over one moment source")
    hopf = m1.target.hopf
    if m2.target.hopf is not hopf:
        raise ValidationFailed("fusion needs both targets over one Hopf structure")
    if braiding.left is not hopf or braiding.right is not hopf:
        raise ValidationFailed("braiding must pair the acting Hopf with itself")
    t1, t2 = m1.target.alg.table, m2.target.alg.table
    n1 = len(t1)
    if set(t1.names) & set(t2.names):
        names = [f"{n}_1" for n in t1.names] + [f"{n}_2" for n in t2.names]
    else:
        names = list(t1.names) + list(t2.names)
    degrees = list(t1.degrees) + list(t2.degrees)
    pairs = list(t1.inverse_pairs) + [
        (a + n1, b + n1) for a, b in t2.inverse_pairs
    ]
    table = GeneratorTable(names, degrees, pairs)
    ring = m1.target.alg.ring
    rules = []
    for r in m1.target.alg.rs.rules:
        rules.append((r.lhs, r.rhs))
    for r in m2.target.alg.rs.rules:
        rules.append(
            (
                tuple(g + n1 for g in r.lhs),
                _remap_element(r.rhs, n1),
            )
        )
    for g2 in range(len(t2)):
        co2 = m2.target.coaction_table[g2]
        for g1 in range(len(t1)):
            co1 = m1.target.coaction_table[g1]
            rhs = Element()
            for (b0, b1), c2 in co2.terms.items():
                for (c0, c1), c1c in co1.terms.items():
                    s = c2 * c1c * braiding.pair_words(b1, c1)
                    if s:
                        w = tuple(c0) + tuple(g + n1 for g in b0)
                        rhs = rhs + Element({w: s})
            rules.append(((g2 + n1, g1), rhs))
    alg_name = name or f"fused({m1.target.alg.name},{m2.target.alg.name})"
    try:
        alg = AlgebraPresentation(alg_name, ring, table, rules)
    except ValueError as exc:
        raise ValidationFailed(
            f"fusion cross rules are not order-decreasing: {exc}"
        ) from exc
    coaction = {}
    for g1 in range(n1):
        coaction[g1] = TensorElement(
            2,
            {
                (w0, w1): c
                for (w0, w1), c in m1.target.coaction_table[g1].terms.items()
            },
        )
    for g2 in range(len(t2)):
        coaction[g2 + n1] = TensorElement(
            2,
            {
                (tuple(g + n1 for g in w0), w1): c
                for (w0, w1), c in m2.target.coaction_table[g2].terms.items()
            },
        )
    fused_ca = ComoduleAlgebra(alg_name, alg, hopf, coaction)
    source = m1.source
    images = {}
    for g in range(len(source.algebra.table)):
        img = Element()
        for (u, v), c in source.fusion_coproduct[g].terms.items():
            left = _remap_element(m1.apply_word(u), 0)
            right = _remap_element(m2.apply_word(v), n1)
            img = img + alg.rs.multiply(left, right).scale(c)
        images[g] = img
    return MomentMap(
        f"fused({m1.name},{m2.name})", source, fused_ca, images, m1.ev
    )


def trivial_target(source: MomentSource, name: str = "unit") -> ComoduleAlgebra:
    """The unit comodule algebra: no generators, trivial coaction."""
    alg = AlgebraPresentation(
        name, source.algebra.ring, GeneratorTable([], []), []
    )
    return ComoduleAlgebra(name, alg, source.hopf, {})


def trivial_moment_map(source: MomentSource, ev: SkewPairing) -> MomentMap:
    """The counit as a moment map into the unit target."""
    target = trivial_target(source)
    images = {
        g: Element.unit(source.algebra.ring.one()).scale(source.counit[g])
        for g in range(len(source.algebra.table))
    }
    return MomentMap(f"{source.name}:trivial", source, target, images, ev)


# ---------------------------------------------------------------------------
# Hamiltonian reduction


@dataclass
class ReductionResult:
    map_name: str
    max_degree: int
    dim: int
    basis: list  # representatives as Elements of the target
    basis_strings: list
    product_table: dict  # (i, j) -> list of coeffs, or None when truncated
    unit_coords: Optional[list]
    truncated_ideal: bool
    truncation_unsound: bool
    notes: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        def coeff(c):
            try:
                return format_scalar(c)
            except NotLaurentPrintable:
                num, den = format_scalar_pair(c)
                return {"num": num, "den": den}

        table = {}
        for (i, j), coeffs in sorted(self.product_table.items()):
            key = f"{i},{j}"
            table[key] = None if coeffs is None else [coeff(c) for c in coeffs]
        return {
            "suite": "reduction",
            "subject": self.map_name,
            "degree": self.max_degree,
            "dim": self.dim,
            "basis": list(self.basis_strings),
            "unit": None
            if self.unit_coords is None
            else [coeff(c) for c in self.unit_coords],
            "product_table": table,
            "flags": {
                "truncated_ideal": self.truncated_ideal,
                "truncation_unsound": self.truncation_unsound,
            },
            "notes": list(self.notes),
        }


def hamiltonian_reduce(m: MomentMap, max_degree: int) -> ReductionResult:
    """Invariants of the degree slice modulo the left ideal of mu - counit.

    Works over any field in the scalar tower.  Ideal rows whose products
    escape the slice are skipped and flagged; product-table entries that
    escape are None and flag the result unsound at this degree.
    """
    A = m.target
    rs = A.alg.rs
    ring = A.alg.ring
    table = A.alg.table
    words = sorted(A.alg.basis(max_degree), key=table.order_key)
    index = {w: i for i, w in enumerate(words)}
    n = len(words)
    zero = ring.zero()
    one = ring.one()

    def to_vec(e: Element):
        v = [zero] * n
        for w, c in e.terms.items():
            i = index.get(w)
            if i is None:
                return None
            v[i] = c
        return v

    shifts = [
        m.images[g] - Element.unit(one).scale(m.source.counit[g])
        for g in range(len(m.source.algebra.table))
    ]
    rows = []
    truncated_ideal = False
    for w in words:
        we = Element.from_word(w, one)
        for sh in shifts:
            v = to_vec(rs.multiply(we, sh))
            if v is None:
                truncated_ideal = True
                continue
            if any(v):
                rows.append(v)
    rr, pivots = linalg.rref(rows, n, ring)

    def project(v):
        return linalg.reduce_mod(rr, pivots, v, ring)

    # invariance conditions: each H component of the coaction must vanish
    # mod the ideal, except the unit component which must return the class
    h_words = set()
    coacts = []
    for w in words:
        t = A.coact_word(w)
        coacts.append(t)
        for (_, hw) in t.terms:
            h_words.add(hw)
    h_words = sorted(h_words, key=A.hopf.alg.table.order_key)
    cond_rows = []  # rows over n unknowns; x satisfies conditions iff Mx = 0
    for hw in h_words:
        # component map L_hw: V -> V
        cols = []
        for j, w in enumerate(words):
            comp = [zero] * n
            for (a0, h1), c in coacts[j].terms.items():
                if h1 == hw:
                    i = index.get(a0)
                    if i is not None:
                        comp[i] = comp[i] + c
            cols.append(comp)
        if hw == ():
            for j in range(n):
                cols[j][j] = cols[j][j] - one
        # rows of the condition block: projections of the columns
        proj_cols = [project(col) for col in cols]
        for k in range(n):
            row = [proj_cols[j][k] for j in range(n)]
            if any(row):
                cond_rows.append(row)
    solutions = linalg.nullspace(cond_rows, n, ring)
    # classes: project solutions mod the ideal, keep an independent set
    proj_sols = [project(v) for v in solutions]
    rr2, piv2 = linalg.rref(proj_sols, n, ring)
    class_basis = rr2  # canonical representatives, already ideal-reduced
    dim = len(class_basis)

    def vec_to_element(v) -> Element:
        return Element({words[i]: c for i, c in enumerate(v) if c})

    basis_elements = [vec_to_element(v) for v in class_basis]
    basis_strings = [format_element(table, e) for e in basis_elements]
    unit_coords = linalg.solve_in_span(class_basis, project(to_vec(A.alg.unit())), ring)
    product_table = {}
    unsound = False
    for i, ei in enumerate(basis_elements):
        for j, ej in enumerate(basis_elements):
            p = rs.multiply(ei, ej)
            v = to_vec(p)
            if v is None:
                product_table[(i, j)] = None
                unsound = True
                continue
            coeffs = linalg.solve_in_span(class_basis, project(v), ring)
            if coeffs is None:
                product_table[(i, j)] = None
                unsound = True
            else:
                product_table[(i, j)] = coeffs
    notes = []
    if truncated_ideal:
        notes.append(
            "ideal rows escaping the degree slice were skipped; "
            "the quotient may be an over-approximation"
        )
    if unsound:
        notes.append("some products escape the slice; table entries are None")
    return ReductionResult(
        map_name=m.name,
        max_degree=max_degree,
        dim=dim,
        basis=basis_elements,
        basis_strings=basis_strings,
        product_table=product_table,
        unit_coords=unit_coords,
        truncated_ideal=truncated_ideal,
        truncation_unsound=unsound,
        notes=notes,
    )
