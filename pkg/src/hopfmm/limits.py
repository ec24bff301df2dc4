"""First-order degeneration of families over the square-zero parameter ring.

A LimitFamily bundles presentations whose scalars carry the formal
parameter together with declared constant-term presentations on the same
generators.  classical_limit checks the two levels agree at order zero,
extracts the order-one data (brackets, the braiding kernel, the constant
term of the moment map), and replays the extracted data through the
commutative checkers so no conclusion rests on a single computation path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from .exprio import format_scalar
from .hopf import (
    AlgebraPresentation,
    HopfMap,
    HopfStructure,
    ValidationFailed,
)
from .moment import MomentMap
from .ncalg import Element, TensorElement, tensor_reduce
from .pairing import (
    SkewPairing,
    check_coquasitriangular,
    check_relative_coquasitriangular,
)
from .quasipoisson import (
    LieData,
    check_classical_moment_map,
    cotangent_instance,
)
from .reports import CheckReport
from .scalars import ScalarRing, hbar_parts


class NotFlat(ValueError):
    """Order-zero part of a family disagrees with its declared body."""

    def __init__(self, label: str, witness: dict):
        self.label = label
        self.witness = witness
        detail = "; ".join(f"{k}: {v}" for k, v in witness.items())
        super().__init__(f"{label}: {detail}")


def element_body(e: Element, ring: ScalarRing) -> Element:
    terms = {}
    for w, c in e.terms.items():
        b, _ = hbar_parts(c)
        b = ring.coerce(b)
        if b:
            terms[w] = b
    return Element(terms)


def element_slope(e: Element, ring: ScalarRing) -> Element:
    terms = {}
    for w, c in e.terms.items():
        _, s = hbar_parts(c)
        s = ring.coerce(s)
        if s:
            terms[w] = s
    return Element(terms)


def tensor_body(t: TensorElement, ring: ScalarRing) -> TensorElement:
    terms = {}
    for key, c in t.terms.items():
        b, _ = hbar_parts(c)
        b = ring.coerce(b)
        if b:
            terms[key] = b
    return TensorElement(t.arity, terms)


@dataclass
class LimitFamily:
    """Deformed presentations plus their declared constant-term shadows.

    algebras and bodies are keyed by the same labels.  The optional layers
    name which label carries each structure: braiding lives on
    double_label, the moment map's target on state_label.
    """

    name: str
    algebras: Dict[str, AlgebraPresentation]
    bodies: Dict[str, AlgebraPresentation]
    hopf: Dict[str, HopfStructure] = field(default_factory=dict)
    body_hopf: Dict[str, HopfStructure] = field(default_factory=dict)
    braiding: Optional[SkewPairing] = None
    double_label: Optional[str] = None
    relative: Optional[SkewPairing] = None
    projection: Optional[HopfMap] = None
    moment: Optional[MomentMap] = None
    state_label: Optional[str] = None


@dataclass
class LimitResult:
    name: str
    brackets: dict
    r_slope: dict
    mu0: Optional[dict]
    lie: Optional[LieData]
    report: CheckReport
    family: LimitFamily = field(repr=False, default=None)

    def to_json_dict(self) -> dict:
        out = {
            "family": self.name,
            "passed": self.report.passed,
            "brackets": {},
            "braiding_slope": {},
            "mu0": None,
            "report": self.report.to_json_dict(),
        }
        for label, tbl in self.brackets.items():
            body = self.family.bodies[label]
            t = body.table
            shown = {}
            for (i, j), e in sorted(tbl.items()):
                key = f"[{t.name_of(i)},{t.name_of(j)}]"
                shown[key] = body.format(e)
            out["brackets"][label] = shown
        if self.family.double_label is not None:
            t = self.family.bodies[self.family.double_label].table
            out["braiding_slope"] = {
                f"({t.name_of(i)},{t.name_of(j)})": format_scalar(c)
                for (i, j), c in sorted(self.r_slope.items())
            }
        if self.mu0 is not None and self.family.state_label is not None:
            body = self.family.bodies[self.family.state_label]
            out["mu0"] = {
                body.table.name_of(g): body.format(e)
                for g, e in sorted(self.mu0.items())
            }
        return out


def _sorted_basis(alg: AlgebraPresentation, max_degree: int):
    t = alg.table
    return sorted(
        alg.basis(max_degree),
        key=lambda w: (
            t.word_degree(w),
            len(w),
            tuple(t.name_of(g) for g in w),
        ),
    )


def _check_flat(label, alg, body, max_degree):
    ring0 = body.ring
    fam_words = set(alg.basis(max_degree))
    body_words = set(body.basis(max_degree))
    if fam_words != body_words:
        off = sorted(fam_words ^ body_words, key=len)[0]
        side = "family" if off in fam_words else "body"
        raise NotFlat(
            label,
            {
                "stage": "normal words",
                "word": (alg if side == "family" else body).table.format_word(
                    off
                ),
                "only_in": side,
            },
        )
    rs = alg.rs
    rs0 = body.rs
    one = alg.ring.one()
    basis = _sorted_basis(body, max_degree)
    for u in basis:
        eu = Element.from_word(u, one)
        for w in basis:
            prod = rs.multiply(eu, Element.from_word(w, one))
            got = rs0.reduce(element_body(prod, ring0))
            want = rs0.multiply(
                Element.from_word(u, ring0.one()),
                Element.from_word(w, ring0.one()),
            )
            if got != want:
                raise NotFlat(
                    label,
                    {
                        "stage": "products",
                        "word": f"{body.table.format_word(u)} * "
                        f"{body.table.format_word(w)}",
                        "family": body.format(got),
                        "body": body.format(want),
                    },
                )


def _pair_bracket(table, ring0, i, j) -> Element:
    if i == j:
        return Element()
    if i < j:
        return table.get((i, j), Element())
    return table.get((j, i), Element()).scale(ring0.from_int(-1))


def _extract_brackets(label, alg, body, max_degree, rep):
    """Slope of generator commutators, replayed over word pairs."""
    rs = alg.rs
    rs0 = body.rs
    ring0 = body.ring
    one = alg.ring.one()
    n = len(alg.table)
    bad = None
    for i in range(n):
        for j in range(i + 1, n):
            lhs = rs0.multiply(
                Element({(i,): ring0.one()}), Element({(j,): ring0.one()})
            )
            rhs = rs0.multiply(
                Element({(j,): ring0.one()}), Element({(i,): ring0.one()})
            )
            if lhs != rhs and bad is None:
                bad = {
                    "pair": f"({body.table.name_of(i)},"
                    f"{body.table.name_of(j)})"
                }
    rep.add(f"{label}: order-zero product is commutative", bad is None, bad)
    if bad is not None:
        return {}

    def slope_commutator(u, w):
        eu = Element.from_word(u, one)
        ew = Element.from_word(w, one)
        comm = rs.multiply(eu, ew) - rs.multiply(ew, eu)
        return rs0.reduce(element_slope(comm, ring0))

    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            e = slope_commutator((i,), (j,))
            if not e.is_zero():
                table[(i, j)] = e

    basis = _sorted_basis(body, max_degree)
    fails = 0
    witness = None
    for u in basis:
        for w in basis:
            lhs = slope_commutator(u, w)
            out = Element()
            for p in range(len(u)):
                for q in range(len(w)):
                    br = _pair_bracket(table, ring0, u[p], w[q])
                    if br.is_zero():
                        continue
                    rest = u[:p] + u[p + 1 :] + w[:q] + w[q + 1 :]
                    out = out + rs0.multiply(
                        Element.from_word(rest, ring0.one()), br
                    )
            rhs = rs0.reduce(out)
            if lhs != rhs:
                fails += 1
                if witness is None:
                    witness = {
                        "left word": body.table.format_word(u),
                        "right word": body.table.format_word(w),
                        "slope": body.format(lhs),
                        "extension": body.format(rhs),
                    }
    rep.add(
        f"{label}: first-order bracket follows the product rule",
        fails == 0,
        witness,
    )
    return table


def _check_hopf_body(label, fam_hopf, body_hopf, body, rep):
    ring0 = body.ring
    rs0 = body.rs
    t = body.table
    n = len(t)
    cop_bad = cu_bad = ant_bad = None
    for g in range(n):
        lhs = tensor_reduce(
            [rs0, rs0], tensor_body(fam_hopf.coproduct_table[g], ring0)
        )
        if lhs != body_hopf.coproduct_table[g] and cop_bad is None:
            cop_bad = {
                "generator": t.name_of(g),
                "family": body.format_tensor(lhs),
                "body": body.format_tensor(body_hopf.coproduct_table[g]),
            }
        b, _ = hbar_parts(fam_hopf.counit_table[g])
        if ring0.coerce(b) != body_hopf.counit_table[g] and cu_bad is None:
            cu_bad = {"generator": t.name_of(g)}
        sa = rs0.reduce(element_body(fam_hopf.antipode_table[g], ring0))
        if sa != body_hopf.antipode_table[g] and ant_bad is None:
            ant_bad = {
                "generator": t.name_of(g),
                "family": body.format(sa),
                "body": body.format(body_hopf.antipode_table[g]),
            }
    rep.add(
        f"{label}: coproduct agrees at order zero", cop_bad is None, cop_bad
    )
    rep.add(f"{label}: counit agrees at order zero", cu_bad is None, cu_bad)
    rep.add(
        f"{label}: antipode agrees at order zero", ant_bad is None, ant_bad
    )


def _check_braiding_limit(family, label, max_degree, rep):
    """Order-one part of the braiding against the extracted brackets."""
    r = family.braiding
    body = family.bodies[label]
    H0 = family.body_hopf[label]
    alg = family.algebras[label]
    rs = alg.rs
    rs0 = body.rs
    ring0 = body.ring

    rep.extend(
        check_coquasitriangular(r, max_degree), prefix=f"{label} braiding: "
    )

    sr_memo: dict = {}

    def sr(u, w):
        key = (u, w)
        hit = sr_memo.get(key)
        if hit is None:
            _, s = hbar_parts(r.pair_words(u, w))
            hit = ring0.coerce(s)
            sr_memo[key] = hit
        return hit

    sc_memo: dict = {}

    def slope_commutator(u, w):
        key = (u, w)
        hit = sc_memo.get(key)
        if hit is None:
            comm = rs.reduce_word(u + w) - rs.reduce_word(w + u)
            hit = rs0.reduce(element_slope(comm, ring0))
            sc_memo[key] = hit
        return hit

    def _accumulate(acc, e, c):
        for word, cx in e.terms.items():
            s = acc.get(word)
            v = c * cx
            s = v if s is None else s + v
            if s:
                acc[word] = s
            elif word in acc:
                del acc[word]

    def contraction(xfun, u, w):
        acc: dict = {}
        cu = H0.coproduct_word(u)
        cw = H0.coproduct_word(w)
        for (u1, u2), a in cu.terms.items():
            for (w1, w2), b in cw.terms.items():
                coef = a * b
                c1 = xfun(u1, w1)
                if c1:
                    _accumulate(acc, rs0.reduce_word(w2 + u2), coef * c1)
                c2 = xfun(u2, w2)
                if c2:
                    _accumulate(acc, rs0.reduce_word(u1 + w1), -(coef * c2))
        return Element(acc)

    basis = _sorted_basis(body, max_degree)

    bad = None
    for u in basis:
        for w in basis:
            b, _ = hbar_parts(r.pair_words(u, w))
            want = H0.counit_word(u) * H0.counit_word(w)
            if ring0.coerce(b) != want and bad is None:
                bad = {
                    "left": body.table.format_word(u),
                    "right": body.table.format_word(w),
                }
    rep.add(
        f"{label}: braiding is the counit product at order zero",
        bad is None,
        bad,
    )

    half = ring0.from_fraction(Fraction(1, 2))
    c_memo: dict = {}

    def cfun(u, w):
        key = (u, w)
        hit = c_memo.get(key)
        if hit is None:
            hit = (sr(u, w) + sr(w, u)) * half
            c_memo[key] = hit
        return hit

    sym_fails = 0
    sym_wit = None
    mult_fails = 0
    mult_wit = None
    con_fails = 0
    con_wit = None
    for u in basis:
        for w in basis:
            csym = contraction(cfun, u, w)
            if not csym.is_zero():
                sym_fails += 1
                if sym_wit is None:
                    sym_wit = {
                        "left": body.table.format_word(u),
                        "right": body.table.format_word(w),
                        "value": body.format(csym),
                    }
            sb = slope_commutator(u, w)
            crc = contraction(sr, u, w)
            if sb != crc:
                con_fails += 1
                if con_wit is None:
                    con_wit = {
                        "left": body.table.format_word(u),
                        "right": body.table.format_word(w),
                        "bracket": body.format(sb),
                        "contraction": body.format(crc),
                    }
            lhs = tensor_reduce([rs0, rs0], H0.coproduct(sb))
            racc: dict = {}

            def _accum_pair(left, right, c, racc=racc):
                for wl, cl in left.terms.items():
                    base = c * cl
                    for wr, cr in right.terms.items():
                        key = (wl, wr)
                        s = racc.get(key)
                        v = base * cr
                        s = v if s is None else s + v
                        if s:
                            racc[key] = s
                        elif key in racc:
                            del racc[key]

            for (u1, u2), a in H0.coproduct_word(u).terms.items():
                for (w1, w2), b in H0.coproduct_word(w).terms.items():
                    coef = a * b
                    s1 = slope_commutator(u1, w1)
                    if s1.terms:
                        _accum_pair(s1, rs0.reduce_word(u2 + w2), coef)
                    s2 = slope_commutator(u2, w2)
                    if s2.terms:
                        _accum_pair(rs0.reduce_word(u1 + w1), s2, coef)
            rhs = TensorElement(2, racc)
            if lhs != rhs:
                mult_fails += 1
                if mult_wit is None:
                    mult_wit = {
                        "left": body.table.format_word(u),
                        "right": body.table.format_word(w),
                        "lhs": body.format_tensor(lhs),
                        "rhs": body.format_tensor(rhs),
                    }
    rep.add(
        f"{label}: symmetric first-order part acts trivially",
        sym_fails == 0,
        sym_wit,
    )
    rep.add(
        f"{label}: first-order bracket is coproduct compatible",
        mult_fails == 0,
        mult_wit,
    )
    rep.add(
        f"{label}: first-order bracket equals the braiding contraction",
        con_fails == 0,
        con_wit,
    )

    slope_table = {}
    for (i, j), c in r.table.items():
        _, s = hbar_parts(c)
        s = ring0.coerce(s)
        if s:
            slope_table[(i, j)] = s
    return slope_table


def classical_limit(
    family: LimitFamily,
    mu_h: Optional[MomentMap] = None,
    max_degree: int = 2,
) -> LimitResult:
    """Degenerate a family: flatness, first-order extraction, replay.

    Raises NotFlat when an order-zero normal form disagrees with the
    declared body; every other defect lands in the report.
    """
    if set(family.algebras) != set(family.bodies):
        raise ValidationFailed(
            f"family {family.name}: algebra and body labels differ"
        )
    for label, alg in family.algebras.items():
        body = family.bodies[label]
        if not alg.ring.has_hbar:
            raise ValidationFailed(
                f"family {family.name}: {label} carries no formal parameter"
            )
        if body.ring.has_hbar:
            raise ValidationFailed(
                f"family {family.name}: body of {label} is not constant"
            )
        fam_names = [alg.table.name_of(g) for g in range(len(alg.table))]
        body_names = [
            body.table.name_of(g) for g in range(len(body.table))
        ]
        if fam_names != body_names:
            raise ValidationFailed(
                f"family {family.name}: {label} generators differ from body"
            )
    for label in family.hopf:
        if label not in family.body_hopf:
            raise ValidationFailed(
                f"family {family.name}: no body structure for {label}"
            )

    rep = CheckReport("classical-limit", family.name, max_degree)
    for label in sorted(family.algebras):
        _check_flat(
            label, family.algebras[label], family.bodies[label], max_degree
        )
    rep.note("order-zero normal forms match the declared bodies")

    brackets = {}
    for label in sorted(family.algebras):
        brackets[label] = _extract_brackets(
            label,
            family.algebras[label],
            family.bodies[label],
            max_degree,
            rep,
        )

    for label in sorted(family.hopf):
        _check_hopf_body(
            label,
            family.hopf[label],
            family.body_hopf[label],
            family.bodies[label],
            rep,
        )

    r_slope = {}
    if family.braiding is not None:
        label = family.double_label
        if label is None or label not in family.hopf:
            raise ValidationFailed(
                f"family {family.name}: braiding needs a labelled double"
            )
        r_slope = _check_braiding_limit(family, label, max_degree, rep)

    if family.projection is not None:
        rep.extend(
            family.projection.check(max_degree), prefix="projection: "
        )
    if family.relative is not None:
        if family.projection is None or family.braiding is None:
            raise ValidationFailed(
                f"family {family.name}: relative braiding needs the "
                "projection and the braiding"
            )
        rep.extend(
            check_relative_coquasitriangular(
                family.relative, family.projection, family.braiding,
                max_degree,
            ),
            prefix="relative: ",
        )

    mu0 = None
    lie = None
    m = mu_h if mu_h is not None else family.moment
    if m is not None:
        label = family.state_label
        if label is None or label not in family.bodies:
            raise ValidationFailed(
                f"family {family.name}: moment map needs a labelled state"
            )
        body0 = family.bodies[label]
        rep.extend(m.validate(max_degree), prefix="quantum map: ")
        rep.extend(m.check_moment(max_degree), prefix="quantum: ")
        mu0 = {
            gid: body0.rs.reduce(element_body(img, body0.ring))
            for gid, img in m.images.items()
        }
        n = len(body0.table)
        state_tbl = brackets.get(label, {})
        nonlinear = None
        for (i, j), e in state_tbl.items():
            for w in e.terms:
                if len(w) != 1 and nonlinear is None:
                    nonlinear = {
                        "pair": f"({body0.table.name_of(i)},"
                        f"{body0.table.name_of(j)})",
                        "value": body0.format(e),
                    }
        rep.add(
            f"{label}: first-order brackets are linear",
            nonlinear is None,
            nonlinear,
        )
        can_replay = (
            nonlinear is None
            and not body0.ring.has_q
            and set(mu0) == set(range(n))
        )
        if can_replay:
            lie = LieData(
                f"{family.name}-state",
                n,
                {
                    (i, j): {w[0]: c for w, c in e.terms.items()}
                    for (i, j), e in state_tbl.items()
                },
            )
            lv = lie.validate()
            rep.extend(lv, prefix="extracted constants: ")
            if lv.passed:
                inst = cotangent_instance(lie)
                rep.extend(
                    check_classical_moment_map(
                        inst.x,
                        inst.quotient,
                        mu0,
                        inst.double,
                        second_h_basis=inst.twisted_h,
                    ),
                    prefix="constant term: ",
                )
        else:
            rep.note(
                f"{label}: constant-term replay skipped "
                "(nonlinear brackets, q-scalars, or image mismatch)"
            )

    return LimitResult(
        name=family.name,
        brackets=brackets,
        r_slope=r_slope,
        mu0=mu0,
        lie=lie,
        report=rep,
        family=family,
    )
