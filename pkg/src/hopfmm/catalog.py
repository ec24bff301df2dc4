"""Builtin presentation bundles.

Each builder returns a Bundle of mutually consistent structures: Hopf
presentations, pairings, comodule algebras, moment sources and maps, and
(where relevant) Lie-theoretic and limit data.  All tables are frozen here
as exact scalars; the quantum tables were produced once by
tools/derive_quantum_tables.py (exact linear algebra gated by the checkers
in this package) and the test suite re-derives the non-obvious ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .hopf import AlgebraPresentation, HopfMap, HopfStructure
from .limits import LimitFamily
from .ncalg import Element, GeneratorTable, TensorElement
from .moment import MomentMap, MomentSource
from .pairing import ComoduleAlgebra, SkewPairing, counit_pairing
from .scalars import QRat, RING_QQ, RING_QQ_H, RING_QQ_Q

F = Fraction


@dataclass
class Bundle:
    name: str
    summary: str
    ring_name: str
    hopf: dict = dc_field(default_factory=dict)
    pairings: dict = dc_field(default_factory=dict)
    comodules: dict = dc_field(default_factory=dict)
    sources: dict = dc_field(default_factory=dict)
    maps: dict = dc_field(default_factory=dict)
    lie: dict = dc_field(default_factory=dict)
    qp: dict = dc_field(default_factory=dict)
    limit: dict = dc_field(default_factory=dict)


def _tens(entries) -> TensorElement:
    return TensorElement(2, dict(entries))


def _primitive_cop(gid, one) -> TensorElement:
    return _tens({((gid,), ()): one, ((), (gid,)): one})


# ---------------------------------------------------------------------------
# classical sl2 triple: U(sl2), O(SL2), evaluation pairing, adjoint coaction


def _usl2_scaled(ring, scale, name) -> HopfStructure:
    """Enveloping presentation with brackets multiplied by scale.

    scale one gives the classical object, the formal parameter gives the
    flat family, zero gives the symmetric algebra.  ids f=0, h=1, e=2;
    normal words f^i h^j e^k."""
    table = GeneratorTable(["f", "h", "e"], [1, 1, 1])
    one = ring.one()
    two = ring.from_int(2)

    def rule(lhs, flip, extra):
        terms = {flip: one}
        if scale:
            for w, c in extra.items():
                terms[w] = c * scale
        return (lhs, Element(terms))

    rules = [
        rule((2, 0), (0, 2), {(1,): one}),           # ef -> fe + s h
        rule((1, 0), (0, 1), {(0,): -two}),          # hf -> fh - 2s f
        rule((2, 1), (1, 2), {(2,): -two}),          # eh -> he - 2s e
    ]
    alg = AlgebraPresentation(name, ring, table, rules)
    cop = {g: _primitive_cop(g, one) for g in range(3)}
    cou = {g: ring.zero() for g in range(3)}
    ant = {g: Element({(g,): -one}) for g in range(3)}
    return HopfStructure(alg, cop, cou, ant)


def _classical_usl2(ring=RING_QQ, name="usl2") -> HopfStructure:
    return _usl2_scaled(ring, ring.one(), name)


def _classical_osl2(ring=RING_QQ, name="osl2") -> HopfStructure:
    # ids a=0, b=1, c=2, d=3; commutative, bc eliminated through the
    # determinant rule bc -> ad - 1
    table = GeneratorTable(["a", "b", "c", "d"], [1, 1, 1, 1])
    one = ring.one()
    rules = [
        ((1, 0), Element({(0, 1): one})),
        ((2, 0), Element({(0, 2): one})),
        ((3, 0), Element({(0, 3): one})),
        ((2, 1), Element({(1, 2): one})),
        ((3, 1), Element({(1, 3): one})),
        ((3, 2), Element({(2, 3): one})),
        ((1, 2), Element({(0, 3): one, (): -one})),
    ]
    alg = AlgebraPresentation(name, ring, table, rules)
    cop = {
        0: _tens({((0,), (0,)): one, ((1,), (2,)): one}),
        1: _tens({((0,), (1,)): one, ((1,), (3,)): one}),
        2: _tens({((2,), (0,)): one, ((3,), (2,)): one}),
        3: _tens({((2,), (1,)): one, ((3,), (3,)): one}),
    }
    cou = {0: one, 1: ring.zero(), 2: ring.zero(), 3: one}
    ant = {
        0: Element({(3,): one}),
        1: Element({(1,): -one}),
        2: Element({(2,): -one}),
        3: Element({(0,): one}),
    }
    return HopfStructure(alg, cop, cou, ant)


def _classical_adjoint_coaction(ring):
    """Coaction x -> x_j (x) [conjugation matrix entry], oriented so the
    induced action through the evaluation pairing is ad_x."""
    one = ring.one()
    two = ring.from_int(2)
    # U ids: f=0, h=1, e=2.  O ids: a=0, b=1, c=2, d=3.
    return {
        2: _tens(
            {((2,), (3, 3)): one, ((0,), (2, 2)): -one, ((1,), (2, 3)): one}
        ),
        0: _tens(
            {((2,), (1, 1)): -one, ((0,), (0, 0)): one, ((1,), (0, 1)): -one}
        ),
        1: _tens(
            {
                ((2,), (1, 3)): two,
                ((0,), (0, 2)): -two,
                ((1,), (0, 3)): one,
                ((1,), (1, 2)): one,
            }
        ),
    }


def build_classical() -> Bundle:
    ring = RING_QQ
    one = ring.one()
    uhopf = _classical_usl2(ring)
    ohopf = _classical_osl2(ring)
    # evaluation pairing: the antipode-twisted derivative table; the
    # untwisted table breaks the skew product laws
    ev = SkewPairing(
        "ev",
        uhopf,
        ohopf,
        {
            (2, 1): -one,  # (e, b)
            (0, 2): -one,  # (f, c)
            (1, 0): -one,  # (h, a)
            (1, 3): one,   # (h, d)
        },
    )
    adjoint = ComoduleAlgebra(
        "usl2-adjoint", uhopf.alg, ohopf, _classical_adjoint_coaction(ring)
    )
    covector = ComoduleAlgebra(
        "usl2-covector",
        uhopf.alg,
        uhopf,
        {g: _primitive_cop(g, one) for g in range(3)},
    )
    source = MomentSource(
        "classical-sl2",
        h_comodule=adjoint,
        covector=covector,
        counit={g: ring.zero() for g in range(3)},
        fusion_coproduct={g: _primitive_cop(g, one) for g in range(3)},
    )
    mu = MomentMap(
        "mu-id",
        source,
        adjoint,
        {g: Element({(g,): one}) for g in range(3)},
        ev,
    )
    trivial_braiding = counit_pairing("counit-braiding", ohopf, ohopf)
    bundle = Bundle(
        name="classical-sl2-triple",
        summary="U(sl2) with O(SL2) conjugation coaction; identity moment map",
        ring_name=ring.name,
        hopf={"usl2": uhopf, "osl2": ohopf},
        pairings={"ev": ev, "braiding": trivial_braiding},
        comodules={"adjoint": adjoint, "covector": covector},
        sources={"main": source},
        maps={"mu": mu},
    )
    return bundle


# ---------------------------------------------------------------------------
# flat family over the square-zero parameter: scaled enveloping algebra,
# function algebra of the doubled group, canonical braiding

# conjugation-matrix contractions for the doubled function algebra; keys are
# (fiber id, group word), values integer coefficients.  _DOUBLE_ADINV drives
# the coproduct (inverse-matrix side), _DOUBLE_ADG the antipode.
_DOUBLE_ADINV = {
    4: {(6, (1, 1)): -1, (4, (0, 0)): 1, (5, (0, 1)): -1},
    5: {(6, (1, 3)): 2, (4, (0, 2)): -2, (5, (0, 3)): 1, (5, (1, 2)): 1},
    6: {(6, (3, 3)): 1, (4, (2, 2)): -1, (5, (2, 3)): 1},
}
_DOUBLE_ADG = {
    4: {(6, (1, 1)): -1, (4, (3, 3)): 1, (5, (1, 3)): 1},
    5: {(6, (0, 1)): -2, (4, (2, 3)): 2, (5, (0, 3)): 1, (5, (1, 2)): 1},
    6: {(6, (0, 0)): 1, (4, (2, 2)): -1, (5, (0, 2)): -1},
}


def _double_osl2(ring, s, name) -> HopfStructure:
    """Functions on the doubled group: matrix block a,b,c,d plus fiber
    coordinates xf,xh,xe.

    The cross relations are plainly commutative; the fiber block closes on
    itself with structure constants scaled by s.  The coproduct splits a
    fiber coordinate through the inverse conjugation matrix; with s zero
    this is the constant-term presentation."""
    table = GeneratorTable(["a", "b", "c", "d", "xf", "xh", "xe"], [1] * 7)
    one = ring.one()
    two = ring.from_int(2)
    rules = []
    for i in range(4):
        for j in range(i + 1, 7):
            rules.append(((j, i), Element({(i, j): one})))
    rules.append(((1, 2), Element({(0, 3): one, (): -one})))
    fiber = [
        ((5, 4), (4, 5), {(4,): -two}),
        ((6, 4), (4, 6), {(5,): one}),
        ((6, 5), (5, 6), {(6,): -two}),
    ]
    for lhs, flip, extra in fiber:
        terms = {flip: one}
        if s:
            for w, c in extra.items():
                terms[w] = c * s
        rules.append((lhs, Element(terms)))
    alg = AlgebraPresentation(name, ring, table, rules)
    cop = {
        0: _tens({((0,), (0,)): one, ((1,), (2,)): one}),
        1: _tens({((0,), (1,)): one, ((1,), (3,)): one}),
        2: _tens({((2,), (0,)): one, ((3,), (2,)): one}),
        3: _tens({((2,), (1,)): one, ((3,), (3,)): one}),
    }
    for fid in (4, 5, 6):
        terms = {((fid,), ()): one}
        for (k, w), c in _DOUBLE_ADINV[fid].items():
            terms[(w, (k,))] = ring.from_int(c)
        cop[fid] = TensorElement(2, terms)
    cou = {g: one if g in (0, 3) else ring.zero() for g in range(7)}
    ant = {
        0: Element({(3,): one}),
        1: Element({(1,): -one}),
        2: Element({(2,): -one}),
        3: Element({(0,): one}),
    }
    for fid in (4, 5, 6):
        terms = {}
        for (k, w), c in _DOUBLE_ADG[fid].items():
            key = tuple(sorted(w + (k,)))
            terms[key] = terms.get(key, ring.zero()) - ring.from_int(c)
        ant[fid] = Element(terms)
    return HopfStructure(alg, cop, cou, ant)


def build_uhbar() -> Bundle:
    ring = RING_QQ_H
    body_ring = RING_QQ
    one = ring.one()
    hb = ring.hbar()

    uhopf = _usl2_scaled(ring, hb, "uhbar-sl2")
    ubody = _usl2_scaled(body_ring, body_ring.zero(), "sym-sl2")
    ohopf = _classical_osl2(ring, "osl2-h")
    obody = _classical_osl2(body_ring, "osl2")
    dhopf = _double_osl2(ring, hb, "otsl2-h")
    dbody = _double_osl2(body_ring, body_ring.zero(), "otsl2")

    # evaluation pairing scaled by the parameter; at order zero it is the
    # counit product, so the induced action is an order-one effect
    ev = SkewPairing(
        "ev-h",
        uhopf,
        ohopf,
        {(2, 1): -hb, (0, 2): -hb, (1, 0): -hb, (1, 3): hb},
    )
    adjoint = ComoduleAlgebra(
        "uhbar-adjoint", uhopf.alg, ohopf, _classical_adjoint_coaction(ring)
    )
    covector = ComoduleAlgebra(
        "uhbar-covector",
        uhopf.alg,
        uhopf,
        {g: _primitive_cop(g, one) for g in range(3)},
    )
    source = MomentSource(
        "uhbar-src",
        h_comodule=adjoint,
        covector=covector,
        counit={g: ring.zero() for g in range(3)},
        fusion_coproduct={g: _primitive_cop(g, one) for g in range(3)},
    )
    mu = MomentMap(
        "mu-id-h",
        source,
        adjoint,
        {g: Element({(g,): one}) for g in range(3)},
        ev,
    )

    # braiding table: counit products on the matrix corners plus the
    # parameter times the canonical fiber/matrix contractions; the opposite
    # fiber-block sign fails the braiding identity
    rtab = {
        (0, 0): one,
        (0, 3): one,
        (3, 0): one,
        (3, 3): one,
        (6, 1): -hb,
        (4, 2): -hb,
        (5, 0): -hb,
        (5, 3): hb,
    }
    braiding = SkewPairing("r-canonical", dhopf, dhopf, rtab)
    relative = SkewPairing("r-zero-section", dhopf, ohopf, dict(rtab))
    projection = HopfMap(
        "zero-section",
        dhopf,
        ohopf,
        {
            **{g: Element({(g,): one}) for g in range(4)},
            **{g: Element() for g in (4, 5, 6)},
        },
    )
    family = LimitFamily(
        name="uhbar-sl2",
        algebras={
            "state": uhopf.alg,
            "group": ohopf.alg,
            "double": dhopf.alg,
        },
        bodies={
            "state": ubody.alg,
            "group": obody.alg,
            "double": dbody.alg,
        },
        hopf={"state": uhopf, "group": ohopf, "double": dhopf},
        body_hopf={"state": ubody, "group": obody, "double": dbody},
        braiding=braiding,
        double_label="double",
        relative=relative,
        projection=projection,
        moment=mu,
        state_label="state",
    )
    return Bundle(
        name="uhbar-sl2",
        summary="flat one-parameter family over sl2 with its doubled "
        "function algebra and canonical braiding",
        ring_name=ring.name,
        hopf={
            "state": uhopf,
            "group": ohopf,
            "double": dhopf,
            "state-body": ubody,
            "group-body": obody,
            "double-body": dbody,
        },
        pairings={"ev": ev, "braiding": braiding, "relative": relative},
        comodules={"adjoint": adjoint, "covector": covector},
        sources={"main": source},
        maps={"mu": mu},
        limit={"family": family},
    )


# ---------------------------------------------------------------------------
# registry


_BUILDERS = {}
_CACHE = {}


def register(name, summary, builder):
    _BUILDERS[name] = (summary, builder)


def list_builtins():
    return [(name, summary) for name, (summary, _) in sorted(_BUILDERS.items())]


def get_builtin(name: str) -> Bundle:
    if name not in _BUILDERS:
        known = ", ".join(sorted(_BUILDERS))
        raise ValueError(f"unknown builtin {name!r}; known: {known}")
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name][1]()
    return _CACHE[name]


register(
    "classical-sl2-triple",
    "U(sl2) with O(SL2) conjugation coaction; identity moment map",
    build_classical,
)
register(
    "uhbar-sl2",
    "flat one-parameter family over sl2 with its doubled function algebra "
    "and canonical braiding",
    build_uhbar,
)
