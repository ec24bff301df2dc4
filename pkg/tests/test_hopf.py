from fractions import Fraction

import pytest

from hopfmm.catalog import get_builtin
from hopfmm.hopf import (
    AlgebraPresentation,
    HopfMap,
    HopfStructure,
    ValidationFailed,
    hopf_module_alpha,
    hopf_module_beta,
    regular_module,
)
from hopfmm.ncalg import Element, GeneratorTable, TensorElement
from hopfmm.scalars import RING_QQ

F = Fraction


def torus_hopf(name="ktorus"):
    table = GeneratorTable(["t", "t_inv"], [0, 0], inverse_pairs=[(0, 1)])
    one = F(1)
    rules = [((0, 1), Element({(): one})), ((1, 0), Element({(): one}))]
    alg = AlgebraPresentation(name, RING_QQ, table, rules)
    cop = {
        0: TensorElement(2, {((0,), (0,)): one}),
        1: TensorElement(2, {((1,), (1,)): one}),
    }
    cou = {0: one, 1: one}
    ant = {0: Element({(1,): one}), 1: Element({(0,): one})}
    return HopfStructure(alg, cop, cou, ant)


def test_classical_hopf_structures_validate():
    b = get_builtin("classical-sl2-triple")
    for h in b.hopf.values():
        rep = h.validate(3)
        assert rep.passed, [r.name for r in rep.failures()]


def test_coproduct_of_ef_frozen():
    b = get_builtin("classical-sl2-triple")
    u = b.hopf["usl2"]
    got = u.coproduct_word((2, 0))  # e*f
    one = F(1)
    want = TensorElement(
        2,
        {
            ((0, 2), ()): one,
            ((1,), ()): one,
            ((2,), (0,)): one,
            ((0,), (2,)): one,
            ((), (0, 2)): one,
            ((), (1,)): one,
        },
    )
    assert got == want


def test_antipode_is_antihomomorphism():
    b = get_builtin("classical-sl2-triple")
    u = b.hopf["usl2"]
    # S(e*f) = S(f) S(e) = f*e
    assert u.antipode_word((2, 0)) == Element({(0, 2): F(1)})
    ef = u.alg.element("e*f")
    assert u.antipode(ef) == Element({(0, 2): F(1)})


def test_torus_hopf_validates():
    h = torus_hopf()
    rep = h.validate(2)
    assert rep.passed, [r.name for r in rep.failures()]


def test_hopf_map_diagonal_quotient():
    b = get_builtin("classical-sl2-triple")
    o = b.hopf["osl2"]
    t = torus_hopf()
    one = F(1)
    images = {
        0: Element({(0,): one}),   # a -> t
        1: Element(),              # b -> 0
        2: Element(),              # c -> 0
        3: Element({(1,): one}),   # d -> t_inv
    }
    f = HopfMap("diag", o, t, images)
    rep = f.check(2)
    assert rep.passed, [r.name for r in rep.failures()]


def test_hopf_map_detects_bad_images():
    b = get_builtin("classical-sl2-triple")
    o = b.hopf["osl2"]
    t = torus_hopf()
    one = F(1)
    images = {
        0: Element({(0,): one}),
        1: Element({(0,): one}),   # b -> t breaks the determinant relation
        2: Element(),
        3: Element({(1,): one}),
    }
    f = HopfMap("bad", o, t, images)
    rep = f.check(2)
    assert not rep.passed
    assert any(r.witness for r in rep.failures())


def test_hopf_map_missing_image_rejected():
    b = get_builtin("classical-sl2-triple")
    o = b.hopf["osl2"]
    t = torus_hopf()
    with pytest.raises(ValidationFailed):
        HopfMap("partial", o, t, {0: Element({(0,): F(1)})})


def test_module_maps_mutually_inverse():
    # alpha(h (x) v) = h_(1) (x) h_(2).v and beta with the antipode twist
    # compose to the identity both ways on the regular module
    b = get_builtin("classical-sl2-triple")
    u = b.hopf["usl2"]
    m = regular_module(u)
    one = F(1)
    basis = u.alg.basis(2)
    for hw in basis:
        for vw in basis:
            t = TensorElement(2, {(hw, vw): one})
            ab = hopf_module_beta(m, hopf_module_alpha(m, t))
            ba = hopf_module_alpha(m, hopf_module_beta(m, t))
            assert ab == t, (hw, vw)
            assert ba == t, (hw, vw)


def test_iterated_coproduct_matches_both_associations():
    b = get_builtin("classical-sl2-triple")
    u = b.hopf["usl2"]
    e = u.alg.element("e*h")
    t3 = u.iterated_coproduct(e, 3)
    assert t3.arity == 3
    # total counit collapse returns the element
    total = Element()
    for (w1, w2, w3), c in t3.terms.items():
        total = total + Element(
            {w2: c * u.counit_word(w1) * u.counit_word(w3)}
        )
    assert u.alg.rs.reduce(total) == e
