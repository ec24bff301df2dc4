import random
from fractions import Fraction

import pytest

from hopfmm.ncalg import (
    Element,
    GeneratorTable,
    NonTerminating,
    RewriteSystem,
    TensorElement,
    map_slot,
    tensor_multiply,
    tensor_reduce,
)
from hopfmm.scalars import RING_QQ

F = Fraction

# enveloping algebra of sl2, ids f=0, h=1, e=2, normal words f^i h^j e^k


def usl2():
    table = GeneratorTable(["f", "h", "e"], [1, 1, 1])
    rules = [
        ((2, 0), Element({(0, 2): F(1), (1,): F(1)})),        # ef -> fe + h
        ((1, 0), Element({(0, 1): F(1), (0,): F(-2)})),       # hf -> fh - 2f
        ((2, 1), Element({(1, 2): F(1), (2,): F(-2)})),       # eh -> he - 2e
    ]
    return RewriteSystem(table, RING_QQ, rules)


def test_reduce_ef_oracle():
    rs = usl2()
    got = rs.reduce_word((2, 0))
    assert got == Element({(0, 2): F(1), (1,): F(1)})


def test_reduce_eef_oracle():
    # e.e.f = f.e.e + 2 h.e - 2 e
    rs = usl2()
    got = rs.reduce_word((2, 2, 0))
    assert got == Element({(0, 2, 2): F(1), (1, 2): F(2), (2,): F(-2)})


def test_reduce_is_idempotent_and_cached():
    rs = usl2()
    a = rs.reduce_word((2, 1, 0))
    b = rs.reduce_word((2, 1, 0))
    assert a == b
    assert rs.reduce(a) == a


def test_pbw_basis_count():
    rs = usl2()
    words = rs.normal_words(3)
    assert len(words) == 20  # monomials f^i h^j e^k with i+j+k <= 3
    assert all(rs.is_normal(w) for w in words)


def test_multiply_matches_reduce_of_concatenation():
    rs = usl2()
    e = rs.generator_element(2)
    f = rs.generator_element(0)
    ef = rs.multiply(e, f)
    assert ef == Element({(0, 2): F(1), (1,): F(1)})
    # commutator [e,f] = h
    assert ef - rs.multiply(f, e) == Element({(1,): F(1)})


def test_casimir_is_central_degree2():
    # ef + fe + h^2/2 commutes with every generator
    rs = usl2()
    e, h, f = rs.generator_element(2), rs.generator_element(1), rs.generator_element(0)
    casimir = (
        rs.multiply(e, f) + rs.multiply(f, e) + rs.multiply(h, h).scale(F(1, 2))
    )
    for g in (e, h, f):
        assert rs.multiply(casimir, g) == rs.multiply(g, casimir)


def test_rule_order_violation_rejected():
    table = GeneratorTable(["a", "b"], [1, 1])
    with pytest.raises(ValueError):
        RewriteSystem(
            table, RING_QQ, [((1, 0), Element({(0, 0, 1): F(1)}))]
        )  # rhs degree exceeds lhs
    with pytest.raises(ValueError):
        RewriteSystem(
            table, RING_QQ, [((1, 0), Element({(1, 0): F(1)}))]
        )  # rhs equals lhs


def test_step_bound_raises_nonterminating():
    rs = usl2()
    with pytest.raises(NonTerminating) as ei:
        rs.reduce_word((2, 2, 1, 0, 0), step_bound=2)
    assert len(ei.value.trace) >= 1
    assert ei.value.bound == 2


def test_torus_pair_reduction():
    table = GeneratorTable(["t", "t_inv"], [0, 0], inverse_pairs=[(0, 1)])
    rules = [
        ((0, 1), Element({(): F(1)})),
        ((1, 0), Element({(): F(1)})),
    ]
    rs = RewriteSystem(table, RING_QQ, rules)
    assert rs.reduce_word((0, 1, 0)) == Element({(0,): F(1)})
    assert rs.reduce_word((1, 0, 1, 0)) == rs.unit_element()
    words = rs.normal_words(0, max_length=2)
    assert sorted(words) == [(), (0,), (0, 0), (1,), (1, 1)]


def test_degree_zero_generator_requires_inverse_pair():
    with pytest.raises(ValueError):
        GeneratorTable(["t"], [0])


def test_confluence_report_pbw_clean():
    rs = usl2()
    rep = rs.confluence_report(4)
    assert rep.pairs, "overlaps must exist"
    assert rep.confluent
    assert rep.unresolved == []


def test_confluence_report_detects_failure():
    table = GeneratorTable(["x", "y"], [1, 1])
    rules = [
        ((0, 1), Element({(): F(1)})),  # xy -> 1
        ((1, 0), Element()),            # yx -> 0
    ]
    rs = RewriteSystem(table, RING_QQ, rules)
    rep = rs.confluence_report(4)
    assert not rep.confluent
    assert rep.unresolved
    bad = rep.unresolved[0]
    assert bad.nf_a != bad.nf_b


def test_tensor_outer_and_multiply():
    rs = usl2()
    e = rs.generator_element(2)
    f = rs.generator_element(0)
    one = rs.unit_element()
    a = TensorElement.outer([e, one])
    b = TensorElement.outer([f, one])
    ab = tensor_multiply([rs, rs], a, b)
    assert ab == TensorElement(
        2, {((0, 2), ()): F(1), ((1,), ()): F(1)}
    )


def test_tensor_reduce_slotwise():
    rs = usl2()
    t = TensorElement(2, {((2, 0), (1, 0)): F(1)})
    got = tensor_reduce([rs, rs], t)
    # slot1: fe + h ; slot2: fh - 2f
    want = (
        TensorElement(2, {((0, 2), (0, 1)): F(1)})
        + TensorElement(2, {((0, 2), (0,)): F(-2)})
        + TensorElement(2, {((1,), (0, 1)): F(1)})
        + TensorElement(2, {((1,), (0,)): F(-2)})
    )
    assert got == want


def test_map_slot_expansion():
    one = F(1)
    t = TensorElement(2, {((0,), (1,)): F(2)})

    def split(w):
        return TensorElement(2, {(w, w): one})

    got = map_slot(t, 0, split, one)
    assert got.arity == 3
    assert got == TensorElement(3, {((0,), (0,), (1,)): F(2)})


def test_associativity_sampled():
    rs = usl2()
    rng = random.Random(917)
    words = rs.normal_words(2)

    def rand_elt():
        out = Element()
        for _ in range(rng.randint(1, 3)):
            w = words[rng.randrange(len(words))]
            out = out + Element({w: F(rng.randint(-3, 3))})
        return out

    for _ in range(25):
        a, b, c = rand_elt(), rand_elt(), rand_elt()
        assert rs.multiply(rs.multiply(a, b), c) == rs.multiply(a, rs.multiply(b, c))
        assert rs.multiply(a, b + c) == rs.multiply(a, b) + rs.multiply(a, c)


def test_generator_table_validation():
    with pytest.raises(ValueError):
        GeneratorTable(["a", "a"], [1, 1])
    with pytest.raises(ValueError):
        GeneratorTable(["1bad"], [1])
    with pytest.raises(ValueError):
        GeneratorTable(["a"], [-1])
    t = GeneratorTable(["a_1", "b"], [2, 1])
    assert t.id_of("a_1") == 0
    assert t.word_degree((0, 1, 1)) == 4
    assert t.format_word(()) == "1"
    assert t.format_word((0, 1)) == "a_1*b"
