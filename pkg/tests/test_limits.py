from fractions import Fraction

import pytest

from hopfmm.catalog import build_uhbar, get_builtin, _usl2_scaled
from hopfmm.hopf import AlgebraPresentation, ValidationFailed
from hopfmm.limits import (
    LimitFamily,
    NotFlat,
    classical_limit,
    element_body,
    element_slope,
)
from hopfmm.moment import MomentMap
from hopfmm.ncalg import Element, GeneratorTable
from hopfmm.pairing import SkewPairing
from hopfmm.scalars import DualScalar, RING_QQ, RING_QQ_H

F = Fraction


@pytest.fixture(scope="module")
def bundle():
    return get_builtin("uhbar-sl2")


@pytest.fixture(scope="module")
def limit_result(bundle):
    return classical_limit(bundle.limit["family"])


def test_part_extraction():
    e = Element(
        {
            (0,): DualScalar(F(2), F(3)),
            (1,): DualScalar(F(0), F(5)),
            (): DualScalar(F(7)),
        }
    )
    assert element_body(e, RING_QQ) == Element({(0,): F(2), (): F(7)})
    assert element_slope(e, RING_QQ) == Element({(0,): F(3), (1,): F(5)})


def test_family_report_passes(limit_result):
    assert limit_result.report.passed, [
        r.name for r in limit_result.report.failures()
    ]


def test_state_brackets_are_the_structure_constants(limit_result):
    # ids f=0, h=1, e=2
    assert limit_result.brackets["state"] == {
        (0, 1): Element({(0,): F(2)}),
        (0, 2): Element({(1,): F(-1)}),
        (1, 2): Element({(2,): F(2)}),
    }


def test_double_brackets_follow_the_fiber_block(limit_result):
    assert limit_result.brackets["group"] == {}
    assert limit_result.brackets["double"] == {
        (4, 5): Element({(4,): F(2)}),
        (4, 6): Element({(5,): F(-1)}),
        (5, 6): Element({(6,): F(2)}),
    }


def test_braiding_slope_table(limit_result):
    assert limit_result.r_slope == {
        (6, 1): F(-1),
        (4, 2): F(-1),
        (5, 0): F(-1),
        (5, 3): F(1),
    }


def test_constant_term_is_identity_and_replayed(limit_result):
    one = F(1)
    assert limit_result.mu0 == {g: Element({(g,): one}) for g in range(3)}
    names = [r.name for r in limit_result.report.records]
    assert "constant term: equivariance on generators" in names
    assert "constant term: verdict is complement independent" in names
    assert limit_result.lie is not None
    assert limit_result.lie.brackets == {
        (0, 1): {0: F(2)},
        (0, 2): {1: F(-1)},
        (1, 2): {2: F(2)},
    }


def test_json_shape(limit_result):
    d = limit_result.to_json_dict()
    assert d["passed"] is True
    assert d["brackets"]["state"] == {
        "[f,h]": "2*f",
        "[f,e]": "-h",
        "[h,e]": "2*e",
    }
    assert d["braiding_slope"]["(xh,d)"] == "1"
    assert d["mu0"] == {"f": "f", "h": "h", "e": "e"}


def _commutative_pair():
    ring = RING_QQ_H
    table = GeneratorTable(["x", "y"], [1, 1])
    rules = [((1, 0), Element({(0, 1): ring.one()}))]
    fam = AlgebraPresentation("plane-h", ring, table, rules)
    table0 = GeneratorTable(["x", "y"], [1, 1])
    rules0 = [((1, 0), Element({(0, 1): RING_QQ.one()}))]
    body = AlgebraPresentation("plane", RING_QQ, table0, rules0)
    return fam, body


def test_commutative_family_has_zero_brackets():
    fam, body = _commutative_pair()
    res = classical_limit(
        LimitFamily("plane", {"x": fam}, {"x": body}), max_degree=3
    )
    assert res.report.passed
    assert res.brackets == {"x": {}}


def test_unscaled_lift_is_not_flat():
    # classical structure constants without the parameter: the order-zero
    # product keeps the h term and cannot match the symmetric body
    fam = _usl2_scaled(RING_QQ_H, RING_QQ_H.one(), "bad-state")
    body = _usl2_scaled(RING_QQ, RING_QQ.zero(), "sym-sl2")
    with pytest.raises(NotFlat) as exc:
        classical_limit(
            LimitFamily("bad", {"state": fam.alg}, {"state": body.alg})
        )
    err = exc.value
    assert err.label == "state"
    assert err.witness["stage"] == "products"
    assert "f*e + h" in err.witness["family"]
    assert err.witness["body"] == "f*e"


def test_collapsed_word_is_not_flat():
    ring = RING_QQ_H
    table = GeneratorTable(["x"], [1])
    fam = AlgebraPresentation("line-sq", ring, table, [((0, 0), Element())])
    body = AlgebraPresentation(
        "line", RING_QQ, GeneratorTable(["x"], [1]), []
    )
    with pytest.raises(NotFlat) as exc:
        classical_limit(LimitFamily("bad", {"x": fam}, {"x": body}))
    assert exc.value.witness["stage"] == "normal words"
    assert exc.value.witness["only_in"] == "body"


def test_label_mismatch_rejected():
    fam, body = _commutative_pair()
    with pytest.raises(ValidationFailed):
        classical_limit(LimitFamily("bad", {"x": fam}, {"y": body}))


def test_corrupted_braiding_slope_caught_twice():
    # doubling one slope entry must fail both the braiding axiom and the
    # extracted-bracket contraction record
    b = build_uhbar()
    fam = b.limit["family"]
    tbl = dict(fam.braiding.table)
    tbl[(6, 1)] = tbl[(6, 1)] + tbl[(6, 1)]
    fam.braiding = SkewPairing(
        "r-doubled", fam.hopf["double"], fam.hopf["double"], tbl
    )
    fam.relative = None
    fam.moment = None
    res = classical_limit(fam, max_degree=1)
    assert not res.report.passed
    failed = [r.name for r in res.report.failures()]
    assert any("braiding identity" in n for n in failed)
    assert any("braiding contraction" in n for n in failed)


def test_swapped_moment_map_fails_both_levels():
    b = build_uhbar()
    fam = b.limit["family"]
    one = RING_QQ_H.one()
    swapped = MomentMap(
        "mu-swap",
        b.sources["main"],
        b.comodules["adjoint"],
        {0: Element({(0,): one}), 1: Element({(2,): one}), 2: Element({(1,): one})},
        b.pairings["ev"],
    )
    res = classical_limit(fam, mu_h=swapped, max_degree=1)
    assert not res.report.passed
    failed = [r.name for r in res.report.failures()]
    assert any(n.startswith("quantum: moment identity") for n in failed)
    assert any(n.startswith("constant term: ") for n in failed)
