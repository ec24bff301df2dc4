import random
from fractions import Fraction

import pytest

from hopfmm.ncalg import Element
from hopfmm.quasipoisson import (
    AffineQPData,
    LieData,
    MultiVector,
    SingularPairing,
    check_classical_moment_map,
    check_group_pair,
    check_quasi_poisson_variety,
    complement_projection,
    cotangent_instance,
    direct_sum_double,
    interior,
    killing_form,
    mixed_bracket,
    polynomial_presentation,
    schouten,
    semidirect_double,
    sl2_lie,
    twist_infinitesimal,
    twisted_complement,
    wedge,
)

F = Fraction


def random_multivector(rng, n, degree, span=3):
    terms = {}
    for _ in range(span):
        idx = tuple(sorted(rng.sample(range(n), degree)))
        terms[idx] = F(rng.randint(-4, 4))
    return MultiVector(degree, terms)


def test_sl2_validates():
    rep = sl2_lie().validate()
    assert rep.passed, [r.name for r in rep.failures()]


def test_killing_form_sl2():
    assert killing_form(sl2_lie()) == [
        [F(0), F(0), F(4)],
        [F(0), F(8), F(0)],
        [F(4), F(0), F(0)],
    ]


def test_bad_jacobi_rejected():
    L = LieData("broken", 3, {(0, 1): {2: F(1)}, (0, 2): {0: F(1)}, (1, 2): {1: F(1)}})
    rep = L.validate()
    assert not rep.passed


def test_schouten_oracle():
    # [e^f, e^f] = 2 e^f^h in the f,h,e ordering
    g = sl2_lie()
    ef = MultiVector(2, {(0, 2): F(-1)})
    got = schouten(ef, ef, g)
    assert got.terms == {(0, 1, 2): F(2)}


def test_schouten_graded_antisymmetry():
    g = sl2_lie()
    rng = random.Random(71)
    for _ in range(20):
        p = random_multivector(rng, 3, rng.choice([1, 2]))
        q = random_multivector(rng, 3, rng.choice([1, 2]))
        sign = F((-1) ** ((p.degree - 1) * (q.degree - 1)))
        lhs = schouten(p, q, g)
        rhs = schouten(q, p, g).scale(-sign)
        assert lhs == rhs, (p.terms, q.terms)


def test_schouten_leibniz_in_second_slot():
    # [p, q^r] = [p,q]^r + (-1)^((|p|-1)|q|) q^[p,r] for 1-vectors q, r
    g = sl2_lie()
    rng = random.Random(72)
    for _ in range(20):
        p = random_multivector(rng, 3, rng.choice([1, 2]))
        q = random_multivector(rng, 3, 1)
        r = random_multivector(rng, 3, 1)
        sign = F((-1) ** ((p.degree - 1) * q.degree))
        lhs = schouten(p, wedge(q, r), g)
        rhs = wedge(schouten(p, q, g), r) + wedge(q, schouten(p, r, g)).scale(sign)
        assert lhs == rhs


def test_mixed_bracket_matches_double_schouten():
    # with delta = ad(t) the contraction equals 2 [t, t]
    g = sl2_lie()
    rng = random.Random(73)
    for _ in range(10):
        t = random_multivector(rng, 3, 2)
        from hopfmm.quasipoisson import ad_multivector

        delta = {i: ad_multivector(g, i, t) for i in range(3)}
        assert mixed_bracket(delta, t, g) == schouten(t, t, g).scale(F(2))


def test_double_twist_cancels():
    g = sl2_lie()
    rng = random.Random(74)
    for _ in range(10):
        t = random_multivector(rng, 3, 2)
        phi = random_multivector(rng, 3, 3, span=1)
        delta = {i: MultiVector(2) for i in range(3)}
        d1, p1 = twist_infinitesimal(delta, phi, t, g)
        d2, p2 = twist_infinitesimal(d1, p1, t.scale(F(-1)), g)
        assert p2 == phi
        for i in range(3):
            assert d2[i] == delta[i]


def test_semidirect_double_is_group_pair():
    rep = check_group_pair(semidirect_double(sl2_lie()))
    assert rep.passed, [r.name for r in rep.failures()]


def test_direct_sum_double_is_group_pair():
    rep = check_group_pair(direct_sum_double(sl2_lie()))
    assert rep.passed, [r.name for r in rep.failures()]


def test_full_double_as_half_fails():
    # declaring all of the big algebra as the isotropic half trips the
    # dimension record
    d = semidirect_double(sl2_lie())
    d.subalgebras = dict(d.subalgebras)
    d.subalgebras["g"] = d.subalgebras["g"] + d.subalgebras["h"]
    rep = check_group_pair(d)
    names = [r.name for r in rep.failures()]
    assert "declared half has half the dimension" in names


def test_projection_matrix_frozen():
    d = semidirect_double(sl2_lie())
    p = complement_projection(d)
    assert p == [
        [F(0), F(0), F(0), F(1), F(0), F(0)],
        [F(0), F(0), F(0), F(0), F(1), F(0)],
        [F(0), F(0), F(0), F(0), F(0), F(1)],
    ]


def test_projection_difference_is_twist_composite():
    d = semidirect_double(sl2_lie())
    t = MultiVector(2, {(0, 2): F(1)})
    h1 = list(range(3, 6))
    h2 = twisted_complement(d, h1, t)
    p1 = complement_projection(d)
    p2 = complement_projection(d, h2)
    g = d.subalgebras["g"]
    for i in range(6):
        # restriction of the dual vector e^i to the half
        xi = [F(0)] * 3
        for a in range(3):
            xi[a] = F(1) if g[a][i] else F(0)
        shift = interior(xi, t)
        col = [F(0)] * 3
        for (k,), c in shift.terms.items():
            col[k] = -c
        assert [p2[a][i] - p1[a][i] for a in range(3)] == col


def test_singular_pairing_raises():
    L = LieData(
        "degenerate",
        2,
        {},
        pairing=[[F(0), F(0)], [F(0), F(0)]],
        subalgebras={"g": [0], "h": [1]},
    )
    with pytest.raises(SingularPairing):
        complement_projection(L)


def test_affine_instances_validate():
    inst = cotangent_instance()
    assert inst.x.validate().passed
    assert inst.quotient.validate().passed


def test_kks_variety_passes():
    inst = cotangent_instance()
    rep = check_quasi_poisson_variety(inst.x, MultiVector(3))
    assert rep.passed, [r.name for r in rep.failures()]


def test_any_trivector_passes_on_the_dual_slice():
    # triple wedges of the action fields vanish on the rank-two orbits, so
    # the trivector side is invisible here; the failing branch is covered
    # by the non-Jacobi bivector below
    inst = cotangent_instance()
    phi = MultiVector(3, {(0, 1, 2): F(5)})
    rep = check_quasi_poisson_variety(inst.x, phi)
    assert rep.passed


def test_non_jacobi_bivector_fails_with_witness():
    g = sl2_lie()
    alg = polynomial_presentation("flat3", ["x0", "x1", "x2"])
    zero = {i: {j: Element() for j in range(3)} for i in range(3)}
    pi = {(0, 1): Element({(): F(1)}), (1, 2): Element({(1,): F(1)})}
    bad = AffineQPData("non-jacobi", alg, g, zero, pi)
    assert bad.validate().passed
    rep = check_quasi_poisson_variety(bad, MultiVector(3))
    fails = rep.failures()
    assert [r.name.startswith("half-Jacobi") for r in fails] == [True]
    assert fails[0].witness["f1"] == "x0"
    assert fails[0].witness["lhs"] == "-1"


def test_noninvariant_bivector_fails_compat():
    inst = cotangent_instance()
    g = sl2_lie()
    pi = dict(inst.x.pi)
    pi[(0, 1)] = pi[(0, 1)] + Element({(2, 2): F(1)})
    bad = AffineQPData("corrupt", inst.x.alg, g, inst.x.action, pi)
    rep = check_quasi_poisson_variety(bad, MultiVector(3))
    fails = rep.failures()
    assert [r.name.startswith("cobracket") for r in fails] == [True]
    assert fails[0].witness["u"] == "x0"


def test_wrong_cobracket_fails_compat():
    inst = cotangent_instance()
    delta = {i: MultiVector(2, {(0, 2): F(1)}) for i in range(3)}
    rep = check_quasi_poisson_variety(inst.x, MultiVector(3), delta=delta)
    assert not rep.passed


def test_classical_moment_map_passes():
    inst = cotangent_instance()
    rep = check_classical_moment_map(
        inst.x, inst.quotient, inst.mu, inst.double
    )
    assert rep.passed, [r.name for r in rep.failures()]


def test_moment_verdict_complement_independent():
    inst = cotangent_instance()
    rep = check_classical_moment_map(
        inst.x,
        inst.quotient,
        inst.mu,
        inst.double,
        second_h_basis=inst.twisted_h,
    )
    assert rep.passed, [r.name for r in rep.failures()]
    names = [r.name for r in rep.records]
    assert "second complement is a bivector twist of the first" in names
    assert "verdict is complement independent" in names


def test_zero_map_with_nonzero_bivector_fails():
    inst = cotangent_instance()
    zero_mu = {gid: Element() for gid in range(3)}
    rep = check_classical_moment_map(
        inst.x, inst.quotient, zero_mu, inst.double
    )
    fails = [r for r in rep.failures() if r.name.startswith("moment identity")]
    assert fails
    assert fails[0].witness is not None
    assert fails[0].witness["lhs"] != fails[0].witness["rhs"]
