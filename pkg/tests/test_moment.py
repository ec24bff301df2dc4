from fractions import Fraction

import pytest

from hopfmm.catalog import get_builtin
from hopfmm.hopf import ValidationFailed
from hopfmm.moment import (
    MomentMap,
    MomentSource,
    fuse,
    hamiltonian_reduce,
    trivial_moment_map,
)
from hopfmm.ncalg import Element, TensorElement

F = Fraction


@pytest.fixture(scope="module")
def bundle():
    return get_builtin("classical-sl2-triple")


def test_source_validates(bundle):
    rep = bundle.sources["main"].validate(3)
    assert rep.passed, [r.name for r in rep.failures()]


def test_identity_map_validates(bundle):
    rep = bundle.maps["mu"].validate(3)
    assert rep.passed, [r.name for r in rep.failures()]


def test_moment_identity_holds(bundle):
    rep = bundle.maps["mu"].check_moment(2)
    assert rep.passed, [r.name for r in rep.failures()]


def test_centrality_holds(bundle):
    rep = bundle.maps["mu"].check_centrality(2)
    assert rep.passed, [r.name for r in rep.failures()]


def test_checkers_agree_on_corrupted_map(bundle):
    # swapping e and f is not a moment map; both routes must refuse it
    src = bundle.sources["main"]
    bad = MomentMap(
        "mu-swapped",
        src,
        bundle.comodules["adjoint"],
        {
            0: Element({(2,): F(1)}),
            1: Element({(1,): F(1)}),
            2: Element({(0,): F(1)}),
        },
        bundle.pairings["ev"],
    )
    direct = bad.check_moment(2)
    crossed = bad.check_centrality(2)
    assert not direct.passed
    assert not crossed.passed
    assert direct.failures()[0].witness is not None


def test_agreement_on_good_map(bundle):
    mu = bundle.maps["mu"]
    assert mu.check_moment(2).passed == mu.check_centrality(2).passed


def test_trivial_map_is_a_moment_map(bundle):
    src = bundle.sources["main"]
    triv = trivial_moment_map(src, bundle.pairings["ev"])
    assert triv.validate(2).passed
    assert triv.check_moment(2).passed


def test_fused_map_images(bundle):
    mu = bundle.maps["mu"]
    fused = fuse(mu, mu, bundle.pairings["braiding"])
    # primitive fusion coproduct sends x to x_1 + x_2
    for g in range(3):
        want = Element({(g,): F(1), (g + 3,): F(1)})
        assert fused.images[g] == want
    names = fused.target.alg.table.names
    assert list(names) == ["f_1", "h_1", "e_1", "f_2", "h_2", "e_2"]


def test_fused_map_is_a_moment_map(bundle):
    mu = bundle.maps["mu"]
    fused = fuse(mu, mu, bundle.pairings["braiding"])
    rep = fused.validate(2)
    assert rep.passed, [r.name for r in rep.failures()]
    mom = fused.check_moment(2)
    assert mom.passed, [r.name for r in mom.failures()]


def test_classical_braiding_gives_flat_cross_rules(bundle):
    mu = bundle.maps["mu"]
    fused = fuse(mu, mu, bundle.pairings["braiding"])
    rs = fused.target.alg.rs
    # second-copy letters commute past first-copy letters unchanged
    assert rs.reduce_word((3, 2)) == Element({(2, 3): F(1)})
    assert rs.reduce_word((5, 0)) == Element({(0, 5): F(1)})


def test_fusion_with_trivial_pair_is_identity(bundle):
    mu = bundle.maps["mu"]
    src = bundle.sources["main"]
    triv = trivial_moment_map(src, bundle.pairings["ev"])
    fused = fuse(triv, mu, bundle.pairings["braiding"])
    assert list(fused.target.alg.table.names) == list(
        mu.target.alg.table.names
    )
    for g in range(3):
        assert fused.images[g] == mu.images[g]
    assert fused.check_moment(2).passed


def test_fuse_rejects_foreign_source(bundle):
    mu = bundle.maps["mu"]
    src = bundle.sources["main"]
    one = F(1)
    prim = {
        g: TensorElement(2, {((g,), ()): one, ((), (g,)): one})
        for g in range(3)
    }
    other_src = MomentSource(
        "copy",
        h_comodule=bundle.comodules["adjoint"],
        covector=bundle.comodules["covector"],
        counit={g: F(0) for g in range(3)},
        fusion_coproduct=prim,
    )
    other = MomentMap(
        "mu-copy",
        other_src,
        bundle.comodules["adjoint"],
        {g: Element({(g,): one}) for g in range(3)},
        bundle.pairings["ev"],
    )
    with pytest.raises(ValidationFailed):
        fuse(mu, other, bundle.pairings["braiding"])


def test_fuse_rejects_mismatched_braiding(bundle):
    mu = bundle.maps["mu"]
    with pytest.raises(ValidationFailed):
        fuse(mu, mu, bundle.pairings["ev"])


def test_rosso_is_identity_on_generators(bundle):
    src = bundle.sources["main"]
    for g in range(3):
        assert src.rosso_word((g,)) == Element({(g,): F(1)})
    rep = src.check_rosso(2)
    assert rep.passed, [r.name for r in rep.failures()]


def test_reduce_classical_is_a_point(bundle):
    mu = bundle.maps["mu"]
    for n in range(4):
        res = hamiltonian_reduce(mu, n)
        assert res.dim == 1, (n, res.basis_strings)
        assert res.basis_strings == ["1"]
        assert res.unit_coords == [F(1)]
        assert res.product_table[(0, 0)] == [F(1)]
        assert not res.truncation_unsound


def test_reduce_fused_picks_up_casimir(bundle):
    mu = bundle.maps["mu"]
    fused = fuse(mu, mu, bundle.pairings["braiding"])
    dims = [hamiltonian_reduce(fused, n).dim for n in range(3)]
    assert dims == [1, 1, 2]
    res = hamiltonian_reduce(fused, 2)
    table = fused.target.alg.table
    degs = sorted(e.degree(table) for e in res.basis)
    assert degs == [0, 2]
    # squaring the degree-2 class escapes the slice
    assert res.product_table[(1, 1)] is None
    assert res.truncation_unsound
    assert res.product_table[(0, 0)] == [F(1), F(0)]


def test_reduction_json_round_trip(bundle):
    import json

    res = hamiltonian_reduce(bundle.maps["mu"], 2)
    d = res.to_json_dict()
    assert d["suite"] == "reduction"
    assert d["dim"] == 1
    assert d["basis"] == ["1"]
    assert d["flags"]["truncated_ideal"] is True
    json.dumps(d)
