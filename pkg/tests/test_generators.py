import pytest

from oddsub.decomposition import StuckCore, recognize_tw2, treewidth_brute
from oddsub.exact import mois_brute
from oddsub.generators import (
    FamilyError, FamilySpec, c5_union, generate, hk, make_rng, random_sp, random_subcubic,
    random_tree,
)
from oddsub.graph import components


def test_c5_union_shape():
    g = c5_union(3)
    assert (g.n, g.m, len(components(g))) == (15, 15, 3)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_hk_assets(k):
    g = hk(k)
    assert g.n == k + 3
    assert mois_brute(g).size == 2
    if k <= 2:
        td = recognize_tw2(g)
        assert not isinstance(td, StuckCore) and td.width == k
    else:
        assert isinstance(recognize_tw2(g), StuckCore)
    assert treewidth_brute(g) == k


def test_hk_range():
    with pytest.raises(FamilyError):
        hk(5)


def test_random_sp_properties():
    g = random_sp(50, 0.7, seed=1)
    assert not isinstance(recognize_tw2(g), StuckCore)
    assert g.min_degree() >= 1 and len(components(g)) == 1


@pytest.mark.parametrize("n", [2, 3, 10, 200])
def test_random_tree_properties(n):
    g = random_tree(n, seed=n)
    assert g.n == n and g.m == n - 1 and len(components(g)) == 1


def test_random_subcubic_properties():
    for i in range(30):
        g = random_subcubic(18, seed=2, index=i)
        assert g.max_degree() <= 3 and len(components(g)) == 1 and g.n == 18


def test_determinism_and_independence():
    a = generate(FamilySpec("random_sp", n=80, seed=9, index=3))
    b = generate(FamilySpec("random_sp", n=80, seed=9, index=3))
    c = generate(FamilySpec("random_sp", n=80, seed=9, index=4))
    assert a == b and a != c
    assert make_rng(5, 1).integers(1 << 30) == make_rng(5, 1).integers(1 << 30)


def test_family_errors():
    with pytest.raises(FamilyError):
        generate(FamilySpec("random_sp", n=None))
    with pytest.raises(FamilyError):
        generate(FamilySpec("wheel", n=5))
    with pytest.raises(FamilyError):
        random_sp(1)
    with pytest.raises(FamilyError):
        random_sp(5, p2=1.5)
