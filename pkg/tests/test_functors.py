import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trivext.algebra import (
    direct_sum,
    find_isomorphism,
    hom_space,
    is_hom,
    regular_module,
    trivial_module,
    zero_module,
)
from trivext.corpus import (
    build_instance,
    instances,
    r_modules,
    random_fmodule,
    random_r_module,
    serial_instance,
)
from trivext.functors import (
    ADJOINT_PAIRS,
    C,
    C_morphism,
    H,
    H_morphism,
    K,
    T,
    T_morphism,
    U,
    Z,
    Z_left,
    check_adjunction,
    cofree_lift,
)
from trivext.homtests import regular_fmodule
from trivext.smodule import (
    fmodule_to_saction,
    gmodule_morphism_space,
    is_gmorphism,
    is_morphism,
    morphism_space,
    to_left_form,
    validate_fmodule,
    validate_gmodule,
)
from trivext.suite import functor_identities

CORPUS = instances()
INDEX = st.integers(0, len(CORPUS) - 1)
SEED = st.integers(0, 2**32 - 1)


def test_T_of_zero_and_Z_of_zero(serial2):
    ext = serial2.ext
    z = zero_module(ext.base)
    assert T(ext, z).dim == 0
    assert Z(ext, z).dim == 0
    assert H(ext, z).dim == 0


def test_T_of_R_over_dual_numbers_with_top(dual_numbers_top):
    ext = dual_numbers_top.ext
    tr = T(ext, regular_module(ext.base))
    assert tr.dim == 3
    assert np.array_equal(fmodule_to_saction(tr).act, regular_module(ext.total).act)


@pytest.mark.parametrize("inst", CORPUS, ids=lambda i: i.name)
def test_T_of_R_is_regular(inst):
    ext = inst.ext
    tr = T(ext, regular_module(ext.base))
    assert np.array_equal(fmodule_to_saction(tr).act, regular_module(ext.total).act)


@pytest.mark.parametrize("inst", CORPUS, ids=lambda i: i.name)
def test_U_of_T_of_R_splits(inst):
    ext = inst.ext
    r = regular_module(ext.base)
    parts = [r] + [ext.M(i).left for i in range(1, ext.n + 1)]
    assert find_isomorphism(U(T(ext, r)), direct_sum(*parts)).yes


def test_C_examples(serial2):
    ext = serial2.ext
    x = trivial_module(ext.base, 2)
    assert np.array_equal(C(Z(ext, x)).module.act, x.act)
    reg = regular_fmodule(ext)
    assert find_isomorphism(C(reg).module, regular_module(ext.base)).yes


def test_K_of_zero_form_is_everything(serial2):
    ext = serial2.ext
    x = trivial_module(ext.base, 2)
    ker = K(Z_left(ext, x))
    assert ker.subspace.dim == 2


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("p", [2, 3])
def test_H_dimension_over_prime_field(p, n):
    ext = serial_instance(p, n).ext
    x = trivial_module(ext.base, 2)
    gm = H(ext, x)
    assert gm.dim == (n + 1) * 2
    assert validate_gmodule(gm) == []


def test_adjunction_examples(serial2):
    ext = serial2.ext
    r = regular_module(ext.base)
    tr = T(ext, r)
    rep = check_adjunction(("T", "U"), r, tr, ext)
    assert rep.ok and rep.dim_left == rep.dim_right == ext.dim
    rep = check_adjunction(("C", "Z"), Z(ext, zero_module(ext.base)), zero_module(ext.base), ext)
    assert rep.ok and rep.dim_left == rep.dim_right == 0
    e = trivial_module(ext.base, 2)
    rep = check_adjunction(("Z", "K"), r, H(ext, e), ext)
    assert rep.ok and rep.dim_left == len(hom_space(r, e))


def test_adjunction_rejects_unknown_pair(serial2):
    with pytest.raises(ValueError):
        check_adjunction(("H", "U"), None, None, serial2.ext)


@pytest.mark.parametrize("inst", CORPUS, ids=lambda i: i.name)
def test_functor_identities_on_small_modules(inst):
    for x in r_modules(inst.ring_name, 2):
        assert functor_identities(inst, x) == {"CT": True, "UZ": True, "KH": True}


@given(INDEX, SEED)
def test_T_and_H_produce_valid_modules(k, seed):
    ext = CORPUS[k].ext
    x = random_r_module(ext.base, np.random.default_rng(seed))
    assert validate_fmodule(T(ext, x)) == []
    lift = cofree_lift(ext, x)
    assert validate_gmodule(lift.module) == []
    assert validate_fmodule(lift.fmodule) == []


@given(INDEX, SEED)
def test_T_morphism_is_functorial(k, seed):
    ext = CORPUS[k].ext
    rng = np.random.default_rng(seed)
    x, y = random_r_module(ext.base, rng), random_r_module(ext.base, rng)
    homs = hom_space(x, y)
    ends = hom_space(x, x)
    if not homs or not ends:
        return
    fld = ext.field
    alpha = np.mod(sum(int(c) * h for c, h in zip(rng.integers(0, fld.p, len(homs)), homs)), fld.p)
    beta = np.mod(sum(int(c) * h for c, h in zip(rng.integers(0, fld.p, len(ends)), ends)), fld.p)
    tx, ty = T(ext, x), T(ext, y)
    ta = T_morphism(ext, x, y, alpha)
    assert is_morphism(tx, ty, ta)
    composed = T_morphism(ext, x, y, fld.matmul(alpha, beta))
    assert np.array_equal(composed, fld.matmul(ta, T_morphism(ext, x, x, beta)))
    ha = H_morphism(ext, x, y, alpha)
    assert is_gmorphism(H(ext, x), H(ext, y), ha)


@given(INDEX, SEED)
def test_C_morphism_descends(k, seed):
    ext = CORPUS[k].ext
    rng = np.random.default_rng(seed)
    a, b = random_fmodule(ext, rng), random_fmodule(ext, rng)
    for g in morphism_space(a, b)[:3]:
        induced = C_morphism(a, b, g)
        assert is_hom(C(a).module, C(b).module, induced)


@given(INDEX, SEED, st.sampled_from(ADJOINT_PAIRS))
def test_adjunctions_on_random_modules(k, seed, pair):
    ext = CORPUS[k].ext
    rng = np.random.default_rng(seed)
    x = random_r_module(ext.base, rng)
    m = random_fmodule(ext, rng)
    args = {
        ("T", "U"): (x, m),
        ("C", "Z"): (m, x),
        ("U", "H"): (to_left_form(m), x),
        ("Z", "K"): (x, to_left_form(m)),
    }[pair]
    rep = check_adjunction(pair, *args, ext, squares=5, seed=seed)
    assert rep.ok, rep.to_json()


@given(INDEX, SEED)
def test_left_form_morphisms_match_H_hom_count(k, seed):
    """``Hom_S(gm, H E)`` has the dimension of ``Hom_R(U gm, E)``."""
    ext = CORPUS[k].ext
    rng = np.random.default_rng(seed)
    m = to_left_form(random_fmodule(ext, rng))
    e = random_r_module(ext.base, rng)
    assert len(gmodule_morphism_space(m, H(ext, e))) == len(hom_space(m.X, e))


def test_instance_with_mixed_bimodules():
    inst = build_instance("F2[x]/(x^2)", 3, "top")
    x = regular_module(inst.ext.base)
    assert functor_identities(inst, x) == {"CT": True, "UZ": True, "KH": True}


@pytest.mark.parametrize("n", [1, 2])
def test_noncommutative_base_identities_and_adjunctions(n):
    inst = build_instance("T2(F2)", n, "regular")
    ext = inst.ext
    xs = r_modules("T2(F2)", 2)
    partners = [regular_fmodule(ext), Z(ext, regular_module(ext.base))]
    for x in xs:
        assert functor_identities(inst, x) == {"CT": True, "UZ": True, "KH": True}
        for y in partners:
            yl = to_left_form(y)
            for pair, args in {
                ("T", "U"): (x, y),
                ("C", "Z"): (y, x),
                ("U", "H"): (yl, x),
                ("Z", "K"): (x, yl),
            }.items():
                assert check_adjunction(pair, *args, ext, squares=3).ok
