import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trivext.algebra import hom_space, regular_module, trivial_module
from trivext.corpus import instances, random_fmodule, serial_instance, transported
from trivext.extension import InvalidInput
from trivext.functors import C, T, Z
from trivext.smodule import (
    FModule,
    from_left_form,
    gmodule_morphism_space,
    is_gmorphism,
    is_morphism,
    isomorphic,
    morphism_space,
    saction_hom,
    fmodule_to_saction,
    saction_to_fmodule,
    to_left_form,
    validate_fmodule,
    validate_gmodule,
)

CORPUS = instances()
INDEX = st.integers(0, len(CORPUS) - 1)
SEED = st.integers(0, 2**32 - 1)


def test_zero_maps_valid(serial2):
    x = trivial_module(serial2.ext.base, 2)
    z = Z(serial2.ext, x)
    assert validate_fmodule(z) == []
    s = fmodule_to_saction(z)
    assert not np.any(s.act[1:])


def test_regular_action_valid_and_is_T_of_R(serial2):
    ext = serial2.ext
    reg = saction_to_fmodule(regular_module(ext.total), ext)
    assert validate_fmodule(reg) == []
    tr = T(ext, regular_module(ext.base))
    assert np.array_equal(fmodule_to_saction(tr).act, regular_module(ext.total).act)


def test_condition_ii_violation_reported(serial2):
    ext = serial2.ext
    x = trivial_module(ext.base, 1)
    m = FModule(ext, x, ([[1]], [[0]]))
    assert validate_fmodule(m) == ["condition (ii) fails for (i,j)=(1,1)"]
    with pytest.raises(InvalidInput):
        fmodule_to_saction(m)


def test_nilpotent_example_gives_dual_numbers_action():
    ext = serial_instance(2, 1).ext
    x = trivial_module(ext.base, 2)
    m = FModule(ext, x, ([[0, 0], [1, 0]],))
    s = fmodule_to_saction(m)
    assert s.act[0].tolist() == [[1, 0], [0, 1]]
    assert s.act[1].tolist() == [[0, 0], [1, 0]]
    assert s.validate() == []


def test_morphism_dims_examples(serial2):
    ext = serial2.ext
    r = regular_module(ext.base)
    zr, tr = Z(ext, r), T(ext, r)
    assert len(morphism_space(zr, zr)) == 1
    assert len(morphism_space(tr, zr)) == len(hom_space(C(tr).module, r)) == 1
    for m in (zr, tr):
        homs = morphism_space(m, m)
        eye = np.eye(m.dim, dtype=np.int64)
        assert is_morphism(m, m, eye)
        span = np.stack([h.ravel() for h in homs], axis=1)
        assert ext.field.solve(span, eye.ravel()) is not None


def test_isomorphic_examples(serial2):
    ext = serial2.ext
    r = regular_module(ext.base)
    tr = T(ext, r)
    v = isomorphic(tr, tr)
    assert v.yes
    assert isomorphic(tr, Z(ext, r)).no
    reg = saction_to_fmodule(regular_module(ext.total), ext)
    assert isomorphic(T(ext, C(reg).module), reg).yes


def test_left_form_of_T_over_dual_numbers():
    ext = serial_instance(2, 1).ext
    tr = T(ext, regular_module(ext.base))
    gm = to_left_form(tr)
    # g_1(e_x)(m)[x'] = f_1[x', x] for M_1 = F_2: the transpose of kappa's evaluation
    assert gm.ambient(1).reshape(2, 2).tolist() == tr.fmap(1).reshape(2, 2).tolist()
    assert np.array_equal(from_left_form(gm).fmap(1), tr.fmap(1))


def test_zero_f_gives_zero_g(serial2):
    gm = to_left_form(Z(serial2.ext, regular_module(serial2.ext.base)))
    assert all(not np.any(g) for g in gm.g)


@given(INDEX, SEED)
def test_saction_roundtrip(k, seed):
    ext = CORPUS[k].ext
    m = random_fmodule(ext, np.random.default_rng(seed))
    assert validate_fmodule(m) == []
    s = fmodule_to_saction(m)
    back = saction_to_fmodule(s, ext)
    assert np.array_equal(back.X.act, m.X.act)
    assert all(np.array_equal(a, b) for a, b in zip(back.f, m.f))
    assert np.array_equal(fmodule_to_saction(back).act, s.act)


@given(INDEX, SEED)
def test_left_form_roundtrip(k, seed):
    ext = CORPUS[k].ext
    m = random_fmodule(ext, np.random.default_rng(seed))
    gm = to_left_form(m)
    assert validate_gmodule(gm) == []
    back = from_left_form(gm)
    assert all(np.array_equal(a, b) for a, b in zip(back.f, m.f))


@given(INDEX, SEED)
def test_morphism_dims_agree_across_forms(k, seed):
    ext = CORPUS[k].ext
    rng = np.random.default_rng(seed)
    a, b = random_fmodule(ext, rng), random_fmodule(ext, rng)
    homs = morphism_space(a, b)
    assert len(homs) == len(saction_hom(fmodule_to_saction(a), fmodule_to_saction(b)))
    ga, gb = to_left_form(a), to_left_form(b)
    ghoms = gmodule_morphism_space(ga, gb)
    assert len(ghoms) == len(homs)
    assert all(is_gmorphism(ga, gb, h) for h in homs)


@given(INDEX, SEED)
def test_transport_is_isomorphic(k, seed):
    ext = CORPUS[k].ext
    rng = np.random.default_rng(seed)
    m = random_fmodule(ext, rng)
    if m.dim == 0:
        return
    while True:
        change = rng.integers(0, ext.field.p, size=(m.dim, m.dim))
        if ext.field.is_invertible(change):
            break
    n = transported(m, change)
    assert validate_fmodule(n) == []
    v = isomorphic(m, n)
    assert v.yes and is_morphism(m, n, v.witness)
