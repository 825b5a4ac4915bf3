import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trivext.algebra import AtLeast, direct_sum, quotient, regular_module, trivial_module
from trivext.corpus import (
    build_instance,
    enumeration_corpus,
    instances,
    r_modules,
    random_fmodule,
    radical_rows,
    serial_instance,
)
from trivext.functors import H, T, Z
from trivext.homtests import (
    check_selfinj_theorem,
    classify,
    dual,
    ext_dims,
    inj_dimension,
    injective_oracle,
    is_flat,
    is_injective,
    is_projective,
    lifting_oracle,
    matching_candidates,
    perfect_desk_check,
    proj_dimension,
    r_inj_dimension,
    r_injective,
    r_proj_dimension,
    r_projective,
    regular_fmodule,
    sequence_exactness,
    split_carrier,
)
from trivext.linalg import Subspace
from trivext.smodule import from_left_form, validate_fmodule

CORPUS = instances()
INDEX = st.integers(0, len(CORPUS) - 1)
SEED = st.integers(0, 2**32 - 1)


def top_module(inst):
    r = regular_module(inst.ext.base)
    return quotient(r, Subspace.span(inst.ext.field, radical_rows(inst.ring_name), r.dim))[0]


@pytest.fixture(scope="module")
def dual_numbers():
    """``F_2 x_1 F_2``, which is ``F_2[x]/(x^2)``."""
    return serial_instance(2, 1)


def test_T_of_R_projective_Z_of_R_not(dual_numbers_n2):
    ext = dual_numbers_n2.ext
    r = regular_module(ext.base)
    assert is_projective(T(ext, r)).yes
    v = is_projective(Z(ext, r))
    assert v.no and "dimension" in v.reason


def test_non_projective_cokernel(dual_numbers_top):
    inst = dual_numbers_top
    k = top_module(inst)
    assert r_projective(k).no
    m = T(inst.ext, k)
    assert is_projective(m).no
    assert lifting_oracle(m).no


def test_lifting_oracle_examples(dual_numbers):
    ext = dual_numbers.ext
    s = regular_fmodule(ext)
    two = T(ext, direct_sum(regular_module(ext.base), regular_module(ext.base)))
    assert lifting_oracle(s).yes and lifting_oracle(two).yes
    assert lifting_oracle(Z(ext, regular_module(ext.base))).no


def test_injective_examples(dual_numbers, serial2):
    ext = dual_numbers.ext
    r = regular_module(ext.base)
    assert is_injective(Z(ext, r)).no
    assert is_injective(regular_fmodule(ext)).yes
    assert is_injective(regular_fmodule(serial2.ext)).yes
    assert injective_oracle(regular_fmodule(serial2.ext)).yes


def test_H_of_injective_is_injective(dual_numbers_n2):
    ext = dual_numbers_n2.ext
    e = regular_module(ext.base)
    assert r_injective(e).yes
    m = from_left_form(H(ext, e))
    assert is_injective(m).yes
    assert injective_oracle(m).yes


def test_flat_examples(dual_numbers):
    ext = dual_numbers.ext
    r = regular_module(ext.base)
    v = is_flat(T(ext, r))
    assert v.yes
    w = is_flat(Z(ext, r))
    assert w.no


def test_paper_candidate_is_not_a_complex_on_T_of_R(serial2):
    m = T(serial2.ext, regular_module(serial2.ext.base))
    ex = {e.candidate: e for e in sequence_exactness(m)}
    assert not ex["h_paper"].complex
    assert ex["h_corrected"].exact
    assert matching_candidates(m)["matches"] == ["h_corrected"]


def test_candidates_agree_when_n_is_one(dual_numbers):
    for m in enumeration_corpus(dual_numbers, 2):
        ex = [e.exact for e in sequence_exactness(m)]
        assert ex[0] == ex[1]


def test_projective_dimension_examples(dual_numbers):
    ext = dual_numbers.ext
    assert proj_dimension(T(ext, regular_module(ext.base))) == 0
    zf = Z(ext, regular_module(ext.base))
    for cap in (1, 3, 5):
        assert proj_dimension(zf, cap) == AtLeast(cap)
        assert inj_dimension(zf, cap) == AtLeast(cap)


def test_injective_dimension_of_H_over_prime_field():
    for n in (1, 2):
        ext = serial_instance(3, n).ext
        x = trivial_module(ext.base, 2)
        assert inj_dimension(from_left_form(H(ext, x))) == 0 == r_inj_dimension(x)


def test_r_side_dimensions(dual_numbers_top):
    inst = dual_numbers_top
    k = top_module(inst)
    assert r_proj_dimension(k, 4) == AtLeast(4)
    assert r_proj_dimension(regular_module(inst.ext.base)) == 0
    assert ext_dims(k, k, 3) == [1, 1, 1]


def test_dual_is_an_involution_up_to_dims(serial2):
    m = T(serial2.ext, regular_module(serial2.ext.base))
    d = dual(m)
    assert validate_fmodule(d) == []
    assert d.dim == m.dim
    assert is_projective(d).status == is_injective(m).status


def test_classify_serializes(dual_numbers):
    cls = classify(Z(dual_numbers.ext, regular_module(dual_numbers.ext.base)), cap=3, oracle=True)
    out = cls.to_json()
    assert out["projective"]["status"] == "no"
    assert out["pd"] == ">=3"
    assert out["oracle"]["projective_agrees"] and out["oracle"]["injective_agrees"]


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_selfinj_serial(p, n):
    rep = check_selfinj_theorem(serial_instance(p, n).ext)
    assert rep["hypothesis"]["status"] == "pass"
    assert rep["ext_vanishing"]["status"] == "pass"
    c = rep["conclusion"]
    assert c["status"] == "holds" and c["id_S_S"] == 0 == c["id_R_Mn"]
    assert c["S_injective"] == "yes"


def test_selfinj_hypothesis_failure():
    rep = check_selfinj_theorem(build_instance("F2", 1, "zero").ext)
    assert rep["hypothesis"]["status"] == "fail"
    assert rep["conclusion"] == {"status": "not-claimed", "reason": "hypothesis-not-satisfied"}


def test_selfinj_dual_numbers_regular():
    rep = check_selfinj_theorem(build_instance("F2[x]/(x^2)", 1, "regular").ext)
    assert rep["conclusion"]["status"] == "holds"
    assert rep["conclusion"]["id_S_S"] == rep["conclusion"]["id_R_Mn"] == 0


def test_perfect_desk_check_examples(dual_numbers):
    inst = dual_numbers
    ext = inst.ext
    tests = r_modules("F2", 1)[1:]
    mods = enumeration_corpus(inst, 2)
    rep = perfect_desk_check(ext, mods, r_modules("F2", 2), tests)
    assert rep["status"] == "pass" and rep["k"] == 0
    assert "not desk-reproducible" in rep["k_at_least_1"]
    assert perfect_desk_check(ext, [], [], tests)["status"] == "pass"
    t2 = T(ext, direct_sum(regular_module(ext.base), regular_module(ext.base)))
    rep = perfect_desk_check(ext, [t2], [], tests)
    assert rep["s_side"]["flat"] == 1 and rep["status"] == "pass"


def test_split_carrier_of_T(dual_numbers_n2):
    ext = dual_numbers_n2.ext
    m = T(ext, regular_module(ext.base))
    x1, section = split_carrier(m)
    assert x1.dim == ext.base.dim
    assert section.shape == (m.dim, x1.dim)


@given(INDEX, SEED)
def test_oracles_agree_on_random_modules(k, seed):
    m = random_fmodule(CORPUS[k].ext, np.random.default_rng(seed))
    assert is_projective(m).status == lifting_oracle(m).status
    assert is_injective(m).status == injective_oracle(m).status
    assert is_flat(m).status == is_projective(m).status


@given(INDEX, SEED)
def test_projective_iff_dual_injective(k, seed):
    m = random_fmodule(CORPUS[k].ext, np.random.default_rng(seed))
    assert is_projective(m).status == is_injective(dual(m)).status


@given(INDEX, SEED)
def test_T_of_projective_is_projective(k, seed):
    inst = CORPUS[k]
    rng = np.random.default_rng(seed)
    copies = int(rng.integers(1, 3))
    p = direct_sum(*([regular_module(inst.ext.base)] * copies))
    assert is_projective(T(inst.ext, p)).yes


@given(INDEX, SEED)
def test_h_corrected_always_a_complex(k, seed):
    m = random_fmodule(CORPUS[k].ext, np.random.default_rng(seed))
    ex = {e.candidate: e for e in sequence_exactness(m)}
    assert ex["h_corrected"].complex


@pytest.mark.parametrize("n", [1, 2])
def test_noncommutative_base_oracles_agree(n):
    inst = build_instance("T2(F2)", n, "regular")
    mods = enumeration_corpus(inst, 2)
    assert mods
    for m in mods:
        assert is_projective(m).status == lifting_oracle(m).status
        assert is_injective(m).status == injective_oracle(m).status
        assert is_flat(m).status == is_projective(m).status


def test_triangular_simple_has_pd_one():
    inst = build_instance("T2(F2)", 1, "regular")
    ext = inst.ext
    simples = [x for x in r_modules("T2(F2)", 1) if x.dim == 1]
    pds = sorted(r_proj_dimension(x, 4) for x in simples)
    assert pds == [0, 1]
    for x in simples:
        assert proj_dimension(T(ext, x), 4) == r_proj_dimension(x, 4)
