import warnings
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fourvertex.errors import CapExceeded, ParseError
from fourvertex.operator_core import Scalar
from fourvertex.symbolic_words import LaurentCoeff, parse_laurent
from fourvertex.vertex_enum import (
    ALL_TYPES,
    FOUR_VERTEX_TYPES,
    PRESETS,
    InconsistentBoundary,
    Lattice,
    WeightSpec,
    brute_force_configs,
    config_matrix,
    count_configs,
    derive_weight_dictionary,
    enumerate_configs,
    frozen_dictionary,
    in_count,
    lattice_from_sides,
    load_lattice,
    partition_enum,
    partition_transfer,
    preset,
    probability,
    structure_types,
    type_class,
    uniform_weights,
    vertex_table,
    vertex_type,
    z_triples,
)


@st.composite
def consistent_lattices(draw, max_rows=3, max_cols=3, max_edges=12):
    R = draw(st.integers(1, max_rows))
    C = draw(st.integers(1, max_cols))
    if R * (C - 1) + (R - 1) * C > max_edges:
        C = 1
    n = 2 * (R + C)
    ins = draw(st.sets(st.integers(0, n - 1), min_size=n // 2, max_size=n // 2))
    return Lattice(R, C, tuple("in" if k in ins else "out" for k in range(n)))


# vertex table ---------------------------------------------------------------------


def test_vertex_table_ice_rule():
    table = vertex_table()
    assert sorted(table) == [1, 2, 3, 4, 5, 6]
    for t, entry in table.items():
        arrows = (entry["W"], entry["E"], entry["S"], entry["N"])
        assert in_count(*arrows) == 2
        assert vertex_type(*arrows) == t
    assert [type_class(t) for t in range(1, 7)] == ["a", "a", "b", "b", "c", "c"]
    assert vertex_type(">", ">", "^", "v") is None


# enumeration ------------------------------------------------------------------------


@given(consistent_lattices())
def test_enumeration_matches_brute_force(lat):
    for allowed in (ALL_TYPES, FOUR_VERTEX_TYPES):
        got = {c.key() for c in enumerate_configs(lat, allowed)}
        ref = {c.key() for c in brute_force_configs(lat, allowed)}
        assert got == ref


@given(consistent_lattices())
def test_enumeration_no_duplicates(lat):
    keys = [c.key() for c in enumerate_configs(lat)]
    assert len(keys) == len(set(keys))


@pytest.mark.parametrize("n,asm", [(1, 1), (2, 2), (3, 7), (4, 42)])
def test_dwbc_counts_are_asm_numbers(n, asm):
    assert count_configs(preset("dwbc", n, n)) == asm


def test_dwbc_two_by_two_polynomial():
    z = partition_enum(preset("dwbc", 2, 2), WeightSpec("homogeneous", "6v"))
    assert z == parse_laurent("a^2*c^2 + b^2*c^2")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dwbc_four_vertex_single_configuration(n):
    z = partition_enum(preset("dwbc", n, n), WeightSpec("homogeneous", "4v"))
    assert z_triples(z) == [(n * (n - 1), n, 1)]


def test_inconsistent_boundary_warns():
    lat = Lattice(1, 1, ("in", "in", "in", "out"))
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        assert list(enumerate_configs(lat)) == []
    assert any(issubclass(x.category, InconsistentBoundary) for x in w)
    assert partition_transfer(lat, WeightSpec()) == LaurentCoeff.const(0)


def test_caps():
    with pytest.raises(CapExceeded):
        list(enumerate_configs(preset("dwbc", 5, 4)))
    with pytest.raises(CapExceeded):
        brute_force_configs(preset("dwbc", 3, 4))


def test_lattice_validation_and_files(tmp_path):
    with pytest.raises(ValueError):
        Lattice(2, 2, ("in",) * 7)
    f = tmp_path / "l.yaml"
    f.write_text("rows: 2\ncols: 2\nboundary: dwbc\n")
    assert load_lattice(f) == preset("dwbc", 2, 2)
    g = tmp_path / "g.yaml"
    g.write_text("rows: 1\ncols: 1\nboundary: in out in out\n")
    assert load_lattice(g) == Lattice(1, 1, ("in", "out", "in", "out"))
    bad = tmp_path / "b.yaml"
    bad.write_text("rows: 1\n")
    with pytest.raises(ParseError):
        load_lattice(bad)


def test_lattice_from_sides_roundtrip():
    lat = lattice_from_sides(2, 3, ["in", "out", "in"], ["out", "in"], ["in", "in", "out"], ["out", "out"])
    sides = lat.side_tokens()
    assert sides["top"] == ("in", "out", "in")
    assert sides["bottom"] == ("in", "in", "out")
    assert sides["left"] == ("out", "out")


# weights ------------------------------------------------------------------------------


def test_probabilities_sum_to_one():
    lat = preset("dwbc", 3, 3)
    spec = uniform_weights(3, 3, wa=2, wb=3, wc=5, model="6v")
    z = partition_enum(lat, spec)
    total = sum((probability(c, lat, spec, z).value() for c in enumerate_configs(lat)), Scalar(0))
    assert total == Scalar(1)


def test_inhomogeneous_weights():
    lat = preset("dwbc", 2, 2)
    spec = WeightSpec("inhomogeneous", "6v", (((1, 2, 3), (1, 1, 1)), ((1, 1, 1), (5, 1, 1))))
    z = partition_enum(lat, spec)
    hom = partition_enum(lat, WeightSpec("homogeneous", "6v"))
    assert z.is_constant()
    assert hom.evaluate({"a": 1, "b": 1, "c": 1}) == Scalar(2)


def test_config_matrix():
    cfg = next(iter(enumerate_configs(preset("dwbc", 2, 2))))
    assert config_matrix(cfg).shape == (2, 2)


# transfer route -------------------------------------------------------------------------


def test_frozen_dictionary_matches_derivation():
    for structure in ("6v", "4v"):
        derived = derive_weight_dictionary(structure)
        frozen = frozen_dictionary(structure)
        assert derived["geometry"] == frozen["geometry"]
        assert derived["dictionary"] == frozen["dictionary"]


def test_four_vertex_support_is_not_the_weight_table():
    # the L-operator support realizes one a-type and one b-type vertex
    types = structure_types("4v")
    assert len(types) == 4
    assert sorted(type_class(t) for t in types) == ["a", "b", "c", "c"]
    assert types != FOUR_VERTEX_TYPES


@given(consistent_lattices(max_rows=3, max_cols=3, max_edges=24), st.sampled_from(["4v", "6v"]))
def test_transfer_matches_enumeration(lat, model):
    for mode in ("homogeneous", "anisotropic"):
        spec = WeightSpec(mode, model)
        assert partition_enum(lat, spec) == partition_transfer(lat, spec)


@given(consistent_lattices(max_rows=3, max_cols=3, max_edges=24))
def test_transfer_with_four_vertex_support(lat):
    spec = WeightSpec("anisotropic", "6v")
    assert partition_enum(lat, spec, structure_types("4v")) == partition_transfer(lat, spec, structure="4v")


def test_row_alternating_four_vertex_support():
    lat = preset("row-alternating", 4, 4)
    spec = WeightSpec("anisotropic", "6v")
    z = partition_transfer(lat, spec, structure="4v")
    assert z == parse_laurent("16*a2^6*b1^6*c1^2*c2^2")
    assert count_configs(lat, structure_types("4v")) == 16


@pytest.mark.parametrize("name", PRESETS)
def test_presets_consistent_on_even_lattices(name):
    assert preset(name, 4, 4).is_consistent()
