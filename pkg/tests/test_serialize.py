import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_lsi_spec
from steerkit import catalog
from steerkit.engine import one_way_threshold, threshold
from steerkit.errors import InvariantError, SchemaError
from steerkit.model import realize_full_operator, restrict_to_direction
from steerkit.serialize import (
    decode_matrix,
    encode_matrix,
    load_schema,
    load_spec,
    parse_spec_json,
    serialize_spec,
    spec_to_dict,
    validate,
)

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = Path(__file__).parent / "fixtures"


def test_packaged_schemas_match_docs():
    for name in ("spec", "report"):
        docs = json.loads((ROOT / "docs" / "schemas" / f"{name}.schema.json").read_text())
        assert docs == load_schema(name)


def test_matrix_encoding_round_trip(rng):
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    assert np.array_equal(decode_matrix(encode_matrix(m)), m)
    with pytest.raises(InvariantError):
        decode_matrix([[[1, 0], [0, 0]], [[0, 0]]])


@pytest.mark.parametrize("name", [n for n in catalog.names() if n != "haar"])
def test_full_spec_round_trip_is_exact(name):
    spec = catalog.build(name).spec
    text = serialize_spec(spec)
    again = parse_spec_json(text)
    assert serialize_spec(again) == text
    assert np.array_equal(realize_full_operator(again), realize_full_operator(spec))


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_lsi_round_trip_preserves_thresholds(seed):
    spec = random_lsi_spec(np.random.default_rng(seed))
    again = parse_spec_json(serialize_spec(spec))
    a, b = one_way_threshold(spec), one_way_threshold(again)
    assert a.beta == b.beta and a.gamma == b.gamma


def test_fixture_files_load():
    full = load_spec(FIXTURES / "chsh_full.json")
    assert abs(threshold(full).beta_overall - 2) < 1e-12
    lsi = load_spec(FIXTURES / "chsh_lsi.json")
    assert abs(one_way_threshold(lsi).beta - 2) < 1e-12


def test_schema_error_pointer():
    doc = spec_to_dict(restrict_to_direction(catalog.chsh().spec, (0,)))
    doc["terms"][1]["weight"] = "heavy"
    with pytest.raises(SchemaError) as exc:
        validate(doc, "spec")
    assert exc.value.pointer == "/terms/1/weight"


def test_unknown_kind_is_schema_error():
    with pytest.raises(SchemaError) as exc:
        parse_spec_json(json.dumps({"kind": "other"}))
    assert exc.value.pointer == "/"


def test_invalid_json_is_schema_error():
    with pytest.raises(SchemaError):
        parse_spec_json("{not json")


def test_non_hermitian_term_reports_its_index():
    doc = spec_to_dict(restrict_to_direction(catalog.chsh().spec, (0,)))
    doc["terms"][1]["op"][0][1] = [5.0, 0.0]
    with pytest.raises(InvariantError) as exc:
        parse_spec_json(json.dumps(doc))
    assert exc.value.invariant == "hermitian"
    assert "/terms/1" in str(exc.value)


def test_undeclared_setting_is_invariant_error():
    doc = spec_to_dict(restrict_to_direction(catalog.chsh().spec, (0,)))
    doc["terms"][0]["setting"] = "nowhere"
    with pytest.raises(InvariantError, match="declared-setting"):
        parse_spec_json(json.dumps(doc))


def test_non_psd_povm_effect_is_invariant_error():
    doc = spec_to_dict(catalog.pironio(3).spec)
    eff = doc["settings"][1][1]["effects"]
    eff[0][0][0] = [1.5, 0.0]
    with pytest.raises(InvariantError) as exc:
        parse_spec_json(json.dumps(doc))
    assert "/settings/1/1" in str(exc.value)
