"""Deterministic JSON encoding and the on-disk document formats."""

import json
import math

import numpy as np
import pytest

from ggmsep import CovarianceMatrix, EdgeSet, PrecisionMatrix, random_sparse_precision
from ggmsep.serialization import (
    dumps,
    edge_set_doc,
    edge_set_from_doc,
    format_float,
    load_candidates,
    load_precision,
    matrix_doc,
    precision_from_doc,
    write_json,
)


class TestFormatFloat:
    @pytest.mark.parametrize(
        "value",
        [0.0, -0.0, 1.0, 2.0, 0.5, 1 / 3, math.pi, 1e-300, 6.02e23, -1.7976931348623157e308],
    )
    def test_roundtrip_exact(self, value):
        text = format_float(value)
        assert float(text) == value or (value == 0.0 and float(text) == 0.0)
        # bit-exact, including signed zero
        assert math.copysign(1.0, float(text)) == math.copysign(1.0, value)

    def test_integral_values_stay_floats(self):
        assert format_float(2.0) == "2.0"
        assert json.loads(format_float(2.0)) == 2.0

    def test_non_finite_tokens(self):
        assert format_float(math.inf) == "Infinity"
        assert format_float(-math.inf) == "-Infinity"
        assert format_float(math.nan) == "NaN"
        assert math.isinf(json.loads(format_float(math.inf)))


class TestDumps:
    def test_sorted_keys_and_stable_bytes(self):
        doc = {"b": [1, 2.5, None, True], "a": {"y": 0.1, "x": "text"}}
        first = dumps(doc)
        second = dumps({"a": {"x": "text", "y": 0.1}, "b": [1, 2.5, None, True]})
        assert first == second
        assert first.index('"a"') < first.index('"b"')

    def test_numpy_scalars(self):
        doc = {"i": np.int64(3), "f": np.float64(0.25), "b": np.bool_(True)}
        assert json.loads(dumps(doc)) == {"i": 3, "f": 0.25, "b": True}

    def test_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            dumps({"x": object()})

    def test_parses_back(self):
        doc = {"values": [1.0, -2.5, 1e-12], "empty": [], "none": None}
        assert json.loads(dumps(doc)) == doc


class TestMatrixDocuments:
    def test_roundtrip_bit_identical(self):
        theta = random_sparse_precision(6, np.random.default_rng(0))
        doc = json.loads(dumps(matrix_doc(theta)))
        again = precision_from_doc(doc)
        assert np.array_equal(again.matrix, theta.matrix)

    def test_row_major_layout(self):
        theta = PrecisionMatrix([[2.0, 0.5], [0.5, 3.0]])
        assert matrix_doc(theta)["entries"] == [2.0, 0.5, 0.5, 3.0]

    @pytest.mark.parametrize(
        "doc",
        [
            [],
            {"p": 2},
            {"p": 2, "entries": [1.0, 0.0, 0.0]},
            {"p": 1, "entries": [1.0]},
            {"p": True, "entries": [1.0, 0.0, 0.0, 1.0]},
            {"p": 2, "entries": [1.0, 0.0, 0.0, "x"]},
            {"p": 2, "entries": [1.0, 0.0, 0.0, 1.0], "extra": 1},
        ],
    )
    def test_malformed_documents_rejected(self, doc):
        with pytest.raises(ValueError):
            precision_from_doc(doc)

    def test_load_from_file(self, tmp_path):
        theta = random_sparse_precision(4, np.random.default_rng(1))
        path = write_json(tmp_path / "theta.json", matrix_doc(theta))
        assert np.array_equal(load_precision(path).matrix, theta.matrix)


class TestEdgeSetDocuments:
    def test_roundtrip(self):
        edges = EdgeSet(5, [(3, 1), (0, 4)])
        doc = edge_set_doc(edges)
        assert doc == {"p": 5, "edges": [[0, 4], [1, 3]]}
        assert edge_set_from_doc(json.loads(dumps(doc))) == edges

    def test_malformed_rejected(self):
        with pytest.raises(ValueError):
            edge_set_from_doc({"p": 3, "edges": [[0, 1, 2]]})
        with pytest.raises(ValueError):
            edge_set_from_doc({"p": 3, "edges": [[0, 0]]})
        with pytest.raises(ValueError):
            edge_set_from_doc({"p": 3, "edges": "nope"})

    def test_candidates_file(self, tmp_path):
        docs = [edge_set_doc(EdgeSet(3, [(0, 1)])), edge_set_doc(EdgeSet(3))]
        path = tmp_path / "candidates.json"
        path.write_text(dumps(docs))
        loaded = load_candidates(path)
        assert loaded == [EdgeSet(3, [(0, 1)]), EdgeSet(3)]
        with pytest.raises(ValueError):
            load_candidates(write_json(tmp_path / "empty.json", []))
