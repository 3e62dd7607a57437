"""File parsing and result rendering."""

import json
import os

import numpy as np
import pytest

from schurtransform import io as sio
from schurtransform import statistics as st
from schurtransform import transform as tr
from schurtransform.exceptions import DataError


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestPointsFile:
    def test_whitespace_and_commas(self, tmp_path):
        path = write(tmp_path, "a.txt", "1 2 3\n4,5,6\n7, 8 ,9\n")
        got = sio.read_points_file(path)
        assert got.shape == (3, 3)
        assert np.array_equal(got, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])

    def test_comments_and_blanks(self, tmp_path):
        path = write(
            tmp_path,
            "a.txt",
            "# header\n\n1 2\n3 4  # trailing note\n\n# done\n",
        )
        got = sio.read_points_file(path)
        assert np.array_equal(got, [[1, 2], [3, 4]])

    def test_scientific_notation(self, tmp_path):
        path = write(tmp_path, "a.txt", "1e-3 -2.5E+2\n")
        got = sio.read_points_file(path)
        assert np.array_equal(got, [[0.001, -250.0]])

    def test_bad_token_located(self, tmp_path):
        path = write(tmp_path, "bad.txt", "1 2\n3 oops\n")
        with pytest.raises(DataError, match=r"bad\.txt:2.*oops"):
            sio.read_points_file(path)

    def test_non_finite_rejected(self, tmp_path):
        path = write(tmp_path, "inf.txt", "1 2\ninf 4\n")
        with pytest.raises(DataError, match=r"inf\.txt:2.*non-finite"):
            sio.read_points_file(path)
        path = write(tmp_path, "nan.txt", "nan 2\n")
        with pytest.raises(DataError, match=r"nan\.txt:1"):
            sio.read_points_file(path)

    def test_ragged_rows_located(self, tmp_path):
        path = write(tmp_path, "ragged.txt", "1 2 3\n4 5\n")
        with pytest.raises(DataError, match=r"ragged\.txt:2.*2 columns, expected 3"):
            sio.read_points_file(path)

    def test_empty_file(self, tmp_path):
        path = write(tmp_path, "empty.txt", "# nothing\n\n")
        with pytest.raises(DataError, match="no data rows"):
            sio.read_points_file(path)


class TestManifest:
    def test_relative_paths_and_labels(self, tmp_path):
        sub = tmp_path / "data"
        sub.mkdir()
        write(sub, "x.txt", "1 2\n")
        write(sub, "y.txt", "3 4\n")
        manifest = write(tmp_path, "m.txt", "data/x.txt\tfirst\ndata/y.txt\n")
        entries = sio.read_manifest(manifest)
        assert entries == [
            (str(sub / "x.txt"), "first"),
            (str(sub / "y.txt"), None),
        ]

    def test_comments_skipped(self, tmp_path):
        manifest = write(tmp_path, "m.txt", "# files\na.txt\n\nb.txt\t# not a label\n")
        entries = sio.read_manifest(manifest)
        assert [os.path.basename(p) for p, _ in entries] == ["a.txt", "b.txt"]
        assert entries[1][1] is None

    def test_empty_manifest(self, tmp_path):
        manifest = write(tmp_path, "m.txt", "# nothing here\n")
        with pytest.raises(DataError, match="empty manifest"):
            sio.read_manifest(manifest)


class TestSeries:
    def test_from_file_list(self, tmp_path):
        a = write(tmp_path, "alpha.txt", "1 2\n3 4\n")
        b = write(tmp_path, "beta.txt", "5 6\n7 8\n")
        series = sio.read_series([a, b])
        assert series.values.shape == (2, 2, 2)
        assert series.labels == ("alpha", "beta")
        assert np.array_equal(series.values[:, 0], [[1, 2], [3, 4]])
        assert np.array_equal(series.values[:, 1], [[5, 6], [7, 8]])

    def test_from_manifest_with_labels(self, tmp_path):
        write(tmp_path, "a.txt", "1 2\n")
        write(tmp_path, "b.txt", "3 4\n")
        manifest = write(tmp_path, "m.txt", "a.txt\tleft\nb.txt\n")
        series = sio.read_series(manifest)
        assert series.labels == ("left", "b")

    def test_explicit_labels_override(self, tmp_path):
        a = write(tmp_path, "a.txt", "1 2\n")
        b = write(tmp_path, "b.txt", "3 4\n")
        series = sio.read_series([a, b], labels=["u", "v"])
        assert series.labels == ("u", "v")
        with pytest.raises(ValueError, match="labels for"):
            sio.read_series([a, b], labels=["u"])

    def test_shape_mismatch_names_file(self, tmp_path):
        a = write(tmp_path, "a.txt", "1 2\n3 4\n")
        b = write(tmp_path, "b.txt", "5 6\n")
        with pytest.raises(DataError, match=r"b\.txt.*does not match"):
            sio.read_series([a, b])

    def test_references(self, tmp_path):
        path = write(tmp_path, "refs.txt", "0 0\n1 1\n")
        refs = sio.read_references(path, 2, 2)
        assert np.array_equal(refs, [[0, 0], [1, 1]])
        with pytest.raises(DataError, match=r"refs\.txt.*expected \(3, 2\)"):
            sio.read_references(path, 3, 2)


class TestPartitionStrings:
    def test_round_trip(self):
        for lam in [(3,), (2, 1), (1, 1, 1, 1), (4, 2, 1)]:
            assert sio.parse_partition(sio.partition_str(lam)) == lam

    def test_bare_form(self):
        assert sio.parse_partition("2,1") == (2, 1)

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            sio.parse_partition("(a,b)")


@pytest.fixture(scope="module")
def small_results():
    rng = np.random.default_rng(7)
    series = st.as_series(rng.normal(size=(5, 3, 2)), labels=("p", "q", "r"))
    tensor = st.sample_covariance_tensor(series)
    result = tr.schur_transform(tensor)
    content = tr.schur_content(series, 2)
    cls = tr.classify(
        {"a": series, "b": st.as_series(rng.normal(size=(5, 3, 2)))},
        rng.normal(size=(5, 2)),
        2,
    )
    return result, content, cls


class TestStruct:
    def test_transform_round_trip(self, small_results, tmp_path):
        result, _, _ = small_results
        text = sio.write_result(result, format="struct")
        doc = sio.parse_struct(text)
        assert doc == sio.document_for(result)
        assert doc["kind"] == "schur-transform"
        # full precision survives the text form
        for lam in result.partitions:
            assert doc["amplitudes"][sio.partition_str(lam)] == result.amplitudes[lam]

    def test_content_round_trip(self, small_results):
        _, content, _ = small_results
        doc = sio.parse_struct(sio.write_result(content, format="struct"))
        assert doc == sio.document_for(content)
        assert doc["kind"] == "schur-content"
        assert doc["mode"] == "all"
        assert len(doc["subsets"]) == 3
        assert doc["subsets"][0]["members"] == ["p", "q"]
        col = doc["amplitudes"]["(2)"]
        assert col == [float(v) for v in content.amplitudes[:, 0]]

    def test_classification_round_trip(self, small_results):
        _, _, cls = small_results
        doc = sio.parse_struct(sio.write_result(cls, format="struct"))
        assert doc == sio.document_for(cls)
        assert doc["kind"] == "classification"
        assert doc["label"] in doc["classes"]
        assert set(doc["scores"][doc["label"]]) == {"l1", "l2"}

    def test_source_recorded(self, small_results):
        result, _, _ = small_results
        doc = sio.document_for(result, source=["a.txt", "b.txt"])
        assert doc["source"] == ["a.txt", "b.txt"]

    def test_struct_is_json(self, small_results):
        result, _, _ = small_results
        text = sio.write_result(result, format="struct")
        json.loads(text)


class TestTableAndCsv:
    def test_table_lists_partitions(self, small_results):
        result, content, cls = small_results
        text = sio.render_table(result)
        assert "(3)" in text and "(2,1)" in text and "residual" in text
        text = sio.render_table(content)
        assert "p+q" in text and "q+r" in text
        text = sio.render_table(cls)
        assert text.startswith("assigned class:")
        assert "l1" in text and "l2" in text

    def test_plot_csv_shape(self, small_results):
        _, content, _ = small_results
        lines = sio.render_plot_csv(content).splitlines()
        assert lines[0] == "partition,subset,members,amplitude"
        # 2 partitions x 3 subsets
        assert len(lines) == 1 + 2 * 3
        first = lines[1].split(",")
        assert first[0] == "(2)" and first[2] == "p+q"
        float(first[3])

    def test_plot_csv_transform(self, small_results):
        result, _, _ = small_results
        lines = sio.render_plot_csv(result).splitlines()
        assert len(lines) == 1 + len(result.partitions)

    def test_write_to_file(self, small_results, tmp_path):
        result, _, _ = small_results
        out = tmp_path / "r.json"
        text = sio.write_result(result, format="struct", out=str(out))
        assert out.read_text(encoding="utf-8") == text

    def test_unknown_format(self, small_results):
        result, _, _ = small_results
        with pytest.raises(ValueError, match="unknown format"):
            sio.write_result(result, format="yaml")
