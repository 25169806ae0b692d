import numpy as np
import pytest

from src.data.errors import DataFormatError
from src.data.source import DTensorFileSource, read_clustering, read_tensor
from src.data.writers import write_clustering, write_tensor
from src.model.types import Clustering


def test_tensor_roundtrip_is_exact(tmp_path, rng):
    tensor = rng.standard_normal((3, 4, 2)) * 1e-7 + np.pi
    path = tmp_path / "x.dtensor"
    write_tensor(tensor, path)
    restored = read_tensor(path)
    assert restored.shape == (3, 4, 2)
    assert np.array_equal(restored, tensor)


def test_scalar_tensor_roundtrip(tmp_path):
    path = tmp_path / "scalar.dtensor"
    write_tensor(np.array([2.5]), path)
    assert path.read_text().splitlines() == ["DTENSOR 1", "1", "1", "2.5"]
    np.testing.assert_array_equal(read_tensor(path), [2.5])


def test_storage_order_and_scientific_notation(tmp_path):
    path = tmp_path / "x.dtensor"
    path.write_text("DTENSOR 1\n2\n2 2\n1\n2e0\n3.0\n4E+00\n")
    np.testing.assert_array_equal(read_tensor(path), [[1.0, 2.0], [3.0, 4.0]])


def test_truncated_file_reports_line(tmp_path):
    path = tmp_path / "x.dtensor"
    path.write_text("DTENSOR 1\n2\n2 2\n1\n2\n3\n")
    with pytest.raises(DataFormatError) as excinfo:
        read_tensor(path)
    assert excinfo.value.line == 7


@pytest.mark.parametrize(
    "text, line",
    [
        ("DTENSOR 2\n1\n1\n0\n", 1),
        ("DTENSOR 1\n2\n3\n0\n", 3),
        ("DTENSOR 1\n1\n2\n0\nabc\n", 5),
        ("DTENSOR 1\n1\n2\n0\nnan\n", 5),
        ("DTENSOR 1\n1\n1\n0\n1\n", 5),
    ],
)
def test_malformed_tensors(tmp_path, text, line):
    path = tmp_path / "x.dtensor"
    path.write_text(text)
    with pytest.raises(DataFormatError) as excinfo:
        read_tensor(path)
    assert excinfo.value.line == line


def test_clustering_roundtrip(tmp_path):
    z = Clustering.from_labels([[0, 1, 1, 0], [2, 0, 1]], [2, 3])
    path = tmp_path / "z.txt"
    write_clustering(z, path)
    assert path.read_text().splitlines()[:3] == ["mode 1 2", "1", "2"]
    restored = read_clustering(path)
    assert restored.num_clusters == (2, 3)
    for mode in range(2):
        np.testing.assert_array_equal(restored.assignments[mode], z.assignments[mode])


def test_empty_clustering_file(tmp_path):
    path = tmp_path / "z.txt"
    path.write_text("\n\n")
    with pytest.raises(DataFormatError):
        read_clustering(path)


def test_label_out_of_range(tmp_path):
    path = tmp_path / "z.txt"
    path.write_text("mode 1 2\n1\n3\n")
    with pytest.raises(DataFormatError) as excinfo:
        read_clustering(path)
    assert excinfo.value.line == 3


def test_format_errors_are_value_errors(tmp_path):
    path = tmp_path / "z.txt"
    path.write_text("1\n")
    with pytest.raises(ValueError):
        read_clustering(path)


def test_file_source(tmp_path):
    path = tmp_path / "x.dtensor"
    write_tensor(np.eye(3), path)
    np.testing.assert_array_equal(DTensorFileSource(path).fetch_tensor(), np.eye(3))
