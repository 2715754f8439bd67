import numpy as np
import pytest

from tsclust.errors import ConfigError, DataError, ParseError
from tsclust.io import (
    labels_path_for,
    load_dataset,
    load_labels,
    read_config,
    read_trace,
    save_dataset,
    write_trace,
)
from tsclust.synthetic import SyntheticSpec, generate_synthetic


# ---------------------------------------------------------------- generator

def test_noiseless_points_lie_in_their_subspace():
    x, labels, bases = generate_synthetic(SyntheticSpec(noise_sigma=0.0, seed=1), return_bases=True)
    for j, q in enumerate(bases):
        pts = x[:, labels == j]
        resid = pts - q @ (q.T @ pts)
        assert np.abs(resid).max() <= 1e-10


def test_block_ranks():
    x, labels = generate_synthetic(SyntheticSpec(k_subspaces=3, ambient_dim=30, subspace_dim=3,
                                                 points_per_subspace=20, noise_sigma=0.0))
    for j in range(3):
        assert np.linalg.matrix_rank(x[:, labels == j], tol=1e-8) == 3


def test_unit_norm_columns_and_shape():
    x, labels = generate_synthetic(SyntheticSpec())
    assert x.shape == (30, 60)
    np.testing.assert_allclose(np.linalg.norm(x, axis=0), 1.0, atol=1e-14)
    np.testing.assert_array_equal(np.bincount(labels), [20, 20, 20])


def test_seeds():
    a, la = generate_synthetic(SyntheticSpec(seed=1))
    b, lb = generate_synthetic(SyntheticSpec(seed=2))
    c, _ = generate_synthetic(SyntheticSpec(seed=1))
    assert a.shape == b.shape and not np.allclose(a, b)
    np.testing.assert_array_equal(la, lb)
    np.testing.assert_array_equal(a, c)


def test_subspace_dim_must_be_below_ambient():
    with pytest.raises(ConfigError):
        SyntheticSpec(ambient_dim=3, subspace_dim=3)


# ---------------------------------------------------------------- dataset files

def test_small_csv_with_labels(tmp_path):
    p = tmp_path / "pts.csv"
    p.write_text("0,1\n1.5,2\n-3,4e-1\n5,6\n")
    labels_path_for(p).write_text("0\n0\n1\n1\n")
    x, labels = load_dataset(p)
    assert x.shape == (2, 4)
    np.testing.assert_array_equal(x[:, 2], [-3.0, 0.4])
    np.testing.assert_array_equal(labels, [0, 0, 1, 1])


def test_ragged_rows_name_line(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,2,3\n4,5,6\n7,8\n")
    with pytest.raises(ParseError) as err:
        load_dataset(p)
    assert err.value.line == 3
    assert "line 3" in str(err.value)


def test_non_numeric_names_line_and_column(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,2\n3,abc\n")
    with pytest.raises(ParseError) as err:
        load_dataset(p)
    assert (err.value.line, err.value.column) == (2, 2)


def test_label_length_mismatch(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("1,2\n3,4\n5,6\n")
    lp = tmp_path / "l.txt"
    lp.write_text("0\n1\n")
    with pytest.raises(DataError):
        load_dataset(p, lp)


def test_missing_files(tmp_path):
    with pytest.raises(ConfigError):
        load_dataset(tmp_path / "nope.csv")
    p = tmp_path / "d.csv"
    p.write_text("1\n2\n3\n")
    x, labels = load_dataset(p)
    assert labels is None and x.shape == (1, 3)
    with pytest.raises(ConfigError):
        load_dataset(p, tmp_path / "missing.labels")


def test_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.standard_normal((7, 25)) * 10.0 ** rng.integers(-8, 8, (7, 25))
    labels = rng.integers(0, 5, 25)
    p = save_dataset(tmp_path / "rt.csv", x, labels)
    y, lab = load_dataset(p)
    np.testing.assert_allclose(y, x, rtol=1e-15, atol=0)
    np.testing.assert_array_equal(lab, labels)


def test_bad_label_line(tmp_path):
    p = tmp_path / "l.labels"
    p.write_text("0\n1\nx\n")
    with pytest.raises(ParseError) as err:
        load_labels(p)
    assert err.value.line == 3


# ---------------------------------------------------------------- trace / config

def test_trace_round_trip(tmp_path):
    trace = [(0, 1.0), (1, 0.5), (2, 0.1234567890123)]
    p = write_trace(tmp_path / "trace.csv", trace)
    assert p.read_text().splitlines()[0] == "iter,normalized_objective"
    assert read_trace(p) == trace
    assert read_trace(tmp_path) == trace


def test_config_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nvariant = TLRR\nmu-c: 0.01  # inline\n\nk=3\n")
    assert read_config(p) == {"variant": "TLRR", "mu_c": "0.01", "k": "3"}
    p.write_text("variant TLRR\n")
    with pytest.raises(ConfigError):
        read_config(p)
