"""Tests for ingestion and the CSV/JSON file formats."""

import logging

import numpy as np
import pytest

from ftsboot.core import CovSurface, FunctionalSample, Grid
from ftsboot.io import (
    IngestSpec,
    default_grid_for_period,
    ingest_series,
    read_long_series,
    read_sample,
    read_surface,
    write_metadata,
    write_sample,
    write_surface,
)


class TestRoundTrips:
    def test_sample_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(5)
        grid = Grid(np.sort(rng.uniform(0.0, 1.0, 9)))
        sample = FunctionalSample(rng.standard_normal((7, 9)) * 1e3, grid)
        path = tmp_path / "sample.csv"
        write_sample(path, sample)
        back = read_sample(path)
        assert np.array_equal(back.values, sample.values)
        assert np.array_equal(back.grid.points, sample.grid.points)

    def test_surface_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(6)
        grid = Grid.uniform(0.0, 1.0, 5)
        a = rng.standard_normal((5, 5))
        surface = CovSurface(a + a.T, grid)
        path = tmp_path / "surface.csv"
        write_surface(path, surface)
        back = read_surface(path)
        assert np.array_equal(back.values, surface.values)

    def test_awkward_floats_survive(self, tmp_path):
        grid = Grid(np.array([0.1, 0.2, 0.30000000000000004]))
        values = np.array([[1 / 3, np.pi, np.nextafter(1.0, 2.0)]])
        path = tmp_path / "s.csv"
        write_sample(path, FunctionalSample(values, grid))
        back = read_sample(path)
        assert np.array_equal(back.values, values)
        assert np.array_equal(back.grid.points, grid.points)

    def test_short_file_rejected(self, tmp_path):
        path = tmp_path / "only_header.csv"
        path.write_text("0.0,0.5,1.0\n")
        with pytest.raises(ValueError, match="data row"):
            read_sample(path)

    def test_metadata_bytes_are_deterministic(self, tmp_path):
        payload = {"b": [1, 2], "a": 0.5, "nested": {"z": 1, "y": 2}}
        p1, p2 = tmp_path / "m1.json", tmp_path / "m2.json"
        write_metadata(p1, payload)
        write_metadata(p2, payload)
        assert p1.read_bytes() == p2.read_bytes()


class TestReadLongSeries:
    def test_headerless_single_column(self, tmp_path):
        path = tmp_path / "raw.csv"
        path.write_text("1.5\n2.5\n3.5\n")
        values = read_long_series(path)
        assert np.array_equal(values, [1.5, 2.5, 3.5])

    def test_header_skipped_without_column(self, tmp_path):
        path = tmp_path / "raw.csv"
        path.write_text("pm10\n1.0\n2.0\n")
        assert np.array_equal(read_long_series(path), [1.0, 2.0])

    def test_named_column(self, tmp_path):
        path = tmp_path / "raw.csv"
        path.write_text("date,pm10\n2001-01-01,4.5\n2001-01-01,5.5\n")
        assert np.array_equal(read_long_series(path, column="pm10"), [4.5, 5.5])

    def test_missing_column_name(self, tmp_path):
        path = tmp_path / "raw.csv"
        path.write_text("date,pm10\n2001-01-01,4.5\n")
        with pytest.raises(ValueError, match="'ozone' not found"):
            read_long_series(path, column="ozone")

    def test_na_tokens_become_nan(self, tmp_path):
        path = tmp_path / "raw.csv"
        path.write_text("v\n1.0\nNA\nnan\n\n2.0\n")
        values = read_long_series(path, column="v")
        assert values.size == 4
        assert np.isnan(values[1]) and np.isnan(values[2])

    def test_garbage_names_its_row(self, tmp_path):
        path = tmp_path / "raw.csv"
        path.write_text("v\n1.0\ntwelve\n")
        with pytest.raises(ValueError, match=r"row 3: could not parse 'twelve'"):
            read_long_series(path, column="v")


class TestIngest:
    def test_row_major_reshape(self):
        values = np.arange(8736.0)
        sample, dropped = ingest_series(values, IngestSpec(period=48))
        assert sample.n_curves == 182
        assert sample.n_points == 48
        assert dropped == ()
        assert np.array_equal(sample.values[0], np.arange(48.0))
        assert np.array_equal(sample.values[1], np.arange(48.0, 96.0))

    def test_half_hour_grid_for_period_48(self):
        grid = default_grid_for_period(48)
        assert grid.points[0] == 0.5
        assert grid.points[-1] == 24.0
        assert grid.size == 48

    def test_integer_grid_otherwise(self):
        grid = default_grid_for_period(24)
        assert np.array_equal(grid.points, np.arange(1.0, 25.0))

    def test_divisibility_error_message(self):
        with pytest.raises(
            ValueError, match=r"length 100 not divisible by period 48 \(remainder 4\)"
        ):
            ingest_series(np.zeros(100), IngestSpec(period=48))

    def test_missing_value_error_policy(self):
        values = np.zeros(96)
        values[50] = np.nan
        with pytest.raises(ValueError, match="missing value at position 51"):
            ingest_series(values, IngestSpec(period=48))

    def test_drop_whole_curve_policy(self, caplog):
        values = np.arange(144.0)
        values[50] = np.nan
        spec = IngestSpec(period=48, missing_policy="drop_whole_curve")
        with caplog.at_level(logging.WARNING, logger="ftsboot.io"):
            sample, dropped = ingest_series(values, spec)
        assert sample.n_curves == 2
        assert dropped == (1,)
        assert np.array_equal(sample.values[0], np.arange(48.0))
        assert np.array_equal(sample.values[1], np.arange(96.0, 144.0))
        assert any("dropping curve 1" in rec.getMessage() for rec in caplog.records)

    def test_all_curves_dropped(self):
        values = np.full(96, np.nan)
        spec = IngestSpec(period=48, missing_policy="drop_whole_curve")
        with pytest.raises(ValueError, match="no curves left"):
            ingest_series(values, spec)

    def test_spec_validation(self):
        with pytest.raises(ValueError, match="period"):
            IngestSpec(period=1)
        with pytest.raises(ValueError, match="missing_policy"):
            IngestSpec(period=48, missing_policy="interpolate")
