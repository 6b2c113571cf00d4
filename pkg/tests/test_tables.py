"""Unit tests for the bundled reference tables and printed-error parsing."""

import shutil

import numpy as np
import pytest

from blasius_net import (
    available_table_ids,
    load_table,
    parse_printed_error,
    relative_error,
)
from blasius_net.tables import FIXTURES_ENV_VAR, fixtures_dir

EXPECTED_ROWS = {"T1": 12, "T2": 16, "T3": 16, "T4": 16, "T5": 28, "T6": 19, "T7": 19, "T8": 19}
EXPECTED_QUANTITY = {"T1": "f", "T2": "f", "T3": "fp", "T4": "fpp",
                     "T5": "f", "T6": "f", "T7": "fp", "T8": "fpp"}


def test_available_ids():
    assert available_table_ids() == ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8")


def test_table_shapes_and_quantities():
    for table_id in available_table_ids():
        table = load_table(table_id)
        assert table.table_id == table_id
        assert table.quantity == EXPECTED_QUANTITY[table_id]
        rows = EXPECTED_ROWS[table_id]
        assert len(table.etas) == rows
        assert len(table.own_values) == rows
        assert np.all(np.diff(table.etas) > 0)
        for column in table.references:
            assert len(column.values) == rows
            assert len(column.printed_errors) == rows


def test_load_accepts_int_and_bare_digit():
    assert load_table(2).table_id == "T2"
    assert load_table("2").table_id == "T2"
    assert load_table("T2").table_id == "T2"
    with pytest.raises(ValueError):
        load_table("T9")
    with pytest.raises(ValueError):
        load_table(0)


def test_spot_values_are_digit_exact():
    t2 = load_table("T2")
    i = int(np.nonzero(t2.etas == 7.0)[0][0])
    assert t2.own_values[i] == 5.279438
    assert t2.column("fixed_point").values[i] == 5.27924
    assert t2.column("block_method").values[i] == 5.27922958631
    assert t2.column("block_method").printed_errors[i].text == "3.94e-5"

    t4 = load_table("T4")
    assert t4.etas[0] == 0.0
    assert t4.own_values[0] == 0.3327300
    assert t4.column("block_method").values[0] == 0.332056697280

    t1 = load_table("T1")
    assert t1.etas[0] == 0.2
    assert t1.column("howarth").values[0] == 0.00664


def test_column_lookup():
    table = load_table("T2")
    assert table.column(0).label == "fixed_point"
    assert table.column(-1).label == "block_method"
    assert table.column("block_method").label == "block_method"
    with pytest.raises(KeyError):
        table.column("nope")
    with pytest.raises(IndexError):
        table.column(5)


def test_restrict_trims_rows():
    t5 = load_table("T5")
    trimmed = t5.restrict(6.0)
    assert trimmed.etas[-1] <= 6.0
    assert len(trimmed.etas) < len(t5.etas)
    assert len(trimmed.own_values) == len(trimmed.etas)
    for column in trimmed.references:
        assert len(column.values) == len(trimmed.etas)
    assert len(t5.restrict(1000.0).etas) == len(t5.etas)


def test_parse_printed_error_units():
    cases = {
        "2.01e-3": (2.01e-3, 1e-5),
        "3.75e-5": (3.75e-5, 1e-7),
        "2.1e-5": (2.1e-5, 1e-6),
        "4.e-7": (4e-7, 1e-7),
        "8.e-1": (0.8, 1e-1),
    }
    for text, (value, unit) in cases.items():
        parsed = parse_printed_error(text)
        assert parsed.text == text
        assert parsed.value == pytest.approx(value, rel=1e-12)
        assert parsed.unit == pytest.approx(unit, rel=1e-12)
    with pytest.raises(ValueError):
        parse_printed_error("abc")


def test_printed_errors_match_recomputation():
    # every printed mismatch column must be reproducible from the two value
    # columns it compares, to within one unit in its last printed digit
    checked = mismatched = 0
    for table_id in available_table_ids():
        table = load_table(table_id)
        for column in table.references:
            for own, ref, printed in zip(table.own_values, column.values, column.printed_errors):
                if printed is None:
                    continue
                checked += 1
                recomputed = relative_error(own, ref)
                if abs(recomputed - printed.value) > printed.unit:
                    mismatched += 1
    assert checked > 150
    assert mismatched <= 0.05 * checked


def test_fixture_dir_override(tmp_path, monkeypatch):
    copy = tmp_path / "fixtures"
    shutil.copytree(fixtures_dir(), copy)
    monkeypatch.setenv(FIXTURES_ENV_VAR, str(copy))
    assert fixtures_dir() == copy
    assert load_table("T1").table_id == "T1"
    empty = tmp_path / "empty"
    empty.mkdir()
    monkeypatch.setenv(FIXTURES_ENV_VAR, str(empty))
    with pytest.raises(FileNotFoundError):
        load_table("T1")
