"""Tests for formatting functions."""

import io
import json
import math

import numpy as np
import pytest

from loggamma.formatting import (
    Color,
    emit_records,
    flatten_record,
    format_cell,
    format_number,
    is_pretty_output,
    render_table,
    short_number,
    summary_rows,
    to_csv,
    to_json,
)


class _Tty(io.StringIO):
    def isatty(self):
        return True


class TestFormatNumber:
    def test_seventeen_digits(self):
        assert format_number(0.1) == "0.10000000000000001"
        assert float(format_number(math.pi)) == math.pi

    def test_infinities(self):
        assert format_number(math.inf) == "inf"
        assert format_number(-math.inf) == "-inf"

    def test_nan(self):
        assert format_number(math.nan) == "nan"

    def test_integers_and_bools(self):
        assert format_number(42) == "42"
        assert format_number(np.int64(7)) == "7"
        assert format_number(True) == "true"
        assert format_number(np.bool_(False)) == "false"


class TestToJson:
    def test_record_is_valid_json(self):
        record = {"quantity": "rate", "inputs": {"mu": 2.0}, "value": 1.5, "minimizers": [0.25, 1.0]}
        assert json.loads(to_json(record)) == record

    def test_infinity_is_string(self):
        assert json.loads(to_json({"value": math.inf})) == {"value": "inf"}

    def test_numpy_values(self):
        line = to_json({"a": np.float64(0.5), "b": np.array([1.0, 2.0]), "c": np.bool_(True)})
        assert json.loads(line) == {"a": 0.5, "b": [1.0, 2.0], "c": True}

    def test_single_line(self):
        assert "\n" not in to_json({"rows": [{"x": 1}, {"x": 2}]})

    def test_unsupported_type(self):
        with pytest.raises(TypeError):
            to_json({"x": object()})


class TestCsv:
    def test_flatten_record(self):
        assert flatten_record({"a": 1, "b": {"c": 2, "d": {"e": 3}}}) == {"a": 1, "b.c": 2, "b.d.e": 3}

    def test_format_cell(self):
        assert format_cell(None) == ""
        assert format_cell([1.0, 2]) == "1;2"
        assert format_cell("x") == "x"
        assert format_cell(math.inf) == "inf"

    def test_union_of_headers(self):
        text = to_csv([{"i": 0, "logw": 0.5}, {"i": 1, "extra": "y"}])
        lines = text.splitlines()
        assert lines[0] == "i,logw,extra"
        assert lines[1] == "0,0.5,"
        assert lines[2] == "1,,y"

    def test_nested_inputs(self):
        text = to_csv([{"quantity": "q", "inputs": {"mu": 2.0, "s": 1.0}}])
        assert text.splitlines()[0] == "quantity,inputs.mu,inputs.s"


class TestEmitRecords:
    def test_stdout_and_file(self, tmp_path, capsys):
        out = tmp_path / "records.jsonl"
        emit_records([{"x": 1}, {"x": 2}], "json", str(out))
        captured = capsys.readouterr().out
        assert captured == '{"x": 1}\n{"x": 2}\n'
        assert out.read_text(encoding="utf-8") == captured

    def test_csv(self, capsys):
        emit_records([{"i": 0, "j": 1, "logw": -0.25}], "csv")
        assert capsys.readouterr().out == "i,j,logw\n0,1,-0.25\n"


class TestColor:
    def test_disabled_when_not_a_tty(self):
        assert Color.passed("ok", io.StringIO()) == "ok"

    def test_enabled_on_tty(self, monkeypatch):
        monkeypatch.delenv("NO_COLOR", raising=False)
        styled = Color.failed("FAIL", _Tty())
        assert styled.startswith(Color.BOLD)
        assert styled.endswith(Color.RESET)

    def test_no_color_env(self, monkeypatch):
        monkeypatch.setenv("NO_COLOR", "1")
        assert Color.passed("x", _Tty()) == "x"

    def test_only_check_styles(self):
        assert not hasattr(Color, "dim")
        assert not hasattr(Color, "BOLD_GREEN")


class TestRenderTable:
    def test_tsv(self):
        stream = io.StringIO()
        render_table(["a", "b"], [["1", "2"]], pretty=False, stream=stream)
        assert stream.getvalue() == "a\tb\n1\t2\n"

    def test_pretty_alignment(self):
        stream = io.StringIO()
        render_table(["name", "v"], [["x", "10"], ["long", "2"]], pretty=True, stream=stream)
        assert stream.getvalue().splitlines() == ["name  v", "x     10", "long  2"]

    def test_cell_formatter(self):
        stream = io.StringIO()
        render_table(["r"], [["ok"]], pretty=True, cell_formatters=[lambda cell, _row: cell.upper()], stream=stream)
        assert stream.getvalue().splitlines()[1] == "OK"


class TestIsPrettyOutput:
    def test_piped(self):
        assert is_pretty_output(io.StringIO()) is False

    def test_terminal(self):
        assert is_pretty_output(_Tty()) is True


class TestSummaryRows:
    def test_short_number(self):
        assert short_number(0.123456789) == "0.123457"
        assert short_number(True) == "yes"
        assert short_number(math.inf) == "inf"
        assert short_number("n") == "n"

    def test_rows(self):
        headers, cells = summary_rows([{"n": 64, "gap": 0.5}, {"n": 512, "gap": 0.25}])
        assert headers == ["n", "gap"]
        assert cells == [["64", "0.5"], ["512", "0.25"]]
