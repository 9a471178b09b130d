"""Config grammar, ring literals, CLI surface and report determinism."""

import json

import pytest
from click.testing import CliRunner

from uniortho.catalog import (
    default_catalog_text,
    first_irreducible_modulus,
    format_ring_spec,
    parse_ring_literal,
)
from uniortho.cli import main
from uniortho.config import parse_config
from uniortho.errors import ParseError, ValidationError
from uniortho.reporting import COLUMNS, render_csv, render_json, report_rows
from uniortho.rings import RingSpec, construct_ring


# ---------------------------------------------------------------------------
# config parsing


def test_parse_config_minimal():
    cfg = parse_config('[[ring]]\nkind = "Zps"\np = 3\ns = 2\n')
    assert len(cfg.rings) == 1
    entry = cfg.rings[0]
    assert entry.label == "Z9"
    assert entry.ring.cardinality == 9
    assert cfg.timeout_secs == 60.0
    assert cfg.format == "csv"


def test_parse_config_globals():
    cfg = parse_config(
        'timeout_secs = 5\nmax_card = 1000\nformat = "json"\nout = "r.json"\n'
        '[[ring]]\nkind = "ext"\np = 3\nmodulus = [1, 0, 1]\n'
    )
    assert cfg.timeout_secs == 5.0
    assert cfg.max_card == 1000
    assert cfg.format == "json"
    assert cfg.out == "r.json"
    assert cfg.rings[0].label == "F9"


def test_parse_config_rejects_unknown_keys():
    with pytest.raises(ValidationError, match="unknown config keys"):
        parse_config('bogus = 1\n[[ring]]\nkind = "Zps"\np = 3\n')
    with pytest.raises(ValidationError, match="unknown keys"):
        parse_config('[[ring]]\nkind = "Zps"\np = 3\nbogus = 1\n')


def test_parse_config_rejects_bad_values():
    with pytest.raises(ValidationError, match="at least one"):
        parse_config("timeout_secs = 5\n")
    with pytest.raises(ValidationError, match="kind is required"):
        parse_config("[[ring]]\np = 3\n")
    with pytest.raises(ValidationError, match="format"):
        parse_config('format = "xml"\n[[ring]]\nkind = "Zps"\np = 3\n')
    with pytest.raises(ValidationError, match="odd characteristic"):
        parse_config('[[ring]]\nkind = "Zps"\np = 2\n')
    with pytest.raises(ValidationError, match="reducible"):
        parse_config('[[ring]]\nkind = "ext"\np = 3\nmodulus = [0, 0, 1]\n')


def test_parse_config_syntax_error_has_position():
    with pytest.raises(ParseError) as excinfo:
        parse_config("[[ring]\nkind=3\n")
    assert excinfo.value.line == 1
    assert excinfo.value.column is not None


def test_duplicate_labels_are_disambiguated():
    cfg = parse_config(
        '[[ring]]\nkind = "ext"\np = 3\nmodulus = [1, 0, 1]\n'
        '[[ring]]\nkind = "ext"\np = 3\nmodulus = [2, 2, 1]\n'
    )
    assert [e.label for e in cfg.rings] == ["F9", "F9#2"]


def test_default_catalog_contents():
    cfg = parse_config(default_catalog_text())
    labels = [e.label for e in cfg.rings]
    assert labels == [
        "Z3", "Z5", "Z7", "Z9", "Z25", "Z27",
        "F9", "F25", "F27", "F3[t]/t^2", "F5[t]/t^2", "GR(9,2)",
    ]


# ---------------------------------------------------------------------------
# ring literals


@pytest.mark.parametrize(
    "literal,kind,cardinality",
    [
        ("Z9", "Zps", 9),
        ("Z27", "Zps", 27),
        ("F3", "Zps", 3),
        ("F25", "ext", 25),
        ("F27", "ext", 27),
        ("F3[t]/t^2", "chain", 9),
        ("F9[t]/t^2", "chain", 81),
        ("GR(9,2)", "GR", 81),
        ("Zps(3,2)", "Zps", 9),
        ("ext(3;1,0,1)", "ext", 9),
        ("chain(3;e=2)", "chain", 9),
        ("GR(3,2;1,0,1)", "GR", 81),
    ],
)
def test_parse_ring_literal(literal, kind, cardinality):
    spec = parse_ring_literal(literal)
    assert spec.kind == kind
    assert construct_ring(spec).cardinality == cardinality


def test_ring_literal_roundtrip():
    for literal in ("Z9", "F25", "F3[t]/t^2", "GR(9,2)", "chain(3;1,0,1;e=2)"):
        spec = parse_ring_literal(literal)
        assert parse_ring_literal(format_ring_spec(spec)) == spec


def test_parse_ring_literal_errors():
    for bad in ("Z12", "F10", "Q7", "GR(10,2)", "Zps(3)", "ext(3)"):
        with pytest.raises(ParseError):
            parse_ring_literal(bad)


def test_first_irreducible_modulus():
    assert first_irreducible_modulus(3, 2) == (1, 0, 1)
    assert first_irreducible_modulus(5, 2) == (1, 1, 1)
    assert first_irreducible_modulus(3, 3) == (1, 0, 2, 1)


# ---------------------------------------------------------------------------
# reporting


def _tiny_rows():
    from uniortho.orthosets import verify_closed_form

    ring = construct_ring(RingSpec("Zps", 3, 2))
    return list(verify_closed_form(ring).rows)


def test_report_rendering_round_trip():
    rows = report_rows(_tiny_rows())
    csv_text = render_csv(rows)
    lines = csv_text.splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert len(lines) == 3
    assert lines[1].startswith("v1,Z9,9,3,")
    assert csv_text.endswith("\n")

    data = json.loads(render_json(rows))
    assert len(data) == 2
    assert list(data[0].keys()) == list(COLUMNS)
    assert data[0]["elapsed_ms"] is None
    timed = report_rows(_tiny_rows(), timings=True)
    assert isinstance(timed[0]["elapsed_ms"], int)


def test_report_rows_are_sorted():
    rows = report_rows(list(reversed(_tiny_rows())))
    assert [r["form"] for r in rows] == ["diag(1,-1)", "diag(1,-z)"]


# ---------------------------------------------------------------------------
# CLI surface


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


def test_cli_ring_info_round_trip(runner):
    result = runner.invoke(main, ["ring-info", "GR(9,2)"])
    assert result.exit_code == 0
    info = dict(line.split("=", 1) for line in result.stdout.splitlines())
    assert info["cardinality"] == "81"
    assert info["maximal_ideal_size"] == "9"
    assert info["characteristic"] == "9"
    assert info["residue_field_order"] == "9"
    assert info["unit_squares"] == "36"
    respec = parse_ring_literal(info["spec"])
    assert construct_ring(respec).label == info["label"]


def test_cli_canon(runner):
    result = runner.invoke(main, ["canon", "Z9", "0,1;1,0"])
    assert result.exit_code == 0
    info = dict(line.split("=", 1) for line in result.stdout.splitlines())
    assert info["u"] == "1"
    assert info["verified"] == "true"
    assert info["canonical"] == "1,0;0,8"


def test_cli_canon_degenerate_exits_2(runner):
    result = runner.invoke(main, ["canon", "Z9", "1,0;0,3"])
    assert result.exit_code == 2


def test_cli_search(runner):
    result = runner.invoke(main, ["search", "Z9"])
    assert result.exit_code == 0
    info = dict(line.split("=", 1) for line in result.stdout.splitlines())
    assert info["max_size"] == "6"
    assert info["witness"] == "(1,1),(2,2),(4,4),(5,5),(7,7),(8,8)"


def test_cli_search_nonsquare_and_n3(runner):
    result = runner.invoke(main, ["search", "Z9", "--canonical", "nonsquare"])
    assert result.exit_code == 0
    assert "max_size=2" in result.stdout
    result = runner.invoke(main, ["search", "Z3", "--n", "3"])
    assert result.exit_code == 0
    assert "max_size=3" in result.stdout


def test_cli_enumerate(runner):
    result = runner.invoke(main, ["enumerate", "Z5"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert "count=2" in lines
    families = [line for line in lines if line.startswith("set=")]
    assert families == [
        "set=(1,1),(2,2),(3,3),(4,4) family=u*x,x",
        "set=(1,4),(2,3),(3,2),(4,1) family=u*x,x",
    ]


def test_cli_enumerate_pair_family_tags(runner):
    result = runner.invoke(main, ["enumerate", "Z9", "--canonical", "nonsquare"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert "max_size=2" in lines
    assert "count=216" in lines
    set_lines = [line for line in lines if line.startswith("set=")]
    assert len(set_lines) == 216
    assert all(line.endswith("family=pair") for line in set_lines)


def test_cli_search_with_form_literal_and_workers(runner):
    result = runner.invoke(main, ["search", "Z9", "--form", "0,1;1,0"])
    assert result.exit_code == 0
    assert "max_size=6" in result.stdout
    parallel = runner.invoke(
        main, ["search", "Z9", "--form", "0,1;1,0", "--workers", "2"]
    )
    assert parallel.exit_code == 0
    assert "max_size=6" in parallel.stdout


def test_cli_enumerate_refuses_large_rings_by_default(runner):
    result = runner.invoke(main, ["enumerate", "GR(9,2)"])
    assert result.exit_code == 2  # |R| = 81 > 27 needs an explicit bound


def test_cli_verify_toolarge_exits_2(runner, tmp_path):
    cfg = tmp_path / "big.toml"
    cfg.write_text('max_card = 100\n[[ring]]\nkind = "Zps"\np = 3\ns = 10\n')
    result = runner.invoke(main, ["verify", "--config", str(cfg)])
    assert result.exit_code == 2


def test_cli_verify_timeout_exits_3(runner, tmp_path):
    cfg = tmp_path / "slow.toml"
    cfg.write_text('timeout_secs = 1e-9\n[[ring]]\nkind = "Zps"\np = 5\ns = 2\n')
    result = runner.invoke(main, ["verify", "--config", str(cfg), "--seq"])
    assert result.exit_code == 3


def test_cli_verify_env_override(runner, tmp_path):
    cfg = tmp_path / "one.toml"
    cfg.write_text('[[ring]]\nkind = "Zps"\np = 3\n')
    result = runner.invoke(
        main,
        ["verify", "--config", str(cfg), "--seq"],
        env={"UNIORTHO_VERIFY_FORMAT": "json"},
    )
    assert result.exit_code == 0
    rows = json.loads(result.stdout)
    assert len(rows) == 2 and rows[0]["ring"] == "Z3"


def test_cli_verify_writes_reports_atomically(runner, tmp_path):
    cfg = tmp_path / "one.toml"
    cfg.write_text('[[ring]]\nkind = "Zps"\np = 3\ns = 2\n')
    out = tmp_path / "nested" / "report.csv"
    result = runner.invoke(main, ["verify", "--config", str(cfg), "--seq", "--out", str(out)])
    assert result.exit_code == 0
    text = out.read_text()
    assert text.splitlines()[0].startswith("schema_version,")
    leftovers = [p for p in out.parent.iterdir() if p.name.startswith(".report-")]
    assert not leftovers
