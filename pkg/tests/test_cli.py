import json

import pytest

from csk3 import cli
from csk3.cache import PointCache
from csk3.elliptic import Point, certify_positive_rank


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_twist_rank_positive(capsys):
    code, out, _ = run(capsys, "twist-rank", "5")
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report["verdict"] == "positive-rank"
    assert report["certificate"]["witness"] == {"x": "-4", "y": "6"}
    assert report["root_number"] == -1
    assert report["expected_family"]["expected"] is True
    assert report["schema_version"] == 1


def test_twist_rank_inconclusive(capsys):
    code, out, _ = run(capsys, "twist-rank", "1")
    assert code == cli.EXIT_INCONCLUSIVE
    report = json.loads(out)
    assert report["verdict"] == "inconclusive"
    assert report["certificate"] is None
    assert report["root_number"] == 1


def test_twist_rank_15(capsys):
    code, out, _ = run(capsys, "twist-rank", "15")
    assert code == cli.EXIT_OK
    assert json.loads(out)["certificate"]["witness"] == {"x": "-9", "y": "36"}


def test_twist_rank_parity_note(capsys):
    # positive rank with root number +1: conjectural even-rank note, metadata only
    code, out, _ = run(capsys, "twist-rank", "34")
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report["root_number"] == 1
    assert "even rank >= 2" in report["parity_note"]

    code, out, _ = run(capsys, "twist-rank", "5")
    assert json.loads(out)["parity_note"] is None


def test_factor_bound_flag(capsys):
    code, _, err = run(capsys, "twist-rank", "15", "--factor-bound", "10")
    assert code == cli.EXIT_ERROR
    assert "budget" in err or "error" in err


def test_usage_errors_exit_one(capsys):
    code, _, err = run(capsys, "twist-rank", "12")      # not squarefree
    assert code == cli.EXIT_ERROR and "error" in err
    code, _, err = run(capsys, "root-number")           # no fibers requested
    assert code == cli.EXIT_ERROR
    code, _, err = run(capsys, "atlas", "-d", "3", "-a", "2", "-C", "5",
                       "--grid", "bogus")
    assert code == cli.EXIT_ERROR


def test_spr_graceful_degradation(capsys):
    code, out, _ = run(capsys, "spr", "-d", "7", "-a", "1", "-C", "17")
    assert code == cli.EXIT_INCONCLUSIVE
    report = json.loads(out)
    assert report["verdict"] == "inconclusive"
    assert report["inconclusive_legs"] == ["curve"]

    code, out, _ = run(capsys, "spr", "-d", "7", "-a", "1", "-C", "17",
                       "--allow-external-facts")
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report["verdict"] == "certified"
    assert report["uses_external_facts"] is True
    assert report["curve_leg"]["provenance"]["kind"] == "external"
    assert report["curve_leg"]["provenance"]["flagged"] is True


def test_spr_search_only(capsys):
    code, out, _ = run(capsys, "spr", "-d", "3", "-a", "2", "-C", "5")
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report["uses_external_facts"] is False
    assert report["jacobian_leg"]["twist"] == 5
    assert report["curve_leg"]["twist"] == 15


def test_atlas_json_and_svg(capsys, tmp_path):
    svg = tmp_path / "atlas.svg"
    code, out, _ = run(capsys, "atlas", "-d", "3", "-a", "2", "-C", "5",
                       "--grid", "10x3", "--svg", str(svg))
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report["count"] >= 30
    assert len(report["points"]) == report["count"]
    text = svg.read_text()
    assert text.startswith("<svg") and "circle" in text


def test_atlas_csv(capsys):
    code, out, _ = run(capsys, "atlas", "-d", "3", "-a", "2", "-C", "5",
                       "--grid", "2x1", "--format", "csv")
    assert code == cli.EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "T,X,Y"
    assert len(lines) > 1


def test_atlas_inconclusive(capsys):
    code, out, _ = run(capsys, "atlas", "-d", "3", "-a", "2", "-C", "3")
    assert code == cli.EXIT_INCONCLUSIVE


def test_density_report(capsys, tmp_path):
    svg = tmp_path / "density.svg"
    code, out, _ = run(capsys, "density", "-d", "3", "-a", "2", "-C", "5",
                       "--grid", "10x2", "--interval=-2:2", "--svg", str(svg))
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report["samples"] >= 1
    assert report["both_y_signs_present"] is True
    assert svg.exists()


def test_solubility_commands(capsys):
    code, out, _ = run(capsys, "solubility", "-a", "1", "-C", "17")
    assert code == cli.EXIT_OK
    assert json.loads(out)["verdict"] == "soluble"

    code, out, _ = run(capsys, "solubility", "-a", "2", "-C", "5",
                       "--check-places", "2,5,real")
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report["verdict"] == "guaranteed-soluble"
    assert report["brute_checks"] == {"2": True, "5": True, "real": True}

    code, out, _ = run(capsys, "solubility", "-a", "2", "-C", "21")
    assert code == cli.EXIT_INCONCLUSIVE


def test_root_number_single_and_survey(capsys):
    code, out, _ = run(capsys, "root-number", "--D", "5")
    assert code == cli.EXIT_OK
    assert json.loads(out)["root_number"] == -1

    code, out, _ = run(capsys, "root-number", "--d", "7", "--a", "1",
                       "--sample", "100", "--seed", "11")
    assert code == cli.EXIT_OK
    rows = json.loads(out)["rows"]
    assert len(rows) == 100
    assert all(r["root_number"] == -1 for r in rows)


def test_descent_command(capsys):
    code, out, _ = run(capsys, "descent", "-C", "17")
    assert code == cli.EXIT_INCONCLUSIVE
    report = json.loads(out)
    assert report["target_rank"] == 2
    assert report["rank_lower_bound"] == 1

    code, out, _ = run(capsys, "descent", "-C", "17", "--allow-external-facts")
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report["rank_equality_verdict"] == "holds"
    assert report["used_external_facts"] is True

    code, out, _ = run(capsys, "descent", "-C", "3")
    assert code == cli.EXIT_OK
    assert json.loads(out)["rank_equality_verdict"] == "fails"


def test_cache_idempotent_reports(capsys, tmp_path):
    cache = tmp_path / "cache.json"
    outputs = []
    for _ in range(2):
        code, out, _ = run(capsys, "twist-rank", "5", "--cache", str(cache))
        assert code == cli.EXIT_OK
        outputs.append(out)
    assert outputs[0] == outputs[1]
    assert cache.exists()


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    cache = tmp_path / "envcache.json"
    monkeypatch.setenv(cli.CACHE_ENV_VAR, str(cache))
    code, _, _ = run(capsys, "twist-rank", "5")
    assert code == cli.EXIT_OK
    assert cache.exists()


def test_cache_drops_corrupt_entries(tmp_path):
    path = tmp_path / "cache.json"
    path.write_text("{ not json")
    with pytest.warns(UserWarning):
        cache = PointCache(path)
    assert cache.get("minus", 5) is None

    cert = certify_positive_rank(5)
    cache.put(cert)
    cache.save()
    assert PointCache(path).get("minus", 5) == cert

    # poison the stored witness: exact re-verification must reject it
    data = json.loads(path.read_text())
    key = "minus:5"
    data["entries"][key]["witness"]["x"] = "7"
    path.write_text(json.dumps(data))
    with pytest.warns(UserWarning):
        reloaded = PointCache(path)
    assert reloaded.get("minus", 5) is None


def test_output_to_file(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = run(capsys, "twist-rank", "5", "--output", str(out_file))
    assert code == cli.EXIT_OK
    assert out == ""
    assert json.loads(out_file.read_text())["verdict"] == "positive-rank"
