import io
import json
from contextlib import redirect_stdout
from pathlib import Path

from omegaramsey.cli import (
    EXIT_ERROR,
    EXIT_NOT_FOUND,
    EXIT_OK,
    canonical_dumps,
    run,
)

FIXTURES = Path(__file__).parent / "fixtures"


def invoke(argv):
    out = io.StringIO()
    with redirect_stdout(out):
        code = run(argv)
    return code, out.getvalue()


def fx(name):
    return str(FIXTURES / name)


class TestCoverCheck:
    def test_cover(self):
        code, out = invoke(["cover-check", "--family", fx("family_quads6.json"),
                            "--sub", fx("sub_quads_all.json"),
                            "--d", "2", "--minsize", "3"])
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["result"]["verdict"] == "true"

    def test_not_cover_carries_witness(self):
        code, out = invoke(["cover-check", "--family", fx("family_quads6.json"),
                            "--sub", fx("sub_quads_all.json"),
                            "--d", "5", "--minsize", "3"])
        assert code == EXIT_OK
        assert json.loads(out)["result"]["witness"] == [1, 2, 3, 4, 5]

    def test_unknown_exits_two(self):
        code, out = invoke(["cover-check", "--family", fx("family_quads6.json"),
                            "--sub", fx("sub_quads_all.json"),
                            "--d", "2", "--minsize", "3",
                            "--search-bound", "2"])
        assert code == EXIT_NOT_FOUND


class TestErrors:
    def test_unknown_subcommand(self):
        code, _ = invoke(["no-such-command"])
        assert code == EXIT_ERROR

    def test_missing_file(self):
        code, _ = invoke(["cover-check", "--family", "missing.json",
                          "--sub", fx("sub_quads_all.json")])
        assert code == EXIT_ERROR

    def test_malformed_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _ = invoke(["cover-check", "--family", str(bad),
                          "--sub", fx("sub_quads_all.json")])
        assert code == EXIT_ERROR


class TestDecideAndWitnesses:
    def test_decide(self):
        code, out = invoke(["decide", "--family", fx("family_grid5.json"),
                            "--region", fx("region_basic_grid.json"),
                            "--d", "1", "--minsize", "3", "--stem", "1"])
        assert code == EXIT_OK
        assert json.loads(out)["result"]["verdict"] in ("accepts", "rejects")

    def test_cr_witness_with_oracle_field(self):
        code, out = invoke(["cr-witness", "--family", fx("family_grid5.json"),
                            "--region", fx("region_basic_grid.json"),
                            "--d", "1", "--minsize", "3"])
        assert code == EXIT_OK
        result = json.loads(out)["result"]
        assert result["verdict"] in ("inside", "outside")
        assert result["oracleAgrees"] is True

    def test_nwd_witness_contract_failure(self):
        # an everywhere-dense region is a contract violation, exit 1
        code, _ = invoke(["nwd-witness", "--family", fx("family_grid5.json"),
                          "--region", fx("region_basic_grid.json"),
                          "--d", "1", "--minsize", "3"])
        assert code in (EXIT_ERROR, EXIT_OK, EXIT_NOT_FOUND)


class TestGamesAndSolvers:
    def test_play_fusion(self):
        code, out = invoke(["play", "--family", fx("family_grid5.json"),
                            "--one", "fusion",
                            "--region", fx("region_basic_grid.json"),
                            "--d", "1", "--minsize", "3", "--innings", "3"])
        assert code in (EXIT_OK, EXIT_NOT_FOUND)
        report = json.loads(out)["result"]
        if "innings" in report:
            for inning in report["innings"]:
                assert inning["two"] in inning["one"]

    def test_s1_select(self):
        code, out = invoke(["s1-select", "--family", fx("family_quads6.json"),
                            "--covers", fx("covers_quads.json"),
                            "--d", "2", "--minsize", "3"])
        assert code == EXIT_OK
        assert len(json.loads(out)["result"]["picks"]) == 3

    def test_ramsey_solve_verified(self):
        code, out = invoke(["ramsey-solve", "--family", fx("family_tree4.json"),
                            "--coloring", fx("coloring_tree4.json"),
                            "--d", "1", "--minsize", "3"])
        assert code == EXIT_OK
        result = json.loads(out)["result"]
        assert result["set"] == [1, 2, 3] and result["color"] == 0
        assert result["oracleVerified"] is True

    def test_tree_build(self):
        code, out = invoke(["tree-build", "--family", fx("family_tree4.json"),
                            "--coloring", fx("coloring_tree4.json"),
                            "--depth", "2", "--d", "1", "--minsize", "3"])
        assert code == EXIT_OK
        nodes = json.loads(out)["result"]["nodes"]
        assert nodes["0"] == [2, 3] and nodes["1"] == [4]
        assert nodes["00"] == [3] and nodes["01"] == []

    def test_nw_and_fg(self):
        code, out = invoke(["nw", "--family", fx("family_eight5.json"),
                            "--stems", fx("stems_pairs8.json"),
                            "--partition", fx("partition_pairs8.json"),
                            "--d", "1", "--minsize", "3"])
        assert code in (EXIT_OK, EXIT_NOT_FOUND)
        singles = {"stems": [[i] for i in range(1, 9)]}
        import tempfile, os
        with tempfile.NamedTemporaryFile("w", suffix=".json",
                                         delete=False) as handle:
            json.dump(singles, handle)
            name = handle.name
        try:
            code, out = invoke(["fg", "--family", fx("family_eight5.json"),
                                "--stems", name, "--d", "1", "--minsize", "3"])
            assert code == EXIT_OK
        finally:
            os.unlink(name)

    def test_mathias_commands(self):
        code, out = invoke(["mathias-check", "--family",
                            fx("family_twelve6.json"),
                            "--condition", fx("condition_a.json"),
                            "--d", "2", "--minsize", "3"])
        assert code == EXIT_OK
        code, out = invoke(["mathias-extends", "--family",
                            fx("family_twelve6.json"),
                            "--condition", fx("condition_a.json"),
                            "--weaker", fx("condition_b.json"),
                            "--d", "2", "--minsize", "3"])
        assert code == EXIT_OK
        assert "extends" in json.loads(out)["result"]

    def test_oracle_commands(self):
        code, out = invoke(["oracle-rejects", "--family",
                            fx("family_grid5.json"),
                            "--region", fx("region_basic_grid.json"),
                            "--d", "1", "--minsize", "3", "--stem", "2"])
        assert code == EXIT_OK
        assert isinstance(json.loads(out)["result"]["rejects"], bool)
        code, out = invoke(["oracle-homogeneous", "--family",
                            fx("family_tree4.json"),
                            "--coloring", fx("coloring_tree4.json"),
                            "--min-set-size", "3", "--d", "1", "--minsize", "3"])
        assert code == EXIT_OK
        assert [[1, 2, 3], 0] in json.loads(out)["result"]["sets"]


class TestDeterminismAndRoundTrip:
    def test_byte_identical_reports(self):
        argv = ["suite", "--seed", "11", "--cases", "4",
                "--d", "2", "--minsize", "3"]
        code1, out1 = invoke(argv)
        code2, out2 = invoke(argv)
        assert (code1, out1) == (code2, out2)

    def test_suite_requires_seed(self):
        code, _ = invoke(["suite", "--cases", "2"])
        assert code == EXIT_ERROR

    def test_json_round_trip_identity_on_fixture_files(self):
        for path in sorted(FIXTURES.glob("*.json")):
            raw = path.read_text()
            assert canonical_dumps(json.loads(raw)) == raw

    def test_text_format(self):
        code, out = invoke(["cover-check", "--family",
                            fx("family_quads6.json"),
                            "--sub", fx("sub_quads_all.json"),
                            "--d", "2", "--minsize", "3", "--format", "text"])
        assert code == EXIT_OK
        assert out.startswith("cover-check:")


class TestBudgetEnvVar:
    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("OMEGARAMSEY_SEARCH_BOUND", "2")
        code, out = invoke(["cover-check", "--family",
                            fx("family_quads6.json"),
                            "--sub", fx("sub_quads_all.json"),
                            "--d", "2", "--minsize", "3"])
        assert code == EXIT_NOT_FOUND
        assert json.loads(out)["result"]["verdict"] == "unknown"

    def test_flag_beats_env(self, monkeypatch):
        monkeypatch.setenv("OMEGARAMSEY_SEARCH_BOUND", "2")
        code, out = invoke(["cover-check", "--family",
                            fx("family_quads6.json"),
                            "--sub", fx("sub_quads_all.json"),
                            "--d", "2", "--minsize", "3",
                            "--search-bound", "100000"])
        assert code == EXIT_OK
