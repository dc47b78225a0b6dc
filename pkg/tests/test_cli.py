import filecmp
import json

import pytest

from modview.cli import EXIT_NO_STRUCTURE, EXIT_OK, EXIT_VALIDATION, main
from modview.generators import edge_list_text, gnp_random_graph, planted_cliques
from modview.graph import load_edge_list


@pytest.fixture
def planted_file(tmp_path):
    path = tmp_path / "planted.txt"
    path.write_text(edge_list_text(planted_cliques(4, 5)))
    return str(path)


@pytest.fixture
def dense_file(tmp_path):
    path = tmp_path / "dense.txt"
    path.write_text(edge_list_text(gnp_random_graph(60, 0.5, seed=17)))
    return str(path)


class TestCluster:
    def test_stdout_tsv(self, planted_file, capsys):
        assert main(["cluster", planted_file, "--seed", "1"]) == EXIT_OK
        captured = capsys.readouterr()
        lines = captured.out.strip().splitlines()
        assert lines[0].startswith("# Q=")
        assert lines[1].startswith("# clusters=4")
        rows = [ln.split("\t") for ln in lines if not ln.startswith("#")]
        assert len(rows) == 20
        assert "# config command=cluster" in captured.err
        assert "clusters=4" in captured.err

    def test_out_file_and_determinism(self, planted_file, tmp_path, capsys):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        assert main(["cluster", planted_file, "--seed", "1", "--out", str(a)]) == EXIT_OK
        assert main(["cluster", planted_file, "--seed", "1", "--out", str(b)]) == EXIT_OK
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_missing_input_is_validation_error(self, tmp_path, capsys):
        assert main(["cluster", str(tmp_path / "ghost.txt")]) == EXIT_VALIDATION
        assert "error:" in capsys.readouterr().err


class TestSignificance:
    def test_structured_graph_exit_zero(self, planted_file, tmp_path, capsys):
        out = tmp_path / "null.txt"
        code = main(
            ["significance", planted_file, "--seed", "1", "--trials", "50",
             "--out", str(out)]
        )
        captured = capsys.readouterr()
        assert code == EXIT_OK
        assert "significant=True" in captured.out
        assert "q=" in captured.out and "threshold=" in captured.out and "p=" in captured.out
        header = out.read_text().splitlines()[0]
        assert header.startswith("#")
        assert "trials=50" in header

    def test_dense_graph_exit_three(self, dense_file, capsys):
        code = main(["significance", dense_file, "--seed", "1", "--trials", "20"])
        captured = capsys.readouterr()
        assert code == EXIT_NO_STRUCTURE
        assert "significant=False" in captured.out


class TestHierarchy:
    def test_artifacts_and_reproducibility(self, planted_file, tmp_path, capsys):
        run1, run2 = tmp_path / "run1", tmp_path / "run2"
        for out in (run1, run2):
            code = main(
                ["hierarchy", planted_file, "--seed", "1", "--trials", "50",
                 "--out", str(out)]
            )
            assert code == EXIT_OK
        capsys.readouterr()
        names = ["hierarchy.json", "view.json", "view.svg", "partition.tsv"]
        for name in names:
            assert (run1 / name).is_file()
        match, mismatch, errors = filecmp.cmpfiles(run1, run2, names, shallow=False)
        assert match == names and not mismatch and not errors
        doc = json.loads((run1 / "view.json").read_text())
        assert len(doc["nodes"]) == 4

    def test_no_structure_exit_code(self, dense_file, tmp_path, capsys):
        code = main(
            ["hierarchy", dense_file, "--seed", "1", "--trials", "20",
             "--out", str(tmp_path / "out")]
        )
        captured = capsys.readouterr()
        assert code == EXIT_NO_STRUCTURE
        assert "no_structure=True" in captured.out
        doc = json.loads((tmp_path / "out" / "view.json").read_text())
        assert len(doc["nodes"]) == 1


class TestExport:
    def test_reads_staged_artifacts(self, planted_file, tmp_path, capsys):
        state = tmp_path / "state"
        main(["hierarchy", planted_file, "--seed", "1", "--trials", "50",
              "--out", str(state)])
        capsys.readouterr()
        code = main(["export", "--state", str(state), "--format", "svg"])
        captured = capsys.readouterr()
        assert code == EXIT_OK
        assert captured.out == (state / "view.svg").read_text()
        for fmt, name in [("view-json", "view.json"),
                          ("hierarchy-json", "hierarchy.json"),
                          ("partition-tsv", "partition.tsv")]:
            assert main(["export", "--state", str(state), "--format", fmt]) == EXIT_OK
            assert capsys.readouterr().out == (state / name).read_text()

    def test_missing_state_is_validation_error(self, tmp_path, capsys):
        code = main(["export", "--state", str(tmp_path / "none"), "--format", "svg"])
        captured = capsys.readouterr()
        assert code == EXIT_VALIDATION
        assert "hierarchy command" in captured.err

    def test_unknown_format_rejected_by_parser(self, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            main(["export", "--state", str(tmp_path), "--format", "pdf"])
        assert excinfo.value.code == 2


class TestStatsCommand:
    def test_enrichment_table(self, tmp_path, capsys):
        g = planted_cliques(4, 5)
        edges = tmp_path / "edges.txt"
        edges.write_text(edge_list_text(g))
        attrs = tmp_path / "attrs.tsv"
        attrs.write_text(
            "node\tkind\n"
            + "\n".join(f"{tok}\t{'X' if i < 10 else 'Y'}" for i, tok in enumerate(g.tokens))
        )
        code = main(
            ["stats", str(edges), "--attributes", str(attrs),
             "--attribute", "kind", "--seed", "1"]
        )
        captured = capsys.readouterr()
        assert code == EXIT_OK
        assert captured.out.startswith("# attribute=kind")
        assert "goodness-of-fit" in captured.out

    def test_unknown_attribute_fails(self, tmp_path, capsys):
        edges = tmp_path / "edges.txt"
        edges.write_text("a b\nb c")
        attrs = tmp_path / "attrs.tsv"
        attrs.write_text("node\tkind\na\tX")
        code = main(
            ["stats", str(edges), "--attributes", str(attrs), "--attribute", "wrong"]
        )
        assert code == EXIT_VALIDATION
        assert "error:" in capsys.readouterr().err


class TestLayoutCommand:
    def test_layout_json(self, planted_file, capsys):
        assert main(["layout", planted_file, "--seed", "1", "--iterations", "50"]) == EXIT_OK
        captured = capsys.readouterr()
        doc = json.loads(captured.out)
        assert len(doc["nodes"]) == 4
        assert doc["bounds"] == [0.0, 0.0, 1000.0, 1000.0]


class TestGen:
    def test_barbell(self, capsys):
        assert main(["gen", "barbell", "--clique-size", "3"]) == EXIT_OK
        captured = capsys.readouterr()
        g = load_edge_list(captured.out)
        assert (g.node_count, g.edge_count) == (6, 7)
        assert "n=6 m=7" in captured.err

    def test_two_level_and_determinism(self, tmp_path, capsys):
        argv = ["gen", "two-level", "--groups", "3", "--cliques-per-group", "2",
                "--clique-size", "4"]
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        assert main(argv + ["--out", str(a)]) == EXIT_OK
        assert main(argv + ["--out", str(b)]) == EXIT_OK
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()
        g = load_edge_list(a.read_text())
        assert g.node_count == 24

    def test_blocks_with_attribute_table(self, tmp_path, capsys):
        table = tmp_path / "attrs.tsv"
        code = main(
            ["gen", "blocks", "--sizes", "20,20", "--rates", "0.9,0.1",
             "--seed", "3", "--attributes-out", str(table)]
        )
        captured = capsys.readouterr()
        assert code == EXIT_OK
        g = load_edge_list(captured.out)
        assert g.node_count == 40
        header = table.read_text().splitlines()[0]
        assert header.split("\t")[0] == "node"

    def test_blocks_length_mismatch(self, capsys):
        code = main(["gen", "blocks", "--sizes", "10,10", "--rates", "0.5"])
        assert code == EXIT_VALIDATION
        assert "same length" in capsys.readouterr().err

    def test_config_sample_preserves_degrees(self, planted_file, tmp_path, capsys):
        out = tmp_path / "sample.txt"
        code = main(
            ["gen", "config-sample", "--source", planted_file, "--seed", "4",
             "--out", str(out)]
        )
        capsys.readouterr()
        assert code == EXIT_OK
        base = load_edge_list(open(planted_file).read())
        sample = load_edge_list(out.read_text())
        assert sorted(sample.degrees) == sorted(base.degrees)

    def test_config_sample_requires_source(self, capsys):
        assert main(["gen", "config-sample"]) == EXIT_VALIDATION
        assert "--source" in capsys.readouterr().err


class TestParser:
    def test_unknown_command(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["frobnicate"])
        assert excinfo.value.code == 2

    def test_config_echo_lists_arguments(self, planted_file, capsys):
        main(["cluster", planted_file, "--seed", "7"])
        err = capsys.readouterr().err
        config_line = next(ln for ln in err.splitlines() if ln.startswith("# config"))
        assert "command=cluster" in config_line
        assert "seed=7" in config_line
        assert f"edges={planted_file}" in config_line
