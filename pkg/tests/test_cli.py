"""CLI subcommands end to end (in-process via main())."""

import json
from importlib import resources

import pytest

from captchalab.cli import main
from captchalab.imgcore import pgm_decode


@pytest.fixture(scope="module")
def model_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("model") / "model.ocrnet"
    assert main(["train", "--out", str(path)]) == 0
    return path


@pytest.fixture()
def fixture_store(tmp_path):
    data = resources.files("captchalab.data").joinpath("trials60.jsonl").read_bytes()
    p = tmp_path / "trials.jsonl"
    p.write_bytes(data)
    return p


class TestGenerate:
    def test_writes_pgm(self, tmp_path, capsys):
        out = tmp_path / "c.pgm"
        assert main(["generate", "--seed", "1", "--text", "CYMW",
                     "--out", str(out)]) == 0
        img = pgm_decode(out.read_bytes())
        assert (img.width, img.height) == (200, 60)

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
        main(["generate", "--seed", "9", "--text", "HZNF", "--out", str(a)])
        main(["generate", "--seed", "9", "--text", "HZNF", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_json_output(self, tmp_path, capsys):
        out = tmp_path / "c.pgm"
        main(["generate", "--seed", "1", "--text", "CYMW", "--out", str(out), "--json"])
        payload = json.loads(capsys.readouterr().out)
        assert payload["text"] == "CYMW" and payload["canvas"] == [200, 60]

    def test_bad_text_exits_1(self, tmp_path, capsys):
        assert main(["generate", "--seed", "1", "--text", "nope",
                     "--out", str(tmp_path / "x.pgm")]) == 1


class TestBreak:
    def test_break_with_expect_match(self, tmp_path, model_path, capsys):
        # Seed 3 is a combination the pipeline reads correctly.
        out = tmp_path / "c.pgm"
        main(["generate", "--seed", "3", "--text", "CYMW", "--out", str(out)])
        capsys.readouterr()
        code = main(["break", "--model", str(model_path), "--in", str(out),
                     "--expect", "CYMW"])
        printed = capsys.readouterr().out.strip()
        assert printed == "CYMW"
        assert code == 0

    def test_break_mismatch_exits_1(self, tmp_path, model_path):
        out = tmp_path / "c.pgm"
        main(["generate", "--seed", "1", "--text", "CYMW", "--out", str(out)])
        assert main(["break", "--model", str(model_path), "--in", str(out),
                     "--expect", "XXXX"]) == 1

    def test_break_json(self, tmp_path, model_path, capsys):
        out = tmp_path / "c.pgm"
        main(["generate", "--seed", "1", "--text", "CYMW", "--out", str(out)])
        capsys.readouterr()
        main(["break", "--model", str(model_path), "--in", str(out), "--json"])
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["text"]) == 4
        assert len(payload["confidences"]) == 4

    def test_codec_error_exits_1(self, tmp_path, model_path, capsys):
        bad = tmp_path / "bad.pgm"
        bad.write_bytes(b"P6\n1 1\n255\n\xff")
        assert main(["break", "--model", str(model_path), "--in", str(bad)]) == 1


class TestExtgen:
    def test_writes_image_and_questions(self, tmp_path, capsys):
        prefix = str(tmp_path / "ext")
        assert main(["extgen", "--seed", "5", "--out-prefix", prefix]) == 0
        img = pgm_decode((tmp_path / "ext.pgm").read_bytes())
        assert (img.width, img.height) == (320, 240)
        payload = json.loads((tmp_path / "ext.json").read_text())
        assert len(payload["questions"]) == 5
        assert "expected_answer" not in payload

    def test_reveal_includes_answer(self, tmp_path):
        prefix = str(tmp_path / "ext")
        main(["extgen", "--seed", "5", "--out-prefix", prefix, "--reveal"])
        payload = json.loads((tmp_path / "ext.json").read_text())
        assert len(payload["expected_answer"]) == 5

    def test_deterministic(self, tmp_path):
        p1, p2 = str(tmp_path / "a"), str(tmp_path / "b")
        main(["extgen", "--seed", "7", "--out-prefix", p1])
        main(["extgen", "--seed", "7", "--out-prefix", p2])
        assert (tmp_path / "a.pgm").read_bytes() == (tmp_path / "b.pgm").read_bytes()
        assert json.loads((tmp_path / "a.json").read_text())["questions"] == \
               json.loads((tmp_path / "b.json").read_text())["questions"]


class TestReport:
    def test_fixture_metrics_line(self, fixture_store, capsys):
        assert main(["report", "--store", str(fixture_store)]) == 0
        line = capsys.readouterr().out.strip()
        assert line == ("machine_char=89.58 human_char=83.75 "
                        "machine_full=65.00 human_full=53.33")

    def test_json_report(self, fixture_store, capsys):
        main(["report", "--store", str(fixture_store), "--json"])
        payload = json.loads(capsys.readouterr().out)
        assert payload["n_trials"] == 60
        assert payload["machine_full_rate"] == 65.0

    def test_out_dir_writes_figures_and_csv(self, fixture_store, tmp_path, capsys):
        out_dir = tmp_path / "artifacts"
        assert main(["report", "--store", str(fixture_store),
                     "--out-dir", str(out_dir)]) == 0
        assert (out_dir / "rates_by_trial.png").exists()
        assert (out_dir / "rate_summary.png").exists()
        csv_lines = (out_dir / "per_trial.csv").read_text().splitlines()
        assert csv_lines[0] == "trial_id,machine_rate,human_rate,verdict"
        assert len(csv_lines) == 61

    def test_empty_store_exits_1(self, tmp_path, capsys):
        empty = tmp_path / "none.jsonl"
        empty.write_text("")
        assert main(["report", "--store", str(empty)]) == 1


class TestUsage:
    def test_unknown_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["generate", "--seed", "1", "--text", "AB", "--frumious"])
        assert exc.value.code == 2

    def test_missing_required_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["generate", "--seed", "1"])
        assert exc.value.code == 2
