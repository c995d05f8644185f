import csv
import json

import numpy as np
import pytest
from PIL import Image as PILImage

from tropedge.cli import main
from tropedge.image_core import save_image
from tropedge.metrics import CSV_COLUMNS
from tropedge.samples import sample_image, write_sample_images


@pytest.fixture
def scene_png(tmp_path):
    path = tmp_path / "scene.png"
    save_image(path, sample_image("bars", (60, 80)))
    return str(path)


class TestDetect:
    def test_writes_edge_map(self, tmp_path, scene_png):
        out = tmp_path / "out"
        code = main(["detect", "-i", scene_png, "-m", "4k-max", "-o", str(out)])
        assert code == 0
        assert (out / "scene_4k-max.png").exists()

    def test_missing_input_exits_2(self, tmp_path):
        code = main(["detect", "-i", str(tmp_path / "nope.png"),
                     "-m", "4k-max", "-o", str(tmp_path)])
        assert code == 2

    def test_unknown_method_exits_3(self, tmp_path, scene_png, capsys):
        code = main(["detect", "-i", scene_png, "-m", "bogus", "-o", str(tmp_path)])
        assert code == 3
        assert "bogus" in capsys.readouterr().err

    def test_save_intermediates(self, tmp_path, scene_png):
        out = tmp_path / "inter"
        code = main(["detect", "-i", scene_png, "-m", "8k-min", "-o", str(out),
                     "--save-intermediates"])
        assert code == 0
        names = {p.name for p in out.iterdir()}
        assert "scene_8k-min.png" in names
        assert "scene_8k-min_preprocessed.png" in names
        assert "scene_8k-min_response.png" in names
        assert "scene_8k-min_enhanced.png" in names

    def test_bank_file_override(self, tmp_path, scene_png):
        bank = tmp_path / "mybank.txt"
        bank.write_text("1 1 1\n0 0 0\n-1 -1 -1\n\n-1 0 1\n-1 0 1\n-1 0 1\n")
        out = tmp_path / "bankout"
        code = main(["detect", "-i", scene_png, "-m", "4k-max", "-o", str(out),
                     "--bank-file", str(bank)])
        assert code == 0
        assert (out / "scene_4k-max.png").exists()


class TestCompare:
    def test_files_and_montage_layout(self, tmp_path, scene_png):
        out = tmp_path / "cmp"
        methods = ["4k-max", "8k-min", "sobel"]
        code = main(["compare", "-i", scene_png, "-o", str(out),
                     "-m", methods[0], "-m", methods[1], "-m", methods[2]])
        assert code == 0
        for m in methods:
            assert (out / f"scene_{m}.png").exists()
        montage = out / "scene_compare.png"
        assert montage.exists()
        with PILImage.open(montage) as im:
            width, height = im.size
        # one row, original plus one panel per method
        assert round(width / height / (len(methods) + 1), 1) == round(2.6 / 2.9, 1)
        report = out / "scene_report.csv"
        with open(report, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == list(CSV_COLUMNS)
        assert [r[1] for r in rows[1:]] == methods

    def test_json_report(self, tmp_path, scene_png):
        out = tmp_path / "cmpj"
        code = main(["compare", "-i", scene_png, "-o", str(out),
                     "-m", "4k-max", "-m", "canny", "--format", "json"])
        assert code == 0
        data = json.loads((out / "scene_report.json").read_text())
        assert [row["method"] for row in data] == ["4k-max", "canny"]

    def test_needs_two_methods(self, tmp_path, scene_png):
        code = main(["compare", "-i", scene_png, "-o", str(tmp_path), "-m", "4k-max"])
        assert code == 2


class TestBench:
    def test_rows_and_timing(self, tmp_path):
        img_dir = tmp_path / "imgs"
        write_sample_images(img_dir, dims=(40, 60))
        out = tmp_path / "bench"
        code = main(["bench", "-i", str(img_dir), "-o", str(out),
                     "-m", "4k-max", "-m", "sobel"])
        assert code == 0
        with open(out / "bench.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][-1] == "time_ms"
        data = rows[1:]
        assert len(data) == 5 * 2
        assert all(float(r[-1]) > 0 for r in data)

    def test_empty_directory_exits_4(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        assert main(["bench", "-i", str(empty), "-o", str(tmp_path)]) == 4

    def test_seeded_rerun_identical_metrics(self, tmp_path, monkeypatch):
        img_dir = tmp_path / "imgs"
        write_sample_images(img_dir, dims=(40, 60))

        def run(out_name, threads):
            monkeypatch.setenv("TROPEDGE_THREADS", threads)
            out = tmp_path / out_name
            assert main(["bench", "-i", str(img_dir), "-o", str(out),
                         "-m", "random-max", "-m", "4k-max", "--seed", "5"]) == 0
            with open(out / "bench.csv", newline="") as fh:
                return [row[:-1] for row in csv.reader(fh)]  # drop time_ms

        assert run("a", "1") == run("b", "4")


class TestMetrics:
    def test_image_against_itself_thresholded(self, tmp_path, scene_png, capsys):
        img = sample_image("bars", (60, 80))
        edge_path = tmp_path / "edges.png"
        save_image(edge_path, img > 0.5)
        code = main(["metrics", "-i", scene_png, "-i", str(edge_path)])
        assert code == 0
        rows = list(csv.reader(capsys.readouterr().out.splitlines()))
        assert rows[0] == list(CSV_COLUMNS)
        assert rows[1][1] == "external"

    def test_dimension_mismatch_exits_5(self, tmp_path, scene_png):
        other = tmp_path / "small.png"
        save_image(other, np.zeros((10, 10), dtype=bool))
        assert main(["metrics", "-i", scene_png, "-i", str(other)]) == 5

    def test_constant_original_flags_convention(self, tmp_path, capsys):
        flat = tmp_path / "flat.png"
        save_image(flat, np.full((30, 30), 0.5))
        edges = tmp_path / "e.png"
        bits = np.zeros((30, 30), dtype=bool)
        bits[10:20, 10:20] = True
        save_image(edges, bits)
        code = main(["metrics", "-i", str(flat), "-i", str(edges), "--format", "json"])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data["correlation_orig"] == 1.0
        assert "original" in data["params"]["correlation_convention"]
        assert data["params"]["contrast_ratio"] == "undefined"

    def test_writes_report_file(self, tmp_path, scene_png):
        img = sample_image("bars", (60, 80))
        edge_path = tmp_path / "edges.png"
        save_image(edge_path, img > 0.5)
        out = tmp_path / "mout"
        code = main(["metrics", "-i", scene_png, "-i", str(edge_path),
                     "-o", str(out)])
        assert code == 0
        assert (out / "scene_report.csv").exists()


class TestPgmSupport:
    def test_detect_on_pgm(self, tmp_path):
        path = tmp_path / "scene.pgm"
        save_image(path, sample_image("grid", (40, 60)))
        out = tmp_path / "out"
        assert main(["detect", "-i", str(path), "-m", "4k-max", "-o", str(out)]) == 0
        assert (out / "scene_4k-max.png").exists()
