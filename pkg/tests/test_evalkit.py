"""Evaluation harness tests: exact error-rate counting, threshold sweep
tie-breaks, generator determinism and the experiment protocol."""

import numpy as np
import pytest

from sigwin import (
    EmptyScoresError,
    EvalMetrics,
    InsufficientSamplesError,
    LayoutError,
    Protocol,
    ScoreSet,
    SynthParams,
    averaged_eer,
    eer,
    far_frr,
    format_report,
    generate_dataset,
    make_writer_params,
    preprocess,
    roc_csv,
    run_experiment,
    synth_signature,
)
from sigwin.imgio import write_pgm


def gray_canvas(h=40, w=60):
    return np.full((h, w), 255, dtype=np.uint8)


def dot_image():
    img = gray_canvas()
    img[10:13, 10:13] = 0
    return img


def bar_image():
    img = gray_canvas()
    img[30, 20:46] = 0
    return img


def combined_image():
    img = gray_canvas()
    img[10:13, 10:13] = 0
    img[30, 20:46] = 0
    return img


class TestFarFrr:
    def test_exact_counting(self):
        scores = ScoreSet(genuine=[0.9, 0.8, 0.4], forgery=[0.3, 0.6])
        far, frr = far_frr(scores, 0.5)
        assert far == 50.0
        assert frr == 100.0 / 3.0

    def test_threshold_is_inclusive_for_acceptance(self):
        assert far_frr(ScoreSet([0.5], [0.5]), 0.5) == (100.0, 0.0)

    def test_extreme_thresholds(self):
        scores = ScoreSet(genuine=[0.7], forgery=[0.2])
        assert far_frr(scores, 0.0) == (100.0, 0.0)
        assert far_frr(scores, 1.0) == (0.0, 100.0)

    def test_perfect_separation(self):
        scores = ScoreSet(genuine=[0.8, 0.9], forgery=[0.1, 0.2])
        assert far_frr(scores, 0.5) == (0.0, 0.0)

    def test_tau_out_of_range(self):
        with pytest.raises(ValueError):
            far_frr(ScoreSet([0.5], [0.5]), 1.5)

    @pytest.mark.parametrize("genuine,forgery", [([], [0.5]), ([0.5], []), ([], [])])
    def test_empty_scores_rejected(self, genuine, forgery):
        with pytest.raises(EmptyScoresError):
            far_frr(ScoreSet(genuine, forgery), 0.5)


class TestScoreSet:
    @pytest.mark.parametrize("bad", [-0.1, 1.5])
    def test_out_of_range_scores_rejected(self, bad):
        with pytest.raises(ValueError):
            ScoreSet(genuine=[bad], forgery=[])
        with pytest.raises(ValueError):
            ScoreSet(genuine=[], forgery=[bad])


class TestEer:
    def test_averaged_eer_is_plain_mean(self):
        assert averaged_eer(8.68, 6.12) == 7.40
        assert averaged_eer(0.0, 0.0) == 0.0

    def test_separated_distributions_reach_zero(self):
        metrics = eer(ScoreSet(genuine=[0.8, 0.9], forgery=[0.1, 0.2]))
        assert metrics.eer == 0.0
        assert metrics.far == 0.0 and metrics.frr == 0.0
        assert metrics.tau_star == 0.8  # smallest zero-gap threshold in the sweep

    def test_identical_distributions_give_fifty(self):
        metrics = eer(ScoreSet(genuine=[0.5], forgery=[0.5]))
        assert metrics.eer == 50.0
        assert metrics.tau_star == 0.0  # every gap ties at 100; smallest tau wins

    def test_tie_keeps_smallest_threshold(self):
        # gaps: tau 0 -> 100, 0.4 -> 100, 0.5 -> 50, 0.6 -> 50, 1.0 -> 100
        metrics = eer(ScoreSet(genuine=[0.4, 0.6], forgery=[0.5]))
        assert metrics.tau_star == 0.5
        assert (metrics.far, metrics.frr) == (100.0, 50.0)
        assert metrics.eer == 75.0

    def test_sweep_covers_all_scores_plus_endpoints(self):
        scores = ScoreSet(genuine=[0.25, 0.75], forgery=[0.5])
        metrics = eer(scores)
        assert [tau for tau, _, _ in metrics.roc] == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_roc_is_monotone(self):
        rng = np.random.default_rng(21)
        scores = ScoreSet(
            genuine=[float(v) for v in rng.uniform(0.3, 1.0, 40)],
            forgery=[float(v) for v in rng.uniform(0.0, 0.7, 40)],
        )
        metrics = eer(scores)
        fars = [far for _, far, _ in metrics.roc]
        frrs = [frr for _, _, frr in metrics.roc]
        assert fars == sorted(fars, reverse=True)
        assert frrs == sorted(frrs)

    def test_operating_point_matches_direct_count(self):
        scores = ScoreSet(genuine=[0.3, 0.6, 0.9], forgery=[0.2, 0.5, 0.8])
        metrics = eer(scores)
        assert (metrics.far, metrics.frr) == far_frr(scores, metrics.tau_star)

    def test_empty_scores_rejected(self):
        with pytest.raises(EmptyScoresError):
            eer(ScoreSet(genuine=[], forgery=[0.5]))


class TestSynth:
    def test_deterministic(self):
        params = SynthParams(writer_seed=42)
        np.testing.assert_array_equal(
            synth_signature(params, sample_seed=3), synth_signature(params, sample_seed=3)
        )

    def test_samples_differ_but_share_shape(self):
        params = SynthParams(writer_seed=42, jitter=0.0)
        a = synth_signature(params, sample_seed=0)
        b = synth_signature(params, sample_seed=1)
        assert not np.array_equal(a, b)  # paper noise differs
        np.testing.assert_array_equal(preprocess(a), preprocess(b))  # strokes do not

    def test_jitter_moves_the_strokes(self):
        params = SynthParams(writer_seed=42, jitter=0.5)
        a = synth_signature(params, sample_seed=0)
        b = synth_signature(params, sample_seed=1)
        assert not np.array_equal(preprocess(a), preprocess(b))

    def test_writers_differ(self):
        a = synth_signature(SynthParams(writer_seed=1))
        b = synth_signature(SynthParams(writer_seed=2))
        assert not np.array_equal(preprocess(a), preprocess(b))

    def test_canvas_and_dtype(self):
        img = synth_signature(SynthParams(writer_seed=5, canvas=(100, 50)))
        assert img.shape == (50, 100)
        assert img.dtype == np.uint8

    def test_ink_on_bright_paper(self):
        img = synth_signature(SynthParams(writer_seed=9))
        assert img.mean() > 200.0
        assert preprocess(img).any()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"strokes": 0},
            {"jitter": -0.1},
            {"canvas": (16, 64)},
            {"canvas": (64, 16)},
        ],
    )
    def test_param_validation(self, kwargs):
        with pytest.raises(ValueError):
            SynthParams(writer_seed=0, **kwargs)

    def test_make_writer_params_deterministic(self):
        a = make_writer_params(0, 3)
        b = make_writer_params(0, 3)
        assert a == b
        seeds = {make_writer_params(0, i).writer_seed for i in range(6)}
        assert len(seeds) == 6


class TestGenerateDataset:
    def test_layout(self, tmp_path):
        ids = generate_dataset(tmp_path / "ds", writers=3, samples=2, canvas=(64, 48))
        assert ids == ["w01", "w02", "w03"]
        for wid in ids:
            files = sorted(p.name for p in (tmp_path / "ds" / wid).iterdir())
            assert files == ["genuine_01.png", "genuine_02.png"]

    def test_byte_deterministic(self, tmp_path):
        generate_dataset(tmp_path / "a", writers=2, samples=2, canvas=(64, 48))
        generate_dataset(tmp_path / "b", writers=2, samples=2, canvas=(64, 48))
        for rel in ["w01/genuine_01.png", "w02/genuine_02.png"]:
            assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()

    def test_seed_changes_content(self, tmp_path):
        generate_dataset(tmp_path / "a", writers=1, samples=1, base_seed=0, canvas=(64, 48))
        generate_dataset(tmp_path / "b", writers=1, samples=1, base_seed=1, canvas=(64, 48))
        a = (tmp_path / "a" / "w01" / "genuine_01.png").read_bytes()
        b = (tmp_path / "b" / "w01" / "genuine_01.png").read_bytes()
        assert a != b

    def test_validation(self, tmp_path):
        with pytest.raises(ValueError):
            generate_dataset(tmp_path / "x", writers=0, samples=1)
        with pytest.raises(ValueError):
            generate_dataset(tmp_path / "x", writers=1, samples=0)


def toy_dataset(root):
    """Two writers of hand-drawn images: 'a' signs dots, 'b' signs bars."""
    (root / "a").mkdir(parents=True)
    (root / "b").mkdir(parents=True)
    write_pgm(dot_image(), root / "a" / "genuine_1.pgm")
    write_pgm(dot_image(), root / "a" / "genuine_2.pgm")
    write_pgm(bar_image(), root / "b" / "genuine_1.pgm")
    write_pgm(bar_image(), root / "b" / "genuine_2.pgm")
    return root


class TestRunExperiment:
    def test_score_bookkeeping(self, tmp_path):
        result = run_experiment(toy_dataset(tmp_path / "ds"), Protocol(enroll_count=1))
        # 2 writers x 1 held-out genuine; each test image also scores the other writer
        assert len(result.scores.genuine) == 2
        assert len(result.scores.forgery) == 2
        assert result.rank1_accuracy == 1.0
        assert result.scores.genuine == [1.0, 1.0]
        for row in result.per_writer:
            assert row.enrolled == 1
            assert row.tested == 1
            assert row.rank1_hits == 1
            assert row.mean_genuine == 1.0
            assert row.mean_forgery < 0.5

    def test_metrics_come_from_the_score_sweep(self, tmp_path):
        result = run_experiment(toy_dataset(tmp_path / "ds"), Protocol(enroll_count=1))
        direct = eer(result.scores)
        assert result.metrics == direct
        assert result.metrics.eer == 0.0

    def test_forgery_files_scored_against_own_writer(self, tmp_path):
        root = toy_dataset(tmp_path / "ds")
        write_pgm(bar_image(), root / "a" / "forgery_1.pgm")
        result = run_experiment(root, Protocol(enroll_count=1))
        assert len(result.scores.forgery) == 3

    def test_numeric_filename_ordering(self, tmp_path):
        # genuine_2 must be enrolled before genuine_10; a lexicographic sort
        # would enroll the two-component image and test the plain dot instead
        root = tmp_path / "ds"
        (root / "a").mkdir(parents=True)
        (root / "b").mkdir(parents=True)
        write_pgm(dot_image(), root / "a" / "genuine_2.pgm")
        write_pgm(combined_image(), root / "a" / "genuine_10.pgm")
        write_pgm(bar_image(), root / "b" / "genuine_1.pgm")
        write_pgm(bar_image(), root / "b" / "genuine_2.pgm")
        result = run_experiment(root, Protocol(enroll_count=1))
        row = {r.writer_id: r for r in result.per_writer}["a"]
        assert row.mean_genuine < 0.9

    def test_deterministic(self, tmp_path):
        root = toy_dataset(tmp_path / "ds")
        first = run_experiment(root, Protocol(enroll_count=1))
        second = run_experiment(root, Protocol(enroll_count=1))
        assert first.scores == second.scores
        assert first.metrics == second.metrics

    def test_synthetic_end_to_end_counts(self, tmp_path):
        generate_dataset(tmp_path / "ds", writers=3, samples=3, canvas=(128, 64))
        result = run_experiment(tmp_path / "ds", Protocol(enroll_count=1))
        assert len(result.scores.genuine) == 6
        assert len(result.scores.forgery) == 12
        assert 0.0 <= result.rank1_accuracy <= 1.0

    def test_missing_root_rejected(self, tmp_path):
        with pytest.raises(LayoutError):
            run_experiment(tmp_path / "nope")

    def test_empty_root_rejected(self, tmp_path):
        (tmp_path / "ds").mkdir()
        with pytest.raises(LayoutError):
            run_experiment(tmp_path / "ds")

    def test_writer_without_genuine_rejected(self, tmp_path):
        root = tmp_path / "ds"
        (root / "a").mkdir(parents=True)
        (root / "a" / "stray.txt").write_text("x")
        with pytest.raises(LayoutError):
            run_experiment(root)

    def test_insufficient_samples_rejected(self, tmp_path):
        root = toy_dataset(tmp_path / "ds")
        with pytest.raises(InsufficientSamplesError):
            run_experiment(root, Protocol(enroll_count=2))

    def test_protocol_validation(self):
        with pytest.raises(ValueError):
            Protocol(enroll_count=0)


class TestReporting:
    @pytest.fixture()
    def result(self, tmp_path):
        return run_experiment(toy_dataset(tmp_path / "ds"), Protocol(enroll_count=1))

    def test_format_report_layout(self, result):
        text = format_report(result)
        lines = text.splitlines()
        assert lines[0].startswith("writer")
        assert lines[1].startswith("a")
        assert lines[2].startswith("b")
        assert "rank-1 accuracy: 100.00%" in text
        assert "FAR (%)" in text and "tau*" in text
        assert text.endswith("\n")

    def test_roc_csv_round_trips(self, result):
        text = roc_csv(result.metrics)
        lines = text.splitlines()
        assert lines[0] == "tau,far,frr"
        assert len(lines) == 1 + len(result.metrics.roc)
        for line, (tau, far, frr) in zip(lines[1:], result.metrics.roc):
            cells = line.split(",")
            assert (float(cells[0]), float(cells[1]), float(cells[2])) == (tau, far, frr)

    def test_report_is_deterministic(self, result):
        assert format_report(result) == format_report(result)
        assert roc_csv(result.metrics) == roc_csv(result.metrics)


class TestEvalMetricsShape:
    def test_fields(self):
        metrics = eer(ScoreSet(genuine=[0.9], forgery=[0.1]))
        assert isinstance(metrics, EvalMetrics)
        assert metrics.roc[0][0] == 0.0
        assert metrics.roc[-1][0] == 1.0
