import numpy as np
import pytest

from gmacsec import (
    Codebook,
    EnumerationTooLarge,
    InternalError,
    SimReport,
    build_codebook,
    equivocation_joint,
    exact_equivocation,
    exact_error_probability,
    simulate,
    validate_channel,
)
from gmacsec import fixtures as fx

UNIFORM_PAIR = ([0.5, 0.5], [0.5, 0.5])


def _repetition_codebook(n=3):
    """Two codewords, all-zeros and all-ones, no binning."""
    words = np.zeros((1, 2, 1, n), dtype=np.int64)
    words[0, 1, 0, :] = 1
    x2 = np.zeros((1, 1, 1, n), dtype=np.int64)
    return Codebook(n=n, M0=1, M1=2, M2=1, J1=1, J2=1,
                    size_x1=2, size_x2=1, x1_words=words, x2_words=x2)


class TestCodebook:
    def test_same_seed_same_codebook(self, binary_degraded):
        a = build_codebook(binary_degraded, 4, 2, 2, 1, 2, 1,
                           ([0.5, 0.5], [1.0]), seed=7)
        b = build_codebook(binary_degraded, 4, 2, 2, 1, 2, 1,
                           ([0.5, 0.5], [1.0]), seed=7)
        assert np.array_equal(a.x1_words, b.x1_words)
        assert np.array_equal(a.x2_words, b.x2_words)

    def test_shapes_and_rates(self, clean_mac):
        book = build_codebook(clean_mac, 4, 2, 4, 2, 3, 1,
                              UNIFORM_PAIR, seed=0)
        assert book.x1_words.shape == (2, 4, 3, 4)
        assert book.x2_words.shape == (2, 2, 1, 4)
        assert book.rates == (0.25, 0.5, 0.25)

    def test_letter_frequencies_follow_the_input_law(self, monkeypatch):
        monkeypatch.setenv("GMAC_MAX_STATES", str(2 ** 80))
        channel = fx.binary_degraded()
        book = build_codebook(channel, 50, 1, 200, 1, 2, 1,
                              ([0.3, 0.7], [1.0]), seed=123)
        freq = book.x1_words.mean()
        assert freq == pytest.approx(0.7, abs=0.02)

    def test_state_guard(self, monkeypatch, binary_degraded):
        monkeypatch.setenv("GMAC_MAX_STATES", "10")
        with pytest.raises(EnumerationTooLarge):
            build_codebook(binary_degraded, 4, 1, 4, 1, 1, 1,
                           ([0.5, 0.5], [1.0]), seed=1)

    def test_input_dist_validation(self, binary_degraded):
        with pytest.raises(ValueError):
            build_codebook(binary_degraded, 2, 1, 2, 1, 1, 1,
                           ([0.5, 0.25, 0.25], [1.0]), seed=1)
        with pytest.raises(ValueError):
            build_codebook(binary_degraded, 2, 1, 2, 1, 1, 1,
                           ([1.5, -0.5], [1.0]), seed=1)
        with pytest.raises(ValueError):
            build_codebook(binary_degraded, 2, 1, 2, 1, 1, 1,
                           ([0.4, 0.4], [1.0]), seed=1)

    def test_size_validation(self, binary_degraded):
        with pytest.raises(ValueError):
            build_codebook(binary_degraded, 0, 1, 2, 1, 1, 1,
                           ([0.5, 0.5], [1.0]), seed=1)
        with pytest.raises(ValueError):
            build_codebook(binary_degraded, 2, 1, 0, 1, 1, 1,
                           ([0.5, 0.5], [1.0]), seed=1)

    def test_letters_must_fit_the_alphabet(self):
        words = np.full((1, 1, 1, 2), 3, dtype=np.int64)
        x2 = np.zeros((1, 1, 1, 2), dtype=np.int64)
        with pytest.raises(ValueError):
            Codebook(n=2, M0=1, M1=1, M2=1, J1=1, J2=1,
                     size_x1=2, size_x2=1, x1_words=words, x2_words=x2)


class TestErrorProbability:
    def test_repetition_code_oracle(self, binary_degraded):
        # majority decoding over a symmetric flip of 0.1:
        # P(error) = 3 * 0.1^2 * 0.9 + 0.1^3 = 0.028
        pe = exact_error_probability(_repetition_codebook(), binary_degraded)
        assert pe == pytest.approx(0.028, abs=1e-12)

    def test_injective_codebook_is_error_free(self, leaky_wiretap):
        words = np.array([[0, 0], [0, 1], [1, 0], [1, 1]],
                         dtype=np.int64).reshape(1, 4, 1, 2)
        x2 = np.zeros((1, 1, 1, 2), dtype=np.int64)
        book = Codebook(n=2, M0=1, M1=4, M2=1, J1=1, J2=1,
                        size_x1=2, size_x2=2, x1_words=words, x2_words=x2)
        assert exact_error_probability(book, leaky_wiretap) == 0.0

    def test_blind_destination_guesses_uniformly(self, blind_destination):
        book = build_codebook(blind_destination, 2, 2, 2, 2, 1, 1,
                              UNIFORM_PAIR, seed=5)
        pe = exact_error_probability(book, blind_destination)
        assert pe == 1.0 - 1.0 / 8.0

    def test_alphabet_mismatch(self, clean_mac, pure_noise_wiretap):
        book = build_codebook(clean_mac, 2, 1, 2, 1, 1, 1,
                              UNIFORM_PAIR, seed=0)
        with pytest.raises(ValueError):
            exact_error_probability(book, pure_noise_wiretap)


class TestEquivocation:
    def test_pure_noise_keeps_the_full_message(self, pure_noise_wiretap):
        book = build_codebook(pure_noise_wiretap, 4, 1, 4, 1, 1, 1,
                              ([0.5, 0.5], [1.0]), seed=2)
        eq = exact_equivocation(book, pure_noise_wiretap, "user2_about_W1")
        assert eq == 0.5

    def test_single_message_has_no_uncertainty(self, binary_degraded):
        book = build_codebook(binary_degraded, 3, 2, 1, 1, 2, 1,
                              ([0.5, 0.5], [1.0]), seed=3)
        assert exact_equivocation(book, binary_degraded, "user2_about_W1") == 0.0

    def test_perfect_observation_kills_the_equivocation(self, leaky_wiretap):
        words = np.array([[0, 0], [0, 1], [1, 0], [1, 1]],
                         dtype=np.int64).reshape(1, 4, 1, 2)
        x2 = np.zeros((1, 1, 1, 2), dtype=np.int64)
        book = Codebook(n=2, M0=1, M1=4, M2=1, J1=1, J2=1,
                        size_x1=2, size_x2=2, x1_words=words, x2_words=x2)
        assert exact_equivocation(book, leaky_wiretap, "user2_about_W1") == 0.0

    def test_output_relabeling_changes_nothing_bitwise(self, binary_degraded):
        flipped = validate_channel(binary_degraded.prob[:, :, :, :, ::-1],
                                   binary_degraded.sizes)
        book = build_codebook(binary_degraded, 4, 1, 2, 1, 2, 1,
                              ([0.5, 0.5], [1.0]), seed=11)
        eq_a = exact_equivocation(book, binary_degraded, "user2_about_W1")
        eq_b = exact_equivocation(book, flipped, "user2_about_W1")
        assert eq_a == eq_b

    def test_degraded_observer_is_more_confused(self, binary_degraded):
        # the destination sees the cleaner output, so conditioning on it
        # leaves at most the uncertainty the downstream observer has
        for seed in range(4):
            book = build_codebook(binary_degraded, 3, 1, 2, 1, 2, 1,
                                  ([0.5, 0.5], [1.0]), seed=seed)
            at_dest = exact_equivocation(book, binary_degraded,
                                         "destination_about_W1")
            at_user2 = exact_equivocation(book, binary_degraded,
                                          "user2_about_W1")
            assert at_dest <= at_user2 + 1e-12

    def test_joint_mass_is_one(self, binary_degraded):
        book = build_codebook(binary_degraded, 3, 2, 2, 1, 2, 1,
                              ([0.5, 0.5], [1.0]), seed=6)
        joint = equivocation_joint(book, binary_degraded, "user2_about_W1")
        assert abs(joint.prob.sum() - 1.0) <= 1e-9
        assert joint.variables == ("W0", "W1", "W2", "X2", "Y2")

    def test_mirror_case_swaps_the_roles(self, clean_mac):
        book = build_codebook(clean_mac, 2, 1, 2, 2, 1, 1,
                              UNIFORM_PAIR, seed=9)
        joint = equivocation_joint(book, clean_mac, "user1_about_W2")
        assert joint.variables == ("W0", "W2", "W1", "X1", "Y1")

    def test_unknown_case(self, binary_degraded):
        book = build_codebook(binary_degraded, 2, 1, 2, 1, 1, 1,
                              ([0.5, 0.5], [1.0]), seed=0)
        with pytest.raises(ValueError):
            exact_equivocation(book, binary_degraded, "warden_about_W1")

    def test_more_binning_raises_the_equivocation(self):
        channel = fx.binary_degraded(flip_main=0.0, flip_extra=0.1)
        means = []
        for j1 in (1, 2, 4):
            _, agg = simulate(channel, 4, 1, 2, 1, j1, 1,
                              ([0.5, 0.5], [1.0]), seeds=range(20))
            means.append(agg["equivocation_user2"])
        assert means[0] < means[1] < means[2]


class TestSimReport:
    def test_bound_violation_is_an_internal_error(self):
        with pytest.raises(InternalError):
            SimReport(seed=0, error_probability=1.5, equivocation_user2=0.0,
                      equivocation_user1=0.0, rates=(0.0, 1.0, 0.0))
        with pytest.raises(InternalError):
            SimReport(seed=0, error_probability=0.1, equivocation_user2=0.7,
                      equivocation_user1=0.0, rates=(0.0, 0.5, 0.0))

    def test_to_dict_is_json_friendly(self, binary_degraded):
        import json

        reports, agg = simulate(binary_degraded, 2, 1, 2, 1, 1, 1,
                                ([0.5, 0.5], [1.0]), seeds=[0])
        json.dumps([r.to_dict() for r in reports])
        json.dumps(agg)


class TestSimulate:
    def test_aggregate_is_the_mean_of_reports(self, binary_degraded):
        reports, agg = simulate(binary_degraded, 3, 1, 2, 1, 2, 1,
                                ([0.5, 0.5], [1.0]), seeds=[1, 2, 3])
        assert agg["seed_count"] == 3
        assert agg["error_probability"] == pytest.approx(
            np.mean([r.error_probability for r in reports]), abs=1e-15)
        assert agg["equivocation_user2"] == pytest.approx(
            np.mean([r.equivocation_user2 for r in reports]), abs=1e-15)
        assert [r.seed for r in reports] == [1, 2, 3]

    def test_empty_seed_list_rejected(self, binary_degraded):
        with pytest.raises(ValueError):
            simulate(binary_degraded, 2, 1, 2, 1, 1, 1,
                     ([0.5, 0.5], [1.0]), seeds=[])
