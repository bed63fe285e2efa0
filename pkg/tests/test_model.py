"""Model layer: hyperparameters, tables, sampling, inference, fitting."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_vocab, random_corpus, random_document
from ibtm.corpus import Document
from ibtm.errors import DataError, NumericError
from ibtm.model import (
    Hyperparameters,
    ModelParameters,
    DocumentPosterior,
    e_step,
    elbo,
    fit,
    initial_model,
    sample_document,
)


def clamped_model(hyper, rows_per_view, private_rows=None):
    """Model whose tables are taken as exact word distributions."""
    vocab = make_vocab([np.shape(r)[1] for r in rows_per_view])
    if private_rows is None:
        private_rows = [
            np.full((hyper.private_topics[v], vocab.size(v)), 1.0 / vocab.size(v))
            for v in range(hyper.n_views)
        ]
    return ModelParameters(
        hyper=hyper,
        vocab=vocab,
        topic_word=[np.asarray(r, dtype=np.float64) for r in rows_per_view],
        private_topic_word=private_rows,
        clamped=True,
    )


class TestHyperparameters:
    def test_defaults_and_views(self):
        hyper = Hyperparameters(n_topics=4, private_topics=(1, 2, 3))
        assert hyper.n_views == 3
        assert hyper.alpha_shared == 0.6 and hyper.iota == (5.0, 5.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n_topics": 0, "private_topics": (1,)},
            {"n_topics": 2, "private_topics": ()},
            {"n_topics": 2, "private_topics": (-1,)},
            {"n_topics": 2, "private_topics": (1,), "alpha_shared": 0.0},
            {"n_topics": 2, "private_topics": (1,), "sigma_private": -2.0},
            {"n_topics": 2, "private_topics": (1,), "iota": (1.0, float("inf"))},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            Hyperparameters(**kwargs)

    def test_dict_roundtrip(self):
        hyper = Hyperparameters(n_topics=3, private_topics=(0, 2), iota=(2.0, 7.5))
        assert Hyperparameters.from_dict(hyper.to_dict()) == hyper

    def test_restrict_keeps_selected_views(self):
        hyper = Hyperparameters(n_topics=3, private_topics=(1, 2, 4))
        assert hyper.restrict([2, 0]).private_topics == (4, 1)


class TestModelParameters:
    def test_beta_bar_rowsums(self, small_fit):
        _, _, model, _, _ = small_fit
        for table in model.beta_bar + model.zeta_bar:
            if table.size:
                assert np.allclose(table.sum(axis=1), 1.0)

    def test_shape_validation(self):
        hyper = Hyperparameters(n_topics=2, private_topics=(1,))
        with pytest.raises(ValueError, match="wrong shape"):
            ModelParameters(
                hyper=hyper,
                vocab=make_vocab([4]),
                topic_word=[np.ones((3, 4))],
                private_topic_word=[np.ones((1, 4))],
            )

    def test_variational_tables_must_be_positive(self):
        hyper = Hyperparameters(n_topics=1, private_topics=(0,))
        with pytest.raises(ValueError, match="strictly positive"):
            ModelParameters(
                hyper=hyper,
                vocab=make_vocab([2]),
                topic_word=[np.array([[1.0, 0.0]])],
                private_topic_word=[np.zeros((0, 2))],
            )

    def test_clamped_rows_allow_zeros_but_not_negatives(self):
        hyper = Hyperparameters(n_topics=1, private_topics=(0,))
        ModelParameters(
            hyper=hyper,
            vocab=make_vocab([2]),
            topic_word=[np.array([[1.0, 0.0]])],
            private_topic_word=[np.zeros((0, 2))],
            clamped=True,
        )
        with pytest.raises(ValueError, match="invalid row"):
            ModelParameters(
                hyper=hyper,
                vocab=make_vocab([2]),
                topic_word=[np.array([[1.0, -0.5]])],
                private_topic_word=[np.zeros((0, 2))],
                clamped=True,
            )

    def test_expected_log_tables_pads_with_neg_inf(self):
        hyper = Hyperparameters(n_topics=2, private_topics=(1, 0))
        model = initial_model(make_vocab([3, 5]), hyper, seed=0)
        elog_shared, elog_private = model.expected_log_tables()
        assert elog_shared.shape == (2, 2, 5)
        assert np.all(elog_shared[0, :, 3:] == -np.inf)
        assert np.all(np.isfinite(elog_shared[1]))
        assert elog_private.shape == (2, 1, 5)
        assert np.all(elog_private[1] == -np.inf)

    def test_clamped_expected_logs_are_plain_logs(self):
        hyper = Hyperparameters(n_topics=1, private_topics=(0,))
        model = clamped_model(hyper, [np.array([[0.25, 0.75]])])
        elog_shared, _ = model.expected_log_tables()
        assert np.allclose(elog_shared[0, 0], np.log([0.25, 0.75]))

    def test_restrict(self, small_fit):
        _, _, model, _, _ = small_fit
        part = model.restrict([2])
        assert part.n_views == 1
        assert np.array_equal(part.topic_word[0], model.topic_word[2])
        assert part.vocab.views[0] == model.vocab.views[2]

    def test_save_load_roundtrip(self, small_fit, tmp_path):
        _, _, model, _, _ = small_fit
        path = tmp_path / "model.json"
        model.save(path)
        loaded = ModelParameters.load(path)
        assert loaded.hyper == model.hyper
        assert loaded.vocab == model.vocab
        assert loaded.clamped == model.clamped
        assert loaded.seed == model.seed
        assert loaded.elbo_history == model.elbo_history
        for a, b in zip(loaded.topic_word + loaded.private_topic_word,
                        model.topic_word + model.private_topic_word):
            assert np.array_equal(a, b)

    def test_load_rejects_non_json(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text("not json")
        with pytest.raises(DataError, match="not valid JSON"):
            ModelParameters.load(path)

    def test_load_rejects_missing_fields(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text('{"hyper": {"n_topics": 1}}')
        with pytest.raises(DataError, match="malformed"):
            ModelParameters.load(path)


class TestInitialModel:
    def test_deterministic_in_seed(self):
        hyper = Hyperparameters(n_topics=3, private_topics=(1, 2))
        vocab = make_vocab([5, 4])
        a = initial_model(vocab, hyper, seed=12)
        b = initial_model(vocab, hyper, seed=12)
        c = initial_model(vocab, hyper, seed=13)
        for v in range(2):
            assert np.array_equal(a.topic_word[v], b.topic_word[v])
            assert not np.array_equal(a.topic_word[v], c.topic_word[v])

    def test_jitter_stays_within_a_factor_of_two(self):
        hyper = Hyperparameters(n_topics=4, private_topics=(2,), sigma_shared=0.05)
        model = initial_model(make_vocab([30]), hyper, seed=0)
        table = model.topic_word[0]
        assert np.all(table >= 0.05) and np.all(table < 0.1)
        # Rows must not start identical, or coordinate ascent cannot split them.
        assert np.abs(table[0] - table[1]).max() > 1e-4


class TestSampleDocument:
    def hyper(self):
        return Hyperparameters(n_topics=3, private_topics=(2, 0), alpha_shared=0.5)

    def model(self):
        rng = np.random.default_rng(8)
        hyper = self.hyper()
        return clamped_model(
            hyper,
            [rng.dirichlet(np.ones(6), size=3), rng.dirichlet(np.ones(4), size=3)],
            private_rows=[rng.dirichlet(np.ones(6), size=2), np.zeros((0, 4))],
        )

    def test_shapes_and_ranges(self):
        doc, trace = sample_document(self.hyper(), self.model(), (7, 5), np.random.default_rng(1))
        assert [t.size for t in doc.tokens] == [7, 5]
        assert doc.tokens[0].max() < 6 and doc.tokens[1].max() < 4
        assert np.isclose(trace.theta.sum(), 1.0)
        assert trace.assignments[0].shape == (7, 2)
        for v, tv in enumerate((2, 0)):
            shared = trace.assignments[v][:, 0].astype(bool)
            topics = trace.assignments[v][:, 1]
            assert np.all(topics[shared] < 3)
            if tv:
                assert np.all(topics[~shared] < tv)

    def test_views_without_private_topics_stay_shared(self):
        doc, trace = sample_document(self.hyper(), self.model(), (0, 9), np.random.default_rng(2))
        assert doc.tokens[0].size == 0
        assert trace.rho[1] == 1.0
        assert np.all(trace.assignments[1][:, 0] == 1)

    def test_deterministic_given_generator_state(self):
        a, _ = sample_document(self.hyper(), self.model(), (5, 5), np.random.default_rng(42))
        b, _ = sample_document(self.hyper(), self.model(), (5, 5), np.random.default_rng(42))
        assert a == b

    def test_rejects_bad_lengths(self):
        with pytest.raises(ValueError):
            sample_document(self.hyper(), self.model(), (5,), np.random.default_rng(0))
        with pytest.raises(ValueError):
            sample_document(self.hyper(), self.model(), (5, -1), np.random.default_rng(0))

    def test_token_frequencies_follow_the_table(self):
        hyper = Hyperparameters(n_topics=1, private_topics=(0,))
        model = clamped_model(hyper, [np.array([[0.25, 0.75]])])
        rng = np.random.default_rng(0)
        counts = np.zeros(2)
        for _ in range(400):
            doc, _ = sample_document(hyper, model, (10,), rng)
            np.add.at(counts, doc.tokens[0], 1.0)
        freq = counts / counts.sum()
        se = np.sqrt(0.25 * 0.75 / 4000)
        assert abs(freq[0] - 0.25) < 4 * se


class TestEStep:
    def test_single_topic_posterior_is_exact(self):
        hyper = Hyperparameters(n_topics=1, private_topics=(0,), alpha_shared=0.7)
        model = clamped_model(hyper, [np.array([[0.5, 0.5]])])
        doc = Document(tokens=[np.array([0, 1, 1, 0, 1])])
        post = e_step(doc, model)
        assert np.array_equal(post.phi[0], np.ones((5, 1)))
        assert np.allclose(post.gamma, [0.7 + 5.0])
        assert post.lam[0] is None and post.gamma_private[0].size == 0

    def test_indistinguishable_topics_split_evenly(self):
        hyper = Hyperparameters(n_topics=2, private_topics=(0,), alpha_shared=0.4)
        row = np.array([0.3, 0.7])
        model = clamped_model(hyper, [np.stack([row, row])])
        doc = Document(tokens=[np.array([0, 1, 1])])
        post = e_step(doc, model)
        assert np.allclose(post.phi[0], 0.5, atol=1e-12)
        assert np.allclose(post.gamma, 0.4 + 1.5, atol=1e-12)

    def test_switch_factor_counts_all_view_tokens(self):
        rng = np.random.default_rng(3)
        hyper = Hyperparameters(n_topics=2, private_topics=(2, 1), iota=(4.0, 2.5))
        model = clamped_model(
            hyper,
            [rng.dirichlet(np.ones(5), size=2), rng.dirichlet(np.ones(6), size=2)],
            private_rows=[rng.dirichlet(np.ones(5), size=2), rng.dirichlet(np.ones(6), size=1)],
        )
        doc = random_document(rng, (5, 6), (4, 7))
        post = e_step(doc, model)
        for v, n_v in ((0, 4), (1, 7)):
            assert post.lam[v][0] + post.lam[v][1] == pytest.approx(4.0 + 2.5 + n_v, abs=1e-9)
        shared_mass = sum(p[:, :2].sum() for p in post.phi)
        assert post.gamma.sum() == pytest.approx(2 * 0.6 + shared_mass, abs=1e-9)
        assert post.theta_mean.sum() == pytest.approx(1.0)

    def test_empty_view_leaves_prior_factors(self):
        rng = np.random.default_rng(4)
        hyper = Hyperparameters(n_topics=2, private_topics=(1, 1), iota=(3.0, 2.0))
        model = clamped_model(
            hyper,
            [rng.dirichlet(np.ones(4), size=2), rng.dirichlet(np.ones(4), size=2)],
            private_rows=[rng.dirichlet(np.ones(4), size=1), rng.dirichlet(np.ones(4), size=1)],
        )
        doc = Document(tokens=[np.zeros(0, dtype=np.int64), np.array([1, 2])])
        post = e_step(doc, model)
        assert post.lam[0] == (3.0, 2.0)
        assert np.allclose(post.gamma_private[0], hyper.alpha_private)
        assert post.phi[0].shape == (0, 3)

    def test_topic_permutation_equivariance(self):
        rng = np.random.default_rng(9)
        hyper = Hyperparameters(n_topics=3, private_topics=(0,))
        rows = rng.dirichlet(np.ones(8), size=3)
        doc = random_document(rng, (8,), (12,))
        perm = [2, 0, 1]
        base = e_step(doc, clamped_model(hyper, [rows]))
        shuffled = e_step(doc, clamped_model(hyper, [rows[perm]]))
        assert np.allclose(shuffled.gamma, base.gamma[perm], atol=1e-9)
        assert np.allclose(shuffled.phi[0], base.phi[0][:, perm], atol=1e-9)

    def test_rejects_empty_document(self):
        hyper = Hyperparameters(n_topics=1, private_topics=(0,))
        model = clamped_model(hyper, [np.array([[1.0]])])
        with pytest.raises(DataError, match="empty in all views"):
            e_step(Document(tokens=[np.zeros(0, dtype=np.int64)]), model)

    def test_rejects_out_of_vocabulary_token(self):
        hyper = Hyperparameters(n_topics=1, private_topics=(0,))
        model = clamped_model(hyper, [np.array([[1.0]])])
        with pytest.raises(DataError, match="out of vocabulary range"):
            e_step(Document(tokens=[np.array([3])]), model)

    def test_impossible_token_raises_numeric_error(self):
        hyper = Hyperparameters(n_topics=1, private_topics=(0,))
        model = clamped_model(hyper, [np.array([[1.0, 0.0]])])
        with pytest.raises(NumericError, match="zero probability"):
            e_step(Document(tokens=[np.array([1])]), model)

    @settings(max_examples=25)
    @given(st.integers(0, 2**32 - 1))
    def test_posterior_identities_hold_on_random_instances(self, seed):
        rng = np.random.default_rng(seed)
        hyper = Hyperparameters(
            n_topics=int(rng.integers(1, 4)),
            private_topics=(int(rng.integers(0, 3)), int(rng.integers(0, 3))),
            alpha_shared=float(rng.uniform(0.2, 2.0)),
            alpha_private=float(rng.uniform(0.2, 2.0)),
            iota=(float(rng.uniform(0.5, 8.0)), float(rng.uniform(0.5, 8.0))),
        )
        sizes = (int(rng.integers(2, 7)), int(rng.integers(2, 7)))
        model = clamped_model(
            hyper,
            [rng.dirichlet(np.ones(s), size=hyper.n_topics) for s in sizes],
            private_rows=[
                rng.dirichlet(np.ones(s), size=t) if t else np.zeros((0, s))
                for s, t in zip(sizes, hyper.private_topics)
            ],
        )
        lengths = (int(rng.integers(1, 6)), int(rng.integers(0, 6)))
        doc = random_document(rng, sizes, lengths)
        post = e_step(doc, model)
        for v in range(2):
            block = post.phi[v]
            if block.size:
                assert np.allclose(block.sum(axis=1), 1.0, atol=1e-12)
            tv = hyper.private_topics[v]
            if tv:
                total = post.lam[v][0] + post.lam[v][1]
                assert total == pytest.approx(sum(hyper.iota) + lengths[v], abs=1e-9)
        assert np.isfinite(post.elbo)
        assert 1 <= post.n_sweeps <= 100


class TestElbo:
    def test_matches_sum_of_document_bounds(self):
        rng = np.random.default_rng(17)
        corpus = random_corpus(rng, (6, 5), n_docs=4, mean_length=6)
        hyper = Hyperparameters(n_topics=2, private_topics=(1, 0))
        model = initial_model(corpus.vocab, hyper, seed=1)
        posteriors = [e_step(doc, model) for doc in corpus.documents]
        total = elbo(corpus, model, posteriors)
        from ibtm.model import _global_prior_term

        expected = _global_prior_term(model) + sum(p.elbo for p in posteriors)
        assert total == pytest.approx(expected, abs=1e-8)

    def test_requires_one_posterior_per_document(self, small_fit):
        corpus, _, model, posteriors, _ = small_fit
        with pytest.raises(ValueError):
            elbo(corpus, model, posteriors[:-1])


class TestFit:
    def test_history_is_nondecreasing(self, small_fit):
        *_, history = small_fit
        diffs = np.diff(history)
        floor = -1e-8 * np.abs(np.asarray(history[:-1]))
        assert np.all(diffs >= floor)

    def test_prefix_replay_is_exact(self):
        rng = np.random.default_rng(30)
        corpus = random_corpus(rng, (7, 6), n_docs=5, mean_length=8)
        hyper = Hyperparameters(n_topics=2, private_topics=(1, 1))
        _, _, short = fit(corpus, hyper, max_sweeps=3, tol=0.0, seed=2)
        _, _, long = fit(corpus, hyper, max_sweeps=6, tol=0.0, seed=2)
        assert short == long[:3]

    def test_zero_private_topics_everywhere(self):
        rng = np.random.default_rng(31)
        corpus = random_corpus(rng, (6, 6), n_docs=4, mean_length=7)
        hyper = Hyperparameters(n_topics=2, private_topics=(0, 0))
        model, posteriors, history = fit(corpus, hyper, max_sweeps=10, seed=0)
        assert all(p.lam == [None, None] for p in posteriors)
        assert model.private_topic_word[0].shape == (0, 6)
        assert np.all(np.diff(history) >= -1e-8 * np.abs(np.asarray(history[:-1])))

    def test_callback_sees_every_sweep(self):
        rng = np.random.default_rng(32)
        corpus = random_corpus(rng, (5,), n_docs=3, mean_length=5)
        hyper = Hyperparameters(n_topics=2, private_topics=(0,))
        calls = []
        _, _, history = fit(
            corpus, hyper, max_sweeps=4, tol=0.0, seed=0,
            callback=lambda sweep, bound: calls.append((sweep, bound)),
        )
        assert [s for s, _ in calls] == [1, 2, 3, 4]
        assert [b for _, b in calls] == history

    def test_restarts_keep_the_best_bound(self):
        rng = np.random.default_rng(33)
        corpus = random_corpus(rng, (8, 6), n_docs=6, mean_length=8)
        hyper = Hyperparameters(n_topics=3, private_topics=(1, 1))
        kwargs = dict(max_sweeps=12, tol=1e-5)
        _, _, best_history = fit(corpus, hyper, seed=11, n_init=3, **kwargs)
        finals = []
        for branch in range(3):
            derived = int(np.random.SeedSequence([11, branch]).generate_state(1)[0])
            finals.append(fit(corpus, hyper, seed=derived, **kwargs)[2][-1])
        assert best_history[-1] == max(finals)

    def test_fit_validation(self):
        rng = np.random.default_rng(34)
        corpus = random_corpus(rng, (5, 5), n_docs=3, mean_length=5)
        hyper = Hyperparameters(n_topics=2, private_topics=(1, 1))
        with pytest.raises(ValueError, match="n_init"):
            fit(corpus, hyper, n_init=0)
        with pytest.raises(ValueError, match="view count"):
            fit(corpus, Hyperparameters(n_topics=2, private_topics=(1,)))
        empty = random_corpus(rng, (5, 5), n_docs=1)
        empty.documents[0].tokens = [np.zeros(0, dtype=np.int64)] * 2
        with pytest.raises(DataError, match="empty in all views"):
            fit(empty, hyper)

    def test_model_records_history_and_seed(self, small_fit):
        _, _, model, _, history = small_fit
        assert model.elbo_history == history
        assert model.seed == 5
