import copy

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sflaqos.objective import MODES, PlanEvaluator, mode_weights
from sflaqos.radio import sample_environment
from sflaqos.sfla import (
    ConfigError,
    JumpRule,
    SflaConfig,
    improve_memeplex,
    init_population,
    jump,
    jump_codes,
    partition,
    run_sfla,
    shuffle,
    sort_population,
)
from sflaqos.trace import Frog

MM = mode_weights("multimedia")


def frog(power, mod, fit=0.0):
    return Frog(np.array(power), np.array(mod), fit)


class TestConfig:
    def test_defaults(self):
        c = SflaConfig()
        assert (c.population_size, c.memeplexes, c.generations) == (100, 10, 2000)
        assert c.iterations_per_memeplex == 10
        assert SflaConfig(population_size=50, memeplexes=15).iterations_per_memeplex == 4
        assert SflaConfig(local_iterations=1).iterations_per_memeplex == 1

    @pytest.mark.parametrize(
        "kw",
        [
            dict(population_size=1),
            dict(memeplexes=0),
            dict(population_size=10, memeplexes=11),
            dict(generations=-1),
            dict(local_iterations=0),
            dict(s_max=0),
            dict(seed=1.5),
            dict(jump_rule="sideways"),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            SflaConfig(**kw)

    def test_rule_parse(self):
        assert SflaConfig(jump_rule="paper").jump_rule is JumpRule.PAPER_ABSOLUTE
        assert JumpRule.parse("Signed_Classic") is JumpRule.SIGNED_CLASSIC


class TestPopulation:
    def test_seeded(self):
        ev = PlanEvaluator(sample_environment(8, 1), MM)
        a = init_population(SflaConfig(seed=4), ev, np.random.default_rng(4))
        b = init_population(SflaConfig(seed=4), ev, np.random.default_rng(4))
        assert all(np.array_equal(x.power, y.power) and np.array_equal(x.modulation, y.modulation) for x, y in zip(a, b))
        assert all(0 <= f.power.min() and f.power.max() <= 93 for f in a)
        assert all(1 <= f.modulation.min() and f.modulation.max() <= 11 for f in a)

    def test_distinct_fitness(self):
        ev = PlanEvaluator(sample_environment(1, 1), MM)
        pop = init_population(SflaConfig(population_size=1000, memeplexes=1), ev, np.random.default_rng(0))
        assert len({f.fitness for f in pop}) >= 2

    def test_cached_fitness(self):
        ev = PlanEvaluator(sample_environment(4, 1), MM)
        for f in init_population(SflaConfig(population_size=20, memeplexes=2), ev, np.random.default_rng(1)):
            assert f.fitness == ev.score(f.power, f.modulation)


class TestPartition:
    def test_interleave(self):
        pop = [frog([i], [1], -i) for i in range(6)]
        groups = partition(sort_population(pop), 2)
        assert [[-f.fitness for f in g] for g in groups] == [[0, 2, 4], [1, 3, 5]]
        assert shuffle(groups) == [pop[i] for i in (0, 2, 4, 1, 3, 5)]

    def test_single(self):
        pop = [frog([i], [1], i) for i in range(5)]
        assert partition(pop, 1) == [pop]

    def test_sort_stable(self):
        pop = [frog([i], [1], f) for i, f in enumerate([0.5, 0.7, 0.5, 0.7])]
        assert [f.power[0] for f in sort_population(pop)] == [1, 3, 0, 2]

    @given(st.lists(st.floats(0, 1), min_size=10, max_size=10))
    def test_best_within_top_m(self, fits):
        pop = sort_population([frog([i], [1], f) for i, f in enumerate(fits)])
        top = {id(f) for f in pop[:3]}
        for g in partition(pop, 3):
            assert id(max(g, key=lambda f: f.fitness)) in top or max(f.fitness for f in g) == pop[2].fitness

    def test_too_many(self):
        with pytest.raises(ConfigError):
            partition([frog([0], [1])], 2)


class TestJump:
    def test_absolute_step(self):
        out = jump_codes([4], [10], np.array([0.5]), JumpRule.PAPER_ABSOLUTE, None, 0, 93)
        assert out.tolist() == [7]

    def test_zero_gap(self):
        for rule in JumpRule:
            out = jump_codes([4, 50], [4, 50], np.array([0.3, 0.9]), rule, None, 0, 93)
            assert out.tolist() == [4, 50]

    def test_absolute_moves_away_and_clamps(self):
        out = jump_codes([90], [10], np.array([1.0]), JumpRule.PAPER_ABSOLUTE, None, 0, 93)
        assert out.tolist() == [93]

    def test_classic_moves_toward(self):
        out = jump_codes([90], [10], np.array([1.0]), JumpRule.SIGNED_CLASSIC, None, 0, 93)
        assert out.tolist() == [10]

    def test_round_half_up(self):
        # 0.5 * 3 = 1.5 -> 2 ; 0.5 * -3 = -1.5 -> -1
        assert jump_codes([0], [3], np.array([0.5]), JumpRule.SIGNED_CLASSIC, None, 0, 93).tolist() == [2]
        assert jump_codes([3], [0], np.array([0.5]), JumpRule.SIGNED_CLASSIC, None, 0, 93).tolist() == [2]

    def test_step_limit(self):
        out = jump_codes([0], [90], np.array([1.0]), JumpRule.SIGNED_CLASSIC, 5, 0, 93)
        assert out.tolist() == [5]

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 8), st.integers(0, 2**32), st.sampled_from(list(JumpRule)), st.sampled_from([None, 3]))
    def test_kernel_matches_reference(self, n, seed, rule, s_max):
        rng = np.random.default_rng(seed)
        w = frog(rng.integers(0, 94, n), rng.integers(1, 12, n))
        g = frog(rng.integers(0, 94, n), rng.integers(1, 12, n))
        config = SflaConfig(jump_rule=rule, s_max=s_max)
        twin = copy.deepcopy(rng)
        p, m = jump(w, g, rng, config)
        r = twin.random(2 * n)
        assert p.tolist() == jump_codes(w.power, g.power, r[:n], rule, s_max, 0, 93).tolist()
        assert m.tolist() == jump_codes(w.modulation, g.modulation, r[n:], rule, s_max, 1, 11).tolist()

    @given(st.integers(0, 93), st.integers(0, 93), st.floats(0, 1))
    def test_classic_stays_between(self, w, g, r):
        out = jump_codes([w], [g], np.array([r]), JumpRule.SIGNED_CLASSIC, None, 0, 93)[0]
        assert min(w, g) <= out <= max(w, g)

    @given(st.integers(0, 93), st.integers(0, 93), st.floats(0, 1))
    def test_absolute_never_decreases(self, w, g, r):
        assert jump_codes([w], [g], np.array([r]), JumpRule.PAPER_ABSOLUTE, None, 0, 93)[0] >= w


class TestImprove:
    def setup_method(self):
        self.ev = PlanEvaluator(sample_environment(4, 3), MM)

    def _frog(self, p, m):
        return Frog(np.array(p), np.array(m), self.ev.score(np.array(p), np.array(m)))

    def test_identical_frogs_trigger_restart(self):
        f = self._frog([10] * 4, [5] * 4)
        mp = [f, f, f]
        out = improve_memeplex(mp, f, self.ev, np.random.default_rng(0), SflaConfig(local_iterations=1))
        assert mp == [f, f, f]
        changed = [g for g in out if not np.array_equal(g.power, f.power) or not np.array_equal(g.modulation, f.modulation)]
        # the last of the tied worst frogs is replaced by a random frog
        assert len(changed) == 1 and out[2] is changed[0]
        assert out[2].fitness == self.ev.score(out[2].power, out[2].modulation)

    def test_size_one(self):
        f = self._frog([10] * 4, [5] * 4)
        out = improve_memeplex([f], f, self.ev, np.random.default_rng(0), SflaConfig(local_iterations=1))
        # the lone frog is both best and worst, so only the random branch can fire
        assert len(out) == 1
        assert not (np.array_equal(out[0].power, f.power) and np.array_equal(out[0].modulation, f.modulation))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.integers(2, 12), st.sampled_from(list(JumpRule)))
    def test_best_never_drops(self, seed, size, rule):
        rng = np.random.default_rng(seed)
        mp = [self._frog(rng.integers(0, 94, 4), rng.integers(1, 12, 4)) for _ in range(size)]
        g = max(mp, key=lambda f: f.fitness)
        out = improve_memeplex(mp, g, self.ev, rng, SflaConfig(local_iterations=1, jump_rule=rule))
        assert max(f.fitness for f in out) >= max(f.fitness for f in mp)
        assert len(out) == len(mp)
        for f in out:
            assert 0 <= f.power.min() and f.power.max() <= 93
            assert 1 <= f.modulation.min() and f.modulation.max() <= 11


class TestRun:
    def test_generations_zero(self):
        trace = run_sfla(SflaConfig(generations=0, seed=1), sample_environment(8, 1), MM)
        assert len(trace.records) == 1
        assert trace.final.best_fitness == trace.best.fitness

    def test_deterministic(self):
        env = sample_environment(8, 2)
        a = run_sfla(SflaConfig(generations=60, seed=5), env, MM)
        b = run_sfla(SflaConfig(generations=60, seed=5), env, MM)
        assert a.fitness_signature() == b.fitness_signature()
        c = run_sfla(SflaConfig(generations=60, seed=6), env, MM)
        assert a.fitness_signature() != c.fitness_signature()

    @pytest.mark.parametrize("mode", MODES)
    @pytest.mark.parametrize("rule", list(JumpRule))
    def test_monotone_and_bounded(self, mode, rule):
        trace = run_sfla(SflaConfig(population_size=30, memeplexes=5, generations=80, jump_rule=rule, seed=3),
                         sample_environment(6, 3), mode_weights(mode))
        f = trace.best_fitness
        assert np.all(np.diff(f) >= 0)
        assert 0 <= f.min() and f.max() <= 1
        assert trace.final.breakdown.fitness == pytest.approx(trace.final.best_fitness)
        assert trace.best.fitness == trace.final.best_fitness

    def test_prefix_consistent(self):
        env = sample_environment(8, 4)
        short = run_sfla(SflaConfig(generations=30, seed=2), env, MM)
        long = run_sfla(SflaConfig(generations=90, seed=2), env, MM)
        assert short.fitness_signature()[:-1] == long.fitness_signature()[:31]

    def test_debug_cache_check(self):
        env = sample_environment(5, 4)
        a = run_sfla(SflaConfig(population_size=20, memeplexes=4, generations=20, seed=1), env, MM, debug=True)
        b = run_sfla(SflaConfig(population_size=20, memeplexes=4, generations=20, seed=1), env, MM)
        assert a.fitness_signature() == b.fitness_signature()

    @pytest.mark.parametrize("size", [10, 30, 100])
    def test_population_size_invariance(self, size):
        # any population size runs and satisfies the trace invariants
        trace = run_sfla(SflaConfig(population_size=size, memeplexes=5, generations=20, seed=0),
                         sample_environment(4, 0), MM)
        assert len(trace.records) == 21
        assert np.all(np.diff(trace.best_fitness) >= 0)

    def test_best_is_reachable(self):
        env = sample_environment(8, 9)
        trace = run_sfla(SflaConfig(generations=50, seed=9), env, MM)
        assert PlanEvaluator(env, MM)(trace.best.plan) == trace.best.fitness
